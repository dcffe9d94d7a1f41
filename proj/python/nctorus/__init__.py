"""Yang-Mills functionals on the smooth noncommutative torus."""

import json

from ._core import (
    Algebra,
    ConfigError,
    Connection,
    ConventionError,
    DimensionError,
    Element,
    Matrix,
    NumericalError,
    TruncationOverflow,
    dixmier_constant,
    gamma_matrices,
    grassmannian,
    idempotent_to_projection,
    minimize_ym,
    phi_inverse,
    phi_map,
    version,
    ym_dynamical,
    ym_gradient,
    ym_spectral,
)
from ._core import run_command as _run_command

__version__ = version


def run(command, config, out_dir="", tol=None, seed=None):
    """Run a CLI command on a config dict. Returns (exit_code, report dict)."""
    code, report = _run_command(command, json.dumps(config), out_dir, tol, seed)
    return code, json.loads(report)


__all__ = [
    "Algebra",
    "ConfigError",
    "Connection",
    "ConventionError",
    "DimensionError",
    "Element",
    "Matrix",
    "NumericalError",
    "TruncationOverflow",
    "dixmier_constant",
    "gamma_matrices",
    "grassmannian",
    "idempotent_to_projection",
    "minimize_ym",
    "phi_inverse",
    "phi_map",
    "run",
    "ym_dynamical",
    "ym_gradient",
    "ym_spectral",
]
