// pybind11 module nctorus._core: the torus algebra, matrices over it,
// connections and the Yang-Mills functionals, plus the JSON command layer.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <vector>
#include <optional>
#include <string>
#include <tuple>

#include "commands.hpp"
#include "nctorus/clifford.hpp"
#include "nctorus/connection.hpp"
#include "nctorus/errors.hpp"
#include "nctorus/forms.hpp"
#include "nctorus/optimize.hpp"

namespace py = pybind11;
using namespace nctorus;

namespace {

// Python-side handle; the C++ algebra is shared and immutable.
struct Algebra {
  AlgebraPtr ptr;
};

TruncationMode mode_from_string(const std::string& s) {
  if (s == "strict") return TruncationMode::strict;
  if (s == "lossy") return TruncationMode::lossy;
  throw ConfigError("truncation mode must be 'strict' or 'lossy'");
}

py::dict terms_of(const TorusElement& a) {
  py::dict out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto r = a.exponent(i);
    py::tuple key(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) key[k] = r[k];
    out[key] = a.coeff(i);
  }
  return out;
}

TorusElement element_from_terms(const Algebra& alg, const std::map<std::vector<int>, complex>& terms) {
  return TorusElement::from_terms(alg.ptr, {terms.begin(), terms.end()});
}

TorusMatrix matrix_from_rows(const std::vector<std::vector<TorusElement>>& rows) {
  const int q = static_cast<int>(rows.size());
  std::vector<TorusElement> entries;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != q) throw DimensionError("matrix rows must form a square array");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return TorusMatrix(q, std::move(entries));
}

std::vector<std::vector<TorusElement>> matrix_rows(const TorusMatrix& m) {
  std::vector<std::vector<TorusElement>> rows(static_cast<std::size_t>(m.q()));
  for (int r = 0; r < m.q(); ++r)
    for (int c = 0; c < m.q(); ++c) rows[static_cast<std::size_t>(r)].push_back(m(r, c));
  return rows;
}

Connection make_connection(const TorusMatrix& p, const std::string& convention,
                           const std::vector<TorusMatrix>& potentials) {
  return Connection(module_new(p), convention_from_string(convention), potentials);
}

py::dict spectral_dict(const SpectralYangMills& ys) {
  py::dict d;
  d["value"] = ys.value;
  d["basis_column"] = ys.basis_column;
  d["closed_form"] = ys.closed_form;
  d["relative_gap"] = ys.relative_gap;
  return d;
}

py::dict trace_dict(const DescentTrace& t) {
  py::list records;
  for (const auto& r : t.records) {
    py::dict d;
    d["iteration"] = r.iteration;
    d["ym"] = r.ym;
    d["grad_norm"] = r.grad_norm;
    d["step"] = r.step;
    records.append(d);
  }
  py::dict out;
  out["records"] = records;
  out["converged"] = t.converged;
  out["line_search_failed"] = t.line_search_failed;
  out["final_connection"] = t.final_connection ? py::cast(*t.final_connection) : py::none();
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Yang-Mills functionals on the smooth noncommutative torus";
  m.attr("version") = cli::kToolVersion;

  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<ConventionError>(m, "ConventionError", PyExc_ValueError);
  py::register_exception<TruncationOverflow>(m, "TruncationOverflow", PyExc_OverflowError);

  py::class_<Algebra>(m, "Algebra")
      .def(py::init([](int n, std::vector<double> theta, int r_max, const std::string& mode, double eps_drop) {
             TruncationPolicy policy{r_max, mode_from_string(mode), eps_drop};
             return Algebra{TorusAlgebra::make(DeformationMatrix(n, std::move(theta), 1e-12), policy)};
           }),
           py::arg("n"), py::arg("theta"), py::arg("r_max") = 4, py::arg("mode") = "strict",
           py::arg("eps_drop") = 1e-300, "theta is the row-major n x n skew matrix")
      .def_property_readonly("n", [](const Algebra& a) { return a.ptr->dim(); })
      .def_property_readonly("theta", [](const Algebra& a) { return a.ptr->theta().row_major(); })
      .def_property_readonly("r_max", [](const Algebra& a) { return a.ptr->policy().r_max; })
      .def_property_readonly("mode", [](const Algebra& a) {
        return a.ptr->policy().mode == TruncationMode::strict ? "strict" : "lossy";
      });

  py::class_<TorusElement>(m, "Element")
      .def(py::init(&element_from_terms), py::arg("algebra"), py::arg("terms"),
           "terms maps exponent tuples to complex coefficients")
      .def_static("scalar", [](const Algebra& a, complex c) { return TorusElement::scalar(a.ptr, c); })
      .def_static("generator", [](const Algebra& a, int axis) { return TorusElement::generator(a.ptr, axis); })
      .def("terms", &terms_of)
      .def("adjoint", [](const TorusElement& a) { return adjoint(a); })
      .def("tau", &trace_tau)
      .def("l1_norm", [](const TorusElement& a) { return l1_norm(a); })
      .def("delta_tilde", [](const TorusElement& a, int axis) { return delta_tilde(axis, a); })
      .def_property_readonly("truncation_loss", &TorusElement::truncation_loss)
      .def("__add__", [](const TorusElement& a, const TorusElement& b) { return a + b; })
      .def("__sub__", [](const TorusElement& a, const TorusElement& b) { return a - b; })
      .def("__mul__", [](const TorusElement& a, const TorusElement& b) { return a * b; })
      .def("__mul__", [](const TorusElement& a, complex s) { return a * s; })
      .def("__rmul__", [](const TorusElement& a, complex s) { return s * a; })
      .def("__neg__", [](const TorusElement& a) { return -a; })
      .def("__len__", &TorusElement::size);

  py::class_<TorusMatrix>(m, "Matrix")
      .def(py::init(&matrix_from_rows), py::arg("rows"))
      .def_static("identity", [](const Algebra& a, int q) { return TorusMatrix::identity(a.ptr, q); })
      .def_static("zero", [](const Algebra& a, int q) { return TorusMatrix::zero(a.ptr, q); })
      .def_property_readonly("q", &TorusMatrix::q)
      .def("rows", &matrix_rows)
      .def("adjoint", [](const TorusMatrix& a) { return mat_adjoint(a); })
      .def("l1_norm", [](const TorusMatrix& a) { return mat_l1_norm(a); })
      .def("tau_q", [](const TorusMatrix& a) { return tau_q(a); })
      .def("is_projection", [](const TorusMatrix& a, double tol) { return is_projection(a, tol); },
           py::arg("tol") = ProjectiveModule::kProjectionTol)
      .def("__add__", [](const TorusMatrix& a, const TorusMatrix& b) { return a + b; })
      .def("__sub__", [](const TorusMatrix& a, const TorusMatrix& b) { return a - b; })
      .def("__mul__", [](const TorusMatrix& a, const TorusMatrix& b) { return a * b; })
      .def("__rmul__", [](const TorusMatrix& a, complex s) { return s * a; });

  py::class_<Connection>(m, "Connection")
      .def(py::init(&make_connection), py::arg("projection"), py::arg("convention"), py::arg("potentials"))
      .def_property_readonly("convention", [](const Connection& c) { return std::string(to_string(c.convention())); })
      .def_property_readonly("potentials", &Connection::potentials)
      .def_property_readonly("projection", [](const Connection& c) { return c.module()->projection(); })
      .def("curvature", [](const Connection& c) { return curvature(c).components; },
           "F_jk for j < k in the order (0,1), (0,2), ..., (n-2,n-1)")
      .def("compatibility_residual", &check_compatibility, py::arg("samples") = 8, py::arg("seed") = 7);

  m.def("grassmannian", [](const TorusMatrix& p, const std::string& conv) {
    return grassmannian(module_new(p), convention_from_string(conv));
  }, py::arg("projection"), py::arg("convention") = "dynamical");
  m.def("phi_map", &phi_map);
  m.def("phi_inverse", &phi_inverse);
  m.def("ym_dynamical", &ym_dynamical);
  m.def("ym_spectral", [](const Connection& c) { return spectral_dict(ym_spectral(c)); });
  m.def("dixmier_constant", &dixmier_constant);
  m.def("ym_gradient", &ym_gradient);
  m.def("minimize_ym",
        [](const Connection& c, int max_iter, double grad_tol, double armijo_c, double step_init, double step_shrink) {
          DescentParams p;
          p.max_iter = max_iter;
          p.grad_tol = grad_tol;
          p.armijo_c = armijo_c;
          p.step_init = step_init;
          p.step_shrink = step_shrink;
          return trace_dict(minimize_ym(c, p));
        },
        py::arg("connection"), py::arg("max_iter") = 200, py::arg("grad_tol") = 1e-8, py::arg("armijo_c") = 1e-4,
        py::arg("step_init") = 1.0, py::arg("step_shrink") = 0.5);

  m.def("idempotent_to_projection",
        [](const TorusMatrix& p, double tol, int max_iter) {
          auto out = idempotent_to_projection(p, {tol, max_iter});
          py::dict d;
          d["p"] = out.p_tilde;
          d["z"] = out.z;
          d["z_inv"] = out.z_inv;
          d["idempotent_residual"] = out.residuals.idempotent;
          d["self_adjoint_residual"] = out.residuals.self_adjoint;
          d["similarity"] = out.similarity;
          return d;
        },
        py::arg("p"), py::arg("tol") = 1e-10, py::arg("max_iter") = 100);

  m.def("gamma_matrices", [](int n) {
    std::vector<std::vector<std::vector<complex>>> out;
    for (const auto& g : gamma_generate(n).gammas) {
      std::vector<std::vector<complex>> rows(static_cast<std::size_t>(g.rows()));
      for (int r = 0; r < g.rows(); ++r)
        for (int c = 0; c < g.cols(); ++c) rows[static_cast<std::size_t>(r)].push_back(g(r, c));
      out.push_back(std::move(rows));
    }
    return out;
  });

  m.def("run_command",
        [](const std::string& name, const std::string& config, const std::string& out_dir, std::optional<double> tol,
           std::optional<std::uint64_t> seed) {
          cli::CommandResult res;
          {
            py::gil_scoped_release release;
            json cfg;
            try {
              cfg = json::parse(config);
            } catch (const json::exception& e) {
              res = {cli::kConfigError, json{{"error", e.what()}, {"error_kind", "config"}, {"pass", false}}};
            }
            if (res.report.is_null()) res = cli::run_command(name, cfg, {out_dir, tol, seed});
          }
          return std::make_tuple(res.exit_code, res.report.dump(2));
        },
        py::arg("name"), py::arg("config"), py::arg("out_dir") = "", py::arg("tol") = py::none(),
        py::arg("seed") = py::none(), "Runs a command on a JSON config string; returns (exit_code, report_json)");
}
