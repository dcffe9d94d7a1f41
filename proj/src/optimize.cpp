#include "nctorus/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "nctorus/errors.hpp"

namespace nctorus {

void DescentParams::validate() const {
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw ConfigError("armijo_c must lie in (0, 1)");
  if (!(step_shrink > 0.0 && step_shrink < 1.0)) throw ConfigError("step_shrink must lie in (0, 1)");
  if (!(step_init > 0.0)) throw ConfigError("step_init must be positive");
  if (max_iter < 0) throw ConfigError("max_iter must be >= 0");
  if (!(grad_tol >= 0.0)) throw ConfigError("grad_tol must be >= 0");
}

std::vector<TorusMatrix> ym_gradient(const Connection& c) {
  if (c.convention() != Convention::dynamical) throw ConventionError("ym_gradient needs a dynamical connection");
  const auto& m = *c.module();
  const int n = c.dim();
  const CurvatureForm f = curvature(c);

  std::vector<TorusMatrix> grad(static_cast<std::size_t>(n), TorusMatrix::zero(m.algebra(), m.q()));
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      const TorusMatrix& fjk = f.at(j, k);
      grad[k] = grad[k] + mat_scale(2.0, commutator(fjk, c.potential(j)) - derive(Convention::dynamical, j, fjk));
      grad[j] = grad[j] + mat_scale(2.0, derive(Convention::dynamical, k, fjk) - commutator(fjk, c.potential(k)));
    }
  for (auto& g : grad) g = tangent_projection(m, Convention::dynamical, g);
  return grad;
}

double tangent_inner(const std::vector<TorusMatrix>& g, const std::vector<TorusMatrix>& h) {
  if (g.size() != h.size()) throw DimensionError("tangent_inner: size mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) s += tau_q_inner(g[j], h[j]).real();
  return s;
}

Connection step_connection(const Connection& c, const std::vector<TorusMatrix>& direction, double t) {
  const auto& m = *c.module();
  std::vector<TorusMatrix> pots;
  for (int j = 0; j < c.dim(); ++j) {
    const TorusMatrix moved = c.potential(j) + mat_scale(t, direction.at(static_cast<std::size_t>(j)));
    pots.push_back(tangent_projection(m, Convention::dynamical, moved));
  }
  return Connection(c.module(), Convention::dynamical, std::move(pots));
}

DescentTrace minimize_ym(const Connection& start, const DescentParams& params) {
  params.validate();
  if (start.convention() != Convention::dynamical) throw ConventionError("minimize_ym needs a dynamical connection");

  DescentTrace trace;
  Connection current = start;
  double ym = ym_dynamical(current);
  std::vector<TorusMatrix> grad = ym_gradient(current);
  double gnorm2 = tangent_inner(grad, grad);
  trace.records.push_back({0, ym, std::sqrt(gnorm2), 0.0});

  double step = params.step_init;
  for (int it = 1; it <= params.max_iter; ++it) {
    if (std::sqrt(gnorm2) <= params.grad_tol) {
      trace.converged = true;
      break;
    }
    bool accepted = false;
    while (step >= params.min_step) {
      Connection trial = step_connection(current, grad, -step);
      const double trial_ym = ym_dynamical(trial);
      if (trial_ym <= ym - params.armijo_c * step * gnorm2) {
        current = std::move(trial);
        ym = trial_ym;
        accepted = true;
        break;
      }
      step *= params.step_shrink;
    }
    if (!accepted) {
      trace.line_search_failed = true;
      break;
    }
    grad = ym_gradient(current);
    gnorm2 = tangent_inner(grad, grad);
    trace.records.push_back({it, ym, std::sqrt(gnorm2), step});
    // Let the next search start a little more aggressively than the last accepted step.
    step = std::min(params.step_init, step / params.step_shrink);
  }
  if (!trace.converged && !trace.line_search_failed && std::sqrt(gnorm2) <= params.grad_tol) trace.converged = true;
  trace.final_connection = std::move(current);
  return trace;
}

}  // namespace nctorus
