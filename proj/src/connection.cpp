#include "nctorus/connection.hpp"

#include <algorithm>
#include <string>

#include "nctorus/errors.hpp"

namespace nctorus {

const char* to_string(Convention c) noexcept { return c == Convention::dynamical ? "dynamical" : "spectral"; }

// ---------------------------------------------------------------------------
// ProjectiveModule

ProjectiveModule::ProjectiveModule(TorusMatrix p) : p_(std::move(p)) {
  if (!is_projection(p_, kProjectionTol, &residuals_))
    throw NumericalError("module_new: p is not a projection (|p^2-p| = " + format_residual(residuals_.idempotent) +
                             ", |p*-p| = " + format_residual(residuals_.self_adjoint) + ")",
                         std::max(residuals_.idempotent, residuals_.self_adjoint));
}

ProjectiveModule ProjectiveModule::free(AlgebraPtr alg, int q) {
  return ProjectiveModule(TorusMatrix::identity(std::move(alg), q));
}

double ProjectiveModule::distance_from_module(const ModuleVector& v) const {
  return vec_l1_norm(vec_sub(project(v), v));
}

ModulePtr module_new(TorusMatrix p) { return std::make_shared<const ProjectiveModule>(std::move(p)); }

TorusElement hermitian_pairing(const ProjectiveModule& m, const ModuleVector& xi, const ModuleVector& eta,
                               double tol) {
  const double dx = m.distance_from_module(xi);
  const double de = m.distance_from_module(eta);
  if (dx > tol || de > tol)
    throw DimensionError("hermitian_pairing: vector lies outside the module (distance " +
                         format_residual(std::max(dx, de)) + ")");
  return canonical_pairing(xi, eta);
}

TorusElement derive(Convention conv, int axis, const TorusElement& a) {
  return conv == Convention::dynamical ? delta_tilde(axis, a) : delta(axis, a);
}

TorusMatrix derive(Convention conv, int axis, const TorusMatrix& m) {
  return m.map([=](const TorusElement& e) { return derive(conv, axis, e); });
}

ModuleVector derive(Convention conv, int axis, const ModuleVector& v) {
  return v.map([=](const TorusElement& e) { return derive(conv, axis, e); });
}

// ---------------------------------------------------------------------------
// Connection

PotentialResiduals potential_residuals(const ProjectiveModule& m, Convention conv, const TorusMatrix& a) {
  const TorusMatrix a_adj = mat_adjoint(a);
  PotentialResiduals res;
  res.symmetry = mat_l1_norm(conv == Convention::dynamical ? a_adj + a : a_adj - a);
  res.compression = mat_l1_norm(m.compress(a) - a);
  return res;
}

Connection::Connection(ModulePtr module, Convention convention, std::vector<TorusMatrix> potentials, NoValidation)
    : module_(std::move(module)), convention_(convention), potentials_(std::move(potentials)) {
  if (!module_) throw DimensionError("Connection needs a module");
  if (static_cast<int>(potentials_.size()) != module_->dim())
    throw DimensionError("Connection needs one potential per torus axis");
  for (const auto& a : potentials_) {
    if (a.q() != module_->q()) throw DimensionError("potential size does not match the module");
    check_same_algebra(a(0, 0), module_->projection()(0, 0));
  }
}

Connection::Connection(ModulePtr module, Convention convention, std::vector<TorusMatrix> potentials)
    : Connection(std::move(module), convention, std::move(potentials), NoValidation{}) {
  for (std::size_t j = 0; j < potentials_.size(); ++j) {
    PotentialResiduals res = potential_residuals(*module_, convention_, potentials_[j]);
    if (res.symmetry > kInvariantTol)
      throw NumericalError(std::string("potential ") + std::to_string(j) + " is not " +
                               (convention_ == Convention::dynamical ? "skew-adjoint" : "self-adjoint"),
                           res.symmetry);
    if (res.compression > kInvariantTol)
      throw NumericalError("potential " + std::to_string(j) + " is not p-compressed", res.compression);
  }
}

Connection Connection::unchecked(ModulePtr module, Convention convention, std::vector<TorusMatrix> potentials) {
  return Connection(std::move(module), convention, std::move(potentials), NoValidation{});
}

Connection grassmannian(ModulePtr module, Convention convention) {
  std::vector<TorusMatrix> zeros(static_cast<std::size_t>(module->dim()),
                                 TorusMatrix::zero(module->algebra(), module->q()));
  return Connection(std::move(module), convention, std::move(zeros));
}

ModuleVector connection_apply(const Connection& c, int axis, const ModuleVector& xi) {
  if (axis < 0 || axis >= c.dim()) throw DimensionError("connection axis out of range");
  const auto& m = *c.module();
  return vec_add(m.project(derive(c.convention(), axis, xi)), mat_apply(c.potential(axis), xi));
}

double check_compatibility(const Connection& c, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto& m = *c.module();
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const ModuleVector xi = random_module_vector(m, 1, 1.0, rng);
    const ModuleVector eta = random_module_vector(m, 1, 1.0, rng);
    const TorusElement pair = canonical_pairing(xi, eta);
    for (int j = 0; j < c.dim(); ++j) {
      const ModuleVector nxi = connection_apply(c, j, xi);
      const ModuleVector neta = connection_apply(c, j, eta);
      TorusElement residual = c.convention() == Convention::dynamical
                                  ? canonical_pairing(nxi, eta) + canonical_pairing(xi, neta) -
                                        delta_tilde(j, pair)
                                  : canonical_pairing(xi, neta) - canonical_pairing(nxi, eta) - delta(j, pair);
      worst = std::max(worst, l1_norm(residual));
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Curvature

int pair_index(int j, int k, int n) {
  if (j < 0 || k <= j || k >= n) throw DimensionError("pair_index expects 0 <= j < k < n");
  // pairs (a, b) with a < j come first: sum_{a<j} (n - 1 - a)
  return j * (2 * n - j - 1) / 2 + (k - j - 1);
}

const TorusMatrix& CurvatureForm::at(int j, int k) const {
  return components.at(static_cast<std::size_t>(pair_index(j, k, n)));
}

ModuleVector curvature_apply(const Connection& c, int j, int k, const ModuleVector& xi) {
  const ModuleVector jk = connection_apply(c, j, connection_apply(c, k, xi));
  const ModuleVector kj = connection_apply(c, k, connection_apply(c, j, xi));
  return vec_sub(jk, kj);
}

CurvatureForm curvature(const Connection& c) {
  const auto& m = *c.module();
  const int n = c.dim();
  CurvatureForm out{n, {}};
  std::vector<ModuleVector> frame;
  for (int col = 0; col < m.q(); ++col) frame.push_back(column_vector(m.projection(), col));
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      std::vector<ModuleVector> cols;
      cols.reserve(frame.size());
      for (const auto& e : frame) cols.push_back(curvature_apply(c, j, k, e));
      out.components.push_back(from_columns(cols));
    }
  return out;
}

CurvatureForm curvature_closed_form(const Connection& c) {
  const auto& m = *c.module();
  const auto& p = m.projection();
  const Convention conv = c.convention();
  const int n = c.dim();
  std::vector<TorusMatrix> dp;
  for (int j = 0; j < n; ++j) dp.push_back(derive(conv, j, p));

  CurvatureForm out{n, {}};
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      const TorusMatrix grass = m.compress(commutator(dp[j], dp[k]));
      const TorusMatrix dA = m.compress(derive(conv, j, c.potential(k)) - derive(conv, k, c.potential(j)));
      out.components.push_back(grass + dA + commutator(c.potential(j), c.potential(k)));
    }
  return out;
}

double ym_dynamical(const Connection& c) {
  if (c.convention() != Convention::dynamical) throw ConventionError("ym_dynamical needs a dynamical connection");
  const CurvatureForm f = curvature(c);
  double total = 0.0;
  for (const auto& fjk : f.components) total += tau_q_inner(fjk, fjk).real();
  return total;
}

Connection phi_map(const Connection& c) {
  if (c.convention() != Convention::dynamical) throw ConventionError("phi_map needs a dynamical connection");
  std::vector<TorusMatrix> pots;
  for (const auto& a : c.potentials()) pots.push_back(mat_scale(complex(0.0, -1.0), a));
  return Connection(c.module(), Convention::spectral, std::move(pots));
}

Connection phi_inverse(const Connection& c) {
  if (c.convention() != Convention::spectral) throw ConventionError("phi_inverse needs a spectral connection");
  std::vector<TorusMatrix> pots;
  for (const auto& a : c.potentials()) pots.push_back(mat_scale(complex(0.0, 1.0), a));
  return Connection(c.module(), Convention::dynamical, std::move(pots));
}

// ---------------------------------------------------------------------------
// Random helpers

TorusElement random_element(const AlgebraPtr& alg, int radius, double scale, std::mt19937_64& rng) {
  const int n = alg->dim();
  std::uniform_real_distribution<double> unif(-scale, scale);
  std::vector<std::pair<Exponent, complex>> terms;
  Exponent r(static_cast<std::size_t>(n), -radius);
  while (true) {
    double re = unif(rng);
    double im = unif(rng);
    terms.emplace_back(r, complex(re, im));
    int k = n - 1;
    while (k >= 0 && r[k] == radius) r[k--] = -radius;
    if (k < 0) break;
    ++r[k];
  }
  return TorusElement::from_terms(alg, terms);
}

TorusMatrix random_matrix(const AlgebraPtr& alg, int q, int radius, double scale, std::mt19937_64& rng) {
  TorusMatrix m(alg, q);
  for (int r = 0; r < q; ++r)
    for (int c = 0; c < q; ++c) m(r, c) = random_element(alg, radius, scale, rng);
  return m;
}

ModuleVector random_module_vector(const ProjectiveModule& m, int radius, double scale, std::mt19937_64& rng) {
  ModuleVector v(m.algebra(), m.q());
  for (int k = 0; k < m.q(); ++k) v[k] = random_element(m.algebra(), radius, scale, rng);
  return m.project(v);
}

TorusMatrix tangent_projection(const ProjectiveModule& m, Convention conv, const TorusMatrix& b) {
  const TorusMatrix b_adj = mat_adjoint(b);
  const TorusMatrix sym = conv == Convention::dynamical ? b - b_adj : b + b_adj;
  return m.compress(mat_scale(0.5, sym));
}

std::vector<TorusMatrix> random_potentials(const ProjectiveModule& m, Convention conv, int radius, double scale,
                                           std::mt19937_64& rng) {
  std::vector<TorusMatrix> out;
  for (int j = 0; j < m.dim(); ++j)
    out.push_back(tangent_projection(m, conv, random_matrix(m.algebra(), m.q(), radius, scale, rng)));
  return out;
}

}  // namespace nctorus
