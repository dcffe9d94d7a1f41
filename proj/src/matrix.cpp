#include "nctorus/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nctorus/errors.hpp"

namespace nctorus {

// ---------------------------------------------------------------------------
// TorusMatrix / ModuleVector

TorusMatrix::TorusMatrix(AlgebraPtr alg, int q) : alg_(std::move(alg)), q_(q) {
  if (q < 1) throw DimensionError("TorusMatrix needs q >= 1");
  entries_.assign(static_cast<std::size_t>(q) * q, TorusElement::zero(alg_));
}

TorusMatrix::TorusMatrix(int q, std::vector<TorusElement> entries) : q_(q), entries_(std::move(entries)) {
  if (q < 1) throw DimensionError("TorusMatrix needs q >= 1");
  if (entries_.size() != static_cast<std::size_t>(q) * q)
    throw DimensionError("TorusMatrix expects q*q entries");
  alg_ = entries_.front().algebra();
  for (const auto& e : entries_) check_same_algebra(entries_.front(), e);
}

TorusMatrix TorusMatrix::identity(AlgebraPtr alg, int q) {
  TorusMatrix m(alg, q);
  for (int i = 0; i < q; ++i) m(i, i) = TorusElement::scalar(alg, 1.0);
  return m;
}

TorusMatrix TorusMatrix::diagonal(const std::vector<TorusElement>& diag) {
  if (diag.empty()) throw DimensionError("diagonal needs at least one entry");
  const int q = static_cast<int>(diag.size());
  TorusMatrix m(diag.front().algebra(), q);
  for (int i = 0; i < q; ++i) {
    check_same_algebra(diag.front(), diag[i]);
    m(i, i) = diag[i];
  }
  return m;
}

TorusMatrix TorusMatrix::constant(AlgebraPtr alg, const std::vector<std::vector<complex>>& values) {
  const int q = static_cast<int>(values.size());
  TorusMatrix m(alg, q);
  for (int r = 0; r < q; ++r) {
    if (static_cast<int>(values[r].size()) != q) throw DimensionError("constant matrix must be square");
    for (int c = 0; c < q; ++c) m(r, c) = TorusElement::scalar(alg, values[r][c]);
  }
  return m;
}

int TorusMatrix::support_radius() const noexcept {
  int rad = 0;
  for (const auto& e : entries_) rad = std::max(rad, e.support_radius());
  return rad;
}

double TorusMatrix::max_truncation_loss() const noexcept {
  double loss = 0.0;
  for (const auto& e : entries_) loss = std::max(loss, e.truncation_loss());
  return loss;
}

TorusMatrix TorusMatrix::map(const std::function<TorusElement(const TorusElement&)>& f) const {
  std::vector<TorusElement> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(f(e));
  return TorusMatrix(q_, std::move(out));
}

ModuleVector::ModuleVector(AlgebraPtr alg, int q) : alg_(std::move(alg)) {
  if (q < 1) throw DimensionError("ModuleVector needs q >= 1");
  comp_.assign(static_cast<std::size_t>(q), TorusElement::zero(alg_));
}

ModuleVector::ModuleVector(std::vector<TorusElement> components) : comp_(std::move(components)) {
  if (comp_.empty()) throw DimensionError("ModuleVector needs q >= 1");
  alg_ = comp_.front().algebra();
  for (const auto& e : comp_) check_same_algebra(comp_.front(), e);
}

ModuleVector ModuleVector::basis(AlgebraPtr alg, int q, int k) {
  if (k < 0 || k >= q) throw DimensionError("basis index out of range");
  ModuleVector v(alg, q);
  v[k] = TorusElement::scalar(alg, 1.0);
  return v;
}

ModuleVector ModuleVector::map(const std::function<TorusElement(const TorusElement&)>& f) const {
  std::vector<TorusElement> out;
  out.reserve(comp_.size());
  for (const auto& e : comp_) out.push_back(f(e));
  return ModuleVector(std::move(out));
}

// ---------------------------------------------------------------------------
// Arithmetic

namespace {

void check_shapes(const TorusMatrix& a, const TorusMatrix& b) {
  if (a.q() != b.q()) throw DimensionError("matrix size mismatch");
  check_same_algebra(a(0, 0), b(0, 0));
}

TorusElement sum_of_products(const std::vector<std::pair<complex, TorusElement>>& products) {
  return linear_combine(std::span<const std::pair<complex, TorusElement>>(products));
}

}  // namespace

TorusMatrix mat_mul(const TorusMatrix& a, const TorusMatrix& b) {
  check_shapes(a, b);
  const int q = a.q();
  TorusMatrix out(a.algebra(), q);
  std::vector<std::pair<complex, TorusElement>> terms;
  for (int r = 0; r < q; ++r)
    for (int c = 0; c < q; ++c) {
      terms.clear();
      for (int k = 0; k < q; ++k) terms.emplace_back(1.0, mul(a(r, k), b(k, c)));
      out(r, c) = sum_of_products(terms);
    }
  return out;
}

TorusMatrix mat_add(const TorusMatrix& a, const TorusMatrix& b) {
  check_shapes(a, b);
  TorusMatrix out(a.algebra(), a.q());
  for (int r = 0; r < a.q(); ++r)
    for (int c = 0; c < a.q(); ++c) out(r, c) = a(r, c) + b(r, c);
  return out;
}

TorusMatrix mat_sub(const TorusMatrix& a, const TorusMatrix& b) {
  check_shapes(a, b);
  TorusMatrix out(a.algebra(), a.q());
  for (int r = 0; r < a.q(); ++r)
    for (int c = 0; c < a.q(); ++c) out(r, c) = a(r, c) - b(r, c);
  return out;
}

TorusMatrix mat_scale(complex s, const TorusMatrix& a) {
  return a.map([s](const TorusElement& e) { return s * e; });
}

TorusMatrix mat_adjoint(const TorusMatrix& a) {
  TorusMatrix out(a.algebra(), a.q());
  for (int r = 0; r < a.q(); ++r)
    for (int c = 0; c < a.q(); ++c) out(c, r) = adjoint(a(r, c));
  return out;
}

TorusMatrix commutator(const TorusMatrix& a, const TorusMatrix& b) { return mat_mul(a, b) - mat_mul(b, a); }

ModuleVector mat_apply(const TorusMatrix& a, const ModuleVector& v) {
  if (a.q() != v.q()) throw DimensionError("matrix/vector size mismatch");
  check_same_algebra(a(0, 0), v[0]);
  ModuleVector out(a.algebra(), a.q());
  std::vector<std::pair<complex, TorusElement>> terms;
  for (int r = 0; r < a.q(); ++r) {
    terms.clear();
    for (int k = 0; k < a.q(); ++k) terms.emplace_back(1.0, mul(a(r, k), v[k]));
    out[r] = sum_of_products(terms);
  }
  return out;
}

ModuleVector vec_add(const ModuleVector& a, const ModuleVector& b) {
  if (a.q() != b.q()) throw DimensionError("vector size mismatch");
  ModuleVector out(a.algebra(), a.q());
  for (int k = 0; k < a.q(); ++k) out[k] = a[k] + b[k];
  return out;
}

ModuleVector vec_sub(const ModuleVector& a, const ModuleVector& b) {
  if (a.q() != b.q()) throw DimensionError("vector size mismatch");
  ModuleVector out(a.algebra(), a.q());
  for (int k = 0; k < a.q(); ++k) out[k] = a[k] - b[k];
  return out;
}

ModuleVector vec_right_mul(const ModuleVector& v, const TorusElement& a) {
  return v.map([&a](const TorusElement& e) { return mul(e, a); });
}

ModuleVector column_vector(const TorusMatrix& m, int k) {
  if (k < 0 || k >= m.q()) throw DimensionError("column index out of range");
  std::vector<TorusElement> comp;
  comp.reserve(static_cast<std::size_t>(m.q()));
  for (int r = 0; r < m.q(); ++r) comp.push_back(m(r, k));
  return ModuleVector(std::move(comp));
}

TorusMatrix from_columns(const std::vector<ModuleVector>& cols) {
  if (cols.empty()) throw DimensionError("from_columns needs at least one column");
  const int q = static_cast<int>(cols.size());
  TorusMatrix out(cols.front().algebra(), q);
  for (int c = 0; c < q; ++c) {
    if (cols[c].q() != q) throw DimensionError("from_columns: column length mismatch");
    for (int r = 0; r < q; ++r) out(r, c) = cols[c][r];
  }
  return out;
}

TorusElement canonical_pairing(const ModuleVector& xi, const ModuleVector& eta) {
  if (xi.q() != eta.q()) throw DimensionError("pairing: vector size mismatch");
  std::vector<std::pair<complex, TorusElement>> terms;
  for (int k = 0; k < xi.q(); ++k) terms.emplace_back(1.0, mul(adjoint(xi[k]), eta[k]));
  return sum_of_products(terms);
}

double vec_l1_norm(const ModuleVector& v) {
  double m = 0.0;
  for (const auto& e : v.components()) m = std::max(m, l1_norm(e));
  return m;
}

complex tau_q(const TorusMatrix& m) {
  complex s = 0.0;
  for (int r = 0; r < m.q(); ++r) s += trace_tau(m(r, r));
  return s;
}

complex tau_q_inner(const TorusMatrix& x, const TorusMatrix& y) {
  check_shapes(x, y);
  // tau_q(X^* Y) = sum_{r,c} tau(X_rc^* Y_rc)
  complex s = 0.0;
  for (int r = 0; r < x.q(); ++r)
    for (int c = 0; c < x.q(); ++c) s += tau_inner(x(r, c), y(r, c));
  return s;
}

double mat_l1_norm(const TorusMatrix& m) {
  double best = 0.0;
  for (int r = 0; r < m.q(); ++r) {
    double row = 0.0;
    for (int c = 0; c < m.q(); ++c) row += l1_norm(m(r, c));
    best = std::max(best, row);
  }
  return best;
}

ProjectionResiduals projection_residuals(const TorusMatrix& p) {
  return {mat_l1_norm(mat_mul(p, p) - p), mat_l1_norm(mat_adjoint(p) - p)};
}

bool is_projection(const TorusMatrix& p, double tol, ProjectionResiduals* residuals) {
  ProjectionResiduals res = projection_residuals(p);
  if (residuals) *residuals = res;
  return res.idempotent <= tol && res.self_adjoint <= tol;
}

// ---------------------------------------------------------------------------
// Functional calculus

namespace {

void require_box_headroom(const TorusMatrix& m, const char* what) {
  const int rad = m.support_radius();
  const int r_max = m.algebra()->policy().r_max;
  if (r_max < 2 * rad)
    throw ConfigError(std::string(what) + ": truncation radius " + std::to_string(r_max) +
                      " is below twice the input support radius " + std::to_string(rad));
}

bool diverged(double residual) { return !std::isfinite(residual) || residual > 1e8; }

}  // namespace

TorusMatrix newton_inverse(const TorusMatrix& m, IterationOptions opts, const std::optional<TorusMatrix>& initial) {
  require_box_headroom(m, "newton_inverse");
  const auto& alg = m.algebra();
  const TorusMatrix eye = TorusMatrix::identity(alg, m.q());
  TorusMatrix x = [&] {
    if (initial) return *initial;
    const TorusMatrix m_adj = mat_adjoint(m);
    const double scale = mat_l1_norm(m) * mat_l1_norm(m_adj);
    if (scale == 0.0) throw NumericalError("newton_inverse: zero matrix", 0.0);
    return mat_scale(1.0 / scale, m_adj);
  }();

  double residual = 0.0;
  for (int it = 0; it <= opts.max_iter; ++it) {
    const TorusMatrix mx = mat_mul(m, x);
    residual = mat_l1_norm(mx - eye);
    if (diverged(residual)) throw NumericalError("newton_inverse diverged", residual);
    if (residual <= opts.tol) {
      const double left = mat_l1_norm(mat_mul(x, m) - eye);
      if (left <= opts.tol) return x;
      residual = std::max(residual, left);
    }
    if (it == opts.max_iter) break;
    x = mat_mul(x, mat_scale(2.0, eye) - mx);
  }
  throw NumericalError("newton_inverse did not converge; final residual " + format_residual(residual), residual);
}

SquareRoot newton_sqrt(const TorusMatrix& a, IterationOptions opts) {
  require_box_headroom(a, "newton_sqrt");
  const auto& alg = a.algebra();
  const int q = a.q();
  const double scale = mat_l1_norm(a);
  if (scale == 0.0) throw NumericalError("newton_sqrt: zero matrix", 0.0);
  const double asym = mat_l1_norm(mat_adjoint(a) - a);
  if (asym > 1e-8 * std::max(1.0, scale)) throw NumericalError("newton_sqrt: input is not self-adjoint", asym);

  const TorusMatrix eye = TorusMatrix::identity(alg, q);
  const double root_scale = std::sqrt(scale);
  TorusMatrix y = mat_scale(1.0 / scale, a);
  TorusMatrix z = eye;

  double residual = 0.0;
  for (int it = 0; it <= opts.max_iter; ++it) {
    const TorusMatrix zy = mat_mul(z, y);
    const double gap = mat_l1_norm(eye - zy);
    if (diverged(gap)) throw NumericalError("newton_sqrt diverged (indefinite or singular input)", gap);
    if (gap <= opts.tol) {
      // one more step: convergence is quadratic, so this costs little and
      // takes exact inputs to rounding level
      const TorusMatrix t = mat_scale(0.5, mat_scale(3.0, eye) - zy);
      y = mat_mul(y, t);
      z = mat_mul(t, z);
      TorusMatrix root = mat_scale(root_scale, y);
      TorusMatrix inv_root = mat_scale(1.0 / root_scale, z);
      residual = mat_l1_norm(mat_mul(root, root) - a);
      const double inv_res = mat_l1_norm(mat_mul(root, inv_root) - eye);
      if (residual <= opts.tol && inv_res <= opts.tol)
        return SquareRoot{std::move(root), std::move(inv_root), it, residual};
      residual = std::max(residual, inv_res);
    } else {
      residual = gap;
    }
    if (it == opts.max_iter) break;
    const TorusMatrix t = mat_scale(0.5, mat_scale(3.0, eye) - zy);
    y = mat_mul(y, t);
    z = mat_mul(t, z);
  }
  throw NumericalError("newton_sqrt did not converge; final residual " + format_residual(residual), residual);
}

ProjectionFromIdempotent idempotent_to_projection(const TorusMatrix& p, IterationOptions opts) {
  const double idem = mat_l1_norm(mat_mul(p, p) - p);
  if (idem > opts.tol)
    throw NumericalError("idempotent_to_projection: input is not idempotent, |p^2 - p| = " + format_residual(idem),
                         idem);
  const auto& alg = p.algebra();
  const TorusMatrix eye = TorusMatrix::identity(alg, p.q());
  const TorusMatrix two_p_minus_one = mat_scale(2.0, p) - eye;
  const TorusMatrix gram = mat_mul(mat_adjoint(two_p_minus_one), two_p_minus_one) + eye;

  SquareRoot root = newton_sqrt(gram, opts);
  TorusMatrix p_tilde = mat_mul(mat_mul(root.root, p), root.inverse_root);
  ProjectionResiduals res = projection_residuals(p_tilde);
  const double similarity = mat_l1_norm(mat_mul(root.root, p) - mat_mul(p_tilde, root.root));
  const double worst = std::max({res.idempotent, res.self_adjoint, similarity});
  if (worst > 10.0 * opts.tol)
    throw NumericalError("idempotent_to_projection: projection residual " + format_residual(worst) + " exceeds 10*tol",
                         worst);
  return ProjectionFromIdempotent{std::move(root.root), std::move(root.inverse_root), std::move(p_tilde), res,
                                  similarity};
}

SquareRoot hermitian_normalize(const TorusMatrix& t, IterationOptions opts) { return newton_sqrt(t, opts); }

}  // namespace nctorus
