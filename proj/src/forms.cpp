#include "nctorus/forms.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nctorus/errors.hpp"

namespace nctorus {

namespace {

int pair_count(int n) { return n * (n - 1) / 2; }

// Two-form values whose magnitude is below this are rounding noise of a flat
// curvature; the relative cross-check is not meaningful there.
constexpr double kCrossCheckAbsFloor = 1e-24;

}  // namespace

// ---------------------------------------------------------------------------
// Omega_D^1 / Omega_D^2 elements

OmegaD1Element::OmegaD1Element(std::vector<TorusElement> components) : comp_(std::move(components)) {
  if (comp_.empty()) throw DimensionError("OmegaD1Element needs n components");
  if (static_cast<int>(comp_.size()) != comp_.front().dim())
    throw DimensionError("OmegaD1Element needs exactly n components");
  for (const auto& e : comp_) check_same_algebra(comp_.front(), e);
}

OmegaD1Element OmegaD1Element::zero(const AlgebraPtr& alg) {
  return OmegaD1Element(std::vector<TorusElement>(static_cast<std::size_t>(alg->dim()), TorusElement::zero(alg)));
}

OmegaD1Element OmegaD1Element::basis(const AlgebraPtr& alg, int axis) {
  if (axis < 0 || axis >= alg->dim()) throw DimensionError("one-form basis index out of range");
  std::vector<TorusElement> comp(static_cast<std::size_t>(alg->dim()), TorusElement::zero(alg));
  comp[static_cast<std::size_t>(axis)] = TorusElement::scalar(alg, 1.0);
  return OmegaD1Element(std::move(comp));
}

OmegaD2Element::OmegaD2Element(int n, std::vector<TorusElement> components, std::optional<TorusElement> junk)
    : n_(n), comp_(std::move(components)), junk_(std::move(junk)) {
  if (n < 2 || static_cast<int>(comp_.size()) != pair_count(n))
    throw DimensionError("OmegaD2Element needs n(n-1)/2 components");
  if (comp_.front().dim() != n) throw DimensionError("OmegaD2Element: dimension mismatch");
  for (const auto& e : comp_) check_same_algebra(comp_.front(), e);
  if (junk_) check_same_algebra(comp_.front(), *junk_);
}

OmegaD2Element OmegaD2Element::zero(const AlgebraPtr& alg) {
  const int n = alg->dim();
  return OmegaD2Element(n, std::vector<TorusElement>(static_cast<std::size_t>(pair_count(n)), TorusElement::zero(alg)));
}

const TorusElement& OmegaD2Element::at(int p, int q) const {
  return comp_[static_cast<std::size_t>(pair_index(p, q, n_))];
}

OmegaD2Element& OmegaD2Element::operator+=(const OmegaD2Element& other) {
  if (other.n_ != n_) throw DimensionError("OmegaD2Element sum: dimension mismatch");
  for (std::size_t i = 0; i < comp_.size(); ++i) comp_[i] += other.comp_[i];
  if (other.junk_) junk_ = junk_ ? *junk_ + *other.junk_ : *other.junk_;
  return *this;
}

OmegaD2Element left_mul(const TorusElement& a, const OmegaD2Element& x) {
  std::vector<TorusElement> comp;
  comp.reserve(x.comp_.size());
  for (const auto& e : x.comp_) comp.push_back(mul(a, e));
  std::optional<TorusElement> junk;
  if (x.junk_) junk = mul(a, *x.junk_);
  return OmegaD2Element(x.n_, std::move(comp), std::move(junk));
}

// ---------------------------------------------------------------------------
// Differentials and products

OmegaD1Element d0(const TorusElement& a) {
  std::vector<TorusElement> comp;
  for (int j = 0; j < a.dim(); ++j) comp.push_back(delta(j, a));
  return OmegaD1Element(std::move(comp));
}

OmegaD2Element d1(const OmegaD1Element& w) {
  const auto& alg = w.algebra();
  const int n = w.dim();
  std::vector<TorusElement> comp(static_cast<std::size_t>(pair_count(n)), TorusElement::zero(alg));
  for (int j = 0; j < n; ++j) {
    if (w[j].is_zero()) continue;
    const TorusElement u = TorusElement::generator(alg, j);
    const TorusElement a_u_adj = mul(w[j], adjoint(u));
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        const TorusElement term = mul(delta(p, a_u_adj), delta(q, u)) - mul(delta(q, a_u_adj), delta(p, u));
        auto& slot = comp[static_cast<std::size_t>(pair_index(p, q, n))];
        slot += term;
      }
  }
  return OmegaD2Element(n, std::move(comp));
}

OmegaD2Element omega1_product(const OmegaD1Element& a, const OmegaD1Element& b, bool keep_junk) {
  if (a.dim() != b.dim()) throw DimensionError("omega1_product: dimension mismatch");
  check_same_algebra(a[0], b[0]);
  const int n = a.dim();
  std::vector<TorusElement> comp;
  comp.reserve(static_cast<std::size_t>(pair_count(n)));
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) comp.push_back(mul(a[p], b[q]) - mul(a[q], b[p]));
  std::optional<TorusElement> junk;
  if (keep_junk) {
    std::vector<std::pair<complex, TorusElement>> terms;
    for (int j = 0; j < n; ++j) terms.emplace_back(1.0, mul(a[j], b[j]));
    junk = linear_combine(std::span<const std::pair<complex, TorusElement>>(terms));
  }
  return OmegaD2Element(n, std::move(comp), std::move(junk));
}

OmegaD2Element project_junk(const OmegaD2Element& x) { return OmegaD2Element(x.dim(), x.components()); }

// ---------------------------------------------------------------------------
// Metric

double dixmier_constant(int n) {
  if (n < 2) throw DimensionError("dixmier_constant needs n >= 2");
  const double big_n = std::ldexp(1.0, n / 2);
  const double pi = std::numbers::pi;
  return 2.0 * big_n * std::pow(pi, 0.5 * n) / (n * std::pow(2.0 * pi, n) * std::tgamma(0.5 * n));
}

TwoFormMetric::TwoFormMetric(int n) : TwoFormMetric(gamma_generate(n)) {}

TwoFormMetric::TwoFormMetric(CliffordRep rep)
    : rep_(std::move(rep)), constant_(dixmier_constant(rep_.n)), basis_size_(1 + pair_count(rep_.n)) {
  std::vector<CMatrix> basis;
  basis.push_back(CMatrix::identity(rep_.N));
  for (int p = 0; p < rep_.n; ++p)
    for (int q = p + 1; q < rep_.n; ++q) basis.push_back(rep_.gammas[p] * rep_.gammas[q]);
  gram_.resize(static_cast<std::size_t>(basis_size_) * basis_size_);
  for (int a = 0; a < basis_size_; ++a)
    for (int b = 0; b < basis_size_; ++b)
      gram_[static_cast<std::size_t>(a * basis_size_ + b)] = mat_trace_normalized(basis[a].adjoint() * basis[b]);
}

complex TwoFormMetric::inner(const OmegaD2Element& x, const OmegaD2Element& y) const {
  if (x.dim() != rep_.n || y.dim() != rep_.n) throw DimensionError("omega2_inner: dimension mismatch");
  auto coord = [](const OmegaD2Element& e, int a) -> const TorusElement* {
    if (a == 0) return e.junk() ? &*e.junk() : nullptr;
    return &e.components()[static_cast<std::size_t>(a - 1)];
  };
  complex sum = 0.0;
  for (int a = 0; a < basis_size_; ++a) {
    const TorusElement* xa = coord(x, a);
    if (!xa) continue;
    for (int b = 0; b < basis_size_; ++b) {
      const std::complex<double> g = gram(a, b);
      if (g == 0.0) continue;
      const TorusElement* yb = coord(y, b);
      if (!yb) continue;
      sum += g * tau_inner(*xa, *yb);
    }
  }
  return constant_ * sum;
}

complex omega2_inner(const OmegaD2Element& x, const OmegaD2Element& y, const TwoFormMetric& metric) {
  return metric.inner(x, y);
}

// ---------------------------------------------------------------------------
// Clifford images

TorusMatrix pi_represent(const OmegaD1Element& w, const CliffordRep& rep) {
  if (w.dim() != rep.n) throw DimensionError("pi_represent: dimension mismatch");
  TorusMatrix out(w.algebra(), rep.N);
  for (int r = 0; r < rep.N; ++r)
    for (int c = 0; c < rep.N; ++c) {
      std::vector<std::pair<complex, TorusElement>> terms;
      for (int j = 0; j < rep.n; ++j)
        if (rep.gammas[j](r, c) != 0.0) terms.emplace_back(rep.gammas[j](r, c), w[j]);
      if (!terms.empty()) out(r, c) = linear_combine(std::span<const std::pair<complex, TorusElement>>(terms));
    }
  return out;
}

TorusMatrix pi_represent(const OmegaD2Element& x, const CliffordRep& rep) {
  if (x.dim() != rep.n) throw DimensionError("pi_represent: dimension mismatch");
  std::vector<CMatrix> basis;
  for (int p = 0; p < rep.n; ++p)
    for (int q = p + 1; q < rep.n; ++q) basis.push_back(rep.gammas[p] * rep.gammas[q]);
  TorusMatrix out(x.algebra(), rep.N);
  for (int r = 0; r < rep.N; ++r)
    for (int c = 0; c < rep.N; ++c) {
      std::vector<std::pair<complex, TorusElement>> terms;
      if (x.junk() && r == c) terms.emplace_back(1.0, *x.junk());
      for (std::size_t a = 0; a < basis.size(); ++a)
        if (basis[a](r, c) != 0.0) terms.emplace_back(basis[a](r, c), x.components()[a]);
      if (!terms.empty()) out(r, c) = linear_combine(std::span<const std::pair<complex, TorusElement>>(terms));
    }
  return out;
}

// ---------------------------------------------------------------------------
// Spectral Yang-Mills

SpectralCurvature curvature_spectral(const Connection& c) {
  if (c.convention() != Convention::spectral)
    throw ConventionError("curvature_spectral needs a spectral connection");
  return curvature(c);
}

std::vector<OmegaD2Element> curvature_on_vector(const Connection& c, const ModuleVector& xi) {
  if (c.convention() != Convention::spectral)
    throw ConventionError("curvature_on_vector needs a spectral connection");
  const auto& alg = xi.algebra();
  const int n = c.dim();
  const int q = xi.q();

  std::vector<OmegaD1Element> sigma;
  for (int j = 0; j < n; ++j) sigma.push_back(OmegaD1Element::basis(alg, j));

  std::vector<ModuleVector> first;
  for (int m = 0; m < n; ++m) first.push_back(connection_apply(c, m, xi));

  std::vector<OmegaD2Element> out(static_cast<std::size_t>(q), OmegaD2Element::zero(alg));
  for (int m = 0; m < n; ++m) {
    const OmegaD2Element d_sigma = d1(sigma[m]);
    for (int s = 0; s < q; ++s) out[s] += left_mul(first[m][s], d_sigma);
    for (int j = 0; j < n; ++j) {
      if (j == m) continue;  // sigma_j sigma_j = 0 in the quotient
      const OmegaD2Element prod = omega1_product(sigma[j], sigma[m]);
      const ModuleVector second = connection_apply(c, j, first[m]);
      for (int s = 0; s < q; ++s) out[s] += left_mul(second[s], prod);
    }
  }
  return out;
}

SpectralYangMills ym_spectral(const Connection& c) { return ym_spectral(c, TwoFormMetric(c.dim())); }

SpectralYangMills ym_spectral(const Connection& c, const TwoFormMetric& metric) {
  if (c.convention() != Convention::spectral) throw ConventionError("ym_spectral needs a spectral connection");
  if (metric.dim() != c.dim()) throw DimensionError("ym_spectral: metric dimension mismatch");
  const auto& m = *c.module();

  SpectralYangMills out;
  for (int k = 0; k < m.q(); ++k) {
    const ModuleVector frame = column_vector(m.projection(), k);
    for (const auto& form : curvature_on_vector(c, frame)) {
      const OmegaD2Element clean = project_junk(form);
      out.basis_column += metric.inner(clean, clean).real();
    }
  }

  const SpectralCurvature f = curvature_spectral(c);
  double sum = 0.0;
  for (const auto& fmj : f.components) sum += tau_q_inner(fmj, fmj).real();
  out.closed_form = metric.constant() * sum;

  const double scale = std::max(std::abs(out.basis_column), std::abs(out.closed_form));
  const double diff = std::abs(out.basis_column - out.closed_form);
  out.relative_gap = scale > 0.0 ? diff / scale : 0.0;
  out.value = out.basis_column;
  if (out.relative_gap > kCrossCheckTol && scale > kCrossCheckAbsFloor)
    throw NumericalError("ym_spectral: basis-column and closed-form evaluations disagree (relative gap " +
                             format_residual(out.relative_gap) + ")",
                         out.relative_gap);
  return out;
}

}  // namespace nctorus
