#include "nctorus/torus.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <unordered_map>

#include "nctorus/errors.hpp"

namespace nctorus {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Theta * m mod 1 in [-1/2, 1/2], keeping the rounding error of the product
// so that large exponents do not cost phase accuracy.
double frac_product(double theta, int m) {
  const double x = m;
  const double p = theta * x;
  return (p - std::nearbyint(p)) + std::fma(theta, x, -p);
}

double reduce_turns(double t) { return t - std::nearbyint(t); }

bool lex_less(std::span<const int> a, std::span<const int> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

// ---------------------------------------------------------------------------
// DeformationMatrix

DeformationMatrix::DeformationMatrix(int n, std::vector<double> row_major, double skew_tol)
    : n_(n), data_(std::move(row_major)) {
  if (n < 2) throw DimensionError("deformation matrix needs n >= 2, got " + std::to_string(n));
  if (data_.size() != static_cast<std::size_t>(n) * n)
    throw DimensionError("deformation matrix expects " + std::to_string(n * n) + " entries, got " +
                         std::to_string(data_.size()));
  for (int k = 0; k < n; ++k) {
    for (int m = 0; m < n; ++m) {
      double a = data_[k * n + m];
      double b = data_[m * n + k];
      if (!std::isfinite(a)) throw DimensionError("deformation matrix has a non-finite entry");
      if (std::abs(a + b) > skew_tol)
        throw DimensionError("deformation matrix is not skew-symmetric at (" + std::to_string(k) + "," +
                          std::to_string(m) + ")");
    }
  }
  std::vector<double> anti(data_.size());
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m) anti[k * n + m] = 0.5 * (data_[k * n + m] - data_[m * n + k]);
  data_ = std::move(anti);
}

DeformationMatrix DeformationMatrix::zero(int n) {
  return DeformationMatrix(n, std::vector<double>(static_cast<std::size_t>(n) * n, 0.0));
}

DeformationMatrix DeformationMatrix::uniform(int n, double theta) {
  std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < k; ++m) {
      d[k * n + m] = theta;
      d[m * n + k] = -theta;
    }
  return DeformationMatrix(n, std::move(d));
}

bool DeformationMatrix::looks_rational(int max_denominator, double tol) const {
  for (double x : data_) {
    bool found = false;
    for (int q = 1; q <= max_denominator && !found; ++q) {
      double scaled = x * q;
      found = std::abs(scaled - std::round(scaled)) <= tol * q;
    }
    if (!found) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// TruncationPolicy / TorusAlgebra

void TruncationPolicy::validate() const {
  if (r_max < 1) throw ConfigError("truncation r_max must be >= 1");
  if (!(eps_drop >= 0.0)) throw ConfigError("truncation eps_drop must be >= 0");
}

TorusAlgebra::TorusAlgebra(DeformationMatrix theta, TruncationPolicy policy)
    : theta_(std::move(theta)), policy_(policy) {
  policy_.validate();
  // Products are accumulated under a mixed-radix key of base 4R+1.
  double bits = theta_.dim() * std::log2(4.0 * policy_.r_max + 1.0);
  if (bits > 62.0) throw ConfigError("truncation box too large for this dimension");
}

std::shared_ptr<const TorusAlgebra> TorusAlgebra::make(DeformationMatrix theta, TruncationPolicy policy) {
  return std::make_shared<const TorusAlgebra>(std::move(theta), policy);
}

bool TorusAlgebra::in_box(std::span<const int> r) const noexcept {
  return std::all_of(r.begin(), r.end(), [&](int x) { return std::abs(x) <= policy_.r_max; });
}

bool TorusAlgebra::same_as(const TorusAlgebra& other) const noexcept {
  return this == &other || (theta_ == other.theta_ && policy_ == other.policy_);
}

// ---------------------------------------------------------------------------

complex weyl_phase(std::span<const int> r, std::span<const int> s, const DeformationMatrix& theta) {
  const int n = theta.dim();
  if (static_cast<int>(r.size()) != n || static_cast<int>(s.size()) != n)
    throw DimensionError("weyl_phase: exponent length does not match the deformation matrix");
  double angle = 0.0;
  for (int k = 1; k < n; ++k)
    for (int m = 0; m < k; ++m) angle += frac_product(theta(k, m), r[k] * s[m]);
  return std::polar(1.0, kTwoPi * reduce_turns(angle));
}

// Collects (exponent, coefficient) contributions under a packed integer key.
// Contributions to the same exponent are summed in insertion order.
class TermAccumulator {
 public:
  // expected_terms sizes the storage: when the contributions are expected to
  // fill a small box densely, a flat array replaces the hash map.
  TermAccumulator(AlgebraPtr alg, int reach, std::size_t expected_terms = 0)
      : alg_(std::move(alg)), n_(alg_->dim()), reach_(reach), base_(2 * reach + 1), weights_(n_) {
    std::int64_t w = 1;
    for (int k = n_ - 1; k >= 0; --k) {
      weights_[k] = w;
      w *= base_;
    }
    const std::int64_t cells = w;
    if (cells <= kDenseCells && static_cast<std::int64_t>(expected_terms) * 4 >= cells) {
      dense_.assign(static_cast<std::size_t>(cells), complex(0.0));
      seen_.assign(static_cast<std::size_t>(cells), 0);
    }
  }

  // Key with digit offset reach_; adding an unshifted key gives the key of the sum.
  std::int64_t shifted_key(std::span<const int> r) const {
    std::int64_t key = 0;
    for (int k = 0; k < n_; ++k) key += (r[k] + reach_) * weights_[k];
    return key;
  }
  std::int64_t plain_key(std::span<const int> r) const {
    std::int64_t key = 0;
    for (int k = 0; k < n_; ++k) key += r[k] * weights_[k];
    return key;
  }

  void add_key(std::int64_t key, complex c) {
    if (!dense_.empty()) {
      const auto i = static_cast<std::size_t>(key);
      if (!seen_[i]) {
        seen_[i] = 1;
        touched_.push_back(key);
        dense_[i] = c;
      } else {
        dense_[i] += c;
      }
      return;
    }
    auto [it, inserted] = sums_.try_emplace(key, c);
    if (!inserted) it->second += c;
  }
  void add(std::span<const int> r, complex c) { add_key(shifted_key(r), c); }

  static void add_loss(TorusElement& x, double loss) { x.truncation_loss_ += loss; }

  TorusElement finish(double inherited_loss) {
    TorusElement out(alg_);
    const auto& pol = alg_->policy();
    std::vector<std::pair<std::int64_t, complex>> kept;
    double dropped = 0.0;
    std::vector<int> r(n_);
    auto visit = [&](std::int64_t key, complex c) {
      unpack(key, r);
      double mag = std::abs(c);
      if (!alg_->in_box(r)) {
        if (pol.mode == TruncationMode::strict && mag > pol.eps_drop)
          throw TruncationOverflow("strict truncation: result needs support outside radius " +
                                   std::to_string(pol.r_max));
        dropped += mag;
        return;
      }
      if (mag <= pol.eps_drop) {
        dropped += mag;
        return;
      }
      kept.emplace_back(key, c);
    };
    if (dense_.empty()) {
      kept.reserve(sums_.size());
      for (const auto& [key, c] : sums_) visit(key, c);
    } else {
      kept.reserve(touched_.size());
      for (std::int64_t key : touched_) visit(key, dense_[static_cast<std::size_t>(key)]);
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    out.exps_.reserve(kept.size() * n_);
    out.coeffs_.reserve(kept.size());
    for (const auto& [key, c] : kept) {
      unpack(key, r);
      out.exps_.insert(out.exps_.end(), r.begin(), r.end());
      out.coeffs_.push_back(c);
    }
    out.truncation_loss_ = inherited_loss + dropped;
    return out;
  }

 private:
  void unpack(std::int64_t key, std::vector<int>& r) const {
    for (int k = n_ - 1; k >= 0; --k) {
      r[k] = static_cast<int>(key % base_) - reach_;
      key /= base_;
    }
  }

  AlgebraPtr alg_;
  int n_;
  int reach_;
  std::int64_t base_;
  std::vector<std::int64_t> weights_;
  std::unordered_map<std::int64_t, complex> sums_;
  static constexpr std::int64_t kDenseCells = std::int64_t{1} << 16;
  std::vector<complex> dense_;
  std::vector<char> seen_;
  std::vector<std::int64_t> touched_;
};

// ---------------------------------------------------------------------------
// TorusElement

TorusElement::TorusElement(AlgebraPtr alg) : alg_(std::move(alg)) {
  if (!alg_) throw DimensionError("TorusElement needs an algebra");
}

TorusElement TorusElement::scalar(AlgebraPtr alg, complex c) {
  std::vector<int> zero(static_cast<std::size_t>(alg->dim()), 0);
  return monomial(std::move(alg), zero, c);
}

TorusElement TorusElement::monomial(AlgebraPtr alg, std::span<const int> r, complex c) {
  if (static_cast<int>(r.size()) != alg->dim()) throw DimensionError("monomial: exponent length mismatch");
  return from_terms(std::move(alg), {{Exponent(r.begin(), r.end()), c}});
}

TorusElement TorusElement::monomial(AlgebraPtr alg, std::initializer_list<int> r, complex c) {
  return monomial(std::move(alg), std::span<const int>(r.begin(), r.size()), c);
}

TorusElement TorusElement::generator(AlgebraPtr alg, int axis) {
  if (axis < 0 || axis >= alg->dim()) throw DimensionError("generator: axis out of range");
  Exponent r(static_cast<std::size_t>(alg->dim()), 0);
  r[axis] = 1;
  return monomial(std::move(alg), r);
}

TorusElement TorusElement::from_terms(AlgebraPtr alg, const std::vector<std::pair<Exponent, complex>>& terms) {
  const int n = alg->dim();
  const auto& pol = alg->policy();
  std::map<Exponent, complex> sums;
  for (const auto& [r, c] : terms) {
    if (static_cast<int>(r.size()) != n) throw DimensionError("from_terms: exponent length mismatch");
    sums[r] += c;
  }
  TorusElement out(alg);
  double dropped = 0.0;
  for (const auto& [r, c] : sums) {
    double mag = std::abs(c);
    if (!alg->in_box(r)) {
      if (pol.mode == TruncationMode::strict && mag > pol.eps_drop)
        throw TruncationOverflow("strict truncation: term outside radius " + std::to_string(pol.r_max));
      dropped += mag;
      continue;
    }
    if (mag <= pol.eps_drop) {
      dropped += mag;
      continue;
    }
    out.exps_.insert(out.exps_.end(), r.begin(), r.end());
    out.coeffs_.push_back(c);
  }
  out.truncation_loss_ = dropped;
  return out;
}

std::span<const int> TorusElement::exponent(std::size_t i) const {
  const std::size_t n = static_cast<std::size_t>(dim());
  return std::span<const int>(exps_.data() + i * n, n);
}

complex TorusElement::coeff_at(std::span<const int> r) const {
  if (static_cast<int>(r.size()) != dim()) throw DimensionError("coeff_at: exponent length mismatch");
  std::size_t lo = 0, hi = size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (lex_less(exponent(mid), r))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < size() && std::ranges::equal(exponent(lo), r)) return coeffs_[lo];
  return 0.0;
}

complex TorusElement::coeff_at(std::initializer_list<int> r) const {
  return coeff_at(std::span<const int>(r.begin(), r.size()));
}

int TorusElement::support_radius() const noexcept {
  int rad = 0;
  for (int x : exps_) rad = std::max(rad, std::abs(x));
  return rad;
}

TorusElement TorusElement::operator-() const {
  TorusElement out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

TorusElement& TorusElement::operator+=(const TorusElement& other) {
  *this = linear_combine({{1.0, *this}, {1.0, other}});
  return *this;
}

TorusElement& TorusElement::operator-=(const TorusElement& other) {
  *this = linear_combine({{1.0, *this}, {-1.0, other}});
  return *this;
}

TorusElement& TorusElement::operator*=(complex s) {
  *this = linear_combine({{s, *this}});
  return *this;
}

void check_same_algebra(const TorusElement& a, const TorusElement& b) {
  if (!a.algebra()->same_as(*b.algebra()))
    throw DimensionError("operands belong to different deformation matrices or truncation policies");
}

TorusElement mul(const TorusElement& a, const TorusElement& b) {
  check_same_algebra(a, b);
  const auto& alg = a.algebra();
  const int n = alg->dim();
  const auto& theta = alg->theta();
  TermAccumulator acc(alg, 2 * alg->policy().r_max, a.size() * b.size());

  std::vector<std::int64_t> b_keys(b.size());
  for (std::size_t j = 0; j < b.size(); ++j) b_keys[j] = acc.plain_key(b.exponent(j));

  // weight[m] = sum_{k>m} Theta_km r_k, so the phase angle is sum_m weight[m] s_m.
  // The last axis never carries weight. For large b the phase is assembled from
  // per-axis tables of exp(2 pi i weight[m] s), s in [-R, R].
  const int r_max = alg->policy().r_max;
  const int span = 2 * r_max + 1;
  const bool tabulate = n > 1 && b.size() > static_cast<std::size_t>((n - 1) * span);
  std::vector<double> weight(n);
  std::vector<complex> table(tabulate ? static_cast<std::size_t>((n - 1) * span) : 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto r = a.exponent(i);
    for (int m = 0; m < n; ++m) {
      double w = 0.0;
      for (int k = m + 1; k < n; ++k) w += frac_product(theta(k, m), r[k]);
      weight[m] = reduce_turns(w);
    }
    const std::int64_t ka = acc.shifted_key(r);
    const complex ar = a.coeff(i);
    if (tabulate) {
      for (int m = 0; m + 1 < n; ++m)
        for (int t = -r_max; t <= r_max; ++t)
          table[static_cast<std::size_t>(m * span + t + r_max)] =
              std::polar(1.0, kTwoPi * reduce_turns(weight[m] * t));
      for (std::size_t j = 0; j < b.size(); ++j) {
        auto s = b.exponent(j);
        complex ph = table[static_cast<std::size_t>(s[0] + r_max)];
        for (int m = 1; m + 1 < n; ++m) ph *= table[static_cast<std::size_t>(m * span + s[m] + r_max)];
        acc.add_key(ka + b_keys[j], ar * b.coeff(j) * ph);
      }
      continue;
    }
    for (std::size_t j = 0; j < b.size(); ++j) {
      auto s = b.exponent(j);
      double angle = 0.0;
      for (int m = 0; m < n; ++m) angle += weight[m] * s[m];
      acc.add_key(ka + b_keys[j], ar * b.coeff(j) * std::polar(1.0, kTwoPi * reduce_turns(angle)));
    }
  }
  return acc.finish(std::max(a.truncation_loss(), b.truncation_loss()));
}

TorusElement linear_combine(std::span<const std::pair<complex, TorusElement>> terms) {
  if (terms.empty()) throw DimensionError("linear_combine needs at least one term");
  const auto& alg = terms.front().second.algebra();
  TermAccumulator acc(alg, alg->policy().r_max);
  double loss = 0.0;
  for (const auto& [s, x] : terms) {
    check_same_algebra(terms.front().second, x);
    loss = std::max(loss, x.truncation_loss());
    if (s == 0.0) continue;
    for (std::size_t i = 0; i < x.size(); ++i) acc.add(x.exponent(i), s * x.coeff(i));
  }
  return acc.finish(loss);
}

TorusElement linear_combine(std::initializer_list<std::pair<complex, TorusElement>> terms) {
  return linear_combine(std::span<const std::pair<complex, TorusElement>>(terms.begin(), terms.size()));
}

TorusElement adjoint(const TorusElement& a) {
  // (U^r)^* = conj(sigma(-r, r)) U^{-r};  conj(sigma(-r, r)) = exp(2 pi i sum_{k>m} Theta_km r_k r_m).
  const int n = a.dim();
  const auto& theta = a.algebra()->theta();
  std::vector<std::pair<Exponent, complex>> terms;
  terms.reserve(a.size());
  for (std::size_t i = a.size(); i-- > 0;) {
    auto r = a.exponent(i);
    double angle = 0.0;
    for (int k = 1; k < n; ++k)
      for (int m = 0; m < k; ++m) angle += frac_product(theta(k, m), r[k] * r[m]);
    Exponent neg(r.begin(), r.end());
    for (int& x : neg) x = -x;
    terms.emplace_back(std::move(neg), std::conj(a.coeff(i)) * std::polar(1.0, kTwoPi * reduce_turns(angle)));
  }
  // The box is symmetric, so nothing new is dropped.
  TorusElement out = TorusElement::from_terms(a.algebra(), terms);
  TermAccumulator::add_loss(out, a.truncation_loss());
  return out;
}

complex trace_tau(const TorusElement& a) {
  std::vector<int> zero(static_cast<std::size_t>(a.dim()), 0);
  return a.coeff_at(zero);
}

complex tau_inner(const TorusElement& a, const TorusElement& b) {
  check_same_algebra(a, b);
  complex sum = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    auto r = a.exponent(i);
    auto s = b.exponent(j);
    if (lex_less(r, s)) {
      ++i;
    } else if (lex_less(s, r)) {
      ++j;
    } else {
      sum += std::conj(a.coeff(i)) * b.coeff(j);
      ++i;
      ++j;
    }
  }
  return sum;
}

namespace {

TorusElement scale_by_axis(int axis, const TorusElement& a, complex unit) {
  if (axis < 0 || axis >= a.dim()) throw DimensionError("derivation axis out of range");
  std::vector<std::pair<Exponent, complex>> terms;
  terms.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto r = a.exponent(i);
    if (r[axis] == 0) continue;
    terms.emplace_back(Exponent(r.begin(), r.end()), unit * static_cast<double>(r[axis]) * a.coeff(i));
  }
  TorusElement out = TorusElement::from_terms(a.algebra(), terms);
  TermAccumulator::add_loss(out, a.truncation_loss());
  return out;
}

}  // namespace

TorusElement delta_tilde(int axis, const TorusElement& a) { return scale_by_axis(axis, a, complex(0.0, 1.0)); }

TorusElement delta(int axis, const TorusElement& a) { return scale_by_axis(axis, a, 1.0); }

double l1_norm(const TorusElement& a) {
  double s = 0.0;
  for (const auto& c : a.coeffs()) s += std::abs(c);
  return s;
}

}  // namespace nctorus
