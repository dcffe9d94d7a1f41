#pragma once

// Sparse arithmetic in the smooth noncommutative n-torus A_Theta at finite
// Fourier truncation.
//
// An element is a finitely supported sum  a = sum_r a_r U^r  where
// U^r = U_1^{r_1} U_2^{r_2} ... U_n^{r_n} is the normal-ordered monomial and
// the generators obey  U_k U_m = exp(2 pi i Theta_km) U_m U_k.
// Axis indices in this API are 0-based: generator(alg, 0) is U_1.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace nctorus {

using complex = std::complex<double>;
using Exponent = std::vector<int>;

class DeformationMatrix {
 public:
  // Validates n >= 2 and |Theta^T + Theta| <= skew_tol entrywise, then stores
  // the exactly antisymmetrized matrix (Theta - Theta^T) / 2.
  DeformationMatrix(int n, std::vector<double> row_major, double skew_tol = 1e-14);

  static DeformationMatrix zero(int n);
  // Two-generator style: Theta_{k,m} = -Theta_{m,k} = theta for every k > m.
  static DeformationMatrix uniform(int n, double theta);

  int dim() const noexcept { return n_; }
  double operator()(int k, int m) const { return data_[static_cast<std::size_t>(k * n_ + m)]; }
  const std::vector<double>& row_major() const noexcept { return data_; }

  // True when every entry is within tol of p/q with q <= max_denominator.
  // Rational deformations have a non-unique trace; callers report this.
  bool looks_rational(int max_denominator = 1000, double tol = 1e-12) const;

  friend bool operator==(const DeformationMatrix&, const DeformationMatrix&) = default;

 private:
  int n_;
  std::vector<double> data_;
};

enum class TruncationMode { strict, lossy };

struct TruncationPolicy {
  int r_max = 4;
  TruncationMode mode = TruncationMode::strict;
  double eps_drop = 1e-300;

  void validate() const;
  friend bool operator==(const TruncationPolicy&, const TruncationPolicy&) = default;
};

// Deformation matrix plus truncation policy; every element points at one.
class TorusAlgebra {
 public:
  TorusAlgebra(DeformationMatrix theta, TruncationPolicy policy);

  static std::shared_ptr<const TorusAlgebra> make(DeformationMatrix theta, TruncationPolicy policy = {});

  int dim() const noexcept { return theta_.dim(); }
  const DeformationMatrix& theta() const noexcept { return theta_; }
  const TruncationPolicy& policy() const noexcept { return policy_; }

  bool in_box(std::span<const int> r) const noexcept;
  bool same_as(const TorusAlgebra& other) const noexcept;

 private:
  DeformationMatrix theta_;
  TruncationPolicy policy_;
};

using AlgebraPtr = std::shared_ptr<const TorusAlgebra>;

// sigma(r, s) with U^r U^s = sigma(r, s) U^{r+s}.
complex weyl_phase(std::span<const int> r, std::span<const int> s, const DeformationMatrix& theta);

class TorusElement {
 public:
  explicit TorusElement(AlgebraPtr alg);

  static TorusElement zero(AlgebraPtr alg) { return TorusElement(std::move(alg)); }
  static TorusElement scalar(AlgebraPtr alg, complex c);
  static TorusElement monomial(AlgebraPtr alg, std::span<const int> r, complex c = 1.0);
  static TorusElement monomial(AlgebraPtr alg, std::initializer_list<int> r, complex c = 1.0);
  // U_{axis+1}
  static TorusElement generator(AlgebraPtr alg, int axis);
  // Builds from an arbitrary list of terms. Repeated exponents are summed in
  // list order; out-of-box terms follow the truncation policy.
  static TorusElement from_terms(AlgebraPtr alg, const std::vector<std::pair<Exponent, complex>>& terms);

  const AlgebraPtr& algebra() const noexcept { return alg_; }
  int dim() const noexcept { return alg_->dim(); }

  // Terms are stored sorted lexicographically by exponent.
  std::size_t size() const noexcept { return coeffs_.size(); }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  std::span<const int> exponent(std::size_t i) const;
  complex coeff(std::size_t i) const { return coeffs_[i]; }
  std::span<const complex> coeffs() const noexcept { return coeffs_; }
  // Coefficient of U^r, zero if absent.
  complex coeff_at(std::span<const int> r) const;
  complex coeff_at(std::initializer_list<int> r) const;

  // l1 mass dropped by truncation along the worst dependency chain: each
  // operation adds what it drops to the largest loss among its inputs.
  double truncation_loss() const noexcept { return truncation_loss_; }
  // Largest |r_k| over the support (0 for the zero element).
  int support_radius() const noexcept;

  TorusElement operator-() const;
  TorusElement& operator+=(const TorusElement& other);
  TorusElement& operator-=(const TorusElement& other);
  TorusElement& operator*=(complex s);

 private:
  friend class TermAccumulator;
  AlgebraPtr alg_;
  std::vector<int> exps_;  // size() * dim(), row per term
  std::vector<complex> coeffs_;
  double truncation_loss_ = 0.0;
};

void check_same_algebra(const TorusElement& a, const TorusElement& b);

// Twisted convolution: (ab)_t = sum_{r+s=t} a_r b_s sigma(r, s).
TorusElement mul(const TorusElement& a, const TorusElement& b);

TorusElement linear_combine(std::span<const std::pair<complex, TorusElement>> terms);
TorusElement linear_combine(std::initializer_list<std::pair<complex, TorusElement>> terms);

TorusElement adjoint(const TorusElement& a);

// tau(a) = a_0
complex trace_tau(const TorusElement& a);
// tau(a^* b) = sum_r conj(a_r) b_r, evaluated without forming the product.
complex tau_inner(const TorusElement& a, const TorusElement& b);

// a_r -> i r_j a_r
TorusElement delta_tilde(int axis, const TorusElement& a);
// a_r -> r_j a_r, i.e. (-i) delta_tilde
TorusElement delta(int axis, const TorusElement& a);

double l1_norm(const TorusElement& a);

inline TorusElement operator+(TorusElement a, const TorusElement& b) { return a += b; }
inline TorusElement operator-(TorusElement a, const TorusElement& b) { return a -= b; }
inline TorusElement operator*(const TorusElement& a, const TorusElement& b) { return mul(a, b); }
inline TorusElement operator*(complex s, TorusElement a) { return a *= s; }
inline TorusElement operator*(TorusElement a, complex s) { return a *= s; }

}  // namespace nctorus
