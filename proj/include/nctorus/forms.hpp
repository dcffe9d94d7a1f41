#pragma once

// Differential calculus induced by the Dirac operator D = sum_j delta_j (x) gamma_j.
//
// One-forms are coordinates (a_1, ..., a_n) in the basis sigma_j = 1 (x) gamma_j.
// Two-forms are coordinates on gamma_p gamma_q, p < q, plus an optional scalar
// (identity-Clifford) part which spans the junk forms.

#include <optional>
#include <vector>

#include "nctorus/clifford.hpp"
#include "nctorus/connection.hpp"

namespace nctorus {

class OmegaD1Element {
 public:
  explicit OmegaD1Element(std::vector<TorusElement> components);
  static OmegaD1Element zero(const AlgebraPtr& alg);
  // sigma_{axis+1}
  static OmegaD1Element basis(const AlgebraPtr& alg, int axis);

  int dim() const noexcept { return static_cast<int>(comp_.size()); }
  const AlgebraPtr& algebra() const noexcept { return comp_.front().algebra(); }
  const TorusElement& operator[](int j) const { return comp_[static_cast<std::size_t>(j)]; }
  const std::vector<TorusElement>& components() const noexcept { return comp_; }

 private:
  std::vector<TorusElement> comp_;
};

class OmegaD2Element {
 public:
  OmegaD2Element(int n, std::vector<TorusElement> components, std::optional<TorusElement> junk = std::nullopt);
  static OmegaD2Element zero(const AlgebraPtr& alg);

  int dim() const noexcept { return n_; }
  const AlgebraPtr& algebra() const noexcept { return comp_.front().algebra(); }
  // Coefficient of gamma_p gamma_q, p < q.
  const TorusElement& at(int p, int q) const;
  const std::vector<TorusElement>& components() const noexcept { return comp_; }
  const std::optional<TorusElement>& junk() const noexcept { return junk_; }

  OmegaD2Element& operator+=(const OmegaD2Element& other);
  // a . x, componentwise left multiplication
  friend OmegaD2Element left_mul(const TorusElement& a, const OmegaD2Element& x);

 private:
  int n_;
  std::vector<TorusElement> comp_;
  std::optional<TorusElement> junk_;
};

OmegaD2Element left_mul(const TorusElement& a, const OmegaD2Element& x);

// a -> (delta_1 a, ..., delta_n a)
OmegaD1Element d0(const TorusElement& a);

// (0, ..., a, ..., 0) with a in slot j maps to
//   (delta_p(a U_j^*) delta_q(U_j) - delta_q(a U_j^*) delta_p(U_j))_{p<q}
// and d1 is the sum of these over the slots.
OmegaD2Element d1(const OmegaD1Element& w);

// (a . b)_{pq} = a_p b_q - a_q b_p. With keep_junk the scalar part
// sum_j a_j b_j of the Clifford product is carried along.
OmegaD2Element omega1_product(const OmegaD1Element& a, const OmegaD1Element& b, bool keep_junk = false);

// Orthogonal projection away from the junk forms.
OmegaD2Element project_junk(const OmegaD2Element& x);

// Tr_omega(|D|^{-n}) = 2 N pi^{n/2} / (n (2 pi)^n Gamma(n/2)),  N = 2^floor(n/2).
double dixmier_constant(int n);

// Inner product on two-forms, x^* y integrated against |D|^{-n}:
//   c(n) * sum_{a,b} Tr_N(B_a^* B_b) / N * tau(x_a^* y_b)
// over the Clifford basis {I, gamma_p gamma_q}. The normalized traces are
// precomputed from the gamma matrices.
class TwoFormMetric {
 public:
  explicit TwoFormMetric(int n);
  explicit TwoFormMetric(CliffordRep rep);

  int dim() const noexcept { return rep_.n; }
  const CliffordRep& clifford() const noexcept { return rep_; }
  double constant() const noexcept { return constant_; }
  // Normalized Clifford Gram entry; basis index 0 is I, 1 + pair_index is gamma_p gamma_q.
  std::complex<double> gram(int a, int b) const { return gram_[static_cast<std::size_t>(a * basis_size_ + b)]; }

  complex inner(const OmegaD2Element& x, const OmegaD2Element& y) const;

 private:
  CliffordRep rep_;
  double constant_;
  int basis_size_;
  std::vector<std::complex<double>> gram_;
};

complex omega2_inner(const OmegaD2Element& x, const OmegaD2Element& y, const TwoFormMetric& metric);

// Literal Clifford images: sum_j a_j (x) gamma_j, and sum x_pq (x) gamma_p gamma_q + junk (x) I.
// Returned as N x N matrices over A_Theta.
TorusMatrix pi_represent(const OmegaD1Element& w, const CliffordRep& rep);
TorusMatrix pi_represent(const OmegaD2Element& x, const CliffordRep& rep);

using SpectralCurvature = CurvatureForm;

// [nabla_m, nabla_j] for a spectral connection, assembled on the columns p e_k.
SpectralCurvature curvature_spectral(const Connection& c);

// Theta(xi) = (nabla~ o nabla)(xi) as one two-form per module coordinate,
// computed through the product map and d1:
//   sum_{m,j} nabla_j nabla_m xi (x) sigma_j sigma_m + sum_m nabla_m xi (x) d1(sigma_m).
std::vector<OmegaD2Element> curvature_on_vector(const Connection& c, const ModuleVector& xi);

struct SpectralYangMills {
  double value = 0.0;
  double basis_column = 0.0;  // sum_k <Theta(p e_k), Theta(p e_k)>
  double closed_form = 0.0;   // c(n) sum_{m<j} tau_q(F_mj^* F_mj)
  double relative_gap = 0.0;
};

// Both evaluation routes are always run; a relative disagreement above
// kCrossCheckTol raises NumericalError.
inline constexpr double kCrossCheckTol = 1e-10;
SpectralYangMills ym_spectral(const Connection& c);
SpectralYangMills ym_spectral(const Connection& c, const TwoFormMetric& metric);

}  // namespace nctorus
