#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "nctorus/torus.hpp"

namespace nctorus {

class ModuleVector;

// Square q x q matrix over A_Theta, row-major.
class TorusMatrix {
 public:
  TorusMatrix(AlgebraPtr alg, int q);  // zero matrix
  TorusMatrix(int q, std::vector<TorusElement> entries);

  static TorusMatrix zero(AlgebraPtr alg, int q) { return TorusMatrix(std::move(alg), q); }
  static TorusMatrix identity(AlgebraPtr alg, int q);
  static TorusMatrix diagonal(const std::vector<TorusElement>& diag);
  // Every entry is the scalar m(r, c).
  static TorusMatrix constant(AlgebraPtr alg, const std::vector<std::vector<complex>>& m);

  const AlgebraPtr& algebra() const noexcept { return alg_; }
  int q() const noexcept { return q_; }
  TorusElement& operator()(int r, int c) { return entries_[static_cast<std::size_t>(r * q_ + c)]; }
  const TorusElement& operator()(int r, int c) const { return entries_[static_cast<std::size_t>(r * q_ + c)]; }
  const std::vector<TorusElement>& entries() const noexcept { return entries_; }

  int support_radius() const noexcept;
  double max_truncation_loss() const noexcept;

  // Applies f to every entry.
  TorusMatrix map(const std::function<TorusElement(const TorusElement&)>& f) const;

 private:
  AlgebraPtr alg_;
  int q_;
  std::vector<TorusElement> entries_;
};

// Column xi = (xi_1, ..., xi_q) in A_Theta^q.
class ModuleVector {
 public:
  ModuleVector(AlgebraPtr alg, int q);
  explicit ModuleVector(std::vector<TorusElement> components);

  static ModuleVector basis(AlgebraPtr alg, int q, int k);

  const AlgebraPtr& algebra() const noexcept { return alg_; }
  int q() const noexcept { return static_cast<int>(comp_.size()); }
  TorusElement& operator[](int k) { return comp_[static_cast<std::size_t>(k)]; }
  const TorusElement& operator[](int k) const { return comp_[static_cast<std::size_t>(k)]; }
  const std::vector<TorusElement>& components() const noexcept { return comp_; }

  ModuleVector map(const std::function<TorusElement(const TorusElement&)>& f) const;

 private:
  AlgebraPtr alg_;
  std::vector<TorusElement> comp_;
};

// Matrix algebra over A_Theta.
TorusMatrix mat_mul(const TorusMatrix& a, const TorusMatrix& b);
TorusMatrix mat_add(const TorusMatrix& a, const TorusMatrix& b);
TorusMatrix mat_sub(const TorusMatrix& a, const TorusMatrix& b);
TorusMatrix mat_scale(complex s, const TorusMatrix& a);
TorusMatrix mat_adjoint(const TorusMatrix& a);
TorusMatrix commutator(const TorusMatrix& a, const TorusMatrix& b);

inline TorusMatrix operator*(const TorusMatrix& a, const TorusMatrix& b) { return mat_mul(a, b); }
inline TorusMatrix operator+(const TorusMatrix& a, const TorusMatrix& b) { return mat_add(a, b); }
inline TorusMatrix operator-(const TorusMatrix& a, const TorusMatrix& b) { return mat_sub(a, b); }
inline TorusMatrix operator*(complex s, const TorusMatrix& a) { return mat_scale(s, a); }

ModuleVector mat_apply(const TorusMatrix& a, const ModuleVector& v);
ModuleVector vec_add(const ModuleVector& a, const ModuleVector& b);
ModuleVector vec_sub(const ModuleVector& a, const ModuleVector& b);
// xi . a (right module action)
ModuleVector vec_right_mul(const ModuleVector& v, const TorusElement& a);
// Column k of m as a vector.
ModuleVector column_vector(const TorusMatrix& m, int k);
// Matrix whose k-th column is cols[k].
TorusMatrix from_columns(const std::vector<ModuleVector>& cols);
// sum_k xi_k^* eta_k
TorusElement canonical_pairing(const ModuleVector& xi, const ModuleVector& eta);
double vec_l1_norm(const ModuleVector& v);

// sum_r tau(M_rr), not normalized by q.
complex tau_q(const TorusMatrix& m);
// tau_q(X^* Y) without forming the product.
complex tau_q_inner(const TorusMatrix& x, const TorusMatrix& y);

// max_r sum_c l1_norm(M_rc)
double mat_l1_norm(const TorusMatrix& m);

struct ProjectionResiduals {
  double idempotent = 0.0;    // |p^2 - p|
  double self_adjoint = 0.0;  // |p^* - p|
};

bool is_projection(const TorusMatrix& p, double tol, ProjectionResiduals* residuals = nullptr);
ProjectionResiduals projection_residuals(const TorusMatrix& p);

struct IterationOptions {
  double tol = 1e-10;
  int max_iter = 100;
};

// Newton-Schulz X <- X(2I - MX). Default start is M^* / (|M| |M^*|).
TorusMatrix newton_inverse(const TorusMatrix& m, IterationOptions opts = {},
                           const std::optional<TorusMatrix>& initial = std::nullopt);

struct SquareRoot {
  TorusMatrix root;
  TorusMatrix inverse_root;
  int iterations = 0;
  double residual = 0.0;  // |S^2 - A|
};

// Coupled inverse-free Newton-Schulz on A / |A|:
//   T = (3I - Z Y) / 2,  Y <- Y T,  Z <- T Z.
SquareRoot newton_sqrt(const TorusMatrix& a, IterationOptions opts = {});

struct ProjectionFromIdempotent {
  TorusMatrix z;
  TorusMatrix z_inv;
  TorusMatrix p_tilde;
  ProjectionResiduals residuals;  // of p_tilde
  double similarity = 0.0;        // |z p - p_tilde z|
};

// z = ((2p^* - 1)(2p - 1) + 1)^{1/2},  p_tilde = z p z^{-1}.
ProjectionFromIdempotent idempotent_to_projection(const TorusMatrix& p, IterationOptions opts = {});

// Psi = sqrt(T): <xi, eta>_T = xi^* T eta = (Psi xi)^* (Psi eta).
SquareRoot hermitian_normalize(const TorusMatrix& t, IterationOptions opts = {});

}  // namespace nctorus
