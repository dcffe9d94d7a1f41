#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "nctorus/matrix.hpp"

namespace nctorus {

// dynamical: derivations delta_tilde_j, skew-adjoint potentials.
// spectral:  derivations delta_j = -i delta_tilde_j, self-adjoint potentials.
enum class Convention { dynamical, spectral };

const char* to_string(Convention c) noexcept;

// E = p A^q with the Hermitian structure restricted from A^q.
class ProjectiveModule {
 public:
  static constexpr double kProjectionTol = 1e-8;

  explicit ProjectiveModule(TorusMatrix p);
  static ProjectiveModule free(AlgebraPtr alg, int q);

  const TorusMatrix& projection() const noexcept { return p_; }
  const AlgebraPtr& algebra() const noexcept { return p_.algebra(); }
  int q() const noexcept { return p_.q(); }
  int dim() const noexcept { return p_.algebra()->dim(); }
  const ProjectionResiduals& residuals() const noexcept { return residuals_; }

  ModuleVector project(const ModuleVector& v) const { return mat_apply(p_, v); }
  TorusMatrix compress(const TorusMatrix& m) const { return mat_mul(mat_mul(p_, m), p_); }
  // |p xi - xi|
  double distance_from_module(const ModuleVector& v) const;

 private:
  TorusMatrix p_;
  ProjectionResiduals residuals_;
};

using ModulePtr = std::shared_ptr<const ProjectiveModule>;

ModulePtr module_new(TorusMatrix p);

// <xi, eta> = sum_k xi_k^* eta_k for xi, eta in the module.
TorusElement hermitian_pairing(const ProjectiveModule& m, const ModuleVector& xi, const ModuleVector& eta,
                               double tol = 1e-8);

// Applies the convention's derivation along one axis.
TorusElement derive(Convention conv, int axis, const TorusElement& a);
TorusMatrix derive(Convention conv, int axis, const TorusMatrix& m);
ModuleVector derive(Convention conv, int axis, const ModuleVector& v);

// nabla_j = p D_j + A_j on E, stored as the potentials A_j relative to the
// Grassmannian connection p D_j.
class Connection {
 public:
  static constexpr double kInvariantTol = 1e-10;

  // Validates the potential invariants for the convention.
  Connection(ModulePtr module, Convention convention, std::vector<TorusMatrix> potentials);
  // Shapes are still checked, the symmetry and compression invariants are not.
  // Used to measure how badly an invalid connection fails (negative controls).
  static Connection unchecked(ModulePtr module, Convention convention, std::vector<TorusMatrix> potentials);

  const ModulePtr& module() const noexcept { return module_; }
  Convention convention() const noexcept { return convention_; }
  const std::vector<TorusMatrix>& potentials() const noexcept { return potentials_; }
  const TorusMatrix& potential(int axis) const { return potentials_.at(static_cast<std::size_t>(axis)); }
  int dim() const noexcept { return static_cast<int>(potentials_.size()); }

 private:
  ModulePtr module_;
  Convention convention_;
  std::vector<TorusMatrix> potentials_;

  struct NoValidation {};
  Connection(ModulePtr module, Convention convention, std::vector<TorusMatrix> potentials, NoValidation);
};

struct PotentialResiduals {
  double symmetry = 0.0;     // |A^* + A| (dynamical) or |A^* - A| (spectral)
  double compression = 0.0;  // |p A p - A|
};

PotentialResiduals potential_residuals(const ProjectiveModule& m, Convention conv, const TorusMatrix& a);

Connection grassmannian(ModulePtr module, Convention convention);

ModuleVector connection_apply(const Connection& c, int axis, const ModuleVector& xi);

// Max l1 residual of the compatibility identity over random module vectors
// and all axes:
//   dynamical: <nabla xi, eta> + <xi, nabla eta> - delta_tilde<xi, eta>
//   spectral:  <xi, nabla eta> - <nabla xi, eta> - delta<xi, eta>
double check_compatibility(const Connection& c, int samples, std::uint64_t seed = 7);

// Components F_jk for j < k, in the order (0,1), (0,2), ..., (n-2,n-1).
struct CurvatureForm {
  int n = 0;
  std::vector<TorusMatrix> components;

  const TorusMatrix& at(int j, int k) const;
};

// Index of the pair (j, k), j < k, in the ordering above.
int pair_index(int j, int k, int n);

// Matrix of [nabla_j, nabla_k] assembled from its action on the columns p e_k.
CurvatureForm curvature(const Connection& c);

// Same curvature from the closed form
//   p[D_j p, D_k p]p + p(D_j A_k - D_k A_j)p + [A_j, A_k].
CurvatureForm curvature_closed_form(const Connection& c);

// Applies [nabla_j, nabla_k] to xi directly.
ModuleVector curvature_apply(const Connection& c, int j, int k, const ModuleVector& xi);

// sum_{j<k} tau_q(F_jk^* F_jk)
double ym_dynamical(const Connection& c);

// nabla_j -> -i nabla_j  (dynamical -> spectral) and its inverse.
Connection phi_map(const Connection& c);
Connection phi_inverse(const Connection& c);

// Random helpers for tests, the CLI and sampling-based audits.
TorusElement random_element(const AlgebraPtr& alg, int radius, double scale, std::mt19937_64& rng);
TorusMatrix random_matrix(const AlgebraPtr& alg, int q, int radius, double scale, std::mt19937_64& rng);
ModuleVector random_module_vector(const ProjectiveModule& m, int radius, double scale, std::mt19937_64& rng);
// p (B - B^*) / 2 p  (dynamical) or p (B + B^*) / 2 p  (spectral)
TorusMatrix tangent_projection(const ProjectiveModule& m, Convention conv, const TorusMatrix& b);
std::vector<TorusMatrix> random_potentials(const ProjectiveModule& m, Convention conv, int radius, double scale,
                                           std::mt19937_64& rng);

}  // namespace nctorus
