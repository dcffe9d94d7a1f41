#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nctorus/connection.hpp"

namespace nctorus {

struct DescentParams {
  int max_iter = 200;
  double grad_tol = 1e-8;
  double armijo_c = 1e-4;
  double step_init = 1.0;
  double step_shrink = 0.5;
  double min_step = 1e-16;
  std::uint64_t seed = 0;

  void validate() const;
};

struct DescentRecord {
  int iteration = 0;
  double ym = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;  // step taken to reach this iterate (0 for the start)
};

struct DescentTrace {
  std::vector<DescentRecord> records;
  std::optional<Connection> final_connection;
  bool converged = false;
  bool line_search_failed = false;
};

// Riemannian gradient of YM on skew-adjoint, p-compressed potentials under
// <H, H'> = sum_j Re tau_q(H_j^* H'_j). For each pair j < k with F = F_jk:
//   G_k += 2 (-D_j F + [F, A_j]),   G_j += 2 (D_k F - [F, A_k]),
// followed by G_j <- p (G_j - G_j^*) / 2 p.
std::vector<TorusMatrix> ym_gradient(const Connection& c);

// sum_j Re tau_q(G_j^* H_j)
double tangent_inner(const std::vector<TorusMatrix>& g, const std::vector<TorusMatrix>& h);

// A_j -> p (A_j + t H_j - (A_j + t H_j)^*) / 2 p
Connection step_connection(const Connection& c, const std::vector<TorusMatrix>& direction, double t);

// Projected gradient descent with Armijo backtracking.
DescentTrace minimize_ym(const Connection& start, const DescentParams& params);

}  // namespace nctorus
