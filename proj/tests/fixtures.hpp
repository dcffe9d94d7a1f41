#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "nctorus/optimize.hpp"
#include "oracles.hpp"

namespace fixture {

using namespace nctorus;

// Projections with small support, so connections built on them stay inside a
// strict R_max = 4 box:
//   0: free module
//   1: diag(1, 0)
//   2: constant rank-one projection onto (cos t, e^{i phi} sin t)
//   3: [[1/2, U_1/2], [U_1^*/2, 1/2]]
inline TorusMatrix projection(const AlgebraPtr& alg, int q, int kind, std::mt19937_64& rng) {
  if (q == 1 || kind == 0) return TorusMatrix::identity(alg, q);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  switch (kind) {
    case 1:
      return TorusMatrix::diagonal({TorusElement::scalar(alg, 1.0), TorusElement::zero(alg)});
    case 2: {
      const double t = angle(rng), phi = 2.0 * angle(rng);
      const complex v0 = std::cos(t), v1 = std::polar(std::sin(t), phi);
      return TorusMatrix::constant(alg, {{v0 * std::conj(v0), v0 * std::conj(v1)},
                                         {v1 * std::conj(v0), v1 * std::conj(v1)}});
    }
    default: {
      auto u1 = TorusElement::generator(alg, 0);
      auto half = TorusElement::scalar(alg, 0.5);
      return TorusMatrix(2, {half, 0.5 * u1, 0.5 * adjoint(u1), half});
    }
  }
}

struct Case {
  int n;
  int q;
  int kind;
};

// Kind 3 is p = v v^* with v = (1, U_1^*)/sqrt 2. Compressing a generic radius-1
// matrix would widen its support, so potentials there are v a v^* with a skew
// and supported on r_1 = 0, which keeps every entry inside radius 1.
inline TorusMatrix twisted_potential(const AlgebraPtr& alg, double scale, std::mt19937_64& rng) {
  auto raw = random_element(alg, 1, scale, rng);
  std::vector<std::pair<Exponent, complex>> terms;
  for (std::size_t i = 0; i < raw.size(); ++i)
    if (raw.exponent(i)[0] == 0) terms.emplace_back(Exponent(raw.exponent(i).begin(), raw.exponent(i).end()), raw.coeff(i));
  auto b = TorusElement::from_terms(alg, terms);
  auto a = 0.5 * (b - adjoint(b));
  auto u1 = TorusElement::generator(alg, 0);
  auto u1s = adjoint(u1);
  return TorusMatrix(2, {0.5 * a, 0.5 * (a * u1), 0.5 * (u1s * a), 0.5 * (u1s * a * u1)});
}

// Random dynamical connection with radius-1 potentials, by default on a strict
// R_max = 4 algebra.
inline Connection random_connection(const Case& c, std::mt19937_64& rng, double scale = 0.5,
                                    TruncationPolicy policy = {4, TruncationMode::strict}) {
  auto alg = TorusAlgebra::make(oracle::random_theta(c.n, rng), policy);
  ModulePtr m = module_new(projection(alg, c.q, c.kind, rng));
  if (c.q == 2 && c.kind == 3) {
    std::vector<TorusMatrix> pots;
    for (int j = 0; j < c.n; ++j) pots.push_back(twisted_potential(alg, scale, rng));
    return Connection(m, Convention::dynamical, std::move(pots));
  }
  return Connection(m, Convention::dynamical, random_potentials(*m, Convention::dynamical, 1, scale, rng));
}

// Cases spanning n in {2, 3}, q in {1, 2} and the module kinds above.
inline Case case_for(int i) {
  const int n = 2 + (i / 5) % 2;
  const int kind = i % 5;  // kind 4 is the free module of rank 1
  if (kind == 4) return {n, 1, 0};
  return {n, 2, kind};
}

// Random idempotent v w with w v = 1: v = (1, b)^T, w = (1 - c b, c).
inline TorusMatrix random_idempotent(const AlgebraPtr& alg, double scale, std::mt19937_64& rng) {
  auto b = random_element(alg, 1, scale, rng);
  auto c = random_element(alg, 1, scale, rng);
  auto one = TorusElement::scalar(alg, 1.0);
  auto w0 = one - c * b;
  return TorusMatrix(2, {w0, c, b * w0, b * c});
}

// Tangent direction obtained by projecting one real or imaginary coefficient
// coordinate of entry (a, b) of A_j.
inline std::vector<TorusMatrix> coordinate_direction(const Connection& c, int j, int a, int b, const Exponent& r,
                                                     bool imaginary) {
  const auto& m = *c.module();
  const auto& alg = m.algebra();
  std::vector<TorusMatrix> dir(static_cast<std::size_t>(c.dim()), TorusMatrix::zero(alg, m.q()));
  std::vector<TorusElement> entries(static_cast<std::size_t>(m.q() * m.q()), TorusElement::zero(alg));
  entries[static_cast<std::size_t>(a * m.q() + b)] =
      TorusElement::from_terms(alg, {{r, imaginary ? complex(0.0, 1.0) : complex(1.0)}});
  dir[static_cast<std::size_t>(j)] = tangent_projection(m, Convention::dynamical, TorusMatrix(m.q(), entries));
  return dir;
}

inline double central_difference(const Connection& c, const std::vector<TorusMatrix>& dir, double h) {
  return (ym_dynamical(step_connection(c, dir, h)) - ym_dynamical(step_connection(c, dir, -h))) / (2.0 * h);
}

}  // namespace fixture
