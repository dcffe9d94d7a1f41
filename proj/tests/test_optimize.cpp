#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "nctorus/errors.hpp"
#include "nctorus/optimize.hpp"

using namespace nctorus;

namespace {

constexpr TruncationPolicy kRoomy{8, TruncationMode::lossy};

void check_tangent(const Connection& c, const std::vector<TorusMatrix>& g) {
  const auto& m = *c.module();
  for (const auto& gj : g) {
    auto r = potential_residuals(m, Convention::dynamical, gj);
    CHECK(r.symmetry <= 1e-10);
    CHECK(r.compression <= 1e-10);
  }
}

AlgebraPtr algebra2(double theta21) {
  return TorusAlgebra::make(DeformationMatrix(2, {0.0, -theta21, theta21, 0.0}), kRoomy);
}

Connection hand_connection(const AlgebraPtr& alg, double t) {
  auto u1 = TorusElement::generator(alg, 0);
  return Connection(module_new(TorusMatrix::identity(alg, 1)), Convention::dynamical,
                    {TorusMatrix::zero(alg, 1), TorusMatrix(1, {t * (u1 - adjoint(u1))})});
}

}  // namespace

TEST_CASE("DescentParams validation") {
  DescentParams p;
  CHECK_NOTHROW(p.validate());
  p.armijo_c = 1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.step_shrink = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.step_init = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("gradient on the hand example") {
  auto alg = algebra2(0.37);
  auto u1 = TorusElement::generator(alg, 0);
  for (double t : {1.0, 0.3, -0.7}) {
    CAPTURE(t);
    Connection c = hand_connection(alg, t);
    // YM(t) = 2 t^2 and the gradient is 2 t (U_1 - U_1^*) in slot 2
    CHECK(std::abs(ym_dynamical(c) - 2.0 * t * t) <= 1e-12);
    auto g = ym_gradient(c);
    CHECK(mat_l1_norm(g[0]) == 0.0);
    CHECK(mat_l1_norm(g[1] - TorusMatrix(1, {2.0 * t * (u1 - adjoint(u1))})) <= 1e-12);
    std::vector<TorusMatrix> dir{TorusMatrix::zero(alg, 1), TorusMatrix(1, {u1 - adjoint(u1)})};
    CHECK(std::abs(tangent_inner(g, dir) - 4.0 * t) <= 1e-12);
    CHECK(std::abs(fixture::central_difference(c, dir, 1e-5) - 4.0 * t) <= 1e-6 * std::abs(4.0 * t));
  }
  CHECK_THROWS_AS(ym_gradient(phi_map(hand_connection(alg, 1.0))), ConventionError);
}

TEST_CASE("gradient against central finite differences") {
  std::mt19937_64 rng(51);
  for (int i = 0; i < 10; ++i) {
    CAPTURE(i);
    Connection c = fixture::random_connection(fixture::case_for(i), rng, 0.5, kRoomy);
    auto g = ym_gradient(c);
    check_tangent(c, g);
    const int q = c.module()->q();
    std::uniform_int_distribution<int> axis(0, c.dim() - 1), entry(0, q - 1), bit(0, 1);
    int tested = 0, drawn = 0;
    while (tested < 20 && drawn < 2000) {
      ++drawn;
      const int j = axis(rng), a = entry(rng), b = entry(rng);
      const Exponent r = oracle::random_exponent(c.dim(), 1, rng);
      const bool imaginary = bit(rng) == 1;
      auto dir = fixture::coordinate_direction(c, j, a, b, r, imaginary);
      const double analytic = tangent_inner(g, dir);
      // coordinates the projection kills or that barely move YM carry no relative signal
      if (std::abs(analytic) < 1e-3) continue;
      const double fd = fixture::central_difference(c, dir, 1e-5);
      CHECK(std::abs(fd - analytic) <= 1e-6 * std::abs(analytic));
      ++tested;
    }
    CHECK(tested == 20);
  }
}

TEST_CASE("gradient is zero exactly on flat connections") {
  std::mt19937_64 rng(52);
  for (int kind = 0; kind < 4; ++kind) {
    auto alg = TorusAlgebra::make(oracle::random_theta(3, rng), kRoomy);
    Connection g = grassmannian(module_new(fixture::projection(alg, 2, kind, rng)), Convention::dynamical);
    for (const auto& gj : ym_gradient(g)) CHECK(mat_l1_norm(gj) == 0.0);
  }
  auto alg = TorusAlgebra::make(oracle::random_theta(2, rng), kRoomy);
  auto i = TorusElement::scalar(alg, complex(0.0, 1.0));
  Connection constant(module_new(TorusMatrix::identity(alg, 1)), Convention::dynamical,
                      {TorusMatrix(1, {0.4 * i}), TorusMatrix(1, {-1.3 * i})});
  CHECK(ym_dynamical(constant) == 0.0);
  for (const auto& gj : ym_gradient(constant)) CHECK(mat_l1_norm(gj) == 0.0);
}

TEST_CASE("flat start is an exact fixed point of the descent") {
  std::mt19937_64 rng(53);
  for (int kind = 0; kind < 4; ++kind) {
    auto alg = TorusAlgebra::make(oracle::random_theta(2, rng), kRoomy);
    Connection g = grassmannian(module_new(fixture::projection(alg, 2, kind, rng)), Convention::dynamical);
    auto trace = minimize_ym(g, {});
    REQUIRE(trace.records.size() == 1u);
    CHECK(trace.records[0].ym == 0.0);
    CHECK(trace.records[0].grad_norm == 0.0);
    CHECK(trace.converged);
    REQUIRE(trace.final_connection.has_value());
    for (int j = 0; j < 2; ++j) CHECK(mat_l1_norm(trace.final_connection->potential(j) - g.potential(j)) == 0.0);
  }
}

TEST_CASE("descent on the hand example reaches the flat minimum") {
  auto alg = algebra2(0.37);
  auto trace = minimize_ym(hand_connection(alg, 1.0), {});
  CHECK(trace.converged);
  CHECK_FALSE(trace.line_search_failed);
  REQUIRE(trace.records.size() >= 2u);
  CHECK(trace.records.front().ym == doctest::Approx(2.0).epsilon(1e-12));
  for (std::size_t k = 1; k < trace.records.size(); ++k) CHECK(trace.records[k].ym < trace.records[k - 1].ym);
  CHECK(trace.records.back().ym <= 1e-20);
}

TEST_CASE("descent traces are monotone and keep the invariants") {
  // n = 2 cases only: descent fills the truncation box within a few steps
  std::mt19937_64 rng(54);
  for (int i = 0; i < 5; ++i) {
    CAPTURE(i);
    Connection c = fixture::random_connection(fixture::case_for(i), rng, 0.5, kRoomy);
    DescentParams params;
    params.max_iter = 6;
    auto trace = minimize_ym(c, params);
    CHECK_FALSE(trace.line_search_failed);
    for (std::size_t k = 1; k < trace.records.size(); ++k) {
      CHECK(trace.records[k].ym <= trace.records[k - 1].ym);
      CHECK(trace.records[k].step > 0.0);
    }
    REQUIRE(trace.final_connection.has_value());
    const auto& fin = *trace.final_connection;
    for (const auto& a : fin.potentials()) {
      auto r = potential_residuals(*fin.module(), Convention::dynamical, a);
      CHECK(r.symmetry <= 1e-10);
      CHECK(r.compression <= 1e-10);
    }
    CHECK(std::abs(trace.records.back().ym - ym_dynamical(fin)) == 0.0);
    CHECK(trace.records.back().ym < trace.records.front().ym);
  }
}

TEST_CASE("descent is deterministic") {
  std::mt19937_64 rng_a(55), rng_b(55);
  Connection a = fixture::random_connection(fixture::case_for(2), rng_a, 0.5, kRoomy);
  Connection b = fixture::random_connection(fixture::case_for(2), rng_b, 0.5, kRoomy);
  DescentParams params;
  params.max_iter = 5;
  auto ta = minimize_ym(a, params);
  auto tb = minimize_ym(b, params);
  REQUIRE(ta.records.size() == tb.records.size());
  for (std::size_t k = 0; k < ta.records.size(); ++k) {
    CHECK(ta.records[k].ym == tb.records[k].ym);
    CHECK(ta.records[k].step == tb.records[k].step);
  }
}
