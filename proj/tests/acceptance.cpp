// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "fixtures.hpp"
#include "nctorus/clifford.hpp"
#include "nctorus/errors.hpp"
#include "nctorus/forms.hpp"
#include "nctorus/optimize.hpp"

using namespace nctorus;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int failures = 0;

void report(int k, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("criterion %d %s: %s\n", k, o.pass ? "PASS" : "FAIL", o.detail.c_str());
  std::fflush(stdout);
}

// Cross-check gaps of every ym_spectral call in criteria 1 and 2.
double worst_gap = 0.0;
int gap_calls = 0;
// Curvature skew residuals of the criterion 1 connections.
double worst_skew = -1.0;

SpectralYangMills tracked_ym_spectral(const Connection& c) {
  SpectralYangMills ys = ym_spectral(c);
  worst_gap = std::max(worst_gap, ys.relative_gap);
  ++gap_calls;
  return ys;
}

Outcome theorem() {
  std::mt19937_64 rng(1001);
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  int count = 0;
  bool cover[2][2] = {};
  worst_skew = 0.0;
  for (int i = 0; i < 50; ++i) {
    const fixture::Case cs = fixture::case_for(i);
    Connection c = fixture::random_connection(cs, rng);
    const double yd = ym_dynamical(c);
    const double ys = tracked_ym_spectral(phi_map(c)).value;
    worst = std::max(worst, std::abs(ys - dixmier_constant(cs.n) * yd) / std::max(1.0, yd));
    for (const auto& f : curvature(c).components) worst_skew = std::max(worst_skew, mat_l1_norm(mat_adjoint(f) + f));
    cover[cs.n - 2][cs.q - 1] = true;
    ++count;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool covered = cover[0][0] && cover[0][1] && cover[1][0] && cover[1][1];
  return {worst <= 1e-9 && secs < 60.0 && covered,
          fmt("%d connections, n in {2,3}, q in {1,2}, max |ys - c yd| / max(1, yd) = %.2e (tol 1e-9), %.1f s", count,
              worst, secs)};
}

Outcome hand_example() {
  auto alg = TorusAlgebra::make(DeformationMatrix(2, {0.0, -0.3, 0.3, 0.0}));
  auto u1 = TorusElement::generator(alg, 0);
  Connection c(module_new(TorusMatrix::identity(alg, 1)), Convention::dynamical,
               {TorusMatrix::zero(alg, 1), TorusMatrix(1, {u1 - adjoint(u1)})});
  const double yd = ym_dynamical(c);
  const double ys = tracked_ym_spectral(phi_map(c)).value;
  const double ed = std::abs(yd - 2.0), es = std::abs(ys - 1.0 / kPi);
  return {ed <= 1e-12 && es <= 1e-10, fmt("ym_dynamical = %.15g (err %.1e), ym_spectral = %.15g (err %.1e)", yd, ed, ys, es)};
}

Outcome constants() {
  const double e2 = std::abs(dixmier_constant(2) - 1.0 / (2.0 * kPi));
  const double e3 = std::abs(dixmier_constant(3) - 1.0 / (3.0 * kPi * kPi));
  const double e4 = std::abs(dixmier_constant(4) - 1.0 / (8.0 * kPi * kPi));
  const double worst = std::max({e2, e3, e4});
  return {worst <= 1e-12, fmt("c(2), c(3), c(4) max error %.1e", worst)};
}

Outcome curvature_skew() {
  if (worst_skew < 0.0) return {false, "criterion 1 did not produce connections"};
  return {worst_skew <= 1e-10, fmt("max |F^* + F| = %.2e over the criterion 1 connections", worst_skew)};
}

Outcome clifford() {
  int bad = 0, checks = 0;
  for (int n = 2; n <= 6; ++n) {
    CliffordRep rep = gamma_generate(n);
    const CMatrix id = CMatrix::identity(rep.N);
    const CMatrix zero(rep.N, rep.N);
    const auto& g = rep.gammas;
    for (int r = 0; r < n; ++r) {
      bad += !(g[r].adjoint() == g[r]);
      bad += !(g[r] * g[r] == id);
      checks += 2;
      for (int s = r + 1; s < n; ++s) {
        bad += !(g[r] * g[s] + g[s] * g[r] == zero);
        bad += mat_trace_normalized(g[r] * g[s]) != std::complex<double>(0.0);
        checks += 2;
      }
    }
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q)
        for (int l = 0; l < n; ++l)
          for (int m = l + 1; m < n; ++m) {
            const auto t = mat_trace_normalized((g[p] * g[q]).adjoint() * g[l] * g[m]);
            bad += t != std::complex<double>(p == l && q == m ? 1.0 : 0.0);
            ++checks;
          }
  }
  return {bad == 0, fmt("%d exact identities for n = 2..6, %d violated", checks, bad)};
}

Outcome calculus() {
  std::mt19937_64 rng(1006);
  const int trials = 50;
  double cocycle = 0.0, leibniz = 0.0, dd = 0.0, anti = 0.0, anti_central = 0.0, anti_flat = 0.0, pi = 0.0;
  for (int t = 0; t < trials; ++t) {
    const int n = 2 + t % 3;
    DeformationMatrix theta = oracle::random_theta(n, rng);
    auto r = oracle::random_exponent(n, 3, rng), s = oracle::random_exponent(n, 3, rng),
         u = oracle::random_exponent(n, 3, rng);
    Exponent rs(r), su(s);
    for (int k = 0; k < n; ++k) rs[k] += s[k], su[k] += u[k];
    cocycle = std::max(cocycle, std::abs(weyl_phase(r, s, theta) * weyl_phase(rs, u, theta) -
                                         weyl_phase(s, u, theta) * weyl_phase(r, su, theta)));

    auto alg = TorusAlgebra::make(theta);
    auto a = random_element(alg, 1, 0.3, rng), b = random_element(alg, 1, 0.3, rng);
    for (int j = 0; j < n; ++j)
      leibniz = std::max(leibniz, l1_norm(delta_tilde(j, a * b) - delta_tilde(j, a) * b - a * delta_tilde(j, b)));

    const OmegaD2Element x = d1(d0(a));
    for (const auto& comp : x.components()) dd = std::max(dd, l1_norm(comp));

    std::vector<TorusElement> wa, wb, wc;
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int j = 0; j < n; ++j) {
      wa.push_back(random_element(alg, 1, 0.4, rng));
      wb.push_back(random_element(alg, 1, 0.4, rng));
      wc.push_back(TorusElement::scalar(alg, complex(unif(rng), unif(rng))));
    }
    OmegaD1Element fa(wa), fb(wb), fc(wc);
    // generic coefficients: w.w' + w'.w = ([a_p, b_q] - [a_q, b_p])_{p<q}
    auto sum = omega1_product(fa, fb);
    sum += omega1_product(fb, fa);
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q)
        anti = std::max(anti, l1_norm(sum.at(p, q) - (wa[p] * wb[q] - wb[q] * wa[p]) + (wa[q] * wb[p] - wb[p] * wa[q])));
    // central coefficients in one factor: w.w' + w'.w = 0
    auto central = omega1_product(fa, fc);
    central += omega1_product(fc, fa);
    for (const auto& comp : central.components()) anti_central = std::max(anti_central, l1_norm(comp));
    // Theta = 0: w.w' + w'.w = 0
    auto flat = TorusAlgebra::make(DeformationMatrix::zero(n));
    std::vector<TorusElement> ga, gb;
    for (int j = 0; j < n; ++j) {
      ga.push_back(random_element(flat, 1, 0.4, rng));
      gb.push_back(random_element(flat, 1, 0.4, rng));
    }
    auto flat_sum = omega1_product(OmegaD1Element(ga), OmegaD1Element(gb));
    flat_sum += omega1_product(OmegaD1Element(gb), OmegaD1Element(ga));
    for (const auto& comp : flat_sum.components()) anti_flat = std::max(anti_flat, l1_norm(comp));

    const CliffordRep rep = gamma_generate(n);
    pi = std::max(pi, mat_l1_norm(pi_represent(fa, rep) * pi_represent(fb, rep) -
                                  pi_represent(omega1_product(fa, fb, true), rep)));
  }
  const double worst = std::max({cocycle, leibniz, dd, anti, anti_central, anti_flat, pi});
  return {worst <= 1e-12,
          fmt("%d instances each: cocycle %.1e, Leibniz %.1e, d1 d0 %.1e, product antisymmetry %.1e "
              "(central factor %.1e, Theta = 0 %.1e), pi_represent %.1e",
              trials, cocycle, leibniz, dd, anti, anti_central, anti_flat, pi)};
}

Outcome idempotents() {
  auto alg = TorusAlgebra::make(DeformationMatrix(2, {0.0, -0.23, 0.23, 0.0}), {14, TruncationMode::lossy, 1e-16});
  std::mt19937_64 rng(1007);
  IterationOptions opts{1e-9, 100};
  double res = 0.0, sim = 0.0;
  auto run = [&](const TorusMatrix& p) {
    auto out = idempotent_to_projection(p, opts);
    res = std::max({res, out.residuals.idempotent, out.residuals.self_adjoint});
    sim = std::max(sim, out.similarity);
  };
  for (int t = 0; t < 10; ++t) run(fixture::random_idempotent(alg, 0.1, rng));
  auto one = TorusElement::scalar(alg, 1.0), zero = TorusElement::zero(alg);
  run(TorusMatrix(2, {one, 0.3 * TorusElement::generator(alg, 0), zero, zero}));
  return {res <= 1e-8 && sim <= 1e-8,
          fmt("10 random v w idempotents plus [[1, 0.3 U_1], [0, 0]]: max residual %.1e, max similarity %.1e", res, sim)};
}

Outcome normalization() {
  auto alg = TorusAlgebra::make(DeformationMatrix(2, {0.0, -0.41, 0.41, 0.0}), {10, TruncationMode::lossy, 1e-16});
  std::mt19937_64 rng(1008);
  auto eye = TorusMatrix::identity(alg, 2);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    auto b = random_matrix(alg, 2, 1, 0.05, rng);
    auto tm = mat_adjoint(b) * b + mat_scale(0.5, eye);
    auto psi = hermitian_normalize(tm, {1e-10, 100});
    ModuleVector xi(std::vector<TorusElement>{random_element(alg, 1, 0.3, rng), random_element(alg, 1, 0.3, rng)});
    ModuleVector eta(std::vector<TorusElement>{random_element(alg, 1, 0.3, rng), random_element(alg, 1, 0.3, rng)});
    auto lhs = canonical_pairing(xi, mat_apply(tm, eta));
    auto rhs = canonical_pairing(mat_apply(psi.root, xi), mat_apply(psi.root, eta));
    worst = std::max(worst, l1_norm(lhs - rhs));
  }
  return {worst <= 1e-9, fmt("20 random (T, xi, eta): max |xi^* T eta - (Psi xi)^* (Psi eta)| = %.1e", worst)};
}

Outcome optimizer() {
  constexpr TruncationPolicy roomy{8, TruncationMode::lossy};
  std::mt19937_64 rng(1009);

  // gradient against central differences on 20 coordinates over two connections
  double fd_worst = 0.0;
  int coords = 0;
  for (int i : {3, 8}) {
    Connection c = fixture::random_connection(fixture::case_for(i), rng, 0.5, roomy);
    auto g = ym_gradient(c);
    const int q = c.module()->q();
    std::uniform_int_distribution<int> axis(0, c.dim() - 1), entry(0, q - 1), bit(0, 1);
    int here = 0;
    for (int drawn = 0; here < 10 && drawn < 2000; ++drawn) {
      const int j = axis(rng), a = entry(rng), b = entry(rng);
      auto dir = fixture::coordinate_direction(c, j, a, b, oracle::random_exponent(c.dim(), 1, rng), bit(rng) == 1);
      const double analytic = tangent_inner(g, dir);
      if (std::abs(analytic) < 1e-3) continue;
      fd_worst = std::max(fd_worst, std::abs(fixture::central_difference(c, dir, 1e-5) - analytic) / std::abs(analytic));
      ++here;
    }
    coords += here;
  }

  // monotone traces from random starts and from the hand example
  bool monotone = true;
  int traces = 0;
  for (int i = 0; i < 5; ++i) {
    Connection c = fixture::random_connection(fixture::case_for(i), rng, 0.5, roomy);
    DescentParams params;
    params.max_iter = 6;
    auto trace = minimize_ym(c, params);
    monotone = monotone && !trace.line_search_failed;
    for (std::size_t k = 1; k < trace.records.size(); ++k)
      monotone = monotone && trace.records[k].ym <= trace.records[k - 1].ym;
    ++traces;
  }

  // flat connections: zero gradient and no movement
  bool fixed = true;
  for (int kind = 0; kind < 4; ++kind)
    for (int n : {2, 3}) {
      auto alg = TorusAlgebra::make(oracle::random_theta(n, rng), roomy);
      Connection flat = grassmannian(module_new(fixture::projection(alg, 2, kind, rng)), Convention::dynamical);
      auto trace = minimize_ym(flat, {});
      fixed = fixed && trace.records.size() == 1 && trace.records[0].ym == 0.0 && trace.records[0].grad_norm == 0.0;
      for (int j = 0; j < n; ++j)
        fixed = fixed && mat_l1_norm(trace.final_connection->potential(j) - flat.potential(j)) == 0.0;
    }

  return {coords == 20 && fd_worst <= 1e-6 && monotone && fixed,
          fmt("%d coordinates, max FD relative error %.1e; %d traces monotone: %s; flat fixed points: %s", coords,
              fd_worst, traces, monotone ? "yes" : "no", fixed ? "yes" : "no")};
}

Outcome cross_check() {
  if (gap_calls == 0) return {false, "no ym_spectral calls recorded"};
  return {worst_gap <= 1e-10, fmt("%d ym_spectral calls in criteria 1-2, max relative gap %.1e", gap_calls, worst_gap)};
}

}  // namespace

int main() {
  report(1, theorem);
  report(2, hand_example);
  report(3, constants);
  report(4, curvature_skew);
  report(5, clifford);
  report(6, calculus);
  report(7, idempotents);
  report(8, normalization);
  report(9, optimizer);
  report(10, cross_check);
  return failures == 0 ? 0 : 1;
}
