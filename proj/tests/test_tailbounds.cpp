// Copyright 2026 the devlab authors
// SPDX-License-Identifier: Apache-2.0

#include "devlab/tailbounds.hpp"

#include <cmath>

#include "devlab/errors.hpp"
#include "devlab/graph.hpp"
#include "devlab/rng.hpp"
#include "doctest.h"

using namespace devlab;

TEST_CASE("chernoff family") {
  CHECK(chernoff_bound(ChernoffForm::h1, {.mu = 100, .a = 0}) == doctest::Approx(1.0));
  CHECK(chernoff_bound(ChernoffForm::h1, {.mu = 100, .a = 30}) ==
        doctest::Approx(std::exp(-900.0 / 220.0)).epsilon(1e-12));
  CHECK(chernoff_bound(ChernoffForm::h2, {.mu = 50, .a = 10}) ==
        doctest::Approx(std::exp(-1.0)));
  CHECK(chernoff_bound(ChernoffForm::h3, {.mu = 10, .theta = 3.0}) ==
        doctest::Approx(std::exp(-30 * (std::log(3.0) - 1))));
  CHECK(chernoff_bound(ChernoffForm::h4, {.mu = 5, .j = 3, .nu = 10}) ==
        doctest::Approx(std::exp(-60.0)));
  CHECK(chernoff_bound(ChernoffForm::h6, {.mu = 5, .j = 4, .nu = 10}) ==
        doctest::Approx(std::min(1.0, 2 * std::exp(-80.0))));
  // bounds are probabilities: prefactors are capped at 1
  CHECK(chernoff_bound(ChernoffForm::h5, {.mu = 100, .a = 1}) == doctest::Approx(1.0));
  CHECK(chernoff_bound(ChernoffForm::h5, {.mu = 1, .a = 50}) ==
        doctest::Approx(4 * std::exp(-2500.0 / 108.0)));

  CHECK_THROWS_WITH_AS(chernoff_bound(ChernoffForm::h3, {.mu = 10, .theta = 2.0}),
                       doctest::Contains("theta >= e"), ParamError);
  CHECK_THROWS_WITH_AS(chernoff_bound(ChernoffForm::h4, {.mu = 20, .j = 3, .nu = 10}),
                       doctest::Contains("nu >= mu"), ParamError);
  CHECK_THROWS_WITH_AS(chernoff_bound(ChernoffForm::h6, {.mu = 1, .j = 3.5, .nu = 2}),
                       doctest::Contains("j >= 4"), ParamError);
}

TEST_CASE("valid hypotheses always give a bound in (0, 1]") {
  // parameter ranges keep every exponent inside double range, so the
  // mathematical (0, 1] statement is visible through floating point
  devlab::Rng rng(31337);
  for (int it = 0; it < 500; ++it) {
    const double mu = 0.1 + 3 * rng.uniform();
    const double a = 6 * rng.uniform();
    const double nu = mu + rng.uniform();
    for (double v : {chernoff_bound(ChernoffForm::h1, {.mu = mu, .a = a}),
                     chernoff_bound(ChernoffForm::h2, {.mu = mu, .a = a}),
                     chernoff_bound(ChernoffForm::h3, {.mu = mu, .theta = 2.72 + 5 * rng.uniform()}),
                     chernoff_bound(ChernoffForm::h4, {.mu = mu, .j = 3 + 2 * rng.uniform(), .nu = nu}),
                     chernoff_bound(ChernoffForm::h5, {.mu = mu, .a = a}),
                     chernoff_bound(ChernoffForm::h6, {.mu = mu, .j = 4 + 2 * rng.uniform(), .nu = nu}),
                     freedman_bound(0.1 + a, mu, 0.1 + rng.uniform())}) {
      CHECK(v > 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("hoeffding-azuma") {
  CHECK(azuma_bound({1, 2, 3}, 0).value == doctest::Approx(1.0));
  std::vector<double> c(100, 1.0);
  CHECK(azuma_bound(c, 20).value == doctest::Approx(std::exp(-2.0)));

  // homogeneity: scaling c and a together leaves the bound unchanged
  std::vector<double> c2(100, 2.5);
  CHECK(azuma_bound(c2, 50).value == doctest::Approx(std::exp(-2.0)));

  auto degen = azuma_bound({0, 0}, 1.0);
  CHECK(degen.degenerate);
  CHECK(degen.value == 0.0);
}

TEST_CASE("freedman and its converse") {
  CHECK(freedman_bound(10, 100, 1) == doctest::Approx(std::exp(-100.0 / 220.0)));
  // monotone: decreasing in alpha, increasing in beta and R
  CHECK(freedman_bound(20, 100, 1) < freedman_bound(10, 100, 1));
  CHECK(freedman_bound(10, 200, 1) > freedman_bound(10, 100, 1));
  CHECK(freedman_bound(10, 100, 2) > freedman_bound(10, 100, 1));

  // at (1e3, 1e5, 1) the ratio hypothesis holds for delta = 1 but the log
  // hypothesis fails for every delta <= 1: alpha^2/beta = 10 < 16 log 64
  auto conv = converse_freedman_bound(1e3, 1e5, 1.0);
  CHECK_FALSE(conv.feasible);
  CHECK(conv.hyp_ratio_ok);
  CHECK_FALSE(conv.hyp_log_ok);
  CHECK(std::isnan(conv.value));

  // feasible case: hypothesis 1 binds, so the bisected delta is
  // 3 sqrt(R alpha / beta)
  const double alpha = 1e3, beta = 1e4, big_r = 1.0;
  CHECK(alpha * alpha / beta >= 16 * std::log(64.0));
  auto ok = converse_freedman_bound(alpha, beta, big_r);
  CHECK(ok.feasible);
  CHECK(ok.delta == doctest::Approx(3 * std::sqrt(big_r * alpha / beta)).epsilon(1e-9));
  CHECK(ok.value ==
        doctest::Approx(0.5 * std::exp(-alpha * alpha * (1 + 4 * ok.delta) / (2 * beta))));

  // smaller delta gives a stronger (larger) lower bound, so the bisected
  // value dominates the delta = 1 evaluation
  CHECK(ok.value >= 0.5 * std::exp(-alpha * alpha * 5 / (2 * beta)));

  auto infeasible = converse_freedman_bound(10, 1, 100);
  CHECK_FALSE(infeasible.feasible);
  CHECK(std::isnan(infeasible.value));
}

TEST_CASE("psi-lipschitz bound and exhaustive verification") {
  PsiWeights w{6, std::vector<double>(15, 1.0)};
  CHECK(psi_lipschitz_bound(w, 0.3, 0) == doctest::Approx(1.0));
  CHECK(psi_lipschitz_bound(w, 0.3, 10) ==
        doctest::Approx(std::exp(-100.0 / (24 * 0.3 * 15 + 60))));

  // the edge count is constant on G_{n,m}: psi = 0 verifies exactly
  PsiWeights zero{5, std::vector<double>(10, 0.0)};
  auto edge_count = [](const GraphSnapshot& g) { return double(g.m()); };
  CHECK(psi_lipschitz_verify(edge_count, zero, 5, 4) == doctest::Approx(0.0));

  // the triangle count is not 0-Lipschitz: the verifier must catch it
  auto tri = [](const GraphSnapshot& g) { return double(count_triangles(g)); };
  CHECK(psi_lipschitz_verify(tri, zero, 5, 4) > 0.0);

  // sigma-weighted degree deviations with psi(uw) = |sigma_u| + |sigma_w|;
  // zero-sum sigma keeps the centering term exactly zero, so the float
  // comparison is exact
  const std::vector<double> sigma = {2, -1, 1, 0, -2, 0};
  PsiWeights psig{6, std::vector<double>(15)};
  for (int64_t r = 0; r < 15; ++r) {
    auto [u, v] = edge_unrank(r);
    psig.psi[r] = std::abs(sigma[u]) + std::abs(sigma[v]);
  }
  auto f_sigma = [&sigma](const GraphSnapshot& g) {
    double weighted = 0, total = 0;
    for (int u = 0; u < g.n(); ++u) {
      weighted += sigma[u] * double(g.degree(u));
      total += sigma[u];
    }
    return weighted - 2.0 * double(g.m()) / g.n() * total;
  };
  CHECK(psi_lipschitz_verify(f_sigma, psig, 6, 7) == 0.0);

  CHECK_THROWS_AS(psi_lipschitz_verify(edge_count, zero, 9, 4), CapacityError);
}

TEST_CASE("binomial basics: pmf, tail, and the summation identity") {
  CHECK(log_binomial_pmf(10, 0.5, 5) == doctest::Approx(std::log(252.0 / 1024.0)).epsilon(1e-12));
  // full-range tail sums to one
  CHECK(log_binomial_tail(10, 0.3, 0) == doctest::Approx(0.0));
  // tail equals the direct log-domain summation
  for (int64_t k : {int64_t(320), int64_t(350), int64_t(380)}) {
    std::vector<double> logs;
    for (int64_t j = k; j <= 1000; ++j) logs.push_back(log_binomial_pmf(1000, 0.3, j));
    CHECK(log_binomial_tail(1000, 0.3, k) ==
          doctest::Approx(log_sum_exp(logs)).epsilon(1e-12));
  }
}

TEST_CASE("bahadur expansion") {
  // symmetric p: odd-order terms vanish, so J=1 gives E = 0
  CHECK(bahadur_correction_series(3.0, 1e4, 0.5, 1) == doctest::Approx(0.0));

  auto q10 = BinomialTailQuery::from_k(10, 0.5, 5, 3);
  auto r10 = bahadur(q10);
  CHECK(r10.log_point_exact == doctest::Approx(std::log(252.0 / 1024.0)).epsilon(1e-12));

  // point approximation quality at N = 1e4, p = 0.3, J = 3, and shrinking
  // error in N
  for (double x : {2.0, 3.0, 4.0, 6.0}) {
    auto r = bahadur(BinomialTailQuery::from_x(10000, 0.3, x, 3));
    CHECK(std::abs(r.log_point_exact - r.log_point_approx) <= 0.05);
    auto r_small = bahadur(BinomialTailQuery::from_x(1000, 0.3, x, 3));
    auto r_large = bahadur(BinomialTailQuery::from_x(100000, 0.3, x, 3));
    CHECK(std::abs(r_large.log_point_exact - r_large.log_point_approx) <
          std::abs(r_small.log_point_exact - r_small.log_point_approx));
  }
  // the tail approximation carries the Mills-ratio prefactor error, about
  // -log(1 - x^{-2} + 3x^{-4} - ...); it clears 0.05 only once x is large
  for (double x : {4.0, 6.0}) {
    auto r = bahadur(BinomialTailQuery::from_x(10000, 0.3, x, 3));
    CHECK(std::abs(r.log_tail_exact - r.log_tail_approx) <= 0.05);
  }
  auto r2 = bahadur(BinomialTailQuery::from_x(10000, 0.3, 2.0, 3));
  CHECK(r2.log_tail_approx - r2.log_tail_exact > 0.05);
  CHECK(r2.log_tail_approx - r2.log_tail_exact < 0.20);

  // successive corrections decay geometrically inside the window
  double prev = 0;
  for (int j = 1; j <= 6; ++j) {
    const double cur = bahadur_correction_series(4.0, 1e4, 0.3, j);
    if (j > 1) {
      const double step = std::abs(cur - prev);
      CHECK(step < 0.5 * std::abs(prev - bahadur_correction_series(4.0, 1e4, 0.3, j - 2)));
    }
    prev = cur;
  }

  CHECK_THROWS_AS(bahadur(BinomialTailQuery{10, 0.5, 0, 3}), ParamError);
}

TEST_CASE("mixture identity, exact enumeration") {
  auto m3 = mixture_identity_exact(3, 0.5, 0);
  CHECK(m3.lhs == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(m3.rhs == doctest::Approx(0.125).epsilon(1e-12));

  auto trivial = mixture_identity_exact(4, 0.3, -1);
  CHECK(trivial.lhs == doctest::Approx(1.0));
  CHECK(trivial.rhs == doctest::Approx(1.0));

  auto m5 = mixture_identity_exact(5, 0.4, 0);
  CHECK(std::abs(m5.lhs - m5.rhs) < 1e-12);

  CHECK_THROWS_AS(mixture_identity_exact(7, 0.5, 0), CapacityError);
}

TEST_CASE("mixture identity, paired MC") {
  auto mc = mixture_identity_mc(6, 0.35, 6, 4000, 99);
  CHECK(std::abs(mc.lhs - mc.rhs) < 0.05);
  auto exact = mixture_identity_exact(6, 0.35, 6);
  CHECK(std::abs(mc.lhs - exact.lhs) < 0.05);
  // determinism
  auto mc2 = mixture_identity_mc(6, 0.35, 6, 4000, 99);
  CHECK(mc.lhs == mc2.lhs);
  CHECK(mc.rhs == mc2.rhs);
}

TEST_CASE("clopper-pearson intervals") {
  auto [lo0, hi0] = clopper_pearson(0, 50);
  CHECK(lo0 == 0.0);
  CHECK(hi0 == doctest::Approx(1 - std::pow(0.025, 1.0 / 50)).epsilon(1e-6));

  auto [lon, hin] = clopper_pearson(50, 50);
  CHECK(hin == 1.0);
  CHECK(lon == doctest::Approx(std::pow(0.025, 1.0 / 50)).epsilon(1e-6));

  auto [lo, hi] = clopper_pearson(5, 10);
  CHECK(lo < 0.5);
  CHECK(hi > 0.5);
  // defining equations: P(Bin(10, lo) >= 5) = alpha/2, P(Bin(10, hi) <= 5) = alpha/2
  CHECK(std::exp(log_binomial_tail(10, lo, 5)) == doctest::Approx(0.025).epsilon(1e-6));
  CHECK(1 - std::exp(log_binomial_tail(10, hi, 6)) == doctest::Approx(0.025).epsilon(1e-6));
}
