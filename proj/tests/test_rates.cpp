// Copyright 2026 the devlab authors
// SPDX-License-Identifier: Apache-2.0

#include "devlab/rates.hpp"

#include <cmath>

#include "devlab/errors.hpp"
#include "doctest.h"

using namespace devlab;

TEST_CASE("triangle deviation scales at the worked points") {
  RegimeReport rep = rate_functions_triangle({1024, 0.25, 100});
  CHECK(rep.normal == doctest::Approx(40960.0));
  CHECK(rep.star == doctest::Approx(1300.7432).epsilon(1e-4));
  CHECK(rep.hub == 0.0);
  CHECK(rep.clique == doctest::Approx(612.777).epsilon(1e-3));
  CHECK(rep.max_value == doctest::Approx(40960.0));
  CHECK(rep.argmax == Regime::normal);

  const double ell = std::log(4.0);
  const double nl = 1024 * ell;
  RegimeReport boundary = rate_functions_triangle({1024, 0.25, nl});
  CHECK(boundary.star == doctest::Approx(0.25 * 1024.0 * 1024.0).epsilon(1e-12));
  CHECK(boundary.hub == doctest::Approx(boundary.star).epsilon(1e-12));

  RegimeReport hub2 = rate_functions_triangle({1024, 0.25, 2 * nl});
  CHECK(hub2.star == 0.0);
  CHECK(hub2.max_value == doctest::Approx(524288.0));
  CHECK(hub2.argmax == Regime::hub);

  CHECK_THROWS_AS(rate_functions_triangle({1024, 0.75, 10}), ParamError);
  CHECK_THROWS_AS(rate_functions_triangle({1024, 0.25, -1}), ParamError);
}

TEST_CASE("cherry deviation scales and crossovers") {
  // below the normal/star crossover the normal term is the argmax
  const int64_t n = 4096;
  const double t = 0.1;
  const double ell = std::log(1 / t);
  const double cross = std::pow(t, 2.0 / 3.0) * double(n) * std::pow(ell, 4.0 / 3.0);
  RegimeReport low = rate_functions_cherry({n, t, 0.5 * cross});
  CHECK(low.argmax == Regime::normal);
  RegimeReport mid = rate_functions_cherry({n, t, 2.0 * cross});
  CHECK(mid.argmax == Regime::star);

  // boundary value equality at b = n ell: (n ell)^2 / ell^2 = n^2 = HUB
  RegimeReport at = rate_functions_cherry({n, t, double(n) * ell});
  const double star_formula = std::pow(double(n) * ell, 2) / (ell * ell);
  CHECK(at.hub == doctest::Approx(star_formula).epsilon(1e-12));
  CHECK(at.hub == doctest::Approx(double(n) * double(n)).epsilon(1e-12));

  // dual evaluation: independent exp/log re-derivation at a reference point
  // (b below n ell so the star indicator is active)
  RegimeReport rd = rate_functions_cherry({10000, 0.1, 10000.0});
  const double n_d = 10000.0, b_d = 10000.0;
  CHECK(rd.normal ==
        doctest::Approx(std::exp(0.5 * std::log(b_d) + std::log(0.1) + 1.5 * std::log(n_d)))
            .epsilon(1e-12));
  CHECK(rd.star == doctest::Approx(std::exp(2 * std::log(b_d) - 2 * std::log(std::log(10.0))))
                       .epsilon(1e-12));
  // above n ell the star indicator switches off
  CHECK(rate_functions_cherry({10000, 0.1, 100000.0}).star == 0.0);
}

TEST_CASE("kappa branches, continuity, and the comparison inequalities") {
  const int64_t n = 2048;
  const double t = 0.125;
  const double ell = std::log(1 / t);

  // first branch
  KappaReport low = kappa({n, t, 0.5 * std::sqrt(t) * double(n) * ell});
  CHECK(low.kappa == doctest::Approx(t * double(n) * double(n)));

  // continuity at both breakpoints
  for (double b : {std::sqrt(t) * double(n) * ell, double(n) * ell}) {
    KappaReport a = kappa({n, t, b * (1 - 1e-9)});
    KappaReport c = kappa({n, t, b * (1 + 1e-9)});
    CHECK(a.kappa == doctest::Approx(c.kappa).epsilon(1e-6));
  }

  // kappa_plus absent below 32 t n
  KappaReport absent = kappa({n, t, 16 * t * double(n)});
  CHECK_FALSE(absent.kappa_plus_defined);

  // grid verification of M >= t kappa for b >= 32 t n, and the cherry
  // comparisons M2 / M3
  for (int pn = 8; pn <= 12; ++pn) {
    const int64_t gn = int64_t(1) << pn;
    for (int pt = 1; pt <= 5; ++pt) {
      const double gt = std::ldexp(1.0, -pt);
      const double gell = std::log(1 / gt);
      const double b_lo = 3 * std::log(double(gn));
      const double b_hi = gt * double(gn) * double(gn) * gell;
      for (int k = 0; k <= 24; ++k) {
        const double b = b_lo * std::pow(b_hi / b_lo, k / 24.0);
        KappaReport kr = kappa({gn, gt, b});
        CHECK(kr.ratio_mch_sq_vs_btn_kappa >= 1.0 - 1e-12);
        if (b >= 32 * gt * double(gn)) {
          CHECK(kr.kappa_plus_defined);
          CHECK(kr.ratio_m_vs_t_kappa >= 1.0 - 1e-12);
          CHECK(kr.ratio_mch_vs_kappa_plus >= 1.0 - 1e-12);
        }
      }
    }
  }
}

TEST_CASE("M is non-decreasing in b across the n ell boundary") {
  for (int pt = 1; pt <= 6; ++pt) {
    const double t = std::ldexp(1.0, -pt);
    const int64_t n = 4096;
    const double ell = std::log(1 / t);
    const double b_lo = 3 * std::log(double(n));
    const double b_hi = t * double(n) * double(n) * ell;
    double prev = 0;
    for (int i = 0; i <= 400; ++i) {
      // dense log grid plus the exact boundary point
      double b = b_lo * std::pow(b_hi / b_lo, i / 400.0);
      if (i == 200) b = double(n) * ell;
      const double m_val = rate_M_triangle({n, t, b});
      if (i > 0 && b >= prev) CHECK(m_val >= prev * (1 - 1e-12));
      prev = m_val;
    }
  }
}

TEST_CASE("argmax of M corresponds to the argmin branch of r at a = M(b,t)") {
  for (int pn = 9; pn <= 13; pn += 2) {
    const int64_t n = int64_t(1) << pn;
    for (int pt = 1; pt <= 5; ++pt) {
      const double t = std::ldexp(1.0, -pt);
      const double b_lo = 3 * std::log(double(n));
      const double b_hi = t * double(n) * double(n) * std::log(1 / t);
      for (int i = 0; i <= 20; ++i) {
        const double b = b_lo * std::pow(b_hi / b_lo, i / 20.0);
        RegimeReport rep = rate_functions_triangle({n, t, b});
        // only judge points where one regime dominates clearly; near the
        // crossovers the labels legitimately disagree up to constants
        double second = 0;
        for (double v : {rep.normal, rep.star, rep.hub, rep.clique}) {
          if (v < rep.max_value && v > second) second = v;
        }
        if (rep.max_value < 4 * second) continue;
        auto inv = rate_r_of_a(n, t, rep.max_value);
        CHECK(to_string(inv.argmin) == to_string(rep.argmax));
      }
    }
  }
}

TEST_CASE("FMN minus DE: the delta^3 and log corrections are relatively small") {
  const int64_t n = 1000000;
  const double p = 0.3;
  double prev_ratio = 1e9;
  for (double delta : {1e-4, 2e-4, 4e-4, 1e-3}) {
    GnpRateParams gp{n, p, delta};
    const double de = gnp_rate(gp, GnpVariant::asymptoticDE).value;
    const double fmn = gnp_rate(gp, GnpVariant::fmn).value;
    const double ratio = std::abs(fmn - de) / de;
    CHECK(ratio < 0.05);
    // deeper into the joint validity regime the correction shrinks
    CHECK(ratio < prev_ratio);
    prev_ratio = ratio;
  }
}

TEST_CASE("r(t, a): branch selection and duality with M") {
  // small deviations fall to the normal branch
  auto small = rate_r_of_a(1000, 0.1, 10.0);
  CHECK(small.argmin == Regime::normal);
  CHECK(small.value == doctest::Approx(small.branch_normal));

  auto point = rate_r_of_a(1000, 0.1, 1e6);
  const double ell = std::log(10.0);
  CHECK(point.branch_normal == doctest::Approx(1e12 / (1e-3 * 1e9)));
  CHECK(point.branch_star_hub ==
        doctest::Approx(std::sqrt(1e6) * ell / std::sqrt(0.1) + 1e6 * ell / (0.1 * 1000)));
  CHECK(point.branch_clique == doctest::Approx(std::pow(1e6, 2.0 / 3.0) * ell));
  CHECK(point.value == doctest::Approx(std::min({point.branch_normal, point.branch_star_hub,
                                                 point.branch_clique})));

  // inverting M recovers b up to a bounded factor across regimes
  for (int pn = 9; pn <= 13; ++pn) {
    const int64_t n = int64_t(1) << pn;
    for (int pt = 1; pt <= 5; ++pt) {
      const double t = std::ldexp(1.0, -pt);
      const double b_lo = 3 * std::log(double(n));
      const double b_hi = t * double(n) * double(n) * std::log(1 / t);
      for (int k = 0; k <= 16; ++k) {
        const double b = b_lo * std::pow(b_hi / b_lo, k / 16.0);
        const double m_val = rate_M_triangle({n, t, b});
        const double back = rate_r_of_a(n, t, m_val).value;
        CHECK(back / b > 1.0 / 8);
        CHECK(back / b < 8.0);
      }
    }
  }
}

TEST_CASE("lower tail rate") {
  const int64_t n = 500;
  const double t = 0.2;
  auto unit = lower_tail_rate(n, t, std::pow(t, 1.5) * std::pow(double(n), 1.5));
  CHECK(unit.value == doctest::Approx(1.0));
  auto once = lower_tail_rate(n, t, 3e4);
  auto twice = lower_tail_rate(n, t, 6e4);
  CHECK(twice.value == doctest::Approx(4 * once.value));
  CHECK(once.value == doctest::Approx(9e8 / (0.008 * 1.25e8)));
  CHECK(once.window_low_ok);
  // a = 3e4 sits above the t^{3/2} n^2 ceiling (~22361) and is flagged
  CHECK_FALSE(once.window_high_ok);
  auto inside = lower_tail_rate(n, t, 2e4);
  CHECK(inside.window_low_ok);
  CHECK(inside.window_high_ok);
}

TEST_CASE("gnp rate variants") {
  GnpRateParams gp{150, 0.3, 0.2067};
  auto a36 = gnp_rate(gp, GnpVariant::asymptotic36);
  CHECK(a36.value == doctest::Approx(0.2067 * 0.2067 * 0.3 * 150 * 150 / 36.0));
  CHECK(a36.value == doctest::Approx(8.0).epsilon(0.01));

  auto ade = gnp_rate(gp, GnpVariant::asymptoticDE);
  CHECK(ade.value / a36.value == doctest::Approx(1.0 / 0.7).epsilon(1e-12));

  // delta -> 0 limits for the pure power-law variants (localised decays as
  // delta^{1/2..2/3}, so it needs a smaller delta to get equally close to 0)
  for (auto variant : {GnpVariant::asymptotic36, GnpVariant::asymptoticDE}) {
    CHECK(gnp_rate({150, 0.3, 1e-9}, variant).value < 1e-6);
  }
  CHECK(gnp_rate({150, 0.3, 1e-15}, GnpVariant::localised).value < 1e-4);
  CHECK(gnp_rate({150, 0.3, 1e-9}, GnpVariant::localised).value <
        gnp_rate({150, 0.3, 1e-6}, GnpVariant::localised).value);

  // FMN carries the delta^3 correction and the -log(n delta) term
  GnpRateParams fm{1000, 0.4, 0.01};
  auto f = gnp_rate(fm, GnpVariant::fmn);
  const double n = 1000, p = 0.4, d = 0.01, q = 0.6;
  const double expect = d * d * p * n * n / (36 * q) -
                        (7 - 8 * p) * d * d * d * p * n * n / (324 * q * q) +
                        std::log(n * d) - 0.5 * std::log(9 * q / (M_PI * p));
  CHECK(f.value == doctest::Approx(expect).epsilon(1e-12));
  CHECK(f.window_ok);  // 1/n <= 0.01 <= n^{-1/2}

  auto prec = gnp_rate(gp, GnpVariant::precise);
  const double xs = gp.x_star();
  CHECK(xs == doctest::Approx((std::cbrt(1.2067) - 1) * std::sqrt(0.3 * gp.big_n() / 0.7)));
  CHECK(prec.value > xs * xs / 2 - 5.0);
  CHECK(prec.error_band > 0.0);

  CHECK_THROWS_AS(gnp_rate({150, 0.3, -1.0}, GnpVariant::asymptotic36), ParamError);
}

TEST_CASE("regime map labels and boundary extraction") {
  // Fig 2 sanity: small positive eta at gamma = -0.1 lands in the normal
  // region; the theta = 0 column of Fig 1 is the large-deviation line
  auto fig2 = regime_map({-0.1}, {0.35}, MapMode::t_b, 1000000);
  REQUIRE(fig2.size() == 1);
  CHECK(fig2[0].label == "normal");

  auto fig1 = regime_map({-0.1}, {0.0}, MapMode::t_a, 1000000);
  REQUIRE(fig1.size() == 1);
  CHECK(fig1[0].large_deviation);

  // theta = -1 - gamma/2 is exactly the standard-deviation line; just above
  // it the non-localised (normal) region starts
  auto fig3 = regime_map({-0.2}, {-0.95, -0.8, -0.05}, MapMode::p_delta, 1000000);
  REQUIRE(fig3.size() == 3);
  CHECK(fig3[0].label == "small");
  CHECK(fig3[1].label == "normal");
  CHECK(fig3[2].label != "normal");

  // normal/clique boundary in t-b mode at fixed gamma: the analytic crossover
  // b* solves NORMAL = CLIQUE, i.e. b* = t^{3/2} n^{3/2} ell^{3/2}
  const double n = 1e6;
  const double gamma = -0.45;
  const double t = std::pow(n, gamma);
  const double ell = std::log(1 / t);
  const double analytic = std::pow(t * n * ell, 1.5);
  // bisection oracle on the defining equality
  double lo = analytic / 100, hi = analytic * 100;
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    const double normal = std::sqrt(mid) * std::pow(t, 1.5) * std::pow(n, 1.5);
    const double clique = std::pow(mid / ell, 1.5);
    (normal > clique ? lo : hi) = mid;
  }
  const double solved = std::sqrt(lo * hi);
  CHECK(solved == doctest::Approx(analytic).epsilon(1e-3));

  // the grid flip brackets the analytic boundary (fine steps: the clique
  // wedge between the normal and star regions is narrow at this gamma)
  std::vector<double> etas;
  const double eta_star = std::log(analytic) / std::log(n);
  for (int k = -10; k <= 10; ++k) etas.push_back(eta_star + k * 0.002);
  auto row = regime_map({gamma}, etas, MapMode::t_b, int64_t(n));
  int flip = -1;
  for (size_t i = 0; i + 1 < row.size(); ++i) {
    if (row[i].label == "normal" && row[i + 1].label == "clique") flip = int(i);
  }
  CHECK(flip >= 0);
}
