// Copyright 2026 the devlab authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DEVLAB_RATES_HPP
#define DEVLAB_RATES_HPP

#include <string>
#include <vector>

namespace devlab {

// Shared parameter bundle for the G(n,m) deviation-scale functions.
// t is the edge density m/N, b the exponent target (probability e^{-b}),
// ell = log(1/t) and ell_b = log(b/(e t n)) (absent unless b > e t n).
struct RateParams {
  int64_t n;
  double t;
  double b;

  double ell() const;
  bool ell_b_defined() const;
  double ell_b() const;  // throws ParamError when undefined
  void validate() const;
};

enum class Regime { normal, star, hub, clique };
std::string to_string(Regime r);

struct RegimeReport {
  double normal = 0, star = 0, hub = 0, clique = 0;
  double max_value = 0;
  Regime argmax = Regime::normal;
  bool has_clique = true;       // false for the cherry variant
  bool window_ok = false;       // 3 log n <= b <= t n^2 ell
  bool density_ok = false;      // t >= n^{-1/2} (log n)^{1/2}, constant 1
};

// Triangle deviation scales:
//   NORMAL = b^{1/2} t^{3/2} n^{3/2}
//   STAR   = (b^2 t / ell^2) 1{b <= n ell}
//   HUB    = (b t n / ell)   1{b >= n ell}
//   CLIQUE = b^{3/2} / ell^{3/2}
RegimeReport rate_functions_triangle(const RateParams& rp);
double rate_M_triangle(const RateParams& rp);

// Cherry deviation scales:
//   NORMAL = b^{1/2} t n^{3/2}
//   STAR   = (b^2 / ell^2) 1{b < n ell}
//   HUB    = (b n / ell)   1{b >= n ell}
RegimeReport rate_functions_cherry(const RateParams& rp);
double rate_M_cherry(const RateParams& rp);

// Degree-deviation scale kappa and its large-b companion kappa_plus, with
// the comparison inequalities the deviation bounds lean on.
struct KappaReport {
  double kappa = 0;
  bool kappa_plus_defined = false;
  double kappa_plus = 0;
  // comparisons at constants pinned to 1 (ratios reported, bound >= 1 means ok)
  double ratio_m_vs_t_kappa = 0;        // M / (t kappa), for b >= 32 t n
  double ratio_mch_sq_vs_btn_kappa = 0; // M_ch^2 / (b t n kappa)
  double ratio_mch_vs_kappa_plus = 0;   // 9 M_ch / kappa_plus, when defined
};

KappaReport kappa(const RateParams& rp);

// Inverse rate r(t, a): the cheapest exponent over the three cause branches.
struct RateOfA {
  double value;
  Regime argmin;   // normal / star-or-hub composite encoded as star or hub / clique
  double branch_normal, branch_star_hub, branch_clique;
};
RateOfA rate_r_of_a(int64_t n, double t, double a);

// Lower-tail exponent a^2 / t^3 n^3 with validity-window flags.
struct LowerTailRate {
  double value;
  bool window_low_ok;   // a >= t^{3/2} n^{3/2} sqrt(log n)
  bool window_high_ok;  // a <= t^{3/2} n^2
};
LowerTailRate lower_tail_rate(int64_t n, double t, double a);

// --- G(n,p) rates ------------------------------------------------------------

struct GnpRateParams {
  int64_t n;
  double p;
  double delta;
  double mtilde_constant = 1.0;  // the C in Mtilde = C M(delta^2 p n^2, 2p)

  double q() const { return 1.0 - p; }
  double big_n() const { return 0.5 * double(n) * double(n - 1); }
  double x_star() const;
  double m_star() const;
  double m_tilde() const;
  double m_minus() const;
};

enum class GnpVariant { asymptotic36, asymptoticDE, fmn, localised, precise };
GnpVariant gnp_variant_from_string(const std::string& s);
std::string to_string(GnpVariant v);

struct GnpRateResult {
  GnpVariant variant;
  double value;                // rate, i.e. -log of the tail probability
  bool window_ok;              // variant-specific delta-range heuristic
  std::string window_note;
  double error_band = 0;       // |O(delta Mtilde / p^2 n)| term for `precise`
};

GnpRateResult gnp_rate(const GnpRateParams& gp, GnpVariant variant, int bahadur_terms = 8);

// --- figure-region maps -------------------------------------------------------

enum class MapMode { t_a, t_b, p_delta };
MapMode map_mode_from_string(const std::string& s);

struct MapPoint {
  double gamma;           // density exponent: t or p = n^gamma
  double theta_or_eta;    // deviation exponent
  double normal, star, hub, clique;
  double m_value;
  std::string label;      // argmax/argmin regime, or "small"
  bool large_deviation;   // on/right of the traditional large-deviation line
};

std::vector<MapPoint> regime_map(const std::vector<double>& gamma_grid,
                                 const std::vector<double>& theta_or_eta_grid,
                                 MapMode mode, int64_t reference_n = 1000000);

}  // namespace devlab

#endif  // DEVLAB_RATES_HPP
