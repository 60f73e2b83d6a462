// Copyright 2026 the devlab authors
// SPDX-License-Identifier: Apache-2.0

#include "devlab/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "devlab/errors.hpp"
#include "devlab/tailbounds.hpp"

namespace devlab {

double RateParams::ell() const { return std::log(1.0 / t); }

bool RateParams::ell_b_defined() const { return b > std::exp(1.0) * t * double(n); }

double RateParams::ell_b() const {
  if (!ell_b_defined()) throw ParamError("RateParams: ell_b needs b > e t n");
  return std::log(b / (std::exp(1.0) * t * double(n)));
}

void RateParams::validate() const {
  if (n < 2) throw ParamError("RateParams: n >= 2 required");
  if (!(t > 0 && t <= 0.5)) throw ParamError("RateParams: t in (0, 1/2] required");
  if (!(b > 0)) throw ParamError("RateParams: b > 0 required");
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::normal: return "normal";
    case Regime::star: return "star";
    case Regime::hub: return "hub";
    default: return "clique";
  }
}

namespace {

// Tie-break order normal < star < hub < clique: first strict improvement wins.
void finish_report(RegimeReport& rep, const RateParams& rp) {
  rep.max_value = rep.normal;
  rep.argmax = Regime::normal;
  const double vals[3] = {rep.star, rep.hub, rep.clique};
  const Regime labels[3] = {Regime::star, Regime::hub, Regime::clique};
  const int count = rep.has_clique ? 3 : 2;
  for (int i = 0; i < count; ++i) {
    if (vals[i] > rep.max_value) {
      rep.max_value = vals[i];
      rep.argmax = labels[i];
    }
  }
  const double n = double(rp.n);
  rep.window_ok = rp.b >= 3 * std::log(n) && rp.b <= rp.t * n * n * rp.ell();
  rep.density_ok = rp.t >= std::sqrt(std::log(n) / n);
}

RegimeReport triangle_core(const RateParams& rp) {
  const double n = double(rp.n), t = rp.t, b = rp.b, ell = rp.ell();
  RegimeReport rep;
  rep.normal = std::sqrt(b) * std::pow(t, 1.5) * std::pow(n, 1.5);
  rep.star = b <= n * ell ? b * b * t / (ell * ell) : 0.0;
  rep.hub = b >= n * ell ? b * t * n / ell : 0.0;
  rep.clique = std::pow(b / ell, 1.5);
  rep.has_clique = true;
  finish_report(rep, rp);
  return rep;
}

}  // namespace

RegimeReport rate_functions_triangle(const RateParams& rp) {
  rp.validate();
  return triangle_core(rp);
}

double rate_M_triangle(const RateParams& rp) {
  rp.validate();
  return triangle_core(rp).max_value;
}

RegimeReport rate_functions_cherry(const RateParams& rp) {
  rp.validate();
  const double n = double(rp.n), t = rp.t, b = rp.b, ell = rp.ell();
  RegimeReport rep;
  rep.normal = std::sqrt(b) * t * std::pow(n, 1.5);
  rep.star = b < n * ell ? b * b / (ell * ell) : 0.0;
  rep.hub = b >= n * ell ? b * n / ell : 0.0;
  rep.clique = 0.0;
  rep.has_clique = false;
  finish_report(rep, rp);
  return rep;
}

double rate_M_cherry(const RateParams& rp) { return rate_functions_cherry(rp).max_value; }

KappaReport kappa(const RateParams& rp) {
  rp.validate();
  const double n = double(rp.n), t = rp.t, b = rp.b, ell = rp.ell();
  KappaReport rep;
  if (b < std::sqrt(t) * n * ell) rep.kappa = t * n * n;
  else if (b < n * ell) rep.kappa = b * b / (ell * ell);
  else rep.kappa = b * n / ell;

  if (b >= 32 * t * n) {
    rep.kappa_plus_defined = true;
    rep.kappa_plus = b < n * ell ? b * b / (rp.ell_b() * rp.ell_b()) : b * n / ell;
    rep.ratio_m_vs_t_kappa = rate_M_triangle(rp) / (t * rep.kappa);
    rep.ratio_mch_vs_kappa_plus = 9.0 * rate_M_cherry(rp) / rep.kappa_plus;
  }
  const double m_ch = rate_M_cherry(rp);
  rep.ratio_mch_sq_vs_btn_kappa = m_ch * m_ch / (b * t * n * rep.kappa);
  return rep;
}

RateOfA rate_r_of_a(int64_t n, double t, double a) {
  if (!(a > 0)) throw ParamError("rate_r_of_a: a > 0 required");
  const double ell = std::log(1.0 / t);
  const double nn = double(n);
  RateOfA r;
  r.branch_normal = a * a / (t * t * t * nn * nn * nn);
  const double star_term = std::sqrt(a) * ell / std::sqrt(t);
  const double hub_term = a * ell / (t * nn);
  r.branch_star_hub = star_term + hub_term;
  r.branch_clique = std::pow(a, 2.0 / 3.0) * ell;
  r.value = std::min({r.branch_normal, r.branch_star_hub, r.branch_clique});
  if (r.value == r.branch_normal) r.argmin = Regime::normal;
  else if (r.value == r.branch_star_hub) r.argmin = star_term >= hub_term ? Regime::star : Regime::hub;
  else r.argmin = Regime::clique;
  return r;
}

LowerTailRate lower_tail_rate(int64_t n, double t, double a) {
  const double nn = double(n);
  LowerTailRate r;
  r.value = a * a / (t * t * t * nn * nn * nn);
  const double scale = std::pow(t, 1.5);
  r.window_low_ok = a >= scale * std::pow(nn, 1.5) * std::sqrt(std::log(nn));
  r.window_high_ok = a <= scale * nn * nn;
  return r;
}

// --- G(n,p) -------------------------------------------------------------------

double GnpRateParams::x_star() const {
  return (std::cbrt(1 + delta) - 1) * std::sqrt(p * big_n() / q());
}

double GnpRateParams::m_star() const { return p * big_n() * std::cbrt(1 + delta); }

double GnpRateParams::m_tilde() const {
  // Mtilde(delta, p) = C M(delta^2 p n^2, 2 p); evaluated without the t <= 1/2
  // guard since 2p routinely exceeds it
  if (2 * p >= 1.0) return std::numeric_limits<double>::quiet_NaN();
  RateParams rp{n, 2 * p, delta * delta * p * double(n) * double(n)};
  const double ell = rp.ell();
  const double nn = double(n);
  const double normal = std::sqrt(rp.b) * std::pow(rp.t, 1.5) * std::pow(nn, 1.5);
  const double star = rp.b <= nn * ell ? rp.b * rp.b * rp.t / (ell * ell) : 0.0;
  const double hub = rp.b >= nn * ell ? rp.b * rp.t * nn / ell : 0.0;
  const double clique = std::pow(rp.b / ell, 1.5);
  return mtilde_constant * std::max({normal, star, hub, clique});
}

double GnpRateParams::m_minus() const {
  return m_star() - 2 * m_tilde() / (p * p * double(n));
}

GnpVariant gnp_variant_from_string(const std::string& s) {
  if (s == "asymptotic-36") return GnpVariant::asymptotic36;
  if (s == "asymptotic-DE") return GnpVariant::asymptoticDE;
  if (s == "FMN") return GnpVariant::fmn;
  if (s == "localised") return GnpVariant::localised;
  if (s == "precise") return GnpVariant::precise;
  throw ParamError("unknown gnp rate variant: " + s);
}

std::string to_string(GnpVariant v) {
  switch (v) {
    case GnpVariant::asymptotic36: return "asymptotic-36";
    case GnpVariant::asymptoticDE: return "asymptotic-DE";
    case GnpVariant::fmn: return "FMN";
    case GnpVariant::localised: return "localised";
    default: return "precise";
  }
}

namespace {

// Localisation threshold: min{p^{3/4} (log n)^{3/4},
//                             n^{-1/3} (log n)^{2/3} + p log(1/p)}.
double localisation_threshold(int64_t n, double p) {
  const double logn = std::log(double(n));
  return std::min(std::pow(p, 0.75) * std::pow(logn, 0.75),
                  std::pow(double(n), -1.0 / 3.0) * std::pow(logn, 2.0 / 3.0) +
                      p * std::log(1.0 / p));
}

}  // namespace

GnpRateResult gnp_rate(const GnpRateParams& gp, GnpVariant variant, int bahadur_terms) {
  if (!(gp.delta > 0)) throw ParamError("gnp_rate: delta > 0 required");
  if (!(gp.p > 0 && gp.p < 1)) throw ParamError("gnp_rate: p in (0,1) required");
  const double n = double(gp.n), p = gp.p, d = gp.delta, q = gp.q();
  const double logn = std::log(n);
  GnpRateResult res{};
  res.variant = variant;
  switch (variant) {
    case GnpVariant::asymptotic36:
      res.value = d * d * p * n * n / 36.0;
      res.window_ok = d >= 1.0 / (std::sqrt(p) * n) && d <= localisation_threshold(gp.n, p);
      res.window_note = "p^{-1/2} n^{-1} <= delta <= localisation threshold";
      break;
    case GnpVariant::asymptoticDE:
      res.value = d * d * p * n * n / (36.0 * q);
      res.window_ok = d >= 1.0 / (std::sqrt(p) * n) && d <= std::pow(p, 7);
      res.window_note = "p^{-1/2} n^{-1} <= delta <= p^7";
      break;
    case GnpVariant::fmn: {
      // minus the log of the displayed probability asymptotics
      res.value = d * d * p * n * n / (36.0 * q) -
                  (7 - 8 * p) * d * d * d * p * n * n / (324.0 * q * q) +
                  std::log(n * d) - 0.5 * std::log(9.0 * q / (M_PI * p));
      res.window_ok = d >= 1.0 / n && d <= 1.0 / std::sqrt(n);
      res.window_note = "n^{-1} <= delta <= n^{-1/2}";
      break;
    }
    case GnpVariant::localised: {
      const double clique = std::pow(d, 2.0 / 3.0) * p * p * n * n * logn;
      const double star_hub = std::sqrt(d) * p * std::pow(n, 1.5) * logn +
                              d * p * p * n * n * std::log(1.0 / p);
      res.value = std::min(clique, star_hub);
      res.window_ok = d >= localisation_threshold(gp.n, p) && d <= 1.0;
      res.window_note = "localisation threshold <= delta <= 1";
      break;
    }
    case GnpVariant::precise: {
      const double xs = gp.x_star();
      const double e_series = bahadur_correction_series(xs, gp.big_n(), p, bahadur_terms);
      res.value = xs * xs / 2 + e_series + std::log(xs);
      res.error_band = d * gp.m_tilde() / (p * p * n);
      res.window_ok = d >= 1.0 / (std::sqrt(p) * n) && d <= localisation_threshold(gp.n, p);
      res.window_note = "p^{-1/2} n^{-1} <= delta <= localisation threshold";
      break;
    }
  }
  return res;
}

// --- figure maps ----------------------------------------------------------------

MapMode map_mode_from_string(const std::string& s) {
  if (s == "t-a") return MapMode::t_a;
  if (s == "t-b") return MapMode::t_b;
  if (s == "p-delta") return MapMode::p_delta;
  throw ParamError("unknown regime map mode: " + s);
}

std::vector<MapPoint> regime_map(const std::vector<double>& gamma_grid,
                                 const std::vector<double>& theta_or_eta_grid,
                                 MapMode mode, int64_t reference_n) {
  std::vector<MapPoint> out;
  out.reserve(gamma_grid.size() * theta_or_eta_grid.size());
  const double n = double(reference_n);
  const double logn = std::log(n);
  for (double gamma : gamma_grid) {
    const double density = std::pow(n, gamma);
    for (double te : theta_or_eta_grid) {
      MapPoint pt{};
      pt.gamma = gamma;
      pt.theta_or_eta = te;
      switch (mode) {
        case MapMode::t_a: {
          const double t = density, ell = std::log(1 / t);
          const double delta = std::pow(n, te);
          const double a = delta * t * t * t * n * n * n;
          pt.large_deviation = te >= 0;
          const double b = rate_r_of_a(reference_n, t, a).value;
          if (b < 3 * logn) {
            pt.label = "small";
            break;
          }
          pt.normal = std::sqrt(b) * std::pow(t, 1.5) * std::pow(n, 1.5);
          pt.star = b <= n * ell ? b * b * t / (ell * ell) : 0.0;
          pt.hub = b >= n * ell ? b * t * n / ell : 0.0;
          pt.clique = std::pow(b / ell, 1.5);
          pt.m_value = std::max({pt.normal, pt.star, pt.hub, pt.clique});
          Regime arg = Regime::normal;
          double best = pt.normal;
          if (pt.star > best) { best = pt.star; arg = Regime::star; }
          if (pt.hub > best) { best = pt.hub; arg = Regime::hub; }
          if (pt.clique > best) { best = pt.clique; arg = Regime::clique; }
          pt.label = to_string(arg);
          break;
        }
        case MapMode::t_b: {
          const double t = density, ell = std::log(1 / t);
          const double b = std::pow(n, te);
          pt.large_deviation = b >= t * n * n * ell;
          if (b < 3 * logn) {
            pt.label = "small";
            break;
          }
          RegimeReport rep = triangle_core(RateParams{reference_n, t, b});
          pt.normal = rep.normal;
          pt.star = rep.star;
          pt.hub = rep.hub;
          pt.clique = rep.clique;
          pt.m_value = rep.max_value;
          pt.label = to_string(rep.argmax);
          break;
        }
        case MapMode::p_delta: {
          const double p = density;
          const double delta = std::pow(n, te);
          pt.large_deviation = te >= 0;
          // rates of the four competing causes (constants pinned to 1/36)
          pt.normal = delta * delta * p * n * n / 36.0;
          pt.clique = std::pow(delta, 2.0 / 3.0) * p * p * n * n * logn;
          pt.star = std::sqrt(delta) * p * std::pow(n, 1.5) * logn;
          pt.hub = delta * p * p * n * n * std::log(1.0 / p);
          if (delta < 1.0 / (std::sqrt(p) * n)) {
            pt.label = "small";
            pt.m_value = 0;
            break;
          }
          if (delta < localisation_threshold(reference_n, p)) {
            pt.label = "normal";
            pt.m_value = pt.normal;
          } else {
            pt.m_value = std::min(pt.clique, pt.star + pt.hub);
            Regime arg = Regime::clique;
            double best = pt.clique;
            if (pt.star < best) { best = pt.star; arg = Regime::star; }
            if (pt.hub < best) { best = pt.hub; arg = Regime::hub; }
            pt.label = to_string(arg);
          }
          break;
        }
      }
      out.push_back(pt);
    }
  }
  return out;
}

}  // namespace devlab
