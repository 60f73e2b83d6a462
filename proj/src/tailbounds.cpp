// Copyright 2026 the devlab authors
// SPDX-License-Identifier: Apache-2.0

#include "devlab/tailbounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "devlab/errors.hpp"
#include "devlab/graph.hpp"
#include "devlab/rng.hpp"

namespace devlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ChernoffForm chernoff_form_from_string(const std::string& s) {
  if (s == "h1") return ChernoffForm::h1;
  if (s == "h2") return ChernoffForm::h2;
  if (s == "h3") return ChernoffForm::h3;
  if (s == "h4") return ChernoffForm::h4;
  if (s == "h5") return ChernoffForm::h5;
  if (s == "h6") return ChernoffForm::h6;
  throw ParamError("unknown chernoff form: " + s);
}

double chernoff_bound(ChernoffForm form, const ChernoffArgs& args) {
  const double mu = args.mu, a = args.a;
  auto need = [](bool ok, const char* what) {
    if (!ok) throw ParamError(std::string("chernoff_bound: hypothesis violated: ") + what);
  };
  double v = 1.0;
  switch (form) {
    case ChernoffForm::h1:
      need(mu > 0, "mu > 0");
      need(a >= 0, "a >= 0");
      v = std::exp(-a * a / (2 * mu + 2 * a / 3));
      break;
    case ChernoffForm::h2:
      need(mu > 0, "mu > 0");
      need(a >= 0, "a >= 0");
      v = std::exp(-a * a / (2 * mu));
      break;
    case ChernoffForm::h3:
      need(mu > 0, "mu > 0");
      need(args.theta >= std::exp(1.0), "theta >= e");
      v = std::exp(-args.theta * mu * (std::log(args.theta) - 1));
      break;
    case ChernoffForm::h4:
      need(args.j >= 3, "j >= 3");
      need(args.nu >= mu, "nu >= mu");
      need(args.nu > 0, "nu > 0");
      v = std::exp(-args.j * std::exp2(args.j - 2) * args.nu);
      break;
    case ChernoffForm::h5:
      need(mu > 0, "mu > 0");
      need(a >= 0, "a >= 0");
      v = 4 * std::exp(-a * a / (8 * mu + 2 * a));
      break;
    case ChernoffForm::h6:
      need(args.j >= 4, "j >= 4");
      need(args.nu >= mu, "nu >= mu");
      need(args.nu > 0, "nu > 0");
      v = 2 * std::exp(-args.j * std::exp2(args.j - 3) * args.nu);
      break;
  }
  return std::min(v, 1.0);
}

AzumaResult azuma_bound(const std::vector<double>& c, double a) {
  if (a < 0) throw ParamError("azuma_bound: a >= 0 required");
  double sum_sq = 0;
  for (double ci : c) {
    if (ci < 0) throw ParamError("azuma_bound: increments must be >= 0");
    sum_sq += ci * ci;
  }
  if (sum_sq == 0) {
    if (a > 0) return {0.0, true};
    return {1.0, false};
  }
  return {std::exp(-a * a / (2 * sum_sq)), false};
}

double freedman_bound(double alpha, double beta, double big_r) {
  if (!(alpha > 0 && beta > 0 && big_r > 0)) {
    throw ParamError("freedman_bound: alpha, beta, R must be positive");
  }
  return std::exp(-alpha * alpha / (2 * (beta + big_r * alpha)));
}

ConverseFreedmanResult converse_freedman_bound(double alpha, double beta, double big_r) {
  if (!(alpha > 0 && beta > 0 && big_r > 0)) {
    throw ParamError("converse_freedman_bound: alpha, beta, R must be positive");
  }
  // hypothesis 1: beta/alpha >= 9 R / delta^2  <=>  delta >= 3 sqrt(R alpha / beta)
  // hypothesis 2: alpha^2/beta >= 16 delta^-2 log(64 delta^-2), LHS constant,
  //               RHS decreasing in delta, so the feasible set is an interval
  //               [delta_min, 1] when nonempty.
  auto hyp2_ok = [&](double d) {
    return alpha * alpha / beta >= 16.0 / (d * d) * std::log(64.0 / (d * d));
  };
  const double d1 = 3.0 * std::sqrt(big_r * alpha / beta);
  ConverseFreedmanResult res{};
  if (d1 > 1.0 || !hyp2_ok(1.0)) {
    res.feasible = false;
    res.delta = 1.0;
    res.value = std::numeric_limits<double>::quiet_NaN();
    res.hyp_ratio_ok = d1 <= 1.0;
    res.hyp_log_ok = hyp2_ok(1.0);
    return res;
  }
  double lo = 0.0, hi = 1.0;  // smallest delta with hyp2 satisfied
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid > 0 && hyp2_ok(mid)) hi = mid;
    else lo = mid;
  }
  res.delta = std::max(d1, hi);
  res.feasible = true;
  res.hyp_ratio_ok = true;
  res.hyp_log_ok = true;
  res.value = 0.5 * std::exp(-alpha * alpha * (1 + 4 * res.delta) / (2 * beta));
  return res;
}

double PsiWeights::norm_sq() const {
  double s = 0;
  for (double v : psi) s += v * v;
  return s;
}

double PsiWeights::psi_max() const {
  double s = 0;
  for (double v : psi) s = std::max(s, v);
  return s;
}

double psi_lipschitz_bound(const PsiWeights& w, double t, double a) {
  if (a < 0) throw ParamError("psi_lipschitz_bound: a >= 0 required");
  for (double v : w.psi) {
    if (v < 0) throw ParamError("psi_lipschitz_bound: weights must be >= 0");
  }
  if (a == 0) return 1.0;
  const double den = 24 * t * w.norm_sq() + 6 * a * w.psi_max();
  if (den == 0) return 0.0;
  return std::min(1.0, std::exp(-a * a / den));
}

double psi_lipschitz_verify(const std::function<double(const GraphSnapshot&)>& f,
                            const PsiWeights& w, int n, int64_t m) {
  if (n > 8) throw CapacityError("psi_lipschitz_verify: exhaustive check limited to n <= 8");
  const int64_t N = pair_count(n);
  if (m < 0 || m > N) throw ParamError("psi_lipschitz_verify: need 0 <= m <= N");
  if (int64_t(w.psi.size()) != N) throw ParamError("psi_lipschitz_verify: weight vector size mismatch");

  std::vector<Edge> pairs(N);
  for (int64_t r = 0; r < N; ++r) pairs[r] = edge_unrank(r);

  std::vector<int> combo(m);
  for (int64_t i = 0; i < m; ++i) combo[i] = int(i);
  double worst = 0.0;
  while (true) {
    uint64_t mask = 0;
    for (int r : combo) mask |= uint64_t(1) << r;
    std::vector<Edge> edges;
    edges.reserve(m);
    for (int r : combo) edges.push_back(pairs[r]);
    GraphSnapshot g(n, edges);
    const double fg = f(g);
    for (int64_t out = 0; out < int64_t(combo.size()); ++out) {
      for (int64_t in = 0; in < N; ++in) {
        if ((mask >> in) & 1) continue;
        auto swapped = edges;
        swapped[out] = pairs[in];
        GraphSnapshot gp(n, swapped);
        const double gap = std::abs(fg - f(gp)) - w.psi[combo[out]] - w.psi[in];
        worst = std::max(worst, gap);
      }
    }
    int64_t i = m - 1;
    while (i >= 0 && combo[i] == N - m + i) --i;
    if (i < 0) break;
    ++combo[i];
    for (int64_t j = i + 1; j < m; ++j) combo[j] = combo[j - 1] + 1;
  }
  return worst;
}

// --- Bahadur ------------------------------------------------------------------

double bahadur_correction_series(double x, double big_n, double p, int terms) {
  const double q = 1 - p;
  const double s = std::sqrt(p * q * big_n);
  double sum = 0;
  const int cap = terms < 0 ? 64 : terms;
  double sign = -1.0;  // (-1)^i
  double p_pow = p * p;  // p^{i+1}
  double q_pow = q * q;
  double x_pow = x * x * x;  // x^{i+2}
  double s_pow = s;          // (pqN)^{i/2}
  for (int i = 1; i <= cap; ++i) {
    const double term = (p_pow + sign * q_pow) * x_pow / (double(i + 1) * double(i + 2) * s_pow);
    sum += term;
    if (terms < 0 && std::abs(term) < 1e-15 * std::max(1e-300, std::abs(sum))) break;
    sign = -sign;
    p_pow *= p;
    q_pow *= q;
    x_pow *= x;
    s_pow *= s;
  }
  return sum;
}

double BinomialTailQuery::x() const {
  return (double(k) - p * double(trials)) / std::sqrt(p * (1 - p) * double(trials));
}

BinomialTailQuery BinomialTailQuery::from_k(int64_t trials, double p, int64_t k, int terms) {
  if (!(p > 0 && p < 1)) throw ParamError("BinomialTailQuery: need 0 < p < 1");
  if (k < 0 || k > trials) throw ParamError("BinomialTailQuery: need 0 <= k <= N");
  return {trials, p, k, terms};
}

BinomialTailQuery BinomialTailQuery::from_x(int64_t trials, double p, double x, int terms) {
  if (!(p > 0 && p < 1)) throw ParamError("BinomialTailQuery: need 0 < p < 1");
  const auto k = static_cast<int64_t>(std::floor(p * double(trials) + x * std::sqrt(p * (1 - p) * double(trials))));
  if (k < 0 || k > trials) throw ParamError("BinomialTailQuery: x places k outside [0, N]");
  return {trials, p, k, terms};
}

double log_binomial_pmf(int64_t trials, double p, int64_t k) {
  if (k < 0 || k > trials) return -kInf;
  if (p <= 0) return k == 0 ? 0.0 : -kInf;
  if (p >= 1) return k == trials ? 0.0 : -kInf;
  return std::lgamma(double(trials) + 1) - std::lgamma(double(k) + 1) -
         std::lgamma(double(trials - k) + 1) + double(k) * std::log(p) +
         double(trials - k) * std::log1p(-p);
}

double log_binomial_tail(int64_t trials, double p, int64_t k) {
  if (k <= 0) return 0.0;
  if (k > trials) return -kInf;
  // incremental log pmf upward from k; terms past the mode decay fast enough
  // to stop once they stop mattering at 1e-18 relative
  const double log_ratio_base = std::log(p) - std::log1p(-p);
  double log_term = log_binomial_pmf(trials, p, k);
  double max_log = log_term;
  std::vector<double> logs = {log_term};
  for (int64_t j = k; j < trials; ++j) {
    log_term += std::log(double(trials - j)) - std::log(double(j + 1)) + log_ratio_base;
    logs.push_back(log_term);
    max_log = std::max(max_log, log_term);
    if (double(j) > p * double(trials) && log_term < max_log - 45.0) break;
  }
  return log_sum_exp(logs);
}

BahadurResult bahadur(const BinomialTailQuery& q) {
  if (!(q.p > 0 && q.p < 1)) throw ParamError("bahadur: need 0 < p < 1");
  if (q.k <= 0 || q.k >= q.trials) throw ParamError("bahadur: exact values need 0 < k < N");
  BahadurResult r{};
  r.trials = q.trials;
  r.p = q.p;
  r.k = q.k;
  r.terms = q.terms;
  r.x = q.x();
  const double pqn = q.p * (1 - q.p) * double(q.trials);
  r.correction = bahadur_correction_series(r.x, double(q.trials), q.p, q.terms);
  r.log_point_exact = log_binomial_pmf(q.trials, q.p, q.k);
  r.log_tail_exact = log_binomial_tail(q.trials, q.p, q.k);
  r.log_point_approx = -0.5 * std::log(2 * M_PI * pqn) - r.x * r.x / 2 - r.correction;
  r.log_tail_approx = r.x > 0
      ? -std::log(r.x * std::sqrt(2 * M_PI)) - r.x * r.x / 2 - r.correction
      : std::numeric_limits<double>::quiet_NaN();
  r.window_ok = r.x >= 1.0 && r.x * r.x <= pqn;
  const int j_eff = q.terms < 0 ? 64 : q.terms;
  r.finite_j_ratio = r.x / std::pow(pqn, 0.5 - 1.0 / double(j_eff + 3));
  return r;
}

// --- mixture identity ----------------------------------------------------------

MixtureReport mixture_identity_exact(int n, double p, int64_t threshold) {
  if (n > 6) throw CapacityError("mixture_identity_exact: full enumeration limited to n <= 6");
  if (!(p >= 0 && p <= 1)) throw ParamError("mixture_identity_exact: need p in [0,1]");
  const int64_t N = pair_count(n);
  std::vector<Edge> pairs(N);
  for (int64_t r = 0; r < N; ++r) pairs[r] = edge_unrank(r);

  // counts[m] = number of m-edge graphs with N_tri > threshold
  std::vector<int64_t> exceed(N + 1, 0), total(N + 1, 0);
  for (uint64_t mask = 0; mask < (uint64_t(1) << N); ++mask) {
    std::vector<Edge> edges;
    for (int64_t r = 0; r < N; ++r) {
      if ((mask >> r) & 1) edges.push_back(pairs[r]);
    }
    const auto m = int64_t(edges.size());
    ++total[m];
    if (count_triangles(GraphSnapshot(n, edges)) > threshold) ++exceed[m];
  }
  std::vector<double> pow_p(N + 1, 1.0), pow_q(N + 1, 1.0);
  for (int64_t i = 1; i <= N; ++i) {
    pow_p[i] = pow_p[i - 1] * p;
    pow_q[i] = pow_q[i - 1] * (1 - p);
  }
  MixtureReport rep;
  rep.exact = true;
  rep.lhs = 0;
  rep.rhs = 0;
  rep.per_m.assign(N + 1, 0.0);
  for (int64_t m = 0; m <= N; ++m) {
    // lhs: direct Bernoulli weighting of every graph
    rep.lhs += double(exceed[m]) * pow_p[m] * pow_q[N - m];
    // rhs: b_N(m) * P(N_tri(G_m) > thr), with b_N(m) = C(N,m) p^m q^{N-m}
    const double b_n_m = double(total[m]) * pow_p[m] * pow_q[N - m];
    const double cond = total[m] ? double(exceed[m]) / double(total[m]) : 0.0;
    rep.per_m[m] = b_n_m * cond;
    rep.rhs += rep.per_m[m];
  }
  return rep;
}

MixtureReport mixture_identity_mc(int n, double p, int64_t threshold,
                                  int64_t trials, uint64_t seed) {
  if (!(p > 0 && p < 1)) throw ParamError("mixture_identity_mc: need 0 < p < 1");
  if (trials < 1) throw ParamError("mixture_identity_mc: trials >= 1");
  const int64_t N = pair_count(n);
  // Paired estimation: each trial draws one uniform edge order; prefixes give
  // every G(n,m) at once and the prefix at an independent Bin(N,p) length is
  // distributed as G(n,p).
  std::vector<int64_t> first_exceed_hist(N + 2, 0);  // index N+1 = never
  int64_t lhs_hits = 0;
  const int words = (n + 63) / 64;
  std::vector<uint64_t> rows(size_t(n) * words);
  for (int64_t trial = 0; trial < trials; ++trial) {
    Rng rng(seed, uint64_t(trial));
    // binomial edge count for the G(n,p) side of the coupling
    int64_t edge_budget = 0;
    for (int64_t i = 0; i < N; ++i) edge_budget += rng.bernoulli(p) ? 1 : 0;
    auto order = sample_edge_order(n, N, rng.next());
    std::fill(rows.begin(), rows.end(), 0);
    int64_t tri = 0, first = N + 1;
    for (int64_t i = 0; i < N; ++i) {
      auto [u, w] = order[i];
      const uint64_t* ru = rows.data() + size_t(u) * words;
      const uint64_t* rw = rows.data() + size_t(w) * words;
      int cod = 0;
      for (int j = 0; j < words; ++j) cod += std::popcount(ru[j] & rw[j]);
      tri += 6 * cod;
      rows[size_t(u) * words + w / 64] |= uint64_t(1) << (w % 64);
      rows[size_t(w) * words + u / 64] |= uint64_t(1) << (u % 64);
      if (first > N && tri > threshold) first = i + 1;
    }
    ++first_exceed_hist[first];
    if (edge_budget >= first) ++lhs_hits;
  }
  MixtureReport rep;
  rep.exact = false;
  rep.lhs = double(lhs_hits) / double(trials);
  rep.per_m.assign(N + 1, 0.0);
  rep.rhs = 0;
  int64_t cum = 0;
  for (int64_t m = 0; m <= N; ++m) {
    cum += first_exceed_hist[m];
    const double cond = double(cum) / double(trials);
    const double b_n_m = std::exp(log_binomial_pmf(N, p, m));
    rep.per_m[m] = b_n_m * cond;
    rep.rhs += rep.per_m[m];
  }
  return rep;
}

// --- numeric helpers ------------------------------------------------------------

double log_sum_exp(const std::vector<double>& logs) {
  double mx = -kInf;
  for (double v : logs) mx = std::max(mx, v);
  if (mx == -kInf) return -kInf;
  double s = 0;
  for (double v : logs) s += std::exp(v - mx);
  return mx + std::log(s);
}

namespace {

double beta_cf(double x, double a, double b) {
  // Lentz continued fraction for the regularized incomplete beta function
  const double tiny = 1e-300;
  const double qab = a + b, qap = a + 1, qam = a - 1;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 400; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double x, double a, double b) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  if (x < (a + 1) / (a + b + 2)) {
    return std::exp(ln_front) * beta_cf(x, a, b) / a;
  }
  return 1.0 - std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                        b * std::log1p(-x) + a * std::log(x)) *
                   beta_cf(1 - x, b, a) / b;
}

std::pair<double, double> clopper_pearson(int64_t k, int64_t n, double alpha) {
  if (n < 1 || k < 0 || k > n) throw ParamError("clopper_pearson: need 0 <= k <= n, n >= 1");
  double lo = 0.0, hi = 1.0;
  if (k > 0) {
    // smallest p with P(Bin(n,p) >= k) = alpha/2; the tail I_p(k, n-k+1)
    // is increasing in p
    double a = 0.0, b = 1.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      if (regularized_incomplete_beta(mid, double(k), double(n - k + 1)) < alpha / 2) a = mid;
      else b = mid;
    }
    lo = 0.5 * (a + b);
  }
  if (k < n) {
    // largest p with P(Bin(n,p) <= k) = alpha/2, i.e. 1 - I_p(k+1, n-k),
    // decreasing in p
    double a = 0.0, b = 1.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      if (1.0 - regularized_incomplete_beta(mid, double(k + 1), double(n - k)) > alpha / 2) a = mid;
      else b = mid;
    }
    hi = 0.5 * (a + b);
  }
  return {lo, hi};
}

}  // namespace devlab
