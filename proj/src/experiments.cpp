// Copyright 2026 the devlab authors
// SPDX-License-Identifier: Apache-2.0

#include "devlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <thread>

#include "devlab/errors.hpp"
#include "devlab/process.hpp"
#include "devlab/rates.hpp"
#include "devlab/rng.hpp"
#include "devlab/tailbounds.hpp"

namespace devlab {

void parallel_for(int64_t count, int workers, const std::function<void(int64_t)>& fn) {
  workers = std::max(1, workers);
  if (workers == 1 || count < 2) {
    for (int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int64_t> next{0};
  auto body = [&] {
    while (true) {
      const int64_t i = next.fetch_add(1);
      if (i >= count) break;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& th : pool) th.join();
}

McStatistic statistic_from_string(const std::string& s) {
  if (s == "triangle-dev") return McStatistic::triangle_dev;
  if (s == "cherry-dev") return McStatistic::cherry_dev;
  throw ParamError("unknown statistic: " + s);
}

std::string to_string(McModel m) { return m == McModel::gnm ? "gnm" : "gnp"; }

std::string to_string(McStatistic s) {
  return s == McStatistic::triangle_dev ? "triangle-dev" : "cherry-dev";
}

namespace {

// Reusable per-thread sampling state: bitset rows plus degree counts, with
// triangle/cherry counting folded into edge insertion.
class McWorkspace {
 public:
  explicit McWorkspace(int n)
      : n_(n), words_((n + 63) / 64), rows_(size_t(n) * words_), deg_(n) {}

  void reset() {
    std::fill(rows_.begin(), rows_.end(), 0);
    std::fill(deg_.begin(), deg_.end(), 0);
    triangles_ = 0;
    edges_ = 0;
  }

  bool has_edge(int u, int w) const {
    return (rows_[size_t(u) * words_ + w / 64] >> (w % 64)) & 1;
  }

  void add_edge(int u, int w) {
    const uint64_t* ru = rows_.data() + size_t(u) * words_;
    const uint64_t* rw = rows_.data() + size_t(w) * words_;
    int cod = 0;
    for (int i = 0; i < words_; ++i) cod += std::popcount(ru[i] & rw[i]);
    triangles_ += 6 * int64_t(cod);
    rows_[size_t(u) * words_ + w / 64] |= uint64_t(1) << (w % 64);
    rows_[size_t(w) * words_ + u / 64] |= uint64_t(1) << (u % 64);
    ++deg_[u];
    ++deg_[w];
    ++edges_;
  }

  int64_t triangles() const { return triangles_; }
  int64_t edges() const { return edges_; }

  int64_t cherries() const {
    int64_t total = 0;
    for (int d : deg_) total += int64_t(d) * (d - 1);
    return total;
  }

 private:
  int n_;
  int words_;
  std::vector<uint64_t> rows_;
  std::vector<int> deg_;
  int64_t triangles_ = 0;
  int64_t edges_ = 0;
};

struct SamplerPlan {
  int n;
  int64_t N;
  std::vector<Edge> plant;        // edges of G_*, empty when not planting
  int64_t m_random;               // edges drawn from the random part (gnm)
  double p;                       // gnp
  McModel model;
};

SamplerPlan make_plan(const McTailSpec& spec) {
  if (spec.n < 1) throw ParamError("mc_tail: n must be positive");
  SamplerPlan plan;
  plan.n = spec.n;
  plan.N = pair_count(spec.n);
  plan.model = spec.model;
  plan.p = spec.p;
  plan.m_random = spec.m;
  if (spec.plant) {
    plan.plant = plant_edges(spec.n, *spec.plant);
    if (spec.model == McModel::gnm) {
      // conditional coupling: G(n, m - e(G_*)) U G_*
      plan.m_random = spec.m - int64_t(plan.plant.size());
      if (plan.m_random < 0) throw ParamError("mc_tail: plant larger than the edge budget");
    }
  }
  if (spec.model == McModel::gnm) {
    if (spec.m < 0 || spec.m > plan.N) throw ParamError("mc_tail: need 0 <= m <= N");
  } else {
    if (!(spec.p >= 0 && spec.p <= 1)) throw ParamError("mc_tail: need p in [0,1]");
  }
  return plan;
}

// One graph sample into ws; returns the raw subgraph count of the statistic.
int64_t sample_count(const SamplerPlan& plan, McStatistic stat, McWorkspace& ws,
                     std::vector<int64_t>& ranks, Rng& rng) {
  ws.reset();
  for (const auto& [u, w] : plan.plant) ws.add_edge(u, w);
  if (plan.model == McModel::gnm) {
    const int64_t N = plan.N;
    for (int64_t i = 0; i < plan.m_random; ++i) {
      const int64_t j = i + int64_t(rng.below(uint64_t(N - i)));
      std::swap(ranks[i], ranks[j]);
      auto [u, w] = edge_unrank(ranks[i]);
      if (!ws.has_edge(u, w)) ws.add_edge(u, w);  // plant overlap counted once
    }
    // restore the identity permutation for the next trial
    std::iota(ranks.begin(), ranks.end(), 0);
  } else {
    for (int w = 1; w < plan.n; ++w) {
      for (int u = 0; u < w; ++u) {
        if (rng.bernoulli(plan.p) && !ws.has_edge(u, w)) ws.add_edge(u, w);
      }
    }
  }
  return stat == McStatistic::triangle_dev ? ws.triangles() : ws.cherries();
}

double statistic_mean(const McTailSpec& spec) {
  const WhichCount which =
      spec.statistic == McStatistic::triangle_dev ? WhichCount::triangle : WhichCount::cherry;
  if (spec.model == McModel::gnm) return expected_count_double(spec.n, spec.m, which);
  return expected_count_gnp(spec.n, spec.p, which);
}

}  // namespace

std::vector<double> mc_deviation_samples(const McTailSpec& spec) {
  if (spec.trials < 1) throw ParamError("mc_tail: trials >= 1");
  const SamplerPlan plan = make_plan(spec);
  const double mean = statistic_mean(spec);
  std::vector<double> out(spec.trials);
  parallel_for(spec.trials, spec.workers, [&](int64_t trial) {
    thread_local std::unique_ptr<McWorkspace> ws;
    thread_local int ws_n = -1;
    thread_local std::vector<int64_t> ranks;
    if (!ws || ws_n != plan.n) {
      ws = std::make_unique<McWorkspace>(plan.n);
      ws_n = plan.n;
      ranks.resize(plan.N);
      std::iota(ranks.begin(), ranks.end(), 0);
    }
    Rng rng(spec.seed, uint64_t(trial));
    out[trial] = double(sample_count(plan, spec.statistic, *ws, ranks, rng)) - mean;
  });
  return out;
}

TailEstimate mc_tail(const McTailSpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  const auto samples = mc_deviation_samples(spec);
  int64_t exceed = 0;
  for (double d : samples) exceed += d > spec.threshold ? 1 : 0;
  TailEstimate est;
  est.model = spec.model;
  est.n = spec.n;
  est.m_or_p = spec.model == McModel::gnm ? double(spec.m) : spec.p;
  est.statistic = spec.statistic;
  est.threshold = spec.threshold;
  est.trials = spec.trials;
  est.exceed_count = exceed;
  est.p_hat = double(exceed) / double(spec.trials);
  est.log_p_hat = exceed ? std::log(est.p_hat) : -std::numeric_limits<double>::infinity();
  auto [lo, hi] = clopper_pearson(exceed, spec.trials);
  est.ci_lo = lo;
  est.ci_hi = hi;
  est.seed = spec.seed;
  est.plant = spec.plant;
  est.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return est;
}

EmpiricalDev empirical_dev(const McTailSpec& spec, double b_target) {
  if (!(b_target > 0)) throw ParamError("empirical_dev: b_target > 0 required");
  if (b_target > std::log(double(spec.trials)) - 2) {
    throw CapacityError("empirical_dev: quantile not resolvable, need b <= log(trials) - 2");
  }
  auto samples = mc_deviation_samples(spec);
  std::sort(samples.begin(), samples.end());
  const double q = 1.0 - std::exp(-b_target);
  auto order_stat = [&](std::vector<double>& v) {
    auto idx = std::min<int64_t>(int64_t(v.size()) - 1,
                                 std::max<int64_t>(0, int64_t(std::ceil(q * double(v.size()))) - 1));
    return v[idx];
  };
  EmpiricalDev out;
  out.b_target = b_target;
  out.quantile = q;
  out.threshold = order_stat(samples);
  out.trials = spec.trials;

  // bootstrap percentile CI, 1000 resamples
  const int resamples = 1000;
  std::vector<double> boot(resamples);
  Rng rng(spec.seed ^ 0xb007b007b007ULL);
  std::vector<double> tmp(samples.size());
  for (int r = 0; r < resamples; ++r) {
    for (auto& v : tmp) v = samples[rng.below(samples.size())];
    std::sort(tmp.begin(), tmp.end());
    boot[r] = order_stat(tmp);
  }
  std::sort(boot.begin(), boot.end());
  out.ci_lo = boot[size_t(0.025 * resamples)];
  out.ci_hi = boot[size_t(0.975 * resamples) - 1];
  return out;
}

// --- diagnostics ------------------------------------------------------------------

DiagnosticsReport diagnostics(const GraphSnapshot& g, double t, double b) {
  if (!(t > 0 && t <= 0.5)) throw ParamError("diagnostics: t in (0, 1/2] required");
  const int n = g.n();
  const int64_t m = g.m();
  DiagnosticsReport rep;
  rep.n = n;
  rep.m = m;
  rep.t = t;
  rep.b = b;

  rep.max_degree = 0;
  for (int d : g.degrees()) rep.max_degree = std::max(rep.max_degree, d);

  // V_j for j >= 5 up to the first threshold beyond n-1
  for (int j = 5;; ++j) {
    const double cut = std::ldexp(t * n, j);  // 2^j t n
    int size = 0;
    for (int d : g.degrees()) size += d >= cut ? 1 : 0;
    rep.v_j_start_5.push_back(size);
    if (cut > double(n - 1)) break;
  }

  auto dev = degree_deviations(g);
  rep.sum_du_sq = 0;
  rep.sum_du_sq_restricted = 0;
  for (int u = 0; u < n; ++u) {
    rep.sum_du_sq += dev[u] * dev[u];
    if (g.degree(u) >= 32 * t * n) {
      rep.sum_du_sq_restricted += double(g.degree(u)) * double(g.degree(u));
    }
  }

  const double centering = codegree_centering(n, m);
  rep.sum_duw_sq = 0;
  for (int u = 0; u < n; ++u) {
    for (int w = u + 1; w < n; ++w) {
      const double duw_dev = double(g.codegree(u, w)) - centering;
      rep.sum_duw_sq += duw_dev * duw_dev;
    }
  }

  // F_k over K_1 = {10, ..., ceil(log2(t n^{1/2}) + 10)}
  const double root_n = std::sqrt(double(n));
  const int k1_hi = int(std::ceil(std::log2(t * root_n) + 10));
  for (int k = 10; k <= k1_hi; ++k) {
    rep.k1.push_back(k);
    const double lo = std::ldexp(t * root_n, k), hi = std::ldexp(t * root_n, k + 1);
    const double deg_cap = std::ldexp(root_n, k - 5);
    int64_t count = 0;
    for (int u = 0; u < n; ++u) {
      if (std::abs(dev[u]) > deg_cap) continue;
      for (int w = u + 1; w < n; ++w) {
        if (std::abs(dev[w]) > deg_cap) continue;
        const double duw_dev = std::abs(double(g.codegree(u, w)) - centering);
        if (duw_dev >= lo && duw_dev < hi) ++count;
      }
    }
    rep.f_k.push_back(count);
    rep.f_ratio.push_back(double(count) * std::ldexp(1.0, 4 * k) / (b * b));
  }

  // H_k over K_2 = {10, ..., floor(2 log2(1/t))}
  const int k2_hi = int(std::floor(2 * std::log2(1 / t)));
  for (int k = 10; k <= k2_hi; ++k) {
    rep.k2.push_back(k);
    const double lo = std::ldexp(t * t * n, k), hi = std::ldexp(t * t * n, k + 1);
    const double deg_cap = std::ldexp(t * n, k - 5);
    int64_t count = 0;
    for (int u = 0; u < n; ++u) {
      if (g.degree(u) > deg_cap) continue;
      for (int w = u + 1; w < n; ++w) {
        if (g.degree(w) > deg_cap) continue;
        const double duw = g.codegree(u, w);
        if (duw >= lo && duw < hi) ++count;
      }
    }
    rep.h_k.push_back(count);
    rep.h_ratio.push_back(double(count) * double(k) * double(k) * std::ldexp(1.0, 2 * k) *
                          t * t * t * t * double(n) * double(n) / (b * b));
  }

  KappaReport kr = kappa(RateParams{n, t, b});
  rep.ratio_du_sq_vs_kappa = rep.sum_du_sq / kr.kappa;
  rep.kappa_plus_defined = kr.kappa_plus_defined;
  rep.ratio_restricted_vs_kappa_plus =
      kr.kappa_plus_defined ? rep.sum_du_sq_restricted / kr.kappa_plus : 0.0;
  rep.ratio_duw_sq_vs_bound =
      rep.sum_duw_sq / std::max(b * t * t * double(n) * double(n), b * b);
  return rep;
}

// --- planted boost ----------------------------------------------------------------

int planted_size(int n, int64_t m, double b, PlantKind kind) {
  const double t = double(m) / double(pair_count(n));
  const double ell = std::log(1 / t);
  double raw = 0;
  switch (kind) {
    case PlantKind::star: raw = b / (10 * ell); break;
    case PlantKind::hub: raw = b / (10 * double(n) * ell); break;
    case PlantKind::clique: raw = std::sqrt(b) / (4 * std::sqrt(ell)); break;
  }
  return std::max(1, int(std::floor(raw)));
}

PlantedBoostReport planted_boost(int n, int64_t m, double b, PlantKind kind,
                                 int64_t trials, uint64_t seed, int workers) {
  const double t = double(m) / double(pair_count(n));
  const double ell = std::log(1 / t);
  PlantedBoostReport rep;
  rep.kind = kind;
  rep.plant_size = planted_size(n, m, b, kind);
  PlantSpec spec{kind, rep.plant_size};
  auto plant_only = plant(GraphSnapshot(n, std::vector<Edge>{}), spec);
  rep.plant_edge_count = plant_only.plant_edges;
  rep.in_structure_copies = count_triangles(plant_only.graph);

  McTailSpec mc;
  mc.model = McModel::gnm;
  mc.n = n;
  mc.m = m;
  mc.statistic = McStatistic::triangle_dev;
  mc.trials = trials;
  mc.seed = seed;
  mc.plant = spec;
  mc.workers = workers;
  auto devs = mc_deviation_samples(mc);
  double sum = 0, sum_sq = 0;
  for (double d : devs) {
    sum += d;
    sum_sq += d * d;
  }
  const double mean = sum / double(trials);
  const double var = std::max(0.0, sum_sq / double(trials) - mean * mean);
  rep.boost = mean;
  rep.boost_se = std::sqrt(var / double(trials));
  rep.boost_ci_lo = mean - 1.96 * rep.boost_se;
  rep.boost_ci_hi = mean + 1.96 * rep.boost_se;

  RegimeReport rr = rate_functions_triangle(RateParams{n, t, b});
  rep.m_value = rr.max_value;
  rep.clique_value = rr.clique;
  rep.ratio_vs_m = rep.boost / rep.m_value;
  rep.ratio_vs_clique = rep.clique_value > 0 ? rep.boost / rep.clique_value : 0.0;
  rep.prob_heuristic_ok = double(rep.plant_edge_count) * std::log(t / 2) >= -b / 2;
  rep.trials = trials;
  return rep;
}

// --- variance profile -------------------------------------------------------------

VarianceProfile variance_profile(int n, int64_t m, int64_t traces, uint64_t seed,
                                 int workers) {
  if (traces < 1) throw ParamError("variance_profile: traces >= 1 required");
  VarianceProfile vp;
  vp.n = n;
  vp.m = m;
  vp.traces = traces;
  std::vector<std::vector<double>> per_trace_ch(traces), per_trace_tri(traces);
  std::vector<double> v_decomp(traces);
  std::atomic<bool> subsampled{false};
  parallel_for(traces, workers, [&](int64_t trace_idx) {
    auto tr = sample_process(n, m, seed + uint64_t(trace_idx));
    auto qv = quadratic_variation(tr, 60, 4096, seed ^ (0x5eedULL + trace_idx));
    per_trace_ch[trace_idx] = std::move(qv.m2_cherry);
    per_trace_tri[trace_idx] = std::move(qv.m2_triangle);
    v_decomp[trace_idx] = qv.v_decomp;
    if (qv.subsampled) subsampled = true;
  });
  vp.subsampled = subsampled;
  vp.mean_m2_cherry.assign(m, 0.0);
  vp.mean_m2_triangle.assign(m, 0.0);
  for (int64_t tr = 0; tr < traces; ++tr) {
    for (int64_t i = 0; i < m; ++i) {
      vp.mean_m2_cherry[i] += per_trace_ch[tr][i];
      vp.mean_m2_triangle[i] += per_trace_tri[tr][i];
    }
  }
  for (auto& v : vp.mean_m2_cherry) v /= double(traces);
  for (auto& v : vp.mean_m2_triangle) v /= double(traces);

  vp.v_min = *std::min_element(v_decomp.begin(), v_decomp.end());
  vp.v_max = *std::max_element(v_decomp.begin(), v_decomp.end());
  vp.v_mean = std::accumulate(v_decomp.begin(), v_decomp.end(), 0.0) / double(traces);

  const double t = double(m) / double(pair_count(n));
  const double scale = t * t * double(n);
  vp.second_half_min_ratio = std::numeric_limits<double>::infinity();
  vp.second_half_max_ratio = 0;
  for (int64_t i = m / 2; i < m; ++i) {
    const double r = vp.mean_m2_triangle[i] / scale;
    vp.second_half_min_ratio = std::min(vp.second_half_min_ratio, r);
    vp.second_half_max_ratio = std::max(vp.second_half_max_ratio, r);
  }
  return vp;
}

}  // namespace devlab
