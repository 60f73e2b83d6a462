// Copyright 2026 the devlab authors
// SPDX-License-Identifier: Apache-2.0

#include "devlab/process.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "devlab/errors.hpp"
#include "devlab/rates.hpp"
#include "devlab/rng.hpp"

namespace devlab {

ProcessTrace sample_process(int n, int64_t m, uint64_t seed) {
  if (m < 1 || m > pair_count(n)) throw ParamError("sample_process: need 1 <= m <= N");
  return ProcessTrace{n, seed, sample_edge_order(n, m, seed)};
}

TruncationConfig TruncationConfig::cherry_128tn(int n, int64_t m) {
  const double t = double(m) / double(pair_count(n));
  TruncationConfig cfg;
  cfg.k_cherry = 128.0 * t * n;
  cfg.mode = "cherry-128tn";
  return cfg;
}

TruncationConfig TruncationConfig::triangle_m_based(int n, int64_t m, double b) {
  const double t = double(m) / double(pair_count(n));
  const double big_m = rate_M_triangle(RateParams{n, t, b});
  TruncationConfig cfg;
  cfg.k_cherry = 256.0 * big_m / (b * t);
  cfg.k_triangle = 65536.0 * big_m / b;
  cfg.mode = "triangle-M-based";
  return cfg;
}

namespace {

double ff_double(int64_t x, int k) {
  double out = 1;
  for (int j = 0; j < k; ++j) out *= double(x - j);
  return out;
}

}  // namespace

double coeff_ratio(int64_t N, int64_t m, int64_t i, int k) {
  if (i == m) return 1.0;           // matched factors
  if (N - m < k) return 0.0;        // vanishing numerator before i = m
  return ff_double(N - m, k) / ff_double(N - i, k);
}

double coeff_mix(int64_t N, int64_t m, int64_t i) {
  if (i == m) return 0.0;
  if (N - m < 2) return 0.0;
  return 3.0 * ff_double(N - m, 2) * double(m - i) / ff_double(N - i, 3);
}

BigRat coeff_ratio_exact(int64_t N, int64_t m, int64_t i, int k) {
  if (i == m) return BigRat(1);
  if (N - m < k) return BigRat(0);
  return BigRat(BigInt::falling_factorial(N - m, k), BigInt::falling_factorial(N - i, k));
}

BigRat coeff_mix_exact(int64_t N, int64_t m, int64_t i) {
  if (i == m) return BigRat(0);
  if (N - m < 2) return BigRat(0);
  return BigRat(BigInt(3) * BigInt::falling_factorial(N - m, 2) * BigInt(m - i),
                BigInt::falling_factorial(N - i, 3));
}

namespace {

constexpr int kCodegreeMatrixMaxN = 2048;

// Incremental process state: degrees, adjacency bitset, codegree matrix.
class Walker {
 public:
  explicit Walker(int n) : n_(n), words_((n + 63) / 64) {
    if (n > kCodegreeMatrixMaxN) {
      throw CapacityError("trace analysis: codegree state limited to n <= 2048");
    }
    deg_.assign(n, 0);
    adj_.assign(size_t(n) * words_, 0);
    cod_.assign(size_t(n) * n, 0);
  }

  int degree(int u) const { return deg_[u]; }
  int codegree(int u, int w) const { return cod_[size_t(u) * n_ + w]; }
  bool has_edge(int u, int w) const {
    return (adj_[size_t(u) * words_ + w / 64] >> (w % 64)) & 1;
  }

  void add_edge(int u, int w) {
    for (int base = 0; base < words_; ++base) {
      uint64_t bits = adj_[size_t(u) * words_ + base];
      while (bits) {
        const int x = base * 64 + std::countr_zero(bits);
        bits &= bits - 1;
        ++cod_[size_t(w) * n_ + x];
        ++cod_[size_t(x) * n_ + w];
      }
      bits = adj_[size_t(w) * words_ + base];
      while (bits) {
        const int x = base * 64 + std::countr_zero(bits);
        bits &= bits - 1;
        ++cod_[size_t(u) * n_ + x];
        ++cod_[size_t(x) * n_ + u];
      }
    }
    adj_[size_t(u) * words_ + w / 64] |= uint64_t(1) << (w % 64);
    adj_[size_t(w) * words_ + u / 64] |= uint64_t(1) << (u % 64);
    ++deg_[u];
    ++deg_[w];
  }

  struct ScanSums {
    int64_t count = 0;
    int64_t s_ch = 0, s_tri = 0;           // sums of (d_u + d_w) and d_uw
    double s_ch2 = 0, s_tri2 = 0, s_cross = 0;  // second-moment sums
  };

  // Explicit summation over all admissible pairs of K_n \ G_{i-1}.
  ScanSums scan(bool with_moments) const {
    ScanSums s;
    for (int w = 1; w < n_; ++w) {
      for (int u = 0; u < w; ++u) {
        if (has_edge(u, w)) continue;
        const int64_t dsum = deg_[u] + deg_[w];
        const int64_t duw = cod_[size_t(u) * n_ + w];
        ++s.count;
        s.s_ch += dsum;
        s.s_tri += duw;
        if (with_moments) {
          s.s_ch2 += double(dsum) * double(dsum);
          s.s_tri2 += double(duw) * double(duw);
          s.s_cross += double(dsum) * double(duw);
        }
      }
    }
    return s;
  }

  // Moment sums over a with-replacement subsample of admissible pairs.
  ScanSums scan_subsample(int samples, Rng& rng) const {
    ScanSums s;
    const int64_t N = pair_count(n_);
    for (int it = 0; it < samples; ++it) {
      int u, w;
      do {
        auto [a, b] = edge_unrank(int64_t(rng.below(uint64_t(N))));
        u = a;
        w = b;
      } while (has_edge(u, w));
      const int64_t dsum = deg_[u] + deg_[w];
      const int64_t duw = cod_[size_t(u) * n_ + w];
      ++s.count;
      s.s_ch += dsum;
      s.s_tri += duw;
      s.s_ch2 += double(dsum) * double(dsum);
      s.s_tri2 += double(duw) * double(duw);
      s.s_cross += double(dsum) * double(duw);
    }
    return s;
  }

  // Conditional means of the excess X 1{X > K} over admissible pairs, given
  // the step's EA values.
  std::pair<double, double> excess_means(double ea_ch, double ea_tri,
                                         double k_ch, double k_tri) const {
    double z_ch = 0, z_tri = 0;
    int64_t count = 0;
    for (int w = 1; w < n_; ++w) {
      for (int u = 0; u < w; ++u) {
        if (has_edge(u, w)) continue;
        ++count;
        const double x_ch = 2.0 * (deg_[u] + deg_[w]) - ea_ch;
        const double x_tri = 6.0 * cod_[size_t(u) * n_ + w] - ea_tri;
        if (x_ch > k_ch) z_ch += x_ch;
        if (x_tri > k_tri) z_tri += x_tri;
      }
    }
    if (count == 0) return {0.0, 0.0};
    return {z_ch / double(count), z_tri / double(count)};
  }

 private:
  int n_;
  int words_;
  std::vector<int> deg_;
  std::vector<uint64_t> adj_;
  std::vector<int32_t> cod_;
};

TraceAnalysis analyze_impl(const ProcessTrace& trace, const TraceAnalysisOptions& opts,
                           int64_t max_step) {
  const int n = trace.n;
  const int64_t N = pair_count(n);
  const int64_t m = trace.m();
  if (m < 1 || m > N) throw ParamError("analyze_trace: trace has invalid edge count");
  const int64_t last = max_step < 0 ? m : std::min(max_step, m);

  TraceAnalysis out;
  out.n = n;
  out.m = m;
  out.steps.reserve(last);

  Walker walker(n);
  Rng qv_rng(opts.qv_seed);
  const bool qv_exact = n <= opts.qv_exact_max_n;
  out.qv_subsampled = opts.second_moments && !qv_exact;

  const bool needs_rebalance = opts.rebalance;
  double v_cum = 0;
  for (int64_t i = 1; i <= last; ++i) {
    const auto [u, w] = trace.edges[i - 1];
    if (walker.has_edge(u, w)) throw ParamError("analyze_trace: duplicate edge in trace");
    StepRecord rec;
    rec.i = i;
    rec.e = {u, w};
    rec.d_u = walker.degree(u);
    rec.d_w = walker.degree(w);
    rec.d_uw = walker.codegree(u, w);
    rec.a_cherry = 2 * (int64_t(rec.d_u) + rec.d_w);
    rec.a_triangle = 6 * int64_t(rec.d_uw);

    Walker::ScanSums sums = walker.scan(opts.second_moments && qv_exact);
    rec.ea_cherry = sums.count ? 2.0 * double(sums.s_ch) / double(sums.count) : 0.0;
    rec.ea_triangle = sums.count ? 6.0 * double(sums.s_tri) / double(sums.count) : 0.0;
    rec.x_cherry = double(rec.a_cherry) - rec.ea_cherry;
    rec.x_triangle = double(rec.a_triangle) - rec.ea_triangle;

    rec.coeff_cherry = coeff_ratio(N, m, i, 2);
    rec.coeff_triangle = coeff_ratio(N, m, i, 3);
    rec.coeff_mix = coeff_mix(N, m, i);

    rec.z_cherry = rec.x_cherry > opts.trunc.k_cherry ? rec.x_cherry : 0.0;
    rec.xp_cherry = rec.x_cherry - rec.z_cherry;
    rec.z_triangle = rec.x_triangle > opts.trunc.k_triangle ? rec.x_triangle : 0.0;
    rec.xp_triangle = rec.x_triangle - rec.z_triangle;

    if (needs_rebalance) {
      const bool any_cut = std::isfinite(opts.trunc.k_cherry) || std::isfinite(opts.trunc.k_triangle);
      double ez_ch = 0, ez_tri = 0;
      if (any_cut) {
        std::tie(ez_ch, ez_tri) = walker.excess_means(rec.ea_cherry, rec.ea_triangle,
                                                      opts.trunc.k_cherry, opts.trunc.k_triangle);
      }
      rec.xpp_cherry = rec.xp_cherry + ez_ch;
      rec.xpp_triangle = rec.xp_triangle + ez_tri;
    }

    if (opts.second_moments) {
      if (!qv_exact) sums = walker.scan_subsample(opts.qv_subsample, qv_rng);
      if (sums.count > 0) {
        const double c = double(sums.count);
        const double mean_ch = double(sums.s_ch) / c;
        const double mean_tri = double(sums.s_tri) / c;
        const double var_ch = std::max(0.0, sums.s_ch2 / c - mean_ch * mean_ch);
        const double var_tri = std::max(0.0, sums.s_tri2 / c - mean_tri * mean_tri);
        const double cov = sums.s_cross / c - mean_ch * mean_tri;
        rec.m2_cherry = 4.0 * var_ch;
        rec.m2_triangle = 36.0 * var_tri;
        rec.m2_decomp = rec.coeff_mix * rec.coeff_mix * rec.m2_cherry +
                        2.0 * rec.coeff_mix * rec.coeff_triangle * 12.0 * cov +
                        rec.coeff_triangle * rec.coeff_triangle * rec.m2_triangle;
      }
      out.v_cherry += rec.m2_cherry;
      out.v_triangle += rec.m2_triangle;
      v_cum += rec.m2_decomp;
    }
    rec.v_cum = v_cum;
    out.v_decomp = v_cum;

    out.sum_cherry += rec.coeff_cherry * rec.x_cherry;
    out.sum_triangle += rec.coeff_mix * rec.x_cherry + rec.coeff_triangle * rec.x_triangle;
    out.d_prime_cherry += rec.coeff_cherry * rec.xp_cherry;
    out.n_star_cherry += rec.coeff_cherry * rec.z_cherry;
    out.d_prime_triangle += rec.coeff_mix * rec.xp_cherry + rec.coeff_triangle * rec.xp_triangle;
    out.n_star_triangle += rec.coeff_mix * rec.z_cherry + rec.coeff_triangle * rec.z_triangle;
    if (needs_rebalance) {
      out.d_pp_cherry += rec.coeff_cherry * rec.xpp_cherry;
      out.d_pp_triangle += rec.coeff_mix * rec.xpp_cherry + rec.coeff_triangle * rec.xpp_triangle;
    }

    out.steps.push_back(rec);
    walker.add_edge(u, w);
  }

  if (last == m) {
    GraphSnapshot final_graph = trace.final_snapshot();
    const double l_ch = expected_count_double(n, m, WhichCount::cherry);
    const double l_tri = expected_count_double(n, m, WhichCount::triangle);
    const auto n_ch = double(count_cherries(final_graph));
    const auto n_tri = double(count_triangles(final_graph));
    out.d_cherry = n_ch - l_ch;
    out.d_triangle = n_tri - l_tri;
    out.residual_cherry = std::abs(out.sum_cherry - out.d_cherry);
    out.residual_triangle = std::abs(out.sum_triangle - out.d_triangle);
    out.scale_cherry = std::max({1.0, std::abs(l_ch), n_ch});
    out.scale_triangle = std::max({1.0, std::abs(l_tri), n_tri});
  }
  return out;
}

}  // namespace

TraceAnalysis analyze_trace(const ProcessTrace& trace, const TraceAnalysisOptions& opts) {
  return analyze_impl(trace, opts, -1);
}

StepRecord step_increments(const ProcessTrace& trace, int64_t i) {
  if (i < 1 || i > trace.m()) throw ParamError("step_increments: index out of range");
  TraceAnalysisOptions opts;
  auto analysis = analyze_impl(trace, opts, i);
  return analysis.steps.back();
}

Decomposition deviation_decomposition(const ProcessTrace& trace, WhichStat which) {
  auto analysis = analyze_trace(trace);
  Decomposition d;
  d.terms.reserve(analysis.steps.size());
  if (which == WhichStat::cherry) {
    for (const auto& s : analysis.steps) d.terms.push_back(s.coeff_cherry * s.x_cherry);
    d.d_value = analysis.d_cherry;
    d.weighted_sum = analysis.sum_cherry;
    d.residual = analysis.residual_cherry;
    d.relative_residual = analysis.rel_residual_cherry();
  } else {
    for (const auto& s : analysis.steps) {
      d.terms.push_back(s.coeff_mix * s.x_cherry + s.coeff_triangle * s.x_triangle);
    }
    d.d_value = analysis.d_triangle;
    d.weighted_sum = analysis.sum_triangle;
    d.residual = analysis.residual_triangle;
    d.relative_residual = analysis.rel_residual_triangle();
  }
  return d;
}

TruncationSplit truncate_trace(const ProcessTrace& trace, const TruncationConfig& cfg) {
  TraceAnalysisOptions opts;
  opts.trunc = cfg;
  auto analysis = analyze_trace(trace, opts);
  TruncationSplit t;
  t.d_cherry = analysis.sum_cherry;
  t.d_prime_cherry = analysis.d_prime_cherry;
  t.n_star_cherry = analysis.n_star_cherry;
  t.d_triangle = analysis.sum_triangle;
  t.d_prime_triangle = analysis.d_prime_triangle;
  t.n_star_triangle = analysis.n_star_triangle;
  for (const auto& s : analysis.steps) {
    t.xp_cherry.push_back(s.xp_cherry);
    t.z_cherry.push_back(s.z_cherry);
    t.xp_triangle.push_back(s.xp_triangle);
    t.z_triangle.push_back(s.z_triangle);
  }
  return t;
}

RebalanceResult rebalance(const ProcessTrace& trace, const TruncationConfig& cfg) {
  TraceAnalysisOptions opts;
  opts.trunc = cfg;
  opts.rebalance = true;
  auto analysis = analyze_trace(trace, opts);
  RebalanceResult r;
  r.d_pp_cherry = analysis.d_pp_cherry;
  r.d_pp_triangle = analysis.d_pp_triangle;
  for (const auto& s : analysis.steps) {
    r.xpp_cherry.push_back(s.xpp_cherry);
    r.xpp_triangle.push_back(s.xpp_triangle);
  }
  return r;
}

QuadraticVariation quadratic_variation(const ProcessTrace& trace, int exact_max_n,
                                       int subsample, uint64_t seed) {
  TraceAnalysisOptions opts;
  opts.second_moments = true;
  opts.qv_exact_max_n = exact_max_n;
  opts.qv_subsample = subsample;
  opts.qv_seed = seed;
  auto analysis = analyze_trace(trace, opts);
  QuadraticVariation qv;
  for (const auto& s : analysis.steps) {
    qv.m2_cherry.push_back(s.m2_cherry);
    qv.m2_triangle.push_back(s.m2_triangle);
    qv.m2_decomp.push_back(s.m2_decomp);
  }
  qv.v_cherry = analysis.v_cherry;
  qv.v_triangle = analysis.v_triangle;
  qv.v_decomp = analysis.v_decomp;
  qv.subsampled = analysis.qv_subsampled;
  qv.subsample_rel_se = qv.subsampled ? std::sqrt(2.0 / double(subsample)) : 0.0;
  return qv;
}

// --- exact mode -----------------------------------------------------------------

namespace {

// Small dense exact walker; n stays tiny here so O(n^2) rational work is fine.
class ExactWalker {
 public:
  explicit ExactWalker(int n) : n_(n) {
    deg_.assign(n, 0);
    adj_.assign(size_t(n) * n, 0);
    cod_.assign(size_t(n) * n, 0);
  }

  void add_edge(int u, int w) {
    for (int x = 0; x < n_; ++x) {
      if (adj_[size_t(u) * n_ + x]) {
        ++cod_[size_t(w) * n_ + x];
        ++cod_[size_t(x) * n_ + w];
      }
      if (adj_[size_t(w) * n_ + x]) {
        ++cod_[size_t(u) * n_ + x];
        ++cod_[size_t(x) * n_ + u];
      }
    }
    adj_[size_t(u) * n_ + w] = adj_[size_t(w) * n_ + u] = 1;
    ++deg_[u];
    ++deg_[w];
  }

  int degree(int u) const { return deg_[u]; }
  int codegree(int u, int w) const { return cod_[size_t(u) * n_ + w]; }
  bool has_edge(int u, int w) const { return adj_[size_t(u) * n_ + w] != 0; }

  // integer sums over admissible pairs
  void sums(int64_t& count, int64_t& s_ch, int64_t& s_tri) const {
    count = s_ch = s_tri = 0;
    for (int w = 1; w < n_; ++w) {
      for (int u = 0; u < w; ++u) {
        if (has_edge(u, w)) continue;
        ++count;
        s_ch += deg_[u] + deg_[w];
        s_tri += cod_[size_t(u) * n_ + w];
      }
    }
  }

  template <typename Fn>
  void for_each_admissible(Fn&& fn) const {
    for (int w = 1; w < n_; ++w) {
      for (int u = 0; u < w; ++u) {
        if (!has_edge(u, w)) fn(u, w);
      }
    }
  }

 private:
  int n_;
  std::vector<int> deg_;
  std::vector<uint8_t> adj_;
  std::vector<int16_t> cod_;
};

}  // namespace

std::vector<ExactStep> exact_steps(const ProcessTrace& trace) {
  const int n = trace.n;
  const int64_t m = trace.m();
  ExactWalker walker(n);
  std::vector<ExactStep> out;
  out.reserve(m);
  for (int64_t i = 1; i <= m; ++i) {
    const auto [u, w] = trace.edges[i - 1];
    ExactStep st;
    st.i = i;
    st.a_cherry = 2 * (int64_t(walker.degree(u)) + walker.degree(w));
    st.a_triangle = 6 * int64_t(walker.codegree(u, w));
    int64_t count = 0, s_ch = 0, s_tri = 0;
    walker.sums(count, s_ch, s_tri);
    st.ea_cherry = count ? BigRat::ratio(2 * s_ch, count) : BigRat(0);
    st.ea_triangle = count ? BigRat::ratio(6 * s_tri, count) : BigRat(0);
    st.x_cherry = BigRat(st.a_cherry) - st.ea_cherry;
    st.x_triangle = BigRat(st.a_triangle) - st.ea_triangle;
    out.push_back(std::move(st));
    walker.add_edge(u, w);
  }
  return out;
}

ExactDecomposition deviation_decomposition_exact(const ProcessTrace& trace, WhichStat which) {
  const int n = trace.n;
  const int64_t N = pair_count(n);
  const int64_t m = trace.m();
  auto steps = exact_steps(trace);
  BigRat sum(0);
  for (const auto& st : steps) {
    if (which == WhichStat::cherry) {
      sum += coeff_ratio_exact(N, m, st.i, 2) * st.x_cherry;
    } else {
      sum += coeff_mix_exact(N, m, st.i) * st.x_cherry +
             coeff_ratio_exact(N, m, st.i, 3) * st.x_triangle;
    }
  }
  GraphSnapshot final_graph = trace.final_snapshot();
  ExactDecomposition d;
  if (which == WhichStat::cherry) {
    d.d_value = BigRat(count_cherries(final_graph)) - expected_count(n, m, WhichCount::cherry);
  } else {
    d.d_value = BigRat(count_triangles(final_graph)) - expected_count(n, m, WhichCount::triangle);
  }
  d.weighted_sum = sum;
  d.residual = sum - d.d_value;
  return d;
}

std::pair<BigRat, BigRat> centering_check_exact(const ProcessTrace& trace, int64_t i) {
  if (i < 1 || i > trace.m()) throw ParamError("centering_check_exact: index out of range");
  ExactWalker walker(trace.n);
  for (int64_t j = 0; j + 1 < i; ++j) walker.add_edge(trace.edges[j].first, trace.edges[j].second);
  int64_t count = 0, s_ch = 0, s_tri = 0;
  walker.sums(count, s_ch, s_tri);
  const BigRat ea_ch = count ? BigRat::ratio(2 * s_ch, count) : BigRat(0);
  const BigRat ea_tri = count ? BigRat::ratio(6 * s_tri, count) : BigRat(0);
  BigRat acc_ch(0), acc_tri(0);
  walker.for_each_admissible([&](int u, int w) {
    acc_ch += BigRat(2 * (int64_t(walker.degree(u)) + walker.degree(w))) - ea_ch;
    acc_tri += BigRat(6 * int64_t(walker.codegree(u, w))) - ea_tri;
  });
  return {acc_ch, acc_tri};
}

bool rebalance_zero_mean_exact(const ProcessTrace& trace, const TruncationConfig& cfg) {
  if (trace.n > 10) {
    throw CapacityError("rebalance_zero_mean_exact: full conditional sums limited to n <= 10");
  }
  const bool cut_ch = std::isfinite(cfg.k_cherry);
  const bool cut_tri = std::isfinite(cfg.k_triangle);
  const BigRat k_ch = cut_ch ? BigRat::from_double(cfg.k_cherry) : BigRat(0);
  const BigRat k_tri = cut_tri ? BigRat::from_double(cfg.k_triangle) : BigRat(0);
  ExactWalker walker(trace.n);
  for (int64_t i = 1; i <= trace.m(); ++i) {
    int64_t count = 0, s_ch = 0, s_tri = 0;
    walker.sums(count, s_ch, s_tri);
    if (count > 0) {
      const BigRat ea_ch = BigRat::ratio(2 * s_ch, count);
      const BigRat ea_tri = BigRat::ratio(6 * s_tri, count);
      // E[Z | G_{i-1}] over the admissible pairs
      BigRat ez_ch(0), ez_tri(0);
      walker.for_each_admissible([&](int u, int w) {
        const BigRat x_ch = BigRat(2 * (int64_t(walker.degree(u)) + walker.degree(w))) - ea_ch;
        const BigRat x_tri = BigRat(6 * int64_t(walker.codegree(u, w))) - ea_tri;
        if (cut_ch && k_ch < x_ch) ez_ch += x_ch;
        if (cut_tri && k_tri < x_tri) ez_tri += x_tri;
      });
      ez_ch = ez_ch / BigRat(count);
      ez_tri = ez_tri / BigRat(count);
      // sum of X'' over admissible pairs must vanish
      BigRat total_ch(0), total_tri(0);
      walker.for_each_admissible([&](int u, int w) {
        const BigRat x_ch = BigRat(2 * (int64_t(walker.degree(u)) + walker.degree(w))) - ea_ch;
        const BigRat x_tri = BigRat(6 * int64_t(walker.codegree(u, w))) - ea_tri;
        const BigRat xp_ch = (cut_ch && k_ch < x_ch) ? BigRat(0) : x_ch;
        const BigRat xp_tri = (cut_tri && k_tri < x_tri) ? BigRat(0) : x_tri;
        total_ch += xp_ch + ez_ch;
        total_tri += xp_tri + ez_tri;
      });
      if (!total_ch.is_zero() || !total_tri.is_zero()) return false;
    }
    walker.add_edge(trace.edges[i - 1].first, trace.edges[i - 1].second);
  }
  return true;
}

}  // namespace devlab
