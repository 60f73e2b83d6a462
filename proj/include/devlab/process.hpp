// Copyright 2026 the devlab authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DEVLAB_PROCESS_HPP
#define DEVLAB_PROCESS_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "devlab/exact.hpp"
#include "devlab/graph.hpp"

namespace devlab {

// The edge-revealing process: e_1..e_m is the prefix of a uniform order on
// all pairs, so every prefix graph is G(n, i).
struct ProcessTrace {
  int n = 0;
  uint64_t seed = 0;
  std::vector<Edge> edges;  // e_1 .. e_m, pairwise distinct

  int64_t m() const { return static_cast<int64_t>(edges.size()); }
  GraphSnapshot final_snapshot() const { return GraphSnapshot(n, edges); }
  GraphSnapshot prefix_snapshot(int64_t i) const {
    return GraphSnapshot(n, std::vector<Edge>(edges.begin(), edges.begin() + i));
  }
};

ProcessTrace sample_process(int n, int64_t m, uint64_t seed);

struct TruncationConfig {
  double k_cherry = std::numeric_limits<double>::infinity();
  double k_triangle = std::numeric_limits<double>::infinity();
  std::string mode = "custom";

  // X'_ch cutoff 128 t n with both statistics kept (triangle cutoff inf).
  static TruncationConfig cherry_128tn(int n, int64_t m);
  // K_ch = 2^8 M(b,t)/(b t), K_tri = 2^16 M(b,t)/b.
  static TruncationConfig triangle_m_based(int n, int64_t m, double b);
};

// One step of the process.  A counts copies created by e_i, EA its
// conditional mean over the admissible pairs of K_n \ G_{i-1} (explicit
// summation), X = A - EA.  Second-moment fields are filled only when the
// analysis asks for them.
struct StepRecord {
  int64_t i = 0;  // 1-based
  Edge e{0, 0};
  int d_u = 0, d_w = 0;  // endpoint degrees in G_{i-1}
  int d_uw = 0;          // codegree in G_{i-1}
  int64_t a_cherry = 0;    // 2 (d_u + d_w)
  int64_t a_triangle = 0;  // 6 d_uw
  double ea_cherry = 0, ea_triangle = 0;
  double x_cherry = 0, x_triangle = 0;
  double coeff_cherry = 0;    // (N-m)_2 / (N-i)_2
  double coeff_triangle = 0;  // (N-m)_3 / (N-i)_3
  double coeff_mix = 0;       // 3 (N-m)_2 (m-i) / (N-i)_3
  double xp_cherry = 0, xp_triangle = 0;  // truncated increments
  double z_cherry = 0, z_triangle = 0;    // excess above the cutoffs
  double xpp_cherry = 0, xpp_triangle = 0;  // rebalanced increments
  double m2_cherry = 0, m2_triangle = 0;  // E[X^2 | G_{i-1}] per statistic
  double m2_decomp = 0;  // E[(c_mix X_ch + c_tri X_tri)^2 | G_{i-1}]
  double v_cum = 0;      // running sum of m2_decomp
};

struct TraceAnalysisOptions {
  TruncationConfig trunc;
  bool rebalance = false;
  bool second_moments = false;
  int qv_exact_max_n = 60;     // full admissible-pair sums up to this n
  int qv_subsample = 4096;     // sampled pairs above it (flagged)
  uint64_t qv_seed = 1;
};

struct TraceAnalysis {
  int n = 0;
  int64_t m = 0;
  std::vector<StepRecord> steps;

  // direct deviations D_H = N_H(G_m) - L_H(m)
  double d_cherry = 0, d_triangle = 0;
  // weighted martingale sums and their residuals against the direct values
  double sum_cherry = 0, sum_triangle = 0;
  double residual_cherry = 0, residual_triangle = 0;

  // truncated and excess parts: D = D' + N* per statistic
  double d_prime_cherry = 0, n_star_cherry = 0;
  double d_prime_triangle = 0, n_star_triangle = 0;
  // rebalanced totals
  double d_pp_cherry = 0, d_pp_triangle = 0;

  // quadratic variation V(m) per statistic and for the triangle-decomposition
  // increments
  double v_cherry = 0, v_triangle = 0, v_decomp = 0;
  bool qv_subsampled = false;

  double scale_cherry = 1, scale_triangle = 1;  // for relative residuals
  double rel_residual_cherry() const { return residual_cherry / scale_cherry; }
  double rel_residual_triangle() const { return residual_triangle / scale_triangle; }
};

TraceAnalysis analyze_trace(const ProcessTrace& trace, const TraceAnalysisOptions& opts = {});

StepRecord step_increments(const ProcessTrace& trace, int64_t i);

// Representation coefficients with the degenerate tails pinned down: the
// ratio ff(N-m,k)/ff(N-i,k) is 1 at i = m (matched factors) and 0 whenever
// the numerator vanishes for i < m.
double coeff_ratio(int64_t N, int64_t m, int64_t i, int k);
double coeff_mix(int64_t N, int64_t m, int64_t i);
BigRat coeff_ratio_exact(int64_t N, int64_t m, int64_t i, int k);
BigRat coeff_mix_exact(int64_t N, int64_t m, int64_t i);

enum class WhichStat { cherry, triangle };

struct Decomposition {
  double d_value;
  double weighted_sum;
  std::vector<double> terms;
  double residual;
  double relative_residual;
};

Decomposition deviation_decomposition(const ProcessTrace& trace, WhichStat which);

// Exact-rational evaluation of the same identity; residual must be the zero
// rational on every trace.
struct ExactDecomposition {
  BigRat d_value;
  BigRat weighted_sum;
  BigRat residual;
};

ExactDecomposition deviation_decomposition_exact(const ProcessTrace& trace, WhichStat which);

struct TruncationSplit {
  double d_cherry, d_prime_cherry, n_star_cherry;
  double d_triangle, d_prime_triangle, n_star_triangle;
  std::vector<double> xp_cherry, z_cherry, xp_triangle, z_triangle;
};

TruncationSplit truncate_trace(const ProcessTrace& trace, const TruncationConfig& cfg);

struct RebalanceResult {
  double d_pp_cherry, d_pp_triangle;
  std::vector<double> xpp_cherry, xpp_triangle;
};

RebalanceResult rebalance(const ProcessTrace& trace, const TruncationConfig& cfg);

// Exact-mode rebalance check: for every step, the sum of X'' over all
// admissible next edges must be the zero rational.  Capacity-limited to
// n <= 10 (full conditional sums in exact arithmetic).
bool rebalance_zero_mean_exact(const ProcessTrace& trace, const TruncationConfig& cfg);

struct QuadraticVariation {
  std::vector<double> m2_cherry, m2_triangle, m2_decomp;
  double v_cherry, v_triangle, v_decomp;
  bool subsampled;
  double subsample_rel_se;  // flagged rough standard error when subsampled
};

QuadraticVariation quadratic_variation(const ProcessTrace& trace,
                                       int exact_max_n = 60, int subsample = 4096,
                                       uint64_t seed = 1);

// Exact-mode per-step record used by identity tests.
struct ExactStep {
  int64_t i;
  int64_t a_cherry, a_triangle;
  BigRat ea_cherry, ea_triangle;
  BigRat x_cherry, x_triangle;
};

std::vector<ExactStep> exact_steps(const ProcessTrace& trace);

// Average of X_F over all admissible next edges for prefix i (exact); both
// must be zero rationals.
std::pair<BigRat, BigRat> centering_check_exact(const ProcessTrace& trace, int64_t i);

}  // namespace devlab

#endif  // DEVLAB_PROCESS_HPP
