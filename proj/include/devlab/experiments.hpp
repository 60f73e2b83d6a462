// Copyright 2026 the devlab authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DEVLAB_EXPERIMENTS_HPP
#define DEVLAB_EXPERIMENTS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "devlab/graph.hpp"

namespace devlab {

// Runs fn(trial) for trial = 0..count-1 on `workers` threads.  Each trial
// must derive its randomness from (master seed, trial), so scheduling cannot
// affect results.
void parallel_for(int64_t count, int workers, const std::function<void(int64_t)>& fn);

enum class McModel { gnm, gnp };
enum class McStatistic { triangle_dev, cherry_dev };
McStatistic statistic_from_string(const std::string& s);
std::string to_string(McModel m);
std::string to_string(McStatistic s);

struct McTailSpec {
  McModel model = McModel::gnm;
  int n = 0;
  int64_t m = 0;    // G(n,m)
  double p = 0;     // G(n,p)
  McStatistic statistic = McStatistic::triangle_dev;
  double threshold = 0;  // exceed when deviation > threshold
  int64_t trials = 1;
  uint64_t seed = 1;
  std::optional<PlantSpec> plant;
  int workers = 1;
};

struct TailEstimate {
  McModel model;
  int n;
  double m_or_p;
  McStatistic statistic;
  double threshold;
  int64_t trials;
  int64_t exceed_count;
  double p_hat;
  double log_p_hat;
  double ci_lo, ci_hi;  // 95% Clopper-Pearson
  uint64_t seed;
  std::optional<PlantSpec> plant;
  double wall_time_s;   // metadata, not part of deterministic output
};

TailEstimate mc_tail(const McTailSpec& spec);

// One deviation sample per trial, shared by mc_tail and empirical_dev.
std::vector<double> mc_deviation_samples(const McTailSpec& spec);

struct EmpiricalDev {
  double b_target;
  double quantile;      // 1 - e^{-b}
  double threshold;     // empirical quantile of the deviation statistic
  double ci_lo, ci_hi;  // bootstrap percentile CI (1000 resamples)
  int64_t trials;
};

EmpiricalDev empirical_dev(const McTailSpec& spec, double b_target);

// --- degree/codegree diagnostics ------------------------------------------------

struct DiagnosticsReport {
  int n;
  int64_t m;
  double t, b;
  int max_degree;
  std::vector<int> v_j_start_5;   // |V_j| for j = 5, 6, ...
  double sum_du_sq;               // sum_u D_u^2
  double sum_du_sq_restricted;    // sum over d_u >= 32 t n of d_u^2
  double sum_duw_sq;              // sum over pairs of D_uw^2
  std::vector<int> k1;            // K_1 range
  std::vector<int64_t> f_k;
  std::vector<int> k2;            // K_2 range
  std::vector<int64_t> h_k;
  // observed values against the reference bound shapes, constants pinned to 1
  double ratio_du_sq_vs_kappa;
  bool kappa_plus_defined;
  double ratio_restricted_vs_kappa_plus;
  double ratio_duw_sq_vs_bound;   // vs max{b t^2 n^2, b^2}
  std::vector<double> f_ratio;    // f_k 2^{4k} / b^2
  std::vector<double> h_ratio;    // h_k k^2 2^{2k} t^4 n^2 / b^2
};

DiagnosticsReport diagnostics(const GraphSnapshot& g, double t, double b);

// --- planted-structure boost -----------------------------------------------------

struct PlantedBoostReport {
  PlantKind kind;
  int plant_size;
  int64_t plant_edge_count;
  int64_t in_structure_copies;   // N_tri of the planted graph alone
  double boost;                  // mean N_tri(G_{m-e*} U G_*) - L_tri(m)
  double boost_se;
  double boost_ci_lo, boost_ci_hi;  // 95% normal-theory CI
  double m_value;                // M(b, t)
  double clique_value;           // CLIQUE(b, t)
  double ratio_vs_m;             // boost / M(b,t)
  double ratio_vs_clique;        // boost / CLIQUE(b,t)
  bool prob_heuristic_ok;        // (t/2)^{e(G_*)} >= e^{-b/2}
  int64_t trials;
};

PlantedBoostReport planted_boost(int n, int64_t m, double b, PlantKind kind,
                                 int64_t trials, uint64_t seed, int workers = 1);

// The structure sizes of the lower-bound constructions (floored, minimum 1):
// star degree b/10l, hub size b/10nl, clique size sqrt(b)/4 sqrt(l).
int planted_size(int n, int64_t m, double b, PlantKind kind);

// --- variance profile ------------------------------------------------------------

struct VarianceProfile {
  int n;
  int64_t m;
  int64_t traces;
  std::vector<double> mean_m2_cherry;    // per step, averaged over traces
  std::vector<double> mean_m2_triangle;
  double v_min, v_mean, v_max;           // V(m) of the decomposition across traces
  double second_half_min_ratio;          // min over i >= m/2 of mean m2_tri / t^2 n
  double second_half_max_ratio;
  bool subsampled;
};

VarianceProfile variance_profile(int n, int64_t m, int64_t traces, uint64_t seed,
                                 int workers = 1);

}  // namespace devlab

#endif  // DEVLAB_EXPERIMENTS_HPP
