// Copyright 2026 the devlab authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DEVLAB_TAILBOUNDS_HPP
#define DEVLAB_TAILBOUNDS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace devlab {

class GraphSnapshot;

// --- Chernoff family (binomial / hypergeometric upper bounds) -----------------

enum class ChernoffForm { h1, h2, h3, h4, h5, h6 };
ChernoffForm chernoff_form_from_string(const std::string& s);

// extra carries theta (h3), or j with nu (h4/h6); a and mu are ignored where
// a form does not use them.
struct ChernoffArgs {
  double mu = 0;
  double a = 0;
  double theta = 0;
  double j = 0;
  double nu = 0;
};

double chernoff_bound(ChernoffForm form, const ChernoffArgs& args);

// Hoeffding-Azuma: exp(-a^2 / (2 sum c_i^2)).
struct AzumaResult {
  double value;
  bool degenerate;  // all-zero increments with a > 0
};
AzumaResult azuma_bound(const std::vector<double>& c, double a);

// Freedman: exp(-alpha^2 / (2 (beta + R alpha))).
double freedman_bound(double alpha, double beta, double big_r);

// Converse Freedman: (1/2) exp(-alpha^2 (1 + 4 delta) / (2 beta)) at the
// smallest delta in (0, 1] satisfying both hypotheses, found by bisection.
struct ConverseFreedmanResult {
  bool feasible;
  double delta;
  double value;
  bool hyp_ratio_ok;   // beta/alpha >= 9 R delta^-2 at delta
  bool hyp_log_ok;     // alpha^2/beta >= 16 delta^-2 log(64 delta^-2) at delta
};
ConverseFreedmanResult converse_freedman_bound(double alpha, double beta, double big_r);

// --- psi-Lipschitz inequality (edge-swap Lipschitz functions on G_{n,m}) ------

struct PsiWeights {
  int n;
  std::vector<double> psi;  // indexed by edge_rank, size n(n-1)/2

  double norm_sq() const;
  double psi_max() const;
};

double psi_lipschitz_bound(const PsiWeights& w, double t, double a);

// Exhaustively checks |f(G) - f(G')| <= psi(e) + psi(e') over all adjacent
// pairs in G_{n,m}; returns the worst violation (0 when psi-Lipschitz).
double psi_lipschitz_verify(const std::function<double(const GraphSnapshot&)>& f,
                            const PsiWeights& w, int n, int64_t m);

// --- Bahadur binomial tail expansion ------------------------------------------

// Correction series E(x, N, J); pass terms < 0 for the machine-precision
// truncation (stop when a term falls below 1e-15 of the partial sum, hard cap
// 64 terms).
double bahadur_correction_series(double x, double big_n, double p, int terms);

struct BinomialTailQuery {
  int64_t trials;      // N
  double p;
  int64_t k;           // threshold; normalized from x when built via from_x
  int terms;           // J; negative = machine-precision sentinel

  double x() const;    // (k - pN) / sqrt(pqN)
  static BinomialTailQuery from_k(int64_t trials, double p, int64_t k, int terms = -1);
  static BinomialTailQuery from_x(int64_t trials, double p, double x, int terms = -1);
};

struct BahadurResult {
  int64_t trials;
  double p;
  int64_t k;
  double x;
  int terms;
  double log_point_exact;   // log P(Bin = k), via log-gamma
  double log_tail_exact;    // log P(Bin >= k), log-domain summation
  double log_point_approx;  // -log sqrt(2 pi pqN) - x^2/2 - E
  double log_tail_approx;   // -log(x sqrt(2 pi)) - x^2/2 - E
  double correction;        // E(x, N, J)
  bool window_ok;           // 1 << x << sqrt(pqN), constants pinned to 1
  double finite_j_ratio;    // x / (pqN)^{1/2 - 1/(J+3)}
};

BahadurResult bahadur(const BinomialTailQuery& q);

double log_binomial_pmf(int64_t trials, double p, int64_t k);
double log_binomial_tail(int64_t trials, double p, int64_t k);  // P(Bin >= k)

// --- mixture identity over the edge count (G(n,p) from G(n,m)) ---------------

struct MixtureReport {
  double lhs;                    // P(N_tri(G_p) > threshold)
  double rhs;                    // sum_m b_N(m) P(N_tri(G_m) > threshold)
  std::vector<double> per_m;     // b_N(m) P(N_tri(G_m) > threshold)
  bool exact;
};

MixtureReport mixture_identity_exact(int n, double p, int64_t threshold);
MixtureReport mixture_identity_mc(int n, double p, int64_t threshold,
                                  int64_t trials, uint64_t seed);

// --- small numeric helpers shared across modules ------------------------------

double log_sum_exp(const std::vector<double>& logs);
double regularized_incomplete_beta(double x, double a, double b);
// Clopper-Pearson interval for k successes in n trials at confidence 1-alpha.
std::pair<double, double> clopper_pearson(int64_t k, int64_t n, double alpha = 0.05);

}  // namespace devlab

#endif  // DEVLAB_TAILBOUNDS_HPP
