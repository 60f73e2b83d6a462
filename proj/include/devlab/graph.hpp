// Copyright 2026 the devlab authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DEVLAB_GRAPH_HPP
#define DEVLAB_GRAPH_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "devlab/exact.hpp"
#include "devlab/rng.hpp"

namespace devlab {

using Edge = std::pair<int, int>;  // (u, w) with u < w

inline int64_t pair_count(int n) { return int64_t(n) * (n - 1) / 2; }

// Canonical edge index: pairs grouped by their larger endpoint, so
// rank(u, w) = w(w-1)/2 + u.  Stable under growing n, which keeps
// serializations and plant placement reproducible.
inline int64_t edge_rank(int u, int w) {
  if (u > w) std::swap(u, w);
  return int64_t(w) * (w - 1) / 2 + u;
}
Edge edge_unrank(int64_t rank);

// Immutable simple graph.  Adjacency is kept both as sorted neighbour lists
// and, for n <= kBitsetMaxN, as bitset rows; the counting kernels pick
// whichever the caller asks for.
class GraphSnapshot {
 public:
  static constexpr int kBitsetMaxN = 4096;

  GraphSnapshot(int n, std::vector<Edge> edges);

  int n() const { return n_; }
  int64_t m() const { return static_cast<int64_t>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& degrees() const { return degrees_; }
  int degree(int u) const { return degrees_[u]; }
  const std::vector<int>& neighbors(int u) const { return adj_[u]; }
  bool has_edge(int u, int w) const;
  bool has_bitset() const { return !bits_.empty(); }
  const uint64_t* row(int u) const { return bits_.data() + size_t(u) * words_; }
  int words_per_row() const { return words_; }

  // Common neighbours of u and w.
  int codegree(int u, int w) const;

 private:
  int n_;
  int words_ = 0;
  std::vector<Edge> edges_;           // sorted by edge_rank
  std::vector<int> degrees_;
  std::vector<std::vector<int>> adj_; // sorted
  std::vector<uint64_t> bits_;        // n_ * words_ when n_ <= kBitsetMaxN
};

enum class PlantKind { star, hub, clique };

struct PlantSpec {
  PlantKind kind;
  int size;  // star degree d, hub vertex count k, or clique vertex count k
};

PlantKind plant_kind_from_string(const std::string& s);
std::string to_string(PlantKind k);

struct PlantResult {
  GraphSnapshot graph;
  int64_t plant_edges;  // e(G_*)
  int64_t new_edges;    // edges of G_* not already in the input graph
};

struct CountReport {
  int64_t n_edges;
  int64_t n_cherries;   // isomorphic copies, sum_u d_u (d_u - 1)
  int64_t n_triangles;  // isomorphic copies, 6 per triangle vertex set
  std::vector<int> degrees;
};

enum class CountKernel { autopick, merge, bitset };

// --- sampling ---------------------------------------------------------------

GraphSnapshot sample_gnm(int n, int64_t m, uint64_t seed);
GraphSnapshot sample_gnp(int n, double p, uint64_t seed);

// Uniformly random order of all N pairs; prefix of length m gives G(n,m).
// Used by both sample_gnm and the edge-revealing process.
std::vector<Edge> sample_edge_order(int n, int64_t m, uint64_t seed);

// Union with the planted structure on the lexicographically first vertices.
PlantResult plant(const GraphSnapshot& g, const PlantSpec& spec);
std::vector<Edge> plant_edges(int n, const PlantSpec& spec);

// --- counting ---------------------------------------------------------------

int64_t count_triangles(const GraphSnapshot& g,
                        CountKernel kernel = CountKernel::autopick);
int64_t count_cherries(const GraphSnapshot& g);
CountReport count_report(const GraphSnapshot& g);

// Brute-force oracles (tests and verify suites).
int64_t count_triangles_brute(const GraphSnapshot& g);
int64_t count_cherries_brute(const GraphSnapshot& g);

enum class WhichCount { edge, cherry, triangle };

// Exact L_H(m) = (n)_{v(H)} (m)_{e(H)} / (N)_{e(H)}.
BigRat expected_count(int n, int64_t m, WhichCount which);
double expected_count_double(int n, int64_t m, WhichCount which);
// Mean under G(n,p): p^{e(H)} (n)_{v(H)}.
double expected_count_gnp(int n, double p, WhichCount which);

// --- degree / codegree deviations -------------------------------------------

// D_u = d_u - 2m/n.
std::vector<double> degree_deviations(const GraphSnapshot& g);

// D_uw = d_uw - m(m-1)(n-2) / (N(N-1)).
double codegree_deviation(const GraphSnapshot& g, int u, int w);
double codegree_centering(int n, int64_t m);

// --- greedy star cover (doubled-digraph greedy) ------------------------------

struct StarCoverResult {
  std::vector<int> centers;
  int64_t covered;          // |union of N(v_i)| accumulated by the greedy
  bool hypothesis_ok;       // e(G) >= n^2 / r^2
  bool bound_met;           // covered >= n / r
};

StarCoverResult greedy_star_cover(const GraphSnapshot& g, int r);

// --- small-n exhaustive explorer ---------------------------------------------

// min over G in G_{n,m} of max over |S| = k of |N(S)|.  Raw enumeration for
// n <= 7, isomorphism-pruned edge-growth for n in {8, 9}; refuses above.
int min_max_neighborhood_union(int n, int64_t m, int k);

}  // namespace devlab

#endif  // DEVLAB_GRAPH_HPP
