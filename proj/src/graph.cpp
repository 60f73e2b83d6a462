// Copyright 2026 the devlab authors
// SPDX-License-Identifier: Apache-2.0

#include "devlab/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "devlab/errors.hpp"

namespace devlab {

Edge edge_unrank(int64_t rank) {
  // invert rank = w(w-1)/2 + u with 0 <= u < w
  auto w = static_cast<int>((1.0 + std::sqrt(1.0 + 8.0 * double(rank))) / 2.0);
  while (int64_t(w) * (w - 1) / 2 > rank) --w;
  while (int64_t(w + 1) * w / 2 <= rank) ++w;
  int u = static_cast<int>(rank - int64_t(w) * (w - 1) / 2);
  return {u, w};
}

GraphSnapshot::GraphSnapshot(int n, std::vector<Edge> edges) : n_(n) {
  if (n < 1) throw ParamError("GraphSnapshot: n must be positive");
  for (auto& [u, w] : edges) {
    if (u > w) std::swap(u, w);
    if (u == w) throw ParamError("GraphSnapshot: self-loop");
    if (u < 0 || w >= n) throw ParamError("GraphSnapshot: vertex out of range");
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return edge_rank(a.first, a.second) < edge_rank(b.first, b.second);
  });
  for (size_t i = 1; i < edges.size(); ++i) {
    if (edges[i] == edges[i - 1]) throw ParamError("GraphSnapshot: duplicate edge");
  }
  edges_ = std::move(edges);
  degrees_.assign(n, 0);
  adj_.assign(n, {});
  for (const auto& [u, w] : edges_) {
    ++degrees_[u];
    ++degrees_[w];
    adj_[u].push_back(w);
    adj_[w].push_back(u);
  }
  for (auto& nbrs : adj_) std::sort(nbrs.begin(), nbrs.end());
  if (n_ <= kBitsetMaxN) {
    words_ = (n_ + 63) / 64;
    bits_.assign(size_t(n_) * words_, 0);
    for (const auto& [u, w] : edges_) {
      bits_[size_t(u) * words_ + w / 64] |= uint64_t(1) << (w % 64);
      bits_[size_t(w) * words_ + u / 64] |= uint64_t(1) << (u % 64);
    }
  }
}

bool GraphSnapshot::has_edge(int u, int w) const {
  if (u == w) return false;
  if (has_bitset()) return (row(u)[w / 64] >> (w % 64)) & 1;
  const auto& nbrs = adj_[u];
  return std::binary_search(nbrs.begin(), nbrs.end(), w);
}

int GraphSnapshot::codegree(int u, int w) const {
  if (has_bitset()) {
    const uint64_t* a = row(u);
    const uint64_t* b = row(w);
    int c = 0;
    for (int i = 0; i < words_; ++i) c += std::popcount(a[i] & b[i]);
    // u, w themselves can never be common neighbours of each other
    return c;
  }
  const auto& a = adj_[u];
  const auto& b = adj_[w];
  int c = 0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) ++i;
    else if (a[i] > b[j]) ++j;
    else { ++c; ++i; ++j; }
  }
  return c;
}

std::vector<Edge> sample_edge_order(int n, int64_t m, uint64_t seed) {
  const int64_t N = pair_count(n);
  if (m < 0 || m > N) throw ParamError("sample: need 0 <= m <= n(n-1)/2");
  std::vector<int64_t> ranks(N);
  std::iota(ranks.begin(), ranks.end(), 0);
  Rng rng(seed);
  std::vector<Edge> order;
  order.reserve(m);
  for (int64_t i = 0; i < m; ++i) {
    int64_t j = i + static_cast<int64_t>(rng.below(uint64_t(N - i)));
    std::swap(ranks[i], ranks[j]);
    order.push_back(edge_unrank(ranks[i]));
  }
  return order;
}

GraphSnapshot sample_gnm(int n, int64_t m, uint64_t seed) {
  return GraphSnapshot(n, sample_edge_order(n, m, seed));
}

GraphSnapshot sample_gnp(int n, double p, uint64_t seed) {
  if (n < 1) throw ParamError("sample_gnp: n must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw ParamError("sample_gnp: need p in [0,1]");
  Rng rng(seed);
  std::vector<Edge> edges;
  for (int w = 1; w < n; ++w) {
    for (int u = 0; u < w; ++u) {
      if (rng.bernoulli(p)) edges.emplace_back(u, w);
    }
  }
  return GraphSnapshot(n, std::move(edges));
}

PlantKind plant_kind_from_string(const std::string& s) {
  if (s == "star") return PlantKind::star;
  if (s == "hub") return PlantKind::hub;
  if (s == "clique") return PlantKind::clique;
  throw ParamError("unknown plant kind: " + s);
}

std::string to_string(PlantKind k) {
  switch (k) {
    case PlantKind::star: return "star";
    case PlantKind::hub: return "hub";
    default: return "clique";
  }
}

std::vector<Edge> plant_edges(int n, const PlantSpec& spec) {
  if (spec.size < 1) throw ParamError("plant: size must be positive");
  std::vector<Edge> edges;
  switch (spec.kind) {
    case PlantKind::star:
      // centre 0, degree d
      if (spec.size > n - 1) throw ParamError("plant: star degree exceeds n-1");
      for (int w = 1; w <= spec.size; ++w) edges.emplace_back(0, w);
      break;
    case PlantKind::hub:
      // vertices 0..k-1 of full degree
      if (spec.size > n) throw ParamError("plant: hub size exceeds n");
      for (int u = 0; u < spec.size; ++u) {
        for (int w = u + 1; w < n; ++w) edges.emplace_back(u, w);
      }
      break;
    case PlantKind::clique:
      if (spec.size > n) throw ParamError("plant: clique size exceeds n");
      for (int u = 0; u < spec.size; ++u) {
        for (int w = u + 1; w < spec.size; ++w) edges.emplace_back(u, w);
      }
      break;
  }
  return edges;
}

PlantResult plant(const GraphSnapshot& g, const PlantSpec& spec) {
  std::vector<Edge> extra = plant_edges(g.n(), spec);
  const auto plant_count = static_cast<int64_t>(extra.size());
  std::vector<Edge> all = g.edges();
  int64_t fresh = 0;
  for (const Edge& e : extra) {
    if (!g.has_edge(e.first, e.second)) {
      all.push_back(e);
      ++fresh;
    }
  }
  return PlantResult{GraphSnapshot(g.n(), std::move(all)), plant_count, fresh};
}

namespace {

int64_t triangles_bitset(const GraphSnapshot& g) {
  int64_t sets3 = 0;  // each triangle counted once per edge, i.e. 3x
  const int words = g.words_per_row();
  for (const auto& [u, w] : g.edges()) {
    const uint64_t* a = g.row(u);
    const uint64_t* b = g.row(w);
    for (int i = 0; i < words; ++i) sets3 += std::popcount(a[i] & b[i]);
  }
  return sets3 / 3 * 6;
}

int64_t triangles_merge(const GraphSnapshot& g) {
  int64_t sets3 = 0;
  for (const auto& [u, w] : g.edges()) {
    const auto& a = g.neighbors(u);
    const auto& b = g.neighbors(w);
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i] < b[j]) ++i;
      else if (a[i] > b[j]) ++j;
      else { ++sets3; ++i; ++j; }
    }
  }
  return sets3 / 3 * 6;
}

}  // namespace

int64_t count_triangles(const GraphSnapshot& g, CountKernel kernel) {
  switch (kernel) {
    case CountKernel::bitset:
      if (!g.has_bitset()) throw CapacityError("count_triangles: bitset kernel needs n <= 4096");
      return triangles_bitset(g);
    case CountKernel::merge:
      return triangles_merge(g);
    default:
      return g.has_bitset() ? triangles_bitset(g) : triangles_merge(g);
  }
}

int64_t count_cherries(const GraphSnapshot& g) {
  int64_t total = 0;
  for (int d : g.degrees()) total += int64_t(d) * (d - 1);
  return total;
}

CountReport count_report(const GraphSnapshot& g) {
  return CountReport{g.m(), count_cherries(g), count_triangles(g), g.degrees()};
}

int64_t count_triangles_brute(const GraphSnapshot& g) {
  int64_t sets = 0;
  for (int a = 0; a < g.n(); ++a) {
    for (int b = a + 1; b < g.n(); ++b) {
      if (!g.has_edge(a, b)) continue;
      for (int c = b + 1; c < g.n(); ++c) {
        if (g.has_edge(a, c) && g.has_edge(b, c)) ++sets;
      }
    }
  }
  return 6 * sets;
}

int64_t count_cherries_brute(const GraphSnapshot& g) {
  // ordered (u, v, w), u != w, with uv and vw edges
  int64_t total = 0;
  for (int v = 0; v < g.n(); ++v) {
    for (int u = 0; u < g.n(); ++u) {
      if (u == v || !g.has_edge(u, v)) continue;
      for (int w = 0; w < g.n(); ++w) {
        if (w == v || w == u || !g.has_edge(v, w)) continue;
        ++total;
      }
    }
  }
  return total;
}

namespace {

void which_params(WhichCount which, int& vertices, int& edge_cnt) {
  switch (which) {
    case WhichCount::edge: vertices = 2; edge_cnt = 1; break;
    case WhichCount::cherry: vertices = 3; edge_cnt = 2; break;
    default: vertices = 3; edge_cnt = 3; break;
  }
}

}  // namespace

BigRat expected_count(int n, int64_t m, WhichCount which) {
  const int64_t N = pair_count(n);
  if (m < 0 || m > N) throw ParamError("expected_count: need 0 <= m <= N");
  int v = 0, e = 0;
  which_params(which, v, e);
  BigInt num = BigInt::falling_factorial(n, v) * BigInt::falling_factorial(m, e);
  BigInt den = BigInt::falling_factorial(N, e);
  return BigRat(num, den);
}

double expected_count_double(int n, int64_t m, WhichCount which) {
  return expected_count(n, m, which).to_double();
}

double expected_count_gnp(int n, double p, WhichCount which) {
  int v = 0, e = 0;
  which_params(which, v, e);
  double falling = 1.0;
  for (int j = 0; j < v; ++j) falling *= double(n - j);
  return std::pow(p, e) * falling;
}

std::vector<double> degree_deviations(const GraphSnapshot& g) {
  const double mean = 2.0 * double(g.m()) / g.n();
  std::vector<double> out(g.n());
  for (int u = 0; u < g.n(); ++u) out[u] = g.degree(u) - mean;
  return out;
}

double codegree_centering(int n, int64_t m) {
  const double N = double(pair_count(n));
  return double(m) * double(m - 1) * (n - 2) / (N * (N - 1));
}

double codegree_deviation(const GraphSnapshot& g, int u, int w) {
  if (u == w) throw ParamError("codegree_deviation: u and w must differ");
  return g.codegree(u, w) - codegree_centering(g.n(), g.m());
}

StarCoverResult greedy_star_cover(const GraphSnapshot& g, int r) {
  if (r < 1) throw ParamError("greedy_star_cover: r must be >= 1");
  const int n = g.n();
  const int words = (n + 63) / 64;
  // out-neighbourhood rows of the doubled digraph; arcs into the covered set
  // get deleted as the greedy proceeds
  std::vector<uint64_t> out(size_t(n) * words, 0);
  for (const auto& [u, w] : g.edges()) {
    out[size_t(u) * words + w / 64] |= uint64_t(1) << (w % 64);
    out[size_t(w) * words + u / 64] |= uint64_t(1) << (u % 64);
  }
  std::vector<uint64_t> covered(words, 0);
  StarCoverResult res;
  res.hypothesis_ok = g.m() >= (int64_t(n) * n + int64_t(r) * r - 1) / (int64_t(r) * r) ||
                      double(g.m()) >= double(n) * n / (double(r) * r);
  for (int step = 0; step < r; ++step) {
    int best = -1, best_deg = 0;
    for (int v = 0; v < n; ++v) {
      int deg = 0;
      for (int i = 0; i < words; ++i) deg += std::popcount(out[size_t(v) * words + i]);
      if (deg > best_deg) { best_deg = deg; best = v; }
    }
    if (best < 0) break;  // no arcs remain
    res.centers.push_back(best);
    for (int i = 0; i < words; ++i) covered[i] |= out[size_t(best) * words + i];
    for (int v = 0; v < n; ++v) {
      for (int i = 0; i < words; ++i) out[size_t(v) * words + i] &= ~covered[i];
    }
  }
  res.covered = 0;
  for (int i = 0; i < words; ++i) res.covered += std::popcount(covered[i]);
  res.bound_met = double(res.covered) * r >= double(n);
  return res;
}

// ---------------------------------------------------------------------------
// min-max neighbourhood union explorer
// ---------------------------------------------------------------------------

namespace {

// max over |S| = k of |N(S)| for a graph given as per-vertex neighbour masks
int max_union_over_k_sets(const std::vector<uint64_t>& rows, int n, int k, int stop_at) {
  std::vector<int> pick(k);
  int best = 0;
  // iterate k-subsets of [n]
  for (int i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    uint64_t mask = 0;
    for (int i = 0; i < k; ++i) mask |= rows[pick[i]];
    best = std::max(best, std::popcount(mask));
    if (best >= stop_at && stop_at > 0) return best;
    int i = k - 1;
    while (i >= 0 && pick[i] == n - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

int min_max_raw(int n, int64_t m, int k) {
  const int64_t N = pair_count(n);
  std::vector<int> combo(m);
  for (int64_t i = 0; i < m; ++i) combo[i] = int(i);
  std::vector<Edge> pairs(N);
  for (int64_t r = 0; r < N; ++r) pairs[r] = edge_unrank(r);
  int best = n + 1;
  while (true) {
    std::vector<uint64_t> rows(n, 0);
    for (int64_t i = 0; i < m; ++i) {
      auto [u, w] = pairs[combo[i]];
      rows[u] |= uint64_t(1) << w;
      rows[w] |= uint64_t(1) << u;
    }
    best = std::min(best, max_union_over_k_sets(rows, n, k, best));
    int64_t i = m - 1;
    while (i >= 0 && combo[i] == N - m + i) --i;
    if (i < 0) break;
    ++combo[i];
    for (int64_t j = i + 1; j < m; ++j) combo[j] = combo[j - 1] + 1;
  }
  return best;
}

// 1-WL colour refinement; returns vertex order grouped by colour plus group
// boundaries.
void refine_groups(const std::vector<uint64_t>& rows, int n,
                   std::vector<int>& order, std::vector<int>& group_of) {
  std::vector<int> color(n, 0);
  for (int round = 0; round < n; ++round) {
    std::vector<std::pair<std::vector<int>, int>> keys(n);
    for (int v = 0; v < n; ++v) {
      std::vector<int> key;
      key.push_back(color[v]);
      std::vector<int> nb;
      for (int w = 0; w < n; ++w) {
        if ((rows[v] >> w) & 1) nb.push_back(color[w]);
      }
      std::sort(nb.begin(), nb.end());
      key.insert(key.end(), nb.begin(), nb.end());
      keys[v] = {std::move(key), v};
    }
    auto sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> next(n);
    int c = 0;
    for (int i = 0; i < n; ++i) {
      if (i > 0 && sorted[i].first != sorted[i - 1].first) ++c;
      next[sorted[i].second] = c;
    }
    if (next == color) break;
    color = next;
  }
  order.resize(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return color[a] != color[b] ? color[a] < color[b] : a < b;
  });
  group_of.resize(n);
  for (int i = 0; i < n; ++i) group_of[i] = color[order[i]];
}

uint64_t remap_mask(uint64_t mask, const std::vector<int>& pos, int64_t N) {
  uint64_t out = 0;
  for (int64_t r = 0; r < N; ++r) {
    if ((mask >> r) & 1) {
      auto [u, w] = edge_unrank(r);
      out |= uint64_t(1) << edge_rank(pos[u], pos[w]);
    }
  }
  return out;
}

// Canonical form: minimum edge mask over all colour-class-preserving
// relabelings of the refined ordering.  Complete because isomorphisms
// preserve 1-WL colours.
uint64_t canonical_mask(uint64_t mask, int n) {
  const int64_t N = pair_count(n);
  std::vector<uint64_t> rows(n, 0);
  for (int64_t r = 0; r < N; ++r) {
    if ((mask >> r) & 1) {
      auto [u, w] = edge_unrank(r);
      rows[u] |= uint64_t(1) << w;
      rows[w] |= uint64_t(1) << u;
    }
  }
  std::vector<int> order, group_of;
  refine_groups(rows, n, order, group_of);

  uint64_t best = ~uint64_t(0);
  std::vector<int> perm = order;
  // iterate the product of within-group permutations of `order`
  std::vector<std::pair<int, int>> groups;
  for (int i = 0; i < n;) {
    int j = i;
    while (j < n && group_of[j] == group_of[i]) ++j;
    groups.emplace_back(i, j);
    i = j;
  }
  std::vector<int> pos(n);
  while (true) {
    for (int i = 0; i < n; ++i) pos[perm[i]] = i;
    best = std::min(best, remap_mask(mask, pos, N));
    // advance odometer of per-group next_permutation
    size_t g = 0;
    for (; g < groups.size(); ++g) {
      auto [lo, hi] = groups[g];
      if (std::next_permutation(perm.begin() + lo, perm.begin() + hi)) break;
      // wrapped: restore ascending order and carry to the next group
      std::sort(perm.begin() + lo, perm.begin() + hi);
    }
    if (g == groups.size()) break;
  }
  return best;
}

int min_max_iso(int n, int64_t m, int k) {
  const int64_t N = pair_count(n);
  std::unordered_set<uint64_t> level;
  level.insert(0);
  for (int64_t step = 0; step < m; ++step) {
    std::unordered_set<uint64_t> next;
    for (uint64_t mask : level) {
      for (int64_t r = 0; r < N; ++r) {
        if ((mask >> r) & 1) continue;
        next.insert(canonical_mask(mask | (uint64_t(1) << r), n));
      }
    }
    level = std::move(next);
  }
  int best = n + 1;
  for (uint64_t mask : level) {
    std::vector<uint64_t> rows(n, 0);
    for (int64_t r = 0; r < N; ++r) {
      if ((mask >> r) & 1) {
        auto [u, w] = edge_unrank(r);
        rows[u] |= uint64_t(1) << w;
        rows[w] |= uint64_t(1) << u;
      }
    }
    best = std::min(best, max_union_over_k_sets(rows, n, k, best));
  }
  return best;
}

}  // namespace

int min_max_neighborhood_union(int n, int64_t m, int k) {
  if (n < 1 || n > 9) {
    throw CapacityError("min_max_neighborhood_union: exhaustive explorer handles n <= 9 only");
  }
  const int64_t N = pair_count(n);
  if (m < 0 || m > N) throw ParamError("min_max_neighborhood_union: need 0 <= m <= N");
  if (k < 1 || k > n) throw ParamError("min_max_neighborhood_union: need 1 <= k <= n");
  if (n <= 7) return min_max_raw(n, m, k);
  return min_max_iso(n, m, k);
}

}  // namespace devlab
