#include "hymn/generators.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "hymn/centrality.hpp"
#include "hymn/error.hpp"
#include "hymn/expressiveness.hpp"
#include "hymn/rng.hpp"
#include "hymn/sampling.hpp"

namespace hymn {

Graph gen_erdos_renyi(int n, double p, std::uint64_t seed) {
  if (n < 1) throw Error("gen_erdos_renyi: n must be at least 1");
  if (!(p >= 0.0 && p <= 1.0)) throw Error("gen_erdos_renyi: p must lie in [0, 1]");
  Rng rng(seed);
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (rng.bernoulli(p)) edges.emplace_back(u, v);
    }
  }
  return Graph("er_n" + std::to_string(n) + "_s" + std::to_string(seed), n, std::move(edges));
}

Graph gen_random_regular(int m, int d, std::uint64_t seed) {
  if (m < 1 || d < 0) throw Error("gen_random_regular: m must be >= 1 and d >= 0");
  if ((static_cast<long>(m) * d) % 2 != 0) throw Error("gen_random_regular: m*d must be even");
  if (d >= m) throw Error("gen_random_regular: d must be smaller than m");
  Rng rng(seed);
  std::vector<NodeId> stubs;
  stubs.reserve(static_cast<std::size_t>(m) * d);
  for (int attempt = 0; attempt < kRegularSamplerRetries; ++attempt) {
    stubs.clear();
    for (int v = 0; v < m; ++v) stubs.insert(stubs.end(), d, v);
    rng.shuffle(stubs);
    std::vector<Edge> edges;
    edges.reserve(stubs.size() / 2);
    bool simple = true;
    for (std::size_t i = 0; i < stubs.size(); i += 2) {
      auto u = stubs[i];
      auto v = stubs[i + 1];
      if (u == v) {
        simple = false;
        break;
      }
      edges.emplace_back(std::min(u, v), std::max(u, v));
    }
    if (!simple) continue;
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) continue;
    return Graph("rr_m" + std::to_string(m) + "_d" + std::to_string(d) + "_s" + std::to_string(seed), m,
                 std::move(edges));
  }
  throw Error("regular-graph sampling exceeded retry budget");
}

Graph gen_rg_deleted(int m, int d, std::uint64_t seed) {
  if (d < 2) throw Error("gen_rg_deleted: d must be at least 2 so that m edges can be deleted");
  const Graph regular = gen_random_regular(m, d, seed);
  std::vector<Edge> edges = regular.edges();
  // Independent stream for the deletion step.
  Rng rng(derive_seed(seed, 1));
  // Partial Fisher-Yates: the first m positions become the deleted edges.
  for (int i = 0; i < m; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(edges.size() - i));
    std::swap(edges[i], edges[j]);
  }
  edges.erase(edges.begin(), edges.begin() + m);
  return Graph("rgdel_m" + std::to_string(m) + "_d" + std::to_string(d) + "_s" + std::to_string(seed), m,
               std::move(edges));
}

Graph make_named(NamedKind kind, int size) {
  std::vector<Edge> edges;
  switch (kind) {
    case NamedKind::cycle:
      if (size < 3) throw Error("cycle graph needs at least 3 nodes");
      for (int v = 0; v < size; ++v) edges.emplace_back(v, (v + 1) % size);
      return Graph("cycle" + std::to_string(size), size, std::move(edges));
    case NamedKind::complete:
      if (size < 1) throw Error("complete graph needs at least 1 node");
      for (int u = 0; u < size; ++u)
        for (int v = u + 1; v < size; ++v) edges.emplace_back(u, v);
      return Graph("complete" + std::to_string(size), size, std::move(edges));
    case NamedKind::star:
      if (size < 1) throw Error("star graph needs at least 1 leaf");
      for (int v = 1; v <= size; ++v) edges.emplace_back(0, v);
      return Graph("star" + std::to_string(size), size + 1, std::move(edges));
    case NamedKind::path:
      if (size < 1) throw Error("path graph needs at least 1 node");
      for (int v = 0; v + 1 < size; ++v) edges.emplace_back(v, v + 1);
      return Graph("path" + std::to_string(size), size, std::move(edges));
  }
  throw Error("make_named: unknown kind");
}

Graph disjoint_union(std::span<const Graph> graphs) {
  if (graphs.empty()) throw Error("disjoint_union: empty graph list");
  const int dim = graphs.front().feat_dim();
  int n = 0;
  std::vector<Edge> edges;
  std::string id;
  for (const auto& g : graphs) {
    if (g.feat_dim() != dim) throw Error("disjoint_union: incompatible feature dimensions");
    for (const auto& [u, v] : g.edges()) edges.emplace_back(u + n, v + n);
    n += g.num_nodes();
    id += (id.empty() ? "" : "+") + g.id();
  }
  if (graphs.size() == 1) return graphs.front();
  RowMatrix feat(n, dim);
  int offset = 0;
  for (const auto& g : graphs) {
    feat.middleRows(offset, g.num_nodes()) = g.node_feat();
    offset += g.num_nodes();
  }
  return Graph(id, n, std::move(edges), std::move(feat));
}

std::pair<Graph, Graph> counterexample_hex_global() {
  std::vector<Edge> hex;
  std::vector<Edge> triangles;
  for (int v = 0; v < 6; ++v) {
    hex.emplace_back(v, (v + 1) % 6);
    hex.emplace_back(v, kHexGlobalNode);
    triangles.emplace_back(v, kHexGlobalNode);
  }
  for (int base : {0, 3}) {
    for (int i = 0; i < 3; ++i) triangles.emplace_back(base + i, base + (i + 1) % 3);
  }
  return {Graph("hex_global", 7, std::move(hex)), Graph("two_triangles_global", 7, std::move(triangles))};
}

std::pair<Graph, Graph> qt_pair_unchecked() {
  // Circulant C12(1, 2): the square of the 12-cycle.
  std::vector<Edge> circ;
  for (int v = 0; v < 12; ++v) {
    circ.emplace_back(v, (v + 1) % 12);
    circ.emplace_back(v, (v + 2) % 12);
  }
  // Cayley graph of the dihedral group of order 12; elements r^i s^j are
  // numbered 2i + j. Every neighborhood induces a triangle plus an isolated
  // node, whereas in C12(1, 2) it induces a path on four nodes.
  std::vector<Edge> dihedral = {
      {0, 1},  {0, 3},  {0, 6},  {0, 7},  {1, 6},  {1, 7},  {1, 10}, {2, 3},
      {2, 5},  {2, 8},  {2, 9},  {3, 8},  {3, 9},  {4, 5},  {4, 7},  {4, 10},
      {4, 11}, {5, 10}, {5, 11}, {6, 7},  {6, 9},  {8, 9},  {8, 11}, {10, 11},
  };
  return {Graph("qt15", 12, std::move(circ)), Graph("qt19", 12, std::move(dihedral))};
}

void validate_qt_pair(const Graph& g1, const Graph& g2) {
  for (const Graph* g : {&g1, &g2}) {
    if (g->num_nodes() != 12) throw Error("qt pair: '" + g->id() + "' does not have 12 nodes");
    for (int v = 0; v < g->num_nodes(); ++v) {
      if (g->degree(v) != 4) throw Error("qt pair: '" + g->id() + "' is not 4-regular");
    }
  }
  if (wl_distinguish(g1, g2)) throw Error("qt pair: graphs are not 1-WL equivalent");
  const auto p1 = adj_powers(g1, 12);
  const auto p2 = adj_powers(g2, 12);
  for (int k = 0; k <= 12; ++k) {
    if (p1[k].trace() != p2[k].trace()) {
      throw Error("qt pair: trace(A^" + std::to_string(k) + ") differs");
    }
  }
  if (!marked_bag_separates(g1, g2, Policy::sc_max(), 1)) {
    throw Error("qt pair: top-1 marked bags do not separate the graphs (non-isomorphism not certified)");
  }
}

std::pair<Graph, Graph> counterexample_qt_pair() {
  auto pair = qt_pair_unchecked();
  validate_qt_pair(pair.first, pair.second);
  return pair;
}

}  // namespace hymn
