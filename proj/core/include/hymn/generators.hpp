#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hymn/graph.hpp"

namespace hymn {

/// G(n, p): every pair u < v, visited in lexicographic order, is kept with
/// probability p using one Rng draw per pair.
Graph gen_erdos_renyi(int n, double p, std::uint64_t seed);

/// Random d-regular graph on m nodes (configuration model, full restart on
/// self-loops or multi-edges) with m uniformly chosen edges then removed.
Graph gen_rg_deleted(int m, int d, std::uint64_t seed);

/// Retry budget of the configuration-model sampler.
inline constexpr int kRegularSamplerRetries = 10'000;

/// Random d-regular graph on m nodes; the first stage of gen_rg_deleted.
Graph gen_random_regular(int m, int d, std::uint64_t seed);

enum class NamedKind { cycle, complete, star, path };

/// Standard fixtures: cycle(n) (n >= 3), complete(n), star(k) (k leaves, the
/// center is node 0), path(n).
Graph make_named(NamedKind kind, int size);

inline Graph cycle_graph(int n) { return make_named(NamedKind::cycle, n); }
inline Graph complete_graph(int n) { return make_named(NamedKind::complete, n); }
inline Graph star_graph(int leaves) { return make_named(NamedKind::star, leaves); }
inline Graph path_graph(int n) { return make_named(NamedKind::path, n); }

/// Disjoint union; node ids are offset cumulatively in list order.
Graph disjoint_union(std::span<const Graph> graphs);

/// C6 plus a global node, and two C3's plus a global node. Cycle nodes are
/// 0..5 and the global node is 6 in both graphs. No self-loop is placed on the
/// global node.
std::pair<Graph, Graph> counterexample_hex_global();

/// Id of the global node in both counterexample_hex_global() graphs.
inline constexpr NodeId kHexGlobalNode = 6;

/// Two non-isomorphic, cospectral, 4-regular vertex-transitive graphs on 12
/// nodes (Qt15 and Qt19). The pair is validated on every call; throws Error
/// naming the first violated property.
std::pair<Graph, Graph> counterexample_qt_pair();

/// Raw embedded adjacency data for the Qt pair, without validation.
std::pair<Graph, Graph> qt_pair_unchecked();

/// Checks the properties the Qt pair is required to have: 12 nodes, 4-regular,
/// 1-WL equivalent, equal trace(A^k) for k <= 12, and separated by a top-1
/// subgraph-centrality marked bag. Throws Error naming the failed property.
void validate_qt_pair(const Graph& g1, const Graph& g2);

}  // namespace hymn
