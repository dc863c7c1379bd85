#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hymn/centrality.hpp"
#include "hymn/graph.hpp"

namespace hymn {

/// Node-selection policy: a score source and a direction, or uniform random.
struct Policy {
  enum class Source { subgraph, katz, degree, closeness, betweenness, rwse_sum, random };
  enum class Direction { max, min };

  Source source = Source::subgraph;
  Direction direction = Direction::max;
  std::uint64_t seed = 0;       // random policy only
  int order = kDefaultScOrder;  // walk-length K for subgraph / rwse_sum scores

  static Policy sc_max() { return {}; }
  static Policy sc_min() { return {Source::subgraph, Direction::min}; }
  static Policy random(std::uint64_t seed) { return {Source::random, Direction::max, seed}; }

  /// Names such as "sc_max", "katz_min", "betweenness_max", "rwse_sum_max",
  /// "random". The seed of a random policy is supplied separately.
  static Policy parse(std::string_view name, std::uint64_t seed = 0);
  std::string name() const;
  bool operator==(const Policy&) const = default;
};

/// Ids of the T largest scores, ordered by (score desc, id asc).
std::vector<NodeId> select_top(std::span<const double> scores, int T);

/// Score vector a policy ranks by (negated for min policies). Not defined for
/// the random policy.
std::vector<double> policy_scores(const Graph& g, const Policy& policy);

/// A graph with T one-hot mark columns. Subgraphs are never materialized;
/// marked copies share the topology of `graph`.
struct MarkedBag {
  Graph graph;
  /// n x T; column t is the indicator of selected[t].
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> marks;
  bool include_original = true;
  std::vector<NodeId> selected;

  int num_marks() const { return static_cast<int>(selected.size()); }
  /// Copies processed by a model: the original (when included) plus T marked.
  int num_copies() const { return num_marks() + (include_original ? 1 : 0); }
};

MarkedBag make_bag(Graph g, std::vector<NodeId> selected, bool include_original = true);

MarkedBag build_bag(const Graph& g, const Policy& policy, int T, bool include_original = true);

/// build_bag over a dataset; random policies draw with a per-graph seed
/// derived from policy.seed and the graph's position.
std::vector<MarkedBag> build_bags(std::span<const Graph> graphs, const Policy& policy, int T,
                                  bool include_original = true);

std::string bag_to_json_line(const MarkedBag& bag, const Policy& policy);

}  // namespace hymn
