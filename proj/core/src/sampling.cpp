#include "hymn/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "hymn/error.hpp"
#include "hymn/rng.hpp"

namespace hymn {

namespace {

struct SourceName {
  Policy::Source source;
  std::string_view name;
};

constexpr SourceName kSources[] = {
    {Policy::Source::subgraph, "sc"},         {Policy::Source::katz, "katz"},
    {Policy::Source::degree, "degree"},       {Policy::Source::closeness, "closeness"},
    {Policy::Source::betweenness, "betweenness"}, {Policy::Source::rwse_sum, "rwse_sum"},
};

}  // namespace

Policy Policy::parse(std::string_view name, std::uint64_t seed) {
  if (name == "random") return Policy::random(seed);
  const auto cut = name.rfind('_');
  if (cut == std::string_view::npos) throw Error("unknown policy '" + std::string(name) + "'");
  const auto source = name.substr(0, cut);
  const auto dir = name.substr(cut + 1);
  Policy p;
  if (dir == "max") {
    p.direction = Direction::max;
  } else if (dir == "min") {
    p.direction = Direction::min;
  } else {
    throw Error("unknown policy '" + std::string(name) + "'");
  }
  for (const auto& entry : kSources) {
    if (entry.name == source || (source == "subgraph" && entry.source == Source::subgraph)) {
      p.source = entry.source;
      return p;
    }
  }
  throw Error("unknown policy '" + std::string(name) + "'");
}

std::string Policy::name() const {
  if (source == Source::random) return "random";
  for (const auto& entry : kSources) {
    if (entry.source == source) {
      return std::string(entry.name) + (direction == Direction::max ? "_max" : "_min");
    }
  }
  return "unknown";
}

std::vector<NodeId> select_top(std::span<const double> scores, int T) {
  const int n = static_cast<int>(scores.size());
  if (T < 1) throw Error("select_top: T must be at least 1");
  if (T > n) throw Error("select_top: T=" + std::to_string(T) + " exceeds node count " + std::to_string(n));
  for (double s : scores) {
    if (!std::isfinite(s)) throw Error("select_top: non-finite score");
  }
  std::vector<NodeId> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::partial_sort(ids.begin(), ids.begin() + T, ids.end(), [&](NodeId a, NodeId b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  ids.resize(T);
  return ids;
}

std::vector<double> policy_scores(const Graph& g, const Policy& policy) {
  std::vector<double> scores;
  switch (policy.source) {
    case Policy::Source::subgraph:
      scores = sc_truncated(g, policy.order).scores;
      break;
    case Policy::Source::katz:
      scores = katz_default(g).scores;
      break;
    case Policy::Source::degree:
      scores = classical_centrality(g, Measure::degree).scores;
      break;
    case Policy::Source::closeness:
      scores = classical_centrality(g, Measure::closeness).scores;
      break;
    case Policy::Source::betweenness:
      scores = classical_centrality(g, Measure::betweenness).scores;
      break;
    case Policy::Source::rwse_sum: {
      const CseMatrix enc = rwse(g, policy.order);
      scores.resize(g.num_nodes());
      // Column 0 is the constant layout column and is left out of the sum.
      for (int v = 0; v < g.num_nodes(); ++v) scores[v] = enc.values.row(v).tail(enc.order).sum();
      break;
    }
    case Policy::Source::random:
      throw Error("policy_scores: the random policy has no score vector");
  }
  if (policy.direction == Policy::Direction::min) {
    for (auto& s : scores) s = -s;
  }
  return scores;
}

MarkedBag make_bag(Graph g, std::vector<NodeId> selected, bool include_original) {
  const int n = g.num_nodes();
  const int T = static_cast<int>(selected.size());
  MarkedBag bag{std::move(g), {}, include_original, std::move(selected)};
  bag.marks.setZero(n, T);
  std::vector<char> seen(n, 0);
  for (int t = 0; t < T; ++t) {
    const NodeId v = bag.selected[t];
    if (v < 0 || v >= n) throw Error("make_bag: marked node out of range");
    if (seen[v]) throw Error("make_bag: node " + std::to_string(v) + " marked twice");
    seen[v] = 1;
    bag.marks(v, t) = 1;
  }
  return bag;
}

MarkedBag build_bag(const Graph& g, const Policy& policy, int T, bool include_original) {
  const int n = g.num_nodes();
  if (T < 0) throw Error("build_bag: T must be non-negative");
  if (T > n) {
    throw Error("graph '" + g.id() + "': T=" + std::to_string(T) + " exceeds node count " + std::to_string(n));
  }
  std::vector<NodeId> selected;
  if (T > 0) {
    if (policy.source == Policy::Source::random) {
      std::vector<NodeId> ids(n);
      std::iota(ids.begin(), ids.end(), 0);
      Rng rng(policy.seed);
      for (int i = 0; i < T; ++i) {
        const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
        std::swap(ids[i], ids[j]);
      }
      selected.assign(ids.begin(), ids.begin() + T);
    } else {
      const auto scores = policy_scores(g, policy);
      selected = select_top(scores, T);
    }
  }
  return make_bag(g, std::move(selected), include_original);
}

std::vector<MarkedBag> build_bags(std::span<const Graph> graphs, const Policy& policy, int T,
                                  bool include_original) {
  std::vector<MarkedBag> bags;
  bags.reserve(graphs.size());
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    Policy p = policy;
    if (p.source == Policy::Source::random) p.seed = derive_seed(policy.seed, i);
    bags.push_back(build_bag(graphs[i], p, T, include_original));
  }
  return bags;
}

std::string bag_to_json_line(const MarkedBag& bag, const Policy& policy) {
  nlohmann::ordered_json j;
  j["id"] = bag.graph.id();
  j["selected"] = bag.selected;
  j["policy"] = policy.name();
  j["T"] = bag.num_marks();
  return j.dump();
}

}  // namespace hymn
