#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "hymn/centrality.hpp"
#include "hymn/error.hpp"
#include "hymn/generators.hpp"
#include "hymn/sampling.hpp"

using namespace hymn;

namespace {

void check_bag_invariants(const MarkedBag& bag, int T) {
  REQUIRE(bag.num_marks() == T);
  REQUIRE(bag.marks.rows() == bag.graph.num_nodes());
  REQUIRE(bag.marks.cols() == T);
  auto sel = bag.selected;
  std::sort(sel.begin(), sel.end());
  CHECK(std::adjacent_find(sel.begin(), sel.end()) == sel.end());
  for (int t = 0; t < T; ++t) {
    CHECK(bag.marks.col(t).cast<int>().sum() == 1);
    CHECK(bag.marks(bag.selected[t], t) == 1);
  }
  for (int v = 0; v < bag.graph.num_nodes(); ++v) CHECK(bag.marks.row(v).cast<int>().sum() <= 1);
}

}  // namespace

TEST_SUITE("sampling") {

TEST_CASE("select_top ordering and ties") {
  const std::vector<double> s{3.2, 5.1, 5.1, 0.4};
  CHECK(select_top(s, 2) == std::vector<NodeId>{1, 2});
  CHECK(select_top(std::vector<double>{1, 1, 1}, 3) == std::vector<NodeId>{0, 1, 2});
  CHECK(select_top(s, 4) == std::vector<NodeId>{1, 2, 0, 3});
  CHECK(select_top(sc_truncated(star_graph(3)).scores, 1) == std::vector<NodeId>{0});
  CHECK_THROWS_AS(select_top(s, 5), Error);
  CHECK_THROWS_AS(select_top(s, 0), Error);
  CHECK_THROWS_AS(select_top(std::vector<double>{1.0, std::nan("")}, 1), Error);
}

TEST_CASE("select_top is equivariant for distinct scores") {
  const std::vector<double> s{0.3, 2.5, -1.0, 4.0, 1.5};
  const std::vector<NodeId> perm{2, 0, 4, 1, 3};
  std::vector<double> permuted(5);
  for (int v = 0; v < 5; ++v) permuted[perm[v]] = s[v];
  const auto a = select_top(s, 3);
  const auto b = select_top(permuted, 3);
  for (int i = 0; i < 3; ++i) CHECK(perm[a[i]] == b[i]);
}

TEST_CASE("policy names round-trip") {
  for (std::string name : {"sc_max", "sc_min", "katz_max", "katz_min", "degree_max", "closeness_min",
                           "betweenness_max", "rwse_sum_max", "random"}) {
    CHECK(Policy::parse(name, 3).name() == name);
  }
  CHECK(Policy::parse("subgraph_max") == Policy::sc_max());
  CHECK(Policy::parse("random", 9).seed == 9);
  CHECK_THROWS_AS(Policy::parse("sc_mid"), Error);
  CHECK_THROWS_AS(Policy::parse("pagerank_max"), Error);
  CHECK_THROWS_AS(Policy::parse("max"), Error);
}

TEST_CASE("build_bag examples") {
  const auto c6 = build_bag(cycle_graph(6), Policy::sc_max(), 2);
  CHECK(c6.selected == std::vector<NodeId>{0, 1});
  CHECK(c6.include_original);
  CHECK(c6.num_copies() == 3);

  const auto [hex, tri] = counterexample_hex_global();
  CHECK(build_bag(hex, Policy::sc_max(), 1).selected == std::vector<NodeId>{kHexGlobalNode});
  CHECK(build_bag(tri, Policy::sc_max(), 1).selected == std::vector<NodeId>{kHexGlobalNode});

  const Graph g = gen_erdos_renyi(9, 0.4, 5);
  auto all = build_bag(g, Policy::random(4), 9).selected;
  std::sort(all.begin(), all.end());
  std::vector<NodeId> ids(9);
  std::iota(ids.begin(), ids.end(), 0);
  CHECK(all == ids);

  const auto none = build_bag(g, Policy::sc_max(), 0, false);
  CHECK(none.num_copies() == 0);
  CHECK_THROWS_AS(build_bag(g, Policy::sc_max(), -1), Error);
}

TEST_CASE("min and max policies pick opposite ends") {
  const Graph s = star_graph(4);
  CHECK(build_bag(s, Policy::sc_max(), 1).selected.front() == 0);
  CHECK(build_bag(s, Policy::sc_min(), 1).selected.front() == 1);
  CHECK(build_bag(s, Policy::parse("degree_min"), 1).selected.front() == 1);
  CHECK(build_bag(s, Policy::parse("betweenness_max"), 1).selected.front() == 0);
  CHECK(build_bag(s, Policy::parse("katz_max"), 1).selected.front() == 0);
  CHECK(build_bag(s, Policy::parse("closeness_max"), 1).selected.front() == 0);
}

TEST_CASE("rwse_sum policy sums the return probabilities") {
  const Graph g = gen_erdos_renyi(10, 0.5, 8);
  Policy p = Policy::parse("rwse_sum_max");
  p.order = 6;
  const auto scores = policy_scores(g, p);
  const auto enc = rwse(g, 6);
  for (int v = 0; v < 10; ++v) CHECK(scores[v] == doctest::Approx(enc.values.row(v).sum() - 1.0));
  CHECK_THROWS_AS(policy_scores(g, Policy::random(1)), Error);
}

TEST_CASE("bag invariants over many draws") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Graph g = gen_erdos_renyi(12, 0.3, seed);
    for (const Policy& p : {Policy::sc_max(), Policy::sc_min(), Policy::random(seed)}) {
      for (int T : {1, 4, 12}) check_bag_invariants(build_bag(g, p, T), T);
    }
  }
}

TEST_CASE("T above the node count names the graph") {
  const Graph g = path_graph(3).with_id("tiny");
  CHECK_THROWS_WITH_AS(build_bag(g, Policy::sc_max(), 4), doctest::Contains("tiny"), Error);
}

TEST_CASE("make_bag validation") {
  CHECK_THROWS_AS(make_bag(path_graph(3), {0, 0}), Error);
  CHECK_THROWS_AS(make_bag(path_graph(3), {3}), Error);
  check_bag_invariants(make_bag(path_graph(3), {2, 0}), 2);
}

TEST_CASE("build_bags derives per-graph random streams deterministically") {
  std::vector<Graph> graphs;
  for (int i = 0; i < 5; ++i) graphs.push_back(gen_erdos_renyi(10, 0.3, i).with_id("g" + std::to_string(i)));
  const auto a = build_bags(graphs, Policy::random(7), 3);
  const auto b = build_bags(graphs, Policy::random(7), 3);
  const auto c = build_bags(graphs, Policy::random(8), 3);
  bool differs = false;
  for (int i = 0; i < 5; ++i) {
    CHECK(a[i].selected == b[i].selected);
    differs = differs || a[i].selected != c[i].selected;
  }
  CHECK(differs);
  CHECK(bag_to_json_line(a[0], Policy::random(7)).find(R"("policy":"random","T":3)") != std::string::npos);
}

}  // TEST_SUITE
