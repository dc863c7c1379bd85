#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hymn/graph.hpp"
#include "hymn/sampling.hpp"

namespace hymn {

/// Stable 1-WL coloring of one graph.
struct WlColoring {
  std::vector<int> colors;       // node -> color id
  std::map<int, int> histogram;  // color id -> multiplicity
  int rounds = 0;                // refinement rounds run, including the final confirming one
};

/// Initial node labels; empty means uniform.
using NodeLabels = std::vector<std::int64_t>;

/// 1-WL color refinement: color <- id(color, sorted neighbor colors) until the
/// partition stops refining or `max_rounds` rounds ran (negative: n).
/// Color ids are assigned in first-occurrence order.
WlColoring wl_refine(const Graph& g, const NodeLabels& init = {}, int max_rounds = -1);

/// Joint refinement of several graphs under one shared color context. Stops
/// once the partition of the disjoint union is stable. Returns per-graph
/// colorings whose ids are comparable across graphs.
std::vector<WlColoring> wl_refine_jointly(std::span<const Graph* const> graphs, std::span<const NodeLabels> init);

/// True iff the stable color histograms of g1 and g2 differ.
bool wl_distinguish(const Graph& g1, const Graph& g2, const NodeLabels& init1 = {}, const NodeLabels& init2 = {});

/// CSE rows quantized to multiples of 1e-9, one label per distinct row.
std::pair<NodeLabels, NodeLabels> quantized_cse_labels(const Graph& g1, const Graph& g2, int K);

/// 1-WL with initial colors given by the order-K CSE rows.
bool cse_separates(const Graph& g1, const Graph& g2, int K);

/// DS-style bag comparison: each copy of each bag is refined with the mark
/// bit as initial color, and the multisets of per-copy histograms are compared.
bool marked_bag_separates(const MarkedBag& b1, const MarkedBag& b2);
bool marked_bag_separates(const Graph& g1, const Graph& g2, const Policy& policy, int T,
                          bool include_original = true);

struct SuiteAssertion {
  std::string theorem;  // "thm41", "thm42", "thm42_k2", ...
  std::string name;
  bool passed = false;
};

struct SuiteReport {
  bool thm41_pass = false;
  bool thm42_pass = false;
  std::map<int, bool> thm42_k_copies_pass;
  std::vector<SuiteAssertion> assertions;

  bool all_pass() const;
  std::vector<SuiteAssertion> failures() const;
  std::string to_json() const;
};

struct SuiteInputs {
  std::pair<Graph, Graph> qt;
  std::pair<Graph, Graph> hex_global;
  std::vector<int> copies{2, 3};

  /// The shipped counterexample constructors.
  static SuiteInputs shipped();
};

/// Executable counterexamples for the two separation theorems. Each assertion
/// is recorded by name; a theorem passes when all of its assertions hold.
SuiteReport counterexample_suite(const SuiteInputs& inputs = SuiteInputs::shipped());

}  // namespace hymn
