#include "hymn/expressiveness.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "hymn/centrality.hpp"
#include "hymn/error.hpp"
#include "hymn/generators.hpp"

namespace hymn {

namespace {

int count_classes(const std::vector<std::vector<int>>& colors) {
  int classes = 0;
  for (const auto& part : colors) {
    for (int c : part) classes = std::max(classes, c + 1);
  }
  return classes;
}

struct JointResult {
  std::vector<std::vector<int>> colors;
  int rounds = 0;
};

JointResult refine(std::span<const Graph* const> graphs, std::span<const NodeLabels> init, int max_rounds) {
  JointResult result;
  std::map<std::int64_t, int> label_ids;
  int total_nodes = 0;
  for (std::size_t p = 0; p < graphs.size(); ++p) {
    const int n = graphs[p]->num_nodes();
    total_nodes += n;
    const bool uniform = p >= init.size() || init[p].empty();
    if (!uniform && static_cast<int>(init[p].size()) != n) throw Error("wl_refine: initial labels do not match node count");
    std::vector<int> colors(n);
    for (int v = 0; v < n; ++v) {
      const std::int64_t label = uniform ? 0 : init[p][v];
      colors[v] = label_ids.try_emplace(label, static_cast<int>(label_ids.size())).first->second;
    }
    result.colors.push_back(std::move(colors));
  }
  if (max_rounds < 0) max_rounds = std::max(1, total_nodes);

  int classes = count_classes(result.colors);
  std::vector<int> signature;
  while (result.rounds < max_rounds) {
    ++result.rounds;
    std::map<std::vector<int>, int> ids;
    std::vector<std::vector<int>> next(graphs.size());
    for (std::size_t p = 0; p < graphs.size(); ++p) {
      const Graph& g = *graphs[p];
      const auto& cur = result.colors[p];
      next[p].resize(g.num_nodes());
      for (int v = 0; v < g.num_nodes(); ++v) {
        signature.assign(1, cur[v]);
        for (NodeId u : g.neighbors(v)) signature.push_back(cur[u]);
        std::sort(signature.begin() + 1, signature.end());
        next[p][v] = ids.try_emplace(signature, static_cast<int>(ids.size())).first->second;
      }
    }
    const int next_classes = static_cast<int>(ids.size());
    result.colors = std::move(next);
    // Refinement never merges classes, so an unchanged count means a stable partition.
    if (next_classes == classes) break;
    classes = next_classes;
  }
  return result;
}

WlColoring to_coloring(std::vector<int> colors, int rounds) {
  WlColoring c;
  for (int x : colors) ++c.histogram[x];
  c.colors = std::move(colors);
  c.rounds = rounds;
  return c;
}

std::vector<int> sorted_colors(const std::vector<int>& colors) {
  std::vector<int> out = colors;
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeId> dominating_nodes(const Graph& g) {
  // Nodes adjacent to every other node of their component.
  std::vector<int> comp(g.num_nodes(), -1);
  std::vector<int> size;
  for (int s = 0; s < g.num_nodes(); ++s) {
    if (comp[s] >= 0) continue;
    const int id = static_cast<int>(size.size());
    size.push_back(0);
    std::vector<NodeId> stack{s};
    comp[s] = id;
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      ++size[id];
      for (NodeId u : g.neighbors(v)) {
        if (comp[u] < 0) {
          comp[u] = id;
          stack.push_back(u);
        }
      }
    }
  }
  std::vector<NodeId> out;
  for (int v = 0; v < g.num_nodes(); ++v) {
    if (size[comp[v]] > 2 && g.degree(v) == size[comp[v]] - 1) out.push_back(v);
  }
  return out;
}

}  // namespace

WlColoring wl_refine(const Graph& g, const NodeLabels& init, int max_rounds) {
  const Graph* parts[] = {&g};
  const NodeLabels labels[] = {init};
  auto r = refine(parts, labels, max_rounds);
  return to_coloring(std::move(r.colors.front()), r.rounds);
}

std::vector<WlColoring> wl_refine_jointly(std::span<const Graph* const> graphs, std::span<const NodeLabels> init) {
  auto r = refine(graphs, init, -1);
  std::vector<WlColoring> out;
  for (auto& colors : r.colors) out.push_back(to_coloring(std::move(colors), r.rounds));
  return out;
}

bool wl_distinguish(const Graph& g1, const Graph& g2, const NodeLabels& init1, const NodeLabels& init2) {
  if (g1.num_nodes() != g2.num_nodes()) return true;
  const Graph* parts[] = {&g1, &g2};
  const NodeLabels labels[] = {init1, init2};
  const auto r = refine(parts, labels, -1);
  return sorted_colors(r.colors[0]) != sorted_colors(r.colors[1]);
}

std::pair<NodeLabels, NodeLabels> quantized_cse_labels(const Graph& g1, const Graph& g2, int K) {
  std::map<std::vector<std::int64_t>, std::int64_t> rows;
  auto label = [&](const Graph& g) {
    const CseMatrix enc = cse(g, K);
    NodeLabels out(g.num_nodes());
    std::vector<std::int64_t> key(enc.values.cols());
    for (int v = 0; v < g.num_nodes(); ++v) {
      for (int k = 0; k < enc.values.cols(); ++k) key[k] = std::llround(enc.values(v, k) * 1e9);
      out[v] = rows.try_emplace(key, static_cast<std::int64_t>(rows.size())).first->second;
    }
    return out;
  };
  auto l1 = label(g1);
  auto l2 = label(g2);
  return {std::move(l1), std::move(l2)};
}

bool cse_separates(const Graph& g1, const Graph& g2, int K) {
  const auto [l1, l2] = quantized_cse_labels(g1, g2, K);
  return wl_distinguish(g1, g2, l1, l2);
}

bool marked_bag_separates(const MarkedBag& b1, const MarkedBag& b2) {
  if (b1.num_copies() != b2.num_copies()) return true;
  std::vector<const Graph*> parts;
  std::vector<NodeLabels> labels;
  for (const MarkedBag* bag : {&b1, &b2}) {
    const int n = bag->graph.num_nodes();
    if (bag->include_original) {
      parts.push_back(&bag->graph);
      labels.emplace_back(n, 0);
    }
    for (int t = 0; t < bag->num_marks(); ++t) {
      NodeLabels l(n, 0);
      l[bag->selected[t]] = 1;
      parts.push_back(&bag->graph);
      labels.push_back(std::move(l));
    }
  }
  const auto r = refine(parts, labels, -1);
  const std::size_t copies = static_cast<std::size_t>(b1.num_copies());
  std::vector<std::vector<int>> h1;
  std::vector<std::vector<int>> h2;
  for (std::size_t i = 0; i < r.colors.size(); ++i) {
    (i < copies ? h1 : h2).push_back(sorted_colors(r.colors[i]));
  }
  std::sort(h1.begin(), h1.end());
  std::sort(h2.begin(), h2.end());
  return h1 != h2;
}

bool marked_bag_separates(const Graph& g1, const Graph& g2, const Policy& policy, int T, bool include_original) {
  return marked_bag_separates(build_bag(g1, policy, T, include_original), build_bag(g2, policy, T, include_original));
}

bool SuiteReport::all_pass() const {
  if (!thm41_pass || !thm42_pass) return false;
  for (const auto& [k, pass] : thm42_k_copies_pass) {
    if (!pass) return false;
  }
  return true;
}

std::vector<SuiteAssertion> SuiteReport::failures() const {
  std::vector<SuiteAssertion> out;
  for (const auto& a : assertions) {
    if (!a.passed) out.push_back(a);
  }
  return out;
}

std::string SuiteReport::to_json() const {
  nlohmann::ordered_json j;
  j["all_pass"] = all_pass();
  j["thm41_pass"] = thm41_pass;
  j["thm42_pass"] = thm42_pass;
  auto copies = nlohmann::ordered_json::object();
  for (const auto& [k, pass] : thm42_k_copies_pass) copies[std::to_string(k)] = pass;
  j["thm42_k_copies_pass"] = copies;
  auto list = nlohmann::ordered_json::array();
  for (const auto& a : assertions) list.push_back({{"theorem", a.theorem}, {"assertion", a.name}, {"passed", a.passed}});
  j["assertions"] = list;
  return j.dump(2);
}

SuiteInputs SuiteInputs::shipped() { return {counterexample_qt_pair(), counterexample_hex_global(), {2, 3}}; }

namespace {

// Assertions shared by the k = 1 and k-copy variants of the second theorem.
bool check_top_centrality_pair(const Graph& g1, const Graph& g2, int T, int cse_order, const std::string& theorem,
                               std::vector<SuiteAssertion>& out) {
  bool pass = true;
  auto record = [&](std::string name, bool ok) {
    out.push_back({theorem, std::move(name), ok});
    pass = pass && ok;
  };
  for (const Graph* g : {&g1, &g2}) {
    const auto bag = build_bag(*g, Policy::sc_max(), T);
    auto selected = bag.selected;
    std::sort(selected.begin(), selected.end());
    const auto globals = dominating_nodes(*g);
    record("sc_max top-" + std::to_string(T) + " selects the global node(s) of " + g->id(), selected == globals);
  }
  record("wl_distinguish is false", !wl_distinguish(g1, g2));
  record("marked_bag_separates(sc_max, T=" + std::to_string(T) + ") is false",
         !marked_bag_separates(g1, g2, Policy::sc_max(), T));
  record("cse_separates(K=" + std::to_string(cse_order) + ") is true", cse_separates(g1, g2, cse_order));
  return pass;
}

}  // namespace

SuiteReport counterexample_suite(const SuiteInputs& inputs) {
  SuiteReport report;
  {
    const auto& [g1, g2] = inputs.qt;
    bool pass = true;
    auto record = [&](std::string name, bool ok) {
      report.assertions.push_back({"thm41", std::move(name), ok});
      pass = pass && ok;
    };
    record("wl_distinguish (uniform init) is false", !wl_distinguish(g1, g2));
    record("cse_separates(K=12) is false", !cse_separates(g1, g2, 12));
    record("marked_bag_separates(sc_max, T=1) is true", marked_bag_separates(g1, g2, Policy::sc_max(), 1));
    report.thm41_pass = pass;
  }
  const auto& [h1, h2] = inputs.hex_global;
  report.thm42_pass = check_top_centrality_pair(h1, h2, 1, 3, "thm42", report.assertions);
  for (int k : inputs.copies) {
    const std::vector<Graph> c1(static_cast<std::size_t>(k), h1);
    const std::vector<Graph> c2(static_cast<std::size_t>(k), h2);
    report.thm42_k_copies_pass[k] = check_top_centrality_pair(disjoint_union(c1), disjoint_union(c2), k, 3,
                                                              "thm42_k" + std::to_string(k), report.assertions);
  }
  return report;
}

}  // namespace hymn
