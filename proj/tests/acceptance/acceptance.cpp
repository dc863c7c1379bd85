// Runs the eleven acceptance criteria and prints one PASS/FAIL line each.
// HYMN_ACCEPTANCE_ONLY=3,7 restricts the run to the listed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "hymn/analysis.hpp"
#include "hymn/centrality.hpp"
#include "hymn/expressiveness.hpp"
#include "hymn/generators.hpp"
#include "hymn/nn.hpp"
#include "hymn/rng.hpp"
#include "hymn/sampling.hpp"
#include "hymn/training.hpp"
#include "oracles.hpp"

using namespace hymn;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int precision = 4) {
  std::ostringstream s;
  s.precision(precision);
  s << x;
  return s.str();
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

bool suite_theorem_pass(const SuiteReport& r, const std::string& prefix, std::string& failed) {
  bool ok = true;
  for (const auto& a : r.assertions) {
    if (a.theorem.rfind(prefix, 0) != 0 || a.passed) continue;
    ok = false;
    failed += (failed.empty() ? "" : "; ") + a.theorem + ": " + a.name;
  }
  return ok;
}

// ---- 1, 2: separation theorems ------------------------------------------------

Outcome c1_first_theorem() {
  const auto [q1, q2] = counterexample_qt_pair();
  const bool wl = !wl_distinguish(q1, q2);
  const bool cse12 = !cse_separates(q1, q2, 12);
  const bool marked = marked_bag_separates(q1, q2, Policy::sc_max(), 1);
  return {wl && cse12 && marked, "wl_indistinguishable=" + std::to_string(wl) + " cse12_indistinguishable=" +
                                      std::to_string(cse12) + " marked_bag_separates=" + std::to_string(marked)};
}

Outcome c2_second_theorem() {
  const SuiteReport r = counterexample_suite();
  std::string failed;
  const bool ok = suite_theorem_pass(r, "thm42", failed);
  return {ok && r.thm42_k_copies_pass.count(2) && r.thm42_k_copies_pass.count(3),
          ok ? "k=1,2,3 constructions pass" : failed};
}

// ---- 3: centrality numerics ----------------------------------------------------

Outcome c3_centrality() {
  double worst = 0.0;
  int over = 0;
  double worst_rel = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Graph g = gen_erdos_renyi(20, 0.3, derive_seed(3, s));
    const auto a = sc_truncated(g, 30).scores;
    const auto b = sc_reference(g, 60).scores;
    const double d = max_abs_diff(a, b);
    worst = std::max(worst, d);
    if (d >= 1e-9) ++over;
    double top = 0.0;
    for (double x : b) top = std::max(top, x);
    worst_rel = std::max(worst_rel, d / top);
  }
  const double expected = (std::exp(2.0) + 2.0 * std::exp(-1.0)) / 3.0;
  double c3 = 0.0;
  for (double s : sc_truncated(cycle_graph(3), 30).scores) c3 = std::max(c3, std::abs(s - expected));
  return {over == 0 && c3 < 1e-9, "max|sc30-sc60|=" + fmt(worst) + " graphs>=1e-9: " + std::to_string(over) +
                                      "/100 (max relative " + fmt(worst_rel) + "); C3 error " + fmt(c3)};
}

// ---- 4: gradients --------------------------------------------------------------

Outcome c4_gradients() {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(derive_seed(4, s));
    const int n = 5 + static_cast<int>(rng.below(5));
    const Graph g = gen_erdos_renyi(n, 0.4, derive_seed(40, s));
    const int T = static_cast<int>(s % 3);
    const bool use_cse = s % 2 == 1;
    const int K = 6;
    nn::ModelConfig cfg;
    cfg.layers = 2 + static_cast<int>(s % 2);
    cfg.hidden = 4;
    cfg.epsilon_learnable = true;
    cfg.input_dim = nn::input_dim_for(0, use_cse ? nn::cse_columns_used(K, cfg) : 0, cfg);
    nn::ModelParams p = nn::ModelParams::init(cfg, derive_seed(41, s));
    for (auto& layer : p.layers) {
      layer.epsilon = rng.uniform(-0.3, 0.3);
      for (Eigen::Index i = 0; i < layer.first.bias.size(); ++i) layer.first.bias[i] = rng.uniform(-0.2, 0.2);
    }
    const auto enc = cse(g, K);
    const auto bag = build_bag(g, Policy::sc_max(), T);
    const auto batch = nn::pack(nn::prepare(bag, use_cse ? &enc : nullptr, cfg));
    const RowMatrix target = RowMatrix::Constant(1, 1, rng.uniform(-1.0, 1.0));
    worst = std::max(worst, nn::grad_check(batch, p, cfg, target, 1e-5).max_rel_error);
  }
  return {worst < 1e-4, "max relative error " + fmt(worst) + " over 20 configurations"};
}

// ---- 5, 6: untrained-model studies ----------------------------------------------

Outcome c5_correlation() {
  CorrelationConfig cfg;
  cfg.policies = {Policy::sc_max(), Policy::random(0), Policy::sc_min(), Policy::parse("betweenness_max"),
                  Policy::parse("degree_max")};
  cfg.kinds = {Substructure::triangle};
  const auto t = correlation_experiment(cfg);
  const double sc_max = t.at("sc_max", Substructure::triangle);
  const double random = t.at("random", Substructure::triangle);
  const double sc_min = t.at("sc_min", Substructure::triangle);
  const double betw = t.at("betweenness_max", Substructure::triangle);
  const double deg = t.at("degree_max", Substructure::triangle);
  const bool ok = sc_max >= random + 0.10 && sc_max >= sc_min + 0.15 && betw < deg;
  return {ok, "pearson sc_max=" + fmt(sc_max) + " random=" + fmt(random) + " sc_min=" + fmt(sc_min) +
                  " betweenness_max=" + fmt(betw) + " degree_max=" + fmt(deg)};
}

Outcome c6_perturbation() {
  CorrelationConfig gen;
  const auto graphs = correlation_graphs(gen);
  PerturbationConfig cfg;
  cfg.policies = {Policy::sc_max(), Policy::random(0), Policy::sc_min()};
  const auto r = perturbation_experiment(graphs, cfg);
  const double mx = r.summary[0].mean;
  const double rnd = r.summary[1].mean;
  const double mn = r.summary[2].mean;
  return {mx > rnd && rnd > mn && mx >= 2.0 * mn,
          "mean distance sc_max=" + fmt(mx) + " random=" + fmt(rnd) + " sc_min=" + fmt(mn) + " ratio=" + fmt(mx / mn)};
}

// ---- 7: counting -----------------------------------------------------------------

Outcome c7_counting() {
  bool ok = true;
  std::string detail;
  for (Substructure kind : {Substructure::triangle, Substructure::four_cycle}) {
    CountingDataConfig dc;
    dc.kind = kind;
    const DatasetSplit data = counting_dataset(dc);
    nn::ModelConfig cfg;
    cfg.pooling = nn::Pooling::mean;
    TrainConfig tc;
    std::vector<double> mae;
    for (const char* name : {"sc_max", "random", "sc_min"}) {
      const auto r = train_counting(data, Policy::parse(name, 0), 10, cfg, tc);
      mae.push_back(r.test_mae_at_best);
      std::cout << "  [7] " << to_string(kind) << " " << name << ": test MAE " << fmt(r.test_mae_at_best)
                << " (best epoch " << r.best_epoch << ")" << std::endl;
    }
    const bool k_ok = mae[0] < mae[1] && mae[1] < mae[2] && mae[0] <= mae[1] - 0.05;
    ok = ok && k_ok;
    detail += (detail.empty() ? "" : "; ") + to_string(kind) + " " + fmt(mae[0]) + " / " + fmt(mae[1]) + " / " +
              fmt(mae[2]) + (k_ok ? "" : " (ordering or margin violated)");
  }
  return {ok, "test MAE sc_max / random / sc_min: " + detail};
}

// ---- 8, 9, 10: exact identities ---------------------------------------------------

Outcome c8_substructures() {
  int mismatches = 0;
  long long total_tri = 0;
  long long total_c4 = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const int n = 4 + static_cast<int>(s % 27);
    const Graph g = gen_erdos_renyi(n, 0.15 + 0.05 * static_cast<double>(s % 6), derive_seed(8, s));
    const long long tri = count_substructure(g, Substructure::triangle);
    const long long c4 = count_substructure(g, Substructure::four_cycle);
    total_tri += tri;
    total_c4 += c4;
    if (tri != oracle::triangles_by_trace(g) || c4 != oracle::four_cycles_by_trace(g)) ++mismatches;
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches over 200 graphs (" + std::to_string(total_tri) +
                               " triangles, " + std::to_string(total_c4) + " 4-cycles)"};
}

Outcome c9_walks() {
  int mismatches = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const int n = 2 + static_cast<int>(s % 7);
    const Graph g = gen_erdos_renyi(n, 0.5, derive_seed(9, s));
    for (int L = 0; L <= 4; ++L) {
      const std::vector<double> lambda(L + 1, 1.0);
      for (int v = 0; v < n; ++v) {
        std::int64_t walks = 0;
        for (int l = 0; l <= L; ++l) walks += oracle::count_walks(g, v, l);
        if (walk_term(g, v, L, lambda) != static_cast<double>(walks)) ++mismatches;
      }
    }
  }
  const int L = 20;
  const std::vector<double> lambda(L + 1, 1.0);
  double sum = 0.0;
  double lowest = 1.0;
  int graphs = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Graph g = gen_erdos_renyi(20, 0.3, derive_seed(90, s));
    std::vector<double> w(20);
    for (int v = 0; v < 20; ++v) w[v] = walk_term(g, v, L, lambda);
    const double rho = spearman(w, sc_truncated(g).scores);
    sum += rho;
    lowest = std::min(lowest, rho);
    ++graphs;
  }
  const double mean = sum / graphs;
  return {mismatches == 0 && mean >= 0.8, std::to_string(mismatches) + " walk-count mismatches; Spearman(L=20 vs SC) mean " +
                                              fmt(mean) + ", min " + fmt(lowest) + " over 100 graphs"};
}

Outcome c10_regular_identity() {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const int d = 3 + static_cast<int>(s % 3);
    const int m = d == 3 ? 14 : 15 + 2 * static_cast<int>(s % 2);
    const Graph g = gen_random_regular(m % 2 && d % 2 ? m + 1 : m, d, derive_seed(10, s));
    const int K = 12;
    const auto rw = rwse(g, K);
    const auto c = cse(g, K);
    double fact = 1.0;
    for (int k = 0; k <= K; ++k) {
      if (k > 0) fact *= k;
      const double scale = fact / std::pow(static_cast<double>(d), k);
      for (int v = 0; v < g.num_nodes(); ++v) worst = std::max(worst, std::abs(rw.values(v, k) - c.values(v, k) * scale));
    }
  }
  return {worst <= 1e-12, "max entrywise difference " + fmt(worst) + " over 20 graphs, K=12"};
}

// ---- 11: CLI determinism -------------------------------------------------------------

#ifdef HYMN_CLI_PATH
std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome c11_determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("hymn_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string exe = HYMN_CLI_PATH;
  const std::string er = (dir / "er.jsonl").string();
  const std::string rg = (dir / "rg.jsonl").string();
  const std::string qt = (dir / "qt.jsonl").string();
  const std::string reg = (dir / "reg.jsonl").string();
  const std::vector<std::pair<std::string, std::string>> commands{
      {"generate-er", "generate --kind er --count 30 --nodes 16 --p 0.3 --seed 5 --target triangle --out " + er},
      {"generate-rg", "generate --kind rg-deleted --count 40 --nodes 16 --degree 4 --seed 6 --out " + rg},
      {"generate-qt", "generate --kind qt-pair --out " + qt},
      {"generate-regular", "generate --kind regular --count 10 --nodes 16 --degree 3 --seed 7 --out " + reg},
      {"centrality-sc", "centrality --input " + er + " --measure subgraph -K 30"},
      {"centrality-katz", "centrality --input " + er + " --measure katz"},
      {"centrality-betweenness", "centrality --input " + er + " --measure betweenness"},
      {"centrality-cse", "centrality --input " + er + " --measure cse -K 12"},
      {"centrality-rwse", "centrality --input " + reg + " --measure rwse -K 8"},
      {"sample-sc", "sample --input " + er + " --policy sc_max -T 3"},
      {"sample-random", "sample --input " + er + " --policy random -T 4 --seed 9"},
      {"train-count", "train-count --input " + rg + " --kind triangle -T 3 --layers 3 --hidden 8 --epochs 3 "
                      "--batch 8 --threads 3 --seed 2 --policy random"},
      {"perturb", "perturb --num-graphs 30 --nodes 16 --model-seeds 3 --threads 4 --seed 1"},
      {"correlate", "correlate --num-graphs 30 --nodes 16 --model-seeds 3 --threads 4 --seed 1"},
      {"separate-suite", "separate --suite"},
      {"separate-pair", "separate --input " + qt},
  };
  std::string failed;
  int compared = 0;
  for (const auto& [name, args] : commands) {
    const bool writes_file = args.find("--out ") != std::string::npos;
    std::string outputs[2];
    for (int run = 0; run < 2; ++run) {
      const fs::path captured = dir / (name + "." + std::to_string(run));
      const std::string cmd = exe + " " + args + (writes_file ? "" : " --out " + captured.string()) + " 2>/dev/null";
      if (std::system(cmd.c_str()) != 0) {
        failed += " " + name + "(exit)";
        break;
      }
      outputs[run] = writes_file ? slurp(args.substr(args.rfind(' ') + 1)) : slurp(captured);
    }
    if (outputs[0].empty() || outputs[0] != outputs[1]) failed += " " + name;
    ++compared;
  }
  fs::remove_all(dir);
  return {failed.empty(), failed.empty() ? std::to_string(compared) + " commands byte-identical across reruns"
                                         : "differing or failing:" + failed};
}
#endif

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;  // runtime budget, <= 0 for none
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria{
      {1, "first separation theorem (Qt pair)", 1.0, c1_first_theorem},
      {2, "second separation theorem (hexagon + global node, k copies)", 1.0, c2_second_theorem},
      {3, "subgraph centrality numerics", 5.0, c3_centrality},
      {4, "gradient correctness", 30.0, c4_gradients},
      {5, "perturbation / substructure correlation", 120.0, c5_correlation},
      {6, "perturbation distance ordering", 60.0, c6_perturbation},
      {7, "counting with top-SC marking", 0.0, c7_counting},
      {8, "substructure oracle equivalence", 10.0, c8_substructures},
      {9, "walk-term exactness and ranking", 10.0, c9_walks},
      {10, "RWSE/CSE regular-graph identity", 5.0, c10_regular_identity},
#ifdef HYMN_CLI_PATH
      {11, "CLI determinism", 60.0, c11_determinism},
#else
      {11, "CLI determinism", 60.0, [] { return Outcome{false, "built without the hymn CLI"}; }},
#endif
  };

  std::set<int> only;
  if (const char* env = std::getenv("HYMN_ACCEPTANCE_ONLY")) {
    std::stringstream in(env);
    std::string item;
    while (std::getline(in, item, ',')) only.insert(std::stoi(item));
  }

  // Known failures (documented in the README) can be listed so that ctest
  // tracks regressions: the exit status is then 0 only if exactly the listed
  // criteria fail. Every criterion still prints its own PASS/FAIL line.
  std::set<int> expected_fail;
  if (const char* env = std::getenv("HYMN_ACCEPTANCE_XFAIL")) {
    std::stringstream in(env);
    std::string item;
    while (std::getline(in, item, ',')) expected_fail.insert(std::stoi(item));
  }
  std::ofstream report;
  if (const char* path = std::getenv("HYMN_ACCEPTANCE_REPORT")) report.open(path);
  auto emit = [&](const std::string& line) {
    std::cout << line << std::endl;
    if (report) report << line << '\n' << std::flush;
  };

  int failures = 0;
  std::set<int> failed_ids, passed_ids;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_budget = c.budget_s <= 0.0 || secs < c.budget_s;
    const bool pass = o.pass && in_budget;
    if (!pass) ++failures;
    (pass ? passed_ids : failed_ids).insert(c.id);
    std::ostringstream line;
    line << (pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << o.detail << " (" << fmt(secs, 3)
         << " s" << (c.budget_s > 0.0 ? ", budget " + fmt(c.budget_s, 3) + " s" : "") << (in_budget ? "" : ", over budget")
         << ")";
    emit(line.str());
  }
  emit(failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion(s) failed");
  if (expected_fail.empty()) return failures == 0 ? 0 : 1;

  bool as_expected = true;
  for (int id : failed_ids)
    if (!expected_fail.count(id)) {
      emit("unexpected failure: [" + std::to_string(id) + "]");
      as_expected = false;
    }
  for (int id : passed_ids)
    if (expected_fail.count(id)) {
      emit("listed as a known failure but passed: [" + std::to_string(id) + "]");
      as_expected = false;
    }
  if (as_expected && failures > 0) emit("failures match the known-failure list");
  return as_expected ? 0 : 1;
}
