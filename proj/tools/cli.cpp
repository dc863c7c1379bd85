#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "hymn/analysis.hpp"
#include "hymn/centrality.hpp"
#include "hymn/error.hpp"
#include "hymn/expressiveness.hpp"
#include "hymn/generators.hpp"
#include "hymn/io.hpp"
#include "hymn/rng.hpp"
#include "hymn/sampling.hpp"
#include "hymn/training.hpp"

namespace hymn::cli {

namespace {

using ojson = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

struct Common {
  std::string input;
  std::string out = "-";
  std::uint64_t seed = 0;
  int threads = 1;
  std::string config;
};

void add_common(CLI::App* sub, Common& c, bool input_required) {
  auto* in = sub->add_option("--input", c.input, "Input graphs (JSONL)");
  if (input_required) in->required();
  sub->add_option("--out", c.out, "Output path, '-' for stdout")->capture_default_str();
  sub->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker threads (results do not depend on it)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sub->add_option("--config", c.config, "JSON file of flag values; explicit flags win");
}

ojson common_json(const std::string& command, const Common& c) {
  ojson j;
  j["command"] = command;
  j["version"] = kVersion;
  j["input"] = c.input.empty() ? ojson(nullptr) : ojson(c.input);
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["config"] = c.config.empty() ? ojson(nullptr) : ojson(c.config);
  return j;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path == "-") {
    out << content;
    out.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write '" + path + "'");
  f << content;
  if (!f) throw Error("write failed for '" + path + "'");
}

std::string jsonl_header(const ojson& run_config) { return ojson{{"run_config", run_config}}.dump() + "\n"; }
std::string csv_header(const ojson& run_config) { return "# run_config=" + run_config.dump() + "\n"; }

std::vector<Policy> parse_policies(const std::string& list, std::uint64_t seed) {
  std::vector<Policy> out;
  for (const auto& name : split_list(list)) out.push_back(Policy::parse(name, seed));
  if (out.empty()) throw Error("no policies given");
  return out;
}

// ---- centrality --------------------------------------------------------------

struct CentralityArgs {
  Common common;
  std::string measure = "subgraph";
  int K = kDefaultScOrder;
  double alpha = 0.0;
  int katz_terms = 1000;
};

int cmd_centrality(const CentralityArgs& a, std::ostream& out) {
  const auto graphs = load_jsonl(a.common.input);
  ojson rc = common_json("centrality", a.common);
  rc["measure"] = a.measure;
  rc["K"] = a.K;
  rc["alpha"] = a.alpha;
  rc["katz_terms"] = a.katz_terms;
  std::string text = jsonl_header(rc);
  const bool encoding = a.measure == "cse" || a.measure == "rwse" || a.measure == "closed_walk_prob";
  for (const auto& g : graphs) {
    if (encoding) {
      const CseMatrix m = a.measure == "cse" ? cse(g, a.K) : a.measure == "rwse" ? rwse(g, a.K) : closed_walk_prob(g, a.K);
      text += encoding_to_json_line(g.id(), m) + "\n";
      continue;
    }
    const Measure m = parse_measure(a.measure);
    CentralityReport r;
    switch (m) {
      case Measure::subgraph: r = sc_truncated(g, a.K); break;
      case Measure::katz: r = a.alpha > 0.0 ? katz(g, a.alpha, a.katz_terms) : katz_default(g, a.katz_terms); break;
      default: r = classical_centrality(g, m); break;
    }
    text += centrality_to_json_line(g.id(), r) + "\n";
  }
  emit(a.common.out, text, out);
  return kOk;
}

// ---- sample ------------------------------------------------------------------

struct SampleArgs {
  Common common;
  std::string policy = "sc_max";
  int T = 1;
  bool no_original = false;
};

int cmd_sample(const SampleArgs& a, std::ostream& out) {
  const auto graphs = load_jsonl(a.common.input);
  const Policy policy = Policy::parse(a.policy, a.common.seed);
  ojson rc = common_json("sample", a.common);
  rc["policy"] = a.policy;
  rc["T"] = a.T;
  rc["include_original"] = !a.no_original;
  std::string text = jsonl_header(rc);
  for (const auto& bag : build_bags(graphs, policy, a.T, !a.no_original)) text += bag_to_json_line(bag, policy) + "\n";
  emit(a.common.out, text, out);
  return kOk;
}

// ---- train-count -------------------------------------------------------------

struct TrainArgs {
  Common common;
  std::string kind = "triangle";
  std::string policy = "sc_max";
  int T = 10;
  int num_graphs = 1000;
  int nodes = 60;
  int degree = 5;
  std::vector<std::size_t> split;  // train,val,test; default 80/10/10
  bool file_targets = false;
  int layers = 6;
  int hidden = 32;
  int readout_layers = 2;
  std::string mark_mode = "per_layer_concat";
  std::string pooling = "mean";
  bool epsilon_learnable = false;
  bool no_cse = false;
  int cse_order = kDefaultScOrder;
  bool cse_drop_first_two = false;
  int epochs = 50;
  int batch = 128;
  double lr = 1e-3;
  std::string loss = "mae";
  bool no_calibrate = false;
  std::string checkpoint;
};

std::array<std::size_t, 3> resolve_split(const std::vector<std::size_t>& split, std::size_t total) {
  if (split.empty()) {
    const std::size_t val = total / 10;
    return {total - 2 * val, val, val};
  }
  if (split.size() != 3) throw Error("--split takes train,val,test sizes");
  if (split[0] + split[1] + split[2] != total) throw Error("--split sizes must add up to the number of graphs");
  return {split[0], split[1], split[2]};
}

int cmd_train_count(const TrainArgs& a, std::ostream& out) {
  const Substructure kind = parse_substructure(a.kind);
  DatasetSplit data;
  std::array<std::size_t, 3> sizes{};
  if (!a.common.input.empty()) {
    auto graphs = load_jsonl(a.common.input);
    if (!a.file_targets) graphs = with_count_targets(std::move(graphs), kind);
    sizes = resolve_split(a.split, graphs.size());
    data = split_dataset(std::move(graphs), sizes[0], sizes[1], sizes[2], a.common.seed);
  } else {
    sizes = resolve_split(a.split, static_cast<std::size_t>(std::max(a.num_graphs, 0)));
    CountingDataConfig dc;
    dc.num_graphs = a.num_graphs;
    dc.nodes = a.nodes;
    dc.degree = a.degree;
    dc.kind = kind;
    dc.n_train = sizes[0];
    dc.n_val = sizes[1];
    dc.n_test = sizes[2];
    dc.seed = a.common.seed;
    data = counting_dataset(dc);
  }

  nn::ModelConfig cfg;
  cfg.layers = a.layers;
  cfg.hidden = a.hidden;
  cfg.readout_layers = a.readout_layers;
  cfg.mark_mode = nn::parse_mark_mode(a.mark_mode);
  cfg.pooling = nn::parse_pooling(a.pooling);
  cfg.epsilon_learnable = a.epsilon_learnable;
  cfg.cse_drop_first_two = a.cse_drop_first_two;
  TrainConfig tc;
  tc.epochs = a.epochs;
  tc.batch_size = a.batch;
  tc.adam.lr = a.lr;
  tc.loss = parse_loss(a.loss);
  tc.seed = a.common.seed;
  tc.threads = a.common.threads;
  tc.calibrate = !a.no_calibrate;
  EncodingOptions enc{!a.no_cse, a.cse_order};

  ojson rc = common_json("train-count", a.common);
  rc["kind"] = to_string(kind);
  rc["policy"] = a.policy;
  rc["T"] = a.T;
  rc["dataset"] = {{"source", a.common.input.empty() ? "generated" : "file"},
                   {"num_graphs", a.common.input.empty() ? a.num_graphs : static_cast<int>(sizes[0] + sizes[1] + sizes[2])},
                   {"nodes", a.nodes},
                   {"degree", a.degree},
                   {"split", sizes},
                   {"file_targets", a.file_targets}};
  rc["model"] = {{"layers", a.layers},        {"hidden", a.hidden},   {"readout_layers", a.readout_layers},
                 {"mark_mode", a.mark_mode},  {"pooling", a.pooling}, {"epsilon_learnable", a.epsilon_learnable}};
  rc["cse"] = {{"enabled", enc.enabled}, {"order", enc.order}, {"drop_first_two", a.cse_drop_first_two}};
  rc["training"] = {{"epochs", a.epochs}, {"batch", a.batch},     {"lr", a.lr},
                    {"loss", a.loss},     {"calibrate", tc.calibrate}};
  rc["checkpoint"] = a.checkpoint.empty() ? ojson(nullptr) : ojson(a.checkpoint);

  const TrainReport report = train_counting(data, Policy::parse(a.policy, a.common.seed), a.T, cfg, tc, enc);
  ojson j;
  j["run_config"] = rc;
  const ojson body = ojson::parse(report.to_json());
  for (const auto& [k, v] : body.items()) j[k] = v;
  emit(a.common.out, j.dump(2) + "\n", out);
  if (!a.checkpoint.empty()) emit(a.checkpoint, nn::checkpoint_json(report.model, report.best_params) + "\n", out);
  return kOk;
}

// ---- perturb / correlate -----------------------------------------------------

struct ErArgs {
  int num_graphs = 100;
  int nodes = 20;
  double p = 0.3;
};

void add_er(CLI::App* sub, ErArgs& e) {
  sub->add_option("--num-graphs", e.num_graphs, "ER graphs to generate when --input is absent")->capture_default_str();
  sub->add_option("--nodes", e.nodes, "ER node count")->capture_default_str();
  sub->add_option("--p", e.p, "ER wiring probability")->capture_default_str();
}

std::vector<Graph> study_graphs(const Common& c, const ErArgs& e) {
  if (!c.input.empty()) return load_jsonl(c.input);
  CorrelationConfig cc;
  cc.seed = c.seed;
  cc.num_graphs = e.num_graphs;
  cc.n = e.nodes;
  cc.p = e.p;
  return correlation_graphs(cc);
}

struct PerturbArgs {
  Common common;
  ErArgs er;
  std::string policies = "sc_max,random,sc_min";
  int model_seeds = 5;
  int layers = 3;
  int hidden = 32;
  std::string records;
};

int cmd_perturb(const PerturbArgs& a, std::ostream& out) {
  const auto graphs = study_graphs(a.common, a.er);
  PerturbationConfig pc;
  pc.seed = a.common.seed;
  pc.policies = parse_policies(a.policies, a.common.seed);
  pc.model_seeds = a.model_seeds;
  pc.layers = a.layers;
  pc.hidden = a.hidden;
  pc.threads = a.common.threads;
  const auto result = perturbation_experiment(graphs, pc);

  ojson rc = common_json("perturb", a.common);
  rc["graphs"] = a.common.input.empty() ? ojson{{"num_graphs", a.er.num_graphs}, {"nodes", a.er.nodes}, {"p", a.er.p}}
                                        : ojson{{"num_graphs", graphs.size()}};
  rc["policies"] = split_list(a.policies);
  rc["model_seeds"] = a.model_seeds;
  rc["layers"] = a.layers;
  rc["hidden"] = a.hidden;
  rc["records"] = a.records.empty() ? ojson(nullptr) : ojson(a.records);

  std::ostringstream table;
  table.precision(17);
  table << csv_header(rc) << "policy,mean,stddev,count\n";
  for (const auto& s : result.summary) table << s.policy << ',' << s.mean << ',' << s.stddev << ',' << s.count << '\n';
  emit(a.common.out, table.str(), out);
  if (!a.records.empty()) emit(a.records, csv_header(rc) + perturb_records_csv(result.records), out);
  return kOk;
}

struct CorrelateArgs {
  Common common;
  ErArgs er;
  std::string policies = "sc_max,random,sc_min,betweenness_max,degree_max";
  std::string kinds = "triangle,four_cycle,tailed_triangle,star3";
  int model_seeds = 5;
  int layers = 3;
  int hidden = 32;
};

int cmd_correlate(const CorrelateArgs& a, std::ostream& out) {
  CorrelationConfig cc;
  cc.seed = a.common.seed;
  cc.num_graphs = a.er.num_graphs;
  cc.n = a.er.nodes;
  cc.p = a.er.p;
  cc.policies = parse_policies(a.policies, a.common.seed);
  for (const auto& k : split_list(a.kinds)) cc.kinds.push_back(parse_substructure(k));
  cc.model_seeds = a.model_seeds;
  cc.layers = a.layers;
  cc.hidden = a.hidden;
  cc.threads = a.common.threads;
  const auto graphs = study_graphs(a.common, a.er);
  const auto table = correlation_experiment(graphs, cc);

  ojson rc = common_json("correlate", a.common);
  rc["graphs"] = a.common.input.empty() ? ojson{{"num_graphs", a.er.num_graphs}, {"nodes", a.er.nodes}, {"p", a.er.p}}
                                        : ojson{{"num_graphs", graphs.size()}};
  rc["policies"] = split_list(a.policies);
  rc["kinds"] = split_list(a.kinds);
  rc["model_seeds"] = a.model_seeds;
  rc["layers"] = a.layers;
  rc["hidden"] = a.hidden;
  emit(a.common.out, csv_header(rc) + table.to_csv(), out);
  return kOk;
}

// ---- separate ----------------------------------------------------------------

struct SeparateArgs {
  Common common;
  bool suite = false;
  int K = 12;
  std::string policy = "sc_max";
  int T = 1;
};

int cmd_separate(const SeparateArgs& a, std::ostream& out, std::ostream& err) {
  ojson rc = common_json("separate", a.common);
  ojson j;
  if (a.suite || a.common.input.empty()) {
    rc["mode"] = "suite";
    const auto report = counterexample_suite();
    j["run_config"] = rc;
    const ojson body = ojson::parse(report.to_json());
  for (const auto& [k, v] : body.items()) j[k] = v;
    emit(a.common.out, j.dump(2) + "\n", out);
    if (!report.all_pass()) {
      for (const auto& f : report.failures()) err << "suite assertion failed: " << f.theorem << ": " << f.name << "\n";
      return kSuiteFailure;
    }
    return kOk;
  }
  const auto graphs = load_jsonl(a.common.input);
  if (graphs.size() != 2) throw Error("separate: --input must hold exactly two graphs, found " + std::to_string(graphs.size()));
  const Policy policy = Policy::parse(a.policy, a.common.seed);
  rc["mode"] = "pair";
  rc["K"] = a.K;
  rc["policy"] = a.policy;
  rc["T"] = a.T;
  j["run_config"] = rc;
  j["graphs"] = {graphs[0].id(), graphs[1].id()};
  j["wl_distinguish"] = wl_distinguish(graphs[0], graphs[1]);
  j["cse_separates"] = cse_separates(graphs[0], graphs[1], a.K);
  j["marked_bag_separates"] = marked_bag_separates(graphs[0], graphs[1], policy, a.T);
  emit(a.common.out, j.dump(2) + "\n", out);
  return kOk;
}

// ---- generate ----------------------------------------------------------------

struct GenerateArgs {
  Common common;
  std::string kind = "er";
  int count = 1;
  int nodes = 20;
  double p = 0.3;
  int degree = 5;
  std::string target;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  std::vector<Graph> graphs;
  auto seed_of = [&](int i) { return derive_seed(a.common.seed, static_cast<std::uint64_t>(i)); };
  if (a.kind == "hex-global" || a.kind == "qt-pair") {
    const auto pair = a.kind == "hex-global" ? counterexample_hex_global() : counterexample_qt_pair();
    graphs = {pair.first, pair.second};
  } else {
    for (int i = 0; i < a.count; ++i) {
      const std::string id = a.kind + std::to_string(i);
      if (a.kind == "er") graphs.push_back(gen_erdos_renyi(a.nodes, a.p, seed_of(i)).with_id(id));
      else if (a.kind == "regular") graphs.push_back(gen_random_regular(a.nodes, a.degree, seed_of(i)).with_id(id));
      else if (a.kind == "rg-deleted") graphs.push_back(gen_rg_deleted(a.nodes, a.degree, seed_of(i)).with_id(id));
      else if (a.kind == "cycle") graphs.push_back(cycle_graph(a.nodes));
      else if (a.kind == "complete") graphs.push_back(complete_graph(a.nodes));
      else if (a.kind == "path") graphs.push_back(path_graph(a.nodes));
      else if (a.kind == "star") graphs.push_back(star_graph(a.nodes - 1));
      else throw Error("unknown graph kind '" + a.kind + "'");
    }
  }
  if (!a.target.empty()) graphs = with_count_targets(std::move(graphs), parse_substructure(a.target));
  ojson rc = common_json("generate", a.common);
  rc["kind"] = a.kind;
  rc["count"] = a.count;
  rc["nodes"] = a.nodes;
  rc["p"] = a.p;
  rc["degree"] = a.degree;
  rc["target"] = a.target.empty() ? ojson(nullptr) : ojson(a.target);
  std::string text = jsonl_header(rc);
  for (const auto& g : graphs) text += graph_to_json_line(g) + "\n";
  emit(a.common.out, text, out);
  return kOk;
}

// ---- --config ----------------------------------------------------------------

// Flag values from a JSON object, inserted right after the subcommand name so
// that flags given explicitly later on the command line take precedence.
std::vector<std::string> config_args(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 2; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return {};
  std::ifstream in(path);
  if (!in) throw Error("file not found: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error("config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw Error("config " + path + ": expected a JSON object");
  std::vector<std::string> out;
  for (const auto& [key, value] : j.items()) {
    if (key == "config") continue;
    const std::string flag = "--" + key;
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back(flag);
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) joined += (joined.empty() ? "" : ",") + (v.is_string() ? v.get<std::string>() : v.dump());
      out.insert(out.end(), {flag, joined});
    } else if (value.is_string()) {
      out.insert(out.end(), {flag, value.get<std::string>()});
    } else if (value.is_number()) {
      out.insert(out.end(), {flag, value.dump()});
    } else {
      throw Error("config " + path + ": unsupported value for '" + key + "'");
    }
  }
  return out;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Centrality-guided subgraph sampling toolkit", "hymn"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  CentralityArgs centrality;
  auto* c = app.add_subcommand("centrality", "Centrality scores or structural encodings per graph (JSONL)");
  add_common(c, centrality.common, true);
  c->add_option("--measure", centrality.measure,
                "subgraph|katz|degree|closeness|betweenness, or encoding cse|rwse|closed_walk_prob")
      ->capture_default_str();
  c->add_option("-K,--K", centrality.K, "Truncation order / encoding length")->capture_default_str();
  c->add_option("--alpha", centrality.alpha, "Katz attenuation; 0 picks 0.9/lambda_1")->capture_default_str();
  c->add_option("--katz-terms", centrality.katz_terms, "Katz series term cap")->capture_default_str();

  SampleArgs sample;
  auto* s = app.add_subcommand("sample", "Select and mark T nodes per graph (JSONL)");
  add_common(s, sample.common, true);
  s->add_option("--policy", sample.policy, "sc_max, sc_min, random, <measure>_max|min")->capture_default_str();
  s->add_option("-T,--t", sample.T, "Marked copies per graph")->capture_default_str();
  s->add_flag("--no-original", sample.no_original, "Drop the unmarked copy from the bag");

  TrainArgs train;
  auto* t = app.add_subcommand("train-count", "Train the marking-aware GIN to count a substructure (JSON)");
  add_common(t, train.common, false);
  t->add_option("--kind", train.kind, "triangle|four_cycle|tailed_triangle|star3|path3|path4")->capture_default_str();
  t->add_option("--policy", train.policy, "Node selection policy")->capture_default_str();
  t->add_option("-T,--t", train.T, "Marked copies per graph")->capture_default_str();
  t->add_option("--num-graphs", train.num_graphs, "Generated dataset size")->capture_default_str();
  t->add_option("--nodes", train.nodes, "Nodes per generated graph (that many edges are deleted)")->capture_default_str();
  t->add_option("--degree", train.degree, "Degree of the regular graph before deletion")->capture_default_str();
  t->add_option("--split", train.split, "train,val,test sizes (default 80/10/10)")->delimiter(',');
  t->add_flag("--file-targets", train.file_targets, "Use targets from --input instead of recounting");
  t->add_option("--layers", train.layers)->capture_default_str();
  t->add_option("--hidden", train.hidden)->capture_default_str();
  t->add_option("--readout-layers", train.readout_layers)->capture_default_str();
  t->add_option("--mark-mode", train.mark_mode, "per_layer_concat|input_only")->capture_default_str();
  t->add_option("--pooling", train.pooling, "sum|mean over copies")->capture_default_str();
  t->add_flag("--epsilon-learnable", train.epsilon_learnable);
  t->add_flag("--no-cse", train.no_cse, "Do not append CSE columns");
  t->add_option("--cse-order", train.cse_order)->capture_default_str();
  t->add_flag("--cse-drop-first-two", train.cse_drop_first_two);
  t->add_option("--epochs", train.epochs)->capture_default_str();
  t->add_option("--batch", train.batch)->capture_default_str();
  t->add_option("--lr", train.lr)->capture_default_str();
  t->add_option("--loss", train.loss, "mae|mse")->capture_default_str();
  t->add_flag("--no-calibrate", train.no_calibrate, "Skip the data-dependent initial standardization");
  t->add_option("--checkpoint", train.checkpoint, "Write the best-validation parameters (JSON)");

  PerturbArgs perturb;
  auto* p = app.add_subcommand("perturb", "Perturbation distance of a single mark per policy (CSV)");
  add_common(p, perturb.common, false);
  add_er(p, perturb.er);
  p->add_option("--policies", perturb.policies)->capture_default_str();
  p->add_option("--model-seeds", perturb.model_seeds)->capture_default_str();
  p->add_option("--layers", perturb.layers)->capture_default_str();
  p->add_option("--hidden", perturb.hidden)->capture_default_str();
  p->add_option("--records", perturb.records, "Also write per-graph distance records (CSV)");

  CorrelateArgs correlate;
  auto* r = app.add_subcommand("correlate", "Pearson correlation of distances and substructure counts (CSV)");
  add_common(r, correlate.common, false);
  add_er(r, correlate.er);
  r->add_option("--policies", correlate.policies)->capture_default_str();
  r->add_option("--kinds", correlate.kinds)->capture_default_str();
  r->add_option("--model-seeds", correlate.model_seeds)->capture_default_str();
  r->add_option("--layers", correlate.layers)->capture_default_str();
  r->add_option("--hidden", correlate.hidden)->capture_default_str();

  SeparateArgs separate;
  auto* x = app.add_subcommand("separate", "Counterexample suite, or separation tests on a graph pair (JSON)");
  add_common(x, separate.common, false);
  x->add_flag("--suite", separate.suite, "Run the shipped counterexample suite (default without --input)");
  x->add_option("-K,--K", separate.K, "CSE order for the encoding test")->capture_default_str();
  x->add_option("--policy", separate.policy)->capture_default_str();
  x->add_option("-T,--t", separate.T)->capture_default_str();

  GenerateArgs generate;
  auto* g = app.add_subcommand("generate", "Write seeded graphs as JSONL");
  add_common(g, generate.common, false);
  g->add_option("--kind", generate.kind, "er|regular|rg-deleted|cycle|complete|path|star|hex-global|qt-pair")
      ->capture_default_str();
  g->add_option("--count", generate.count)->capture_default_str();
  g->add_option("--nodes", generate.nodes)->capture_default_str();
  g->add_option("--p", generate.p)->capture_default_str();
  g->add_option("--degree", generate.degree)->capture_default_str();
  g->add_option("--target", generate.target, "Attach this substructure count as the target");

  try {
    if (args.size() >= 2) {
      const auto extra = config_args(args);
      args.insert(args.begin() + 2, extra.begin(), extra.end());
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (c->parsed()) return cmd_centrality(centrality, out);
    if (s->parsed()) return cmd_sample(sample, out);
    if (t->parsed()) return cmd_train_count(train, out);
    if (p->parsed()) return cmd_perturb(perturb, out);
    if (r->parsed()) return cmd_correlate(correlate, out);
    if (x->parsed()) return cmd_separate(separate, out, err);
    if (g->parsed()) return cmd_generate(generate, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsage;
}

}  // namespace hymn::cli
