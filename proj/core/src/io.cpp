#include "hymn/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hymn/error.hpp"

namespace hymn {

namespace {

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw Error("line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

Graph parse_graph_record(std::string_view line, std::size_t line_no) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    fail(line_no, std::string("parse error: ") + e.what());
  }
  if (!j.is_object()) fail(line_no, "record is not a JSON object");
  try {
    const std::string id = j.value("id", "line" + std::to_string(line_no));
    if (!j.contains("num_nodes") || !j["num_nodes"].is_number_integer()) fail(line_no, "missing integer num_nodes");
    const auto n = j["num_nodes"].get<long long>();
    if (n < 0) fail(line_no, "negative num_nodes");
    if (n == 0) fail(line_no, "num_nodes must be at least 1");

    std::vector<Edge> edges;
    if (j.contains("edges")) {
      for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
          fail(line_no, "edge must be a pair of integers");
        }
        const auto u = e[0].get<long long>();
        const auto v = e[1].get<long long>();
        if (u < 0 || v < 0 || u >= n || v >= n) {
          fail(line_no, "endpoint out of range in edge [" + std::to_string(u) + "," + std::to_string(v) + "]");
        }
        if (u == v) fail(line_no, "self-loop at node " + std::to_string(u));
        edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
      }
    }

    RowMatrix feat;
    if (j.contains("node_feat") && !j["node_feat"].is_null()) {
      const auto& rows = j["node_feat"];
      if (!rows.is_array() || static_cast<long long>(rows.size()) != n) fail(line_no, "node_feat must have num_nodes rows");
      const std::size_t d = rows.empty() ? 0 : rows[0].size();
      feat.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (!rows[r].is_array() || rows[r].size() != d) fail(line_no, "node_feat rows must have equal length");
        for (std::size_t c = 0; c < d; ++c) feat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c].get<double>();
      }
    }

    std::optional<std::vector<double>> target;
    if (j.contains("target") && !j["target"].is_null()) {
      if (j["target"].is_number()) {
        target = std::vector<double>{j["target"].get<double>()};
      } else {
        target = j["target"].get<std::vector<double>>();
      }
    }
    return Graph(id, static_cast<int>(n), std::move(edges), std::move(feat), std::move(target));
  } catch (const nlohmann::json::exception& e) {
    fail(line_no, std::string("invalid record: ") + e.what());
  } catch (const Error& e) {
    const std::string what = e.what();
    if (what.rfind("line ", 0) == 0) throw;
    fail(line_no, what);
  }
}

std::vector<Graph> read_jsonl(std::istream& in, const std::string& source) {
  std::vector<Graph> graphs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    // Tool outputs start with a provenance record; it carries no graph.
    if (line_no == 1 && line.rfind("{\"run_config\"", 0) == 0) continue;
    try {
      graphs.push_back(parse_graph_record(line, line_no));
    } catch (const Error& e) {
      throw Error(source + ": " + e.what());
    }
  }
  return graphs;
}

std::vector<Graph> load_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("file not found: " + path.string());
  return read_jsonl(in, path.string());
}

std::string graph_to_json_line(const Graph& g) {
  nlohmann::ordered_json j;
  j["id"] = g.id();
  j["num_nodes"] = g.num_nodes();
  auto edges = nlohmann::ordered_json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
  j["edges"] = edges;
  if (g.feat_dim() > 0) {
    auto rows = nlohmann::ordered_json::array();
    for (int v = 0; v < g.num_nodes(); ++v) {
      std::vector<double> row(g.node_feat().row(v).begin(), g.node_feat().row(v).end());
      rows.push_back(row);
    }
    j["node_feat"] = rows;
  }
  if (g.target()) j["target"] = *g.target();
  return j.dump();
}

void write_jsonl(const std::filesystem::path& path, const std::vector<Graph>& graphs) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open output file: " + path.string());
  for (const auto& g : graphs) out << graph_to_json_line(g) << '\n';
}

}  // namespace hymn
