#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hymn/graph.hpp"

namespace hymn {

/// Decodes one JSONL graph record:
///   {"id": str, "num_nodes": int, "edges": [[u, v], ...],
///    "node_feat": [[float, ...], ...] (optional), "target": [float, ...] (optional)}
/// `line_no` is only used in error messages.
Graph parse_graph_record(std::string_view line, std::size_t line_no = 1);

/// Reads every non-blank line of a JSONL file. Errors carry the line number.
/// A leading {"run_config": ...} record, as written by the tool, is skipped.
std::vector<Graph> load_jsonl(const std::filesystem::path& path);
std::vector<Graph> read_jsonl(std::istream& in, const std::string& source = "<stream>");

/// Encodes a graph as one JSON line with edges u < v in lexicographic order.
std::string graph_to_json_line(const Graph& g);
void write_jsonl(const std::filesystem::path& path, const std::vector<Graph>& graphs);

}  // namespace hymn
