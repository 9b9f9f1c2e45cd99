#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "nodag/graphs.hpp"
#include "nodag/matrix_core.hpp"
#include "nodag/simulation.hpp"

namespace nodag {

using Json = nlohmann::json;

/// Fallback variable names x1..xp (used whenever no header was supplied).
std::vector<std::string> default_variable_names(int p);

/// Graph file schema:
///   {"p": int, "variables": [names],
///    "edges": [{"from": i, "to": j, "weight": real}
///              or {"from": i, "to": j, "undirected": true} with from < to]}
/// Node indices in files are 1-based; "weight" is optional.
Json graph_json(const Digraph& g, const std::vector<std::string>& names = {},
                const Matrix* weights = nullptr);
Json graph_json(const Cpdag& g, const std::vector<std::string>& names = {});

/// A parsed graph file, kept in parts so the caller decides whether it must
/// be fully directed.
struct GraphFile {
  int p = 0;
  std::vector<std::string> variables;
  std::set<Edge> directed;
  std::set<NodePair> undirected;
  std::map<Edge, double> weights;  // directed edges that carried a weight

  Digraph as_digraph() const;  // rejects files with undirected edges
  Cpdag as_cpdag() const;
};
GraphFile graph_from_json(const Json& j);

/// SemSpec file: the graph schema (edge weights are the coefficients) plus
/// "omega", "noise" and "seed"; the topological order is recomputed on load.
Json sem_json(const SemSpec& sem, const std::vector<std::string>& names = {});
SemSpec sem_from_json(const Json& j);

Json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace nodag
