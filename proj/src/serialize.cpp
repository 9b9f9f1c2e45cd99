#include "nodag/serialize.hpp"

#include <fstream>
#include <sstream>

namespace nodag {

namespace {

int node_index(const Json& edge, const char* key, int p) {
  if (!edge.contains(key) || !edge[key].is_number_integer()) {
    throw ParseError(std::string("edge needs an integer \"") + key + "\"");
  }
  const int v = edge[key].get<int>();
  if (v < 1 || v > p) {
    throw ParseError("edge endpoint " + std::to_string(v) + " outside 1.." +
                     std::to_string(p));
  }
  return v - 1;  // files are 1-based, memory is 0-based
}

std::vector<std::string> names_or_default(const Json& j, int p) {
  if (!j.contains("variables")) return default_variable_names(p);
  const Json& v = j["variables"];
  if (!v.is_array() || static_cast<int>(v.size()) != p) {
    throw ParseError("\"variables\" must list exactly p names");
  }
  std::vector<std::string> names;
  for (const Json& item : v) {
    if (!item.is_string()) throw ParseError("\"variables\" entries must be strings");
    names.push_back(item.get<std::string>());
  }
  return names;
}

Json graph_header(int p, const std::vector<std::string>& names) {
  Json j;
  j["p"] = p;
  j["variables"] = names.empty() ? default_variable_names(p) : names;
  if (static_cast<int>(j["variables"].size()) != p) {
    throw DimensionError("variable names must match the node count");
  }
  return j;
}

}  // namespace

std::vector<std::string> default_variable_names(int p) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(p));
  for (int i = 1; i <= p; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

Json graph_json(const Digraph& g, const std::vector<std::string>& names,
                const Matrix* weights) {
  const int p = g.node_count();
  if (weights && (weights->rows() != p || weights->cols() != p)) {
    throw DimensionError("weight matrix must match the node count");
  }
  Json j = graph_header(p, names);
  j["edges"] = Json::array();
  for (const auto& [from, to] : g.edges()) {
    Json e;
    e["from"] = from + 1;
    e["to"] = to + 1;
    if (weights) e["weight"] = (*weights)(from, to);
    j["edges"].push_back(std::move(e));
  }
  return j;
}

Json graph_json(const Cpdag& g, const std::vector<std::string>& names) {
  Json j = graph_header(g.node_count(), names);
  j["edges"] = Json::array();
  for (const auto& [from, to] : g.directed()) {
    j["edges"].push_back({{"from", from + 1}, {"to", to + 1}});
  }
  for (const auto& [a, b] : g.undirected()) {
    j["edges"].push_back({{"from", a + 1}, {"to", b + 1}, {"undirected", true}});
  }
  return j;
}

GraphFile graph_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("p") || !j["p"].is_number_integer()) {
    throw ParseError("graph json needs an integer \"p\"");
  }
  GraphFile gf;
  gf.p = j["p"].get<int>();
  if (gf.p < 1) throw ParseError("\"p\" must be positive");
  gf.variables = names_or_default(j, gf.p);

  if (!j.contains("edges") || !j["edges"].is_array()) {
    throw ParseError("graph json needs an \"edges\" array");
  }
  for (const Json& e : j["edges"]) {
    const int from = node_index(e, "from", gf.p);
    const int to = node_index(e, "to", gf.p);
    if (from == to) throw ParseError("self-loop on node " + std::to_string(from + 1));
    if (e.contains("undirected") && e["undirected"].is_boolean() &&
        e["undirected"].get<bool>()) {
      if (from > to) throw ParseError("undirected edges must have from < to");
      gf.undirected.insert({from, to});
    } else {
      gf.directed.insert({from, to});
      if (e.contains("weight")) {
        if (!e["weight"].is_number()) throw ParseError("edge \"weight\" must be a number");
        gf.weights[{from, to}] = e["weight"].get<double>();
      }
    }
  }
  for (const auto& pair : gf.undirected) {
    if (gf.directed.count(pair) || gf.directed.count({pair.second, pair.first})) {
      throw ParseError("edge listed both directed and undirected");
    }
  }
  return gf;
}

Digraph GraphFile::as_digraph() const {
  if (!undirected.empty()) {
    throw ParseError("graph has undirected edges where a directed graph is required");
  }
  Digraph g(p);
  for (const auto& [i, j] : directed) g.add_edge(i, j);
  return g;
}

Cpdag GraphFile::as_cpdag() const {
  Cpdag g(p);
  for (const auto& [i, j] : directed) g.add_directed(i, j);
  for (const auto& [i, j] : undirected) g.add_undirected(i, j);
  return g;
}

Json sem_json(const SemSpec& sem, const std::vector<std::string>& names) {
  Json j = graph_json(sem.dag.graph(), names, &sem.lambda_mat);
  j["omega"] = sem.omega;
  j["noise"] = to_string(sem.noise_family);
  j["seed"] = sem.seed.seed;
  return j;
}

SemSpec sem_from_json(const Json& j) {
  const GraphFile gf = graph_from_json(j);
  if (!gf.undirected.empty()) {
    throw ParseError("sem json cannot contain undirected edges");
  }
  Matrix lam = Matrix::Zero(gf.p, gf.p);
  for (const auto& e : gf.directed) {
    const auto w = gf.weights.find(e);
    if (w == gf.weights.end()) {
      throw ParseError("sem edge " + std::to_string(e.first + 1) + "->" +
                       std::to_string(e.second + 1) + " needs a weight");
    }
    lam(e.first, e.second) = w->second;
  }

  std::vector<double> omega(static_cast<std::size_t>(gf.p), 1.0);
  if (j.contains("omega")) {
    if (!j["omega"].is_array() || static_cast<int>(j["omega"].size()) != gf.p) {
      throw ParseError("\"omega\" must list one variance per node");
    }
    for (int i = 0; i < gf.p; ++i) {
      if (!j["omega"][i].is_number()) throw ParseError("\"omega\" entries must be numbers");
      omega[static_cast<std::size_t>(i)] = j["omega"][i].get<double>();
    }
  }

  NoiseFamily noise = NoiseFamily::gaussian;
  if (j.contains("noise")) {
    if (!j["noise"].is_string()) throw ParseError("\"noise\" must be a string");
    noise = noise_family_from_string(j["noise"].get<std::string>());
  }

  RngSeed seed;
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
      throw ParseError("\"seed\" must be an integer");
    }
    seed.seed = j["seed"].get<std::uint64_t>();
  }

  Dag dag = [&] {
    Digraph g(gf.p);
    for (const auto& [a, b] : gf.directed) g.add_edge(a, b);
    try {
      return Dag(std::move(g));
    } catch (const ParameterError&) {
      throw ParseError("sem json graph is cyclic");
    }
  }();
  std::vector<int> topo = dag.topological_order();
  SemSpec sem{std::move(dag), std::move(lam), std::move(omega), noise, std::move(topo), seed};
  sem.validate();
  return sem;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) {
    throw FileError("cannot write " + path);
  }
}

}  // namespace nodag
