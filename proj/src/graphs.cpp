#include "nodag/graphs.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace nodag {

namespace {

void require_positive_nodes(int p) {
  if (p < 1) {
    throw ParameterError("graph needs at least one node, got " + std::to_string(p));
  }
}

}  // namespace

Digraph::Digraph(int p) : p_(p) { require_positive_nodes(p); }

Digraph::Digraph(int p, std::initializer_list<Edge> edges) : Digraph(p) {
  for (const auto& [i, j] : edges) add_edge(i, j);
}

void Digraph::check_nodes(int i, int j) const {
  if (i < 0 || i >= p_ || j < 0 || j >= p_) {
    throw ParameterError("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                         ") out of range for " + std::to_string(p_) + " nodes");
  }
  if (i == j) {
    throw ParameterError("self-loop at node " + std::to_string(i));
  }
}

void Digraph::add_edge(int i, int j) {
  check_nodes(i, j);
  edges_.insert({i, j});
}

Dag::Dag(Digraph g) : g_(std::move(g)) {
  if (!is_acyclic(g_)) {
    throw ParameterError("graph is cyclic, not a DAG");
  }
}

std::vector<int> Dag::topological_order() const {
  auto order = nodag::topological_order(g_);
  return *order;  // construction guaranteed acyclicity
}

Cpdag::Cpdag(int p) : p_(p) { require_positive_nodes(p); }

void Cpdag::check_nodes(int i, int j) const {
  if (i < 0 || i >= p_ || j < 0 || j >= p_) {
    throw ParameterError("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                         ") out of range for " + std::to_string(p_) + " nodes");
  }
  if (i == j) {
    throw ParameterError("self-loop at node " + std::to_string(i));
  }
}

void Cpdag::add_directed(int i, int j) {
  check_nodes(i, j);
  if (directed_.count({j, i}) > 0 || undirected_.count(node_pair(i, j)) > 0) {
    throw ParameterError("conflicting edge marks on pair (" + std::to_string(i) +
                         ", " + std::to_string(j) + ")");
  }
  directed_.insert({i, j});
}

void Cpdag::add_undirected(int i, int j) {
  check_nodes(i, j);
  if (directed_.count({i, j}) > 0 || directed_.count({j, i}) > 0) {
    throw ParameterError("conflicting edge marks on pair (" + std::to_string(i) +
                         ", " + std::to_string(j) + ")");
  }
  undirected_.insert(node_pair(i, j));
}

std::optional<std::vector<int>> topological_order(const Digraph& g) {
  const int p = g.node_count();
  std::vector<int> indeg(p, 0);
  std::vector<std::vector<int>> children(p);
  for (const auto& [i, j] : g.edges()) {
    ++indeg[j];
    children[i].push_back(j);
  }

  std::set<int> ready;
  for (int v = 0; v < p; ++v) {
    if (indeg[v] == 0) ready.insert(v);
  }

  std::vector<int> order;
  order.reserve(p);
  while (!ready.empty()) {
    const int v = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(v);
    for (int c : children[v]) {
      if (--indeg[c] == 0) ready.insert(c);
    }
  }
  if (static_cast<int>(order.size()) != p) return std::nullopt;
  return order;
}

bool is_acyclic(const Digraph& g) { return topological_order(g).has_value(); }

std::set<NodePair> skeleton(const Digraph& g) {
  std::set<NodePair> pairs;
  for (const auto& [i, j] : g.edges()) pairs.insert(node_pair(i, j));
  return pairs;
}

std::set<NodePair> skeleton(const Cpdag& g) {
  std::set<NodePair> pairs = g.undirected();
  for (const auto& [i, j] : g.directed()) pairs.insert(node_pair(i, j));
  return pairs;
}

std::set<std::tuple<int, int, int>> v_structures(const Dag& d) {
  const auto skel = skeleton(d.graph());
  std::vector<std::vector<int>> parents(d.node_count());
  for (const auto& [i, j] : d.edges()) parents[j].push_back(i);

  std::set<std::tuple<int, int, int>> triples;
  for (int c = 0; c < d.node_count(); ++c) {
    auto& par = parents[c];
    std::sort(par.begin(), par.end());
    for (std::size_t x = 0; x < par.size(); ++x) {
      for (std::size_t y = x + 1; y < par.size(); ++y) {
        if (skel.count({par[x], par[y]}) == 0) {
          triples.emplace(par[x], c, par[y]);
        }
      }
    }
  }
  return triples;
}

namespace {

// Working pad for the orientation closure: per ordered pair, whether a
// directed mark i -> j is present, plus an undirected-mark table.
struct Pattern {
  int p;
  std::vector<char> dir;  // dir[i*p + j] != 0 iff i -> j
  std::vector<char> und;  // und[i*p + j] != 0 iff i - j (symmetric)

  explicit Pattern(int nodes) : p(nodes), dir(nodes * nodes, 0), und(nodes * nodes, 0) {}

  bool directed(int i, int j) const { return dir[i * p + j] != 0; }
  bool undirected(int i, int j) const { return und[i * p + j] != 0; }
  bool adjacent(int i, int j) const {
    return directed(i, j) || directed(j, i) || undirected(i, j);
  }
  void orient(int i, int j) {
    und[i * p + j] = und[j * p + i] = 0;
    dir[i * p + j] = 1;
  }
};

}  // namespace

Cpdag dag_to_cpdag(const Dag& d) {
  const int p = d.node_count();
  Pattern pat(p);

  // Pattern of the DAG: skeleton plus the compelled v-structure arrows.
  for (const auto& [i, j] : skeleton(d.graph())) {
    pat.und[i * p + j] = pat.und[j * p + i] = 1;
  }
  for (const auto& [a, c, b] : v_structures(d)) {
    pat.orient(a, c);
    pat.orient(b, c);
  }

  // Orientation closure. Starting from a DAG's pattern the three rules below
  // reach the CPDAG; the background-knowledge rule never fires.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int a = 0; a < p; ++a) {
      for (int b = 0; b < p; ++b) {
        if (a == b) continue;

        // R1: a -> b - c with a, c nonadjacent  =>  b -> c.
        if (pat.directed(a, b)) {
          for (int c = 0; c < p; ++c) {
            if (c == a || c == b) continue;
            if (pat.undirected(b, c) && !pat.adjacent(a, c)) {
              pat.orient(b, c);
              changed = true;
            }
          }
        }

        // R2: a -> b -> c with a - c  =>  a -> c.
        if (pat.directed(a, b)) {
          for (int c = 0; c < p; ++c) {
            if (c == a || c == b) continue;
            if (pat.directed(b, c) && pat.undirected(a, c)) {
              pat.orient(a, c);
              changed = true;
            }
          }
        }

        // R3: a - b with a - c -> b, a - d -> b, c, d nonadjacent  =>  a -> b.
        if (pat.undirected(a, b)) {
          for (int c = 0; c < p && !pat.directed(a, b); ++c) {
            if (c == a || c == b) continue;
            if (!(pat.undirected(a, c) && pat.directed(c, b))) continue;
            for (int e = c + 1; e < p; ++e) {
              if (e == a || e == b) continue;
              if (pat.undirected(a, e) && pat.directed(e, b) && !pat.adjacent(c, e)) {
                pat.orient(a, b);
                changed = true;
                break;
              }
            }
          }
        }
      }
    }
  }

  Cpdag out(p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      if (pat.directed(i, j)) out.add_directed(i, j);
      if (i < j && pat.undirected(i, j)) out.add_undirected(i, j);
    }
  }
  return out;
}

Cpdag estimate_pdag(const Digraph& g) {
  if (is_acyclic(g)) return dag_to_cpdag(Dag(g));
  Cpdag out(g.node_count());
  for (const auto& [i, j] : g.edges()) {
    if (g.has_edge(j, i)) {
      if (i < j) out.add_undirected(i, j);
    } else {
      out.add_directed(i, j);
    }
  }
  return out;
}

namespace {

enum class PairStatus : std::uint8_t { Forward, Backward, Undirected };

// Status per occupied unordered pair; absent pairs are simply missing.
std::map<NodePair, PairStatus> pair_statuses(const Digraph& g) {
  std::map<NodePair, PairStatus> st;
  for (const auto& [i, j] : g.edges()) {
    const NodePair key = node_pair(i, j);
    const PairStatus s = (i < j) ? PairStatus::Forward : PairStatus::Backward;
    auto [it, inserted] = st.emplace(key, s);
    if (!inserted && it->second != s) it->second = PairStatus::Undirected;
  }
  return st;
}

std::map<NodePair, PairStatus> pair_statuses(const Cpdag& g) {
  std::map<NodePair, PairStatus> st;
  for (const auto& [i, j] : g.directed()) {
    st.emplace(node_pair(i, j), (i < j) ? PairStatus::Forward : PairStatus::Backward);
  }
  for (const auto& pr : g.undirected()) st.emplace(pr, PairStatus::Undirected);
  return st;
}

int shd_statuses(int pa, int pb, const std::map<NodePair, PairStatus>& a,
                 const std::map<NodePair, PairStatus>& b) {
  if (pa != pb) {
    throw DimensionError("shd needs graphs on the same node set, got " +
                         std::to_string(pa) + " and " + std::to_string(pb));
  }
  int dist = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      ++dist;  // pair occupied in a only
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      ++dist;  // pair occupied in b only
      ++ib;
    } else {
      if (ia->second != ib->second) ++dist;
      ++ia;
      ++ib;
    }
  }
  return dist;
}

SkeletonMetrics metrics_from_skeletons(int pe, int pt, const std::set<NodePair>& est,
                                       const std::set<NodePair>& truth) {
  if (pe != pt) {
    throw DimensionError("skeleton_metrics needs graphs on the same node set, got " +
                         std::to_string(pe) + " and " + std::to_string(pt));
  }
  if (pt < 2) {
    throw ParameterError("skeleton_metrics needs at least one possible node pair");
  }

  SkeletonMetrics m;
  for (const auto& pr : est) {
    if (truth.count(pr) > 0) {
      ++m.tp;
    } else {
      ++m.fp;
    }
  }
  m.fn = static_cast<std::int64_t>(truth.size()) - m.tp;

  const std::int64_t all_pairs = static_cast<std::int64_t>(pt) * (pt - 1) / 2;
  const std::int64_t negatives = all_pairs - static_cast<std::int64_t>(truth.size());

  m.tpr = truth.empty() ? 1.0 : static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
  m.fpr = negatives == 0 ? 0.0 : static_cast<double>(m.fp) / static_cast<double>(negatives);
  m.precision =
      (m.tp + m.fp) == 0 ? 1.0 : static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
  const double denom = m.precision + m.tpr;
  m.f1 = denom == 0.0 ? 0.0 : 2.0 * m.precision * m.tpr / denom;
  return m;
}

}  // namespace

int shd(const Digraph& a, const Digraph& b) {
  return shd_statuses(a.node_count(), b.node_count(), pair_statuses(a), pair_statuses(b));
}
int shd(const Digraph& a, const Cpdag& b) {
  return shd_statuses(a.node_count(), b.node_count(), pair_statuses(a), pair_statuses(b));
}
int shd(const Cpdag& a, const Digraph& b) {
  return shd_statuses(a.node_count(), b.node_count(), pair_statuses(a), pair_statuses(b));
}
int shd(const Cpdag& a, const Cpdag& b) {
  return shd_statuses(a.node_count(), b.node_count(), pair_statuses(a), pair_statuses(b));
}

SkeletonMetrics skeleton_metrics(const Digraph& est, const Dag& truth) {
  return metrics_from_skeletons(est.node_count(), truth.node_count(), skeleton(est),
                                skeleton(truth.graph()));
}
SkeletonMetrics skeleton_metrics(const Cpdag& est, const Dag& truth) {
  return metrics_from_skeletons(est.node_count(), truth.node_count(), skeleton(est),
                                skeleton(truth.graph()));
}

}  // namespace nodag
