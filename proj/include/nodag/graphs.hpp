#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "nodag/errors.hpp"

namespace nodag {

/// Ordered node pair (i, j) meaning the edge i -> j; nodes are 0-based.
using Edge = std::pair<int, int>;

/// Unordered node pair, stored with first < second.
using NodePair = std::pair<int, int>;

inline NodePair node_pair(int i, int j) {
  return i < j ? NodePair{i, j} : NodePair{j, i};
}

/// Directed graph on p nodes without self-loops. May contain 2-cycles
/// (i -> j together with j -> i), which is exactly what the support of an
/// estimated factor can produce.
class Digraph {
 public:
  explicit Digraph(int p);
  Digraph(int p, std::initializer_list<Edge> edges);

  int node_count() const { return p_; }
  void add_edge(int i, int j);
  bool has_edge(int i, int j) const { return edges_.count({i, j}) > 0; }
  const std::set<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  friend bool operator==(const Digraph&, const Digraph&) = default;

 private:
  void check_nodes(int i, int j) const;

  int p_ = 0;
  std::set<Edge> edges_;
};

/// Directed acyclic graph; construction verifies acyclicity.
class Dag {
 public:
  explicit Dag(Digraph g);

  int node_count() const { return g_.node_count(); }
  const Digraph& graph() const { return g_; }
  const std::set<Edge>& edges() const { return g_.edges(); }

  /// A topological order (parents before children), deterministic:
  /// the smallest available node is emitted first.
  std::vector<int> topological_order() const;

  friend bool operator==(const Dag&, const Dag&) = default;

 private:
  Digraph g_;
};

/// Partially directed graph representing a Markov equivalence class:
/// compelled edges directed, reversible edges undirected.
class Cpdag {
 public:
  explicit Cpdag(int p);

  int node_count() const { return p_; }
  void add_directed(int i, int j);
  void add_undirected(int i, int j);
  bool has_directed(int i, int j) const { return directed_.count({i, j}) > 0; }
  bool has_undirected(int i, int j) const {
    return undirected_.count(node_pair(i, j)) > 0;
  }
  const std::set<Edge>& directed() const { return directed_; }
  const std::set<NodePair>& undirected() const { return undirected_; }

  friend bool operator==(const Cpdag&, const Cpdag&) = default;

 private:
  void check_nodes(int i, int j) const;

  int p_ = 0;
  std::set<Edge> directed_;
  std::set<NodePair> undirected_;
};

/// True iff g admits a topological order (iterative in-degree elimination).
bool is_acyclic(const Digraph& g);

/// Topological order if one exists.
std::optional<std::vector<int>> topological_order(const Digraph& g);

/// Undirected projection; 2-cycles collapse to a single pair.
std::set<NodePair> skeleton(const Digraph& g);
std::set<NodePair> skeleton(const Cpdag& g);

/// Colliders a -> c <- b with a, b nonadjacent, reported as (a, c, b), a < b.
std::set<std::tuple<int, int, int>> v_structures(const Dag& d);

/// The CPDAG of d's Markov equivalence class: the skeleton with only
/// v-structure edges directed, closed under the standard orientation rules.
Cpdag dag_to_cpdag(const Dag& d);

/// Partially directed reading of an estimated graph, for comparison against
/// a true CPDAG: an acyclic estimate maps to the CPDAG of its own
/// equivalence class (so any member of the true class scores a distance of
/// zero); otherwise 2-cycles become undirected edges and the remaining
/// directed edges are kept as-is.
Cpdag estimate_pdag(const Digraph& g);

/// Structural Hamming distance: over unordered pairs, each graph assigns one
/// of {absent, i->j, j->i, undirected} (a 2-cycle counts as undirected) and
/// every status mismatch adds 1.
int shd(const Digraph& a, const Digraph& b);
int shd(const Digraph& a, const Cpdag& b);
int shd(const Cpdag& a, const Digraph& b);
int shd(const Cpdag& a, const Cpdag& b);

struct SkeletonMetrics {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  double tpr = 0.0;
  double fpr = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
};

/// Skeleton recovery metrics of an estimate against a true DAG.
/// Conventions: precision = 1 when the estimate claims nothing, TPR = 1 when
/// the true skeleton is empty, FPR = 0 when there are no negatives, and
/// F1 = 0 when precision + TPR = 0.
SkeletonMetrics skeleton_metrics(const Digraph& est, const Dag& truth);
SkeletonMetrics skeleton_metrics(const Cpdag& est, const Dag& truth);

}  // namespace nodag
