#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "crabot/resonance.hpp"

namespace crabot::community {

// Unweighted user graph: edge {i, j} iff m_ij >= tau and i != j.
class AssociationGraph {
 public:
  AssociationGraph() = default;

  // Vertices are named "0".."n-1" unless user_ids is given. Self-loops and
  // duplicates are dropped.
  static AssociationGraph from_edges(std::size_t n,
                                     const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                     std::vector<std::string> user_ids = {});

  std::size_t vertex_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  double tau() const { return tau_; }
  const std::vector<std::string>& user_ids() const { return user_ids_; }

  const std::vector<std::size_t>& neighbors(std::size_t v) const { return adjacency_[v]; }
  std::size_t degree(std::size_t v) const { return adjacency_[v].size(); }
  std::size_t isolated_count() const;

  // (smaller, larger) pairs in sorted order.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

 private:
  friend AssociationGraph threshold_association(const resonance::ResonanceMatrix&, double);

  std::vector<std::string> user_ids_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::size_t edge_count_ = 0;
  double tau_ = 0.0;
};

AssociationGraph threshold_association(const resonance::ResonanceMatrix& matrix, double tau);

struct Partition {
  // Each community sorted ascending; communities ordered by smallest member.
  std::vector<std::vector<std::size_t>> communities;
  double modularity = 0.0;
};

// Throws InvalidArgument unless the communities are non-empty, disjoint and
// cover [0, n).
void validate(const Partition& partition, std::size_t n);

// Newman modularity Q = sum_c [e_c / m - (d_c / 2m)^2]. Throws
// InvalidArgument on a graph without edges, where Q is undefined.
double modularity(const AssociationGraph& graph, const Partition& partition);

struct Agglomeration {
  Partition partition;
  // Q of the singleton partition followed by Q after each accepted merge.
  std::vector<double> q_trace;
};

// Clauset-Newman-Moore greedy agglomeration. Starting from singletons, the
// pair of adjacent communities with the largest modularity gain is merged
// while that gain is strictly positive. Gains are compared exactly (integer
// arithmetic); ties go to the pair whose (smaller, larger) representative
// vertices are lexicographically smallest, a community's representative
// being its smallest member. A graph without edges yields singletons with
// modularity 0.
Agglomeration agglomerate(const AssociationGraph& graph);

Partition detect_communities(const AssociationGraph& graph);

}  // namespace crabot::community
