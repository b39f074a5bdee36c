#include "crabot/community.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "crabot/error.hpp"

namespace crabot::community {

AssociationGraph AssociationGraph::from_edges(
    std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
    std::vector<std::string> user_ids) {
  AssociationGraph g;
  if (user_ids.empty()) {
    for (std::size_t i = 0; i < n; ++i) user_ids.push_back(std::to_string(i));
  }
  if (user_ids.size() != n) throw InvalidArgument("user_ids size must equal n");
  g.user_ids_ = std::move(user_ids);
  g.adjacency_.resize(n);
  for (const auto& [a, b] : edges) {
    if (a >= n || b >= n) throw InvalidArgument("edge endpoint out of range");
    if (a == b) continue;
    g.adjacency_[a].push_back(b);
    g.adjacency_[b].push_back(a);
  }
  for (auto& list : g.adjacency_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    g.edge_count_ += list.size();
  }
  g.edge_count_ /= 2;
  return g;
}

std::size_t AssociationGraph::isolated_count() const {
  return static_cast<std::size_t>(std::count_if(
      adjacency_.begin(), adjacency_.end(), [](const auto& list) { return list.empty(); }));
}

std::vector<std::pair<std::size_t, std::size_t>> AssociationGraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(edge_count_);
  for (std::size_t u = 0; u < adjacency_.size(); ++u) {
    for (std::size_t v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

AssociationGraph threshold_association(const resonance::ResonanceMatrix& matrix, double tau) {
  if (!(tau >= 0.0)) throw InvalidArgument(fmt::format("tau must be >= 0, got {}", tau));
  AssociationGraph g;
  const std::size_t n = matrix.size();
  g.user_ids_ = matrix.user_ids();
  g.adjacency_.resize(n);
  g.tau_ = tau;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && matrix.at(i, j) >= tau) g.adjacency_[i].push_back(j);
    }
    g.edge_count_ += g.adjacency_[i].size();
  }
  g.edge_count_ /= 2;
  return g;
}

void validate(const Partition& partition, std::size_t n) {
  std::vector<bool> seen(n, false);
  std::size_t covered = 0;
  for (const auto& community : partition.communities) {
    if (community.empty()) throw InvalidArgument("partition has an empty community");
    for (std::size_t v : community) {
      if (v >= n) throw InvalidArgument(fmt::format("partition vertex {} out of range", v));
      if (seen[v]) throw InvalidArgument(fmt::format("vertex {} is in two communities", v));
      seen[v] = true;
      ++covered;
    }
  }
  if (covered != n) {
    throw InvalidArgument(fmt::format("partition covers {} of {} vertices", covered, n));
  }
}

double modularity(const AssociationGraph& graph, const Partition& partition) {
  const std::size_t m = graph.edge_count();
  if (m == 0) throw InvalidArgument("modularity is undefined on a graph without edges");
  validate(partition, graph.vertex_count());
  std::vector<std::size_t> community_of(graph.vertex_count());
  for (std::size_t c = 0; c < partition.communities.size(); ++c) {
    for (std::size_t v : partition.communities[c]) community_of[v] = c;
  }
  std::vector<std::uint64_t> inside(partition.communities.size(), 0);
  std::vector<std::uint64_t> degree(partition.communities.size(), 0);
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    degree[community_of[v]] += graph.degree(v);
  }
  for (const auto& [u, v] : graph.edges()) {
    if (community_of[u] == community_of[v]) ++inside[community_of[u]];
  }
  const double md = static_cast<double>(m);
  double q = 0.0;
  for (std::size_t c = 0; c < partition.communities.size(); ++c) {
    const double share = static_cast<double>(degree[c]) / (2.0 * md);
    q += static_cast<double>(inside[c]) / md - share * share;
  }
  return q;
}

Agglomeration agglomerate(const AssociationGraph& graph) {
  const std::size_t n = graph.vertex_count();
  const auto m = static_cast<std::int64_t>(graph.edge_count());
  Agglomeration result;

  // Community state keyed by representative (smallest member).
  std::vector<std::vector<std::size_t>> members(n);
  std::vector<std::int64_t> degree(n);
  std::vector<std::map<std::size_t, std::int64_t>> links(n);  // edges between communities
  std::vector<bool> alive(n, true);
  for (std::size_t v = 0; v < n; ++v) {
    members[v] = {v};
    degree[v] = static_cast<std::int64_t>(graph.degree(v));
    for (std::size_t w : graph.neighbors(v)) links[v][w] = 1;
  }

  if (m == 0) {
    for (std::size_t v = 0; v < n; ++v) result.partition.communities.push_back({v});
    result.partition.modularity = 0.0;
    result.q_trace.push_back(0.0);
    return result;
  }

  // Gain of merging a and b scaled by 2m^2: 2m * l_ab - d_a * d_b.
  auto gain = [&](std::size_t a, std::size_t b, std::int64_t l) {
    return 2 * m * l - degree[a] * degree[b];
  };
  // Ordered by descending gain, then ascending (lo, hi).
  using Key = std::tuple<std::int64_t, std::size_t, std::size_t>;
  std::set<Key> candidates;
  auto key = [&](std::size_t a, std::size_t b, std::int64_t l) {
    return Key{-gain(a, b, l), std::min(a, b), std::max(a, b)};
  };
  for (std::size_t a = 0; a < n; ++a) {
    for (const auto& [b, l] : links[a]) {
      if (a < b) candidates.insert(key(a, b, l));
    }
  }

  const double two_m_sq = 2.0 * static_cast<double>(m) * static_cast<double>(m);
  double q = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    const double share = static_cast<double>(degree[v]) / (2.0 * static_cast<double>(m));
    q -= share * share;
  }
  result.q_trace.push_back(q);

  while (!candidates.empty()) {
    const auto [neg_gain, a, b] = *candidates.begin();
    if (-neg_gain <= 0) break;

    // Drop every candidate touching a or b; they are rebuilt below.
    for (const auto& [k, l] : links[a]) candidates.erase(key(a, k, l));
    for (const auto& [k, l] : links[b]) candidates.erase(key(b, k, l));

    // Fold b into a.
    links[a].erase(b);
    for (const auto& [k, l] : links[b]) {
      if (k == a) continue;
      links[a][k] += l;
      links[k].erase(b);
      links[k][a] = links[a][k];
    }
    links[b].clear();
    degree[a] += degree[b];
    degree[b] = 0;
    members[a].insert(members[a].end(), members[b].begin(), members[b].end());
    members[b].clear();
    alive[b] = false;

    // Pairs (k, x) with neither endpoint merged keep their gains; only pairs
    // with the merged community changed.
    for (const auto& [k, l] : links[a]) candidates.insert(key(a, k, l));

    q += static_cast<double>(-neg_gain) / two_m_sq;
    result.q_trace.push_back(q);
  }

  for (std::size_t v = 0; v < n; ++v) {
    if (!alive[v]) continue;
    std::sort(members[v].begin(), members[v].end());
    result.partition.communities.push_back(std::move(members[v]));
  }
  result.partition.modularity = modularity(graph, result.partition);
  return result;
}

Partition detect_communities(const AssociationGraph& graph) {
  return agglomerate(graph).partition;
}

}  // namespace crabot::community
