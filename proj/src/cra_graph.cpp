#include "crabot/cra_graph.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <deque>
#include <fstream>

#include "crabot/error.hpp"

namespace crabot::cra {

DiscursiveGraph DiscursiveGraph::from_edges(
    std::span<const std::string> vertices,
    std::span<const std::pair<std::string, std::string>> edges) {
  DiscursiveGraph graph;
  graph.lemmas_.assign(vertices.begin(), vertices.end());
  for (const auto& [a, b] : edges) {
    graph.lemmas_.push_back(a);
    graph.lemmas_.push_back(b);
  }
  std::sort(graph.lemmas_.begin(), graph.lemmas_.end());
  graph.lemmas_.erase(std::unique(graph.lemmas_.begin(), graph.lemmas_.end()),
                      graph.lemmas_.end());

  graph.adjacency_.resize(graph.lemmas_.size());
  for (const auto& [a, b] : edges) {
    if (a == b) continue;
    const VertexId u = *graph.find(a);
    const VertexId v = *graph.find(b);
    graph.adjacency_[u].push_back(v);
    graph.adjacency_[v].push_back(u);
  }
  for (auto& list : graph.adjacency_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    graph.edge_count_ += list.size();
  }
  graph.edge_count_ /= 2;
  return graph;
}

std::optional<VertexId> DiscursiveGraph::find(std::string_view lemma) const {
  auto it = std::lower_bound(lemmas_.begin(), lemmas_.end(), lemma);
  if (it == lemmas_.end() || *it != lemma) return std::nullopt;
  return static_cast<VertexId>(it - lemmas_.begin());
}

std::vector<std::pair<VertexId, VertexId>> DiscursiveGraph::edges() const {
  std::vector<std::pair<VertexId, VertexId>> out;
  out.reserve(edge_count_);
  for (VertexId u = 0; u < adjacency_.size(); ++u) {
    for (VertexId v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

std::map<std::string, double> DiscursiveGraph::centrality_map() const {
  std::map<std::string, double> out;
  for (VertexId v = 0; v < lemmas_.size(); ++v) {
    out.emplace(lemmas_[v], has_centrality_ ? centrality_[v] : 0.0);
  }
  return out;
}

void DiscursiveGraph::set_centrality(std::vector<double> values) {
  if (values.size() != lemmas_.size()) {
    throw InvalidArgument(fmt::format("centrality has {} values for {} vertices",
                                      values.size(), lemmas_.size()));
  }
  for (double x : values) {
    if (!(x >= 0.0)) throw InvalidArgument("centrality values must be non-negative");
  }
  centrality_ = std::move(values);
  has_centrality_ = true;
}

DiscursiveGraph build_discursive_graph(std::span<const textproc::NounPhrase> phrases) {
  std::vector<std::string> vertices;
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& phrase : phrases) {
    vertices.insert(vertices.end(), phrase.words.begin(), phrase.words.end());
    for (std::size_t i = 1; i < phrase.words.size(); ++i) {
      edges.emplace_back(phrase.words[i - 1], phrase.words[i]);
    }
  }
  return DiscursiveGraph::from_edges(vertices, edges);
}

std::vector<double> betweenness(const DiscursiveGraph& graph) {
  const std::size_t n = graph.vertex_count();
  std::vector<double> centrality(n, 0.0);

  std::vector<std::vector<VertexId>> predecessors(n);
  std::vector<double> sigma(n);
  std::vector<long> distance(n);
  std::vector<double> delta(n);
  std::vector<VertexId> order;
  order.reserve(n);
  std::deque<VertexId> queue;

  for (VertexId s = 0; s < n; ++s) {
    for (VertexId v = 0; v < n; ++v) {
      predecessors[v].clear();
      sigma[v] = 0.0;
      distance[v] = -1;
      delta[v] = 0.0;
    }
    order.clear();
    sigma[s] = 1.0;
    distance[s] = 0;
    queue.push_back(s);
    while (!queue.empty()) {
      const VertexId v = queue.front();
      queue.pop_front();
      order.push_back(v);
      for (VertexId w : graph.neighbors(v)) {
        if (distance[w] < 0) {
          distance[w] = distance[v] + 1;
          queue.push_back(w);
        }
        if (distance[w] == distance[v] + 1) {
          sigma[w] += sigma[v];
          predecessors[w].push_back(v);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const VertexId w = *it;
      for (VertexId v : predecessors[w]) {
        delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      }
      if (w != s) centrality[w] += delta[w];
    }
  }
  // Every unordered pair was counted once from each endpoint.
  for (double& x : centrality) x *= 0.5;
  return centrality;
}

DiscursiveGraph analyze(std::span<const textproc::NounPhrase> phrases) {
  DiscursiveGraph graph = build_discursive_graph(phrases);
  graph.set_centrality(betweenness(graph));
  return graph;
}

std::string edge_list(const DiscursiveGraph& graph) {
  std::string out;
  // Vertex ids follow lemma order, so id-sorted edges are lemma-sorted.
  for (const auto& [u, v] : graph.edges()) {
    out += graph.lemma(u);
    out.push_back('\t');
    out += graph.lemma(v);
    out.push_back('\n');
  }
  return out;
}

void write_edge_list(const DiscursiveGraph& graph, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
  out << edge_list(graph);
}

}  // namespace crabot::cra
