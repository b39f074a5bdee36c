#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "crabot/textproc.hpp"

namespace crabot::cra {

using VertexId = std::size_t;

// A user's discursive graph: a simple undirected graph over noun-phrase
// lemmas. Vertices are kept sorted so ids follow lexicographic order of the
// lemma, which makes graph intersection a linear merge.
class DiscursiveGraph {
 public:
  DiscursiveGraph() = default;

  // Builds from explicit vertices and edges (by lemma). Self-loops and
  // duplicate edges are ignored; edge endpoints are added as vertices.
  static DiscursiveGraph from_edges(
      std::span<const std::string> vertices,
      std::span<const std::pair<std::string, std::string>> edges);

  std::size_t vertex_count() const { return lemmas_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  const std::vector<std::string>& vertices() const { return lemmas_; }
  const std::string& lemma(VertexId v) const { return lemmas_[v]; }
  std::optional<VertexId> find(std::string_view lemma) const;

  // Neighbours of v in increasing id order.
  const std::vector<VertexId>& neighbors(VertexId v) const { return adjacency_[v]; }

  // Edges as (smaller id, larger id), sorted.
  std::vector<std::pair<VertexId, VertexId>> edges() const;

  bool has_centrality() const { return has_centrality_; }
  // Indexed by vertex id. Empty until set_centrality is called.
  const std::vector<double>& centrality() const { return centrality_; }
  std::map<std::string, double> centrality_map() const;
  void set_centrality(std::vector<double> values);

 private:
  std::vector<std::string> lemmas_;
  std::vector<std::vector<VertexId>> adjacency_;
  std::size_t edge_count_ = 0;
  std::vector<double> centrality_;
  bool has_centrality_ = false;
};

// Vertices are every distinct lemma; each pair of consecutive words within a
// phrase becomes an edge.
DiscursiveGraph build_discursive_graph(std::span<const textproc::NounPhrase> phrases);

// Unnormalized betweenness over unordered endpoint pairs, via Brandes'
// accumulation: I(v) = sum over {s,t} with s != v != t of
// sigma(s,t | v) / sigma(s,t), disconnected pairs contributing 0.
std::vector<double> betweenness(const DiscursiveGraph& graph);

// build_discursive_graph followed by betweenness.
DiscursiveGraph analyze(std::span<const textproc::NounPhrase> phrases);

// One "lemma<TAB>lemma" line per edge, endpoints and lines sorted.
std::string edge_list(const DiscursiveGraph& graph);
void write_edge_list(const DiscursiveGraph& graph, const std::filesystem::path& path);

}  // namespace crabot::cra
