#include "crabot/resonance.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "crabot/error.hpp"
#include "crabot/parallel.hpp"

namespace crabot::resonance {
namespace {

void require_centrality(const cra::DiscursiveGraph& g) {
  if (!g.has_centrality()) {
    throw InvalidArgument("resonance needs graphs with computed centralities");
  }
}

double squared_norm(const cra::DiscursiveGraph& g) {
  double sum = 0.0;
  for (double x : g.centrality()) sum += x * x;
  return sum;
}

double normalize(double dot, double norm_a, double norm_b) {
  if (norm_a <= 0.0 || norm_b <= 0.0) return 0.0;
  const double value = dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
  return std::clamp(value, 0.0, 1.0);
}

// Non-zero centralities keyed by a corpus-wide term id, sorted by id.
struct SparseCentrality {
  std::vector<std::uint32_t> terms;
  std::vector<double> values;
  double squared_norm = 0.0;
};

double sparse_dot(const SparseCentrality& a, const SparseCentrality& b) {
  double sum = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.terms.size() && j < b.terms.size()) {
    if (a.terms[i] < b.terms[j]) {
      ++i;
    } else if (b.terms[j] < a.terms[i]) {
      ++j;
    } else {
      sum += a.values[i] * b.values[j];
      ++i;
      ++j;
    }
  }
  return sum;
}

}  // namespace

double word_resonance(const cra::DiscursiveGraph& a, const cra::DiscursiveGraph& b) {
  require_centrality(a);
  require_centrality(b);
  // Vertex lists are sorted by lemma, so the intersection is a merge.
  const auto& va = a.vertices();
  const auto& vb = b.vertices();
  double sum = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < va.size() && j < vb.size()) {
    const int cmp = va[i].compare(vb[j]);
    if (cmp < 0) {
      ++i;
    } else if (cmp > 0) {
      ++j;
    } else {
      sum += a.centrality()[i] * b.centrality()[j];
      ++i;
      ++j;
    }
  }
  return sum;
}

double normalized_resonance(const cra::DiscursiveGraph& a, const cra::DiscursiveGraph& b) {
  return normalize(word_resonance(a, b), squared_norm(a), squared_norm(b));
}

ResonanceMatrix::ResonanceMatrix(std::vector<std::string> user_ids)
    : user_ids_(std::move(user_ids)), values_(user_ids_.size() * user_ids_.size(), 0.0) {}

ResonanceMatrix ResonanceMatrix::from_values(std::vector<std::string> user_ids,
                                             std::vector<double> row_major) {
  const std::size_t n = user_ids.size();
  if (row_major.size() != n * n) {
    throw DataError(fmt::format("matrix has {} values, expected {}", row_major.size(), n * n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (row_major[i * n + i] != 0.0) {
      throw DataError(fmt::format("matrix diagonal entry {} is not zero", i));
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double v = row_major[i * n + j];
      if (!(v >= 0.0 && v <= 1.0)) {
        throw DataError(fmt::format("matrix entry ({}, {}) = {} is outside [0, 1]", i, j, v));
      }
      if (v != row_major[j * n + i]) {
        throw DataError(fmt::format("matrix is not symmetric at ({}, {})", i, j));
      }
    }
  }
  ResonanceMatrix m;
  m.user_ids_ = std::move(user_ids);
  m.values_ = std::move(row_major);
  return m;
}

void ResonanceMatrix::set(std::size_t i, std::size_t j, double value) {
  if (i == j) throw InvalidArgument("resonance matrix diagonal is fixed at zero");
  values_[i * size() + j] = value;
  values_[j * size() + i] = value;
}

ResonanceMatrix resonance_matrix(std::span<const cra::DiscursiveGraph> graphs,
                                 std::vector<std::string> user_ids, unsigned workers) {
  if (graphs.size() != user_ids.size()) {
    throw InvalidArgument(fmt::format("{} graphs for {} user ids", graphs.size(), user_ids.size()));
  }
  for (const auto& g : graphs) require_centrality(g);

  // Intern the lemmas that carry non-zero centrality. Zero entries can never
  // contribute to a dot product.
  std::unordered_map<std::string_view, std::uint32_t> vocabulary;
  std::vector<SparseCentrality> sparse(graphs.size());
  for (std::size_t u = 0; u < graphs.size(); ++u) {
    const auto& g = graphs[u];
    std::vector<std::pair<std::uint32_t, double>> entries;
    for (cra::VertexId v = 0; v < g.vertex_count(); ++v) {
      const double x = g.centrality()[v];
      if (x == 0.0) continue;
      auto [it, inserted] = vocabulary.try_emplace(
          g.lemma(v), static_cast<std::uint32_t>(vocabulary.size()));
      entries.emplace_back(it->second, x);
    }
    std::sort(entries.begin(), entries.end());
    for (const auto& [term, x] : entries) {
      sparse[u].terms.push_back(term);
      sparse[u].values.push_back(x);
    }
    sparse[u].squared_norm = squared_norm(g);
  }

  ResonanceMatrix matrix(std::move(user_ids));
  const std::size_t n = graphs.size();
  std::vector<std::vector<double>> rows(n);
  parallel_for(n, workers, [&](std::size_t i) {
    auto& row = rows[i];
    row.resize(n - i - 1);
    for (std::size_t j = i + 1; j < n; ++j) {
      row[j - i - 1] = normalize(sparse_dot(sparse[i], sparse[j]), sparse[i].squared_norm,
                                 sparse[j].squared_norm);
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) matrix.set(i, j, rows[i][j - i - 1]);
  }
  return matrix;
}

}  // namespace crabot::resonance
