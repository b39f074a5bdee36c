#pragma once

#include <span>
#include <string>
#include <vector>

#include "crabot/cra_graph.hpp"

namespace crabot::resonance {

// Sum over shared lemmas of the product of the two centralities.
double word_resonance(const cra::DiscursiveGraph& a, const cra::DiscursiveGraph& b);

// word_resonance divided by the product of the full centrality-vector norms of
// both graphs; 0 when either norm is 0. Always in [0, 1].
double normalized_resonance(const cra::DiscursiveGraph& a, const cra::DiscursiveGraph& b);

// Dense symmetric n x n matrix with a zero diagonal.
class ResonanceMatrix {
 public:
  ResonanceMatrix() = default;
  explicit ResonanceMatrix(std::vector<std::string> user_ids);

  // Validates shape, symmetry, zero diagonal and range; throws DataError.
  static ResonanceMatrix from_values(std::vector<std::string> user_ids,
                                     std::vector<double> row_major);

  std::size_t size() const { return user_ids_.size(); }
  const std::vector<std::string>& user_ids() const { return user_ids_; }

  double at(std::size_t i, std::size_t j) const { return values_[i * size() + j]; }
  // Writes both (i, j) and (j, i). i must differ from j.
  void set(std::size_t i, std::size_t j, double value);

  const std::vector<double>& values() const { return values_; }

  friend bool operator==(const ResonanceMatrix&, const ResonanceMatrix&) = default;

 private:
  std::vector<std::string> user_ids_;
  std::vector<double> values_;
};

// Every graph must have centralities. Pairs are evaluated on `workers`
// threads (0 = default); the result does not depend on the worker count.
ResonanceMatrix resonance_matrix(std::span<const cra::DiscursiveGraph> graphs,
                                 std::vector<std::string> user_ids,
                                 unsigned workers = 0);

}  // namespace crabot::resonance
