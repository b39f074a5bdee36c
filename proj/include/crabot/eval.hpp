#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "crabot/community.hpp"
#include "crabot/ingest.hpp"
#include "crabot/resonance.hpp"

namespace crabot::eval {

struct JointProbabilities {
  double tp = 0, fn = 0, fp = 0, tn = 0;
};

// Positive class is Bot. Counts cover represented users only.
struct ConfusionMatrix {
  std::uint64_t tp = 0, fn = 0, fp = 0, tn = 0;

  std::uint64_t total() const { return tp + fn + fp + tn; }
  // Counts divided by total; all zero when total is 0.
  JointProbabilities joint() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

using Predictions = std::map<std::string, UserLabel, std::less<>>;

// Communities of size 1 are dropped. Every member of a larger community gets
// Bot when strictly more than half of its members are labeled Bot, otherwise
// Control. Throws DataError for members labeled Unknown or missing a label.
Predictions pool_communities(const community::Partition& partition,
                             std::span<const std::string> user_ids, const LabelMap& labels);

ConfusionMatrix confusion(const Predictions& predictions, const LabelMap& labels);

// Matthews correlation coefficient; 0 when any factor of the denominator is 0.
// The real-valued overload accepts scaled counts such as joint probabilities.
double mcc(const ConfusionMatrix& c);
double mcc(double tp, double fp, double fn, double tn);

// tp / (tp + fn). Throws InvalidArgument when there are no positives.
double sensitivity(const ConfusionMatrix& c);

struct SweepPoint {
  double tau = 0;
  double mcc = 0;
  // Users in communities of size > 1 over all users.
  double represented_fraction = 0;
  ConfusionMatrix confusion;
  // Number of communities of size > 1.
  std::size_t community_count = 0;
  std::size_t edge_count = 0;
};

struct SweepResult {
  std::vector<SweepPoint> points;  // ascending tau
  std::size_t optimal = 0;         // max mcc, smallest tau on ties

  const SweepPoint& best() const { return points.at(optimal); }
};

// Index of the maximal mcc, earliest on ties. Points must be non-empty.
std::size_t optimal_index(std::span<const SweepPoint> points);

struct TauEvaluation {
  SweepPoint point;
  community::Partition partition;
};

// threshold -> detect -> pool -> confusion -> mcc for one tau. Labels must be
// Bot or Control for every user of the matrix.
TauEvaluation evaluate_tau(const resonance::ResonanceMatrix& matrix, const LabelMap& labels,
                           double tau);

// Grid must be non-empty, strictly increasing, all >= 0. Points are evaluated
// in parallel; the result does not depend on the worker count.
SweepResult sweep(const resonance::ResonanceMatrix& matrix, const LabelMap& labels,
                  std::span<const double> grid, unsigned workers = 0);

// `count` geometrically spaced values from lo to hi inclusive, optionally
// preceded by 0.
std::vector<double> geometric_grid(double lo, double hi, std::size_t count, bool include_zero);

// Geometric 1e-4 .. 1 with 200 points, plus 0.
std::vector<double> default_grid();

void validate_grid(std::span<const double> grid);

}  // namespace crabot::eval
