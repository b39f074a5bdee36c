#include "crabot/eval.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "crabot/error.hpp"
#include "crabot/parallel.hpp"

namespace crabot::eval {
namespace {

// Labels aligned with the matrix order; Unknown or missing labels throw.
std::vector<UserLabel> aligned_labels(std::span<const std::string> user_ids,
                                      const LabelMap& labels) {
  std::vector<UserLabel> out;
  out.reserve(user_ids.size());
  for (const auto& id : user_ids) {
    auto it = labels.find(id);
    if (it == labels.end()) throw DataError(fmt::format("user \"{}\" has no label", id));
    if (it->second == UserLabel::Unknown) {
      throw DataError(fmt::format(
          "user \"{}\" is labeled unknown; evaluation needs bot or control labels", id));
    }
    out.push_back(it->second);
  }
  return out;
}

// Index-space pooling shared by pool_communities and the sweep.
struct Pooled {
  ConfusionMatrix confusion;
  std::size_t represented = 0;
  std::size_t communities = 0;
};

Pooled pool_indices(const community::Partition& partition, std::span<const UserLabel> labels,
                    std::vector<std::pair<std::size_t, UserLabel>>* predictions = nullptr) {
  Pooled out;
  for (const auto& members : partition.communities) {
    if (members.size() < 2) continue;
    std::size_t bots = 0;
    for (std::size_t v : members) bots += labels[v] == UserLabel::Bot;
    const bool predict_bot = 2 * bots > members.size();
    const std::size_t controls = members.size() - bots;
    if (predict_bot) {
      out.confusion.tp += bots;
      out.confusion.fp += controls;
    } else {
      out.confusion.fn += bots;
      out.confusion.tn += controls;
    }
    out.represented += members.size();
    ++out.communities;
    if (predictions) {
      for (std::size_t v : members) {
        predictions->emplace_back(v, predict_bot ? UserLabel::Bot : UserLabel::Control);
      }
    }
  }
  return out;
}

}  // namespace

JointProbabilities ConfusionMatrix::joint() const {
  const auto n = static_cast<double>(total());
  if (n == 0) return {};
  return {static_cast<double>(tp) / n, static_cast<double>(fn) / n,
          static_cast<double>(fp) / n, static_cast<double>(tn) / n};
}

Predictions pool_communities(const community::Partition& partition,
                             std::span<const std::string> user_ids, const LabelMap& labels) {
  const auto aligned = aligned_labels(user_ids, labels);
  community::validate(partition, user_ids.size());
  std::vector<std::pair<std::size_t, UserLabel>> indexed;
  pool_indices(partition, aligned, &indexed);
  Predictions predictions;
  for (const auto& [v, label] : indexed) predictions.emplace(user_ids[v], label);
  return predictions;
}

ConfusionMatrix confusion(const Predictions& predictions, const LabelMap& labels) {
  ConfusionMatrix c;
  for (const auto& [user, predicted] : predictions) {
    auto it = labels.find(user);
    if (it == labels.end()) throw DataError(fmt::format("user \"{}\" has no label", user));
    const bool actual_bot = it->second == UserLabel::Bot;
    if (it->second == UserLabel::Unknown) {
      throw DataError(fmt::format("user \"{}\" is labeled unknown", user));
    }
    if (predicted == UserLabel::Bot) {
      (actual_bot ? c.tp : c.fp) += 1;
    } else {
      (actual_bot ? c.fn : c.tn) += 1;
    }
  }
  return c;
}

double mcc(double tp, double fp, double fn, double tn) {
  const double a = tp + fp;
  const double b = tp + fn;
  const double c = tn + fp;
  const double d = tn + fn;
  if (a == 0 || b == 0 || c == 0 || d == 0) return 0.0;
  // Pairing (a, b) and (c, d) keeps a perfect classifier at exactly 1.
  const double value = (tp * tn - fp * fn) / (std::sqrt(a * b) * std::sqrt(c * d));
  return std::clamp(value, -1.0, 1.0);
}

double mcc(const ConfusionMatrix& c) {
  return mcc(static_cast<double>(c.tp), static_cast<double>(c.fp), static_cast<double>(c.fn),
             static_cast<double>(c.tn));
}

double sensitivity(const ConfusionMatrix& c) {
  if (c.tp + c.fn == 0) throw InvalidArgument("sensitivity is undefined without positives");
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

std::size_t optimal_index(std::span<const SweepPoint> points) {
  if (points.empty()) throw InvalidArgument("no sweep points");
  std::size_t best = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].mcc > points[best].mcc) best = i;
  }
  return best;
}

void validate_grid(std::span<const double> grid) {
  if (grid.empty()) throw InvalidArgument("tau grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0) || !std::isfinite(grid[i])) {
      throw InvalidArgument(fmt::format("tau grid value {} is not a finite value >= 0", grid[i]));
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw InvalidArgument("tau grid must be strictly increasing");
    }
  }
}

namespace {

TauEvaluation evaluate_aligned(const resonance::ResonanceMatrix& matrix,
                               std::span<const UserLabel> labels, double tau) {
  TauEvaluation out;
  const auto graph = community::threshold_association(matrix, tau);
  out.partition = community::detect_communities(graph);
  const Pooled pooled = pool_indices(out.partition, labels);
  out.point.tau = tau;
  out.point.confusion = pooled.confusion;
  out.point.mcc = mcc(pooled.confusion);
  out.point.community_count = pooled.communities;
  out.point.edge_count = graph.edge_count();
  out.point.represented_fraction =
      matrix.size() == 0 ? 0.0
                         : static_cast<double>(pooled.represented) / static_cast<double>(matrix.size());
  return out;
}

}  // namespace

TauEvaluation evaluate_tau(const resonance::ResonanceMatrix& matrix, const LabelMap& labels,
                           double tau) {
  return evaluate_aligned(matrix, aligned_labels(matrix.user_ids(), labels), tau);
}

SweepResult sweep(const resonance::ResonanceMatrix& matrix, const LabelMap& labels,
                  std::span<const double> grid, unsigned workers) {
  validate_grid(grid);
  const auto aligned = aligned_labels(matrix.user_ids(), labels);
  SweepResult result;
  result.points.resize(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t i) {
    result.points[i] = evaluate_aligned(matrix, aligned, grid[i]).point;
  });
  result.optimal = optimal_index(result.points);
  return result;
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t count, bool include_zero) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) {
    throw InvalidArgument("geometric grid needs 0 < lo <= hi and at least one point");
  }
  if (count > 1 && hi == lo) throw InvalidArgument("geometric grid with lo == hi needs one point");
  std::vector<double> grid;
  if (include_zero) grid.push_back(0.0);
  if (count == 1) {
    grid.push_back(lo);
    return grid;
  }
  const double log_lo = std::log(lo);
  const double step = (std::log(hi) - log_lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    if (i == 0) {
      grid.push_back(lo);
    } else if (i + 1 == count) {
      grid.push_back(hi);
    } else {
      grid.push_back(std::exp(log_lo + step * static_cast<double>(i)));
    }
  }
  return grid;
}

std::vector<double> default_grid() { return geometric_grid(1e-4, 1.0, 200, true); }

}  // namespace crabot::eval
