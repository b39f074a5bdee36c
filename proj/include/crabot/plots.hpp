#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crabot/eval.hpp"
#include "crabot/ingest.hpp"
#include "crabot/resonance.hpp"

namespace crabot::plots {

// Resonance heatmap, controls first then bots (input order within each),
// colored on a linear yellow-to-blue ramp over [0, max off-diagonal value].
// Black bars along both axes mark bots.
std::string heatmap_svg(const resonance::ResonanceMatrix& matrix, const LabelMap& labels);

struct LineSeries {
  std::vector<double> x;
  std::vector<double> y;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  double y_min = 0;
  double y_max = 1;
  // Optional vertical marker (e.g. the optimal tau); ignored when negative.
  double marker_x = -1;
};

// Non-positive x values are dropped when log_x is set.
std::string line_chart_svg(const LineSeries& series, const LineChart& chart);

std::string mcc_curve_svg(std::span<const eval::SweepPoint> points, std::size_t optimal);
std::string represented_fraction_svg(std::span<const eval::SweepPoint> points);

// Tukey box plot (whiskers at the most extreme values within 1.5 IQR).
std::string box_plot_svg(std::span<const std::vector<double>> groups,
                         std::span<const std::string> names, std::string_view title,
                         std::string_view y_label);

}  // namespace crabot::plots
