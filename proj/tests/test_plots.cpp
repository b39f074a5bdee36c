#include <doctest.h>

#include "crabot/plots.hpp"

using namespace crabot;

namespace {

std::size_t count(const std::string& text, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

bool well_formed(const std::string& svg) {
  return svg.starts_with("<svg ") && svg.ends_with("</svg>\n") && count(svg, "<svg") == 1;
}

}  // namespace

TEST_CASE("heatmap marks bots and spans the ramp") {
  resonance::ResonanceMatrix m({"b1", "c1", "b2"});
  m.set(0, 2, 0.8);
  m.set(0, 1, 0.2);
  const LabelMap labels = {{"b1", UserLabel::Bot}, {"c1", UserLabel::Control}, {"b2", UserLabel::Bot}};
  const auto svg = plots::heatmap_svg(m, labels);
  CHECK(well_formed(svg));
  // Two bots, one bar on each axis.
  CHECK(count(svg, "fill=\"black\"") == 4);
  CHECK(count(svg, "fill=\"#ffeb3b\"") >= 3);
  CHECK(count(svg, "fill=\"#1543a0\"") >= 2);
  CHECK(svg.find("0.800") != std::string::npos);
}

TEST_CASE("heatmap of an empty or all-zero matrix") {
  CHECK(well_formed(plots::heatmap_svg(resonance::ResonanceMatrix(std::vector<std::string>{}), {})));
  const resonance::ResonanceMatrix zero({"a", "b"});
  CHECK(well_formed(plots::heatmap_svg(zero, {{"a", UserLabel::Bot}, {"b", UserLabel::Bot}})));
}

TEST_CASE("sweep curves") {
  std::vector<eval::SweepPoint> points(3);
  points[0].tau = 0;
  points[0].mcc = -0.2;
  points[0].represented_fraction = 1;
  points[1].tau = 0.01;
  points[1].mcc = 0.9;
  points[1].represented_fraction = 0.7;
  points[2].tau = 1;
  points[2].represented_fraction = 0;
  const auto mcc = plots::mcc_curve_svg(points, 1);
  CHECK(well_formed(mcc));
  CHECK(count(mcc, "<polyline") == 1);
  CHECK(mcc.find("#c62828") != std::string::npos);
  const auto rep = plots::represented_fraction_svg(points);
  CHECK(well_formed(rep));
  CHECK(count(rep, "<polyline") == 1);
}

TEST_CASE("line chart drops non-positive x on a log axis") {
  plots::LineChart chart;
  chart.title = "a < b & c";
  chart.log_x = true;
  const auto svg = plots::line_chart_svg({{0, 0.1, 1}, {0.5, 0.5, 0.5}}, chart);
  CHECK(well_formed(svg));
  CHECK(svg.find("a &lt; b &amp; c") != std::string::npos);
  CHECK(well_formed(plots::line_chart_svg({}, chart)));
}

TEST_CASE("box plot") {
  const std::vector<std::vector<double>> groups = {{0.1, 0.2, 0.3, 0.4, 5.0}, {}, {0.0}};
  const std::vector<std::string> names = {"bot-bot", "bot-control", "control-control"};
  const auto svg = plots::box_plot_svg(groups, names, "Resonance", "value");
  CHECK(well_formed(svg));
  CHECK(count(svg, "fill=\"#90caf9\"") == 2);
  // 5.0 lies beyond the upper whisker.
  CHECK(count(svg, "<circle") == 1);
  CHECK(svg.find("control-control") != std::string::npos);
}
