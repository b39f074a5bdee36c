#include "crabot/plots.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>


namespace crabot::plots {
namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 420;
constexpr double kLeft = 70;
constexpr double kRight = 20;
constexpr double kTop = 40;
constexpr double kBottom = 60;

std::string escape_xml(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string header(double width, double height) {
  return fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{1:.0f}\" "
      "viewBox=\"0 0 {0:.0f} {1:.0f}\" font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      width, height);
}

std::string text(double x, double y, std::string_view s, std::string_view anchor = "middle",
                 double rotate = 0) {
  if (rotate != 0) {
    return fmt::format(
        "<text x=\"{0:.2f}\" y=\"{1:.2f}\" text-anchor=\"{2}\" "
        "transform=\"rotate({3:.0f} {0:.2f} {1:.2f})\">{4}</text>\n",
        x, y, anchor, rotate, escape_xml(s));
  }
  return fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"{}\">{}</text>\n", x, y,
                     anchor, escape_xml(s));
}

// Yellow (255, 235, 59) at 0 to blue (21, 67, 160) at 1.
std::string ramp(double t) {
  t = std::clamp(t, 0.0, 1.0);
  auto mix = [t](int a, int b) {
    return static_cast<int>(std::lround(a + (b - a) * t));
  };
  return fmt::format("#{:02x}{:02x}{:02x}", mix(255, 21), mix(235, 67), mix(59, 160));
}

struct Axes {
  double x_lo, x_hi, y_lo, y_hi;
  bool log_x;

  double px(double x) const {
    const double a = log_x ? std::log10(x) : x;
    const double lo = log_x ? std::log10(x_lo) : x_lo;
    const double hi = log_x ? std::log10(x_hi) : x_hi;
    const double t = hi > lo ? (a - lo) / (hi - lo) : 0.5;
    return kLeft + t * (kWidth - kLeft - kRight);
  }
  double py(double y) const {
    const double t = y_hi > y_lo ? (y - y_lo) / (y_hi - y_lo) : 0.5;
    return kHeight - kBottom - t * (kHeight - kTop - kBottom);
  }
};

std::string frame(const Axes& axes, std::string_view title, std::string_view x_label,
                  std::string_view y_label) {
  std::string out;
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kTop, y1 = kHeight - kBottom;
  out += fmt::format(
      "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" "
      "stroke=\"black\"/>\n",
      x0, y0, x1 - x0, y1 - y0);
  out += text(kWidth / 2, kTop - 14, title);
  out += text(kWidth / 2, kHeight - 18, x_label);
  out += text(18, (y0 + y1) / 2, y_label, "middle", -90);
  for (int i = 0; i <= 4; ++i) {
    const double y = axes.y_lo + (axes.y_hi - axes.y_lo) * i / 4.0;
    out += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>\n",
                       x0 - 4, axes.py(y), x0, axes.py(y));
    out += text(x0 - 6, axes.py(y) + 4, fmt::format("{:.2f}", y), "end");
  }
  if (axes.log_x) {
    for (int e = static_cast<int>(std::ceil(std::log10(axes.x_lo) - 1e-9));
         e <= static_cast<int>(std::floor(std::log10(axes.x_hi) + 1e-9)); ++e) {
      const double x = std::pow(10.0, e);
      out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n",
                         axes.px(x), y1, y1 + 4);
      out += text(axes.px(x), y1 + 18, fmt::format("1e{}", e));
    }
  } else {
    for (int i = 0; i <= 4; ++i) {
      const double x = axes.x_lo + (axes.x_hi - axes.x_lo) * i / 4.0;
      out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n",
                         axes.px(x), y1, y1 + 4);
      out += text(axes.px(x), y1 + 18, fmt::format("{:.3g}", x));
    }
  }
  return out;
}

double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - static_cast<double>(lo));
}

}  // namespace

std::string heatmap_svg(const resonance::ResonanceMatrix& matrix, const LabelMap& labels) {
  const std::size_t n = matrix.size();
  std::vector<std::size_t> order;
  std::vector<bool> bot(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = labels.find(matrix.user_ids()[i]);
    bot[i] = it != labels.end() && it->second == UserLabel::Bot;
  }
  for (std::size_t i = 0; i < n; ++i) if (!bot[i]) order.push_back(i);
  for (std::size_t i = 0; i < n; ++i) if (bot[i]) order.push_back(i);

  double max_value = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) max_value = std::max(max_value, matrix.at(i, j));
    }
  }

  const double side = 560;
  const double bar = 10;
  const double origin = 40;
  const double cell = n ? side / static_cast<double>(n) : side;
  const double total = origin + bar + side + 70;
  std::string out = header(total, origin + bar + side + 20);
  out += text(origin + bar + side / 2, 24, "Resonance matrix (bots marked in black)");
  for (std::size_t r = 0; r < n; ++r) {
    const double y = origin + bar + cell * static_cast<double>(r);
    if (bot[order[r]]) {
      out += fmt::format("<rect x=\"{:.3f}\" y=\"{:.3f}\" width=\"{:.3f}\" height=\"{:.3f}\" fill=\"black\"/>\n",
                         origin, y, bar, cell);
      out += fmt::format("<rect x=\"{:.3f}\" y=\"{:.3f}\" width=\"{:.3f}\" height=\"{:.3f}\" fill=\"black\"/>\n",
                         y, origin, cell, bar);
    }
    for (std::size_t c = 0; c < n; ++c) {
      const double v = matrix.at(order[r], order[c]);
      const double t = max_value > 0 ? v / max_value : 0;
      out += fmt::format("<rect x=\"{:.3f}\" y=\"{:.3f}\" width=\"{:.3f}\" height=\"{:.3f}\" fill=\"{}\"/>\n",
                         origin + bar + cell * static_cast<double>(c), y, cell, cell, ramp(t));
    }
  }
  // Color scale legend.
  const double lx = origin + bar + side + 20;
  for (int k = 0; k < 50; ++k) {
    out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"14\" height=\"{:.2f}\" fill=\"{}\"/>\n",
                       lx, origin + bar + side - (k + 1) * side / 50.0, side / 50.0 + 0.5,
                       ramp(k / 49.0));
  }
  out += text(lx + 18, origin + bar + side, "0", "start");
  out += text(lx + 18, origin + bar + 10, fmt::format("{:.3f}", max_value), "start");
  out += "</svg>\n";
  return out;
}

std::string line_chart_svg(const LineSeries& series, const LineChart& chart) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < series.x.size() && i < series.y.size(); ++i) {
    if (chart.log_x && !(series.x[i] > 0)) continue;
    pts.emplace_back(series.x[i], series.y[i]);
  }
  double x_lo = 0, x_hi = 1;
  if (!pts.empty()) {
    x_lo = pts.front().first;
    x_hi = pts.back().first;
    for (const auto& [x, y] : pts) {
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
    }
  }
  if (chart.log_x && !(x_lo > 0)) x_lo = 1e-4;
  if (x_hi <= x_lo) x_hi = chart.log_x ? x_lo * 10 : x_lo + 1;
  const Axes axes{x_lo, x_hi, chart.y_min, chart.y_max, chart.log_x};

  std::string out = header(kWidth, kHeight);
  out += frame(axes, chart.title, chart.x_label, chart.y_label);
  if (chart.y_min < 0 && chart.y_max > 0) {
    out += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n",
                       kLeft, axes.py(0), kWidth - kRight, axes.py(0));
  }
  if (chart.marker_x >= 0 && (!chart.log_x || chart.marker_x > 0)) {
    out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"#c62828\" stroke-dasharray=\"5 3\"/>\n",
                       axes.px(chart.marker_x), kTop, kHeight - kBottom);
  }
  if (!pts.empty()) {
    out += "<polyline fill=\"none\" stroke=\"#1565c0\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) out.push_back(' ');
      out += fmt::format("{:.2f},{:.2f}", axes.px(pts[i].first), axes.py(pts[i].second));
    }
    out += "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string mcc_curve_svg(std::span<const eval::SweepPoint> points, std::size_t optimal) {
  LineSeries series;
  for (const auto& p : points) {
    series.x.push_back(p.tau);
    series.y.push_back(p.mcc);
  }
  LineChart chart{"MCC by threshold", "tau", "MCC", true, -1, 1, -1};
  if (optimal < points.size()) chart.marker_x = points[optimal].tau;
  return line_chart_svg(series, chart);
}

std::string represented_fraction_svg(std::span<const eval::SweepPoint> points) {
  LineSeries series;
  for (const auto& p : points) {
    series.x.push_back(p.tau);
    series.y.push_back(p.represented_fraction);
  }
  return line_chart_svg(series, {"Represented fraction of users by threshold", "tau",
                                 "represented fraction", true, 0, 1, -1});
}

std::string box_plot_svg(std::span<const std::vector<double>> groups,
                         std::span<const std::string> names, std::string_view title,
                         std::string_view y_label) {
  double y_hi = 0;
  for (const auto& g : groups) {
    for (double v : g) y_hi = std::max(y_hi, v);
  }
  if (y_hi <= 0) y_hi = 1;
  const Axes axes{0, 1, 0, y_hi, false};
  std::string out = header(kWidth, kHeight);
  // Frame without x ticks: categories replace them.
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kTop, y1 = kHeight - kBottom;
  out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" stroke=\"black\"/>\n",
                     x0, y0, x1 - x0, y1 - y0);
  out += text(kWidth / 2, kTop - 14, title);
  out += text(18, (y0 + y1) / 2, y_label, "middle", -90);
  for (int i = 0; i <= 4; ++i) {
    const double y = y_hi * i / 4.0;
    out += text(x0 - 6, axes.py(y) + 4, fmt::format("{:.3f}", y), "end");
  }
  const double slot = (x1 - x0) / static_cast<double>(std::max<std::size_t>(groups.size(), 1));
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double cx = x0 + slot * (static_cast<double>(g) + 0.5);
    const double half = slot * 0.2;
    if (g < names.size()) out += text(cx, y1 + 20, names[g]);
    std::vector<double> v = groups[g];
    if (v.empty()) continue;
    std::sort(v.begin(), v.end());
    const double q1 = quantile(v, 0.25), med = quantile(v, 0.5), q3 = quantile(v, 0.75);
    const double iqr = q3 - q1;
    double lo = q1, hi = q3;
    for (double x : v) {
      if (x >= q1 - 1.5 * iqr) { lo = x; break; }
    }
    for (auto it = v.rbegin(); it != v.rend(); ++it) {
      if (*it <= q3 + 1.5 * iqr) { hi = *it; break; }
    }
    out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n",
                       cx, axes.py(lo), axes.py(q1));
    out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n",
                       cx, axes.py(q3), axes.py(hi));
    out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"#90caf9\" stroke=\"black\"/>\n",
                       cx - half, axes.py(q3), 2 * half, std::max(axes.py(q1) - axes.py(q3), 0.5));
    out += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\" stroke-width=\"2\"/>\n",
                       cx - half, axes.py(med), cx + half, axes.py(med));
    for (double x : {lo, hi}) {
      out += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>\n",
                         cx - half / 2, axes.py(x), cx + half / 2, axes.py(x));
    }
    // Outliers, at most one glyph per pixel row.
    double last_y = -1;
    for (double x : v) {
      if (x >= lo && x <= hi) continue;
      const double y = std::round(axes.py(x));
      if (y == last_y) continue;
      last_y = y;
      out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2\" fill=\"none\" stroke=\"#555\"/>\n", cx, y);
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace crabot::plots
