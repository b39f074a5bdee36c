// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>

#include "crabot/community.hpp"
#include "crabot/cra_graph.hpp"
#include "crabot/eval.hpp"
#include "crabot/io.hpp"
#include "crabot/pipeline.hpp"
#include "crabot/random.hpp"
#include "crabot/resonance.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace crabot;

namespace {

// Pinned tolerances and budgets.
constexpr double kBetweennessTol = 1e-9;
constexpr double kResonanceTol = 1e-12;
constexpr double kModularityTol = 1e-9;
constexpr double kJointMcc = 0.5216;
constexpr double kJointTol = 0.0005;
constexpr double kAntisymmetryTol = 1e-12;
constexpr double kMinMcc = 0.8;
constexpr double kMinSensitivity = 0.9;
constexpr double kAlpha = 0.05;
constexpr double kBudget1 = 10, kBudget2 = 10, kBudget3 = 30, kBudget6 = 60;
constexpr int kGraphs1 = 250, kPairs2 = 250, kGraphs3 = 80, kCounts4 = 200, kMatrices5 = 40;

const fs::path kTmp = CRABOT_TEST_TMP;

int failures = 0;

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(const std::string& id, bool ok, const std::string& detail) {
  fmt::print("{} criterion {}: {}\n", ok ? "PASS" : "FAIL", id, detail);
  std::fflush(stdout);
  failures += !ok;
}

void betweenness_oracle() {
  const auto start = Clock::now();
  Rng rng(1001);
  double worst = 0;
  for (int t = 0; t < kGraphs1; ++t) {
    const std::size_t n = 1 + rng.below(10);
    const double p = 0.3 + 0.4 * rng.unit();
    const auto g = oracle::random_graph(rng, n, p);
    const auto fast = cra::betweenness(g);
    const auto slow = oracle::betweenness(oracle::adjacency_of(g));
    for (std::size_t v = 0; v < n; ++v) worst = std::max(worst, std::abs(fast[v] - slow[v]));
  }
  const double elapsed = seconds_since(start);
  report("1 (betweenness oracle)", worst <= kBetweennessTol && elapsed < kBudget1,
         fmt::format("{} graphs, max deviation {:.3g} (tol {:g}), {:.2f} s (budget {:g} s)",
                     kGraphs1, worst, kBetweennessTol, elapsed, kBudget1));
}

void resonance_properties() {
  const auto start = Clock::now();
  Rng rng(2002);
  bool symmetric = true;
  double max_value = 0, self_err = 0, disjoint_max = 0, scale_err = 0;
  for (int t = 0; t < kPairs2; ++t) {
    auto a = oracle::random_graph(rng, 2 + rng.below(9), 0.2 + 0.6 * rng.unit());
    auto b = oracle::random_graph(rng, 2 + rng.below(9), 0.2 + 0.6 * rng.unit());
    a.set_centrality(cra::betweenness(a));
    b.set_centrality(cra::betweenness(b));
    const double ab = resonance::normalized_resonance(a, b);
    symmetric &= ab == resonance::normalized_resonance(b, a);
    max_value = std::max(max_value, ab);
    if (resonance::word_resonance(a, a) > 0) {
      self_err = std::max(self_err, std::abs(resonance::normalized_resonance(a, a) - 1.0));
    }
    // Same structure under fresh names shares no vocabulary.
    std::vector<std::string> names;
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& v : b.vertices()) names.push_back("other_" + v);
    for (const auto& [u, v] : b.edges()) edges.emplace_back("other_" + b.lemma(u), "other_" + b.lemma(v));
    auto renamed = cra::DiscursiveGraph::from_edges(names, edges);
    renamed.set_centrality(b.centrality());
    disjoint_max = std::max(disjoint_max, resonance::normalized_resonance(a, renamed));
    const double factor = 0.01 + 100 * rng.unit();
    auto scaled = a.centrality();
    for (auto& x : scaled) x *= factor;
    auto a2 = a;
    a2.set_centrality(scaled);
    scale_err = std::max(scale_err, std::abs(resonance::normalized_resonance(a2, b) - ab));
  }
  const double elapsed = seconds_since(start);
  const bool ok = symmetric && max_value <= 1 + kResonanceTol && self_err <= kResonanceTol &&
                  disjoint_max == 0 && scale_err <= kResonanceTol && elapsed < kBudget2;
  report("2 (resonance properties)", ok,
         fmt::format("{} pairs, symmetric {}, max {:.15g}, self error {:.3g}, disjoint max {:g}, "
                     "scaling error {:.3g} (tol {:g}), {:.2f} s (budget {:g} s)",
                     kPairs2, symmetric ? "exact" : "NO", max_value, self_err, disjoint_max,
                     scale_err, kResonanceTol, elapsed, kBudget2));
}

void community_detection() {
  const auto start = Clock::now();
  const auto bridge = community::AssociationGraph::from_edges(
      6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}});
  const auto part = community::detect_communities(bridge);
  const bool fixture =
      part.communities == std::vector<std::vector<std::size_t>>{{0, 1, 2}, {3, 4, 5}} &&
      std::abs(part.modularity - 5.0 / 14.0) <= kModularityTol;

  Rng rng(3003);
  bool bounded = true, valid = true;
  double worst_gap = 0;
  int with_edges = 0;
  for (int t = 0; t < kGraphs3; ++t) {
    const std::size_t n = 2 + rng.below(7);
    const auto g = oracle::random_association(rng, n, 0.2 + 0.6 * rng.unit());
    const auto greedy = community::detect_communities(g);
    try {
      community::validate(greedy, n);
    } catch (const std::exception&) {
      valid = false;
    }
    if (g.edge_count() == 0) continue;
    ++with_edges;
    const double best = oracle::best_modularity(g);
    bounded &= greedy.modularity <= best + kModularityTol;
    worst_gap = std::max(worst_gap, best - greedy.modularity);
  }
  const double elapsed = seconds_since(start);
  report("3 (community detection)", fixture && bounded && valid && with_edges >= 50 && elapsed < kBudget3,
         fmt::format("bridge fixture {} (Q = {:.12f}), {} random graphs with edges, greedy <= optimum {}, "
                     "largest shortfall {:.4f}, partitions valid {}, {:.2f} s (budget {:g} s)",
                     fixture ? "exact" : "WRONG", part.modularity, with_edges, bounded ? "yes" : "NO",
                     worst_gap, valid ? "yes" : "NO", elapsed, kBudget3));
}

void mcc_formula() {
  const bool perfect = eval::mcc(eval::ConfusionMatrix{37, 0, 0, 41}) == 1.0;
  Rng rng(4004);
  double worst = 0;
  int tested = 0;
  while (tested < kCounts4) {
    const eval::ConfusionMatrix c{rng.below(100), rng.below(100), rng.below(100), rng.below(100)};
    if (c.tp + c.fp == 0 || c.tp + c.fn == 0 || c.tn + c.fp == 0 || c.tn + c.fn == 0) continue;
    const eval::ConfusionMatrix swapped{c.fn, c.tp, c.tn, c.fp};
    worst = std::max(worst, std::abs(eval::mcc(c) + eval::mcc(swapped)));
    ++tested;
  }
  const double joint = eval::mcc(0.840, 0.064, 0.033, 0.064);
  report("4 (MCC formula)",
         perfect && worst <= kAntisymmetryTol && std::abs(joint - kJointMcc) <= kJointTol,
         fmt::format("perfect classifier {}, antisymmetry error {:.3g} over {} matrices, "
                     "joints (0.840, 0.064, 0.033, 0.064) give {:.4f} (expected {} +/- {})",
                     perfect ? "= 1" : "!= 1", worst, tested, joint, kJointMcc, kJointTol));
}

void threshold_monotonicity() {
  Rng rng(5005);
  const auto grid = eval::default_grid();
  bool subset = true, isolated = true;
  std::size_t pairs = 0;
  for (int t = 0; t < kMatrices5; ++t) {
    const std::size_t n = 5 + rng.below(25);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i));
    resonance::ResonanceMatrix m(ids);
    // Heavy mass near zero so the low end of the grid matters.
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) m.set(i, j, std::pow(rng.unit(), 4.0));
    auto prev = community::threshold_association(m, grid[0]);
    for (std::size_t k = 1; k < grid.size(); ++k) {
      const auto next = community::threshold_association(m, grid[k]);
      const auto wide = prev.edges();
      for (const auto& e : next.edges()) subset &= std::binary_search(wide.begin(), wide.end(), e);
      isolated &= next.isolated_count() >= prev.isolated_count();
      prev = next;
      ++pairs;
    }
  }
  report("5 (threshold monotonicity)", subset && isolated,
         fmt::format("{} adjacent grid pairs over {} matrices, edge subsets {}, isolated counts "
                     "non-decreasing {}",
                     pairs, kMatrices5, subset ? "hold" : "VIOLATED", isolated ? "hold" : "VIOLATED"));
}

std::string synthetic_config(const std::string& output_dir, const std::string& extra) {
  return fmt::format(
      R"({{"inputs": [{{"format": "synthetic", "n_bots": 40, "n_controls": 40, "bot_vocab": 30,
                       "control_vocab": 3000, "phrases_per_user": 60, "seed": 1{}}}],
          "anova": {{"permutations": 10000, "seed": 1}},
          "output_dir": "{}"}})",
      extra, output_dir);
}

pipeline::PipelineConfig config_in(const fs::path& dir, const std::string& text) {
  fs::create_directories(dir);
  io::write_text(dir / "config.json", text);
  return pipeline::PipelineConfig::load(dir / "config.json");
}

void end_to_end() {
  const auto dir = kTmp / "e2e";
  fs::remove_all(dir);
  const auto config = config_in(dir, synthetic_config("out", ""));
  const auto start = Clock::now();
  const auto summary = pipeline::run(config);
  const double elapsed = seconds_since(start);
  const auto points = io::sweep_from_csv(io::read_text(config.output_dir / pipeline::kSweepFile));

  const auto& means = summary.group_means;
  report("6a (bot-bot resonance pattern)",
         means[0] > means[1] && means[0] > means[2] && summary.p_value < kAlpha,
         fmt::format("means bot-bot {:.6f}, bot-control {:.6f}, control-control {:.6f}; "
                     "F = {:.2f}, permutation p = {:.6f} (alpha {})",
                     means[0], means[1], means[2], summary.f_stat, summary.p_value, kAlpha));

  const double sens = summary.sensitivity.value_or(0.0);
  const auto& c = summary.optimal.confusion;
  report("6b (optimal MCC and sensitivity)",
         summary.optimal.mcc >= kMinMcc && sens >= kMinSensitivity,
         fmt::format("optimal tau {:g}: MCC {:.4f} (need >= {}), sensitivity {:.4f} (need >= {}), "
                     "tp {} fp {} fn {} tn {}. Controls on disjoint vocabulary slices never "
                     "resonate, so they join a community only at tau = 0",
                     summary.optimal.tau, summary.optimal.mcc, kMinMcc, sens, kMinSensitivity, c.tp,
                     c.fp, c.fn, c.tn));

  bool monotone = true;
  for (std::size_t i = 1; i < points.size(); ++i)
    monotone &= points[i].represented_fraction <= points[i - 1].represented_fraction;
  report("6c (represented fraction non-increasing)", monotone,
         fmt::format("{} grid points, from {:.4f} to {:.4f}", points.size(),
                     points.front().represented_fraction, points.back().represented_fraction));
  report("6 runtime", elapsed < kBudget6,
         fmt::format("full pipeline {:.2f} s (budget {:g} s)", elapsed, kBudget6));

  // Same parameters plus an everyday vocabulary shared by controls.
  const auto ext = config_in(dir / "shared",
                             synthetic_config("out", R"(, "common_vocab": 200, "control_common_share": 0.3)"));
  const auto s = pipeline::run(ext);
  fmt::print("INFO criterion 6b with controls sharing a 200-word vocabulary (share 0.3): "
             "optimal tau {:g}, MCC {:.4f}, sensitivity {:.4f}, p = {:.6f}\n",
             s.optimal.tau, s.optimal.mcc, s.sensitivity.value_or(0.0), s.p_value);
}

void determinism() {
  const auto dir = kTmp / "determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto config = dir / "config.json";
  io::write_text(config, synthetic_config("out", ""));
  std::string first_report, first_sweep;
  bool ok = true;
  for (int run = 0; run < 2; ++run) {
    const std::string command = fmt::format("\"{}\" run -c \"{}\" > \"{}\" 2>&1", CRABOT_CLI,
                                            config.string(), (dir / "log.txt").string());
    ok &= std::system(command.c_str()) == 0;
    if (!ok) break;
    const auto report_text = io::read_text(dir / "out" / pipeline::kReportFile);
    const auto sweep_text = io::read_text(dir / "out" / pipeline::kSweepFile);
    if (run == 0) {
      first_report = report_text;
      first_sweep = sweep_text;
      fs::remove_all(dir / "out");
    } else {
      ok &= report_text == first_report && sweep_text == first_sweep;
    }
  }
  report("7 (determinism)", ok,
         fmt::format("two CLI runs, report JSON ({} bytes) and sweep CSV ({} bytes) {}",
                     first_report.size(), first_sweep.size(), ok ? "byte-identical" : "DIFFER"));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> checks = {
      betweenness_oracle, resonance_properties, community_detection, mcc_formula,
      threshold_monotonicity, end_to_end, determinism};
  for (const auto& check : checks) {
    try {
      check();
    } catch (const std::exception& e) {
      fmt::print("FAIL criterion check aborted: {}\n", e.what());
      ++failures;
    }
  }
  fmt::print("{} criterion line(s) failed\n", failures);
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
