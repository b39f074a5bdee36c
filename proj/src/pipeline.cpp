#include "crabot/pipeline.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <ostream>
#include <set>

#include <json.hpp>

#include "crabot/anova.hpp"
#include "crabot/cra_graph.hpp"
#include "crabot/error.hpp"
#include "crabot/io.hpp"
#include "crabot/parallel.hpp"
#include "crabot/plots.hpp"
#include "crabot/resonance.hpp"
#include "crabot/textproc.hpp"

namespace crabot {

namespace pipeline {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// Field-path aware accessors for the config document.
class Fields {
 public:
  Fields(const json& object, std::string path, std::string_view source)
      : object_(object), path_(std::move(path)), source_(source) {
    if (!object_.is_object()) fail(path_.empty() ? "config" : path_, "must be a JSON object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [key, value] : object_.items()) {
      if (!allowed.count(key)) fail(name(key), "unknown field");
    }
  }

  bool has(const char* key) const { return object_.contains(key) && !object_[key].is_null(); }
  const json& raw(const char* key) const { return object_[key]; }

  std::string string(const char* key) const {
    const auto& v = require(key);
    if (!v.is_string()) fail(name(key), "must be a string");
    return v.get<std::string>();
  }
  double number(const char* key) const {
    const auto& v = require(key);
    if (!v.is_number()) fail(name(key), "must be a number");
    return v.get<double>();
  }
  std::uint64_t count(const char* key) const {
    const auto& v = require(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      fail(name(key), "must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }
  bool boolean(const char* key) const {
    const auto& v = require(key);
    if (!v.is_boolean()) fail(name(key), "must be true or false");
    return v.get<bool>();
  }

  std::string name(std::string_view key) const {
    return path_.empty() ? std::string(key) : fmt::format("{}.{}", path_, key);
  }
  [[noreturn]] void fail(std::string_view field, std::string_view what) const {
    throw DataError(fmt::format("{}: field \"{}\" {}", source_, field, what));
  }

 private:
  const json& require(const char* key) const {
    if (!has(key)) fail(name(key), "is required");
    return object_[key];
  }

  const json& object_;
  std::string path_;
  std::string_view source_;
};

using Clock = std::chrono::steady_clock;

class StageTimer {
 public:
  StageTimer(std::ostream* log, std::string stage) : log_(log), stage_(std::move(stage)) {
    if (log_) *log_ << fmt::format("[{}] started\n", stage_) << std::flush;
  }
  void note(std::string_view message) {
    if (log_) *log_ << fmt::format("[{}] {}\n", stage_, message) << std::flush;
  }
  void done() {
    const double seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    if (log_) *log_ << fmt::format("[{}] done in {:.2f} s\n", stage_, seconds) << std::flush;
  }
  const std::string& stage() const { return stage_; }

 private:
  std::ostream* log_;
  std::string stage_;
  Clock::time_point start_ = Clock::now();
};

// Runs body, rethrowing library errors as StageError for `stage`.
template <typename Body>
auto in_stage(const std::string& stage, Body&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

fs::path or_default(const fs::path& given, const fs::path& dir, const char* name) {
  return given.empty() ? dir / name : given;
}

InputSpec parse_input(const json& entry, const std::string& path, const fs::path& base_dir,
                      std::string_view source) {
  Fields f(entry, path, source);
  InputSpec spec;
  const std::string format = f.string("format");
  if (format == "jsonl") {
    f.allow({"format", "path"});
    spec.format = InputFormat::Jsonl;
    spec.path = base_dir / f.string("path");
  } else if (format == "csv") {
    f.allow({"format", "path", "user_column", "text_column", "label_column", "label"});
    spec.format = InputFormat::Csv;
    spec.path = base_dir / f.string("path");
    spec.csv.user_column = f.string("user_column");
    spec.csv.text_column = f.string("text_column");
    if (f.has("label_column")) spec.csv.label_column = f.string("label_column");
    if (f.has("label")) {
      try {
        spec.csv.fixed_label = parse_label(f.string("label"));
      } catch (const DataError& e) {
        f.fail(f.name("label"), e.what());
      }
    }
    if (spec.csv.label_column.has_value() == spec.csv.fixed_label.has_value()) {
      f.fail(f.name("label"), "or label_column: exactly one must be given");
    }
  } else if (format == "synthetic") {
    f.allow({"format", "n_bots", "n_controls", "bot_vocab", "control_vocab",
             "phrases_per_user", "seed", "common_vocab", "control_common_share"});
    spec.format = InputFormat::Synthetic;
    auto& p = spec.synthetic;
    p.n_bots = f.count("n_bots");
    p.n_controls = f.count("n_controls");
    p.bot_vocab = f.count("bot_vocab");
    p.control_vocab = f.count("control_vocab");
    p.phrases_per_user = f.count("phrases_per_user");
    p.seed = f.count("seed");
    if (f.has("common_vocab")) p.common_vocab = f.count("common_vocab");
    if (f.has("control_common_share")) p.control_common_share = f.number("control_common_share");
  } else {
    f.fail(f.name("format"), "must be one of jsonl, csv, synthetic");
  }
  return spec;
}

ordered_json finite_or_null(double x) {
  return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr);
}

}  // namespace

std::vector<double> GridSpec::resolve() const {
  if (!values.empty()) return values;
  return eval::geometric_grid(tau_min, tau_max, points, include_zero);
}

PipelineConfig PipelineConfig::from_json_text(std::string_view text, const fs::path& base_dir,
                                              std::string_view source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(fmt::format("{}: malformed JSON: {}", source, e.what()));
  }
  Fields f(doc, "", source);
  f.allow({"inputs", "grid", "anova", "workers", "output_dir", "graph_dump_dir"});

  PipelineConfig config;
  if (!f.has("inputs") || !f.raw("inputs").is_array() || f.raw("inputs").empty()) {
    f.fail("inputs", "must be a non-empty array");
  }
  const auto& inputs = f.raw("inputs");
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    config.inputs.push_back(parse_input(inputs[i], fmt::format("inputs[{}]", i), base_dir, source));
  }
  if (f.has("grid")) {
    Fields g(f.raw("grid"), "grid", source);
    g.allow({"values", "tau_min", "tau_max", "points", "include_zero"});
    if (g.has("values")) {
      const auto& values = g.raw("values");
      if (!values.is_array()) g.fail("grid.values", "must be an array of numbers");
      for (const auto& v : values) {
        if (!v.is_number()) g.fail("grid.values", "must be an array of numbers");
        config.grid.values.push_back(v.get<double>());
      }
    }
    if (g.has("tau_min")) config.grid.tau_min = g.number("tau_min");
    if (g.has("tau_max")) config.grid.tau_max = g.number("tau_max");
    if (g.has("points")) config.grid.points = g.count("points");
    if (g.has("include_zero")) config.grid.include_zero = g.boolean("include_zero");
  }
  if (f.has("anova")) {
    Fields a(f.raw("anova"), "anova", source);
    a.allow({"permutations", "seed"});
    if (a.has("permutations")) config.permutations = a.count("permutations");
    if (a.has("seed")) config.seed = a.count("seed");
  }
  if (f.has("workers")) config.workers = static_cast<unsigned>(f.count("workers"));
  if (f.has("output_dir")) config.output_dir = base_dir / f.string("output_dir");
  else config.output_dir = base_dir / config.output_dir;
  if (f.has("graph_dump_dir")) config.graph_dump_dir = base_dir / f.string("graph_dump_dir");
  return config;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  if (!fs::exists(path)) throw DataError(fmt::format("config file {} does not exist", path.string()));
  return from_json_text(io::read_text(path), path.parent_path(), path.string());
}

void PipelineConfig::validate() const {
  if (inputs.empty()) throw DataError("config: no inputs");
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto& in = inputs[i];
    if (in.format != InputFormat::Synthetic && !fs::exists(in.path)) {
      throw DataError(fmt::format("inputs[{}].path: input file {} does not exist", i, in.path.string()));
    }
  }
  try {
    eval::validate_grid(grid.resolve());
  } catch (const Error& e) {
    throw DataError(fmt::format("grid: {}", e.what()));
  }
}

Corpus load_corpus(const PipelineConfig& config, std::ostream* log) {
  return in_stage("ingest", [&] {
    StageTimer timer(log, "ingest");
    config.validate();
    std::vector<Corpus> parts;
    for (const auto& in : config.inputs) {
      switch (in.format) {
        case InputFormat::Jsonl:
          parts.push_back(ingest::load_jsonl(in.path));
          break;
        case InputFormat::Csv:
          parts.push_back(ingest::load_csv(in.path, in.csv));
          break;
        case InputFormat::Synthetic:
          parts.push_back(eval::generate_synthetic_corpus(in.synthetic));
          break;
      }
      timer.note(fmt::format("input {}: {} users", parts.size() - 1, parts.back().size()));
    }
    Corpus corpus = ingest::merge(parts);
    timer.note(fmt::format("{} users total", corpus.size()));
    timer.done();
    return corpus;
  });
}

void matrix_stage(const PipelineConfig& config, std::ostream* log) {
  const Corpus corpus = load_corpus(config, log);
  in_stage("matrix", [&] {
    StageTimer timer(log, "matrix");
    const textproc::TextProcessor processor;
    std::vector<cra::DiscursiveGraph> graphs(corpus.size());
    parallel_for(corpus.size(), config.workers, [&](std::size_t u) {
      graphs[u] = cra::analyze(processor.user_phrases(corpus.users[u].texts));
    });
    timer.note(fmt::format("built {} discursive graphs", graphs.size()));
    if (config.graph_dump_dir) {
      fs::create_directories(*config.graph_dump_dir);
      for (std::size_t u = 0; u < graphs.size(); ++u) {
        cra::write_edge_list(graphs[u],
                             *config.graph_dump_dir / (corpus.users[u].user_id + ".tsv"));
      }
    }
    std::vector<std::string> ids;
    for (const auto& user : corpus.users) ids.push_back(user.user_id);
    const auto matrix = resonance::resonance_matrix(graphs, std::move(ids), config.workers);
    timer.note(fmt::format("{} user pairs", corpus.size() * (corpus.size() - (corpus.size() > 0)) / 2));
    fs::create_directories(config.output_dir);
    io::write_text(config.output_dir / kMatrixFile, io::matrix_to_csv(matrix));
    io::write_text(config.output_dir / kLabelsFile, io::labels_to_csv(corpus));
    timer.done();
  });
}

void sweep_stage(const PipelineConfig& config, std::ostream* log, fs::path matrix_path,
                 fs::path labels_path) {
  in_stage("sweep", [&] {
    StageTimer timer(log, "sweep");
    matrix_path = or_default(matrix_path, config.output_dir, kMatrixFile);
    labels_path = or_default(labels_path, config.output_dir, kLabelsFile);
    const auto matrix = io::matrix_from_csv(io::read_text(matrix_path), matrix_path.string());
    const auto labels = io::labels_from_csv(io::read_text(labels_path), labels_path.string());
    const auto grid = config.grid.resolve();
    const auto result = eval::sweep(matrix, labels, grid, config.workers);
    timer.note(fmt::format("{} thresholds evaluated", result.points.size()));
    // Pick the optimum from the exported numbers so the report stage, which
    // only sees the CSV, agrees with the partition written here.
    const std::string sweep_csv = io::sweep_to_csv(result.points);
    const std::size_t optimal = eval::optimal_index(io::sweep_from_csv(sweep_csv));
    const auto best = eval::evaluate_tau(matrix, labels, result.points[optimal].tau);
    fs::create_directories(config.output_dir);
    io::write_text(config.output_dir / kSweepFile, sweep_csv);
    io::write_text(config.output_dir / kPartitionFile,
                   io::partition_to_json(best.partition, matrix.user_ids(), best.point.tau));
    timer.done();
  });
}

Summary report_stage(const PipelineConfig& config, std::ostream* log, fs::path sweep_path,
                     fs::path matrix_path, fs::path labels_path) {
  return in_stage("report", [&] {
    StageTimer timer(log, "report");
    sweep_path = or_default(sweep_path, config.output_dir, kSweepFile);
    matrix_path = or_default(matrix_path, config.output_dir, kMatrixFile);
    labels_path = or_default(labels_path, config.output_dir, kLabelsFile);
    const auto points = io::sweep_from_csv(io::read_text(sweep_path), sweep_path.string());
    const auto matrix = io::matrix_from_csv(io::read_text(matrix_path), matrix_path.string());
    const auto labels = io::labels_from_csv(io::read_text(labels_path), labels_path.string());
    const std::size_t optimal = eval::optimal_index(points);

    const auto anova =
        eval::anova_interactions(matrix, labels, config.permutations, config.seed, config.workers);
    timer.note(fmt::format("ANOVA F = {:.4f}, permutation p = {:.6f}", anova.f_stat, anova.p_value));

    Summary summary;
    summary.optimal = points[optimal];
    summary.users = matrix.size();
    if (summary.optimal.confusion.tp + summary.optimal.confusion.fn > 0) {
      summary.sensitivity = eval::sensitivity(summary.optimal.confusion);
    }
    summary.f_stat = anova.f_stat;
    summary.p_value = anova.p_value;
    summary.group_means = anova.group_means;

    std::size_t bots = 0, controls = 0;
    for (const auto& id : matrix.user_ids()) {
      auto it = labels.find(id);
      if (it == labels.end()) continue;
      bots += it->second == UserLabel::Bot;
      controls += it->second == UserLabel::Control;
    }

    ordered_json report;
    report["users"] = {{"total", matrix.size()}, {"bots", bots}, {"controls", controls}};
    report["grid"] = {{"points", points.size()},
                      {"tau_min", points.front().tau},
                      {"tau_max", points.back().tau}};
    const auto& best = summary.optimal;
    const auto joint = best.confusion.joint();
    report["optimal"] = {
        {"tau", best.tau},
        {"mcc", best.mcc},
        {"sensitivity", summary.sensitivity ? ordered_json(*summary.sensitivity) : ordered_json(nullptr)},
        {"represented_fraction", best.represented_fraction},
        {"community_count", best.community_count},
        {"confusion", {{"tp", best.confusion.tp}, {"fp", best.confusion.fp},
                       {"fn", best.confusion.fn}, {"tn", best.confusion.tn}}},
        {"joint", {{"tp", joint.tp}, {"fp", joint.fp}, {"fn", joint.fn}, {"tn", joint.tn}}}};
    const char* names[] = {"bot_bot", "bot_control", "control_control"};
    ordered_json groups = ordered_json::object();
    for (int g = 0; g < 3; ++g) {
      groups[names[g]] = {{"n", anova.group_sizes[g]}, {"mean", anova.group_means[g]}};
    }
    report["anova"] = {{"f_stat", finite_or_null(anova.f_stat)},
                       {"p_value", anova.p_value},
                       {"permutations", anova.permutations},
                       {"seed", anova.seed},
                       {"groups", groups}};
    report["mcc_definition"] =
        "(TP*TN - FP*FN) / sqrt((TP+FP)(TP+FN)(TN+FP)(TN+FN)) over represented users; "
        "0 when any factor is 0";
    report["artifacts"] = {kMatrixFile, kLabelsFile, kSweepFile, kPartitionFile,
                           kHeatmapFile, kMccFile, kRepresentedFile, kBoxPlotFile};

    fs::create_directories(config.output_dir);
    io::write_text(config.output_dir / kReportFile, report.dump(2) + "\n");

    io::write_text(config.output_dir / kHeatmapFile, plots::heatmap_svg(matrix, labels));
    io::write_text(config.output_dir / kMccFile, plots::mcc_curve_svg(points, optimal));
    io::write_text(config.output_dir / kRepresentedFile, plots::represented_fraction_svg(points));
    const auto interaction = eval::interaction_groups(matrix, labels);
    const std::vector<std::string> group_names = {"bot-bot", "bot-control", "control-control"};
    io::write_text(config.output_dir / kBoxPlotFile,
                   plots::box_plot_svg(interaction, group_names, "Resonance by interaction type",
                                       "normalized resonance"));
    timer.done();
    return summary;
  });
}

Summary run(const PipelineConfig& config, std::ostream* log) {
  matrix_stage(config, log);
  sweep_stage(config, log);
  return report_stage(config, log);
}

std::string format_summary(const Summary& s) {
  const auto& p = s.optimal;
  const auto& c = p.confusion;
  std::string out;
  out += fmt::format("optimal tau            {:.6g}\n", p.tau);
  out += fmt::format("MCC                    {:.4f}\n", p.mcc);
  out += fmt::format("sensitivity            {}\n",
                     s.sensitivity ? fmt::format("{:.4f}", *s.sensitivity) : std::string("n/a"));
  out += fmt::format("represented fraction   {:.4f}  ({} communities of size > 1)\n",
                     p.represented_fraction, p.community_count);
  out += "confusion matrix (rows predicted, columns true)\n";
  out += fmt::format("                 bot   control\n");
  out += fmt::format("  bot      {:>9} {:>9}\n", c.tp, c.fp);
  out += fmt::format("  control  {:>9} {:>9}\n", c.fn, c.tn);
  out += fmt::format("ANOVA F = {:.4f}, permutation p = {:.6f}\n", s.f_stat, s.p_value);
  out += fmt::format("mean resonance: bot-bot {:.6f}, bot-control {:.6f}, control-control {:.6f}\n",
                     s.group_means[0], s.group_means[1], s.group_means[2]);
  return out;
}

}  // namespace pipeline
}  // namespace crabot
