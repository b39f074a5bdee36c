#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "crabot/eval.hpp"
#include "crabot/ingest.hpp"
#include "crabot/synthetic.hpp"

namespace crabot::pipeline {

namespace fs = std::filesystem;

// Output file names inside the output directory.
inline constexpr const char* kMatrixFile = "resonance_matrix.csv";
inline constexpr const char* kLabelsFile = "labels.csv";
inline constexpr const char* kSweepFile = "sweep.csv";
inline constexpr const char* kPartitionFile = "partition.json";
inline constexpr const char* kReportFile = "report.json";
inline constexpr const char* kHeatmapFile = "resonance_heatmap.svg";
inline constexpr const char* kMccFile = "mcc_curve.svg";
inline constexpr const char* kRepresentedFile = "represented_fraction.svg";
inline constexpr const char* kBoxPlotFile = "resonance_boxplot.svg";

enum class InputFormat { Jsonl, Csv, Synthetic };

struct InputSpec {
  InputFormat format = InputFormat::Jsonl;
  fs::path path;  // jsonl / csv
  ingest::CsvMapping csv;
  eval::SyntheticParams synthetic;
};

struct GridSpec {
  // When non-empty, used verbatim.
  std::vector<double> values;
  double tau_min = 1e-4;
  double tau_max = 1.0;
  std::size_t points = 200;
  bool include_zero = true;

  std::vector<double> resolve() const;
};

struct PipelineConfig {
  std::vector<InputSpec> inputs;
  GridSpec grid;
  std::size_t permutations = 10000;
  std::uint64_t seed = 1;
  unsigned workers = 0;  // 0: CRABOT_WORKERS or hardware concurrency
  fs::path output_dir = "crabot_out";
  std::optional<fs::path> graph_dump_dir;

  // Relative paths are resolved against base_dir. Throws DataError naming
  // the offending field.
  static PipelineConfig from_json_text(std::string_view text, const fs::path& base_dir,
                                       std::string_view source = "<config>");
  static PipelineConfig load(const fs::path& path);

  // Input files exist, grid and counts are valid.
  void validate() const;
};

// Error raised by a pipeline stage; what() is prefixed with the stage name.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message)
      : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct Summary {
  eval::SweepPoint optimal;
  std::optional<double> sensitivity;
  double f_stat = 0;
  double p_value = 1;
  std::array<double, 3> group_means{};
  std::size_t users = 0;
};

// Progress lines with per-stage timing go to `log` when non-null.
Corpus load_corpus(const PipelineConfig& config, std::ostream* log = nullptr);

// corpus -> graphs -> resonance matrix; writes the matrix and label CSVs.
void matrix_stage(const PipelineConfig& config, std::ostream* log = nullptr);

// Reads the matrix and labels, writes the sweep CSV and the partition JSON of
// the optimal threshold. Empty paths default to the output directory.
void sweep_stage(const PipelineConfig& config, std::ostream* log = nullptr,
                 fs::path matrix_path = {}, fs::path labels_path = {});

// Reads the sweep, matrix and labels; runs the ANOVA and writes the report
// JSON and the SVG plots.
Summary report_stage(const PipelineConfig& config, std::ostream* log = nullptr,
                     fs::path sweep_path = {}, fs::path matrix_path = {},
                     fs::path labels_path = {});

// All three stages in order.
Summary run(const PipelineConfig& config, std::ostream* log = nullptr);

// Human-readable optimum and confusion matrix.
std::string format_summary(const Summary& summary);

}  // namespace crabot::pipeline
