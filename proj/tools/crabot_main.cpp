// crabot command line: full runs, stage-wise runs and synthetic corpora.

#include <fmt/format.h>

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "crabot/error.hpp"
#include "crabot/ingest.hpp"
#include "crabot/pipeline.hpp"
#include "crabot/synthetic.hpp"

namespace {

namespace fs = std::filesystem;
using crabot::pipeline::PipelineConfig;

struct Overrides {
  std::string config;
  std::string output_dir;
  std::optional<unsigned> workers;
  std::optional<std::size_t> permutations;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> graph_dump_dir;
};

void add_common(CLI::App* cmd, Overrides& o, bool config_required) {
  auto* opt = cmd->add_option("-c,--config", o.config, "pipeline config JSON");
  if (config_required) opt->required();
  opt->check(CLI::ExistingFile);
  cmd->add_option("-o,--output-dir", o.output_dir, "output directory (overrides config)");
  cmd->add_option("-j,--workers", o.workers, "worker threads (0: CRABOT_WORKERS or all cores)");
}

void add_anova(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--permutations", o.permutations, "ANOVA permutation count");
  cmd->add_option("--seed", o.seed, "ANOVA permutation seed");
}

PipelineConfig resolve(const Overrides& o) {
  PipelineConfig config;
  if (!o.config.empty()) {
    try {
      config = PipelineConfig::load(o.config);
    } catch (const std::exception& e) {
      throw crabot::pipeline::StageError("config", e.what());
    }
  }
  if (!o.output_dir.empty()) config.output_dir = o.output_dir;
  if (o.workers) config.workers = *o.workers;
  if (o.permutations) config.permutations = *o.permutations;
  if (o.seed) config.seed = *o.seed;
  if (o.graph_dump_dir) config.graph_dump_dir = fs::path(*o.graph_dump_dir);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discursive bot detection using centering resonance analysis"};
  app.require_subcommand(1);

  Overrides run_opts, matrix_opts, sweep_opts, report_opts;
  std::string sweep_matrix, sweep_labels, report_sweep, report_matrix, report_labels;

  auto* run = app.add_subcommand("run", "run every stage from a config file");
  add_common(run, run_opts, true);
  add_anova(run, run_opts);
  run->add_option("--dump-graphs", run_opts.graph_dump_dir, "write per-user edge lists here");

  auto* matrix = app.add_subcommand("matrix", "corpus to resonance matrix and labels CSV");
  add_common(matrix, matrix_opts, true);
  matrix->add_option("--dump-graphs", matrix_opts.graph_dump_dir, "write per-user edge lists here");

  auto* sweep = app.add_subcommand("sweep", "resonance matrix to sweep CSV and partition JSON");
  add_common(sweep, sweep_opts, false);
  sweep->add_option("--matrix", sweep_matrix, "resonance matrix CSV")->check(CLI::ExistingFile);
  sweep->add_option("--labels", sweep_labels, "labels CSV")->check(CLI::ExistingFile);

  auto* report = app.add_subcommand("report", "sweep and matrix to report JSON and plots");
  add_common(report, report_opts, false);
  add_anova(report, report_opts);
  report->add_option("--sweep", report_sweep, "sweep CSV")->check(CLI::ExistingFile);
  report->add_option("--matrix", report_matrix, "resonance matrix CSV")->check(CLI::ExistingFile);
  report->add_option("--labels", report_labels, "labels CSV")->check(CLI::ExistingFile);

  crabot::eval::SyntheticParams synth_params;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "write a synthetic labeled corpus as JSONL");
  synth->add_option("--bots", synth_params.n_bots, "number of bot users")->capture_default_str();
  synth->add_option("--controls", synth_params.n_controls, "number of control users")
      ->capture_default_str();
  synth->add_option("--bot-vocab", synth_params.bot_vocab, "shared bot vocabulary size")
      ->capture_default_str();
  synth->add_option("--control-vocab", synth_params.control_vocab, "total control vocabulary size")
      ->capture_default_str();
  synth->add_option("--phrases", synth_params.phrases_per_user, "noun phrases per user")
      ->capture_default_str();
  synth->add_option("--common-vocab", synth_params.common_vocab,
                    "everyday vocabulary shared by controls")
      ->capture_default_str();
  synth->add_option("--common-share", synth_params.control_common_share,
                    "probability a control word comes from the everyday vocabulary")
      ->capture_default_str();
  synth->add_option("--seed", synth_params.seed, "generator seed")->capture_default_str();
  synth->add_option("--out", synth_out, "output JSONL path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto config = resolve(run_opts);
      const auto summary = crabot::pipeline::run(config, &std::cerr);
      std::cout << crabot::pipeline::format_summary(summary);
    } else if (*matrix) {
      crabot::pipeline::matrix_stage(resolve(matrix_opts), &std::cerr);
    } else if (*sweep) {
      crabot::pipeline::sweep_stage(resolve(sweep_opts), &std::cerr, sweep_matrix, sweep_labels);
    } else if (*report) {
      const auto summary = crabot::pipeline::report_stage(resolve(report_opts), &std::cerr,
                                                          report_sweep, report_matrix,
                                                          report_labels);
      std::cout << crabot::pipeline::format_summary(summary);
    } else if (*synth) {
      try {
        const auto corpus = crabot::eval::generate_synthetic_corpus(synth_params);
        crabot::ingest::write_jsonl(corpus, synth_out);
        std::cerr << fmt::format("wrote {} users to {}\n", corpus.size(), synth_out);
      } catch (const std::exception& e) {
        throw crabot::pipeline::StageError("synth", e.what());
      }
    }
  } catch (const crabot::pipeline::StageError& e) {
    std::cerr << fmt::format("crabot: error in stage {}: {}\n", e.stage(),
                             std::string_view(e.what()).substr(e.stage().size() + 2));
    return EXIT_FAILURE;
  } catch (const std::exception& e) {
    std::cerr << fmt::format("crabot: error: {}\n", e.what());
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}
