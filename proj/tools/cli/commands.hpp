#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace mtkit::cli {

struct Globals {
  ExperimentConfig config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::string format = "tsv";

  /// --out, else the config's output_dir. Throws InputError when neither is set.
  std::filesystem::path out_dir() const;
  /// Throws InputError naming `command` when --seed is missing.
  std::uint64_t require_seed(const std::string& command) const;
};

struct FilterOptions {
  std::filesystem::path input;
  std::string corpus_format = "tsv-scored";
  std::string pair;
  std::optional<double> min_score;
  std::optional<std::size_t> top;
  std::optional<std::size_t> bottom;
};

struct IclOptions {
  std::filesystem::path pool;
  std::string corpus_format = "tsv-pair";
  std::string pair;
  std::filesystem::path queries;
  std::size_t k = 8;
};

struct PartitionOptions {
  std::optional<std::filesystem::path> spec;
  std::optional<std::filesystem::path> scaling;
};

struct EvaluateOptions {
  std::filesystem::path results;
  std::optional<std::filesystem::path> refs;
  std::optional<std::filesystem::path> labels;
};

struct PivotOptions {
  std::optional<std::filesystem::path> direct, leg1, leg2;
  std::optional<std::filesystem::path> direct_grid, pivot_grid;
  std::string pivot = "en";
};

struct AnalyzeOptions {
  std::string title;
  std::optional<std::filesystem::path> from;
  std::vector<std::string> grids;    // name=path
  std::vector<std::string> factors;  // name=path
  std::optional<std::filesystem::path> features;
  std::vector<std::string> sides{"to_x", "from_x"};
  std::optional<std::filesystem::path> points;  // series, n, score
  std::vector<std::string> errors;              // label=summary.tsv
  std::optional<std::filesystem::path> trend;
  std::optional<std::filesystem::path> partition;
};

struct LangIdOptions {
  std::optional<std::filesystem::path> train_dir;
  std::optional<std::filesystem::path> heldout_dir;
};

void cmd_prepare(const Globals& g);
void cmd_filter_quality(const Globals& g, const FilterOptions& o);
void cmd_make_icl(const Globals& g, const IclOptions& o);
void cmd_partition(const Globals& g, const PartitionOptions& o);
void cmd_evaluate(const Globals& g, const EvaluateOptions& o, bool with_bleu);
void cmd_pivot_gain(const Globals& g, const PivotOptions& o);
/// correlate, scaling-fit and report all build an analysis bundle; `command` names the run.
void cmd_analyze(const Globals& g, const AnalyzeOptions& o, const std::string& command);
void cmd_train_langid(const Globals& g, const LangIdOptions& o);

/// Entry point shared by the executable and the tests. Returns the process exit code.
int run_cli(int argc, const char* const* argv);

}  // namespace mtkit::cli
