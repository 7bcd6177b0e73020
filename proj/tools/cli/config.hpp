#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mtkit/bleu.hpp"
#include "mtkit/corpus.hpp"
#include "mtkit/errors.hpp"
#include "mtkit/language.hpp"

namespace mtkit::cli {

struct CorpusEntry {
  std::filesystem::path path;
  /// A CorpusFormat name or "multiparallel".
  std::string format;
  std::optional<LanguagePair> pair;
};

struct MonolingualEntry {
  LanguageCode lang;
  std::filesystem::path path;
};

struct SelectionConfig {
  enum class Strategy { Random, Top };
  std::size_t per_pair = 1000;
  Strategy strategy = Strategy::Random;
};

/// Experiment manifest. Relative paths resolve against the config file's directory.
struct ExperimentConfig {
  std::filesystem::path source;
  std::optional<std::filesystem::path> registry_path;
  LanguageRegistry registry;
  std::optional<std::vector<CorpusEntry>> corpora;
  std::vector<MonolingualEntry> monolingual;
  std::optional<std::filesystem::path> partition;
  std::optional<QualityFilter> quality;
  SelectionConfig selection;
  std::optional<std::filesystem::path> templates;
  DetectorConfig detectors;
  Smoothing bleu_smoothing = Smoothing::none();
  std::optional<std::filesystem::path> langid_model;
  std::optional<std::filesystem::path> langid_train_dir;
  std::optional<std::filesystem::path> output_dir;
  unsigned threads = 4;
  /// sha256 of the canonical JSON form of the file.
  std::string digest;
};

/// Throws InputError for schema violations and for referenced paths that do not exist.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir, std::string origin);

/// Settings used when no --config is given.
ExperimentConfig default_config();

}  // namespace mtkit::cli
