#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mtkit/corpus.hpp"
#include "mtkit/language.hpp"

namespace mtkit {

enum class InstructionKind { Translation, Monolingual };
std::string_view to_string(InstructionKind k);

/// A rendered training instance. For monolingual instances source == target.
struct InstructionInstance {
  std::string text;
  LanguagePair pair;
  InstructionKind kind = InstructionKind::Translation;
  /// Set when a text contains "]: " (or the source ends in "]:"), which makes the
  /// rendering ambiguous to parse back.
  bool ambiguous = false;

  /// "fr-en" for translation, "ta" for monolingual.
  std::string pair_key() const;
};

/// Instance patterns with {src_name} {tgt_name} {src} {tgt} placeholders.
struct InstructionTemplates {
  std::string translation = "Translation: [{src_name}]: {src} [{tgt_name}]: {tgt}";
  std::string monolingual = "[{tgt_name}]: {tgt}";

  /// Reads `translation=` / `monolingual=` lines; omitted keys keep their default.
  static InstructionTemplates load(const std::filesystem::path& path);
  static InstructionTemplates parse(std::string_view contents);
  bool is_default() const;
};

InstructionInstance render_translation_instruction(const ParallelSentence& s, const LanguageRegistry& registry,
                                                   const InstructionTemplates& templates = {});

/// Throws InputError for empty or multi-line text, UnknownLanguageError for `lang`.
InstructionInstance render_monolingual_instruction(const LanguageCode& lang, std::string_view text,
                                                   const LanguageRegistry& registry,
                                                   const InstructionTemplates& templates = {});

struct ParsedTranslation {
  LanguageCode source;
  LanguageCode target;
  std::string src_text;
  std::string tgt_text;
};

/// Inverse of the default translation template. Exact for texts that do not contain "]: ".
/// Throws InputError when `line` does not follow the grammar.
ParsedTranslation parse_translation_instruction(std::string_view line, const LanguageRegistry& registry);

struct TrainingManifest {
  std::size_t total = 0;
  std::map<std::string, std::size_t> per_pair_counts;
  std::map<std::string, std::size_t> per_kind_counts;
  std::uint64_t seed = 0;
  std::string rng;
  std::string digest;  // sha256 of the emitted file
  std::size_t ambiguous = 0;

  std::string to_json() const;
  static TrainingManifest from_json(std::string_view text);
  friend bool operator==(const TrainingManifest&, const TrainingManifest&) = default;
};

/// Shuffled training text, one instance per line.
std::string render_training_text(const std::vector<InstructionInstance>& instances, std::uint64_t shuffle_seed);

/// Writes the shuffled instances to `out` and returns their manifest. Throws InputError
/// for an empty instance list and IoError when the file cannot be written.
TrainingManifest build_training_file(const std::vector<InstructionInstance>& instances, std::uint64_t shuffle_seed,
                                     const std::filesystem::path& out);

struct IclPrompt {
  std::vector<std::pair<std::string, std::string>> demonstrations;
  std::string query_src;
  std::string rendered;
};

/// k demonstrations drawn without replacement from `pool` (excluding any whose source
/// equals the query), rendered as "<src> = <tgt>" lines followed by "<query> = ".
/// Throws InputError when fewer than k eligible demonstrations exist.
IclPrompt build_icl_prompt(const std::vector<ParallelSentence>& pool, std::string_view query, std::size_t k,
                           std::uint64_t seed);

}  // namespace mtkit
