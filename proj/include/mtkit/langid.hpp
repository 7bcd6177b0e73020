#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mtkit/language.hpp"

namespace mtkit {

inline constexpr int kLangIdMaxOrder = 4;

struct LangIdConfig {
  /// Additive smoothing constant.
  double alpha = 0.5;
  /// Profiles trained on fewer characters carry a warning.
  std::size_t min_training_chars = 2000;
  /// Texts shorter than this (in non-space characters) are undetermined unless the
  /// margin reaches short_text_margin.
  std::size_t min_text_chars = 20;
  double short_text_margin = 1.0;

  friend bool operator==(const LangIdConfig&, const LangIdConfig&) = default;
};

/// Smoothed character n-gram model for one language. Words are case-folded and
/// padded with a space on each side before n-grams (n = 1..4) are taken.
struct LangProfile {
  LanguageCode lang;
  /// n-gram -> log probability, one table per order (index 0 holds unigrams).
  std::array<std::unordered_map<std::string, double>, kLangIdMaxOrder> ngram_logprobs;
  /// Log probability of an n-gram absent from training, per order.
  std::array<double, kLangIdMaxOrder> smoothing_mass{};
  std::size_t training_chars = 0;
  std::vector<std::string> warnings;
};

struct LangPrediction {
  /// Empty when undetermined.
  std::optional<LanguageCode> lang;
  /// Log-likelihood of the winning language (all orders summed) per non-space character.
  double score = 0.0;
  /// Gap between the best and the runner-up score; never negative.
  double margin = 0.0;
  /// Best language even when the call is undetermined because the text is short.
  std::optional<LanguageCode> best;
  std::string reason;  // "", "empty", "short"

  bool undetermined() const { return !lang.has_value(); }
};

class LanguageIdentifier {
 public:
  /// Throws InputError naming a required language that is missing or has no text.
  static LanguageIdentifier train(const std::map<LanguageCode, std::vector<std::string>>& mono,
                                  const std::vector<LanguageCode>& required, const LangIdConfig& config = {});

  static LanguageIdentifier load(const std::filesystem::path& path);
  static LanguageIdentifier from_json(std::string_view text);
  /// Versioned JSON holding the raw n-gram counts; loading recomputes the same tables.
  std::string to_json() const;
  void save(const std::filesystem::path& path) const;

  LangPrediction identify(std::string_view text) const;

  const std::vector<LangProfile>& profiles() const { return profiles_; }
  std::vector<LanguageCode> languages() const;
  const LangIdConfig& config() const { return config_; }

 private:
  using Counts = std::array<std::map<std::string, std::uint64_t>, kLangIdMaxOrder>;

  void build();

  LangIdConfig config_;
  std::vector<LanguageCode> langs_;  // sorted by code
  std::vector<Counts> counts_;
  std::vector<LangProfile> profiles_;
  // gram -> row of per-language log probabilities in table_.
  std::unordered_map<std::string, std::uint32_t> rows_;
  std::vector<double> table_;
  std::array<std::vector<double>, kLangIdMaxOrder> unseen_;
};

/// Case-folded, padded n-grams of every word in `text`, with counts, sorted by gram.
std::vector<std::pair<std::string, std::uint32_t>> extract_char_ngrams(std::string_view text, int order);

/// Reads `id<TAB>lang` lines. A leading "__label__" on the language is stripped, so
/// fastText output pasted next to ids works. Throws InputError on unknown languages,
/// duplicate ids or malformed lines.
std::map<std::string, LanguageCode> load_external_labels(const std::filesystem::path& path,
                                                         const LanguageRegistry& registry);

}  // namespace mtkit
