#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mtkit/bleu.hpp"
#include "mtkit/langid.hpp"
#include "mtkit/language.hpp"
#include "mtkit/tokenizer.hpp"

namespace mtkit {

struct TranslationRecord {
  std::string id;
  LanguagePair pair;
  std::string src;
  std::string hyp;
  std::string ref;
  /// Opaque per-sentence scores computed elsewhere (e.g. COMET).
  std::map<std::string, double> external;

  friend bool operator==(const TranslationRecord&, const TranslationRecord&) = default;
};

struct ErrorFlags {
  bool sc = false;  // source copy
  bool ot = false;  // off-target
  bool ou = false;  // over- or under-translation
  bool oh = false;  // oscillatory hallucination
  /// Set with ot when no language could be determined for the hypothesis.
  bool ot_undetermined = false;

  bool any() const { return sc || ot || ou || oh; }
  friend bool operator==(const ErrorFlags&, const ErrorFlags&) = default;
};

struct DetectorConfig {
  /// Source copy: sentence BLEU of hypothesis against source strictly above this.
  double sc_bleu_threshold = 80.0;
  Smoothing sc_smoothing = Smoothing::exp();
  /// Over/under translation: token ratio strictly above `ou_upper` or strictly below `ou_lower`.
  double ou_upper = 2.0;
  double ou_lower = 0.5;
  /// Oscillation: an n-gram with n <= oh_n_max repeated back to back at least oh_min_repeats times.
  std::size_t oh_n_max = 4;
  std::size_t oh_min_repeats = 3;
  /// Tokenizer per language; languages not listed use default_tokenizer.
  std::map<LanguageCode, TokenizerId> tokenizers{{LanguageCode("zh"), TokenizerId::Char}};
  TokenizerId default_tokenizer = TokenizerId::Intl13a;

  TokenizerId tokenizer_for(const LanguageCode& lang) const;
  /// Compact description of every setting, written next to error ratios.
  std::string signature() const;
};

/// Language labels for hypotheses: external labels take precedence over the built-in
/// identifier. A label is looked up as "src-tgt:id" first, then as the bare id. Either
/// part may be absent, but not both.
class HypothesisLanguage {
 public:
  HypothesisLanguage(const LanguageIdentifier* identifier, const std::map<std::string, LanguageCode>* external);
  /// nullopt means undetermined.
  std::optional<LanguageCode> label(const TranslationRecord& r) const;
  std::string source_name() const;

 private:
  const LanguageIdentifier* identifier_;
  const std::map<std::string, LanguageCode>* external_;
};

bool detect_source_copy(const TranslationRecord& r, const DetectorConfig& config = {});
/// Sets `undetermined` (when given) if the hypothesis language could not be determined.
bool detect_off_target(const TranslationRecord& r, const HypothesisLanguage& lid, bool* undetermined = nullptr);
/// Throws InputError when the reference has no tokens.
bool detect_over_under(const TranslationRecord& r, const DetectorConfig& config = {});
bool detect_oscillatory_hallucination(const TranslationRecord& r, const DetectorConfig& config = {});

/// The oscillation test on a token sequence. Throws InputError when n_max is 0.
bool has_oscillation(const std::vector<std::string>& tokens, std::size_t n_max, std::size_t min_repeats);

ErrorFlags detect_errors(const TranslationRecord& r, const DetectorConfig& config, const HypothesisLanguage& lid);

struct ErrorCounts {
  std::size_t n = 0, sc = 0, ot = 0, ou = 0, oh = 0, any = 0, ot_undetermined = 0;

  ErrorCounts& operator+=(const ErrorFlags& f);
  double ratio(std::size_t count) const { return n ? static_cast<double>(count) / static_cast<double>(n) : 0.0; }
};

struct ErrorReport {
  /// Absent when the records span several pairs.
  std::optional<LanguagePair> pair;
  /// (id, flags) in input order.
  std::vector<std::pair<std::string, ErrorFlags>> per_record;
  ErrorCounts counts;
  std::string signature;

  double sc_ratio() const { return counts.ratio(counts.sc); }
  double ot_ratio() const { return counts.ratio(counts.ot); }
  double ou_ratio() const { return counts.ratio(counts.ou); }
  double oh_ratio() const { return counts.ratio(counts.oh); }
  double any_ratio() const { return counts.ratio(counts.any); }
  /// Throws InputError when an id occurs in more than one pair.
  std::map<std::string, ErrorFlags> by_id() const;
};

/// Runs all four detectors on every record, on up to `threads` threads (0 = hardware
/// concurrency). The result does not depend on the thread count. Throws InputError for
/// an empty record list or an id repeated within one pair.
ErrorReport build_error_report(const std::vector<TranslationRecord>& records, const DetectorConfig& config,
                               const HypothesisLanguage& lid, unsigned threads = 1);

/// Splits a report into one report per language pair, ordered by pair.
std::map<LanguagePair, ErrorReport> split_by_pair(const ErrorReport& report,
                                                  const std::vector<TranslationRecord>& records);

enum class SubsetMode { PerSystem, Intersection };
SubsetMode parse_subset_mode(std::string_view name);

/// Drops flagged records. PerSystem filters each system by its own flags; Intersection
/// keeps (pair, id) records clean under every system. Reports must list the records in
/// input order. Throws InputError when systems do not share the
/// same ids or a report lacks a record.
std::map<std::string, std::vector<TranslationRecord>> error_free_subset(
    const std::map<std::string, std::vector<TranslationRecord>>& results,
    const std::map<std::string, ErrorReport>& reports, SubsetMode mode);

/// JSONL: {"id", "src_lang", "tgt_lang", "src", "hyp", "ref", "external"?} per line.
/// Ids are unique per language pair, so one multi-way test set can share ids across pairs.
/// Throws InputError (with the line number) on malformed lines, unknown languages or
/// an id repeated within a pair.
std::vector<TranslationRecord> read_results(const std::filesystem::path& path, const LanguageRegistry& registry);
std::vector<TranslationRecord> parse_results(std::string_view jsonl, const LanguageRegistry& registry,
                                             std::string_view origin = "results");
std::string results_to_jsonl(const std::vector<TranslationRecord>& records);

/// Per-record flags and ratios.
std::string error_report_json(const ErrorReport& report);
/// One row per pair: pair, n_records, sc, ot, ou, oh, any (ratios).
std::string error_summary_tsv(const std::map<LanguagePair, ErrorReport>& by_pair);

}  // namespace mtkit
