#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "mtkit/language.hpp"

namespace mtkit {

/// One aligned sentence pair. Texts are NFC-normalised, trimmed and newline-free.
struct ParallelSentence {
  LanguageCode src_lang;
  LanguageCode tgt_lang;
  std::string src_text;
  std::string tgt_text;
  /// Alignment similarity attached by the miner (e.g. a LASER margin score).
  std::optional<double> score;

  LanguagePair pair() const { return {src_lang, tgt_lang}; }
  friend bool operator==(const ParallelSentence&, const ParallelSentence&) = default;
};

enum class CorpusFormat { TsvPair, TsvScored, Jsonl };

std::string_view to_string(CorpusFormat f);
/// Accepts "tsv-pair", "tsv-scored" and "jsonl".
CorpusFormat parse_corpus_format(std::string_view name);

struct MalformedLine {
  std::size_t line = 0;  // 1-based
  std::string reason;
};

struct LoadReport {
  std::size_t lines = 0;  // non-blank lines seen
  std::size_t accepted = 0;
  std::vector<MalformedLine> malformed;
};

struct LoadOptions {
  /// Loading aborts when strictly more than this fraction of lines is malformed.
  double max_malformed_fraction = 0.10;
};

/// Immutable, ordered collection of sentence pairs.
class Corpus {
 public:
  Corpus() = default;
  Corpus(std::vector<ParallelSentence> pairs, std::string provenance, LoadReport report = {});

  const std::vector<ParallelSentence>& pairs() const { return pairs_; }
  const std::string& provenance() const { return provenance_; }
  const LoadReport& load_report() const { return report_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }

  /// Same provenance, new contents (used by filtering and sampling).
  Corpus derive(std::vector<ParallelSentence> pairs, std::string_view step) const;

  friend bool operator==(const Corpus& a, const Corpus& b) { return a.pairs_ == b.pairs_; }

 private:
  std::vector<ParallelSentence> pairs_;
  std::string provenance_;
  LoadReport report_;
};

/// Validates and builds a sentence; throws InputError describing the violation.
ParallelSentence make_parallel_sentence(const LanguageCode& src, const LanguageCode& tgt,
                                        std::string_view src_text, std::string_view tgt_text,
                                        std::optional<double> score = std::nullopt);

/// `pair` is required for the TSV formats. For jsonl every record carries its own
/// languages; when `pair` is given, records for another pair count as malformed.
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   std::optional<LanguagePair> pair, const LoadOptions& options = {});
Corpus parse_corpus(std::istream& in, CorpusFormat format, std::optional<LanguagePair> pair,
                    std::string provenance, const LoadOptions& options = {});

/// Multi-way table: a header `key<TAB>code...` and one row per sentence with its text in
/// every column language. Expands to every ordered pair of distinct columns (restricted
/// to `pairs` when given); empty cells are skipped. Malformed rows count against
/// `options` like in load_corpus.
Corpus load_multiparallel(const std::filesystem::path& path, const std::vector<LanguagePair>* pairs = nullptr,
                          const LoadOptions& options = {});

/// Inverse of parse_corpus. Throws InputError when the format cannot represent the
/// corpus (tsv-scored without scores, TSV with mixed pairs).
void write_corpus(const Corpus& corpus, CorpusFormat format, std::ostream& out);

/// Score-based selection.
struct QualityFilter {
  enum class Mode { Threshold, TopK, BottomK };
  Mode mode = Mode::Threshold;
  double threshold = 0.0;
  std::size_t k = 0;

  static QualityFilter at_least(double t) { return {Mode::Threshold, t, 0}; }
  static QualityFilter top(std::size_t k) { return {Mode::TopK, 0.0, k}; }
  static QualityFilter bottom(std::size_t k) { return {Mode::BottomK, 0.0, k}; }
};

/// Threshold keeps score >= t. top/bottom rank by score and break ties by position
/// (earlier is "higher"), so top(k) and bottom(n-k) partition the corpus. The output
/// keeps input order. Throws InputError naming the first record without a score.
Corpus filter_by_quality(const Corpus& corpus, const QualityFilter& filter);

/// Uniform sample without replacement of min(n, size) sentences per language pair,
/// deterministic for a seed. Output keeps input order.
Corpus sample_per_pair(const Corpus& corpus, std::size_t n, std::uint64_t seed);

/// The min(n, size) highest-scoring sentences per pair (the alternative selection
/// strategy to random sampling).
Corpus top_per_pair(const Corpus& corpus, std::size_t n);

}  // namespace mtkit
