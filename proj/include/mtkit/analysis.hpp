#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mtkit/bleu.hpp"
#include "mtkit/errors.hpp"
#include "mtkit/language.hpp"
#include "mtkit/partition.hpp"
#include "mtkit/stats.hpp"

namespace mtkit {

/// Per-direction scores over an ordered language list. The diagonal is always absent.
class ScoreGrid {
 public:
  ScoreGrid() = default;
  /// Throws InputError on duplicate languages.
  explicit ScoreGrid(std::vector<LanguageCode> langs);

  const std::vector<LanguageCode>& langs() const { return langs_; }
  bool has_language(const LanguageCode& l) const;
  /// Throws InputError for a diagonal cell or a language outside the grid.
  void set(const LanguagePair& dir, double value);
  void erase(const LanguagePair& dir);
  std::optional<double> get(const LanguagePair& dir) const;
  const std::map<LanguagePair, double>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }

  /// First row and column hold language codes; an empty cell is absent.
  static ScoreGrid parse_tsv(std::string_view tsv);
  static ScoreGrid load_tsv(const std::filesystem::path& path);
  /// `digits` < 0 writes the shortest exact representation.
  std::string to_tsv(int digits = -1) const;

  friend bool operator==(const ScoreGrid&, const ScoreGrid&) = default;

 private:
  std::vector<LanguageCode> langs_;
  std::map<LanguagePair, double> cells_;
};

struct ToFrom {
  double to_x = 0.0;
  double from_x = 0.0;
};

/// Means over present cells into and out of `lang`. Throws InputError when the language
/// is not in the grid or has no cells on either side.
ToFrom average_to_from(const ScoreGrid& grid, const LanguageCode& lang);
/// Mean of all present cells. Throws InputError on an empty grid.
double overall_mean(const ScoreGrid& grid);

/// Corpus BLEU per direction. Chinese targets (or whatever `tokenizer_for` says) use
/// their configured tokenizer. Pairs are scored on up to `threads` threads.
ScoreGrid bleu_grid(const std::vector<TranslationRecord>& records, const std::vector<LanguageCode>& langs,
                    const DetectorConfig& tokenizers, Smoothing smoothing = Smoothing::none(), unsigned threads = 1);

/// Signature of a grid scored with the per-language tokenizers in `tokenizers`.
std::string grid_signature(const DetectorConfig& tokenizers, Smoothing smoothing);

/// Builds pivot records for every direct record: the source goes through `leg1`
/// (x -> pivot, same id), its output is looked up as the source of `leg2`
/// (pivot -> y, same id, src equal to the leg1 hypothesis). Throws InputError naming the
/// first missing leg.
std::vector<TranslationRecord> compose_pivot(const std::vector<TranslationRecord>& direct,
                                             const std::vector<TranslationRecord>& leg1,
                                             const std::vector<TranslationRecord>& leg2,
                                             const LanguageCode& pivot = LanguageCode("en"));

/// pivot - direct for every direction that involves no `pivot` language and is present
/// in `direct`. Throws InputError when `pivoted` lacks one of those cells.
ScoreGrid pivot_gain(const ScoreGrid& direct, const ScoreGrid& pivoted, const LanguageCode& pivot = LanguageCode("en"));

struct CellRef {
  LanguagePair dir;
  double value = 0.0;
};
/// Largest cell (first in pair order on ties). Throws InputError on an empty grid.
CellRef max_cell(const ScoreGrid& grid);

enum class FeatureCategory { Geography, Syntax, Phylogeny, Phonology, Inventory };
std::string_view to_string(FeatureCategory c);
FeatureCategory parse_feature_category(std::string_view name);

struct FeatureVector {
  LanguageCode lang;
  FeatureCategory category = FeatureCategory::Geography;
  std::vector<std::optional<double>> values;
};

class FeatureTable {
 public:
  /// `lang<TAB>category<TAB>v1,v2,...` with "?" for a missing value; '#' comments.
  /// Throws InputError when vectors in one category differ in length.
  static FeatureTable parse(std::string_view tsv);
  static FeatureTable load(const std::filesystem::path& path);
  void add(FeatureVector v);
  /// Throws InputError when absent.
  const FeatureVector& get(const LanguageCode& lang, FeatureCategory category) const;
  bool contains(const LanguageCode& lang, FeatureCategory category) const;
  /// Provenance comment lines from the file (without '#').
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  std::map<std::pair<FeatureCategory, LanguageCode>, FeatureVector> vectors_;
  std::map<FeatureCategory, std::size_t> lengths_;
  std::vector<std::string> notes_;
};

/// Cosine similarity over the dimensions present in both vectors. Throws InputError with
/// fewer than two shared dimensions and DegenerateInputError when one side is all zero.
double cosine_similarity(const FeatureVector& a, const FeatureVector& b);
double similarity_to_english(const FeatureTable& features, const LanguageCode& lang, FeatureCategory category);

/// `lang<TAB>value` lines; '#' comments.
std::map<LanguageCode, double> load_factors(const std::filesystem::path& path);
std::map<LanguageCode, double> parse_factors(std::string_view tsv);

enum class Side { ToX, FromX };
std::string_view to_string(Side s);
Side parse_side(std::string_view name);

struct FactorCorrelation {
  double rho = 0.0;
  std::vector<LanguageCode> langs;  // languages that entered the correlation
};

/// Spearman correlation between per-language average BLEU on `side` and the factor.
/// English takes part only if the factor provides a value for it. Throws InputError when
/// a non-English grid language has no factor value.
FactorCorrelation correlate_factors(const ScoreGrid& grid, const std::map<LanguageCode, double>& factors, Side side,
                                    const LanguageCode& english = LanguageCode("en"));

struct Bucket {
  double mean = 0.0;
  std::size_t count = 0;
};

/// Mean score per data condition. Conditions with no present cell are left out.
std::map<Condition, Bucket> bucket_by_condition(const ScoreGrid& grid, const PartitionSpec& spec);

// Reports ------------------------------------------------------------------

struct NamedGrid {
  std::string name;
  std::string signature;
  ScoreGrid grid;
};

struct BucketTable {
  std::string grid;
  std::string partition;
  std::string signature;
  std::map<Condition, Bucket> buckets;
};

struct CorrelationRow {
  std::string factor;
  std::string grid;
  Side side = Side::ToX;
  double rho = 0.0;
  std::size_t n = 0;
  std::string signature;
};

struct FitRow {
  std::string name;
  std::vector<double> ns;
  std::vector<double> scores;
  LogLinearFit fit;
  std::string signature;
};

struct ErrorRow {
  std::string label;
  std::string pair;
  std::size_t n = 0;
  double sc = 0, ot = 0, ou = 0, oh = 0, any = 0;
  std::string signature;
};

/// One point of an error-ratio trend against the number of training pairs.
struct TrendPoint {
  std::string series;
  std::size_t n_language_pairs = 0;
  double sc = 0, ot = 0, ou = 0, oh = 0, any = 0;
};

struct AnalysisBundle {
  std::string title;
  std::string config_digest;
  std::vector<NamedGrid> grids;
  std::vector<BucketTable> buckets;
  std::vector<CorrelationRow> correlations;
  std::vector<FitRow> fits;
  std::vector<ErrorRow> errors;
  std::vector<TrendPoint> trend;
  std::string trend_signature;

  std::string to_json() const;
  static AnalysisBundle from_json(std::string_view text);
  std::string to_markdown() const;
  /// File name -> contents, one TSV per non-empty section.
  std::map<std::string, std::string> to_tsv_files() const;
};

enum class ReportFormat { Tsv, Markdown, Json };
ReportFormat parse_report_format(std::string_view name);

/// Writes the bundle into `dir` and returns the written paths in a fixed order.
std::vector<std::filesystem::path> emit_report(const AnalysisBundle& bundle, ReportFormat format,
                                               const std::filesystem::path& dir);

}  // namespace mtkit
