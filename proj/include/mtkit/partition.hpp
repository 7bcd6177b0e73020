#pragma once

#include <array>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mtkit/language.hpp"

namespace mtkit {

/// Data condition of an evaluation direction relative to the finetuning pairs.
enum class Condition { SameDirection, ReversedDirection, UnseenDirection, UnseenSrc, UnseenTgt, UnseenBoth };

inline constexpr std::array<Condition, 6> kAllConditions = {
    Condition::SameDirection, Condition::ReversedDirection, Condition::UnseenDirection,
    Condition::UnseenSrc,     Condition::UnseenTgt,         Condition::UnseenBoth};

/// "SameDirection", "ReversedDirection", ...
std::string_view to_string(Condition c);
Condition parse_condition(std::string_view name);

/// Language roles and the finetuning directions built from them.
struct PartitionSpec {
  std::string name;
  std::string note;
  std::set<LanguageCode> unseen;
  std::set<LanguageCode> only_source;
  std::set<LanguageCode> only_target;
  std::set<LanguageCode> source_target;
  std::set<LanguagePair> train_pairs;

  /// Union of the four role sets.
  std::set<LanguageCode> languages() const;
  bool contains(const LanguageCode& l) const;

  std::string to_json() const;
};

/// Validates role constraints and derives the Source-Target group as the registry
/// languages not named in any other group. Throws InputError naming the offending
/// language or pair.
PartitionSpec build_partition(const std::vector<LanguageCode>& registry, const std::set<LanguageCode>& unseen,
                              const std::set<LanguageCode>& only_source, const std::set<LanguageCode>& only_target,
                              const std::vector<LanguagePair>& pairs, std::string name = "");

/// Full validation of an explicit spec (all four sets given).
void validate_partition(const PartitionSpec& spec);

/// Reads the JSON config: {name?, note?, unseen, only_source, only_target,
/// source_target, train_pairs: ["de-fr", ...] | [["de","fr"], ...]}.
PartitionSpec load_partition(const std::filesystem::path& path, const LanguageRegistry& registry);
PartitionSpec parse_partition(std::string_view json_text, const LanguageRegistry& registry);

/// Every ordered pair of distinct languages, sorted by (source, target) code.
std::vector<LanguagePair> enumerate_directions(const std::set<LanguageCode>& langs);
std::vector<LanguagePair> enumerate_directions(const std::vector<LanguageCode>& langs);

/// Throws UnknownLanguageError for languages outside the partition.
Condition classify(const PartitionSpec& spec, const LanguagePair& dir);

/// Adds training pairs (new languages join the Source-Target group) under a new name;
/// used to express pair-scaling snapshots as extensions of a base spec.
PartitionSpec extend_partition(const PartitionSpec& base, const std::vector<LanguagePair>& extra, std::string name);

/// Reads a scaling config {base, snapshots: [30, 60, ...], extension_order: [pairs]}
/// and returns the base spec followed by one spec per snapshot size. Snapshot names
/// replace a trailing pair count in the base name ("mFTI-16" -> "mFTI-30"). `base` is
/// resolved relative to the config file.
std::vector<PartitionSpec> load_scaling_snapshots(const std::filesystem::path& path, const LanguageRegistry& registry);

/// Square grid of condition labels over `langs` ("-" on the diagonal), as TSV.
std::string condition_matrix_tsv(const PartitionSpec& spec, const std::vector<LanguageCode>& langs);

/// Spec in which every direction over `langs` is a training pair.
PartitionSpec all_pairs_partition(const std::vector<LanguageCode>& langs, std::string name = "mFTI-all");

}  // namespace mtkit
