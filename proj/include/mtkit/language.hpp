#pragma once

#include <compare>
#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mtkit {

/// Lowercase ASCII language identifier ("en", "sw", ...).
class LanguageCode {
 public:
  LanguageCode() = default;
  /// Throws InputError unless `code` is 2-3 lowercase ASCII letters.
  explicit LanguageCode(std::string_view code);

  const std::string& str() const { return code_; }
  bool empty() const { return code_.empty(); }

  friend auto operator<=>(const LanguageCode&, const LanguageCode&) = default;
  friend bool operator==(const LanguageCode&, const LanguageCode&) = default;

 private:
  std::string code_;
};

/// Ordered (source, target) direction.
struct LanguagePair {
  LanguageCode source;
  LanguageCode target;

  LanguagePair reversed() const { return {target, source}; }
  /// "src-tgt", the key used in manifests and reports.
  std::string str() const { return source.str() + "-" + target.str(); }
  /// Inverse of str().
  static LanguagePair parse(std::string_view text);

  friend auto operator<=>(const LanguagePair&, const LanguagePair&) = default;
  friend bool operator==(const LanguagePair&, const LanguagePair&) = default;
};

/// Code <-> display-name table. Both directions are one-to-one.
class LanguageRegistry {
 public:
  LanguageRegistry() = default;

  /// The 13 evaluation languages followed by the additional pretraining languages
  /// used for pair-scaling experiments.
  static LanguageRegistry builtin();
  /// Reads `code<TAB>display name` lines; '#' starts a comment line.
  static LanguageRegistry load(const std::filesystem::path& path);
  static LanguageRegistry parse(std::istream& in);

  /// Throws InputError on a duplicate code or display name.
  void add(const LanguageCode& code, std::string display_name);

  bool contains(const LanguageCode& code) const { return names_.count(code) != 0; }
  /// Throws UnknownLanguageError.
  const std::string& display_name(const LanguageCode& code) const;
  std::optional<LanguageCode> find_by_name(std::string_view name) const;
  /// Registration order.
  const std::vector<LanguageCode>& codes() const { return order_; }
  std::size_t size() const { return order_.size(); }
  /// Throws UnknownLanguageError when `code` is not registered.
  void require(const LanguageCode& code) const;

 private:
  std::vector<LanguageCode> order_;
  std::map<LanguageCode, std::string> names_;
  std::map<std::string, LanguageCode, std::less<>> by_name_;
};

/// The 13 languages the translation grids are reported over, in table order.
const std::vector<LanguageCode>& core_languages();

}  // namespace mtkit

template <>
struct std::hash<mtkit::LanguageCode> {
  std::size_t operator()(const mtkit::LanguageCode& c) const noexcept {
    return std::hash<std::string>{}(c.str());
  }
};

template <>
struct std::hash<mtkit::LanguagePair> {
  std::size_t operator()(const mtkit::LanguagePair& p) const noexcept {
    return std::hash<std::string>{}(p.source.str()) * 31 + std::hash<std::string>{}(p.target.str());
  }
};
