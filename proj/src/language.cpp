#include "mtkit/language.hpp"

#include <fstream>

#include "mtkit/error.hpp"
#include "mtkit/text.hpp"

namespace mtkit {

LanguageCode::LanguageCode(std::string_view code) : code_(code) {
  bool ok = code.size() >= 2 && code.size() <= 3;
  for (char c : code) ok = ok && c >= 'a' && c <= 'z';
  if (!ok) throw InputError("invalid language code '" + std::string(code) + "'");
}

LanguagePair LanguagePair::parse(std::string_view text) {
  auto dash = text.find('-');
  if (dash == std::string_view::npos) throw InputError("invalid language pair '" + std::string(text) + "'");
  return {LanguageCode(text.substr(0, dash)), LanguageCode(text.substr(dash + 1))};
}

namespace {

constexpr std::pair<const char*, const char*> kBuiltin[] = {
    {"en", "English"},  {"de", "German"},     {"fr", "French"},   {"ca", "Catalan"},
    {"fi", "Finnish"},  {"ru", "Russian"},    {"bg", "Bulgarian"}, {"zh", "Chinese"},
    {"ko", "Korean"},   {"ar", "Arabic"},     {"sw", "Swahili"},  {"hi", "Hindi"},
    {"ta", "Tamil"},    {"es", "Spanish"},    {"el", "Greek"},    {"pt", "Portuguese"},
    {"ja", "Japanese"}, {"vi", "Vietnamese"}, {"ur", "Urdu"},     {"th", "Thai"},
    {"tr", "Turkish"},  {"te", "Telugu"},     {"it", "Italian"},  {"ht", "Haitian Creole"},
    {"eu", "Basque"},   {"id", "Indonesian"}, {"et", "Estonian"}, {"bn", "Bengali"},
};

}  // namespace

LanguageRegistry LanguageRegistry::builtin() {
  LanguageRegistry r;
  for (auto [code, name] : kBuiltin) r.add(LanguageCode(code), name);
  return r;
}

LanguageRegistry LanguageRegistry::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open language registry " + path.string());
  return parse(in);
}

LanguageRegistry LanguageRegistry::parse(std::istream& in) {
  LanguageRegistry r;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto fields = text::split(t, '\t');
    if (fields.size() != 2) {
      throw InputError("registry line " + std::to_string(lineno) + ": expected code<TAB>name");
    }
    r.add(LanguageCode(text::trim(fields[0])), std::string(text::trim(fields[1])));
  }
  return r;
}

void LanguageRegistry::add(const LanguageCode& code, std::string display_name) {
  if (code.empty()) throw InputError("empty language code");
  if (display_name.empty()) throw InputError("empty display name for '" + code.str() + "'");
  if (names_.count(code)) throw InputError("duplicate language code '" + code.str() + "'");
  if (by_name_.count(display_name)) throw InputError("duplicate display name '" + display_name + "'");
  order_.push_back(code);
  by_name_.emplace(display_name, code);
  names_.emplace(code, std::move(display_name));
}

const std::string& LanguageRegistry::display_name(const LanguageCode& code) const {
  auto it = names_.find(code);
  if (it == names_.end()) throw UnknownLanguageError(code.str());
  return it->second;
}

std::optional<LanguageCode> LanguageRegistry::find_by_name(std::string_view name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

void LanguageRegistry::require(const LanguageCode& code) const {
  if (!contains(code)) throw UnknownLanguageError(code.str());
}

const std::vector<LanguageCode>& core_languages() {
  static const std::vector<LanguageCode> langs = [] {
    std::vector<LanguageCode> v;
    for (std::size_t i = 0; i < 13; ++i) v.emplace_back(kBuiltin[i].first);
    return v;
  }();
  return langs;
}

}  // namespace mtkit
