#include "mtkit/langid.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "mtkit/error.hpp"
#include "mtkit/io.hpp"
#include "mtkit/text.hpp"

namespace mtkit {

using nlohmann::json;

namespace {

constexpr std::string_view kFormat = "mtkit-langid";
constexpr int kFormatVersion = 1;

// Calls fn(gram, order_index) for every n-gram of every padded, case-folded word.
template <typename Fn>
void for_each_gram(std::string_view text, Fn&& fn) {
  std::string folded = text::fold_case(text);
  std::vector<std::size_t> starts;  // byte offset of each code point, plus the end
  for (auto word : text::split_whitespace(folded)) {
    std::string padded;
    padded.reserve(word.size() + 2);
    padded += ' ';
    padded.append(word);
    padded += ' ';
    starts.clear();
    for (std::size_t i = 0; i < padded.size(); ++i) {
      if ((static_cast<unsigned char>(padded[i]) & 0xC0) != 0x80) starts.push_back(i);
    }
    starts.push_back(padded.size());
    std::size_t cps = starts.size() - 1;
    for (std::size_t i = 0; i < cps; ++i) {
      for (int n = 1; n <= kLangIdMaxOrder && i + n <= cps; ++n) {
        std::string_view g(padded.data() + starts[i], starts[i + n] - starts[i]);
        if (n == 1 && g == " ") continue;
        fn(g, n - 1);
      }
    }
  }
}

std::size_t non_space_chars(std::string_view text) {
  std::size_t n = 0;
  for (char32_t cp : text::decode_utf8(text)) n += text::is_space(cp) ? 0 : 1;
  return n;
}

}  // namespace

std::vector<std::pair<std::string, std::uint32_t>> extract_char_ngrams(std::string_view text, int order) {
  std::map<std::string, std::uint32_t, std::less<>> counts;
  for_each_gram(text, [&](std::string_view g, int k) {
    if (k + 1 != order) return;
    auto it = counts.find(g);
    if (it == counts.end()) counts.emplace(std::string(g), 1);
    else ++it->second;
  });
  return {counts.begin(), counts.end()};
}

LanguageIdentifier LanguageIdentifier::train(const std::map<LanguageCode, std::vector<std::string>>& mono,
                                             const std::vector<LanguageCode>& required, const LangIdConfig& config) {
  for (const auto& l : required) {
    auto it = mono.find(l);
    if (it == mono.end()) throw InputError("no training text for language '" + l.str() + "'");
    bool any = std::any_of(it->second.begin(), it->second.end(), [](const auto& s) { return !text::trim(s).empty(); });
    if (!any) throw InputError("training text for language '" + l.str() + "' is empty");
  }
  if (mono.empty()) throw InputError("no training languages");
  LanguageIdentifier id;
  id.config_ = config;
  for (const auto& [lang, lines] : mono) {
    bool any = std::any_of(lines.begin(), lines.end(), [](const auto& s) { return !text::trim(s).empty(); });
    if (!any) throw InputError("training text for language '" + lang.str() + "' is empty");
    id.langs_.push_back(lang);
    Counts c;
    for (const auto& line : lines) {
      for_each_gram(line, [&](std::string_view g, int k) {
        auto& m = c[k];
        auto it = m.find(std::string(g));
        if (it == m.end()) m.emplace(std::string(g), 1);
        else ++it->second;
      });
    }
    id.counts_.push_back(std::move(c));
  }
  id.build();
  // Character totals are only known at training time; they feed the warnings.
  for (std::size_t i = 0; i < id.langs_.size(); ++i) {
    std::size_t chars = 0;
    for (const auto& line : mono.at(id.langs_[i])) chars += non_space_chars(line);
    auto& p = id.profiles_[i];
    p.training_chars = chars;
    if (chars < config.min_training_chars) {
      p.warnings.push_back("trained on " + std::to_string(chars) + " characters, below the minimum of " +
                           std::to_string(config.min_training_chars));
    }
  }
  return id;
}

void LanguageIdentifier::build() {
  const std::size_t L = langs_.size();
  std::array<std::set<std::string_view>, kLangIdMaxOrder> vocab;
  for (const auto& c : counts_) {
    for (int k = 0; k < kLangIdMaxOrder; ++k) {
      for (const auto& [g, n] : c[k]) vocab[k].insert(g);
    }
  }
  profiles_.assign(L, {});
  for (int k = 0; k < kLangIdMaxOrder; ++k) unseen_[k].assign(L, 0.0);
  for (std::size_t l = 0; l < L; ++l) {
    auto& p = profiles_[l];
    p.lang = langs_[l];
    for (int k = 0; k < kLangIdMaxOrder; ++k) {
      std::uint64_t total = 0;
      for (const auto& [g, n] : counts_[l][k]) total += n;
      // One extra vocabulary slot for n-grams never seen by any language.
      double denom = static_cast<double>(total) + config_.alpha * static_cast<double>(vocab[k].size() + 1);
      double log_denom = std::log(denom);
      p.smoothing_mass[k] = std::log(config_.alpha) - log_denom;
      unseen_[k][l] = p.smoothing_mass[k];
      for (const auto& [g, n] : counts_[l][k]) {
        p.ngram_logprobs[k].emplace(g, std::log(static_cast<double>(n) + config_.alpha) - log_denom);
      }
    }
  }
  rows_.clear();
  table_.clear();
  for (int k = 0; k < kLangIdMaxOrder; ++k) {
    for (auto g : vocab[k]) {
      auto row = static_cast<std::uint32_t>(rows_.size());
      rows_.emplace(std::string(g), row);
      for (std::size_t l = 0; l < L; ++l) {
        auto it = profiles_[l].ngram_logprobs[k].find(std::string(g));
        table_.push_back(it == profiles_[l].ngram_logprobs[k].end() ? unseen_[k][l] : it->second);
      }
    }
  }
}

std::vector<LanguageCode> LanguageIdentifier::languages() const { return langs_; }

LangPrediction LanguageIdentifier::identify(std::string_view input) const {
  LangPrediction out;
  if (!text::is_valid_utf8(input)) throw InputError("identify: text is not valid UTF-8");
  if (text::trim(input).empty()) {
    out.reason = "empty";
    return out;
  }
  // Grams are counted first and summed in sorted order: the score then depends only on
  // the multiset of grams, so repeating a text leaves it bit-for-bit unchanged.
  std::map<std::string, std::pair<int, std::uint64_t>, std::less<>> grams;
  for_each_gram(input, [&](std::string_view g, int k) {
    auto it = grams.find(g);
    if (it == grams.end()) grams.emplace(std::string(g), std::make_pair(k, std::uint64_t{1}));
    else ++it->second.second;
  });
  std::size_t chars = non_space_chars(input);
  const std::size_t L = langs_.size();
  std::vector<double> sums(L, 0.0);
  for (const auto& [g, kc] : grams) {
    auto [k, count] = kc;
    auto c = static_cast<double>(count);
    auto it = rows_.find(g);
    if (it == rows_.end()) {
      for (std::size_t l = 0; l < L; ++l) sums[l] += c * unseen_[k][l];
    } else {
      const double* row = table_.data() + static_cast<std::size_t>(it->second) * L;
      for (std::size_t l = 0; l < L; ++l) sums[l] += c * row[l];
    }
  }
  // langs_ is sorted, so keeping the first maximum breaks ties by code.
  std::size_t best = 0;
  for (std::size_t l = 1; l < L; ++l) {
    if (sums[l] > sums[best]) best = l;
  }
  double second = -INFINITY;
  for (std::size_t l = 0; l < L; ++l) {
    if (l != best) second = std::max(second, sums[l]);
  }
  auto denom = static_cast<double>(chars);
  out.score = sums[best] / denom;
  out.margin = L > 1 ? (sums[best] - second) / denom : INFINITY;
  out.best = langs_[best];
  if (chars < config_.min_text_chars && out.margin < config_.short_text_margin) {
    out.reason = "short";
    return out;
  }
  out.lang = langs_[best];
  return out;
}

std::string LanguageIdentifier::to_json() const {
  json j;
  j["format"] = kFormat;
  j["version"] = kFormatVersion;
  j["config"] = {{"alpha", config_.alpha},
                 {"min_training_chars", config_.min_training_chars},
                 {"min_text_chars", config_.min_text_chars},
                 {"short_text_margin", config_.short_text_margin}};
  j["orders"] = kLangIdMaxOrder;
  j["languages"] = json::array();
  for (std::size_t l = 0; l < langs_.size(); ++l) {
    json lang;
    lang["lang"] = langs_[l].str();
    lang["training_chars"] = profiles_[l].training_chars;
    lang["warnings"] = profiles_[l].warnings;
    lang["counts"] = json::array();
    for (int k = 0; k < kLangIdMaxOrder; ++k) lang["counts"].push_back(counts_[l][k]);
    j["languages"].push_back(std::move(lang));
  }
  return j.dump() + "\n";
}

LanguageIdentifier LanguageIdentifier::from_json(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw InputError("language-id profile is not JSON");
  try {
    if (j.at("format") != kFormat) throw InputError("not a language-id profile file");
    if (j.at("version") != kFormatVersion) {
      throw InputError("unsupported profile version " + j.at("version").dump());
    }
    if (j.at("orders") != kLangIdMaxOrder) throw InputError("profile n-gram order mismatch");
    LanguageIdentifier id;
    const auto& c = j.at("config");
    id.config_.alpha = c.at("alpha").get<double>();
    id.config_.min_training_chars = c.at("min_training_chars").get<std::size_t>();
    id.config_.min_text_chars = c.at("min_text_chars").get<std::size_t>();
    id.config_.short_text_margin = c.at("short_text_margin").get<double>();
    std::vector<std::pair<std::size_t, std::vector<std::string>>> meta;
    for (const auto& lang : j.at("languages")) {
      id.langs_.emplace_back(lang.at("lang").get<std::string>());
      Counts counts;
      for (int k = 0; k < kLangIdMaxOrder; ++k) {
        counts[k] = lang.at("counts").at(k).get<std::map<std::string, std::uint64_t>>();
      }
      id.counts_.push_back(std::move(counts));
      meta.emplace_back(lang.at("training_chars").get<std::size_t>(),
                        lang.at("warnings").get<std::vector<std::string>>());
    }
    if (id.langs_.empty()) throw InputError("profile has no languages");
    if (!std::is_sorted(id.langs_.begin(), id.langs_.end()) ||
        std::adjacent_find(id.langs_.begin(), id.langs_.end()) != id.langs_.end()) {
      throw InputError("profile languages must be unique and sorted");
    }
    id.build();
    for (std::size_t l = 0; l < meta.size(); ++l) {
      id.profiles_[l].training_chars = meta[l].first;
      id.profiles_[l].warnings = meta[l].second;
    }
    return id;
  } catch (const json::exception& e) {
    throw InputError(std::string("language-id profile: ") + e.what());
  }
}

LanguageIdentifier LanguageIdentifier::load(const std::filesystem::path& path) {
  return from_json(io::read_file(path));
}

void LanguageIdentifier::save(const std::filesystem::path& path) const { io::write_file_atomic(path, to_json()); }

std::map<std::string, LanguageCode> load_external_labels(const std::filesystem::path& path,
                                                         const LanguageRegistry& registry) {
  std::map<std::string, LanguageCode> out;
  std::size_t lineno = 0;
  for (const auto& line : io::read_lines(path)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    auto fields = text::split(line, '\t');
    auto where = path.string() + ":" + std::to_string(lineno);
    if (fields.size() != 2) throw InputError(where + ": expected id<TAB>lang");
    std::string id(text::trim(fields[0]));
    auto label = text::trim(fields[1]);
    if (label.starts_with("__label__")) label.remove_prefix(9);
    if (id.empty()) throw InputError(where + ": empty record id");
    LanguageCode code;
    try {
      code = LanguageCode(label);
    } catch (const InputError&) {
      throw UnknownLanguageError(std::string(label));
    }
    registry.require(code);
    if (!out.emplace(id, code).second) throw InputError(where + ": duplicate record id '" + id + "'");
  }
  return out;
}

}  // namespace mtkit
