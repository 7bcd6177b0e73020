#include "mtkit/errors.hpp"

#include <atomic>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "mtkit/error.hpp"
#include "mtkit/io.hpp"
#include "mtkit/text.hpp"
#include "mtkit/version.hpp"

namespace mtkit {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

TokenizerId DetectorConfig::tokenizer_for(const LanguageCode& lang) const {
  auto it = tokenizers.find(lang);
  return it == tokenizers.end() ? default_tokenizer : it->second;
}

std::string DetectorConfig::signature() const {
  std::ostringstream s;
  s << "errors|sc:sentbleu>" << text::format_double(sc_bleu_threshold) << ",smooth:" << sc_smoothing.id()
    << "|ou:ratio>" << text::format_double(ou_upper) << "|<" << text::format_double(ou_lower)
    << "|oh:n<=" << oh_n_max << ",repeats>=" << oh_min_repeats << "|tok:" << to_string(default_tokenizer);
  for (const auto& [lang, tok] : tokenizers) s << "," << lang.str() << "=" << to_string(tok);
  s << "|version:" << kToolkitId;
  return s.str();
}

HypothesisLanguage::HypothesisLanguage(const LanguageIdentifier* identifier,
                                       const std::map<std::string, LanguageCode>* external)
    : identifier_(identifier), external_(external) {
  if (!identifier_ && !external_) throw InputError("off-target detection needs an identifier or external labels");
}

std::optional<LanguageCode> HypothesisLanguage::label(const TranslationRecord& r) const {
  if (external_) {
    auto it = external_->find(r.pair.str() + ":" + r.id);
    if (it == external_->end()) it = external_->find(r.id);
    if (it != external_->end()) return it->second;
  }
  if (!identifier_) return std::nullopt;
  return identifier_->identify(r.hyp).lang;
}

std::string HypothesisLanguage::source_name() const {
  if (external_ && !external_->empty()) return identifier_ ? "external+builtin" : "external";
  return "builtin";
}

bool detect_source_copy(const TranslationRecord& r, const DetectorConfig& config) {
  auto tok = config.tokenizer_for(r.pair.source);
  auto hyp = tokenize(r.hyp, tok);
  if (hyp.empty()) return false;
  auto src = tokenize(r.src, tok);
  return sentence_bleu(hyp, src, config.sc_smoothing).score > config.sc_bleu_threshold;
}

bool detect_off_target(const TranslationRecord& r, const HypothesisLanguage& lid, bool* undetermined) {
  auto label = lid.label(r);
  if (undetermined) *undetermined = !label.has_value();
  return !label || *label != r.pair.target;
}

bool detect_over_under(const TranslationRecord& r, const DetectorConfig& config) {
  auto tok = config.tokenizer_for(r.pair.target);
  auto ref = tokenize(r.ref, tok);
  if (ref.empty()) throw InputError("record '" + r.id + "': empty reference");
  double ratio = length_ratio(tokenize(r.hyp, tok), ref);
  return ratio > config.ou_upper || ratio < config.ou_lower;
}

bool has_oscillation(const std::vector<std::string>& tokens, std::size_t n_max, std::size_t min_repeats) {
  if (n_max == 0) throw InputError("oscillation n_max must be at least 1");
  if (tokens.empty()) return false;
  if (min_repeats <= 1) return true;
  std::unordered_map<std::string_view, std::uint32_t> vocab;
  std::vector<std::uint32_t> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(vocab.try_emplace(t, static_cast<std::uint32_t>(vocab.size())).first->second);
  // k back-to-back copies of an n-gram are exactly a run of (k-1)*n positions j with
  // ids[j] == ids[j+n].
  for (std::size_t n = 1; n <= n_max && 2 * n <= ids.size(); ++n) {
    std::size_t need = (min_repeats - 1) * n;
    std::size_t run = 0;
    for (std::size_t j = 0; j + n < ids.size(); ++j) {
      run = ids[j] == ids[j + n] ? run + 1 : 0;
      if (run >= need) return true;
    }
  }
  return false;
}

bool detect_oscillatory_hallucination(const TranslationRecord& r, const DetectorConfig& config) {
  auto toks = tokenize(r.hyp, config.tokenizer_for(r.pair.target));
  return has_oscillation(toks.tokens, config.oh_n_max, config.oh_min_repeats);
}

ErrorFlags detect_errors(const TranslationRecord& r, const DetectorConfig& config, const HypothesisLanguage& lid) {
  ErrorFlags f;
  f.sc = detect_source_copy(r, config);
  f.ot = detect_off_target(r, lid, &f.ot_undetermined);
  f.ou = detect_over_under(r, config);
  f.oh = detect_oscillatory_hallucination(r, config);
  return f;
}

ErrorCounts& ErrorCounts::operator+=(const ErrorFlags& f) {
  ++n;
  sc += f.sc;
  ot += f.ot;
  ou += f.ou;
  oh += f.oh;
  any += f.any();
  ot_undetermined += f.ot_undetermined;
  return *this;
}

std::map<std::string, ErrorFlags> ErrorReport::by_id() const {
  std::map<std::string, ErrorFlags> out;
  for (const auto& [id, f] : per_record) {
    if (!out.emplace(id, f).second) throw InputError("record id '" + id + "' repeats across pairs; use by_pair ids");
  }
  return out;
}

ErrorReport build_error_report(const std::vector<TranslationRecord>& records, const DetectorConfig& config,
                               const HypothesisLanguage& lid, unsigned threads) {
  if (records.empty()) throw InputError("no records to check");
  std::set<std::pair<LanguagePair, std::string_view>> ids;
  for (const auto& r : records) {
    if (!ids.emplace(r.pair, r.id).second) throw InputError("duplicate record id '" + r.id + "' for " + r.pair.str());
  }
  std::vector<ErrorFlags> flags(records.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, records.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    constexpr std::size_t kChunk = 64;
    for (;;) {
      std::size_t begin = next.fetch_add(kChunk);
      if (begin >= records.size() || failed) return;
      std::size_t end = std::min(records.size(), begin + kChunk);
      try {
        for (std::size_t i = begin; i < end; ++i) flags[i] = detect_errors(records[i], config, lid);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  ErrorReport report;
  report.signature = config.signature() + "|lid:" + lid.source_name();
  report.per_record.reserve(records.size());
  bool one_pair = true;
  for (std::size_t i = 0; i < records.size(); ++i) {
    report.per_record.emplace_back(records[i].id, flags[i]);
    report.counts += flags[i];
    one_pair = one_pair && records[i].pair == records.front().pair;
  }
  if (one_pair) report.pair = records.front().pair;
  return report;
}

std::map<LanguagePair, ErrorReport> split_by_pair(const ErrorReport& report,
                                                  const std::vector<TranslationRecord>& records) {
  if (records.size() != report.per_record.size()) throw InputError("report does not match the records");
  std::map<LanguagePair, ErrorReport> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].id != report.per_record[i].first) throw InputError("report does not match the records");
    auto& r = out[records[i].pair];
    r.pair = records[i].pair;
    r.signature = report.signature;
    r.per_record.push_back(report.per_record[i]);
    r.counts += report.per_record[i].second;
  }
  return out;
}

SubsetMode parse_subset_mode(std::string_view name) {
  if (name == "per_system" || name == "per-system") return SubsetMode::PerSystem;
  if (name == "intersection") return SubsetMode::Intersection;
  throw InputError("unknown subset mode '" + std::string(name) + "'");
}

std::map<std::string, std::vector<TranslationRecord>> error_free_subset(
    const std::map<std::string, std::vector<TranslationRecord>>& results,
    const std::map<std::string, ErrorReport>& reports, SubsetMode mode) {
  using Key = std::pair<LanguagePair, std::string>;
  std::optional<std::set<Key>> shared;
  std::map<std::string, std::map<Key, ErrorFlags>> flags;
  for (const auto& [system, records] : results) {
    std::set<Key> ids;
    for (const auto& r : records) ids.emplace(r.pair, r.id);
    if (!shared) {
      shared = ids;
    } else if (ids != *shared) {
      throw InputError("system '" + system + "' does not cover the same record ids as '" + results.begin()->first + "'");
    }
    auto rep = reports.find(system);
    if (rep == reports.end()) throw InputError("no error report for system '" + system + "'");
    const auto& per = rep->second.per_record;
    if (per.size() != records.size()) throw InputError("report for '" + system + "' does not match its records");
    auto& f = flags[system];
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (per[i].first != records[i].id) {
        throw InputError("report for '" + system + "' lacks record '" + records[i].id + "'");
      }
      f[{records[i].pair, records[i].id}] = per[i].second;
    }
  }
  std::set<Key> clean_everywhere;
  if (shared) {
    for (const auto& key : *shared) {
      bool clean = true;
      for (const auto& [system, f] : flags) clean = clean && !f.at(key).any();
      if (clean) clean_everywhere.insert(key);
    }
  }
  std::map<std::string, std::vector<TranslationRecord>> out;
  for (const auto& [system, records] : results) {
    auto& kept = out[system];
    for (const auto& r : records) {
      Key key{r.pair, r.id};
      bool keep = mode == SubsetMode::Intersection ? clean_everywhere.count(key) > 0 : !flags[system].at(key).any();
      if (keep) kept.push_back(r);
    }
  }
  return out;
}

namespace {

std::string required_string(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) throw InputError(std::string("missing string field '") + key + "'");
  return j[key].get<std::string>();
}

}  // namespace

std::vector<TranslationRecord> parse_results(std::string_view jsonl, const LanguageRegistry& registry,
                                             std::string_view origin) {
  std::vector<TranslationRecord> out;
  std::set<std::pair<LanguagePair, std::string>> ids;
  std::size_t lineno = 0;
  for (auto line : text::split(jsonl, '\n')) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::trim(line).empty()) continue;
    auto where = std::string(origin) + ":" + std::to_string(lineno) + ": ";
    try {
      json j = json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object()) throw InputError("not a JSON object");
      TranslationRecord r;
      if (j.contains("id") && j["id"].is_number_integer()) r.id = std::to_string(j["id"].get<long long>());
      else r.id = required_string(j, "id");
      r.pair = {LanguageCode(required_string(j, "src_lang")), LanguageCode(required_string(j, "tgt_lang"))};
      registry.require(r.pair.source);
      registry.require(r.pair.target);
      r.src = required_string(j, "src");
      r.hyp = required_string(j, "hyp");
      r.ref = required_string(j, "ref");
      for (const auto* f : {&r.src, &r.hyp, &r.ref}) {
        if (!text::is_valid_utf8(*f)) throw InputError("text is not valid UTF-8");
      }
      if (j.contains("external") && !j["external"].is_null()) {
        for (const auto& [k, v] : j["external"].items()) {
          if (!v.is_number()) throw InputError("external score '" + k + "' is not a number");
          r.external[k] = v.get<double>();
        }
      }
      if (!ids.emplace(r.pair, r.id).second) throw InputError("duplicate record id '" + r.id + "' for " + r.pair.str());
      out.push_back(std::move(r));
    } catch (const UnknownLanguageError& e) {
      throw UnknownLanguageError(e.code());
    } catch (const InputError& e) {
      throw InputError(where + e.what());
    }
  }
  return out;
}

std::vector<TranslationRecord> read_results(const std::filesystem::path& path, const LanguageRegistry& registry) {
  return parse_results(io::read_file(path), registry, path.string());
}

std::string results_to_jsonl(const std::vector<TranslationRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    ordered_json j;
    j["id"] = r.id;
    j["src_lang"] = r.pair.source.str();
    j["tgt_lang"] = r.pair.target.str();
    j["src"] = r.src;
    j["hyp"] = r.hyp;
    j["ref"] = r.ref;
    if (!r.external.empty()) j["external"] = r.external;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string error_report_json(const ErrorReport& report) {
  ordered_json j;
  j["signature"] = report.signature;
  j["pair"] = report.pair ? json(report.pair->str()) : json(nullptr);
  j["n_records"] = report.counts.n;
  j["ratios"] = {{"sc", report.sc_ratio()},
                 {"ot", report.ot_ratio()},
                 {"ou", report.ou_ratio()},
                 {"oh", report.oh_ratio()},
                 {"any", report.any_ratio()}};
  j["ot_undetermined"] = report.counts.ot_undetermined;
  auto& recs = j["records"] = ordered_json::array();
  for (const auto& [id, f] : report.per_record) {
    recs.push_back({{"id", id}, {"sc", f.sc}, {"ot", f.ot}, {"ou", f.ou}, {"oh", f.oh}, {"any", f.any()},
                    {"ot_undetermined", f.ot_undetermined}});
  }
  return j.dump(1) + "\n";
}

std::string error_summary_tsv(const std::map<LanguagePair, ErrorReport>& by_pair) {
  std::string out = "pair\tn_records\tsc\tot\tou\toh\tany\n";
  for (const auto& [pair, r] : by_pair) {
    out += pair.str() + "\t" + std::to_string(r.counts.n);
    for (double v : {r.sc_ratio(), r.ot_ratio(), r.ou_ratio(), r.oh_ratio(), r.any_ratio()}) {
      out += "\t" + text::format_fixed(v, 6);
    }
    out += "\n";
  }
  return out;
}

}  // namespace mtkit
