#include "config.hpp"

#include <set>

#include <json.hpp>

#include "mtkit/digest.hpp"
#include "mtkit/error.hpp"
#include "mtkit/io.hpp"

namespace mtkit::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kKeys{"registry",   "corpora",  "monolingual", "partition", "quality",
                                  "selection",  "templates", "detectors",  "bleu",      "langid",
                                  "output_dir", "threads"};

class Reader {
 public:
  Reader(std::filesystem::path base, std::string origin) : base_(std::move(base)), origin_(std::move(origin)) {}

  [[noreturn]] void fail(const std::string& where, const std::string& what) const {
    throw InputError(origin_ + ": " + where + ": " + what);
  }

  std::filesystem::path existing(const json& j, const std::string& where) const {
    if (!j.is_string()) fail(where, "expected a path string");
    std::filesystem::path p = j.get<std::string>();
    if (p.is_relative()) p = base_ / p;
    if (!std::filesystem::exists(p)) fail(where, "path '" + p.string() + "' does not exist");
    return p;
  }

  std::filesystem::path output(const json& j, const std::string& where) const {
    if (!j.is_string()) fail(where, "expected a path string");
    std::filesystem::path p = j.get<std::string>();
    return p.is_relative() ? base_ / p : p;
  }

  template <typename T>
  T get(const json& j, const std::string& where) const {
    try {
      return j.get<T>();
    } catch (const json::exception&) {
      fail(where, "wrong type");
    }
  }

  template <typename F>
  auto wrap(const std::string& where, F&& f) const {
    try {
      return f();
    } catch (const UnknownLanguageError&) {
      throw;
    } catch (const InputError& e) {
      fail(where, e.what());
    }
  }

 private:
  std::filesystem::path base_;
  std::string origin_;
};

void check_keys(const Reader& r, const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) r.fail(where, "expected an object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) r.fail(where, "unknown key '" + k + "'");
  }
}

}  // namespace

ExperimentConfig default_config() {
  ExperimentConfig c;
  c.registry = LanguageRegistry::builtin();
  c.digest = sha256_hex(json::object().dump());
  return c;
}

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir, std::string origin) {
  json j = json::parse(text, nullptr, false);
  Reader r(base_dir, origin);
  if (j.is_discarded()) r.fail("document", "not valid JSON");
  check_keys(r, j, kKeys, "document");

  ExperimentConfig c = default_config();
  c.digest = sha256_hex(j.dump());
  if (j.contains("registry")) {
    c.registry_path = r.existing(j["registry"], "registry");
    c.registry = r.wrap("registry", [&] { return LanguageRegistry::load(*c.registry_path); });
  }
  auto lang = [&](const json& v, const std::string& where) {
    auto code = r.wrap(where, [&] { return LanguageCode(r.get<std::string>(v, where)); });
    c.registry.require(code);
    return code;
  };

  if (j.contains("corpora")) {
    const auto& list = j["corpora"];
    if (!list.is_array()) r.fail("corpora", "expected a list");
    if (list.empty()) r.fail("corpora", "the corpus list is empty");
    c.corpora.emplace();
    for (std::size_t i = 0; i < list.size(); ++i) {
      auto where = "corpora[" + std::to_string(i) + "]";
      check_keys(r, list[i], {"path", "format", "pair"}, where);
      CorpusEntry e;
      if (!list[i].contains("path")) r.fail(where, "missing 'path'");
      e.path = r.existing(list[i]["path"], where + ".path");
      e.format = list[i].contains("format") ? r.get<std::string>(list[i]["format"], where + ".format") : "tsv-pair";
      if (e.format != "multiparallel") r.wrap(where + ".format", [&] { return parse_corpus_format(e.format); });
      if (list[i].contains("pair")) {
        e.pair = r.wrap(where + ".pair", [&] { return LanguagePair::parse(r.get<std::string>(list[i]["pair"], where)); });
        c.registry.require(e.pair->source);
        c.registry.require(e.pair->target);
      }
      if (e.format != "multiparallel" && e.format != "jsonl" && !e.pair) r.fail(where, "TSV corpora need a 'pair'");
      c.corpora->push_back(std::move(e));
    }
  }

  if (j.contains("monolingual")) {
    if (!j["monolingual"].is_array()) r.fail("monolingual", "expected a list");
    for (std::size_t i = 0; i < j["monolingual"].size(); ++i) {
      const auto& m = j["monolingual"][i];
      auto where = "monolingual[" + std::to_string(i) + "]";
      check_keys(r, m, {"lang", "path"}, where);
      if (!m.contains("lang") || !m.contains("path")) r.fail(where, "needs 'lang' and 'path'");
      c.monolingual.push_back({lang(m["lang"], where + ".lang"), r.existing(m["path"], where + ".path")});
    }
  }

  if (j.contains("partition")) c.partition = r.existing(j["partition"], "partition");
  if (j.contains("templates")) c.templates = r.existing(j["templates"], "templates");

  if (j.contains("quality")) {
    const auto& q = j["quality"];
    check_keys(r, q, {"min_score", "top", "bottom"}, "quality");
    if (q.size() != 1) r.fail("quality", "give exactly one of min_score, top, bottom");
    if (q.contains("min_score")) c.quality = QualityFilter::at_least(r.get<double>(q["min_score"], "quality.min_score"));
    if (q.contains("top")) c.quality = QualityFilter::top(r.get<std::size_t>(q["top"], "quality.top"));
    if (q.contains("bottom")) c.quality = QualityFilter::bottom(r.get<std::size_t>(q["bottom"], "quality.bottom"));
  }

  if (j.contains("selection")) {
    const auto& s = j["selection"];
    check_keys(r, s, {"per_pair", "strategy"}, "selection");
    if (s.contains("per_pair")) c.selection.per_pair = r.get<std::size_t>(s["per_pair"], "selection.per_pair");
    if (c.selection.per_pair == 0) r.fail("selection.per_pair", "must be at least 1");
    if (s.contains("strategy")) {
      auto name = r.get<std::string>(s["strategy"], "selection.strategy");
      if (name == "random") {
        c.selection.strategy = SelectionConfig::Strategy::Random;
      } else if (name == "top") {
        c.selection.strategy = SelectionConfig::Strategy::Top;
      } else {
        r.fail("selection.strategy", "expected 'random' or 'top'");
      }
    }
  }

  if (j.contains("detectors")) {
    const auto& d = j["detectors"];
    check_keys(r, d,
               {"sc_bleu_threshold", "sc_smoothing", "ou_upper", "ou_lower", "oh_n_max", "oh_min_repeats", "tokenizers",
                "default_tokenizer"},
               "detectors");
    auto& dc = c.detectors;
    if (d.contains("sc_bleu_threshold")) dc.sc_bleu_threshold = r.get<double>(d["sc_bleu_threshold"], "detectors.sc_bleu_threshold");
    if (d.contains("sc_smoothing")) {
      dc.sc_smoothing = r.wrap("detectors.sc_smoothing", [&] { return Smoothing::parse(r.get<std::string>(d["sc_smoothing"], "detectors.sc_smoothing")); });
    }
    if (d.contains("ou_upper")) dc.ou_upper = r.get<double>(d["ou_upper"], "detectors.ou_upper");
    if (d.contains("ou_lower")) dc.ou_lower = r.get<double>(d["ou_lower"], "detectors.ou_lower");
    if (!(dc.ou_lower < dc.ou_upper)) r.fail("detectors", "ou_lower must be below ou_upper");
    if (d.contains("oh_n_max")) dc.oh_n_max = r.get<std::size_t>(d["oh_n_max"], "detectors.oh_n_max");
    if (d.contains("oh_min_repeats")) dc.oh_min_repeats = r.get<std::size_t>(d["oh_min_repeats"], "detectors.oh_min_repeats");
    if (dc.oh_n_max == 0 || dc.oh_min_repeats < 2) r.fail("detectors", "oh_n_max must be >= 1 and oh_min_repeats >= 2");
    if (d.contains("tokenizers")) {
      if (!d["tokenizers"].is_object()) r.fail("detectors.tokenizers", "expected an object");
      dc.tokenizers.clear();
      for (const auto& [k, v] : d["tokenizers"].items()) {
        auto where = "detectors.tokenizers." + k;
        dc.tokenizers[lang(k, where)] = r.wrap(where, [&] { return parse_tokenizer(r.get<std::string>(v, where)); });
      }
    }
    if (d.contains("default_tokenizer")) {
      dc.default_tokenizer = r.wrap("detectors.default_tokenizer", [&] {
        return parse_tokenizer(r.get<std::string>(d["default_tokenizer"], "detectors.default_tokenizer"));
      });
    }
  }

  if (j.contains("bleu")) {
    check_keys(r, j["bleu"], {"smoothing"}, "bleu");
    if (j["bleu"].contains("smoothing")) {
      c.bleu_smoothing = r.wrap("bleu.smoothing", [&] { return Smoothing::parse(r.get<std::string>(j["bleu"]["smoothing"], "bleu.smoothing")); });
    }
  }

  if (j.contains("langid")) {
    const auto& l = j["langid"];
    check_keys(r, l, {"model", "train_dir"}, "langid");
    if (l.contains("model")) c.langid_model = r.existing(l["model"], "langid.model");
    if (l.contains("train_dir")) c.langid_train_dir = r.existing(l["train_dir"], "langid.train_dir");
    if (c.langid_model && c.langid_train_dir) r.fail("langid", "give either 'model' or 'train_dir'");
  }

  if (j.contains("output_dir")) c.output_dir = r.output(j["output_dir"], "output_dir");
  if (j.contains("threads")) {
    c.threads = r.get<unsigned>(j["threads"], "threads");
    if (c.threads == 0) r.fail("threads", "must be at least 1");
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  auto c = parse_config(io::read_file(path), path.parent_path().empty() ? "." : path.parent_path(), path.string());
  c.source = path;
  return c;
}

}  // namespace mtkit::cli
