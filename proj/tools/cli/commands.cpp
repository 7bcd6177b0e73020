#include "commands.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mtkit/analysis.hpp"
#include "mtkit/corpus.hpp"
#include "mtkit/error.hpp"
#include "mtkit/instructions.hpp"
#include "mtkit/io.hpp"
#include "mtkit/parallel.hpp"
#include "mtkit/partition.hpp"
#include "mtkit/random.hpp"
#include "mtkit/text.hpp"
#include "mtkit/version.hpp"
#include "output.hpp"

namespace mtkit::cli {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::filesystem::path Globals::out_dir() const {
  if (out) return *out;
  if (config.output_dir) return *config.output_dir;
  throw InputError("no output directory: pass --out or set output_dir in the config");
}

std::uint64_t Globals::require_seed(const std::string& command) const {
  if (!seed) throw InputError(command + " samples or shuffles data and needs an explicit --seed");
  return *seed;
}

namespace {

// Runs one pipeline stage, prefixing errors with its name.
template <typename F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const IoError& e) {
    throw IoError(std::string(name) + ": " + e.what());
  } catch (const Error& e) {
    throw InputError(std::string(name) + ": " + e.what());
  }
}

std::pair<std::string, std::filesystem::path> split_named(const std::string& arg, const char* what) {
  auto eq = arg.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == arg.size()) {
    throw InputError(std::string(what) + " '" + arg + "' must look like name=path");
  }
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

std::string tsv_header(const std::string& signature, const std::string& digest) {
  return "# " + signature + "\n# config_digest=" + digest + "\n";
}

// First "# ..." line of a TSV that is not the config digest.
std::string comment_signature(const std::string& contents) {
  for (auto line : text::split(contents, '\n')) {
    if (line.empty() || line.front() != '#') break;
    auto body = std::string(text::trim(line.substr(1)));
    if (body.rfind("config_digest=", 0) != 0) return body;
  }
  return "unspecified";
}

std::vector<std::vector<std::string>> read_table(const std::filesystem::path& path, std::size_t columns,
                                                 const std::string& first_header) {
  std::vector<std::vector<std::string>> rows;
  std::size_t lineno = 0;
  for (const auto& line : io::read_lines(path)) {
    ++lineno;
    if (text::trim(line).empty() || line.front() == '#') continue;
    auto f = text::split(line, '\t');
    if (f[0] == first_header) continue;
    if (f.size() != columns) {
      throw InputError(path.string() + ":" + std::to_string(lineno) + ": expected " + std::to_string(columns) + " columns");
    }
    rows.emplace_back(f.begin(), f.end());
  }
  return rows;
}

double number(const std::string& cell, const std::filesystem::path& path) {
  auto v = text::parse_double(cell);
  if (!v) throw InputError(path.string() + ": bad number '" + cell + "'");
  return *v;
}

Corpus load_entry(const std::filesystem::path& path, const std::string& format, const std::optional<LanguagePair>& pair,
                  const std::vector<LanguagePair>* allowed) {
  if (format == "multiparallel") {
    std::vector<LanguagePair> only;
    if (pair) only.push_back(*pair);
    return load_multiparallel(path, pair ? &only : allowed);
  }
  return load_corpus(path, parse_corpus_format(format), pair);
}

std::map<LanguageCode, std::vector<std::string>> read_mono_dir(const std::filesystem::path& dir,
                                                               const LanguageRegistry& registry) {
  std::map<LanguageCode, std::vector<std::string>> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".txt") continue;
    LanguageCode lang(entry.path().stem().string());
    registry.require(lang);
    auto& lines = out[lang];
    for (auto& l : io::read_lines(entry.path())) {
      if (!text::trim(l).empty()) lines.push_back(std::move(l));
    }
  }
  if (out.empty()) throw InputError("no <lang>.txt files in " + dir.string());
  return out;
}

std::vector<LanguageCode> keys_of(const std::map<LanguageCode, std::vector<std::string>>& m) {
  std::vector<LanguageCode> out;
  for (const auto& [k, v] : m) out.push_back(k);
  return out;
}

// Hypothesis language source for off-target detection.
struct LidSource {
  std::optional<LanguageIdentifier> identifier;
  std::optional<std::map<std::string, LanguageCode>> labels;

  HypothesisLanguage view() const {
    return HypothesisLanguage(identifier ? &*identifier : nullptr, labels ? &*labels : nullptr);
  }
};

LidSource make_lid(const ExperimentConfig& c, const std::optional<std::filesystem::path>& labels, OutputDir& out) {
  LidSource lid;
  if (c.langid_model) {
    lid.identifier = stage("load_langid", [&] { return LanguageIdentifier::load(*c.langid_model); });
    out.input("langid_model", *c.langid_model);
  } else if (c.langid_train_dir) {
    lid.identifier = stage("train_langid", [&] {
      auto mono = read_mono_dir(*c.langid_train_dir, c.registry);
      return LanguageIdentifier::train(mono, keys_of(mono));
    });
  }
  if (labels) {
    lid.labels = stage("load_labels", [&] { return load_external_labels(*labels, c.registry); });
    out.input("labels", *labels);
  }
  if (!lid.identifier && !lid.labels) {
    throw InputError("off-target detection needs hypothesis languages: set langid.model or langid.train_dir in the "
                     "config, or pass --labels");
  }
  return lid;
}

void attach_refs(std::vector<TranslationRecord>& records, const std::filesystem::path& path,
                 const LanguageRegistry& registry) {
  std::map<std::pair<std::string, LanguageCode>, std::string> refs;
  std::size_t lineno = 0;
  for (const auto& line : io::read_lines(path)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    auto where = path.string() + ":" + std::to_string(lineno);
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("id") || !j.contains("lang") || !j.contains("text")) {
      throw InputError(where + ": expected {\"id\", \"lang\", \"text\"}");
    }
    std::string id = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
    LanguageCode lang(j["lang"].get<std::string>());
    registry.require(lang);
    if (!refs.emplace(std::make_pair(id, lang), j["text"].get<std::string>()).second) {
      throw InputError(where + ": duplicate reference " + id + " (" + lang.str() + ")");
    }
  }
  for (auto& r : records) {
    auto it = refs.find({r.id, r.pair.target});
    if (it == refs.end()) throw InputError("no reference for record '" + r.id + "' in " + r.pair.target.str());
    r.ref = it->second;
  }
}

std::vector<LanguageCode> languages_in(const std::vector<TranslationRecord>& records, const LanguageRegistry& registry) {
  std::set<LanguageCode> seen;
  for (const auto& r : records) {
    seen.insert(r.pair.source);
    seen.insert(r.pair.target);
  }
  std::vector<LanguageCode> out;
  for (const auto& l : registry.codes()) {
    if (seen.count(l)) out.push_back(l);
  }
  return out;
}

std::string grid_file(const ScoreGrid& grid, const std::string& signature, const std::string& digest) {
  return tsv_header(signature, digest) + grid.to_tsv();
}

NamedGrid read_named_grid(const std::string& name, const std::filesystem::path& path) {
  auto contents = io::read_file(path);
  auto grid = stage("load_grid", [&] {
    try {
      return ScoreGrid::parse_tsv(contents);
    } catch (const InputError& e) {
      throw InputError(path.string() + ": " + e.what());
    }
  });
  return {name, comment_signature(contents), std::move(grid)};
}

void emit(const Globals& g, const AnalysisBundle& bundle, OutputDir& out) {
  for (const auto& p : emit_report(bundle, parse_report_format(g.format), out.path())) {
    out.adopt(p.filename().string());
  }
}

}  // namespace

// prepare -------------------------------------------------------------------

void cmd_prepare(const Globals& g) {
  const auto& c = g.config;
  if (!c.corpora) throw InputError("prepare: the config lists no corpora");
  auto seed = g.require_seed("prepare");
  OutputDir out(g.out_dir(), "prepare", c.digest);
  out.info()["seed"] = seed;

  std::optional<PartitionSpec> spec;
  std::vector<LanguagePair> allowed;
  if (c.partition) {
    spec = stage("load_partition", [&] { return load_partition(*c.partition, c.registry); });
    allowed.assign(spec->train_pairs.begin(), spec->train_pairs.end());
    out.input("partition", *c.partition);
  }
  InstructionTemplates templates;
  if (c.templates) {
    templates = stage("load_templates", [&] { return InstructionTemplates::load(*c.templates); });
    out.input("templates", *c.templates);
  }

  ordered_json stages = ordered_json::array();
  std::vector<ParallelSentence> all;
  for (std::size_t i = 0; i < c.corpora->size(); ++i) {
    const auto& e = (*c.corpora)[i];
    auto part = stage("load_corpus", [&] { return load_entry(e.path, e.format, e.pair, spec ? &allowed : nullptr); });
    out.input("corpora[" + std::to_string(i) + "]", e.path);
    stages.push_back({{"stage", "load_corpus"},
                      {"input", i},
                      {"lines", part.load_report().lines},
                      {"accepted", part.load_report().accepted},
                      {"malformed", part.load_report().malformed.size()},
                      {"sentences", part.size()}});
    all.insert(all.end(), part.pairs().begin(), part.pairs().end());
  }
  Corpus corpus(std::move(all), "config corpora");

  if (c.quality) {
    corpus = stage("filter_by_quality", [&] { return filter_by_quality(corpus, *c.quality); });
    stages.push_back({{"stage", "filter_by_quality"}, {"sentences", corpus.size()}});
  }
  if (spec) {
    std::vector<ParallelSentence> kept;
    for (const auto& s : corpus.pairs()) {
      if (spec->train_pairs.count(s.pair())) kept.push_back(s);
    }
    corpus = corpus.derive(std::move(kept), "partition " + spec->name);
    stages.push_back({{"stage", "restrict_to_partition"}, {"sentences", corpus.size()}});
  }
  if (corpus.empty()) throw InputError("sample_per_pair: no sentences left to sample from");
  corpus = stage("sample_per_pair", [&] {
    return c.selection.strategy == SelectionConfig::Strategy::Random ? sample_per_pair(corpus, c.selection.per_pair, seed)
                                                                     : top_per_pair(corpus, c.selection.per_pair);
  });
  stages.push_back({{"stage", "sample_per_pair"},
                    {"strategy", c.selection.strategy == SelectionConfig::Strategy::Random ? "random" : "top"},
                    {"per_pair", c.selection.per_pair},
                    {"sentences", corpus.size()}});

  std::map<LanguagePair, std::vector<const ParallelSentence*>> groups;
  for (const auto& s : corpus.pairs()) groups[s.pair()].push_back(&s);
  std::vector<const std::vector<const ParallelSentence*>*> items;
  for (const auto& [p, v] : groups) items.push_back(&v);
  std::vector<std::vector<InstructionInstance>> rendered(items.size());
  stage("render", [&] {
    parallel_for(items.size(), c.threads, [&](std::size_t i) {
      for (const auto* s : *items[i]) rendered[i].push_back(render_translation_instruction(*s, c.registry, templates));
    });
    return 0;
  });
  std::vector<InstructionInstance> instances;
  for (auto& r : rendered) std::move(r.begin(), r.end(), std::back_inserter(instances));
  for (std::size_t i = 0; i < c.monolingual.size(); ++i) {
    const auto& m = c.monolingual[i];
    stage("render", [&] {
      for (const auto& line : io::read_lines(m.path)) {
        if (!text::trim(line).empty()) instances.push_back(render_monolingual_instruction(m.lang, line, c.registry, templates));
      }
      return 0;
    });
    out.input("monolingual[" + std::to_string(i) + "]", m.path);
  }

  auto manifest = stage("build_training_file",
                        [&] { return build_training_file(instances, derive_seed(seed, "shuffle"), out.path() / "train.txt"); });
  out.adopt("train.txt");

  auto mj = ordered_json::parse(manifest.to_json());
  mj["config_digest"] = c.digest;
  mj["partition"] = spec ? spec->name : "";
  ordered_json missing = ordered_json::array();
  if (spec) {
    for (const auto& p : spec->train_pairs) {
      if (!groups.count(p)) missing.push_back(p.str());
    }
  }
  mj["pairs_without_data"] = missing;
  mj["stages"] = stages;
  out.write("manifest.json", mj.dump(1) + "\n");
  out.info()["total"] = manifest.total;
  out.info()["pairs"] = manifest.per_pair_counts.size();
  out.finish();
}

// filter-quality ------------------------------------------------------------

void cmd_filter_quality(const Globals& g, const FilterOptions& o) {
  int given = (o.min_score ? 1 : 0) + (o.top ? 1 : 0) + (o.bottom ? 1 : 0);
  if (given != 1) throw InputError("filter-quality needs exactly one of --min-score, --top, --bottom");
  auto format = parse_corpus_format(o.corpus_format);
  std::optional<LanguagePair> pair;
  if (!o.pair.empty()) pair = LanguagePair::parse(o.pair);
  OutputDir out(g.out_dir(), "filter-quality", g.config.digest);
  auto corpus = stage("load_corpus", [&] { return load_corpus(o.input, format, pair); });
  out.input("input", o.input);
  QualityFilter f = o.min_score ? QualityFilter::at_least(*o.min_score)
                    : o.top     ? QualityFilter::top(*o.top)
                                : QualityFilter::bottom(*o.bottom);
  auto kept = stage("filter_by_quality", [&] { return filter_by_quality(corpus, f); });
  std::ostringstream body;
  write_corpus(kept, format, body);
  out.write(format == CorpusFormat::Jsonl ? "filtered.jsonl" : "filtered.tsv", body.str());
  out.info()["input_sentences"] = corpus.size();
  out.info()["kept"] = kept.size();
  out.info()["malformed"] = corpus.load_report().malformed.size();
  out.finish();
}

// make-icl ------------------------------------------------------------------

void cmd_make_icl(const Globals& g, const IclOptions& o) {
  auto seed = g.require_seed("make-icl");
  auto pair = LanguagePair::parse(o.pair);
  g.config.registry.require(pair.source);
  g.config.registry.require(pair.target);
  OutputDir out(g.out_dir(), "make-icl", g.config.digest);
  out.info()["seed"] = seed;
  auto pool = stage("load_corpus", [&] { return load_entry(o.pool, o.corpus_format, pair, nullptr); });
  out.input("pool", o.pool);
  std::vector<ParallelSentence> same;
  for (const auto& s : pool.pairs()) {
    if (s.pair() == pair) same.push_back(s);
  }
  std::vector<std::string> queries;
  for (auto& q : io::read_lines(o.queries)) {
    if (!text::trim(q).empty()) queries.push_back(std::string(text::trim(q)));
  }
  out.input("queries", o.queries);
  if (queries.empty()) throw InputError("make-icl: no queries in " + o.queries.string());
  std::vector<IclPrompt> prompts(queries.size());
  stage("build_icl_prompt", [&] {
    parallel_for(queries.size(), g.config.threads, [&](std::size_t i) {
      prompts[i] = build_icl_prompt(same, queries[i], o.k, derive_seed(seed, pair.str() + "#" + std::to_string(i)));
    });
    return 0;
  });
  std::string body;
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    ordered_json j;
    j["index"] = i;
    j["pair"] = pair.str();
    j["k"] = o.k;
    j["query"] = queries[i];
    j["prompt"] = prompts[i].rendered;
    body += j.dump() + "\n";
  }
  out.write("prompts.jsonl", body);
  out.info()["prompts"] = prompts.size();
  out.finish();
}

// partition -----------------------------------------------------------------

void cmd_partition(const Globals& g, const PartitionOptions& o) {
  const auto& c = g.config;
  auto path = o.spec ? o.spec : c.partition;
  if (!path) throw InputError("partition needs --spec or a partition in the config");
  OutputDir out(g.out_dir(), "partition", c.digest);
  auto spec = stage("load_partition", [&] { return load_partition(*path, c.registry); });
  out.input("spec", *path);
  std::vector<LanguageCode> langs;
  for (const auto& l : c.registry.codes()) {
    if (spec.contains(l)) langs.push_back(l);
  }
  std::map<Condition, std::size_t> counts;
  std::string rows = "src\ttgt\tcondition\n";
  for (const auto& d : enumerate_directions(langs)) {
    auto cond = classify(spec, d);
    ++counts[cond];
    rows += d.source.str() + "\t" + d.target.str() + "\t" + std::string(to_string(cond)) + "\n";
  }
  out.write("partition.json", spec.to_json());
  out.write("conditions.tsv", rows);
  out.write("condition_matrix.tsv", condition_matrix_tsv(spec, langs));
  ordered_json cj = ordered_json::object();
  for (const auto& [k, v] : counts) cj[std::string(to_string(k))] = v;
  out.info()["partition"] = spec.name;
  out.info()["directions"] = cj;
  if (o.scaling) {
    auto snaps = stage("load_scaling", [&] { return load_scaling_snapshots(*o.scaling, c.registry); });
    out.input("scaling", *o.scaling);
    std::string summary = "name\ttrain_pairs\tlanguages\n";
    for (const auto& s : snaps) {
      out.write(s.name + ".json", s.to_json());
      summary += s.name + "\t" + std::to_string(s.train_pairs.size()) + "\t" + std::to_string(s.languages().size()) + "\n";
    }
    out.write("snapshots.tsv", summary);
  }
  out.finish();
}

// evaluate / detect-errors --------------------------------------------------

void cmd_evaluate(const Globals& g, const EvaluateOptions& o, bool with_bleu) {
  const auto& c = g.config;
  const char* name = with_bleu ? "evaluate" : "detect-errors";
  OutputDir out(g.out_dir(), name, c.digest);
  auto records = stage("read_results", [&] { return read_results(o.results, c.registry); });
  out.input("results", o.results);
  if (o.refs) {
    stage("attach_refs", [&] {
      attach_refs(records, *o.refs, c.registry);
      return 0;
    });
    out.input("refs", *o.refs);
  }
  if (records.empty()) throw InputError(std::string(name) + ": no records in " + o.results.string());
  if (with_bleu) {
    auto langs = languages_in(records, c.registry);
    auto grid = stage("bleu_grid", [&] { return bleu_grid(records, langs, c.detectors, c.bleu_smoothing, c.threads); });
    out.write("bleu_grid.tsv", grid_file(grid, grid_signature(c.detectors, c.bleu_smoothing), c.digest));
    out.info()["directions"] = grid.size();
    out.info()["mean_bleu"] = overall_mean(grid);
  }
  auto lid = make_lid(c, o.labels, out);
  auto report = stage("detect_errors", [&] { return build_error_report(records, c.detectors, lid.view(), c.threads); });
  auto ej = ordered_json::parse(error_report_json(report));
  ej["config_digest"] = c.digest;
  out.write("errors.json", ej.dump(1) + "\n");
  out.write("errors.tsv", tsv_header(report.signature, c.digest) + error_summary_tsv(split_by_pair(report, records)));
  out.info()["records"] = records.size();
  out.info()["any_ratio"] = report.any_ratio();
  out.finish();
}

// pivot-gain ----------------------------------------------------------------

void cmd_pivot_gain(const Globals& g, const PivotOptions& o) {
  const auto& c = g.config;
  LanguageCode pivot(o.pivot);
  c.registry.require(pivot);
  OutputDir out(g.out_dir(), "pivot-gain", c.digest);
  NamedGrid direct, pivoted;
  if (o.direct_grid || o.pivot_grid) {
    if (!o.direct_grid || !o.pivot_grid) throw InputError("pivot-gain needs both --direct-grid and --pivot-grid");
    direct = read_named_grid("direct", *o.direct_grid);
    pivoted = read_named_grid("pivot", *o.pivot_grid);
    out.input("direct_grid", *o.direct_grid);
    out.input("pivot_grid", *o.pivot_grid);
  } else {
    if (!o.direct || !o.leg1 || !o.leg2) throw InputError("pivot-gain needs --direct, --leg1 and --leg2 (or two grids)");
    auto d = stage("read_results", [&] { return read_results(*o.direct, c.registry); });
    auto l1 = stage("read_results", [&] { return read_results(*o.leg1, c.registry); });
    auto l2 = stage("read_results", [&] { return read_results(*o.leg2, c.registry); });
    out.input("direct", *o.direct);
    out.input("leg1", *o.leg1);
    out.input("leg2", *o.leg2);
    auto composed = stage("compose_pivot", [&] { return compose_pivot(d, l1, l2, pivot); });
    auto langs = languages_in(d, c.registry);
    auto sig = grid_signature(c.detectors, c.bleu_smoothing);
    direct = {"direct", sig, stage("bleu_grid", [&] { return bleu_grid(d, langs, c.detectors, c.bleu_smoothing, c.threads); })};
    pivoted = {"pivot", sig,
               stage("bleu_grid", [&] { return bleu_grid(composed, langs, c.detectors, c.bleu_smoothing, c.threads); })};
  }
  auto gain = stage("pivot_gain", [&] { return pivot_gain(direct.grid, pivoted.grid, pivot); });
  AnalysisBundle bundle;
  bundle.title = "Pivot gain through " + pivot.str();
  bundle.config_digest = c.digest;
  bundle.grids = {direct, pivoted, {"gain", "pivot-minus-direct|pivot:" + pivot.str() + "|" + direct.signature, gain}};
  emit(g, bundle, out);
  if (gain.size()) {
    auto best = max_cell(gain);
    out.info()["max_gain"] = {{"pair", best.dir.str()}, {"value", best.value}};
  }
  out.finish();
}

// correlate / scaling-fit / report ------------------------------------------

void cmd_analyze(const Globals& g, const AnalyzeOptions& o, const std::string& command) {
  const auto& c = g.config;
  OutputDir out(g.out_dir(), command, c.digest);
  AnalysisBundle b;
  if (o.from) {
    b = stage("load_report", [&] { return AnalysisBundle::from_json(io::read_file(*o.from)); });
    out.input("from", *o.from);
  }
  if (!o.title.empty()) b.title = o.title;
  if (b.title.empty()) b.title = command;
  b.config_digest = c.digest;

  std::vector<Side> sides;
  for (const auto& s : o.sides) sides.push_back(parse_side(s));

  for (const auto& arg : o.grids) {
    auto [name, path] = split_named(arg, "--grid");
    b.grids.push_back(read_named_grid(name, path));
    out.input("grid:" + name, path);
  }

  if (o.partition) {
    auto spec = stage("load_partition", [&] { return load_partition(*o.partition, c.registry); });
    out.input("partition", *o.partition);
    for (const auto& ng : b.grids) {
      auto buckets = stage("bucket_by_condition", [&] { return bucket_by_condition(ng.grid, spec); });
      b.buckets.push_back({ng.name, spec.name, "mean-by-condition|partition:" + spec.name + "|" + ng.signature, buckets});
    }
  }

  for (const auto& arg : o.factors) {
    auto [name, path] = split_named(arg, "--factor");
    auto factor = stage("load_factors", [&] { return load_factors(path); });
    out.input("factor:" + name, path);
    for (const auto& ng : b.grids) {
      for (auto side : sides) {
        auto r = stage("correlate_factors", [&] { return correlate_factors(ng.grid, factor, side); });
        b.correlations.push_back({name, ng.name, side, r.rho, r.langs.size(),
                                  "spearman|side:" + std::string(to_string(side)) + "|factor:" + name});
      }
    }
  }

  if (o.features) {
    auto table = stage("load_features", [&] { return FeatureTable::load(*o.features); });
    out.input("features", *o.features);
    const LanguageCode en("en");
    for (auto cat : {FeatureCategory::Geography, FeatureCategory::Syntax, FeatureCategory::Phylogeny,
                     FeatureCategory::Phonology, FeatureCategory::Inventory}) {
      if (!table.contains(en, cat)) continue;
      for (const auto& ng : b.grids) {
        std::map<LanguageCode, double> sim;
        for (const auto& l : ng.grid.langs()) {
          if (l != en) sim[l] = stage("similarity_to_english", [&] { return similarity_to_english(table, l, cat); });
        }
        for (auto side : sides) {
          auto r = stage("correlate_factors", [&] { return correlate_factors(ng.grid, sim, side); });
          auto cname = "similarity:" + std::string(to_string(cat));
          b.correlations.push_back(
              {cname, ng.name, side, r.rho, r.langs.size(), "spearman|side:" + std::string(to_string(side)) + "|" + cname});
        }
      }
    }
  }

  if (o.points) {
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> series;
    std::vector<std::string> order;
    for (const auto& row : read_table(*o.points, 3, "series")) {
      if (!series.count(row[0])) order.push_back(row[0]);
      series[row[0]].first.push_back(number(row[1], *o.points));
      series[row[0]].second.push_back(number(row[2], *o.points));
    }
    out.input("points", *o.points);
    if (series.empty()) throw InputError("no points in " + o.points->string());
    for (const auto& name : order) {
      const auto& [ns, ys] = series[name];
      LogLinearFit fit;
      try {
        fit = loglinear_fit(ns, ys);
      } catch (const InputError& e) {
        throw InputError("series '" + name + "': " + e.what());
      }
      b.fits.push_back({name, ns, ys, fit, "loglinear|score=a+b*ln(n)|" + std::string(kToolkitId)});
    }
  }

  for (const auto& arg : o.errors) {
    auto [label, path] = split_named(arg, "--errors");
    auto sig = comment_signature(io::read_file(path));
    for (const auto& row : read_table(path, 7, "pair")) {
      b.errors.push_back({label, row[0], static_cast<std::size_t>(number(row[1], path)), number(row[2], path),
                          number(row[3], path), number(row[4], path), number(row[5], path), number(row[6], path), sig});
    }
    out.input("errors:" + label, path);
  }

  if (o.trend) {
    b.trend_signature = comment_signature(io::read_file(*o.trend));
    for (const auto& row : read_table(*o.trend, 7, "series")) {
      b.trend.push_back({row[0], static_cast<std::size_t>(number(row[1], *o.trend)), number(row[2], *o.trend),
                         number(row[3], *o.trend), number(row[4], *o.trend), number(row[5], *o.trend),
                         number(row[6], *o.trend)});
    }
    out.input("trend", *o.trend);
  }

  emit(g, b, out);
  out.finish();
}

// train-langid ----------------------------------------------------------------

void cmd_train_langid(const Globals& g, const LangIdOptions& o) {
  const auto& c = g.config;
  auto dir = o.train_dir ? o.train_dir : c.langid_train_dir;
  if (!dir) throw InputError("train-langid needs --train-dir or langid.train_dir in the config");
  OutputDir out(g.out_dir(), "train-langid", c.digest);
  auto mono = stage("read_training_text", [&] { return read_mono_dir(*dir, c.registry); });
  auto lid = stage("train_langid", [&] { return LanguageIdentifier::train(mono, keys_of(mono)); });
  out.write("model.json", lid.to_json());
  ordered_json warnings = ordered_json::array();
  for (const auto& p : lid.profiles()) {
    for (const auto& w : p.warnings) warnings.push_back(p.lang.str() + ": " + w);
  }
  out.info()["languages"] = mono.size();
  out.info()["warnings"] = warnings;
  if (o.heldout_dir) {
    auto held = stage("read_heldout_text", [&] { return read_mono_dir(*o.heldout_dir, c.registry); });
    std::vector<std::pair<LanguageCode, const std::string*>> items;
    for (const auto& [lang, lines] : held) {
      for (const auto& l : lines) items.emplace_back(lang, &l);
    }
    std::vector<char> ok(items.size());
    parallel_for(items.size(), c.threads, [&](std::size_t i) { ok[i] = lid.identify(*items[i].second).lang == items[i].first; });
    std::map<LanguageCode, std::pair<std::size_t, std::size_t>> per;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < items.size(); ++i) {
      auto& [n, k] = per[items[i].first];
      ++n;
      k += ok[i];
      correct += ok[i];
    }
    std::string tsv = "lang\tn\tcorrect\taccuracy\n";
    for (const auto& [lang, nk] : per) {
      tsv += lang.str() + "\t" + std::to_string(nk.first) + "\t" + std::to_string(nk.second) + "\t" +
             text::format_fixed(static_cast<double>(nk.second) / static_cast<double>(nk.first), 6) + "\n";
    }
    double acc = items.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(items.size());
    tsv += "all\t" + std::to_string(items.size()) + "\t" + std::to_string(correct) + "\t" + text::format_fixed(acc, 6) + "\n";
    out.write("heldout_accuracy.tsv", tsv);
    out.info()["heldout_accuracy"] = acc;
  }
  out.finish();
}

}  // namespace mtkit::cli
