#include "mtkit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mtkit/error.hpp"
#include "mtkit/io.hpp"
#include "mtkit/parallel.hpp"
#include "mtkit/text.hpp"

namespace mtkit {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// ScoreGrid ----------------------------------------------------------------

ScoreGrid::ScoreGrid(std::vector<LanguageCode> langs) : langs_(std::move(langs)) {
  std::set<LanguageCode> seen;
  for (const auto& l : langs_) {
    if (!seen.insert(l).second) throw InputError("grid language '" + l.str() + "' listed twice");
  }
}

bool ScoreGrid::has_language(const LanguageCode& l) const {
  return std::find(langs_.begin(), langs_.end(), l) != langs_.end();
}

void ScoreGrid::set(const LanguagePair& dir, double value) {
  if (dir.source == dir.target) throw InputError("grid diagonal cell " + dir.str() + " must stay empty");
  if (!has_language(dir.source)) throw InputError("language '" + dir.source.str() + "' is not in the grid");
  if (!has_language(dir.target)) throw InputError("language '" + dir.target.str() + "' is not in the grid");
  if (!std::isfinite(value)) throw InputError("non-finite score for " + dir.str());
  cells_[dir] = value;
}

void ScoreGrid::erase(const LanguagePair& dir) { cells_.erase(dir); }

std::optional<double> ScoreGrid::get(const LanguagePair& dir) const {
  auto it = cells_.find(dir);
  if (it == cells_.end()) return std::nullopt;
  return it->second;
}

ScoreGrid ScoreGrid::parse_tsv(std::string_view tsv) {
  std::vector<std::string_view> lines;
  for (auto line : text::split(tsv, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::trim(line).empty() || line.front() == '#') continue;
    lines.push_back(line);
  }
  if (lines.empty()) throw InputError("grid file is empty");
  auto header = text::split(lines[0], '\t');
  std::vector<LanguageCode> cols;
  for (std::size_t i = 1; i < header.size(); ++i) cols.emplace_back(text::trim(header[i]));
  ScoreGrid grid(cols);
  std::set<LanguageCode> rows;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    auto fields = text::split(lines[r], '\t');
    auto where = "grid row " + std::to_string(r + 1);
    if (fields.size() > cols.size() + 1) throw InputError(where + ": too many cells");
    LanguageCode src(text::trim(fields[0]));
    if (!grid.has_language(src)) throw InputError(where + ": row language '" + src.str() + "' not in header");
    if (!rows.insert(src).second) throw InputError(where + ": duplicate row '" + src.str() + "'");
    for (std::size_t c = 1; c < fields.size(); ++c) {
      auto cell = text::trim(fields[c]);
      if (cell.empty()) continue;
      auto v = text::parse_double(cell);
      if (!v) throw InputError(where + ": bad number '" + std::string(cell) + "'");
      grid.set({src, cols[c - 1]}, *v);
    }
  }
  return grid;
}

ScoreGrid ScoreGrid::load_tsv(const std::filesystem::path& path) {
  try {
    return parse_tsv(io::read_file(path));
  } catch (const UnknownLanguageError&) {
    throw;
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::string ScoreGrid::to_tsv(int digits) const {
  std::string out;
  for (const auto& c : langs_) out += "\t" + c.str();
  out += "\n";
  for (const auto& s : langs_) {
    out += s.str();
    for (const auto& t : langs_) {
      out += "\t";
      if (auto v = get({s, t})) out += digits < 0 ? text::format_double(*v) : text::format_fixed(*v, digits);
    }
    out += "\n";
  }
  return out;
}

ToFrom average_to_from(const ScoreGrid& grid, const LanguageCode& lang) {
  if (!grid.has_language(lang)) throw InputError("language '" + lang.str() + "' is not in the grid");
  double to_sum = 0, from_sum = 0;
  std::size_t to_n = 0, from_n = 0;
  for (const auto& [dir, v] : grid.cells()) {
    if (dir.target == lang) {
      to_sum += v;
      ++to_n;
    }
    if (dir.source == lang) {
      from_sum += v;
      ++from_n;
    }
  }
  if (to_n == 0 || from_n == 0) {
    throw InputError("no scores " + std::string(to_n == 0 ? "into" : "out of") + " language '" + lang.str() + "'");
  }
  return {to_sum / static_cast<double>(to_n), from_sum / static_cast<double>(from_n)};
}

double overall_mean(const ScoreGrid& grid) {
  if (grid.cells().empty()) throw InputError("grid has no scores");
  double sum = 0;
  for (const auto& [dir, v] : grid.cells()) sum += v;
  return sum / static_cast<double>(grid.size());
}

ScoreGrid bleu_grid(const std::vector<TranslationRecord>& records, const std::vector<LanguageCode>& langs,
                    const DetectorConfig& tokenizers, Smoothing smoothing, unsigned threads) {
  ScoreGrid grid(langs);
  std::map<LanguagePair, std::pair<std::vector<TokenSequence>, std::vector<TokenSequence>>> by_pair;
  for (const auto& r : records) {
    if (!grid.has_language(r.pair.source) || !grid.has_language(r.pair.target)) {
      throw InputError("record '" + r.id + "' is for " + r.pair.str() + ", outside the grid languages");
    }
    auto tok = tokenizers.tokenizer_for(r.pair.target);
    auto& [h, ref] = by_pair[r.pair];
    h.push_back(tokenize(r.hyp, tok));
    ref.push_back(tokenize(r.ref, tok));
  }
  std::vector<const decltype(by_pair)::value_type*> items;
  for (const auto& item : by_pair) items.push_back(&item);
  std::vector<double> scores(items.size());
  parallel_for(items.size(), threads, [&](std::size_t i) {
    scores[i] = corpus_bleu(items[i]->second.first, items[i]->second.second, smoothing).score;
  });
  for (std::size_t i = 0; i < items.size(); ++i) grid.set(items[i]->first, scores[i]);
  return grid;
}

std::string grid_signature(const DetectorConfig& tokenizers, Smoothing smoothing) {
  auto sig = bleu_signature(tokenizers.default_tokenizer, smoothing);
  for (const auto& [lang, tok] : tokenizers.tokenizers) {
    if (tok != tokenizers.default_tokenizer) sig += "|tok." + lang.str() + ":" + std::string(to_string(tok));
  }
  return sig;
}

std::vector<TranslationRecord> compose_pivot(const std::vector<TranslationRecord>& direct,
                                             const std::vector<TranslationRecord>& leg1,
                                             const std::vector<TranslationRecord>& leg2, const LanguageCode& pivot) {
  std::map<std::pair<std::string, LanguageCode>, const TranslationRecord*> first;
  for (const auto& r : leg1) {
    if (r.pair.target != pivot) throw InputError("first-leg record '" + r.id + "' does not translate into " + pivot.str());
    first[{r.id, r.pair.source}] = &r;
  }
  // Different sources that yield the same pivot text share the second leg.
  std::map<std::tuple<std::string, LanguageCode, std::string>, const TranslationRecord*> second;
  for (const auto& r : leg2) {
    if (r.pair.source != pivot) throw InputError("second-leg record '" + r.id + "' does not start from " + pivot.str());
    second[{r.id, r.pair.target, r.src}] = &r;
  }
  std::vector<TranslationRecord> out;
  out.reserve(direct.size());
  for (const auto& d : direct) {
    if (d.pair.source == pivot || d.pair.target == pivot) continue;
    auto a = first.find({d.id, d.pair.source});
    if (a == first.end()) throw InputError("missing leg " + d.pair.source.str() + "-" + pivot.str() + " for record '" + d.id + "'");
    auto b = second.find({d.id, d.pair.target, a->second->hyp});
    if (b == second.end()) throw InputError("missing leg " + pivot.str() + "-" + d.pair.target.str() + " for record '" + d.id + "'");
    TranslationRecord p = d;
    p.hyp = b->second->hyp;
    p.external.clear();
    out.push_back(std::move(p));
  }
  return out;
}

ScoreGrid pivot_gain(const ScoreGrid& direct, const ScoreGrid& pivoted, const LanguageCode& pivot) {
  ScoreGrid out(direct.langs());
  for (const auto& [dir, v] : direct.cells()) {
    if (dir.source == pivot || dir.target == pivot) continue;
    auto p = pivoted.get(dir);
    if (!p) throw InputError("missing pivot score for " + dir.str());
    out.set(dir, *p - v);
  }
  return out;
}

CellRef max_cell(const ScoreGrid& grid) {
  if (grid.cells().empty()) throw InputError("grid has no scores");
  CellRef best{grid.cells().begin()->first, grid.cells().begin()->second};
  for (const auto& [dir, v] : grid.cells()) {
    if (v > best.value) best = {dir, v};
  }
  return best;
}

// Features and factors -----------------------------------------------------

std::string_view to_string(FeatureCategory c) {
  switch (c) {
    case FeatureCategory::Geography: return "geography";
    case FeatureCategory::Syntax: return "syntax";
    case FeatureCategory::Phylogeny: return "phylogeny";
    case FeatureCategory::Phonology: return "phonology";
    case FeatureCategory::Inventory: return "inventory";
  }
  return "?";
}

FeatureCategory parse_feature_category(std::string_view name) {
  for (auto c : {FeatureCategory::Geography, FeatureCategory::Syntax, FeatureCategory::Phylogeny,
                 FeatureCategory::Phonology, FeatureCategory::Inventory}) {
    if (to_string(c) == name) return c;
  }
  throw InputError("unknown feature category '" + std::string(name) + "'");
}

void FeatureTable::add(FeatureVector v) {
  auto [it, fresh] = lengths_.try_emplace(v.category, v.values.size());
  if (!fresh && it->second != v.values.size()) {
    throw InputError(std::string(to_string(v.category)) + " vector for '" + v.lang.str() + "' has " +
                     std::to_string(v.values.size()) + " values, expected " + std::to_string(it->second));
  }
  auto key = std::make_pair(v.category, v.lang);
  if (vectors_.count(key)) {
    throw InputError("duplicate " + std::string(to_string(v.category)) + " vector for '" + v.lang.str() + "'");
  }
  vectors_.emplace(key, std::move(v));
}

FeatureTable FeatureTable::parse(std::string_view tsv) {
  FeatureTable t;
  std::size_t lineno = 0;
  for (auto line : text::split(tsv, '\n')) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::trim(line).empty()) continue;
    if (line.front() == '#') {
      t.notes_.emplace_back(text::trim(line.substr(1)));
      continue;
    }
    auto where = "feature line " + std::to_string(lineno) + ": ";
    auto f = text::split(line, '\t');
    if (f.size() != 3) throw InputError(where + "expected lang<TAB>category<TAB>values");
    FeatureVector v;
    v.lang = LanguageCode(text::trim(f[0]));
    v.category = parse_feature_category(text::trim(f[1]));
    for (auto cell : text::split(f[2], ',')) {
      cell = text::trim(cell);
      if (cell == "?") {
        v.values.emplace_back(std::nullopt);
        continue;
      }
      auto d = text::parse_double(cell);
      if (!d) throw InputError(where + "bad value '" + std::string(cell) + "'");
      v.values.emplace_back(*d);
    }
    t.add(std::move(v));
  }
  return t;
}

FeatureTable FeatureTable::load(const std::filesystem::path& path) { return parse(io::read_file(path)); }

const FeatureVector& FeatureTable::get(const LanguageCode& lang, FeatureCategory category) const {
  auto it = vectors_.find({category, lang});
  if (it == vectors_.end()) {
    throw InputError("no " + std::string(to_string(category)) + " features for '" + lang.str() + "'");
  }
  return it->second;
}

bool FeatureTable::contains(const LanguageCode& lang, FeatureCategory category) const {
  return vectors_.count({category, lang}) != 0;
}

double cosine_similarity(const FeatureVector& a, const FeatureVector& b) {
  if (a.values.size() != b.values.size()) throw InputError("feature vectors differ in length");
  double dot = 0, na = 0, nb = 0;
  std::size_t shared = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (!a.values[i] || !b.values[i]) continue;
    ++shared;
    dot += *a.values[i] * *b.values[i];
    na += *a.values[i] * *a.values[i];
    nb += *b.values[i] * *b.values[i];
  }
  if (shared < 2) throw InputError("fewer than two shared feature dimensions for '" + a.lang.str() + "' and '" + b.lang.str() + "'");
  if (na == 0 || nb == 0) throw DegenerateInputError("zero feature vector");
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

double similarity_to_english(const FeatureTable& features, const LanguageCode& lang, FeatureCategory category) {
  return cosine_similarity(features.get(lang, category), features.get(LanguageCode("en"), category));
}

std::map<LanguageCode, double> parse_factors(std::string_view tsv) {
  std::map<LanguageCode, double> out;
  std::size_t lineno = 0;
  for (auto line : text::split(tsv, '\n')) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::trim(line).empty() || line.front() == '#') continue;
    auto f = text::split(line, '\t');
    auto where = "factor line " + std::to_string(lineno) + ": ";
    if (f.size() != 2) throw InputError(where + "expected lang<TAB>value");
    LanguageCode l(text::trim(f[0]));
    auto v = text::parse_double(text::trim(f[1]));
    if (!v) throw InputError(where + "bad value");
    if (!out.emplace(l, *v).second) throw InputError(where + "duplicate language '" + l.str() + "'");
  }
  return out;
}

std::map<LanguageCode, double> load_factors(const std::filesystem::path& path) {
  return parse_factors(io::read_file(path));
}

std::string_view to_string(Side s) { return s == Side::ToX ? "to_x" : "from_x"; }

Side parse_side(std::string_view name) {
  if (name == "to_x" || name == "to") return Side::ToX;
  if (name == "from_x" || name == "from") return Side::FromX;
  throw InputError("unknown side '" + std::string(name) + "'");
}

FactorCorrelation correlate_factors(const ScoreGrid& grid, const std::map<LanguageCode, double>& factors, Side side,
                                    const LanguageCode& english) {
  FactorCorrelation out;
  std::vector<double> bleu, factor;
  for (const auto& l : grid.langs()) {
    auto it = factors.find(l);
    if (it == factors.end()) {
      if (l == english) continue;
      throw InputError("factor has no value for '" + l.str() + "'");
    }
    auto tf = average_to_from(grid, l);
    bleu.push_back(side == Side::ToX ? tf.to_x : tf.from_x);
    factor.push_back(it->second);
    out.langs.push_back(l);
  }
  out.rho = spearman(bleu, factor);
  return out;
}

std::map<Condition, Bucket> bucket_by_condition(const ScoreGrid& grid, const PartitionSpec& spec) {
  std::map<Condition, std::pair<double, std::size_t>> acc;
  for (const auto& [dir, v] : grid.cells()) {
    auto& [sum, n] = acc[classify(spec, dir)];
    sum += v;
    ++n;
  }
  std::map<Condition, Bucket> out;
  for (const auto& [c, sn] : acc) out[c] = {sn.first / static_cast<double>(sn.second), sn.second};
  return out;
}

// Reports ------------------------------------------------------------------

namespace {

ordered_json grid_json(const ScoreGrid& g) {
  ordered_json j;
  j["langs"] = ordered_json::array();
  for (const auto& l : g.langs()) j["langs"].push_back(l.str());
  j["cells"] = ordered_json::object();
  for (const auto& [dir, v] : g.cells()) j["cells"][dir.str()] = v;
  return j;
}

ScoreGrid grid_from_json(const json& j) {
  std::vector<LanguageCode> langs;
  for (const auto& l : j.at("langs")) langs.emplace_back(l.get<std::string>());
  ScoreGrid g(langs);
  for (const auto& [k, v] : j.at("cells").items()) g.set(LanguagePair::parse(k), v.get<double>());
  return g;
}

std::string num(double v) { return text::format_double(v); }
std::string fixed(double v, int d) { return text::format_fixed(v, d); }

}  // namespace

std::string AnalysisBundle::to_json() const {
  ordered_json j;
  j["format"] = "mtkit-report";
  j["version"] = 1;
  j["title"] = title;
  j["config_digest"] = config_digest;
  j["grids"] = ordered_json::array();
  for (const auto& g : grids) {
    j["grids"].push_back({{"name", g.name}, {"signature", g.signature}, {"grid", grid_json(g.grid)}});
  }
  j["buckets"] = ordered_json::array();
  for (const auto& b : buckets) {
    ordered_json rows = ordered_json::object();
    for (const auto& [c, bk] : b.buckets) rows[std::string(to_string(c))] = {{"mean", bk.mean}, {"count", bk.count}};
    j["buckets"].push_back(
        {{"grid", b.grid}, {"partition", b.partition}, {"signature", b.signature}, {"conditions", rows}});
  }
  j["correlations"] = ordered_json::array();
  for (const auto& c : correlations) {
    j["correlations"].push_back({{"factor", c.factor}, {"grid", c.grid}, {"side", std::string(to_string(c.side))},
                                 {"rho", c.rho}, {"n", c.n}, {"signature", c.signature}});
  }
  j["fits"] = ordered_json::array();
  for (const auto& f : fits) {
    j["fits"].push_back({{"name", f.name}, {"ns", f.ns}, {"scores", f.scores}, {"slope", f.fit.slope},
                         {"intercept", f.fit.intercept}, {"r_squared", f.fit.r_squared}, {"signature", f.signature}});
  }
  j["errors"] = ordered_json::array();
  for (const auto& e : errors) {
    j["errors"].push_back({{"label", e.label}, {"pair", e.pair}, {"n", e.n}, {"sc", e.sc}, {"ot", e.ot},
                           {"ou", e.ou}, {"oh", e.oh}, {"any", e.any}, {"signature", e.signature}});
  }
  j["trend_signature"] = trend_signature;
  j["trend"] = ordered_json::array();
  for (const auto& t : trend) {
    j["trend"].push_back({{"series", t.series}, {"n_language_pairs", t.n_language_pairs}, {"sc", t.sc},
                          {"ot", t.ot}, {"ou", t.ou}, {"oh", t.oh}, {"any", t.any}});
  }
  return j.dump(1) + "\n";
}

AnalysisBundle AnalysisBundle::from_json(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || j.value("format", "") != "mtkit-report") {
    throw InputError("not an analysis report");
  }
  try {
    AnalysisBundle b;
    b.title = j.at("title").get<std::string>();
    b.config_digest = j.at("config_digest").get<std::string>();
    for (const auto& g : j.at("grids")) {
      b.grids.push_back({g.at("name").get<std::string>(), g.at("signature").get<std::string>(), grid_from_json(g.at("grid"))});
    }
    for (const auto& t : j.at("buckets")) {
      BucketTable bt{t.at("grid").get<std::string>(), t.at("partition").get<std::string>(),
                     t.at("signature").get<std::string>(), {}};
      for (const auto& [c, v] : t.at("conditions").items()) {
        bt.buckets[parse_condition(c)] = {v.at("mean").get<double>(), v.at("count").get<std::size_t>()};
      }
      b.buckets.push_back(std::move(bt));
    }
    for (const auto& c : j.at("correlations")) {
      b.correlations.push_back({c.at("factor").get<std::string>(), c.at("grid").get<std::string>(),
                                parse_side(c.at("side").get<std::string>()), c.at("rho").get<double>(),
                                c.at("n").get<std::size_t>(), c.at("signature").get<std::string>()});
    }
    for (const auto& f : j.at("fits")) {
      FitRow row;
      row.name = f.at("name").get<std::string>();
      row.ns = f.at("ns").get<std::vector<double>>();
      row.scores = f.at("scores").get<std::vector<double>>();
      row.fit = {f.at("slope").get<double>(), f.at("intercept").get<double>(), f.at("r_squared").get<double>()};
      row.signature = f.at("signature").get<std::string>();
      b.fits.push_back(std::move(row));
    }
    for (const auto& e : j.at("errors")) {
      b.errors.push_back({e.at("label").get<std::string>(), e.at("pair").get<std::string>(), e.at("n").get<std::size_t>(),
                          e.at("sc").get<double>(), e.at("ot").get<double>(), e.at("ou").get<double>(),
                          e.at("oh").get<double>(), e.at("any").get<double>(), e.at("signature").get<std::string>()});
    }
    b.trend_signature = j.at("trend_signature").get<std::string>();
    for (const auto& t : j.at("trend")) {
      b.trend.push_back({t.at("series").get<std::string>(), t.at("n_language_pairs").get<std::size_t>(),
                         t.at("sc").get<double>(), t.at("ot").get<double>(), t.at("ou").get<double>(),
                         t.at("oh").get<double>(), t.at("any").get<double>()});
    }
    return b;
  } catch (const json::exception& e) {
    throw InputError(std::string("analysis report: ") + e.what());
  }
}

std::string AnalysisBundle::to_markdown() const {
  std::ostringstream md;
  md << "# " << (title.empty() ? "Analysis report" : title) << "\n\n";
  if (!config_digest.empty()) md << "Config digest: `" << config_digest << "`\n\n";
  for (const auto& g : grids) {
    md << "## Grid: " << g.name << "\n\n`" << g.signature << "`\n\n";
    md << "| src \\ tgt |";
    for (const auto& l : g.grid.langs()) md << " " << l.str() << " |";
    md << " avg |\n|---|";
    for (std::size_t i = 0; i <= g.grid.langs().size(); ++i) md << "---:|";
    md << "\n";
    for (const auto& s : g.grid.langs()) {
      md << "| " << s.str() << " |";
      for (const auto& t : g.grid.langs()) {
        auto v = g.grid.get({s, t});
        md << " " << (v ? fixed(*v, 1) : "") << " |";
      }
      std::string from;
      try {
        from = fixed(average_to_from(g.grid, s).from_x, 1);
      } catch (const InputError&) {
      }
      md << " " << from << " |\n";
    }
    md << "| avg |";
    for (const auto& t : g.grid.langs()) {
      std::string to;
      try {
        to = fixed(average_to_from(g.grid, t).to_x, 1);
      } catch (const InputError&) {
      }
      md << " " << to << " |";
    }
    md << " " << (g.grid.size() ? fixed(overall_mean(g.grid), 1) : "") << " |\n\n";
  }
  if (!buckets.empty()) {
    md << "## Scores by data condition\n\n| grid | partition | condition | mean | directions |\n|---|---|---|---:|---:|\n";
    for (const auto& b : buckets) {
      for (const auto& [c, bk] : b.buckets) {
        md << "| " << b.grid << " | " << b.partition << " | " << to_string(c) << " | " << fixed(bk.mean, 2) << " | "
           << bk.count << " |\n";
      }
    }
    md << "\n";
    for (const auto& b : buckets) md << "`" << b.signature << "`\n";
    md << "\n";
  }
  if (!correlations.empty()) {
    md << "## Correlations\n\n| factor | grid | side | spearman | n | signature |\n|---|---|---|---:|---:|---|\n";
    for (const auto& c : correlations) {
      md << "| " << c.factor << " | " << c.grid << " | " << to_string(c.side) << " | " << fixed(c.rho, 3) << " | "
         << c.n << " | `" << c.signature << "` |\n";
    }
    md << "\n";
  }
  if (!fits.empty()) {
    md << "## Log-linear fits\n\n| name | slope | intercept | r2 | points | signature |\n|---|---:|---:|---:|---:|---|\n";
    for (const auto& f : fits) {
      md << "| " << f.name << " | " << fixed(f.fit.slope, 4) << " | " << fixed(f.fit.intercept, 4) << " | "
         << fixed(f.fit.r_squared, 4) << " | " << f.ns.size() << " | `" << f.signature << "` |\n";
    }
    md << "\n";
  }
  if (!errors.empty()) {
    md << "## Instruction-following errors\n\n| label | pair | n | SC | OT | OU | OH | any |\n"
          "|---|---|---:|---:|---:|---:|---:|---:|\n";
    for (const auto& e : errors) {
      md << "| " << e.label << " | " << e.pair << " | " << e.n;
      for (double v : {e.sc, e.ot, e.ou, e.oh, e.any}) md << " | " << fixed(100 * v, 1) << "%";
      md << " |\n";
    }
    md << "\n";
    std::set<std::string> sigs;
    for (const auto& e : errors) sigs.insert(e.signature);
    for (const auto& s : sigs) md << "`" << s << "`\n";
    md << "\n";
  }
  if (!trend.empty()) {
    md << "## Error trend\n\n`" << trend_signature << "`\n\n| series | pairs | SC | OT | OU | OH | any |\n"
          "|---|---:|---:|---:|---:|---:|---:|\n";
    for (const auto& t : trend) {
      md << "| " << t.series << " | " << t.n_language_pairs;
      for (double v : {t.sc, t.ot, t.ou, t.oh, t.any}) md << " | " << fixed(100 * v, 1) << "%";
      md << " |\n";
    }
    md << "\n";
  }
  return md.str();
}

std::map<std::string, std::string> AnalysisBundle::to_tsv_files() const {
  std::map<std::string, std::string> files;
  for (const auto& g : grids) files["grid_" + g.name + ".tsv"] = "# " + g.signature + "\n" + g.grid.to_tsv();
  if (!buckets.empty()) {
    std::string t = "grid\tpartition\tcondition\tmean\tcount\tsignature\n";
    for (const auto& b : buckets) {
      for (const auto& [c, bk] : b.buckets) {
        t += b.grid + "\t" + b.partition + "\t" + std::string(to_string(c)) + "\t" + num(bk.mean) + "\t" +
             std::to_string(bk.count) + "\t" + b.signature + "\n";
      }
    }
    files["buckets.tsv"] = t;
  }
  if (!correlations.empty()) {
    std::string t = "factor\tgrid\tside\trho\tn\tsignature\n";
    for (const auto& c : correlations) {
      t += c.factor + "\t" + c.grid + "\t" + std::string(to_string(c.side)) + "\t" + num(c.rho) + "\t" +
           std::to_string(c.n) + "\t" + c.signature + "\n";
    }
    files["correlations.tsv"] = t;
  }
  if (!fits.empty()) {
    std::string t = "name\tslope\tintercept\tr_squared\tpoints\tsignature\n";
    for (const auto& f : fits) {
      t += f.name + "\t" + num(f.fit.slope) + "\t" + num(f.fit.intercept) + "\t" + num(f.fit.r_squared) + "\t" +
           std::to_string(f.ns.size()) + "\t" + f.signature + "\n";
    }
    files["fits.tsv"] = t;
  }
  if (!errors.empty()) {
    std::string t = "label\tpair\tn_records\tsc\tot\tou\toh\tany\tsignature\n";
    for (const auto& e : errors) {
      t += e.label + "\t" + e.pair + "\t" + std::to_string(e.n);
      for (double v : {e.sc, e.ot, e.ou, e.oh, e.any}) t += "\t" + num(v);
      t += "\t" + e.signature + "\n";
    }
    files["errors.tsv"] = t;
  }
  if (!trend.empty()) {
    std::string t = "# " + trend_signature + "\nseries\tn_language_pairs\tsc\tot\tou\toh\tany\n";
    for (const auto& p : trend) {
      t += p.series + "\t" + std::to_string(p.n_language_pairs);
      for (double v : {p.sc, p.ot, p.ou, p.oh, p.any}) t += "\t" + num(v);
      t += "\n";
    }
    files["error_trend.tsv"] = t;
  }
  return files;
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "tsv") return ReportFormat::Tsv;
  if (name == "markdown" || name == "md") return ReportFormat::Markdown;
  if (name == "json") return ReportFormat::Json;
  throw InputError("unknown report format '" + std::string(name) + "'");
}

std::vector<std::filesystem::path> emit_report(const AnalysisBundle& bundle, ReportFormat format,
                                               const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  switch (format) {
    case ReportFormat::Json:
      io::write_file_atomic(dir / "report.json", bundle.to_json());
      written.push_back(dir / "report.json");
      break;
    case ReportFormat::Markdown:
      io::write_file_atomic(dir / "report.md", bundle.to_markdown());
      written.push_back(dir / "report.md");
      break;
    case ReportFormat::Tsv:
      for (const auto& [name, body] : bundle.to_tsv_files()) {
        io::write_file_atomic(dir / name, body);
        written.push_back(dir / name);
      }
      break;
  }
  return written;
}

}  // namespace mtkit
