#include "mtkit/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

#include <json.hpp>

#include "mtkit/error.hpp"
#include "mtkit/random.hpp"
#include "mtkit/text.hpp"

namespace mtkit {

using nlohmann::json;

std::string_view to_string(CorpusFormat f) {
  switch (f) {
    case CorpusFormat::TsvPair: return "tsv-pair";
    case CorpusFormat::TsvScored: return "tsv-scored";
    case CorpusFormat::Jsonl: return "jsonl";
  }
  return "?";
}

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "tsv-pair") return CorpusFormat::TsvPair;
  if (name == "tsv-scored") return CorpusFormat::TsvScored;
  if (name == "jsonl") return CorpusFormat::Jsonl;
  throw InputError("unknown corpus format '" + std::string(name) + "'");
}

Corpus::Corpus(std::vector<ParallelSentence> pairs, std::string provenance, LoadReport report)
    : pairs_(std::move(pairs)), provenance_(std::move(provenance)), report_(std::move(report)) {}

Corpus Corpus::derive(std::vector<ParallelSentence> pairs, std::string_view step) const {
  return Corpus(std::move(pairs), provenance_ + " | " + std::string(step));
}

namespace {

std::string clean_text(std::string_view raw, const char* side) {
  if (!text::is_valid_utf8(raw)) throw InputError(std::string(side) + " text is not valid UTF-8");
  if (text::contains_newline(raw)) throw InputError(std::string(side) + " text contains a newline");
  std::string normalized = text::nfc(raw);
  auto trimmed = text::trim(normalized);
  if (trimmed.empty()) throw InputError(std::string(side) + " text is empty");
  return std::string(trimmed);
}

}  // namespace

ParallelSentence make_parallel_sentence(const LanguageCode& src, const LanguageCode& tgt,
                                        std::string_view src_text, std::string_view tgt_text,
                                        std::optional<double> score) {
  if (src.empty() || tgt.empty()) throw InputError("missing language code");
  if (src == tgt) throw InputError("source and target language are both '" + src.str() + "'");
  if (score && (!std::isfinite(*score) || *score < 0)) throw InputError("score must be a non-negative number");
  return {src, tgt, clean_text(src_text, "source"), clean_text(tgt_text, "target"), score};
}

namespace {

ParallelSentence parse_line(std::string_view line, CorpusFormat format, const std::optional<LanguagePair>& pair) {
  switch (format) {
    case CorpusFormat::TsvPair: {
      auto f = text::split(line, '\t');
      if (f.size() != 2) throw InputError("expected 2 tab-separated fields, got " + std::to_string(f.size()));
      return make_parallel_sentence(pair->source, pair->target, f[0], f[1]);
    }
    case CorpusFormat::TsvScored: {
      auto f = text::split(line, '\t');
      if (f.size() != 3) throw InputError("expected 3 tab-separated fields, got " + std::to_string(f.size()));
      auto score = text::parse_double(text::trim(f[0]));
      if (!score) throw InputError("score '" + std::string(f[0]) + "' is not a number");
      return make_parallel_sentence(pair->source, pair->target, f[1], f[2], score);
    }
    case CorpusFormat::Jsonl: {
      json j = json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object()) throw InputError("not a JSON object");
      for (const char* key : {"src_lang", "tgt_lang", "src_text", "tgt_text"}) {
        if (!j.contains(key) || !j[key].is_string()) throw InputError(std::string("missing string field '") + key + "'");
      }
      LanguageCode src(j["src_lang"].get<std::string>());
      LanguageCode tgt(j["tgt_lang"].get<std::string>());
      if (pair && (src != pair->source || tgt != pair->target)) {
        throw InputError("record pair " + src.str() + "-" + tgt.str() + " differs from declared " + pair->str());
      }
      std::optional<double> score;
      if (j.contains("score") && !j["score"].is_null()) {
        if (!j["score"].is_number()) throw InputError("score is not a number");
        score = j["score"].get<double>();
      }
      return make_parallel_sentence(src, tgt, j["src_text"].get<std::string>(), j["tgt_text"].get<std::string>(), score);
    }
  }
  throw InputError("unsupported format");
}

}  // namespace

Corpus parse_corpus(std::istream& in, CorpusFormat format, std::optional<LanguagePair> pair,
                    std::string provenance, const LoadOptions& options) {
  if (format != CorpusFormat::Jsonl && !pair) {
    throw InputError(std::string(to_string(format)) + " input needs a declared language pair");
  }
  std::vector<ParallelSentence> out;
  LoadReport report;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++report.lines;
    try {
      out.push_back(parse_line(line, format, pair));
      ++report.accepted;
    } catch (const InputError& e) {
      report.malformed.push_back({lineno, e.what()});
    }
  }
  if (report.lines > 0) {
    double frac = static_cast<double>(report.malformed.size()) / static_cast<double>(report.lines);
    if (frac > options.max_malformed_fraction) {
      const auto& first = report.malformed.front();
      throw InputError(provenance + ": " + std::to_string(report.malformed.size()) + " of " +
                       std::to_string(report.lines) + " lines malformed (limit " +
                       text::format_double(options.max_malformed_fraction * 100) + "%); first at line " +
                       std::to_string(first.line) + ": " + first.reason);
    }
  }
  return Corpus(std::move(out), std::move(provenance), std::move(report));
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format, std::optional<LanguagePair> pair,
                   const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus " + path.string());
  return parse_corpus(in, format, std::move(pair), path.string() + " (" + std::string(to_string(format)) + ")",
                      options);
}

Corpus load_multiparallel(const std::filesystem::path& path, const std::vector<LanguagePair>* pairs,
                          const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus " + path.string());
  std::string provenance = path.string() + " (multiparallel)";
  std::string line;
  std::vector<LanguageCode> cols;
  while (cols.empty() && std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto head = text::split(line, '\t');
    if (head.size() < 3) throw InputError(provenance + ": header needs a key column and two languages");
    for (std::size_t i = 1; i < head.size(); ++i) cols.emplace_back(head[i]);
  }
  if (cols.empty()) throw InputError(provenance + ": empty file");
  std::vector<std::pair<std::size_t, std::size_t>> dirs;
  for (std::size_t a = 0; a < cols.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) {
      if (a == b) continue;
      LanguagePair p{cols[a], cols[b]};
      if (pairs && std::find(pairs->begin(), pairs->end(), p) == pairs->end()) continue;
      dirs.emplace_back(a, b);
    }
  }
  std::vector<ParallelSentence> out;
  LoadReport report;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++report.lines;
    auto f = text::split(line, '\t');
    if (f.size() != cols.size() + 1) {
      report.malformed.push_back({lineno, "expected " + std::to_string(cols.size() + 1) + " fields"});
      continue;
    }
    try {
      std::vector<ParallelSentence> row;
      for (auto [a, b] : dirs) {
        if (text::trim(f[a + 1]).empty() || text::trim(f[b + 1]).empty()) continue;
        row.push_back(make_parallel_sentence(cols[a], cols[b], f[a + 1], f[b + 1]));
      }
      out.insert(out.end(), row.begin(), row.end());
      ++report.accepted;
    } catch (const InputError& e) {
      report.malformed.push_back({lineno, e.what()});
    }
  }
  if (report.lines > 0 &&
      static_cast<double>(report.malformed.size()) / static_cast<double>(report.lines) > options.max_malformed_fraction) {
    throw InputError(provenance + ": " + std::to_string(report.malformed.size()) + " of " +
                     std::to_string(report.lines) + " rows malformed; first at line " +
                     std::to_string(report.malformed.front().line) + ": " + report.malformed.front().reason);
  }
  return Corpus(std::move(out), std::move(provenance), std::move(report));
}

void write_corpus(const Corpus& corpus, CorpusFormat format, std::ostream& out) {
  if (format != CorpusFormat::Jsonl && !corpus.empty()) {
    auto first = corpus.pairs().front().pair();
    for (const auto& s : corpus.pairs()) {
      if (s.pair() != first) throw InputError("TSV output cannot hold more than one language pair");
      if (s.src_text.find('\t') != std::string::npos || s.tgt_text.find('\t') != std::string::npos) {
        throw InputError("TSV output cannot hold texts containing tabs");
      }
    }
  }
  for (const auto& s : corpus.pairs()) {
    switch (format) {
      case CorpusFormat::TsvPair:
        out << s.src_text << '\t' << s.tgt_text << '\n';
        break;
      case CorpusFormat::TsvScored:
        if (!s.score) throw InputError("tsv-scored output needs a score on every record");
        out << text::format_double(*s.score) << '\t' << s.src_text << '\t' << s.tgt_text << '\n';
        break;
      case CorpusFormat::Jsonl: {
        json j = {{"src_lang", s.src_lang.str()},
                  {"tgt_lang", s.tgt_lang.str()},
                  {"src_text", s.src_text},
                  {"tgt_text", s.tgt_text}};
        if (s.score) j["score"] = *s.score;
        out << j.dump() << '\n';
        break;
      }
    }
  }
}

namespace {

void require_scores(const Corpus& corpus) {
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!corpus.pairs()[i].score) {
      throw InputError("record " + std::to_string(i + 1) + " (" + corpus.pairs()[i].src_text.substr(0, 40) +
                       ") has no quality score");
    }
  }
}

// Positions ordered best-first: higher score, then earlier position.
std::vector<std::size_t> rank_best_first(const std::vector<ParallelSentence>& pairs,
                                         const std::vector<std::size_t>& positions) {
  std::vector<std::size_t> order = positions;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return *pairs[a].score > *pairs[b].score; });
  return order;
}

std::vector<ParallelSentence> gather(const std::vector<ParallelSentence>& pairs, std::vector<std::size_t> keep) {
  std::sort(keep.begin(), keep.end());
  std::vector<ParallelSentence> out;
  out.reserve(keep.size());
  for (auto i : keep) out.push_back(pairs[i]);
  return out;
}

}  // namespace

Corpus filter_by_quality(const Corpus& corpus, const QualityFilter& filter) {
  require_scores(corpus);
  const auto& pairs = corpus.pairs();
  std::vector<std::size_t> all(pairs.size());
  std::iota(all.begin(), all.end(), 0);
  std::vector<std::size_t> keep;
  std::string step;
  switch (filter.mode) {
    case QualityFilter::Mode::Threshold:
      for (auto i : all) {
        if (*pairs[i].score >= filter.threshold) keep.push_back(i);
      }
      step = "score>=" + text::format_double(filter.threshold);
      break;
    case QualityFilter::Mode::TopK: {
      auto order = rank_best_first(pairs, all);
      keep.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min(filter.k, order.size())));
      step = "top" + std::to_string(filter.k);
      break;
    }
    case QualityFilter::Mode::BottomK: {
      auto order = rank_best_first(pairs, all);
      std::size_t k = std::min(filter.k, order.size());
      keep.assign(order.end() - static_cast<std::ptrdiff_t>(k), order.end());
      step = "bottom" + std::to_string(filter.k);
      break;
    }
  }
  return corpus.derive(gather(pairs, std::move(keep)), step);
}

namespace {

std::map<LanguagePair, std::vector<std::size_t>> group_by_pair(const std::vector<ParallelSentence>& pairs) {
  std::map<LanguagePair, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < pairs.size(); ++i) groups[pairs[i].pair()].push_back(i);
  return groups;
}

}  // namespace

Corpus sample_per_pair(const Corpus& corpus, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InputError("sample size must be at least 1");
  std::vector<std::size_t> keep;
  for (const auto& [pair, idx] : group_by_pair(corpus.pairs())) {
    if (idx.size() <= n) {
      keep.insert(keep.end(), idx.begin(), idx.end());
      continue;
    }
    Rng rng(derive_seed(seed, pair.str()));
    for (auto j : sample_without_replacement(idx.size(), n, rng)) keep.push_back(idx[j]);
  }
  return corpus.derive(gather(corpus.pairs(), std::move(keep)),
                       "sample" + std::to_string(n) + "/seed" + std::to_string(seed) + "/" + std::string(Rng::kAlgorithm));
}

Corpus top_per_pair(const Corpus& corpus, std::size_t n) {
  if (n == 0) throw InputError("sample size must be at least 1");
  require_scores(corpus);
  std::vector<std::size_t> keep;
  for (const auto& [pair, idx] : group_by_pair(corpus.pairs())) {
    auto order = rank_best_first(corpus.pairs(), idx);
    keep.insert(keep.end(), order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min(n, order.size())));
  }
  return corpus.derive(gather(corpus.pairs(), std::move(keep)), "top" + std::to_string(n) + "-per-pair");
}

}  // namespace mtkit
