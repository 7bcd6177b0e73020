// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "cli/commands.hpp"
#include "mtkit/analysis.hpp"
#include "mtkit/bleu.hpp"
#include "mtkit/digest.hpp"
#include "mtkit/error.hpp"
#include "mtkit/errors.hpp"
#include "mtkit/io.hpp"
#include "mtkit/langid.hpp"
#include "mtkit/partition.hpp"
#include "mtkit/stats.hpp"
#include "mtkit/text.hpp"
#include "support/oracles.hpp"
#include "support/paths.hpp"

using namespace mtkit;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 4) { return text::format_fixed(v, digits); }

double round1(double v) { return std::round(v * 10) / 10; }

const LanguageRegistry& registry() {
  static const LanguageRegistry r = LanguageRegistry::builtin();
  return r;
}

ScoreGrid grid(const char* name) { return ScoreGrid::load_tsv(testpaths::data_dir() / "fixtures" / name); }

PartitionSpec mfti16() { return load_partition(testpaths::data_dir() / "partitions" / "mfti16.json", registry()); }

std::map<LanguageCode, std::vector<std::string>> read_slice(const char* slice) {
  std::map<LanguageCode, std::vector<std::string>> out;
  for (const auto& l : core_languages()) {
    auto lines = io::read_lines(testpaths::data_dir() / "langid" / slice / (l.str() + ".txt"));
    std::erase_if(lines, [](const std::string& s) { return text::trim(s).empty(); });
    out[l] = std::move(lines);
  }
  return out;
}

const LanguageIdentifier& identifier() {
  static const LanguageIdentifier lid = LanguageIdentifier::train(read_slice("train"), core_languages());
  return lid;
}

std::string join(const std::vector<std::string>& toks) {
  std::string s;
  for (const auto& t : toks) s += (s.empty() ? "" : " ") + t;
  return s;
}

// 1 -----------------------------------------------------------------------------

Outcome bleu_parity() {
  std::ifstream in(testpaths::fixture("bleu_parity.json"));
  json fixture = json::parse(in);
  auto t0 = Clock::now();
  double worst = 0;
  std::size_t values = 0, sentences = 0;
  for (const auto& set : fixture["sets"]) {
    auto tok = parse_tokenizer(set["tokenize"].get<std::string>());
    std::vector<TokenSequence> hyps, refs;
    for (const auto& h : set["hyps"]) hyps.push_back(tokenize(h.get<std::string>(), tok));
    for (const auto& r : set["refs"]) refs.push_back(tokenize(r.get<std::string>(), tok));
    sentences += hyps.size();
    auto check = [&](double got, const json& want) {
      worst = std::max(worst, std::abs(got - want.get<double>()));
      ++values;
    };
    check(corpus_bleu(hyps, refs, Smoothing::none()).score, set["corpus_bleu_none"]);
    check(corpus_bleu(hyps, refs, Smoothing::exp()).score, set["corpus_bleu_exp"]);
    check(corpus_bleu(hyps, refs, Smoothing::floor()).score, set["corpus_bleu_floor"]);
    for (std::size_t i = 0; i < hyps.size(); ++i) {
      check(sentence_bleu(hyps[i], refs[i], Smoothing::exp()).score, set["sentence_bleu_exp"][i]);
      check(sentence_bleu(hyps[i], refs[i], Smoothing::floor()).score, set["sentence_bleu_floor"][i]);
    }
  }
  double secs = seconds_since(t0);
  bool ok = worst <= 0.05 && secs < 1.0 && fixture["sets"][0]["hyps"].size() == 100;
  return {ok, std::to_string(values) + " values over " + std::to_string(sentences) + " sentences, max |diff| " +
                  text::format_double(worst) + " BLEU, " + fmt(secs, 3) + " s"};
}

// 2 -----------------------------------------------------------------------------

Outcome grid_means() {
  auto icl = grid("icl8_bleu.tsv");
  auto mfti = grid("mfti_bleu.tsv");
  double a = overall_mean(icl), b = overall_mean(mfti);
  // Per-language to/from averages must be defined for every language.
  for (const auto& l : core_languages()) {
    average_to_from(icl, l);
    average_to_from(mfti, l);
  }
  std::size_t dirs = enumerate_directions(core_languages()).size();
  bool ok = std::abs(a - 13.9) <= 0.05 && std::abs(b - 16.9) <= 0.05 && icl.size() == 156 && mfti.size() == 156 &&
            dirs == 156;
  return {ok, "ICL mean " + fmt(a) + " (13.9), mFTI mean " + fmt(b) + " (16.9), directions " + std::to_string(dirs) +
                  "/" + std::to_string(icl.size()) + "/" + std::to_string(mfti.size())};
}

// 3 -----------------------------------------------------------------------------

Outcome condition_buckets() {
  auto b = bucket_by_condition(grid("mfti16_synthetic_bleu.tsv"), mfti16());
  double same = b.at(Condition::SameDirection).mean;
  double rev = b.at(Condition::ReversedDirection).mean;
  double both = b.at(Condition::UnseenBoth).mean;
  bool ok = round1(same) == 15.7 && round1(rev) == 13.7 && round1(both) == 15.3;
  std::string d = "Same " + fmt(same, 2) + " (15.7), Reversed " + fmt(rev, 2) + " (13.7), UnseenBoth " + fmt(both, 2) +
                  " (15.3)";
  auto icl = bucket_by_condition(grid("icl8_bleu.tsv"), mfti16());
  d += "; ICL UnseenBoth " + fmt(icl.at(Condition::UnseenBoth).mean, 2);
  return {ok, d};
}

// 4 -----------------------------------------------------------------------------

// Sentence BLEU with exp smoothing and effective order, counted with plain maps.
double oracle_sentence_bleu(const std::vector<std::string>& hyp, const std::vector<std::string>& ref) {
  if (hyp.empty()) return 0.0;
  double log_sum = 0, factor = 1;
  int orders = 0;
  bool any_match = false;
  std::array<std::pair<long, long>, 4> counts{};
  for (std::size_t n = 1; n <= 4; ++n) {
    std::map<std::vector<std::string>, long> h, r;
    for (std::size_t i = 0; i + n <= hyp.size(); ++i) ++h[{hyp.begin() + i, hyp.begin() + i + n}];
    for (std::size_t i = 0; i + n <= ref.size(); ++i) ++r[{ref.begin() + i, ref.begin() + i + n}];
    long match = 0, total = 0;
    for (const auto& [g, c] : h) {
      total += c;
      auto it = r.find(g);
      if (it != r.end()) match += std::min(c, it->second);
    }
    counts[n - 1] = {match, total};
    any_match = any_match || match > 0;
  }
  if (!any_match) return 0.0;
  for (const auto& [match, total] : counts) {
    if (total == 0) continue;
    ++orders;
    if (match == 0) {
      factor *= 2;
      log_sum += std::log(100.0 / (factor * static_cast<double>(total)));
    } else {
      log_sum += std::log(100.0 * static_cast<double>(match) / static_cast<double>(total));
    }
  }
  double bp = hyp.size() < ref.size() ? std::exp(1.0 - static_cast<double>(ref.size()) / static_cast<double>(hyp.size())) : 1.0;
  return bp * std::exp(log_sum / orders);
}

Outcome detector_suite() {
  std::mt19937_64 rng(20231016);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  std::vector<std::string> vocab;
  for (int i = 0; i < 60; ++i) vocab.push_back("w" + std::to_string(i));
  auto words = [&](std::size_t n) {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(vocab[pick(vocab.size())]);
    return v;
  };
  std::map<std::string, std::pair<int, int>> tally;  // detector -> (agree, total)
  auto record = [&](const char* det, bool got, bool want) {
    auto& t = tally[det];
    t.first += got == want;
    t.second += 1;
  };
  auto make = [](const std::string& src, const std::string& hyp, const std::string& ref, const char* tgt = "fr") {
    return TranslationRecord{"x", {LanguageCode("de"), LanguageCode(tgt)}, src, hyp, ref, {}};
  };

  // Source copy: 100 edited copies at the default threshold, 50 pairs at threshold = BLEU and just below it.
  for (int i = 0; i < 100; ++i) {
    auto src = words(8 + pick(30));
    auto hyp = src;
    for (std::size_t e = pick(5); e > 0; --e) hyp[pick(hyp.size())] = "z" + std::to_string(pick(1000));
    auto r = make(join(src), join(hyp), "r");
    record("SC", detect_source_copy(r), oracle_sentence_bleu(hyp, src) > 80.0);
  }
  for (int i = 0; i < 50; ++i) {
    auto src = words(6 + pick(20));
    auto hyp = src;
    hyp[pick(hyp.size())] = "z";
    auto r = make(join(src), join(hyp), "r");
    double b = oracle_sentence_bleu(hyp, src);
    DetectorConfig at, below;
    at.sc_bleu_threshold = b;
    below.sc_bleu_threshold = std::nextafter(b, -1.0);
    record("SC", detect_source_copy(r, at), false);
    record("SC", detect_source_copy(r, below), true);
  }

  // Over/under translation: ratios exactly 2 and 0.5 and one token either side.
  for (int i = 0; i < 200; ++i) {
    std::size_t r = 2 + 2 * pick(15);
    std::size_t h;
    switch (i % 6) {
      case 0: h = 2 * r; break;
      case 1: h = 2 * r + 1; break;
      case 2: h = 2 * r - 1; break;
      case 3: h = r / 2; break;
      case 4: h = r / 2 - 1; break;
      default: h = r / 2 + 1 + pick(r); break;
    }
    if (h == 0) h = 1;
    auto rec = make("s", join(words(h)), join(words(r)));
    record("OU", detect_over_under(rec), h > 2 * r || 2 * h < r);
  }

  // Oscillation: an n-gram repeated 2 or 3 times (n = 1..5) inside distinct filler.
  for (int i = 0; i < 200; ++i) {
    std::size_t n = 1 + pick(5);
    std::size_t reps = 2 + (i % 2);
    std::vector<std::string> toks;
    for (std::size_t k = 0, pre = pick(6); k < pre; ++k) toks.push_back("a" + std::to_string(k));
    std::vector<std::string> gram;
    for (std::size_t k = 0; k < n; ++k) gram.push_back("g" + std::to_string(k));
    for (std::size_t k = 0; k < reps; ++k) toks.insert(toks.end(), gram.begin(), gram.end());
    for (std::size_t k = 0, post = pick(6); k < post; ++k) toks.push_back("b" + std::to_string(k));
    auto rec = make("s", join(toks), "r");
    record("OH", detect_oscillatory_hallucination(rec), reps >= 3 && n <= 4);
  }

  // Off-target: external labels equal to, different from, or missing for the target.
  std::map<std::string, LanguageCode> labels;
  std::vector<std::pair<TranslationRecord, bool>> ot_cases;
  const auto& langs = core_languages();
  for (int i = 0; i < 200; ++i) {
    auto tgt = langs[pick(langs.size())];
    TranslationRecord r{"ot" + std::to_string(i), {LanguageCode("de"), tgt}, "s", "h", "r", {}};
    bool want;
    if (i % 3 == 0) {
      labels[r.id] = tgt;
      want = false;
    } else if (i % 3 == 1) {
      auto other = langs[(std::find(langs.begin(), langs.end(), tgt) - langs.begin() + 1 + pick(12)) % langs.size()];
      labels[r.id] = other;
      want = true;
    } else {
      want = true;  // undetermined counts as off-target
    }
    ot_cases.emplace_back(std::move(r), want);
  }
  HypothesisLanguage lid(nullptr, &labels);
  for (const auto& [r, want] : ot_cases) record("OT", detect_off_target(r, lid), want);

  // Random sequences against the brute-force oracle.
  int agree = 0;
  const int kRandom = 10000;
  for (int i = 0; i < kRandom; ++i) {
    std::size_t len = pick(61);
    std::size_t alphabet = 1 + pick(5);
    std::vector<std::string> toks;
    for (std::size_t k = 0; k < len; ++k) toks.push_back(std::string(1, static_cast<char>('a' + pick(alphabet))));
    agree += has_oscillation(toks, 4, 3) == oracle::has_consecutive_repeat(toks, 4, 3);
  }

  bool ok = agree == kRandom;
  std::string d;
  for (const auto& [det, t] : tally) {
    ok = ok && t.first == t.second && t.second >= 200;
    d += det + " " + std::to_string(t.first) + "/" + std::to_string(t.second) + ", ";
  }
  d += "random OH " + std::to_string(agree) + "/" + std::to_string(kRandom);
  return {ok, d};
}

// 5 -----------------------------------------------------------------------------

Outcome langid_gate() {
  auto t0 = Clock::now();
  const auto& lid = identifier();
  double train_secs = seconds_since(t0);
  auto held = read_slice("heldout");
  std::size_t total = 0, correct = 0, min_per_lang = SIZE_MAX, short_lines = 0;
  auto t1 = Clock::now();
  for (const auto& [lang, lines] : held) {
    min_per_lang = std::min(min_per_lang, lines.size());
    for (const auto& line : lines) {
      short_lines += text::codepoint_count(line) < 20;
      ++total;
      correct += lid.identify(line).lang == lang;
    }
  }
  double secs = seconds_since(t1);
  double acc = static_cast<double>(correct) / static_cast<double>(total);
  bool ok = acc >= 0.95 && secs < 10.0 && held.size() == 13 && min_per_lang >= 200 && short_lines == 0;
  return {ok, "accuracy " + fmt(acc) + " on " + std::to_string(total) + " sentences (" + std::to_string(held.size()) +
                  " languages, min " + std::to_string(min_per_lang) + " each), identify " + fmt(secs, 2) +
                  " s, training " + fmt(train_secs, 2) + " s"};
}

// 6 -----------------------------------------------------------------------------

Outcome spearman_suite() {
  std::mt19937_64 rng(6);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    std::size_t n = 2 + rng() % 60;
    // Every fourth case draws from two or three values only.
    std::uint64_t levels = i % 4 == 0 ? 2 + rng() % 2 : i % 4 == 1 ? 5 : 1000000;
    std::vector<double> x(n), y(n);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] = static_cast<double>(rng() % levels);
      y[k] = static_cast<double>(rng() % levels) * 0.5 + (i % 2 ? x[k] : 0.0);
    }
    auto constant = [](const std::vector<double>& v) {
      return std::all_of(v.begin(), v.end(), [&](double e) { return e == v[0]; });
    };
    if (constant(x)) x[0] += 1;
    if (constant(y)) y[0] += 1;
    worst = std::max(worst, std::abs(spearman(x, y) - oracle::spearman(x, y)));
  }

  auto mfti = grid("mfti_bleu.tsv");
  auto features = FeatureTable::load(testpaths::data_dir() / "features" / "uriel_knn.tsv");
  auto similarity_rho = [&](FeatureCategory c) {
    std::map<LanguageCode, double> f;
    for (const auto& l : mfti.langs()) {
      if (l != LanguageCode("en")) f[l] = similarity_to_english(features, l, c);
    }
    return correlate_factors(mfti, f, Side::ToX).rho;
  };
  double geo = similarity_rho(FeatureCategory::Geography);
  double syn = similarity_rho(FeatureCategory::Syntax);
  double phy = similarity_rho(FeatureCategory::Phylogeny);
  double data = correlate_factors(mfti, load_factors(testpaths::data_dir() / "factors" / "pretraining_tokens.tsv"),
                                  Side::ToX)
                    .rho;
  bool ok = worst <= 1e-12 && geo > syn && syn > phy && phy > data;
  return {ok, "1000 vectors max |diff| " + text::format_double(worst) + "; To-X geography " + fmt(geo, 3) +
                  " > syntax " + fmt(syn, 3) + " > phylogeny " + fmt(phy, 3) + " > data amount " + fmt(data, 3)};
}

// 7 -----------------------------------------------------------------------------

Outcome partition_table() {
  // S same, R reversed, D unseen direction, s unseen source, t unseen target, B unseen both.
  const char* expected[] = {
      // en de fr ca fi ru bg zh ko ar sw hi ta
      ". S t t S t t R S t R S t",  // en
      "S . t t S t t R D t D S t",  // de
      "s s . B s B B s s B s s B",  // fr
      "s s B . s B B s s B s s B",  // ca
      "S R t t . t t D S t R S t",  // fi
      "s s B B s . B s s B s s B",  // ru
      "s s B B s B . s s B s s B",  // bg
      "S S t t D t t . D t D S t",  // zh
      "R D t t R t t D . t R D t",  // ko
      "s s B B s B B s s . s s B",  // ar
      "S D t t S t t D S t . D t",  // sw
      "R R t t R t t R D t D . t",  // hi
      "s s B B s B B s s B s s .",  // ta
  };
  const std::map<char, Condition> code{{'S', Condition::SameDirection}, {'R', Condition::ReversedDirection},
                                       {'D', Condition::UnseenDirection}, {'s', Condition::UnseenSrc},
                                       {'t', Condition::UnseenTgt},       {'B', Condition::UnseenBoth}};
  auto spec = mfti16();
  const auto& langs = core_languages();
  std::size_t checked = 0, agree = 0, total_hits = 0;
  std::map<Condition, std::size_t> counts;
  for (std::size_t i = 0; i < langs.size(); ++i) {
    for (std::size_t j = 0; j < langs.size(); ++j) {
      if (i == j) continue;
      LanguagePair d{langs[i], langs[j]};
      char want = expected[i][2 * j];
      auto got = classify(spec, d);
      ++checked;
      agree += code.at(want) == got;
      ++counts[got];
      std::size_t hits = 0;
      for (auto c : kAllConditions) hits += c == got;
      total_hits += hits;
    }
  }
  bool ok = checked == 156 && agree == 156 && total_hits == 156;
  std::string d = std::to_string(agree) + "/" + std::to_string(checked) + " directions match;";
  for (const auto& [c, n] : counts) d += " " + std::string(to_string(c)) + "=" + std::to_string(n);
  return {ok, d};
}

// 8 -----------------------------------------------------------------------------

Outcome loglinear_suite() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> coef(-20, 20), noise(-2, 2);
  double exact_err = 0, oracle_err = 0;
  for (int i = 0; i < 200; ++i) {
    std::size_t n = 2 + rng() % 10;
    std::vector<double> ns, ys, noisy;
    double a = coef(rng), b = coef(rng);
    for (std::size_t k = 0; k < n; ++k) {
      double x = static_cast<double>(1 + rng() % 1000);
      if (std::find(ns.begin(), ns.end(), x) != ns.end()) x += 1000;
      ns.push_back(x);
      ys.push_back(a + b * std::log(x));
      noisy.push_back(ys.back() + noise(rng));
    }
    auto fit = loglinear_fit(ns, ys);
    exact_err = std::max({exact_err, std::abs(fit.slope - b), std::abs(fit.intercept - a)});
    auto nf = loglinear_fit(ns, noisy);
    auto ref = oracle::normal_equations(ns, noisy);
    oracle_err = std::max({oracle_err, std::abs(nf.slope - ref.slope), std::abs(nf.intercept - ref.intercept)});
  }
  bool ok = exact_err <= 1e-9 && oracle_err <= 1e-9;
  return {ok, "exact data max coefficient error " + text::format_double(exact_err) + ", noisy data vs normal equations " +
                  text::format_double(oracle_err)};
}

// 9 -----------------------------------------------------------------------------

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "mtkit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli::run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string digest_outputs(const fs::path& dir) {
  std::string all;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) all += f.filename().string() + ":" + sha256_file(f) + "\n";
  return sha256_hex(all);
}

std::vector<TranslationRecord> synthetic_records(std::size_t per_pair, std::size_t n_langs, std::uint64_t seed) {
  static const auto held = read_slice("heldout");
  std::mt19937_64 rng(seed);
  std::vector<LanguageCode> langs(core_languages().begin(), core_languages().begin() + n_langs);
  std::vector<TranslationRecord> out;
  for (const auto& s : langs) {
    for (const auto& t : langs) {
      if (s == t) continue;
      for (std::size_t i = 0; i < per_pair; ++i) {
        const auto& src = held.at(s)[i % held.at(s).size()];
        const auto& ref = held.at(t)[i % held.at(t).size()];
        std::string hyp;
        switch (rng() % 8) {
          case 0: hyp = src; break;                                   // copy
          case 1: hyp = held.at(langs[rng() % langs.size()])[i % 1012]; break;  // maybe wrong language
          case 2: hyp = ref + " " + ref + " " + ref; break;            // too long
          case 3: hyp = ref.substr(0, ref.size() / 3); break;          // too short, maybe mid-character
          case 4: {
            auto words = text::split_whitespace(ref);
            std::string w = words.empty() ? "x" : std::string(words[0]);
            hyp = ref + " " + w + " " + w + " " + w + " " + w;
            break;
          }
          default: hyp = ref; break;
        }
        if (!text::is_valid_utf8(hyp)) hyp = ref;
        out.push_back({std::to_string(i), {s, t}, src, hyp, ref, {}});
      }
    }
  }
  return out;
}

Outcome determinism() {
  auto root = fs::temp_directory_path() / "mtkit_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  auto cfg = (testpaths::source_dir() / "configs" / "mfti16.json").string();
  std::vector<std::string> digests;
  int rc = 0;
  for (const char* run : {"prepare1", "prepare2"}) {
    rc |= run_cli({"prepare", "--config", cfg, "--seed", "16", "--out", (root / run).string()});
    digests.push_back(digest_outputs(root / run));
  }
  io::write_file_atomic(root / "results.jsonl", results_to_jsonl(synthetic_records(30, 13, 9)));
  for (const char* run : {"evaluate1", "evaluate2"}) {
    rc |= run_cli({"evaluate", "--config", cfg, "--results", (root / "results.jsonl").string(), "--out",
                   (root / run).string()});
    digests.push_back(digest_outputs(root / run));
  }
  bool ok = rc == 0 && digests[0] == digests[1] && digests[2] == digests[3] && !fs::exists(root / "prepare1" / ".failed");
  fs::remove_all(root);
  return {ok, "prepare " + digests[0].substr(0, 12) + (digests[0] == digests[1] ? " == " : " != ") +
                  digests[1].substr(0, 12) + ", evaluate " + digests[2].substr(0, 12) +
                  (digests[2] == digests[3] ? " == " : " != ") + digests[3].substr(0, 12)};
}

// 10 ----------------------------------------------------------------------------

Outcome throughput() {
  auto records = synthetic_records(1012, 13, 10);
  const auto& lid_model = identifier();
  HypothesisLanguage lid(&lid_model, nullptr);
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  auto t0 = Clock::now();
  auto report = build_error_report(records, DetectorConfig{}, lid, threads);
  auto by_pair = split_by_pair(report, records);
  double secs = seconds_since(t0);
  bool ok = records.size() == 156 * 1012 && by_pair.size() == 156 && secs < 120.0;
  return {ok, std::to_string(records.size()) + " records over " + std::to_string(by_pair.size()) + " pairs in " +
                  fmt(secs, 2) + " s on " + std::to_string(threads) + " threads (any-error ratio " +
                  fmt(report.any_ratio(), 3) + ")"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"BLEU parity with the reference scorer", bleu_parity},
      {"Per-direction grid reanalysis (overall means)", grid_means},
      {"Data-condition buckets for mFTI-16", condition_buckets},
      {"Error-detector definitional suite", detector_suite},
      {"Language-ID gate", langid_gate},
      {"Spearman exactness and factor ordering", spearman_suite},
      {"Partition classifier expectation table", partition_table},
      {"Log-linear fit", loglinear_suite},
      {"Determinism of prepare and evaluate", determinism},
      {"Error-detection throughput", throughput},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
