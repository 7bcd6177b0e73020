#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

#include "mtkit/bleu.hpp"
#include "mtkit/error.hpp"
#include "mtkit/stats.hpp"
#include "mtkit/tokenizer.hpp"
#include "support/oracles.hpp"
#include "support/paths.hpp"

using namespace mtkit;
using nlohmann::json;

namespace {

json load_fixture() {
  std::ifstream in(testpaths::fixture("bleu_parity.json"));
  return json::parse(in);
}

std::vector<TokenSequence> tokenize_all(const json& texts, TokenizerId id) {
  std::vector<TokenSequence> out;
  for (const auto& t : texts) out.push_back(tokenize(t.get<std::string>(), id));
  return out;
}

TokenSequence toks(std::vector<std::string> t) { return {std::move(t), TokenizerId::Intl13a}; }

}  // namespace

TEST_CASE("13a tokenization matches the reference tokenizer") {
  auto fixture = load_fixture();
  for (const auto& c : fixture["tokenization"]) {
    auto text = c["text"].get<std::string>();
    CAPTURE(text);
    CHECK(tokenize(text, TokenizerId::Intl13a).tokens == c["13a"].get<std::vector<std::string>>());
    CHECK(tokenize(text, TokenizerId::Char).tokens == c["char"].get<std::vector<std::string>>());
  }
}

TEST_CASE("tokenizer basics") {
  CHECK(tokenize("Hello, world!", TokenizerId::Intl13a).tokens == std::vector<std::string>{"Hello", ",", "world", "!"});
  CHECK(tokenize("你好", TokenizerId::Char).tokens == std::vector<std::string>{"你", "好"});
  CHECK(tokenize("", TokenizerId::Intl13a).empty());
  CHECK(tokenize("", TokenizerId::Char).empty());
  CHECK(tokenize_13a_string("a,b") == "a , b");
  CHECK(parse_tokenizer("13a") == TokenizerId::Intl13a);
  CHECK_THROWS_AS(parse_tokenizer("moses"), InputError);
}

TEST_CASE("corpus and sentence BLEU match the pinned reference scores") {
  auto fixture = load_fixture();
  for (const auto& set : fixture["sets"]) {
    auto tok = parse_tokenizer(set["tokenize"].get<std::string>());
    auto hyps = tokenize_all(set["hyps"], tok);
    auto refs = tokenize_all(set["refs"], tok);
    CAPTURE(set["name"].get<std::string>());
    CHECK(corpus_bleu(hyps, refs, Smoothing::none()).score ==
          doctest::Approx(set["corpus_bleu_none"].get<double>()).epsilon(1e-12));
    CHECK(corpus_bleu(hyps, refs, Smoothing::exp()).score ==
          doctest::Approx(set["corpus_bleu_exp"].get<double>()).epsilon(1e-12));
    CHECK(corpus_bleu(hyps, refs, Smoothing::floor()).score ==
          doctest::Approx(set["corpus_bleu_floor"].get<double>()).epsilon(1e-12));
    for (std::size_t i = 0; i < hyps.size(); ++i) {
      CAPTURE(i);
      CHECK(sentence_bleu(hyps[i], refs[i], Smoothing::exp()).score ==
            doctest::Approx(set["sentence_bleu_exp"][i].get<double>()).epsilon(1e-12));
      CHECK(sentence_bleu(hyps[i], refs[i], Smoothing::floor()).score ==
            doctest::Approx(set["sentence_bleu_floor"][i].get<double>()).epsilon(1e-12));
    }
  }
}

TEST_CASE("BLEU edge cases") {
  auto h = tokenize("the cat sat on the mat", TokenizerId::Intl13a);
  CHECK(corpus_bleu(std::vector{h}, std::vector{h}).score == doctest::Approx(100.0));
  CHECK(sentence_bleu(h, h).score == doctest::Approx(100.0));
  CHECK(sentence_bleu(toks({"x"}), toks({"x"})).score == doctest::Approx(100.0));

  // Unigrams and bigrams match but no 4-gram anywhere: unsmoothed corpus BLEU is zero.
  auto a = toks({"a", "b", "c", "x", "d"});
  auto b = toks({"a", "b", "c", "y", "d"});
  auto s = corpus_bleu(std::vector{a}, std::vector{b});
  CHECK(s.score == 0.0);
  CHECK(s.precisions[0] == doctest::Approx(0.8));

  auto fixture = load_fixture();
  const auto& no = fixture["no_overlap"];
  auto score = sentence_bleu(tokenize(no["hyp"].get<std::string>(), TokenizerId::Intl13a),
                             tokenize(no["ref"].get<std::string>(), TokenizerId::Intl13a), Smoothing::exp())
                   .score;
  CHECK(score == doctest::Approx(no["sentence_bleu_exp"].get<double>()));
  CHECK(score >= 0.0);
  CHECK(score < 5.0);

  CHECK_THROWS_AS(corpus_bleu(std::vector{a}, std::vector<TokenSequence>{}), InputError);
  CHECK_THROWS_AS(corpus_bleu(std::vector<TokenSequence>{}, std::vector<TokenSequence>{}), InputError);

  // Empty hypothesis against a nonempty reference.
  CHECK(sentence_bleu(toks({}), toks({"a"})).score == 0.0);
}

TEST_CASE("brevity penalty") {
  auto ref = toks({"a", "b", "c", "d", "e", "f", "g", "h"});
  auto hyp = toks({"a", "b", "c", "d"});
  auto s = corpus_bleu(std::vector{hyp}, std::vector{ref});
  CHECK(s.brevity_penalty == doctest::Approx(std::exp(1.0 - 8.0 / 4.0)));
  CHECK(s.score == doctest::Approx(100.0 * std::exp(-1.0)));
}

TEST_CASE("corpus BLEU is invariant under joint permutation") {
  auto fixture = load_fixture();
  const auto& set = fixture["sets"][0];
  auto hyps = tokenize_all(set["hyps"], TokenizerId::Intl13a);
  auto refs = tokenize_all(set["refs"], TokenizerId::Intl13a);
  double base = corpus_bleu(hyps, refs).score;
  std::vector<std::size_t> order(hyps.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937 gen(7);
  for (int round = 0; round < 5; ++round) {
    std::shuffle(order.begin(), order.end(), gen);
    std::vector<TokenSequence> ph, pr;
    for (auto i : order) {
      ph.push_back(hyps[i]);
      pr.push_back(refs[i]);
    }
    CHECK(corpus_bleu(ph, pr).score == base);
  }
}

TEST_CASE("sentence BLEU does not increase when a matching token is replaced") {
  // Family: reference of 12 distinct tokens, hypothesis equal to it with the first m
  // tokens replaced by out-of-reference tokens; lengths stay fixed.
  std::vector<std::string> ref;
  for (int i = 0; i < 12; ++i) ref.push_back("w" + std::to_string(i));
  double prev = 101.0;
  for (int m = 0; m <= 12; ++m) {
    auto hyp = ref;
    for (int i = 0; i < m; ++i) hyp[i] = "z" + std::to_string(i);
    double s = sentence_bleu(toks(hyp), toks(ref)).score;
    CHECK(s <= prev);
    prev = s;
  }
}

TEST_CASE("signature and length ratio") {
  CHECK(bleu_signature(TokenizerId::Intl13a, Smoothing::none()).starts_with("bleu|order:4|tok:intl-13a|smooth:none|version:mtkit-"));
  CHECK(Smoothing::parse("floor:0.2").value == 0.2);
  CHECK(Smoothing::parse(Smoothing::floor(0.3).id()).value == 0.3);
  std::vector<std::string> ten(10, "t");
  CHECK(length_ratio(toks(std::vector<std::string>(25, "t")), toks(ten)) == 2.5);
  CHECK(length_ratio(toks(std::vector<std::string>(5, "t")), toks(ten)) == 0.5);
  CHECK(length_ratio(toks({}), toks(ten)) == 0.0);
  CHECK_THROWS_AS(length_ratio(toks(ten), toks({})), InputError);
}

TEST_CASE("spearman") {
  std::vector<double> x{1, 2, 3};
  CHECK(spearman(x, std::vector<double>{10, 20, 30}) == doctest::Approx(1.0));
  CHECK(spearman(x, std::vector<double>{30, 20, 10}) == doctest::Approx(-1.0));
  CHECK(spearman(x, x) == 1.0);
  CHECK_THROWS_AS(spearman(x, std::vector<double>{1, 1, 1}), DegenerateInputError);
  CHECK_THROWS_AS(spearman(std::vector<double>{1}, std::vector<double>{1}), InputError);
  CHECK_THROWS_AS(spearman(x, std::vector<double>{1, 2}), InputError);
  CHECK(average_ranks(std::vector<double>{5, 1, 5, 3}) == std::vector<double>{3.5, 1, 3.5, 2});

  std::mt19937_64 gen(11);
  std::uniform_int_distribution<int> small(0, 3);
  std::normal_distribution<double> normal;
  for (int round = 0; round < 200; ++round) {
    std::vector<double> a(8), b(8);
    for (int i = 0; i < 8; ++i) {
      a[i] = round % 2 ? small(gen) : normal(gen);
      b[i] = small(gen);
    }
    if (std::all_of(a.begin(), a.end(), [&](double v) { return v == a[0]; })) continue;
    if (std::all_of(b.begin(), b.end(), [&](double v) { return v == b[0]; })) continue;
    CHECK(std::abs(spearman(a, b) - oracle::spearman(a, b)) < 1e-12);
    // Strictly increasing transforms leave the coefficient unchanged.
    std::vector<double> ea(8);
    for (int i = 0; i < 8; ++i) ea[i] = std::exp(a[i]) * 3 + 1;
    CHECK(spearman(ea, b) == doctest::Approx(spearman(a, b)).epsilon(1e-14));
  }
}

TEST_CASE("log-linear fit") {
  std::vector<double> ns{1000, 2000, 4000, 8000, 16000, 32000};
  std::vector<double> ys;
  for (double n : ns) ys.push_back(2 + 3 * std::log(n));
  auto fit = loglinear_fit(ns, ys);
  CHECK(std::abs(fit.slope - 3) < 1e-9);
  CHECK(std::abs(fit.intercept - 2) < 1e-9);
  CHECK(fit.r_squared == doctest::Approx(1.0));

  std::mt19937_64 gen(5);
  std::normal_distribution<double> noise(0, 0.7);
  std::vector<double> noisy;
  for (double n : ns) noisy.push_back(10 + 1.5 * std::log(n) + noise(gen));
  fit = loglinear_fit(ns, noisy);
  auto ref = oracle::normal_equations(ns, noisy);
  CHECK(std::abs(fit.slope - ref.slope) < 1e-9);
  CHECK(std::abs(fit.intercept - ref.intercept) < 1e-9);
  // Residuals are orthogonal to the regressors.
  double r1 = 0, rx = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    double e = noisy[i] - fit.predict(ns[i]);
    r1 += e;
    rx += e * std::log(ns[i]);
  }
  CHECK(std::abs(r1) < 1e-9);
  CHECK(std::abs(rx) < 1e-9);

  CHECK_THROWS_AS(loglinear_fit(std::vector<double>{5, 5}, std::vector<double>{1, 2}), DegenerateInputError);
  CHECK_THROWS_AS(loglinear_fit(std::vector<double>{0, 5}, std::vector<double>{1, 2}), InputError);
}
