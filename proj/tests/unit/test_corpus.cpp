#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "mtkit/corpus.hpp"
#include "mtkit/error.hpp"

using namespace mtkit;

namespace {

const LanguagePair kFrEn{LanguageCode("fr"), LanguageCode("en")};

Corpus parse(const std::string& text, CorpusFormat f, std::optional<LanguagePair> p = kFrEn,
             LoadOptions opts = {}) {
  std::istringstream in(text);
  return parse_corpus(in, f, p, "test", opts);
}

Corpus scored(const std::vector<double>& scores) {
  std::vector<ParallelSentence> v;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    v.push_back(make_parallel_sentence(kFrEn.source, kFrEn.target, "s" + std::to_string(i),
                                       "t" + std::to_string(i), scores[i]));
  }
  return Corpus(v, "mem");
}

std::vector<std::string> sources(const Corpus& c) {
  std::vector<std::string> out;
  for (const auto& s : c.pairs()) out.push_back(s.src_text);
  return out;
}

}  // namespace

TEST_CASE("formats load into sentences") {
  auto c = parse("Bonjour.\tHello.\n", CorpusFormat::TsvPair);
  REQUIRE(c.size() == 1);
  CHECK(c.pairs()[0] == ParallelSentence{kFrEn.source, kFrEn.target, "Bonjour.", "Hello.", std::nullopt});

  c = parse("1.07\tBonjour.\tHello.\n", CorpusFormat::TsvScored);
  CHECK(c.pairs()[0].score == 1.07);

  c = parse(R"({"src_lang":"fr","tgt_lang":"en","src_text":" Bonjour. ","tgt_text":"Hello.","score":2})" "\n",
            CorpusFormat::Jsonl, std::nullopt);
  CHECK(c.pairs()[0].src_text == "Bonjour.");
  CHECK(c.pairs()[0].score == 2.0);

  CHECK(parse("", CorpusFormat::TsvPair).empty());
  CHECK_THROWS_AS(parse("a\tb\n", CorpusFormat::TsvPair, std::nullopt), InputError);
}

TEST_CASE("normalisation and trimming") {
  auto c = parse("  Café  du  coin \tHello\n", CorpusFormat::TsvPair);
  CHECK(c.pairs()[0].src_text == "Café  du  coin");
}

TEST_CASE("malformed lines are counted and the threshold aborts") {
  std::string text;
  for (int i = 0; i < 10; ++i) text += "a" + std::to_string(i) + "\tb\n";
  text += "only one field\n";
  auto c = parse(text, CorpusFormat::TsvPair);
  CHECK(c.size() == 10);
  REQUIRE(c.load_report().malformed.size() == 1);
  CHECK(c.load_report().malformed[0].line == 11);

  // 2 of 11 is above 10%.
  CHECK_THROWS_AS(parse(text + "\t\n", CorpusFormat::TsvPair), InputError);
  LoadOptions lenient;
  lenient.max_malformed_fraction = 0.5;
  CHECK(parse(text + "\t\n", CorpusFormat::TsvPair, kFrEn, lenient).size() == 10);

  // 1 of 10 is exactly the limit and loads.
  std::string nine;
  for (int i = 0; i < 9; ++i) nine += "x\ty\n";
  CHECK(parse(nine + "bad\n", CorpusFormat::TsvPair).size() == 9);

  CHECK_THROWS_AS(load_corpus("/nonexistent/file.tsv", CorpusFormat::TsvPair, kFrEn), IoError);
}

TEST_CASE("sentence invariants") {
  CHECK_THROWS_AS(make_parallel_sentence(kFrEn.source, kFrEn.source, "a", "b"), InputError);
  CHECK_THROWS_AS(make_parallel_sentence(kFrEn.source, kFrEn.target, "  ", "b"), InputError);
  CHECK_THROWS_AS(make_parallel_sentence(kFrEn.source, kFrEn.target, "a\nb", "b"), InputError);
  CHECK_THROWS_AS(make_parallel_sentence(kFrEn.source, kFrEn.target, "a", "b", -1.0), InputError);
}

TEST_CASE("round trip through every format") {
  std::vector<ParallelSentence> v;
  for (int i = 0; i < 50; ++i) {
    v.push_back(make_parallel_sentence(kFrEn.source, kFrEn.target, "source « " + std::to_string(i) + " » é",
                                       "target \"" + std::to_string(i) + "\"", 0.5 + i * 0.013));
  }
  Corpus original(v, "mem");
  for (auto f : {CorpusFormat::TsvPair, CorpusFormat::TsvScored, CorpusFormat::Jsonl}) {
    std::ostringstream out;
    write_corpus(original, f, out);
    auto back = parse(out.str(), f);
    if (f == CorpusFormat::TsvPair) {
      REQUIRE(back.size() == original.size());
      for (std::size_t i = 0; i < v.size(); ++i) {
        CHECK(back.pairs()[i].src_text == v[i].src_text);
        CHECK_FALSE(back.pairs()[i].score);
      }
      std::ostringstream again;
      write_corpus(back, f, again);
      CHECK(parse(again.str(), f) == back);
    } else {
      CHECK(back == original);
    }
  }
}

TEST_CASE("quality filtering") {
  auto c = scored({0.9, 1.1, 1.3});
  CHECK(sources(filter_by_quality(c, QualityFilter::at_least(1.0))) == std::vector<std::string>{"s1", "s2"});
  CHECK(sources(filter_by_quality(scored({1.0, 1.0, 0.5}), QualityFilter::top(1))) == std::vector<std::string>{"s0"});
  CHECK(sources(filter_by_quality(scored({1.0, 1.0, 0.5}), QualityFilter::bottom(2))) ==
        std::vector<std::string>{"s1", "s2"});

  auto unscored = parse("a\tb\nc\td\n", CorpusFormat::TsvPair);
  CHECK_THROWS_WITH_AS(filter_by_quality(unscored, QualityFilter::top(1)), doctest::Contains("record 1"), InputError);

  // top(k) and bottom(n-k) partition the corpus, ties included.
  std::vector<double> scores;
  for (int i = 0; i < 40; ++i) scores.push_back((i * 7) % 5 * 0.25);
  auto big = scored(scores);
  for (std::size_t k = 0; k <= scores.size(); ++k) {
    auto top = sources(filter_by_quality(big, QualityFilter::top(k)));
    auto bottom = sources(filter_by_quality(big, QualityFilter::bottom(scores.size() - k)));
    CHECK(top.size() == k);
    std::vector<std::string> both = top;
    both.insert(both.end(), bottom.begin(), bottom.end());
    std::sort(both.begin(), both.end());
    auto all = sources(big);
    std::sort(all.begin(), all.end());
    CHECK(both == all);
  }
}

TEST_CASE("sampling per pair") {
  std::vector<ParallelSentence> v;
  for (int i = 0; i < 5000; ++i) {
    v.push_back(make_parallel_sentence(kFrEn.source, kFrEn.target, "s" + std::to_string(i), "t"));
  }
  for (int i = 0; i < 500; ++i) {
    v.push_back(make_parallel_sentence(LanguageCode("de"), LanguageCode("en"), "d" + std::to_string(i), "t"));
  }
  Corpus c(v, "mem");
  auto s = sample_per_pair(c, 1000, 7);
  std::map<LanguagePair, std::size_t> counts;
  for (const auto& p : s.pairs()) ++counts[p.pair()];
  CHECK(counts[kFrEn] == 1000);
  CHECK(counts[LanguagePair{LanguageCode("de"), LanguageCode("en")}] == 500);
  CHECK(sample_per_pair(c, 1000, 7) == s);
  CHECK_FALSE(sample_per_pair(c, 1000, 8) == s);

  // Sub-multiset of the input, in input order.
  auto src = sources(s);
  std::size_t pos = 0;
  for (const auto& x : src) {
    while (pos < v.size() && v[pos].src_text != x) ++pos;
    CHECK(pos < v.size());
  }
  CHECK_THROWS_AS(sample_per_pair(c, 0, 1), InputError);

  auto top = top_per_pair(scored({0.1, 0.9, 0.5, 0.7}), 2);
  CHECK(sources(top) == std::vector<std::string>{"s1", "s3"});
}

TEST_CASE("multi-way tables expand to directions") {
  auto path = std::filesystem::temp_directory_path() / "mtkit_multiway.tsv";
  {
    std::ofstream f(path);
    f << "key\ten\tde\tfr\n"
      << "k1\tcat\tKatze\tchat\n"
      << "k2\tdog\t\tchien\n";
  }
  auto all = load_multiparallel(path);
  CHECK(all.size() == 6 + 2);
  std::vector<LanguagePair> only{{LanguageCode("de"), LanguageCode("fr")}};
  auto one = load_multiparallel(path, &only);
  REQUIRE(one.size() == 1);
  CHECK(one.pairs()[0].src_text == "Katze");
  CHECK(one.pairs()[0].tgt_text == "chat");
  {
    std::ofstream f(path);
    f << "key\ten\tde\n"
      << "k1\tcat\n";
  }
  CHECK_THROWS_AS(load_multiparallel(path), InputError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_multiparallel(path), IoError);
}
