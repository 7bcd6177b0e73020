#include <doctest.h>

#include <chrono>
#include <filesystem>

#include "mtkit/error.hpp"
#include "mtkit/io.hpp"
#include "mtkit/langid.hpp"
#include "mtkit/text.hpp"
#include "support/paths.hpp"

using namespace mtkit;
namespace fs = std::filesystem;

namespace {

std::map<LanguageCode, std::vector<std::string>> read_slice(const char* which) {
  std::map<LanguageCode, std::vector<std::string>> out;
  for (const auto& l : core_languages()) {
    out[l] = io::read_lines(testpaths::data_dir() / "langid" / which / (l.str() + ".txt"));
  }
  return out;
}

const LanguageIdentifier& model() {
  static const LanguageIdentifier m = LanguageIdentifier::train(read_slice("train"), core_languages());
  return m;
}

}  // namespace

TEST_CASE("training validates its input") {
  auto mono = read_slice("train");
  CHECK(model().profiles().size() == 13);
  auto missing = mono;
  missing.erase(LanguageCode("sw"));
  CHECK_THROWS_WITH_AS(LanguageIdentifier::train(missing, core_languages()), doctest::Contains("'sw'"), InputError);
  auto blank = mono;
  blank[LanguageCode("ta")] = {"  ", ""};
  CHECK_THROWS_WITH_AS(LanguageIdentifier::train(blank, core_languages()), doctest::Contains("'ta'"), InputError);

  std::map<LanguageCode, std::vector<std::string>> twins{{LanguageCode("de"), {"gleicher text hier"}},
                                                         {LanguageCode("fr"), {"gleicher text hier"}}};
  auto t = LanguageIdentifier::train(twins, {});
  CHECK(t.profiles()[0].ngram_logprobs == t.profiles()[1].ngram_logprobs);
  CHECK(t.profiles()[0].smoothing_mass == t.profiles()[1].smoothing_mass);
  CHECK_FALSE(t.profiles()[0].warnings.empty());
  // Identical models tie; the smaller code wins.
  CHECK(t.identify("gleicher text hier und noch mehr").lang == LanguageCode("de"));
}

TEST_CASE("undetermined outcomes") {
  CHECK(model().identify("").undetermined());
  CHECK(model().identify("   \t").reason == "empty");
  auto p = model().identify("ok");
  if (p.undetermined()) CHECK(p.reason == "short");
}

TEST_CASE("held-out accuracy and repetition invariance") {
  auto held = read_slice("heldout");
  std::size_t correct = 0, total = 0;
  for (const auto& [lang, lines] : held) {
    for (const auto& line : lines) {
      if (text::codepoint_count(line) < 20) continue;
      auto p = model().identify(line);
      ++total;
      correct += p.lang == lang ? 1 : 0;
      if (total % 50 == 0) {
        auto doubled = model().identify(line + " " + line);
        CHECK(doubled.lang == p.lang);
        CHECK(doubled.score == p.score);
        CHECK(doubled.margin == p.margin);
      }
    }
  }
  double acc = static_cast<double>(correct) / static_cast<double>(total);
  MESSAGE("held-out accuracy " << acc << " over " << total);
  CHECK(acc >= 0.95);
  CHECK(model().identify("மொழிபெயர்ப்பு ஒரு கடினமான வேலை அல்ல").lang == LanguageCode("ta"));
}

TEST_CASE("profile serialisation") {
  auto dir = fs::temp_directory_path() / "mtkit_langid_test";
  fs::remove_all(dir);
  model().save(dir / "p.json");
  auto back = LanguageIdentifier::load(dir / "p.json");
  CHECK(back.languages() == model().languages());
  for (std::size_t i = 0; i < back.profiles().size(); ++i) {
    CHECK(back.profiles()[i].ngram_logprobs == model().profiles()[i].ngram_logprobs);
  }
  auto a = model().identify("Dies ist ein ganz gewöhnlicher deutscher Satz.");
  auto b = back.identify("Dies ist ein ganz gewöhnlicher deutscher Satz.");
  CHECK(a.lang == b.lang);
  CHECK(a.score == b.score);
  CHECK(back.to_json() == model().to_json());
  CHECK_THROWS_AS(LanguageIdentifier::from_json("{\"format\":\"other\"}"), InputError);
  fs::remove_all(dir);
}

TEST_CASE("external labels") {
  auto dir = fs::temp_directory_path() / "mtkit_labels_test";
  fs::remove_all(dir);
  auto reg = LanguageRegistry::builtin();
  io::write_file_atomic(dir / "ok.tsv", "r1\tfr\nr2\t__label__en\n");
  auto m = load_external_labels(dir / "ok.tsv", reg);
  CHECK(m.at("r1") == LanguageCode("fr"));
  CHECK(m.at("r2") == LanguageCode("en"));
  io::write_file_atomic(dir / "empty.tsv", "");
  CHECK(load_external_labels(dir / "empty.tsv", reg).empty());
  io::write_file_atomic(dir / "bad.tsv", "r1\txx\n");
  CHECK_THROWS_AS(load_external_labels(dir / "bad.tsv", reg), UnknownLanguageError);
  io::write_file_atomic(dir / "dup.tsv", "r1\tfr\nr1\tde\n");
  CHECK_THROWS_AS(load_external_labels(dir / "dup.tsv", reg), InputError);
  fs::remove_all(dir);
}
