#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "mtkit/analysis.hpp"
#include "mtkit/error.hpp"
#include "mtkit/io.hpp"
#include "support/oracles.hpp"
#include "support/paths.hpp"

using namespace mtkit;

namespace {

LanguageCode L(const char* c) { return LanguageCode(c); }
LanguagePair P(const char* s, const char* t) { return {L(s), L(t)}; }

ScoreGrid fixture_grid(const char* name) { return ScoreGrid::load_tsv(testpaths::data_dir() / "fixtures" / name); }

double round1(double v) { return std::round(v * 10) / 10; }

PartitionSpec mfti16() {
  static const LanguageRegistry reg = LanguageRegistry::builtin();
  return load_partition(testpaths::data_dir() / "partitions" / "mfti16.json", reg);
}

FeatureVector vec(const char* lang, std::vector<std::optional<double>> v) {
  return {L(lang), FeatureCategory::Syntax, std::move(v)};
}

}  // namespace

TEST_CASE("fixture grid means") {
  auto icl = fixture_grid("icl8_bleu.tsv");
  auto mfti = fixture_grid("mfti_bleu.tsv");
  CHECK(icl.size() == 156);
  CHECK(mfti.size() == 156);
  CHECK(round1(overall_mean(icl)) == doctest::Approx(13.9));
  CHECK(round1(overall_mean(mfti)) == doctest::Approx(16.9));
  CHECK(ScoreGrid::parse_tsv(icl.to_tsv()) == icl);
}

TEST_CASE("single cell averages") {
  ScoreGrid g({L("de"), L("fr"), L("ru")});
  g.set(P("de", "fr"), 10.0);
  CHECK_THROWS_AS(average_to_from(g, L("de")), InputError);
  CHECK_THROWS_AS(average_to_from(g, L("zz")), InputError);
  g.set(P("fr", "de"), 4.0);
  auto a = average_to_from(g, L("de"));
  auto b = average_to_from(g, L("fr"));
  CHECK(a.from_x == 10.0);
  CHECK(b.to_x == 10.0);
  CHECK(a.to_x == 4.0);
  CHECK_THROWS_AS(g.set(P("de", "de"), 1.0), InputError);
  CHECK_THROWS_AS(g.set(P("de", "zz"), 1.0), InputError);
  CHECK_THROWS_AS(overall_mean(ScoreGrid({L("de")})), InputError);
}

TEST_CASE("grid tsv errors") {
  CHECK_THROWS_AS(ScoreGrid::parse_tsv(""), InputError);
  CHECK_THROWS_AS(ScoreGrid::parse_tsv("\ten\tde\nen\t\tx\n"), InputError);
  CHECK_THROWS_AS(ScoreGrid::parse_tsv("\ten\tde\nen\t1\t2\n"), InputError);
  CHECK_THROWS_AS(ScoreGrid::parse_tsv("\ten\tde\nfr\t\t2\n"), InputError);
  auto g = ScoreGrid::parse_tsv("\ten\tde\nen\t\t2.5\nde\t\t\n");
  CHECK(g.size() == 1);
  CHECK(g.to_tsv(2) == "\ten\tde\nen\t\t2.50\nde\t\t\n");
}

TEST_CASE("pivot gain") {
  std::vector<TranslationRecord> direct, leg1, leg2;
  for (int i = 0; i < 5; ++i) {
    auto id = "s" + std::to_string(i);
    direct.push_back({id, P("de", "fr"), "quelle " + id, "le chat est noir " + id, "le chat est noir " + id, {}});
    leg1.push_back({id, P("de", "en"), "quelle " + id, "the cat is black " + id, "", {}});
    leg2.push_back({id, P("en", "fr"), "the cat is black " + id, "le chat est noir " + id, "", {}});
  }
  std::vector<LanguageCode> langs{L("de"), L("en"), L("fr")};
  auto piv = compose_pivot(direct, leg1, leg2);
  REQUIRE(piv.size() == 5);
  auto gain = pivot_gain(bleu_grid(direct, langs, {}), bleu_grid(piv, langs, {}));
  CHECK(gain.size() == 1);
  CHECK(*gain.get(P("de", "fr")) == 0.0);

  leg2[2].src = "something else";
  CHECK_THROWS_WITH_AS(compose_pivot(direct, leg1, leg2), doctest::Contains("s2"), InputError);
  leg2[2].src = leg1[2].hyp;
  leg1.pop_back();
  CHECK_THROWS_WITH_AS(compose_pivot(direct, leg1, leg2), doctest::Contains("de-en"), InputError);

  ScoreGrid d(langs), p(langs);
  d.set(P("de", "fr"), 20.0);
  d.set(P("de", "en"), 30.0);
  p.set(P("de", "fr"), 23.0);
  auto g = pivot_gain(d, p);
  CHECK(*g.get(P("de", "fr")) == doctest::Approx(3.0));
  CHECK(!g.get(P("de", "en")));
  CHECK(max_cell(g).dir == P("de", "fr"));
  CHECK_THROWS_AS(pivot_gain(p, ScoreGrid(langs)), InputError);
}

TEST_CASE("cosine similarity") {
  CHECK(cosine_similarity(vec("de", {1, 0, 1, 1}), vec("fr", {1, 0, 1, 1})) == doctest::Approx(1.0));
  CHECK(cosine_similarity(vec("de", {1, 0, 1, 0}), vec("fr", {0, 1, 0, 1})) == 0.0);
  CHECK(cosine_similarity(vec("de", {1, std::nullopt, 1}), vec("fr", {1, 5, 1})) == doctest::Approx(1.0));
  CHECK_THROWS_AS(cosine_similarity(vec("de", {1, std::nullopt, 1}), vec("fr", {1, 1, std::nullopt})), InputError);
  CHECK_THROWS_AS(cosine_similarity(vec("de", {0, 0, 0}), vec("fr", {1, 1, 1})), DegenerateInputError);
  CHECK_THROWS_AS(FeatureTable::parse("en\tsyntax\t1,2\nde\tsyntax\t1,2,3\n"), InputError);
  CHECK_THROWS_AS(FeatureTable::parse("en\tsmell\t1,2\n"), InputError);
  auto t = FeatureTable::parse("# src\nen\tsyntax\t1,?,0\n");
  CHECK(t.notes() == std::vector<std::string>{"src"});
  CHECK(!t.get(L("en"), FeatureCategory::Syntax).values[1]);
}

TEST_CASE("factor correlation") {
  auto mfti = fixture_grid("mfti_bleu.tsv");
  std::map<LanguageCode, double> self, anti, cubed;
  for (const auto& l : mfti.langs()) {
    double v = average_to_from(mfti, l).to_x;
    self[l] = v;
    anti[l] = -v;
    cubed[l] = v * v * v + 7;
  }
  CHECK(correlate_factors(mfti, self, Side::ToX).rho == doctest::Approx(1.0));
  CHECK(correlate_factors(mfti, anti, Side::ToX).rho == doctest::Approx(-1.0));
  CHECK(correlate_factors(mfti, cubed, Side::ToX).rho == correlate_factors(mfti, self, Side::ToX).rho);
  self.erase(L("en"));
  CHECK(correlate_factors(mfti, self, Side::ToX).langs.size() == 12);
  self.erase(L("fr"));
  CHECK_THROWS_WITH_AS(correlate_factors(mfti, self, Side::ToX), doctest::Contains("fr"), InputError);
}

TEST_CASE("influence factor ordering") {
  auto mfti = fixture_grid("mfti_bleu.tsv");
  auto features = FeatureTable::load(testpaths::data_dir() / "features" / "uriel_knn.tsv");
  auto sim = [&](FeatureCategory c) {
    std::map<LanguageCode, double> f;
    for (const auto& l : mfti.langs()) {
      if (l != L("en")) f[l] = similarity_to_english(features, l, c);
    }
    return correlate_factors(mfti, f, Side::ToX).rho;
  };
  auto amount = load_factors(testpaths::data_dir() / "factors" / "pretraining_tokens.tsv");
  double data = correlate_factors(mfti, amount, Side::ToX).rho;
  double geo = sim(FeatureCategory::Geography);
  double syn = sim(FeatureCategory::Syntax);
  double phy = sim(FeatureCategory::Phylogeny);
  CHECK(geo > syn);
  CHECK(syn > phy);
  CHECK(phy > data);
  CHECK(round1(data) == doctest::Approx(0.4));
}

TEST_CASE("condition buckets") {
  auto spec = mfti16();
  auto grid = fixture_grid("mfti16_synthetic_bleu.tsv");
  auto b = bucket_by_condition(grid, spec);
  CHECK(round1(b.at(Condition::SameDirection).mean) == doctest::Approx(15.7));
  CHECK(round1(b.at(Condition::ReversedDirection).mean) == doctest::Approx(13.7));
  CHECK(round1(b.at(Condition::UnseenBoth).mean) == doctest::Approx(15.3));
  double sum = 0;
  std::size_t n = 0;
  for (const auto& [c, bk] : b) {
    sum += bk.mean * static_cast<double>(bk.count);
    n += bk.count;
  }
  CHECK(n == grid.size());
  CHECK(sum / static_cast<double>(n) == doctest::Approx(overall_mean(grid)).epsilon(1e-9));

  auto icl = bucket_by_condition(fixture_grid("icl8_bleu.tsv"), spec);
  CHECK(round1(icl.at(Condition::UnseenBoth).mean) == doctest::Approx(14.6));

  auto all = all_pairs_partition(core_languages());
  auto mfti = fixture_grid("mfti_bleu.tsv");
  auto one = bucket_by_condition(mfti, all);
  REQUIRE(one.size() == 1);
  CHECK(one.begin()->first == Condition::SameDirection);
  CHECK(one.begin()->second.mean == doctest::Approx(overall_mean(mfti)).epsilon(1e-12));

  ScoreGrid sparse(mfti.langs());
  sparse.set(P("ru", "fr"), 3.0);
  CHECK(bucket_by_condition(sparse, spec).size() == 1);
}

TEST_CASE("report emission") {
  AnalysisBundle b;
  b.title = "demo";
  b.config_digest = "abc";
  b.grids.push_back({"icl", "bleu|order:4|tok:intl-13a|smooth:none|version:x", fixture_grid("icl8_bleu.tsv")});
  b.buckets.push_back({"icl", "mFTI-16", "sig", bucket_by_condition(b.grids[0].grid, mfti16())});
  b.correlations.push_back({"data", "icl", Side::FromX, 0.1 + 0.2, 12, "spearman"});
  std::vector<double> ns{16, 30, 60}, ys{1.5, 2.25, 3.0};
  b.fits.push_back({"same", ns, ys, loglinear_fit(ns, ys), "fit"});
  b.errors.push_back({"mFTI-16", "ru-fr", 1012, 0.01, 1.0 / 3, 0, 0.5, 0.75, "errs"});
  b.trend.push_back({"ru-fr", 30, 0.1, 0.2, 0.3, 0.4, 0.5});
  b.trend_signature = "errs";

  auto text = b.to_json();
  auto back = AnalysisBundle::from_json(text);
  CHECK(back.to_json() == text);
  CHECK(back.grids[0].grid == b.grids[0].grid);
  CHECK(back.correlations[0].rho == b.correlations[0].rho);
  CHECK(back.errors[0].ot == b.errors[0].ot);
  CHECK(back.fits[0].fit.slope == b.fits[0].fit.slope);
  CHECK(back.buckets[0].buckets.size() == b.buckets[0].buckets.size());

  auto md = b.to_markdown();
  CHECK(md.find("| ru-fr |") != std::string::npos);
  CHECK(md.find("bleu|order:4") != std::string::npos);
  auto files = b.to_tsv_files();
  CHECK(files.count("error_trend.tsv") == 1);
  CHECK(files["error_trend.tsv"].find("ru-fr\t30\t0.1\t") != std::string::npos);

  auto dir = std::filesystem::temp_directory_path() / "mtkit_report_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  auto first = emit_report(b, ReportFormat::Tsv, dir);
  std::vector<std::string> bytes;
  for (const auto& p : first) bytes.push_back(io::read_file(p));
  auto second = emit_report(b, ReportFormat::Tsv, dir);
  REQUIRE(second == first);
  for (std::size_t i = 0; i < first.size(); ++i) CHECK(io::read_file(second[i]) == bytes[i]);
  CHECK(emit_report(b, ReportFormat::Json, dir).size() == 1);
  CHECK(parse_report_format("md") == ReportFormat::Markdown);
  CHECK_THROWS_AS(parse_report_format("pdf"), InputError);
  CHECK_THROWS_AS(AnalysisBundle::from_json("{}"), InputError);
  std::filesystem::remove_all(dir);
}
