#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "mtkit/error.hpp"
#include "mtkit/version.hpp"
#include "output.hpp"

namespace mtkit::cli {

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Translation-instruction data preparation and evaluation toolkit.", "mtkit"};
  app.set_version_flag("--version", std::string(kToolkitId));
  app.require_subcommand(1);

  std::string config_path, out, format = "tsv";
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "Experiment config (JSON)")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "Seed for every sampling or shuffling step");
  auto* out_opt = app.add_option("--out", out, "Output directory (overrides output_dir in the config)");
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"tsv", "markdown", "md", "json"}));

  auto sub = [&](const char* name, const char* help) {
    auto* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };

  auto* prepare = sub("prepare", "Build the instruction training file and manifest from the config corpora");

  FilterOptions fo;
  auto* filter = sub("filter-quality", "Keep sentence pairs by alignment score");
  filter->add_option("--input", fo.input, "Scored corpus")->required()->check(CLI::ExistingFile);
  filter->add_option("--corpus-format", fo.corpus_format, "tsv-pair, tsv-scored or jsonl");
  filter->add_option("--pair", fo.pair, "Language pair (src-tgt), required for TSV input");
  filter->add_option("--min-score", fo.min_score, "Keep score >= value");
  filter->add_option("--top", fo.top, "Keep the k best");
  filter->add_option("--bottom", fo.bottom, "Keep the k worst");

  IclOptions io;
  auto* icl = sub("make-icl", "Render k-shot prompts for query sentences");
  icl->add_option("--pool", io.pool, "Demonstration corpus")->required()->check(CLI::ExistingFile);
  icl->add_option("--corpus-format", io.corpus_format, "tsv-pair, tsv-scored, jsonl or multiparallel");
  icl->add_option("--pair", io.pair, "Language pair (src-tgt)")->required();
  icl->add_option("--queries", io.queries, "One source sentence per line")->required()->check(CLI::ExistingFile);
  icl->add_option("--k", io.k, "Demonstrations per prompt");

  PartitionOptions po;
  auto* part = sub("partition", "Classify every direction under a partition spec");
  part->add_option("--spec", po.spec, "Partition JSON (defaults to the config's)")->check(CLI::ExistingFile);
  part->add_option("--scaling", po.scaling, "Scaling snapshot config")->check(CLI::ExistingFile);

  EvaluateOptions eo;
  auto add_eval = [&](CLI::App* s) {
    s->add_option("--results", eo.results, "Results JSONL")->required()->check(CLI::ExistingFile);
    s->add_option("--refs", eo.refs, "References JSONL {id, lang, text}")->check(CLI::ExistingFile);
    s->add_option("--labels", eo.labels, "External hypothesis language labels (id<TAB>lang)")->check(CLI::ExistingFile);
  };
  auto* evaluate = sub("evaluate", "BLEU grid and instruction-following error report");
  add_eval(evaluate);
  auto* detect = sub("detect-errors", "Instruction-following error report only");
  add_eval(detect);

  PivotOptions pv;
  auto* pivot = sub("pivot-gain", "BLEU change from pivoting through English");
  pivot->add_option("--direct", pv.direct, "Direct results JSONL")->check(CLI::ExistingFile);
  pivot->add_option("--leg1", pv.leg1, "X->pivot results JSONL")->check(CLI::ExistingFile);
  pivot->add_option("--leg2", pv.leg2, "pivot->Y results JSONL")->check(CLI::ExistingFile);
  pivot->add_option("--direct-grid", pv.direct_grid, "Precomputed direct grid TSV")->check(CLI::ExistingFile);
  pivot->add_option("--pivot-grid", pv.pivot_grid, "Precomputed pivot grid TSV")->check(CLI::ExistingFile);
  pivot->add_option("--pivot", pv.pivot, "Pivot language");

  AnalyzeOptions co, so, ro;
  auto* correlate = sub("correlate", "Spearman correlation of per-language BLEU with factors");
  correlate->add_option("--grid", co.grids, "name=grid.tsv")->required();
  correlate->add_option("--factor", co.factors, "name=factor.tsv");
  correlate->add_option("--features", co.features, "Typological feature table")->check(CLI::ExistingFile);
  correlate->add_option("--side", co.sides, "to_x and/or from_x");

  auto* scaling = sub("scaling-fit", "Log-linear fit of score against number of pairs");
  scaling->add_option("--points", so.points, "TSV: series, n, score")->required()->check(CLI::ExistingFile);

  auto* report = sub("report", "Assemble grids, condition buckets, correlations, fits and error tables");
  report->add_option("--title", ro.title, "Report title");
  report->add_option("--from", ro.from, "Existing report.json to extend")->check(CLI::ExistingFile);
  report->add_option("--grid", ro.grids, "name=grid.tsv");
  report->add_option("--partition", ro.partition, "Partition JSON for condition buckets")->check(CLI::ExistingFile);
  report->add_option("--factor", ro.factors, "name=factor.tsv");
  report->add_option("--features", ro.features, "Typological feature table")->check(CLI::ExistingFile);
  report->add_option("--side", ro.sides, "to_x and/or from_x");
  report->add_option("--points", ro.points, "TSV: series, n, score")->check(CLI::ExistingFile);
  report->add_option("--errors", ro.errors, "label=errors.tsv");
  report->add_option("--trend", ro.trend, "TSV: series, n_language_pairs, sc, ot, ou, oh, any")->check(CLI::ExistingFile);

  LangIdOptions lo;
  auto* langid = sub("train-langid", "Train the character n-gram language identifier");
  langid->add_option("--train-dir", lo.train_dir, "Directory of <lang>.txt files")->check(CLI::ExistingDirectory);
  langid->add_option("--heldout-dir", lo.heldout_dir, "Held-out <lang>.txt files to score")->check(CLI::ExistingDirectory);

  for (int i = 1; i < argc; ++i) {
    std::string_view a = argv[i];
    if (a == "--config" || a == "--seed" || a == "--out" || a == "--format") {
      ++i;
      continue;
    }
    if (a.empty() || a.front() == '-') continue;
    try {
      app.get_subcommand(std::string(a));
    } catch (const CLI::OptionNotFound&) {
      std::cerr << "mtkit: unknown subcommand '" << a << "'\n\n" << app.help();
      return 2;
    }
    break;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "mtkit: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  Globals g;
  std::string command = app.get_subcommands().front()->get_name();
  try {
    g.config = config_path.empty() ? default_config() : load_config(config_path);
    if (seed_opt->count()) g.seed = seed;
    if (out_opt->count()) g.out = out;
    g.format = format;

    if (app.got_subcommand(prepare)) cmd_prepare(g);
    if (app.got_subcommand(filter)) cmd_filter_quality(g, fo);
    if (app.got_subcommand(icl)) cmd_make_icl(g, io);
    if (app.got_subcommand(part)) cmd_partition(g, po);
    if (app.got_subcommand(evaluate)) cmd_evaluate(g, eo, true);
    if (app.got_subcommand(detect)) cmd_evaluate(g, eo, false);
    if (app.got_subcommand(pivot)) cmd_pivot_gain(g, pv);
    if (app.got_subcommand(correlate)) cmd_analyze(g, co, "correlate");
    if (app.got_subcommand(scaling)) cmd_analyze(g, so, "scaling-fit");
    if (app.got_subcommand(report)) cmd_analyze(g, ro, "report");
    if (app.got_subcommand(langid)) cmd_train_langid(g, lo);
  } catch (const std::exception& e) {
    std::cerr << "mtkit " << command << ": error: " << e.what() << "\n";
    std::filesystem::path dir = !out.empty() ? std::filesystem::path(out)
                                : g.config.output_dir ? *g.config.output_dir
                                                      : std::filesystem::path();
    if (!dir.empty()) OutputDir::mark_failed(dir, std::string(e.what()) + "\n");
    return 1;
  }
  return 0;
}

}  // namespace mtkit::cli
