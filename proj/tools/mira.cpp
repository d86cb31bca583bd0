// mira: corpus construction, metrics, selection and evaluation.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mira/mira.hpp"

namespace {

struct Common {
  std::string config_path;
  std::string corpus;
  std::string provider;
  std::string endpoint;
  std::string facts;
  std::string out_dir;
  std::string ngram_orders;
  int workers = 0;
  double tau = -1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config-file", c.config_path, "JSON run configuration");
  cmd->add_option("--corpus", c.corpus, "Corpus JSONL (comma-separated for several)");
  cmd->add_option("--workers", c.workers, "Worker threads (default: logical cores)");
  cmd->add_option("--out-dir", c.out_dir, "Directory for default output paths");
}

void add_provider(CLI::App* cmd, Common& c) {
  cmd->add_option("--provider", c.provider, "Embedding provider: builtin or remote");
  cmd->add_option("--endpoint", c.endpoint, "Sidecar base URL for the remote provider");
}

std::vector<std::size_t> parse_orders(const std::string& s) {
  std::vector<std::size_t> out;
  for (const auto& part : mira::split_string(s, ',')) {
    std::size_t pos = 0;
    long long v = -1;
    try {
      v = std::stoll(part, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != part.size() || v < 1) throw mira::ValidationError("bad n-gram order '" + part + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

mira::RunConfig resolve(const Common& c) {
  mira::RunConfig cfg = c.config_path.empty() ? mira::RunConfig{} : mira::load_config(c.config_path);
  mira::apply_env_overrides(cfg);
  if (!c.corpus.empty()) cfg.corpus = c.corpus;
  if (!c.provider.empty()) cfg.provider.kind = c.provider;
  if (!c.endpoint.empty()) cfg.provider.remote.endpoint = c.endpoint;
  if (!c.facts.empty()) cfg.facts = c.facts;
  if (!c.out_dir.empty()) cfg.out_dir = c.out_dir;
  if (!c.ngram_orders.empty()) cfg.ngram_orders = parse_orders(c.ngram_orders);
  if (c.workers != 0) {
    if (c.workers < 0) throw mira::ValidationError("workers must be >= 1");
    cfg.workers = static_cast<std::size_t>(c.workers);
  }
  if (c.tau >= 0) cfg.tau = c.tau;
  cfg.validate();
  return cfg;
}

std::string out_path(const std::string& given, const mira::RunConfig& cfg, const std::string& name) {
  if (!given.empty()) return given;
  std::filesystem::create_directories(cfg.out_dir);
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-document assisted summarization corpus toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", mira::kToolkitVersion);

  Common c;
  std::string out;

  // build
  mira::BuildOptions build;
  std::string ratios = "0.8,0.1,0.1";
  auto* cmd_build = app.add_subcommand("build", "Build train/valid/test JSONL from fetched pages");
  cmd_build->add_option("--manifest", build.manifest, "url<TAB>html_path<TAB>hub_flag<TAB>cited_urls")->required();
  cmd_build->add_option("--out", build.out_dir, "Output directory")->required();
  cmd_build->add_option("--seed", build.seed, "Split seed");
  cmd_build->add_option("--ratios", ratios, "train,valid,test ratios");
  cmd_build->add_option("--workers", c.workers, "Worker threads");

  auto* cmd_stats = app.add_subcommand("stats", "Corpus statistics");
  add_common(cmd_stats, c);
  cmd_stats->add_option("--out", out, "Output JSON (default stats.json)");

  std::string source = "s-d";
  auto* cmd_novelty = app.add_subcommand("novelty", "Novel n-gram percentages");
  add_common(cmd_novelty, c);
  cmd_novelty->add_option("--config", source, "s-d, s-a or s-da");
  cmd_novelty->add_option("--n", c.ngram_orders, "Comma-separated n-gram orders");
  cmd_novelty->add_option("--out", out, "Output TSV (default novelty_<config>.tsv)");

  std::string method;
  std::size_t k = 3;
  bool debug = false;
  auto* cmd_extractive = app.add_subcommand("extractive", "LEAD and extractive-oracle ROUGE");
  add_common(cmd_extractive, c);
  cmd_extractive->add_option("--method", method, "lead or oracle")->required();
  cmd_extractive->add_option("--config", source, "s-d, s-a or s-da");
  cmd_extractive->add_option("--k", k, "Sentences to select");
  cmd_extractive->add_flag("--debug", debug, "Report the gap to the exhaustive optimum");
  cmd_extractive->add_option("--out", out, "Output TSV (default extractive_<method>_<config>.tsv)");

  auto* cmd_facts = app.add_subcommand("factmetrics", "SFweights and AsstRate");
  add_common(cmd_facts, c);
  add_provider(cmd_facts, c);
  cmd_facts->add_option("--facts", c.facts, "builtin, remote, or a facts JSONL file");
  cmd_facts->add_option("--out", out, "Output JSON (default factmetrics.json); per-example TSV beside it");

  std::string bands = "paper-defaults";
  std::size_t sel_k = 1;
  auto* cmd_select = app.add_subcommand("select", "Select assisting content");
  add_common(cmd_select, c);
  add_provider(cmd_select, c);
  cmd_select->add_option("--method", method, "pipeline or gold")->required();
  cmd_select->add_option("--bands", bands, "bands.json or paper-defaults");
  cmd_select->add_option("--k", sel_k, "Gold sentences per summary sentence");
  cmd_select->add_option("--out", out, "Output JSONL (default selections.jsonl)");

  auto* cmd_calibrate = app.add_subcommand("calibrate", "Calibrate selection bands on gold selections");
  add_common(cmd_calibrate, c);
  add_provider(cmd_calibrate, c);
  cmd_calibrate->add_option("--k", sel_k, "Gold sentences per summary sentence");
  cmd_calibrate->add_option("--out", out, "Output bands JSON (default bands.json)");

  mira::AssembleOptions asm_opt;
  std::string mode = "s";
  auto* cmd_assemble = app.add_subcommand("assemble", "Assemble model inputs under a token capacity");
  add_common(cmd_assemble, c);
  add_provider(cmd_assemble, c);
  cmd_assemble->add_option("--mode", mode, "s, c, p or g");
  cmd_assemble->add_option("--capacity", asm_opt.capacity, "Token capacity");
  cmd_assemble->add_option("--selections", asm_opt.selections, "Selections JSONL (p and g modes)");
  cmd_assemble->add_option("--bands", asm_opt.bands, "bands.json or paper-defaults (p mode without selections)");
  cmd_assemble->add_option("--k", asm_opt.k, "Gold sentences per summary sentence (g mode without selections)");
  cmd_assemble->add_option("--out", out, "Output JSONL (default inputs.jsonl)");

  std::string generated;
  auto* cmd_evaluate = app.add_subcommand("evaluate", "Score generated summaries");
  add_common(cmd_evaluate, c);
  add_provider(cmd_evaluate, c);
  cmd_evaluate->add_option("--generated", generated, "JSONL of {id, summary_text}")->required();
  cmd_evaluate->add_option("--facts", c.facts, "builtin, remote, or a facts JSONL file");
  cmd_evaluate->add_option("--n", c.ngram_orders, "Comma-separated n-gram orders");
  cmd_evaluate->add_option("--tau", c.tau, "Flag summary facts with w_fda below this");
  cmd_evaluate->add_option("--out", out, "Output TSV (default evaluation.tsv)");

  std::vector<std::string> inputs;
  auto* cmd_report = app.add_subcommand("report", "Merge prior outputs");
  cmd_report->add_option("inputs", inputs, "TSV and JSON reports")->required();
  cmd_report->add_option("--out", out, "Merged JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(mira::ExitCode::kValidation);
  }

  try {
    if (*cmd_build) {
      build.ratios = mira::parse_ratios(ratios);
      build.workers = c.workers > 0 ? static_cast<std::size_t>(c.workers) : mira::default_workers();
      auto summary = mira::run_build(build);
      std::cout << summary.dump() << '\n';
    } else if (*cmd_stats) {
      auto cfg = resolve(c);
      auto j = mira::run_stats(cfg, out_path(out, cfg, "stats.json"));
      std::cout << j.at("stats").dump(2) << '\n';
    } else if (*cmd_novelty) {
      auto cfg = resolve(c);
      auto sc = mira::parse_source_config(source);
      auto t = mira::run_novelty(cfg, sc, out_path(out, cfg, "novelty_" + source + ".tsv"));
      std::cout << t.aggregate_json().dump() << '\n';
    } else if (*cmd_extractive) {
      auto cfg = resolve(c);
      auto m = mira::parse_extractive_method(method);
      auto sc = mira::parse_source_config(source);
      auto t = mira::run_extractive(cfg, m, sc, k, debug,
                                    out_path(out, cfg, "extractive_" + method + "_" + source + ".tsv"));
      std::cout << t.aggregate_json().dump() << '\n';
    } else if (*cmd_facts) {
      auto cfg = resolve(c);
      auto j = mira::run_factmetrics(cfg, out_path(out, cfg, "factmetrics.json"));
      std::cout << j.at("aggregate").dump() << '\n';
    } else if (*cmd_select) {
      auto cfg = resolve(c);
      mira::SelectionMethod m;
      if (method == "pipeline") {
        m = mira::SelectionMethod::kPipeline;
      } else if (method == "gold") {
        m = mira::SelectionMethod::kGold;
      } else {
        throw mira::ValidationError("unknown selection method '" + method + "' (expected pipeline or gold)");
      }
      auto sels = mira::run_select(cfg, m, bands, sel_k, out_path(out, cfg, "selections.jsonl"));
      std::size_t total = 0;
      for (const auto& s : sels) total += s.selected.size();
      std::cout << "selected " << total << " sentences over " << sels.size() << " examples\n";
    } else if (*cmd_calibrate) {
      auto cfg = resolve(c);
      auto b = mira::run_calibrate(cfg, sel_k, out_path(out, cfg, "bands.json"));
      std::cout << mira::bands_to_json(b).dump() << '\n';
    } else if (*cmd_assemble) {
      auto cfg = resolve(c);
      asm_opt.mode = mira::parse_assembly_mode(mode);
      auto inputs_out = mira::run_assemble(cfg, asm_opt, out_path(out, cfg, "inputs.jsonl"));
      std::cout << "assembled " << inputs_out.size() << " inputs\n";
    } else if (*cmd_evaluate) {
      auto cfg = resolve(c);
      auto r = mira::run_evaluate(cfg, generated, out_path(out, cfg, "evaluation.tsv"));
      std::cout << r.table.aggregate_json().dump() << '\n';
    } else if (*cmd_report) {
      mira::run_report(inputs, out, std::cout);
    }
  } catch (const mira::Error& e) {
    std::cerr << "mira: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "mira: " << e.what() << '\n';
    return static_cast<int>(mira::ExitCode::kData);
  }
  return 0;
}
