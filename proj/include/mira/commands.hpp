#pragma once

// Command implementations behind the `mira` executable. Each command reads
// its inputs, fans per-example work out over cfg.workers threads, and writes
// its reports in input order.

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mira/assemble.hpp"
#include "mira/config.hpp"
#include "mira/corpus.hpp"
#include "mira/dataset.hpp"
#include "mira/evaluation.hpp"
#include "mira/extractive.hpp"
#include "mira/fact_metrics.hpp"
#include "mira/jsonl.hpp"
#include "mira/ngram_metrics.hpp"
#include "mira/parallel.hpp"
#include "mira/report.hpp"
#include "mira/selection.hpp"

namespace mira {

// Corpus paths may be comma separated; examples keep file order.
inline std::vector<Example> load_corpus(const std::string& paths) {
  if (paths.empty()) throw ValidationError("no corpus given");
  std::vector<Example> out;
  std::set<std::string> ids;
  for (const auto& p : split_string(paths, ',')) {
    if (p.empty()) continue;
    for (auto& ex : read_jsonl(p)) {
      if (!ids.insert(ex.id).second) throw DataError(p + ": duplicate example id " + ex.id);
      out.push_back(std::move(ex));
    }
  }
  if (out.empty()) throw DataError("empty corpus");
  return out;
}

inline std::string with_extension(const std::string& path, const std::string& ext) {
  return std::filesystem::path(path).replace_extension(ext).string();
}

// ---- build ----------------------------------------------------------------

struct BuildOptions {
  std::string manifest;
  std::string out_dir;
  std::uint64_t seed = 0;
  SplitRatios ratios;
  std::size_t workers = 1;
};

inline Json run_build(const BuildOptions& opt) {
  const auto entries = read_manifest(opt.manifest);
  std::vector<RawPage> pages;
  std::vector<bool> is_hub;
  BuildLog unreadable;
  std::set<std::string> urls;
  for (const auto& e : entries) {
    if (!urls.insert(e.url).second) throw DataError(opt.manifest + ": duplicate url " + e.url);
    RawPage p{e.url, {}, e.cited_urls};
    try {
      p.html = read_file(e.html_path);
    } catch (const DataError&) {
      unreadable.push_back({e.url, "cannot read " + e.html_path});
    }
    pages.push_back(std::move(p));
    is_hub.push_back(e.hub);
  }
  auto built = build_corpus(pages, is_hub, opt.ratios, opt.seed, opt.workers);
  if (auto leaked = audit_leakage(built.examples); !leaked.empty())
    throw DataError("split leakage detected for " + join(leaked, ", "));

  std::filesystem::create_directories(opt.out_dir);
  std::array<std::vector<Example>, 3> by_split;
  for (auto& ex : built.examples) by_split[static_cast<std::size_t>(ex.split)].push_back(ex);
  Json counts = Json::object();
  for (auto s : kAllSplits) {
    const auto& xs = by_split[static_cast<std::size_t>(s)];
    write_jsonl((std::filesystem::path(opt.out_dir) / (std::string(to_string(s)) + ".jsonl")).string(), xs);
    counts[std::string(to_string(s))] = xs.size();
  }
  auto log = open_output((std::filesystem::path(opt.out_dir) / "build.log").string());
  for (const auto& s : unreadable) log << s.url << '\t' << s.reason << '\n';
  for (const auto& s : built.log) log << s.url << '\t' << s.reason << '\n';
  return Json{{"pages", pages.size()},
              {"clusters", built.clusters.size()},
              {"examples", counts},
              {"skipped", built.log.size() + unreadable.size()}};
}

// ---- stats ----------------------------------------------------------------

inline Json stats_to_json(const CorpusStats& st) {
  Json counts = Json::object();
  for (auto s : kAllSplits) counts[std::string(to_string(s))] = st.example_counts[static_cast<std::size_t>(s)];
  return Json{{"example_counts", counts},
              {"avg_doc_words", st.avg_doc_words},
              {"avg_doc_sents", st.avg_doc_sents},
              {"avg_summ_words", st.avg_summ_words},
              {"avg_summ_sents", st.avg_summ_sents},
              {"vocab_size_document", st.vocab_size_document},
              {"vocab_size_summary", st.vocab_size_summary}};
}

inline Json run_stats(const RunConfig& cfg, const std::string& out) {
  cfg.validate();
  auto examples = load_corpus(cfg.corpus);
  Json j{{"metadata", report_metadata(cfg, nullptr)}, {"stats", stats_to_json(corpus_stats(examples))}};
  write_json(out, j);
  return j;
}

// ---- novelty --------------------------------------------------------------

inline ReportTable novelty_table(const std::vector<Example>& examples, SourceConfig config,
                                 const std::vector<std::size_t>& orders, std::size_t workers) {
  ReportTable t;
  for (auto n : orders) t.columns.push_back("novelty_" + std::to_string(n));
  t.columns.emplace_back("degenerate_orders");
  auto rows = parallel_map(
      examples,
      [&](const Example& ex) {
        return in_example(ex.id, [&] {
          std::vector<Cell> cells;
          std::vector<std::string> degenerate;
          auto docs = source_documents(ex, config);
          if (docs.empty()) throw DataError("no source documents for " + std::string(to_string(config)));
          for (auto n : orders) {
            auto p = ngram_novelty(ex.summary.sentences, pool_ngrams(docs, n));
            cells.emplace_back(p.value);
            if (p.degenerate) degenerate.push_back(std::to_string(n));
          }
          cells.emplace_back(degenerate.empty() ? std::string("-") : join(degenerate, ","));
          return cells;
        });
      },
      workers);
  for (std::size_t i = 0; i < rows.size(); ++i) t.add_row(examples[i].id, std::move(rows[i]));
  return t;
}

inline ReportTable run_novelty(const RunConfig& cfg, SourceConfig config, const std::string& out) {
  cfg.validate();
  auto examples = load_corpus(cfg.corpus);
  auto t = novelty_table(examples, config, cfg.ngram_orders, cfg.workers);
  auto meta = report_metadata(cfg, nullptr);
  meta["config"] = std::string(to_string(config));
  write_tsv(out, t, meta);
  return t;
}

// ---- extractive -----------------------------------------------------------

enum class ExtractiveMethod { kLead, kOracle };

inline ExtractiveMethod parse_extractive_method(std::string_view s) {
  if (s == "lead") return ExtractiveMethod::kLead;
  if (s == "oracle") return ExtractiveMethod::kOracle;
  throw ValidationError("unknown extractive method '" + std::string(s) + "' (expected lead or oracle)");
}

inline std::string refs_to_string(const std::vector<SentenceRef>& refs) {
  std::vector<std::string> parts;
  for (const auto& r : refs) parts.push_back(r.doc_id + ":" + std::to_string(r.sentence_index));
  return parts.empty() ? "-" : join(parts, ";");
}

inline ReportTable extractive_table(const std::vector<Example>& examples, ExtractiveMethod method, SourceConfig config,
                                    std::size_t k, bool debug, std::size_t workers) {
  if (k < 1) throw ValidationError("k must be >= 1");
  if (method == ExtractiveMethod::kLead && config == SourceConfig::kDA)
    throw ValidationError("LEAD is defined for s-d and s-a only");
  ReportTable t;
  t.columns = {"r1_p", "r1_r", "r1_f", "r2_p", "r2_r", "r2_f", "rl_p", "rl_r", "rl_f", "objective", "selected"};
  if (debug && method == ExtractiveMethod::kOracle) t.columns.emplace_back("greedy_gap");
  auto rows = parallel_map(
      examples,
      [&](const Example& ex) {
        return in_example(ex.id, [&] {
          RougeTriple score;
          std::vector<SentenceRef> selected;
          std::optional<double> gap;
          if (method == ExtractiveMethod::kLead) {
            auto r = lead(ex, config, k);
            score = r.score;
            selected = r.selected;
          } else {
            auto r = ext_oracle(ex, config, k, debug);
            score = r.score;
            selected = r.selected;
            gap = r.greedy_gap;
          }
          std::vector<Cell> cells;
          for (const auto* s : {&score.r1, &score.r2, &score.rl}) {
            cells.emplace_back(s->precision);
            cells.emplace_back(s->recall);
            cells.emplace_back(s->f1);
          }
          cells.emplace_back(score.mean_f1());
          cells.emplace_back(refs_to_string(selected));
          if (debug && method == ExtractiveMethod::kOracle) {
            if (gap) {
              cells.emplace_back(*gap);
            } else {
              cells.emplace_back(std::string("-"));
            }
          }
          return cells;
        });
      },
      workers);
  for (std::size_t i = 0; i < rows.size(); ++i) t.add_row(examples[i].id, std::move(rows[i]));
  return t;
}

inline ReportTable run_extractive(const RunConfig& cfg, ExtractiveMethod method, SourceConfig config, std::size_t k,
                                  bool debug, const std::string& out) {
  cfg.validate();
  auto examples = load_corpus(cfg.corpus);
  auto t = extractive_table(examples, method, config, k, debug, cfg.workers);
  auto meta = report_metadata(cfg, nullptr);
  meta["method"] = method == ExtractiveMethod::kLead ? "lead" : "oracle";
  meta["config"] = std::string(to_string(config));
  meta["k"] = k;
  write_tsv(out, t, meta);
  return t;
}

// ---- factmetrics ----------------------------------------------------------

inline ReportTable factmetrics_table(const std::vector<Example>& examples, const EmbeddingProvider& provider,
                                     const FactExtractor& extractor, std::size_t workers) {
  ReportTable t;
  t.columns = {"sf_d", "sf_a", "sf_da", "asst_rate", "n_facts"};
  auto rows = parallel_map(
      examples,
      [&](const Example& ex) {
        return in_example(ex.id, [&] {
          auto s = score_facts(ex, ex.summary.sentences, summary_doc_id(ex.id), extractor, provider);
          return std::vector<Cell>{s.report.sf_weights_d, s.report.sf_weights_a, s.report.sf_weights_da,
                                   s.report.asst_rate_fact, static_cast<double>(s.summary.size())};
        });
      },
      workers);
  for (std::size_t i = 0; i < rows.size(); ++i) t.add_row(examples[i].id, std::move(rows[i]));
  return t;
}

// Writes the per-example TSV next to `out` and the aggregate JSON to `out`.
inline Json run_factmetrics(const RunConfig& cfg, const std::string& out) {
  cfg.validate();
  auto examples = load_corpus(cfg.corpus);
  auto provider = make_provider(cfg);
  auto extractor = make_fact_extractor(cfg);
  auto t = factmetrics_table(examples, *provider, *extractor, cfg.workers);
  std::vector<double> rates;
  for (const auto& r : t.rows) rates.push_back(std::get<double>(r[3]));
  auto meta = report_metadata(cfg, provider.get());
  meta["fact_extractor"] = extractor->id();
  Json agg = t.aggregate_json();
  agg["asst_rate_summary"] = asst_rate_summary(rates);
  Json j{{"metadata", meta}, {"examples", t.rows.size()}, {"aggregate", agg}};
  write_tsv(with_extension(out, ".tsv"), t, meta);
  write_json(out, j);
  return j;
}

// ---- select / calibrate ---------------------------------------------------

inline ThresholdBands load_bands(const std::string& source) {
  if (source.empty() || source == "paper-defaults") return ThresholdBands::preset();
  std::ifstream in(source);
  if (!in) throw ValidationError("cannot open bands file " + source);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError("bands file " + source + " is not valid JSON: " + e.what());
  }
  auto b = bands_from_json(j);
  b.validate();
  return b;
}

inline std::vector<SelectionResult> select_all(const std::vector<Example>& examples, SelectionMethod method,
                                               const ThresholdBands& bands, std::size_t k,
                                               const EmbeddingProvider* provider, std::size_t workers) {
  if (method == SelectionMethod::kPipeline && !provider) throw ValidationError("pipeline selection needs a provider");
  return parallel_map(
      examples,
      [&](const Example& ex) {
        return in_example(ex.id, [&] {
          return method == SelectionMethod::kPipeline ? weak_select(ex, bands, *provider) : gold_select(ex, k);
        });
      },
      workers);
}

inline void write_selections(const std::string& path, const std::vector<SelectionResult>& sels) {
  auto out = open_output(path);
  for (const auto& s : sels) out << selection_to_json(s).dump() << '\n';
}

inline std::vector<SelectionResult> run_select(const RunConfig& cfg, SelectionMethod method,
                                               const std::string& bands_spec, std::size_t k, const std::string& out) {
  cfg.validate();
  if (k < 1) throw ValidationError("k must be >= 1");
  auto bands = load_bands(bands_spec);
  auto examples = load_corpus(cfg.corpus);
  std::unique_ptr<EmbeddingProvider> provider;
  if (method == SelectionMethod::kPipeline) provider = make_provider(cfg);
  auto sels = select_all(examples, method, bands, k, provider.get(), cfg.workers);
  write_selections(out, sels);
  return sels;
}

inline ThresholdBands run_calibrate(const RunConfig& cfg, std::size_t k, const std::string& out) {
  cfg.validate();
  auto examples = load_corpus(cfg.corpus);
  auto provider = make_provider(cfg);
  auto sels = select_all(examples, SelectionMethod::kGold, {}, k, nullptr, cfg.workers);
  std::vector<GoldSelection> golds(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) golds[i] = {&examples[i], std::move(sels[i])};
  // Statistics are collected in parallel, then reduced in input order.
  auto per_example = parallel_map(
      golds,
      [&](const GoldSelection& g) {
        return in_example(g.example->id,
                          [&] { return gold_profiles(std::span<const GoldSelection>(&g, 1), *provider); });
      },
      cfg.workers);
  std::vector<RelevanceProfile> profiles;
  for (auto& p : per_example) profiles.insert(profiles.end(), p.begin(), p.end());
  auto bands = bands_from_profiles(profiles);
  write_json(out, bands_to_json(bands));
  return bands;
}

// ---- assemble -------------------------------------------------------------

struct AssembleOptions {
  AssemblyMode mode = AssemblyMode::kS;
  std::size_t capacity = 1024;
  std::string selections;  // JSONL from `select`; computed on the fly when empty
  std::string bands = "paper-defaults";
  std::size_t k = 1;
};

inline std::vector<AssembledInput> run_assemble(const RunConfig& cfg, const AssembleOptions& opt,
                                                const std::string& out) {
  cfg.validate();
  if (opt.capacity < 2) throw ValidationError("capacity must be >= 2");
  auto examples = load_corpus(cfg.corpus);
  std::vector<std::optional<SelectionResult>> sels(examples.size());
  if (opt.mode == AssemblyMode::kP || opt.mode == AssemblyMode::kG) {
    if (!opt.selections.empty()) {
      auto table = read_selections(opt.selections);
      for (std::size_t i = 0; i < examples.size(); ++i) {
        auto it = table.find(examples[i].id);
        if (it == table.end()) throw DataError("no selection for example " + examples[i].id);
        sels[i] = it->second;
      }
    } else {
      const auto method = opt.mode == AssemblyMode::kP ? SelectionMethod::kPipeline : SelectionMethod::kGold;
      std::unique_ptr<EmbeddingProvider> provider;
      if (method == SelectionMethod::kPipeline) provider = make_provider(cfg);
      auto computed = select_all(examples, method, load_bands(opt.bands), opt.k, provider.get(), cfg.workers);
      for (std::size_t i = 0; i < examples.size(); ++i) sels[i] = std::move(computed[i]);
    }
  }
  std::vector<std::size_t> idx(examples.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  auto inputs = parallel_map(
      idx,
      [&](std::size_t i) {
        return in_example(examples[i].id, [&] {
          return assemble_input(examples[i], opt.mode, opt.capacity, sels[i] ? &*sels[i] : nullptr);
        });
      },
      cfg.workers);
  auto o = open_output(out);
  for (const auto& in : inputs) o << assembled_to_json(in).dump() << '\n';
  return inputs;
}

// ---- evaluate -------------------------------------------------------------

// Writes the per-example TSV to `out`, the aggregate JSON and the flagged
// facts JSONL next to it.
inline EvaluationReport run_evaluate(const RunConfig& cfg, const std::string& generated_path, const std::string& out) {
  cfg.validate();
  auto examples = load_corpus(cfg.corpus);
  auto generated = read_generated(generated_path);
  auto provider = make_provider(cfg);
  auto extractor = make_fact_extractor(cfg);
  auto report = evaluate_generated(generated, examples, cfg, *provider, *extractor);
  report.metadata["fact_extractor"] = extractor->id();
  write_tsv(out, report.table, report.metadata);
  write_json(with_extension(out, ".json"),
             Json{{"metadata", report.metadata},
                  {"examples", report.table.rows.size()},
                  {"flagged_facts", report.flagged.size()},
                  {"aggregate", report.table.aggregate_json()}});
  auto flagged = open_output(with_extension(out, ".flagged.jsonl"));
  for (const auto& f : report.flagged) flagged << flagged_to_json(f).dump() << '\n';
  return report;
}

// ---- report ---------------------------------------------------------------

// Merges prior outputs: JSON files verbatim, TSV tables by their aggregate
// row. Prints one line per numeric aggregate to `table`.
inline Json run_report(const std::vector<std::string>& inputs, const std::string& out, std::ostream& table) {
  if (inputs.empty()) throw ValidationError("report needs at least one input");
  Json merged = Json::object();
  for (const auto& path : inputs) {
    const auto ext = std::filesystem::path(path).extension().string();
    const auto name = std::filesystem::path(path).filename().string();
    if (merged.contains(name)) throw ValidationError("report inputs share the file name " + name);
    if (ext == ".tsv") {
      merged[name] = read_tsv_aggregate(path);
    } else if (ext == ".json") {
      std::ifstream in(path);
      if (!in) throw DataError("cannot open " + path);
      try {
        merged[name] = Json::parse(in);
      } catch (const Json::parse_error& e) {
        throw DataError(path + " is not valid JSON: " + e.what());
      }
    } else {
      throw ValidationError("report inputs must be .tsv or .json: " + path);
    }
  }
  Json j{{"toolkit_version", kToolkitVersion}, {"inputs", merged}};
  if (!out.empty()) write_json(out, j);

  std::size_t width = 0;
  std::vector<std::pair<std::string, std::string>> lines;
  for (const auto& [name, content] : merged.items()) {
    const Json* agg = nullptr;
    if (content.contains("aggregate")) agg = &content.at("aggregate");
    else if (content.contains("stats")) agg = &content.at("stats");
    else agg = &content;
    for (const auto& [k, v] : agg->items()) {
      if (!v.is_number()) continue;
      lines.emplace_back(name + "  " + k, v.is_number_float() ? format_number(v.get<double>()) : v.dump());
      width = std::max(width, lines.back().first.size());
    }
  }
  for (const auto& [label, value] : lines) table << label << std::string(width - label.size() + 2, ' ') << value << '\n';
  return j;
}

}  // namespace mira
