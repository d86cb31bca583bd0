#pragma once

// Scoring of a summary (gold or generated) against an example's sources.
// Corpus analysis and generated-summary evaluation share these functions, so
// evaluating the gold summaries reproduces the corpus numbers.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mira/config.hpp"
#include "mira/corpus.hpp"
#include "mira/embedding.hpp"
#include "mira/error.hpp"
#include "mira/fact_metrics.hpp"
#include "mira/facts.hpp"
#include "mira/jsonl.hpp"
#include "mira/ngram_metrics.hpp"
#include "mira/parallel.hpp"
#include "mira/report.hpp"

namespace mira {

// Runs fn, prefixing any toolkit error with the example id. The exit code is kept.
template <typename Fn>
auto in_example(const std::string& id, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error("example " + id + ": " + e.what(), e.code());
  }
}

struct FactScore {
  FactWeightReport report;
  EmbeddedFacts summary;
  EmbeddedFacts main;
  EmbeddedFacts assisting;
};

inline FactScore score_facts(const Example& ex, std::span<const Sentence> summary, std::string_view summary_doc,
                             const FactExtractor& extractor, const EmbeddingProvider& provider) {
  FactScore s;
  s.summary = embed_facts(extractor.extract(summary_doc, summary), provider);
  s.main = embed_facts(extractor.extract(ex.main.doc_id, ex.main.sentences), provider);
  std::vector<Fact> assisting;
  for (const auto& a : ex.assisting) {
    auto fa = extractor.extract(a.doc_id, a.sentences);
    assisting.insert(assisting.end(), fa.begin(), fa.end());
  }
  s.assisting = embed_facts(std::move(assisting), provider);
  s.report = fact_weight_report(s.summary, s.main, s.assisting);
  return s;
}

struct FlaggedFact {
  std::string example_id;
  Fact fact;
  FactWeights weights;
  Fact evidence;
};

inline Json flagged_to_json(const FlaggedFact& f) {
  return Json{{"id", f.example_id},
              {"fact", fact_to_json(f.fact)},
              {"w_fc", f.weights.w_fc},
              {"w_fa", f.weights.w_fa},
              {"w_fda", f.weights.w_fda},
              {"evidence", fact_to_json(f.evidence)}};
}

struct GeneratedSummary {
  std::string id;
  std::string summary_text;
};

inline std::vector<GeneratedSummary> read_generated(const std::string& path) {
  std::vector<GeneratedSummary> out;
  std::set<std::string> seen;
  for_each_jsonl(path, [&](const Json& j, std::size_t line_no) {
    try {
      GeneratedSummary g{j.at("id").get<std::string>(), j.at("summary_text").get<std::string>()};
      if (!seen.insert(g.id).second)
        throw DataError(path + ":" + std::to_string(line_no) + ": duplicate id " + g.id);
      out.push_back(std::move(g));
    } catch (const Json::exception& e) {
      throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  });
  return out;
}

inline std::string generated_doc_id(std::string_view example_id) { return std::string(example_id) + "#generated"; }

struct EvaluationReport {
  ReportTable table;
  std::vector<FlaggedFact> flagged;
  Json metadata;
};

inline std::vector<std::string> evaluation_columns(const RunConfig& cfg) {
  std::vector<std::string> cols{"degenerate"};
  if (cfg.wants("coverage"))
    for (auto n : cfg.ngram_orders) cols.push_back("coverage_" + std::to_string(n));
  if (cfg.wants("support"))
    for (auto n : cfg.ngram_orders) cols.push_back("support_" + std::to_string(n));
  if (cfg.wants("sfweights"))
    for (const char* c : {"sf_d", "sf_a", "sf_da", "asst_rate", "n_facts", "n_flagged"}) cols.emplace_back(c);
  return cols;
}

// Each generated summary is scored against its example: n-gram coverage of
// the main and assisting documents, support from assisting documents, and
// fact weights. Summary facts with w_fda below tau are flagged with their
// best-matching source fact. An empty summary gives a degenerate row: coverage
// and support take their vacuous values and fact columns are 0.
inline EvaluationReport evaluate_generated(const std::vector<GeneratedSummary>& generated,
                                           const std::vector<Example>& corpus, const RunConfig& cfg,
                                           const EmbeddingProvider& provider, const FactExtractor& extractor) {
  cfg.validate();
  std::map<std::string, const Example*> by_id;
  for (const auto& ex : corpus) by_id.emplace(ex.id, &ex);
  std::vector<std::string> unknown;
  for (const auto& g : generated)
    if (!by_id.count(g.id)) unknown.push_back(g.id);
  if (!unknown.empty()) throw DataError("generated summaries for unknown example ids: " + join(unknown, ", "));
  if (generated.empty()) throw DataError("no generated summaries");

  struct Row {
    std::vector<Cell> cells;
    std::vector<FlaggedFact> flagged;
  };
  auto rows = parallel_map(
      generated,
      [&](const GeneratedSummary& g) {
        return in_example(g.id, [&] {
          const Example& ex = *by_id.at(g.id);
          const auto sentences = sentence_split(g.summary_text);
          const bool degenerate = sentences.empty();
          Row r;
          r.cells.emplace_back(degenerate ? 1.0 : 0.0);
          if (cfg.wants("coverage"))
            for (auto n : cfg.ngram_orders) {
              auto docs = source_documents(ex, SourceConfig::kDA);
              r.cells.emplace_back(ngram_coverage(sentences, pool_ngrams(docs, n)).value);
            }
          if (cfg.wants("support"))
            for (auto n : cfg.ngram_orders)
              r.cells.emplace_back(support_from_assisting(sentences, ex.main, ex.assisting, n).value);
          if (cfg.wants("sfweights")) {
            if (degenerate) {
              for (int i = 0; i < 6; ++i) r.cells.emplace_back(0.0);
            } else {
              const auto doc = generated_doc_id(g.id);
              auto s = score_facts(ex, sentences, doc, extractor, provider);
              for (std::size_t j = 0; j < s.report.per_fact.size(); ++j) {
                const auto& w = s.report.per_fact[j];
                if (w.w_fda >= cfg.tau) continue;
                const auto& src = w.best_in_assisting ? s.assisting : s.main;
                r.flagged.push_back({g.id, s.summary.facts[j], w, src.facts[w.best_index]});
              }
              r.cells.emplace_back(s.report.sf_weights_d);
              r.cells.emplace_back(s.report.sf_weights_a);
              r.cells.emplace_back(s.report.sf_weights_da);
              r.cells.emplace_back(s.report.asst_rate_fact);
              r.cells.emplace_back(static_cast<double>(s.summary.size()));
              r.cells.emplace_back(static_cast<double>(r.flagged.size()));
            }
          }
          return r;
        });
      },
      cfg.workers);

  EvaluationReport out;
  out.table.columns = evaluation_columns(cfg);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.table.add_row(generated[i].id, std::move(rows[i].cells));
    for (auto& f : rows[i].flagged) out.flagged.push_back(std::move(f));
  }
  out.metadata = report_metadata(cfg, &provider);
  out.metadata["tau"] = cfg.tau;
  return out;
}

}  // namespace mira
