#pragma once

// Fact-level grounding metrics.
//
// A summary fact's weight against a set of source facts is its maximum cosine
// similarity to any of them. SFweights is the mean weight over summary facts.
// AsstRate is the share of summary facts whose weight against the assisting
// documents is STRICTLY greater than against the main document; with no
// assisting facts every assisting weight is taken as -1.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mira/corpus.hpp"
#include "mira/embedding.hpp"
#include "mira/error.hpp"
#include "mira/facts.hpp"

namespace mira {

struct EmbeddedFacts {
  std::vector<Fact> facts;
  std::vector<EmbeddingVector> vectors;

  std::size_t size() const { return facts.size(); }
  bool empty() const { return facts.empty(); }

  void append(const EmbeddedFacts& other) {
    facts.insert(facts.end(), other.facts.begin(), other.facts.end());
    vectors.insert(vectors.end(), other.vectors.begin(), other.vectors.end());
  }
};

inline EmbeddedFacts embed_facts(std::vector<Fact> facts, const EmbeddingProvider& provider) {
  std::vector<std::string> texts;
  texts.reserve(facts.size());
  for (const auto& f : facts) texts.push_back(f.flat_text);
  EmbeddedFacts out;
  out.vectors = provider.embed_batch(texts);
  out.facts = std::move(facts);
  return out;
}

struct WeightMatch {
  double weight = -1;
  std::size_t best = 0;  // index of the best-matching source fact
};

// Max cosine of one summary vector over the source vectors.
inline WeightMatch max_similarity(const EmbeddingVector& summary_vec, std::span<const EmbeddingVector> source) {
  if (source.empty()) throw DataError("no source facts");
  WeightMatch m{cosine(summary_vec, source[0]), 0};
  for (std::size_t i = 1; i < source.size(); ++i) {
    const double c = cosine(summary_vec, source[i]);
    if (c > m.weight) m = {c, i};
  }
  return m;
}

inline double fact_weight(const Fact& summary_fact, const std::vector<Fact>& doc_facts,
                          const EmbeddingProvider& provider) {
  if (doc_facts.empty()) throw DataError("no source facts");
  auto s = provider.embed(summary_fact.flat_text);
  auto d = embed_facts(doc_facts, provider);
  return max_similarity(s, d.vectors).weight;
}

inline double sf_weights(const EmbeddedFacts& summary, const EmbeddedFacts& source) {
  if (summary.empty()) throw DataError("no summary facts");
  if (source.empty()) throw DataError("no source facts");
  double total = 0;
  for (const auto& v : summary.vectors) total += max_similarity(v, source.vectors).weight;
  return total / static_cast<double>(summary.size());
}

inline double sf_weights(const std::vector<Fact>& summary_facts, const std::vector<Fact>& source_facts,
                         const EmbeddingProvider& provider) {
  if (summary_facts.empty()) throw DataError("no summary facts");
  if (source_facts.empty()) throw DataError("no source facts");
  return sf_weights(embed_facts(summary_facts, provider), embed_facts(source_facts, provider));
}

struct FactWeights {
  double w_fc = 0;   // vs main document
  double w_fa = -1;  // vs assisting documents
  double w_fda = 0;  // vs both: max(w_fc, w_fa)
  // Best-matching source fact across main and assisting (evidence): index
  // into the main facts, or into the assisting facts when best_in_assisting.
  std::size_t best_index = 0;
  bool best_in_assisting = false;
};

struct FactWeightReport {
  std::vector<FactWeights> per_fact;
  double sf_weights_d = 0;
  double sf_weights_a = -1;
  double sf_weights_da = 0;
  double asst_rate_fact = 0;
};

// Cosines closer than this count as equal, so rounding differences (e.g.
// after rescaling vectors) cannot flip the assisting-vs-main comparison.
inline constexpr double kWeightTie = 1e-12;

// main must be nonempty; assisting may be empty.
inline FactWeightReport fact_weight_report(const EmbeddedFacts& summary, const EmbeddedFacts& main,
                                           const EmbeddedFacts& assisting) {
  if (summary.empty()) throw DataError("no summary facts");
  if (main.empty()) throw DataError("no source facts in main document");
  FactWeightReport r;
  double sum_d = 0, sum_a = 0, sum_da = 0;
  std::size_t better = 0;
  for (const auto& v : summary.vectors) {
    FactWeights w;
    auto md = max_similarity(v, main.vectors);
    w.w_fc = md.weight;
    w.best_index = md.best;
    if (!assisting.empty()) {
      auto ma = max_similarity(v, assisting.vectors);
      w.w_fa = ma.weight;
      if (ma.weight > md.weight + kWeightTie) {
        w.best_index = ma.best;
        w.best_in_assisting = true;
      }
    }
    w.w_fda = std::max(w.w_fc, w.w_fa);
    if (w.w_fa > w.w_fc + kWeightTie) ++better;
    sum_d += w.w_fc;
    sum_a += w.w_fa;
    sum_da += w.w_fda;
    r.per_fact.push_back(w);
  }
  const auto j = static_cast<double>(summary.size());
  r.sf_weights_d = sum_d / j;
  r.sf_weights_a = sum_a / j;
  r.sf_weights_da = sum_da / j;
  r.asst_rate_fact = static_cast<double>(better) / j;
  return r;
}

inline double asst_rate_fact(const std::vector<Fact>& summary_facts, const std::vector<Fact>& main_facts,
                             const std::vector<Fact>& assisting_facts, const EmbeddingProvider& provider) {
  return fact_weight_report(embed_facts(summary_facts, provider), embed_facts(main_facts, provider),
                            embed_facts(assisting_facts, provider))
      .asst_rate_fact;
}

// Fraction of examples whose fact-level AsstRate is above 0.
inline double asst_rate_summary(std::span<const double> fact_level_rates) {
  if (fact_level_rates.empty()) throw DataError("no scored examples");
  const auto positive = std::count_if(fact_level_rates.begin(), fact_level_rates.end(), [](double r) { return r > 0; });
  return static_cast<double>(positive) / static_cast<double>(fact_level_rates.size());
}

// Facts of an example's summary, main document, and assisting documents.
struct ExampleFacts {
  std::vector<Fact> summary;
  std::vector<Fact> main;
  std::vector<Fact> assisting;
};

inline ExampleFacts extract_example_facts(const Example& ex, const FactExtractor& extractor) {
  ExampleFacts f;
  f.summary = extractor.extract(summary_doc_id(ex.id), ex.summary.sentences);
  f.main = extractor.extract(ex.main.doc_id, ex.main.sentences);
  for (const auto& a : ex.assisting) {
    auto fa = extractor.extract(a.doc_id, a.sentences);
    f.assisting.insert(f.assisting.end(), fa.begin(), fa.end());
  }
  return f;
}

}  // namespace mira
