#pragma once

// LEAD baseline and greedy extractive oracle.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mira/corpus.hpp"
#include "mira/error.hpp"
#include "mira/ngram_metrics.hpp"
#include "mira/rouge.hpp"

namespace mira {

struct SentenceRef {
  std::string doc_id;
  std::size_t sentence_index = 0;

  friend bool operator==(const SentenceRef&, const SentenceRef&) = default;
};

inline std::vector<std::string> flatten_tokens(std::span<const Sentence> sentences) {
  std::vector<std::string> out;
  for (const auto& s : sentences) out.insert(out.end(), s.tokens.begin(), s.tokens.end());
  return out;
}

struct LeadResult {
  std::vector<SentenceRef> selected;
  RougeTriple score;              // for s-a, the mean over assisting documents
  std::vector<RougeTriple> per_document;
};

namespace extractive_detail {

inline RougeScore mean(const std::vector<RougeScore>& xs) {
  RougeScore m;
  for (const auto& x : xs) {
    m.precision += x.precision;
    m.recall += x.recall;
    m.f1 += x.f1;
  }
  const auto n = static_cast<double>(xs.size());
  m.precision /= n;
  m.recall /= n;
  m.f1 /= n;
  return m;
}

}  // namespace extractive_detail

// First k sentences of the main document (s-d), or of each assisting document
// scored separately and averaged (s-a). Documents shorter than k contribute
// all their sentences.
inline LeadResult lead(const Example& ex, SourceConfig config, std::size_t k = 3) {
  if (config == SourceConfig::kDA) throw ValidationError("LEAD is defined for s-d and s-a only");
  const auto reference = flatten_tokens(ex.summary.sentences);
  LeadResult out;
  std::vector<const Document*> docs = source_documents(ex, config);
  if (docs.empty()) throw DataError("example " + ex.id + ": no documents for LEAD");
  for (const auto* d : docs) {
    const auto take = std::min(k, d->sentences.size());
    std::vector<std::string> cand;
    for (std::size_t i = 0; i < take; ++i) {
      out.selected.push_back({d->doc_id, i});
      cand.insert(cand.end(), d->sentences[i].tokens.begin(), d->sentences[i].tokens.end());
    }
    out.per_document.push_back(rouge_all(cand, reference));
  }
  std::vector<RougeScore> r1, r2, rl;
  for (const auto& t : out.per_document) {
    r1.push_back(t.r1);
    r2.push_back(t.r2);
    rl.push_back(t.rl);
  }
  out.score = {extractive_detail::mean(r1), extractive_detail::mean(r2), extractive_detail::mean(rl)};
  return out;
}

struct OracleResult {
  std::vector<SentenceRef> selected;  // in the order greedy picked them
  RougeTriple score;
  std::vector<double> objective_trace;  // objective after each pick
  std::optional<double> greedy_gap;     // exhaustive optimum - greedy, debug mode only
};

struct PoolSentence {
  SentenceRef ref;
  const std::vector<std::string>* tokens;
};

inline std::vector<PoolSentence> sentence_pool(const Example& ex, SourceConfig config) {
  std::vector<PoolSentence> pool;
  for (const auto* d : source_documents(ex, config))
    for (const auto& s : d->sentences) pool.push_back({{d->doc_id, s.index}, &s.tokens});
  return pool;
}

namespace extractive_detail {

// Candidate text for a selection: chosen pool sentences in pool order.
inline std::vector<std::string> candidate_text(const std::vector<PoolSentence>& pool, const std::vector<bool>& chosen) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < pool.size(); ++i)
    if (chosen[i]) out.insert(out.end(), pool[i].tokens->begin(), pool[i].tokens->end());
  return out;
}

inline double exhaustive_best(const std::vector<PoolSentence>& pool, const std::vector<std::string>& reference,
                              std::size_t k) {
  double best = 0;
  std::vector<bool> chosen(pool.size(), false);
  auto rec = [&](auto&& self, std::size_t start, std::size_t size) -> void {
    if (size > 0) best = std::max(best, rouge_all(candidate_text(pool, chosen), reference).mean_f1());
    if (size == k) return;
    for (std::size_t i = start; i < pool.size(); ++i) {
      chosen[i] = true;
      self(self, i + 1, size + 1);
      chosen[i] = false;
    }
  };
  rec(rec, 0, 0);
  return best;
}

}  // namespace extractive_detail

// Pools larger than this skip the exhaustive comparison in debug mode.
inline constexpr std::size_t kMaxExhaustivePool = 24;

// Greedy selection of up to k pool sentences maximizing the mean of
// ROUGE-1/2/L F1 against the gold summary. Stops when no candidate strictly
// improves the objective. Ties go to the earliest pool sentence.
inline OracleResult ext_oracle(const Example& ex, SourceConfig config, std::size_t k = 3, bool debug = false) {
  const auto reference = flatten_tokens(ex.summary.sentences);
  const auto pool = sentence_pool(ex, config);
  if (pool.empty()) throw DataError("example " + ex.id + ": empty sentence pool for oracle");
  OracleResult out;
  std::vector<bool> chosen(pool.size(), false);
  double current = 0;
  while (out.selected.size() < k) {
    std::optional<std::size_t> best;
    double best_obj = current;
    RougeTriple best_score;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (chosen[i]) continue;
      chosen[i] = true;
      auto score = rouge_all(extractive_detail::candidate_text(pool, chosen), reference);
      chosen[i] = false;
      if (score.mean_f1() > best_obj) {
        best_obj = score.mean_f1();
        best = i;
        best_score = score;
      }
    }
    if (!best) break;
    chosen[*best] = true;
    current = best_obj;
    out.selected.push_back(pool[*best].ref);
    out.score = best_score;
    out.objective_trace.push_back(current);
  }
  if (debug && pool.size() <= kMaxExhaustivePool)
    out.greedy_gap = extractive_detail::exhaustive_best(pool, reference, k) - current;
  return out;
}

}  // namespace mira
