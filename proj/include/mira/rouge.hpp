#pragma once

// ROUGE-N (clipped multiset n-gram overlap) and ROUGE-L (token-level LCS over
// the flattened sequences). Surface forms only: no stemming, no stopwords.

#include <algorithm>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mira/error.hpp"

namespace mira {

struct RougeScore {
  double precision = 0;
  double recall = 0;
  double f1 = 0;

  static RougeScore from_counts(std::size_t overlap, std::size_t candidate_total, std::size_t reference_total) {
    RougeScore s;
    s.precision = candidate_total ? static_cast<double>(overlap) / static_cast<double>(candidate_total) : 0.0;
    s.recall = reference_total ? static_cast<double>(overlap) / static_cast<double>(reference_total) : 0.0;
    s.f1 = s.precision + s.recall > 0 ? 2 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    return s;
  }
};

struct RougeTriple {
  RougeScore r1, r2, rl;

  // Mean of the three F1 scores: the extraction objective used by the oracle
  // and by gold content selection.
  double mean_f1() const { return (r1.f1 + r2.f1 + rl.f1) / 3.0; }
};

namespace rouge_detail {

using Counts = std::map<std::vector<std::string>, std::size_t>;

inline Counts count_ngrams(std::span<const std::string> tokens, std::size_t n) {
  Counts c;
  if (tokens.size() < n) return c;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i)
    ++c[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                 tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  return c;
}

inline std::size_t total(const Counts& c) {
  std::size_t t = 0;
  for (const auto& [_, v] : c) t += v;
  return t;
}

}  // namespace rouge_detail

inline RougeScore rouge_n(std::span<const std::string> candidate, std::span<const std::string> reference,
                          std::size_t n) {
  if (n < 1) throw ValidationError("ROUGE-N order must be >= 1");
  if (reference.empty()) throw ValidationError("empty reference");
  auto cand = rouge_detail::count_ngrams(candidate, n);
  auto ref = rouge_detail::count_ngrams(reference, n);
  std::size_t overlap = 0;
  for (const auto& [gram, count] : cand)
    if (auto it = ref.find(gram); it != ref.end()) overlap += std::min(count, it->second);
  return RougeScore::from_counts(overlap, rouge_detail::total(cand), rouge_detail::total(ref));
}

inline std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

inline RougeScore rouge_l(std::span<const std::string> candidate, std::span<const std::string> reference) {
  if (reference.empty()) throw ValidationError("empty reference");
  return RougeScore::from_counts(lcs_length(candidate, reference), candidate.size(), reference.size());
}

inline RougeTriple rouge_all(std::span<const std::string> candidate, std::span<const std::string> reference) {
  return {rouge_n(candidate, reference, 1), rouge_n(candidate, reference, 2), rouge_l(candidate, reference)};
}

}  // namespace mira
