#pragma once

// Content selection over assisting documents.
//
// Pipeline selection keeps an assisting sentence when its relevance profile
// against the main document (average, maximum and minimum cosine similarity
// to the main sentences) lies strictly inside all three threshold bands.
// Bands are calibrated as (mean - sd, mean + sd) of the profiles of
// gold-selected sentences, with the population standard deviation.
// Gold selection ranks every main and assisting sentence by the mean ROUGE-1/2/L
// F1 against each summary sentence and keeps the top k per summary sentence.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mira/corpus.hpp"
#include "mira/embedding.hpp"
#include "mira/error.hpp"
#include "mira/extractive.hpp"
#include "mira/jsonl.hpp"
#include "mira/rouge.hpp"

namespace mira {

struct RelevanceProfile {
  double avg = 0;
  double max = 0;
  double min = 0;

  friend bool operator==(const RelevanceProfile&, const RelevanceProfile&) = default;
};

inline RelevanceProfile relevance_profile(const EmbeddingVector& assist_sentence,
                                          std::span<const EmbeddingVector> main_sentences) {
  if (main_sentences.empty()) throw DataError("empty main document");
  RelevanceProfile p{0, -2, 2};
  for (const auto& m : main_sentences) {
    const double r = cosine(m, assist_sentence);
    p.avg += r;
    p.max = std::max(p.max, r);
    p.min = std::min(p.min, r);
  }
  p.avg /= static_cast<double>(main_sentences.size());
  return p;
}

inline std::vector<std::string> sentence_texts(std::span<const Sentence> sentences) {
  std::vector<std::string> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) out.push_back(s.text);
  return out;
}

inline RelevanceProfile relevance_profile(const Sentence& assist_sentence, const Document& main,
                                          const EmbeddingProvider& provider) {
  if (main.sentences.empty()) throw DataError("empty main document");
  auto mains = provider.embed_batch(sentence_texts(main.sentences));
  return relevance_profile(provider.embed(assist_sentence.text), mains);
}

struct Band {
  double lo = 0;
  double hi = 0;

  bool strictly_contains(double v) const { return lo < v && v < hi; }
  friend bool operator==(const Band&, const Band&) = default;
};

struct ThresholdBands {
  Band avg, max, min;

  static ThresholdBands preset() { return {{0.73, 0.83}, {0.81, 0.91}, {0.59, 0.75}}; }

  void validate() const {
    for (const auto* b : {&avg, &max, &min})
      if (!(b->lo <= b->hi)) throw ValidationError("threshold band with lower bound above upper bound");
  }

  bool accepts(const RelevanceProfile& p) const {
    return avg.strictly_contains(p.avg) && max.strictly_contains(p.max) && min.strictly_contains(p.min);
  }

  friend bool operator==(const ThresholdBands&, const ThresholdBands&) = default;
};

// bands.json: {"avg":[a,b],"max":[a,b],"min":[a,b]}
inline Json bands_to_json(const ThresholdBands& b) {
  return Json{{"avg", {b.avg.lo, b.avg.hi}}, {"max", {b.max.lo, b.max.hi}}, {"min", {b.min.lo, b.min.hi}}};
}

inline ThresholdBands bands_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("bands must be a JSON object");
  auto band = [&](const char* key) {
    if (!j.contains(key)) throw ValidationError(std::string("bands missing '") + key + "'");
    const auto& v = j.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw ValidationError(std::string("band '") + key + "' must be [lo, hi]");
    return Band{v[0].get<double>(), v[1].get<double>()};
  };
  for (const auto& [k, _] : j.items())
    if (k != "avg" && k != "max" && k != "min") throw ValidationError("unknown key '" + k + "' in bands");
  ThresholdBands b{band("avg"), band("max"), band("min")};
  b.validate();
  return b;
}

enum class SelectionMethod { kPipeline, kGold };

inline std::string_view to_string(SelectionMethod m) { return m == SelectionMethod::kPipeline ? "pipeline" : "gold"; }

struct SelectedSentence {
  SentenceRef ref;
  std::optional<RelevanceProfile> profile;  // pipeline
  std::optional<double> score_ext;          // gold
};

struct SelectionResult {
  std::string example_id;
  SelectionMethod method = SelectionMethod::kPipeline;
  std::vector<SelectedSentence> selected;
};

inline SelectionResult weak_select(const Example& ex, const ThresholdBands& bands, const EmbeddingProvider& provider) {
  bands.validate();
  SelectionResult out{ex.id, SelectionMethod::kPipeline, {}};
  if (ex.assisting.empty()) return out;
  if (ex.main.sentences.empty()) throw DataError("example " + ex.id + ": empty main document");
  std::vector<std::string> texts = sentence_texts(ex.main.sentences);
  const std::size_t n_main = texts.size();
  for (const auto& a : ex.assisting)
    for (const auto& s : a.sentences) texts.push_back(s.text);
  const auto vectors = provider.embed_batch(texts);
  std::span<const EmbeddingVector> mains(vectors.data(), n_main);
  std::size_t k = n_main;
  for (const auto& a : ex.assisting)
    for (const auto& s : a.sentences) {
      auto p = relevance_profile(vectors[k++], mains);
      if (bands.accepts(p)) out.selected.push_back({{a.doc_id, s.index}, p, std::nullopt});
    }
  return out;
}

// Finds a sentence of the example by reference; nullptr when absent.
inline const Sentence* find_sentence(const Example& ex, const SentenceRef& ref) {
  auto in = [&](const Document& d) -> const Sentence* {
    if (d.doc_id != ref.doc_id || ref.sentence_index >= d.sentences.size()) return nullptr;
    return &d.sentences[ref.sentence_index];
  };
  if (auto* s = in(ex.main)) return s;
  for (const auto& a : ex.assisting)
    if (auto* s = in(a)) return s;
  return nullptr;
}

// Population mean/sd band per category. Identical samples give lo == hi.
inline Band mean_sd_band(std::span<const double> xs) {
  if (xs.size() < 2) throw DataError("calibration needs at least 2 samples, got " + std::to_string(xs.size()));
  if (std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs.front(); })) return {xs.front(), xs.front()};
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0;
  for (double x : xs) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / static_cast<double>(xs.size()));
  return {mean - sd, mean + sd};
}

inline ThresholdBands bands_from_profiles(std::span<const RelevanceProfile> profiles) {
  std::vector<double> avg, mx, mn;
  for (const auto& p : profiles) {
    avg.push_back(p.avg);
    mx.push_back(p.max);
    mn.push_back(p.min);
  }
  return {mean_sd_band(avg), mean_sd_band(mx), mean_sd_band(mn)};
}

struct GoldSelection {
  const Example* example;
  SelectionResult selection;
};

// Relevance profile of every gold-selected sentence against its own main
// document, in input order.
inline std::vector<RelevanceProfile> gold_profiles(std::span<const GoldSelection> golds,
                                                   const EmbeddingProvider& provider) {
  std::vector<RelevanceProfile> out;
  for (const auto& g : golds) {
    const Example& ex = *g.example;
    if (g.selection.selected.empty()) continue;
    if (ex.main.sentences.empty()) throw DataError("example " + ex.id + ": empty main document");
    std::vector<std::string> texts = sentence_texts(ex.main.sentences);
    const std::size_t n_main = texts.size();
    for (const auto& s : g.selection.selected) {
      const auto* sent = find_sentence(ex, s.ref);
      if (!sent)
        throw DataError("example " + ex.id + ": selection references unknown sentence " + s.ref.doc_id + "/" +
                        std::to_string(s.ref.sentence_index));
      texts.push_back(sent->text);
    }
    const auto vectors = provider.embed_batch(texts);
    std::span<const EmbeddingVector> mains(vectors.data(), n_main);
    for (std::size_t i = n_main; i < vectors.size(); ++i) out.push_back(relevance_profile(vectors[i], mains));
  }
  return out;
}

inline ThresholdBands calibrate_bands(std::span<const GoldSelection> golds, const EmbeddingProvider& provider) {
  auto profiles = gold_profiles(golds, provider);
  return bands_from_profiles(profiles);
}

// SCORE_ext of a candidate sentence against one summary sentence.
inline double extraction_score(std::span<const std::string> candidate, std::span<const std::string> summary_sentence) {
  return rouge_all(candidate, summary_sentence).mean_f1();
}

inline SelectionResult gold_select(const Example& ex, std::size_t k = 1) {
  if (k < 1) throw ValidationError("k must be >= 1");
  if (ex.summary.sentences.empty()) throw DataError("example " + ex.id + ": empty summary");
  const auto pool = sentence_pool(ex, SourceConfig::kDA);
  std::vector<std::optional<double>> best(pool.size());
  std::vector<std::size_t> order(pool.size());
  std::vector<double> scores(pool.size());
  for (const auto& ss : ex.summary.sentences) {
    for (std::size_t i = 0; i < pool.size(); ++i) {
      scores[i] = extraction_score(*pool[i].tokens, ss.tokens);
      order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    for (std::size_t r = 0; r < std::min(k, order.size()); ++r) {
      const auto i = order[r];
      if (!best[i] || scores[i] > *best[i]) best[i] = scores[i];
    }
  }
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < pool.size(); ++i)
    if (best[i]) chosen.push_back(i);
  std::stable_sort(chosen.begin(), chosen.end(), [&](std::size_t a, std::size_t b) { return *best[a] > *best[b]; });
  SelectionResult out{ex.id, SelectionMethod::kGold, {}};
  for (auto i : chosen) out.selected.push_back({pool[i].ref, std::nullopt, best[i]});
  return out;
}

// Selection JSONL: {"id","method","selected":[{"doc_id","sentence_index",
//   "avg","max","min"} | {"doc_id","sentence_index","score_ext"}]}
inline Json selection_to_json(const SelectionResult& s) {
  Json sel = Json::array();
  for (const auto& e : s.selected) {
    Json j{{"doc_id", e.ref.doc_id}, {"sentence_index", e.ref.sentence_index}};
    if (e.profile) {
      j["avg"] = e.profile->avg;
      j["max"] = e.profile->max;
      j["min"] = e.profile->min;
    }
    if (e.score_ext) j["score_ext"] = *e.score_ext;
    sel.push_back(std::move(j));
  }
  return Json{{"id", s.example_id}, {"method", std::string(to_string(s.method))}, {"selected", std::move(sel)}};
}

inline SelectionResult selection_from_json(const Json& j) {
  SelectionResult s;
  s.example_id = j.at("id").get<std::string>();
  const auto m = j.at("method").get<std::string>();
  if (m == "pipeline") {
    s.method = SelectionMethod::kPipeline;
  } else if (m == "gold") {
    s.method = SelectionMethod::kGold;
  } else {
    throw DataError("unknown selection method '" + m + "'");
  }
  for (const auto& e : j.at("selected")) {
    SelectedSentence x;
    x.ref = {e.at("doc_id").get<std::string>(), e.at("sentence_index").get<std::size_t>()};
    if (e.contains("avg")) x.profile = RelevanceProfile{e.at("avg").get<double>(), e.at("max").get<double>(), e.at("min").get<double>()};
    if (e.contains("score_ext")) x.score_ext = e.at("score_ext").get<double>();
    s.selected.push_back(std::move(x));
  }
  return s;
}

inline std::map<std::string, SelectionResult> read_selections(const std::string& path) {
  std::map<std::string, SelectionResult> out;
  for_each_jsonl(path, [&](const Json& j, std::size_t line_no) {
    auto s = selection_from_json(j);
    auto id = s.example_id;
    if (!out.emplace(id, std::move(s)).second)
      throw DataError(path + ":" + std::to_string(line_no) + ": duplicate selection for " + id);
  });
  return out;
}

}  // namespace mira
