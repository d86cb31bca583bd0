#pragma once

// Random corpora and test providers shared by unit and acceptance tests.

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "mira/mira.hpp"

namespace mira::testing {

inline std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Lowercase pseudo-words "ba", "be", ... distinct per index.
inline std::string word(std::size_t i, const std::string& prefix = "") {
  static const char* kSyll[] = {"ba", "ke", "lo", "mi", "nu", "ra", "so", "ti", "ve", "zu"};
  std::string w = prefix;
  do {
    w += kSyll[i % 10];
    i /= 10;
  } while (i > 0);
  return w;
}

inline std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 32);
  return s;
}

inline std::string sentence_text(const std::vector<std::string>& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += ' ';
    out += i == 0 ? capitalize(words[i]) : words[i];
  }
  return out + ".";
}

struct SynthOptions {
  std::size_t vocab = 40;
  std::size_t min_sents = 1;
  std::size_t max_sents = 6;
  std::size_t min_len = 2;
  std::size_t max_len = 9;
  std::size_t min_assisting = 1;
  std::size_t max_assisting = 4;
  std::size_t max_summary_sents = 3;
};

inline std::vector<std::vector<std::string>> random_sentences(std::mt19937_64& rng, const SynthOptions& o,
                                                              std::size_t count) {
  std::vector<std::vector<std::string>> out(count);
  for (auto& s : out) {
    const auto len = uniform(rng, o.min_len, o.max_len);
    for (std::size_t i = 0; i < len; ++i) s.push_back(word(uniform(rng, 0, o.vocab - 1)));
  }
  return out;
}

inline std::string doc_text(const std::vector<std::vector<std::string>>& sents) {
  std::string out;
  for (std::size_t i = 0; i < sents.size(); ++i) out += (i ? " " : "") + sentence_text(sents[i]);
  return out;
}

// A random example: documents over a shared vocabulary, and a summary mixing
// copied spans from the documents with novel words.
inline Example synth_example(std::mt19937_64& rng, const std::string& id, const SynthOptions& o = {}) {
  Example ex;
  ex.id = id;
  auto main_sents = random_sentences(rng, o, uniform(rng, o.min_sents, o.max_sents));
  ex.main = make_document(id + "-m", "http://main.example/" + id, doc_text(main_sents));
  std::vector<std::vector<std::string>> all = main_sents;
  const auto n_assist = uniform(rng, o.min_assisting, o.max_assisting);
  for (std::size_t a = 0; a < n_assist; ++a) {
    auto sents = random_sentences(rng, o, uniform(rng, o.min_sents, o.max_sents));
    all.insert(all.end(), sents.begin(), sents.end());
    ex.assisting.push_back(make_document(id + "-a" + std::to_string(a), "http://a.example/" + id + "/" + std::to_string(a),
                                         doc_text(sents), DocumentRole::kAssisting));
  }
  std::vector<std::vector<std::string>> summary(uniform(rng, 1, o.max_summary_sents));
  for (auto& s : summary) {
    const auto& src = all[uniform(rng, 0, all.size() - 1)];
    const auto from = uniform(rng, 0, src.size() - 1);
    const auto to = uniform(rng, from, src.size() - 1);
    s.assign(src.begin() + static_cast<std::ptrdiff_t>(from), src.begin() + static_cast<std::ptrdiff_t>(to) + 1);
    const auto novel = uniform(rng, 0, 3);
    for (std::size_t i = 0; i < novel; ++i)
      s.insert(s.begin() + static_cast<std::ptrdiff_t>(uniform(rng, 0, s.size())), word(uniform(rng, 0, 30), "q"));
  }
  ex.summary = make_summary(doc_text(summary));
  validate(ex);
  return ex;
}

inline std::vector<Example> synth_corpus(std::uint64_t seed, std::size_t n, const SynthOptions& o = {}) {
  std::mt19937_64 rng(seed);
  std::vector<Example> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(synth_example(rng, "x" + std::to_string(i), o));
  return out;
}

// Looks vectors up by exact text. Unknown texts are an error.
class FixtureProvider final : public EmbeddingProvider {
 public:
  explicit FixtureProvider(std::size_t dim) : dim_(dim) {}

  void set(const std::string& text, std::vector<double> v) { table_[text] = std::move(v); }

  std::string id() const override { return "fixture"; }
  std::size_t dim() const override { return dim_; }
  bool unit_norm() const override { return false; }

  std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) const override {
    std::vector<EmbeddingVector> out;
    for (const auto& t : texts) {
      auto it = table_.find(t);
      if (it == table_.end()) throw ProviderError("fixture provider has no vector for '" + t + "'");
      out.push_back({it->second, id()});
    }
    return out;
  }

 private:
  std::size_t dim_;
  std::map<std::string, std::vector<double>> table_;
};

// Multiplies another provider's vectors by a constant.
class ScaledProvider final : public EmbeddingProvider {
 public:
  ScaledProvider(const EmbeddingProvider& inner, double factor) : inner_(inner), factor_(factor) {}

  std::string id() const override { return inner_.id() + "*scaled"; }
  std::size_t dim() const override { return inner_.dim(); }
  bool unit_norm() const override { return false; }

  std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) const override {
    auto out = inner_.embed_batch(texts);
    for (auto& v : out)
      for (auto& x : v.values) x *= factor_;
    return out;
  }

 private:
  const EmbeddingProvider& inner_;
  double factor_;
};

// Unit vector with cosine c to e0 and the rest of its mass on axis `axis` (> 0).
inline std::vector<double> at_cosine(std::size_t dim, double c, std::size_t axis) {
  std::vector<double> v(dim, 0.0);
  v[0] = c;
  v[axis] = std::sqrt(std::max(0.0, 1.0 - c * c));
  return v;
}

// Minimal article page: description metadata plus one paragraph.
inline std::string page_html(const std::string& summary, const std::string& body) {
  return "<html><head><meta name=\"description\" content=\"" + summary + "\"></head><body><p>" + body +
         "</p></body></html>";
}

}  // namespace mira::testing

namespace mira::testing {

// Main document of n_main sentences whose vectors are
//   m_n = beta * e0 + sqrt(1 - beta^2) * e_n
// and one assisting document whose k-th sentence vector is built so that its
// cosine to m_n is exactly cosines[k][n]. The e0 component of each assisting
// vector is chosen to minimise its squared norm.
struct BandFixture {
  Example example;
  FixtureProvider provider{1};
};

// Assisting vector over (e0, e_1..e_n) with the given cosines, before the residual axis.
inline std::vector<double> band_row(const std::vector<double>& cos, double beta) {
  const double side2 = 1 - beta * beta;
  const double side = std::sqrt(side2);
  double sum = 0;
  for (double c : cos) sum += c;
  const double gamma = beta * sum / (side2 + static_cast<double>(cos.size()) * beta * beta);
  std::vector<double> v{gamma};
  for (double c : cos) v.push_back((c - beta * gamma) / side);
  return v;
}

inline bool band_realizable(const std::vector<double>& cos, double beta = 0.9) {
  double sq = 0;
  for (double x : band_row(cos, beta)) sq += x * x;
  return sq <= 1;
}

inline BandFixture band_fixture(const std::vector<std::vector<double>>& cosines, std::size_t n_main,
                                double beta = 0.9) {
  const std::size_t dim = 1 + n_main + cosines.size();
  BandFixture f{{}, FixtureProvider(dim)};
  const double side = std::sqrt(1 - beta * beta);
  std::string main_text, assist_text;
  for (std::size_t n = 0; n < n_main; ++n) {
    const auto text = sentence_text({"main", word(n)});
    std::vector<double> v(dim, 0.0);
    v[0] = beta;
    v[1 + n] = side;
    f.provider.set(text, v);
    main_text += (n ? " " : "") + text;
  }
  for (std::size_t k = 0; k < cosines.size(); ++k) {
    if (cosines[k].size() != n_main) throw std::invalid_argument("cosine row size");
    const auto text = sentence_text({"assist", word(k)});
    auto row = band_row(cosines[k], beta);
    std::vector<double> v(dim, 0.0);
    double sq = 0;
    for (std::size_t i = 0; i < row.size(); ++i) {
      v[i] = row[i];
      sq += row[i] * row[i];
    }
    if (sq > 1) throw std::invalid_argument("cosines not realizable");
    v[1 + n_main + k] = std::sqrt(1 - sq);
    f.provider.set(text, v);
    assist_text += (k ? " " : "") + text;
  }
  auto& ex = f.example;
  ex.id = "band";
  ex.main = make_document("main", "", main_text);
  ex.summary = make_summary("Summary.");
  ex.assisting.push_back(make_document("assist", "", assist_text, DocumentRole::kAssisting));
  return f;
}

// Document of `total` tokens in sentences of `sent_len` tokens (the last may be shorter).
inline Document doc_with_tokens(const std::string& id, std::size_t total, std::size_t sent_len,
                                DocumentRole role = DocumentRole::kMain) {
  std::vector<std::vector<std::string>> sents;
  std::size_t left = total, k = 0;
  while (left > 0) {
    const auto len = std::min(left, sent_len);  // includes the final "."
    std::vector<std::string> s;
    for (std::size_t i = 0; i + 1 < len; ++i) s.push_back(word(k++ % 97));
    if (s.empty()) s.push_back(word(k++ % 97));  // a one-token sentence still needs a word before "."
    sents.push_back(std::move(s));
    left -= std::min(left, std::max<std::size_t>(len, 2));
  }
  return make_document(id, "", doc_text(sents), role);
}

}  // namespace mira::testing
