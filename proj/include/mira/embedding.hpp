#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mira/error.hpp"
#include "mira/text.hpp"
#include "mira/util.hpp"

namespace mira {

struct EmbeddingVector {
  std::vector<double> values;
  std::string provider_id;

  double norm() const {
    double s = 0;
    for (double v : values) s += v * v;
    return std::sqrt(s);
  }
  bool is_zero() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
  }
};

// Cosine similarity clamped to [-1, 1]; 0 when either vector is zero.
inline double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("cosine of vectors with different dimensions");
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

inline double cosine(const EmbeddingVector& a, const EmbeddingVector& b) { return cosine(a.values, b.values); }

// Maps text to fixed-dimension vectors. Implementations must be safe to call
// from several threads at once and deterministic per (provider, text).
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::string id() const = 0;
  virtual std::size_t dim() const = 0;
  // True when every nonempty text maps to a unit-norm vector.
  virtual bool unit_norm() const = 0;
  virtual std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) const = 0;

  EmbeddingVector embed(const std::string& text) const {
    auto v = embed_batch(std::span<const std::string>(&text, 1));
    return std::move(v.front());
  }
};

// Hashed bag of words: feature index = fnv1a64(token) mod dim, value = term
// frequency, then L2-normalized. Empty text gives the zero vector.
class HashedBagOfWordsProvider final : public EmbeddingProvider {
 public:
  explicit HashedBagOfWordsProvider(std::size_t dim = 256) : dim_(dim) {
    if (dim_ == 0) throw ValidationError("embedding dimension must be positive");
  }

  std::string id() const override { return "builtin-hashbow-" + std::to_string(dim_); }
  std::size_t dim() const override { return dim_; }
  bool unit_norm() const override { return true; }

  std::size_t bucket(std::string_view token) const { return static_cast<std::size_t>(fnv1a64(token) % dim_); }

  std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) const override {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) {
      EmbeddingVector v{std::vector<double>(dim_, 0.0), id()};
      for (const auto& tok : tokenize(t)) v.values[bucket(tok)] += 1.0;
      if (const double n = v.norm(); n > 0)
        for (auto& x : v.values) x /= n;
      out.push_back(std::move(v));
    }
    return out;
  }

 private:
  std::size_t dim_;
};

}  // namespace mira
