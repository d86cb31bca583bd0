#pragma once

// HTTP client side of the model sidecar protocol.
//
//   POST /embed  {"texts":[...]}                            -> {"dim":d,"vectors":[[...],...]}
//   POST /facts  {"sentences":[{"doc_id","index","text"}]}  -> [fact, ...] (facts interchange shape)
//
// Requests that fail to connect, time out, or return 5xx are retried with
// exponential backoff; 4xx responses fail immediately.

#include <chrono>
#include <cmath>
#include <condition_variable>
#include <future>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <httplib.h>

#include "mira/embedding.hpp"
#include "mira/error.hpp"
#include "mira/facts.hpp"
#include "mira/jsonl.hpp"

namespace mira {

struct RemoteSettings {
  std::string endpoint = "http://127.0.0.1:8080";
  int timeout_ms = 30000;
  int retries = 3;
  int concurrency = 8;  // max in-flight HTTP requests
  std::size_t cache_capacity = 100000;
  std::size_t max_batch = 64;
  int backoff_ms = 50;
};

namespace remote_detail {

// Bounded-concurrency JSON POST with retries. Thread-safe.
class JsonClient {
 public:
  explicit JsonClient(RemoteSettings s) : settings_(std::move(s)), slots_(std::max(1, settings_.concurrency)) {}

  Json post(const std::string& path, const Json& body) const {
    const auto payload = body.dump();
    std::string last_error;
    for (int attempt = 0; attempt <= settings_.retries; ++attempt) {
      if (attempt > 0)
        std::this_thread::sleep_for(std::chrono::milliseconds(settings_.backoff_ms << std::min(attempt - 1, 6)));
      slots_.acquire();
      httplib::Result res;
      {
        httplib::Client cli(settings_.endpoint);
        const auto ms = std::chrono::milliseconds(settings_.timeout_ms);
        cli.set_connection_timeout(ms);
        cli.set_read_timeout(ms);
        cli.set_write_timeout(ms);
        res = cli.Post(path, payload, "application/json");
      }
      slots_.release();
      if (!res) {
        last_error = "transport error: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status >= 500) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      if (res->status != 200)
        throw ProviderError(settings_.endpoint + path + " returned HTTP " + std::to_string(res->status) + ": " +
                            res->body);
      try {
        return Json::parse(res->body);
      } catch (const Json::parse_error& e) {
        throw ProviderError(settings_.endpoint + path + " returned malformed JSON: " + e.what());
      }
    }
    throw ProviderError(settings_.endpoint + path + " failed after " + std::to_string(settings_.retries + 1) +
                            " attempts: " + last_error,
                        true);
  }

  const RemoteSettings& settings() const { return settings_; }

 private:
  RemoteSettings settings_;
  mutable std::counting_semaphore<> slots_;
};

}  // namespace remote_detail

// Embedding provider backed by the sidecar. Keeps an LRU cache keyed by text
// (the provider id is fixed per instance) and coalesces concurrent requests
// for the same text.
class RemoteEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit RemoteEmbeddingProvider(RemoteSettings s) : client_(std::move(s)) {}

  std::string id() const override { return "remote:" + client_.settings().endpoint; }
  bool unit_norm() const override { return true; }

  std::size_t dim() const override {
    std::lock_guard lock(mu_);
    return dim_;
  }

  std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) const override {
    using Future = std::shared_future<std::vector<double>>;
    std::vector<Future> futures(texts.size());
    std::vector<std::string> to_fetch;
    std::vector<std::shared_ptr<std::promise<std::vector<double>>>> promises;
    {
      std::lock_guard lock(mu_);
      std::unordered_map<std::string, Future> local;
      for (std::size_t i = 0; i < texts.size(); ++i) {
        const auto& t = texts[i];
        if (auto hit = cache_lookup(t)) {
          std::promise<std::vector<double>> p;
          p.set_value(*hit);
          futures[i] = p.get_future().share();
        } else if (auto it = inflight_.find(t); it != inflight_.end()) {
          futures[i] = it->second;
        } else if (auto l = local.find(t); l != local.end()) {
          futures[i] = l->second;
        } else {
          auto p = std::make_shared<std::promise<std::vector<double>>>();
          futures[i] = p->get_future().share();
          inflight_.emplace(t, futures[i]);
          local.emplace(t, futures[i]);
          to_fetch.push_back(t);
          promises.push_back(std::move(p));
        }
      }
    }

    const std::size_t batch = std::max<std::size_t>(1, client_.settings().max_batch);
    for (std::size_t start = 0; start < to_fetch.size(); start += batch) {
      const std::size_t end = std::min(to_fetch.size(), start + batch);
      try {
        std::vector<std::string> chunk(to_fetch.begin() + static_cast<std::ptrdiff_t>(start),
                                       to_fetch.begin() + static_cast<std::ptrdiff_t>(end));
        auto vectors = fetch(chunk);
        std::lock_guard lock(mu_);
        for (std::size_t i = start; i < end; ++i) {
          cache_insert(to_fetch[i], vectors[i - start]);
          inflight_.erase(to_fetch[i]);
          promises[i]->set_value(std::move(vectors[i - start]));
        }
      } catch (...) {
        std::lock_guard lock(mu_);
        for (std::size_t i = start; i < to_fetch.size(); ++i) {
          inflight_.erase(to_fetch[i]);
          promises[i]->set_exception(std::current_exception());
        }
        throw;
      }
    }

    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    const auto pid = id();
    for (auto& f : futures) out.push_back({f.get(), pid});
    return out;
  }

 private:
  std::vector<std::vector<double>> fetch(const std::vector<std::string>& texts) const {
    Json body{{"texts", texts}};
    Json res = client_.post("/embed", body);
    if (!res.is_object() || !res.contains("dim") || !res.contains("vectors"))
      throw ProviderError("/embed response missing dim or vectors");
    const auto d = res.at("dim").get<std::size_t>();
    const auto& vecs = res.at("vectors");
    if (!vecs.is_array() || vecs.size() != texts.size())
      throw ProviderError("/embed returned " + std::to_string(vecs.size()) + " vectors for " +
                          std::to_string(texts.size()) + " texts");
    std::vector<std::vector<double>> out;
    for (const auto& v : vecs) {
      auto values = v.get<std::vector<double>>();
      if (values.size() != d) throw ProviderError("/embed vector dimension mismatch");
      for (double x : values)
        if (!std::isfinite(x)) throw ProviderError("/embed returned a non-finite value");
      out.push_back(std::move(values));
    }
    std::lock_guard lock(mu_);
    if (dim_ == 0) dim_ = d;
    if (dim_ != d) throw ProviderError("/embed dimension changed between calls");
    return out;
  }

  // Caller holds mu_.
  std::optional<std::vector<double>> cache_lookup(const std::string& text) const {
    auto it = cache_index_.find(text);
    if (it == cache_index_.end()) return std::nullopt;
    lru_.splice(lru_.begin(), lru_, it->second);
    return it->second->second;
  }

  void cache_insert(const std::string& text, const std::vector<double>& v) const {
    if (client_.settings().cache_capacity == 0) return;
    if (auto it = cache_index_.find(text); it != cache_index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      return;
    }
    lru_.emplace_front(text, v);
    cache_index_.emplace(text, lru_.begin());
    while (lru_.size() > client_.settings().cache_capacity) {
      cache_index_.erase(lru_.back().first);
      lru_.pop_back();
    }
  }

  remote_detail::JsonClient client_;
  mutable std::mutex mu_;
  mutable std::size_t dim_ = 0;
  mutable std::list<std::pair<std::string, std::vector<double>>> lru_;
  mutable std::unordered_map<std::string, std::list<std::pair<std::string, std::vector<double>>>::iterator>
      cache_index_;
  mutable std::unordered_map<std::string, std::shared_future<std::vector<double>>> inflight_;
};

// Fact extraction through the sidecar's /facts endpoint. Sentence text is sent
// as our tokens joined by single spaces, so returned spans index the same
// tokens. Sentences without frames get the whole-sentence fallback.
class RemoteFactExtractor final : public FactExtractor {
 public:
  explicit RemoteFactExtractor(RemoteSettings s) : client_(std::move(s)) {}

  std::vector<Fact> extract(std::string_view doc_id, std::span<const Sentence> sentences) const override {
    Json req = Json::array();
    for (const auto& s : sentences)
      req.push_back({{"doc_id", std::string(doc_id)}, {"index", s.index}, {"text", join(s.tokens, " ")}});
    Json res = client_.post("/facts", Json{{"sentences", std::move(req)}});
    const Json& list = res.is_object() && res.contains("facts") ? res.at("facts") : res;
    if (!list.is_array()) throw ProviderError("/facts response is not a list of facts");
    TableFactExtractor table;
    try {
      for (const auto& j : list) {
        auto f = fact_from_json(j);
        if (f.source_doc_id != doc_id) throw DataError("/facts returned a fact for another document");
        table.add(std::move(f));
      }
    } catch (const Json::exception& e) {
      throw ProviderError(std::string("/facts returned a malformed fact: ") + e.what());
    }
    return table.extract(doc_id, sentences);
  }

  std::string id() const override { return "remote:" + client_.settings().endpoint; }

 private:
  remote_detail::JsonClient client_;
};

}  // namespace mira
