#pragma once

// Run configuration: JSON config file, then MIRA_ENDPOINT / MIRA_CONCURRENCY
// environment overrides, then command-line flags. Unknown keys are rejected.
//
//   {
//     "corpus": "test.jsonl",
//     "provider": {"kind": "builtin"|"remote", "endpoint": "...", "timeout_ms": 30000,
//                  "retries": 3, "concurrency": 8, "dim": 256},
//     "facts": "builtin" | "remote" | "<facts.jsonl>",
//     "metrics": ["coverage", "support", "sfweights"],
//     "ngram_orders": [1, 2, 3, 4],
//     "out_dir": ".",
//     "seed": 0,
//     "workers": 8,
//     "tau": 0.5
//   }

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "mira/embedding.hpp"
#include "mira/error.hpp"
#include "mira/facts.hpp"
#include "mira/jsonl.hpp"
#include "mira/parallel.hpp"
#include "mira/remote.hpp"
#include "mira/util.hpp"

namespace mira {

inline constexpr const char* kToolkitVersion = "0.3.0";

struct ProviderSettings {
  std::string kind = "builtin";
  std::size_t dim = 256;
  RemoteSettings remote;
};

struct RunConfig {
  std::string corpus;
  ProviderSettings provider;
  std::string facts = "builtin";
  std::vector<std::string> metrics = {"coverage", "support", "sfweights"};
  std::vector<std::size_t> ngram_orders = {1, 2, 3, 4};
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::size_t workers = default_workers();
  double tau = 0.5;

  bool wants(std::string_view metric) const {
    return std::find(metrics.begin(), metrics.end(), metric) != metrics.end();
  }

  void validate() const {
    if (provider.kind != "builtin" && provider.kind != "remote")
      throw ValidationError("provider.kind must be builtin or remote, got '" + provider.kind + "'");
    if (provider.dim == 0) throw ValidationError("provider.dim must be positive");
    if (provider.remote.retries < 0) throw ValidationError("provider.retries must be >= 0");
    if (provider.remote.concurrency < 1) throw ValidationError("provider.concurrency must be >= 1");
    if (provider.remote.timeout_ms < 1) throw ValidationError("provider.timeout_ms must be >= 1");
    if (ngram_orders.empty()) throw ValidationError("ngram_orders must not be empty");
    for (auto n : ngram_orders)
      if (n < 1) throw ValidationError("n-gram orders must be >= 1");
    static const std::set<std::string> kMetrics = {"coverage", "support", "sfweights"};
    for (const auto& m : metrics)
      if (!kMetrics.count(m)) throw ValidationError("unknown metric '" + m + "'");
    if (workers < 1) throw ValidationError("workers must be >= 1");
    if (facts == "remote" && provider.kind != "remote" && provider.remote.endpoint.empty())
      throw ValidationError("remote facts need a provider endpoint");
  }

  // Canonical JSON of everything that can change results; worker count and
  // output location are excluded.
  Json result_affecting_json() const {
    Json p{{"kind", provider.kind}};
    if (provider.kind == "builtin") {
      p["dim"] = provider.dim;
    } else {
      p["endpoint"] = provider.remote.endpoint;
    }
    return Json{{"corpus", corpus}, {"provider", p},       {"facts", facts}, {"metrics", metrics},
                {"ngram_orders", ngram_orders}, {"seed", seed}, {"tau", tau}};
  }

  std::string config_hash() const { return hex64(fnv1a64(result_affecting_json().dump())); }
};

namespace config_detail {

inline void reject_unknown(const Json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
  for (const auto& [k, _] : j.items())
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw ValidationError("unknown config key '" + where + k + "'");
}

}  // namespace config_detail

inline RunConfig config_from_json(const Json& j) {
  using config_detail::reject_unknown;
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  reject_unknown(j, {"corpus", "provider", "facts", "metrics", "ngram_orders", "out_dir", "seed", "workers", "tau"},
                 "");
  RunConfig c;
  try {
    if (j.contains("corpus")) c.corpus = j.at("corpus").get<std::string>();
    if (j.contains("provider")) {
      const auto& p = j.at("provider");
      reject_unknown(p, {"kind", "endpoint", "timeout_ms", "retries", "concurrency", "dim"}, "provider.");
      if (p.contains("kind")) c.provider.kind = p.at("kind").get<std::string>();
      if (p.contains("endpoint")) c.provider.remote.endpoint = p.at("endpoint").get<std::string>();
      if (p.contains("timeout_ms")) c.provider.remote.timeout_ms = p.at("timeout_ms").get<int>();
      if (p.contains("retries")) c.provider.remote.retries = p.at("retries").get<int>();
      if (p.contains("concurrency")) c.provider.remote.concurrency = p.at("concurrency").get<int>();
      if (p.contains("dim")) c.provider.dim = p.at("dim").get<std::size_t>();
    }
    if (j.contains("facts")) c.facts = j.at("facts").get<std::string>();
    if (j.contains("metrics")) c.metrics = j.at("metrics").get<std::vector<std::string>>();
    if (j.contains("ngram_orders")) c.ngram_orders = j.at("ngram_orders").get<std::vector<std::size_t>>();
    if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("workers")) c.workers = j.at("workers").get<std::size_t>();
    if (j.contains("tau")) c.tau = j.at("tau").get<double>();
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("bad config value: ") + e.what());
  }
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError("config " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

inline void apply_env_overrides(RunConfig& c) {
  if (const char* e = std::getenv("MIRA_ENDPOINT"); e && *e) c.provider.remote.endpoint = e;
  if (const char* e = std::getenv("MIRA_CONCURRENCY"); e && *e) {
    try {
      c.provider.remote.concurrency = std::stoi(e);
    } catch (const std::exception&) {
      throw ValidationError(std::string("MIRA_CONCURRENCY is not an integer: ") + e);
    }
  }
}

inline std::unique_ptr<EmbeddingProvider> make_provider(const RunConfig& c) {
  if (c.provider.kind == "remote") return std::make_unique<RemoteEmbeddingProvider>(c.provider.remote);
  return std::make_unique<HashedBagOfWordsProvider>(c.provider.dim);
}

inline std::unique_ptr<FactExtractor> make_fact_extractor(const RunConfig& c) {
  if (c.facts == "builtin") return std::make_unique<HeuristicFactExtractor>();
  if (c.facts == "remote") return std::make_unique<RemoteFactExtractor>(c.provider.remote);
  return std::make_unique<TableFactExtractor>(TableFactExtractor::from_file(c.facts));
}

inline Json report_metadata(const RunConfig& c, const EmbeddingProvider* provider) {
  return Json{{"provider_id", provider ? provider->id() : std::string("none")},
              {"toolkit_version", kToolkitVersion},
              {"config_hash", c.config_hash()}};
}

}  // namespace mira
