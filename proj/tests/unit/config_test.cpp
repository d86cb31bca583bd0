#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "mira/config.hpp"

namespace mira {
namespace {

TEST(Config, Defaults) {
  RunConfig c;
  EXPECT_EQ(c.provider.kind, "builtin");
  EXPECT_EQ(c.ngram_orders, (std::vector<std::size_t>{1, 2, 3, 4}));
  EXPECT_DOUBLE_EQ(c.tau, 0.5);
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, ParsesKnownKeys) {
  auto c = config_from_json(Json::parse(R"({
    "corpus": "a.jsonl", "provider": {"kind": "remote", "endpoint": "http://h:1", "retries": 5, "concurrency": 2},
    "facts": "remote", "metrics": ["coverage"], "ngram_orders": [2], "seed": 7, "workers": 3, "tau": 0.25})"));
  EXPECT_EQ(c.corpus, "a.jsonl");
  EXPECT_EQ(c.provider.remote.endpoint, "http://h:1");
  EXPECT_EQ(c.provider.remote.retries, 5);
  EXPECT_EQ(c.provider.remote.concurrency, 2);
  EXPECT_TRUE(c.wants("coverage"));
  EXPECT_FALSE(c.wants("support"));
  EXPECT_EQ(c.workers, 3u);
  EXPECT_DOUBLE_EQ(c.tau, 0.25);
}

TEST(Config, UnknownKeysRejected) {
  try {
    config_from_json(Json::parse(R"({"provider": {"kind": "builtin", "x": 1}})"));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("provider.x"), std::string::npos);
    EXPECT_EQ(e.code(), ExitCode::kValidation);
  }
  EXPECT_THROW(config_from_json(Json::parse(R"({"ngram": [1]})")), ValidationError);
  EXPECT_THROW(config_from_json(Json::parse(R"({"seed": "x"})")), ValidationError);
  EXPECT_THROW(config_from_json(Json::parse("[]")), ValidationError);
}

TEST(Config, ValidateRejectsBadValues) {
  RunConfig c;
  c.provider.kind = "magic";
  EXPECT_THROW(c.validate(), ValidationError);
  c = RunConfig{};
  c.ngram_orders = {0};
  EXPECT_THROW(c.validate(), ValidationError);
  c = RunConfig{};
  c.metrics = {"bleu"};
  EXPECT_THROW(c.validate(), ValidationError);
  c = RunConfig{};
  c.workers = 0;
  EXPECT_THROW(c.validate(), ValidationError);
}

TEST(Config, HashIgnoresWorkersAndOutDir) {
  RunConfig a, b;
  b.workers = a.workers + 5;
  b.out_dir = "/elsewhere";
  EXPECT_EQ(a.config_hash(), b.config_hash());
  EXPECT_EQ(a.config_hash().size(), 16u);
  b.tau = 0.4;
  EXPECT_NE(a.config_hash(), b.config_hash());
  RunConfig d;
  d.seed = 1;
  EXPECT_NE(a.config_hash(), d.config_hash());
}

TEST(Config, EnvOverrides) {
  ::setenv("MIRA_ENDPOINT", "http://env:9", 1);
  ::setenv("MIRA_CONCURRENCY", "3", 1);
  RunConfig c;
  apply_env_overrides(c);
  EXPECT_EQ(c.provider.remote.endpoint, "http://env:9");
  EXPECT_EQ(c.provider.remote.concurrency, 3);
  ::setenv("MIRA_CONCURRENCY", "lots", 1);
  EXPECT_THROW(apply_env_overrides(c), ValidationError);
  ::unsetenv("MIRA_ENDPOINT");
  ::unsetenv("MIRA_CONCURRENCY");
}

TEST(Config, LoadFile) {
  auto path = std::filesystem::temp_directory_path() / "mira_config_test.json";
  std::ofstream(path) << R"({"corpus": "c.jsonl", "tau": 0.1})";
  auto c = load_config(path.string());
  EXPECT_EQ(c.corpus, "c.jsonl");
  std::ofstream(path) << "{not json";
  EXPECT_THROW(load_config(path.string()), ValidationError);
  std::filesystem::remove(path);
  EXPECT_THROW(load_config(path.string()), ValidationError);
}

TEST(Config, MetadataCarriesProviderAndHash) {
  RunConfig c;
  auto p = make_provider(c);
  auto m = report_metadata(c, p.get());
  EXPECT_EQ(m["provider_id"], p->id());
  EXPECT_EQ(m["toolkit_version"], kToolkitVersion);
  EXPECT_EQ(m["config_hash"], c.config_hash());
}

}  // namespace
}  // namespace mira
