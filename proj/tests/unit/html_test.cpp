#include <gtest/gtest.h>

#include "mira/dataset.hpp"
#include "mira/html.hpp"
#include "unit/test_paths.hpp"

namespace mira {
namespace {

std::string chomp(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

class PageFixture : public ::testing::TestWithParam<std::string> {};

TEST_P(PageFixture, ExtractsBodyAndSummary) {
  const auto base = fixture("pages/" + GetParam());
  auto art = extract_article(read_file(base + ".html"));
  EXPECT_EQ(art.body_text, chomp(read_file(base + ".body.txt")));
  EXPECT_EQ(art.summary_text, chomp(read_file(base + ".summary.txt")));
}

INSTANTIATE_TEST_SUITE_P(Pages, PageFixture, ::testing::Values("page1", "page2", "page3"));

TEST(ExtractArticle, SkipsWithReason) {
  for (const char* name : {"page4", "page5"}) {
    const auto base = fixture(std::string("pages/") + name);
    auto expect = chomp(read_file(base + ".expect"));
    ASSERT_EQ(expect.rfind("SKIP ", 0), 0u);
    try {
      extract_article(read_file(base + ".html"));
      FAIL() << name;
    } catch (const PageSkipped& e) {
      EXPECT_EQ(std::string(e.what()).rfind(expect.substr(5), 0), 0u) << name << ": " << e.what();
    }
  }
}

TEST(ExtractArticle, MetadataPriority) {
  const std::string body = "<p>Body text here.</p>";
  auto a = extract_article(R"(<meta name="description" content="plain"><meta name="twitter:description" content="tw">)" + body);
  EXPECT_EQ(a.summary_text, "tw");
  auto b = extract_article(R"(<meta name="description" content="plain">)" + body);
  EXPECT_EQ(b.summary_text, "plain");
}

TEST(ExtractArticle, EntitiesDecoded) {
  auto a = extract_article(R"(<meta name="description" content="A &amp; B &#8217;s &lt;x&gt;"><p>Caf&eacute; &#x41;.</p>)");
  EXPECT_EQ(a.summary_text, "A & B \xE2\x80\x99s <x>");
  EXPECT_EQ(a.body_text, "Caf\xC3\xA9 A.");
}

}  // namespace
}  // namespace mira
