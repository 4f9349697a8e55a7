#include <cmath>

#include "doctest.h"
#include "eyesfree/ingest.h"
#include "eyesfree/summarizer.h"
#include "generators.h"
#include "oracles.h"

using namespace eyesfree;

namespace {

Document regions(std::vector<std::string> texts) {
  Document d;
  d.id = "s";
  Page page{0, 600, 2000, {}};
  for (std::size_t i = 0; i < texts.size(); ++i) {
    page.regions.push_back({"r" + std::to_string(i), 0, {10, 10.0 + 30 * i, 300, 20},
                            RegionKind::kParagraph, texts[i], {}});
  }
  d.pages.push_back(std::move(page));
  d.reading_order = infer_reading_order(d.pages[0]);
  return d;
}

}  // namespace

TEST_CASE("stopwords and index terms") {
  CHECK(is_stopword("the"));
  CHECK(is_stopword("and"));
  CHECK(!is_stopword("wheel"));
  CHECK(!is_index_term("a"));
  CHECK(!is_index_term("of"));
  CHECK(is_index_term("zoom"));
  CHECK(is_index_term("42"));
}

TEST_CASE("document frequency counts regions, not occurrences") {
  Document d = regions({"foo foo bar.", "foo baz.", "qux."});
  d.pages[0].regions.push_back({"f", 0, {400, 10, 10, 10}, RegionKind::kFigure, "", {}});
  CorpusStats stats = corpus_stats(d);
  CHECK(stats.region_count == 3);
  CHECK(stats.doc_freq.at("foo") == 2);
  CHECK(stats.doc_freq.at("bar") == 1);
  CHECK(stats.doc_freq.count("the") == 0);
}

TEST_CASE("repeated rare term wins") {
  Document d = regions({"foo bar foo baz foo", "bar alpha.", "baz beta.", "bar baz gamma."});
  auto k = summarize_region(d.pages[0].regions[0], corpus_stats(d));
  REQUIRE(k);
  CHECK(k->phrase.find("foo") != std::string::npos);
  auto oracle = testing::brute_force_keyphrase(d, d.pages[0].regions[0]);
  REQUIRE(oracle);
  CHECK(k->phrase == oracle->phrase);
}

TEST_CASE("regions without index terms have no keyphrase") {
  Document d = regions({"of the a.", "", "Real words here."});
  CorpusStats stats = corpus_stats(d);
  CHECK(!summarize_region(d.pages[0].regions[0], stats));
  CHECK(!summarize_region(d.pages[0].regions[1], stats));
  auto all = summarize_document(d);
  REQUIRE(all.size() == 1);
  CHECK(all[0].region_id == "r2");
}

TEST_CASE("phrases keep original casing and never cross a sentence") {
  Document d = regions({"Wheel Gesture. Zoom Pan.", "other words."});
  auto k = summarize_region(d.pages[0].regions[0], corpus_stats(d));
  REQUIRE(k);
  CHECK(k->phrase == "Wheel Gesture");
}

TEST_CASE("property: scorer matches the brute-force oracle") {
  testing::Rng rng(31);
  int compared = 0;
  for (int i = 0; i < 300; ++i) {
    Document d = testing::random_document(rng);
    for (const std::string& id : d.reading_order) {
      const Region* r = d.find_region(id);
      auto got = summarize_region(*r, corpus_stats(d));
      auto want = testing::brute_force_keyphrase(d, *r);
      REQUIRE(got.has_value() == want.has_value());
      if (!got) continue;
      ++compared;
      CHECK(got->phrase == want->phrase);
      CHECK(got->score == doctest::Approx(want->score).epsilon(1e-12));
      CHECK(r->text.find(got->phrase) != std::string::npos);
    }
  }
  CHECK(compared > 500);
}

TEST_CASE("property: summaries are valid keyphrases of at most four words") {
  testing::Rng rng(32);
  for (int i = 0; i < 200; ++i) {
    Document d = testing::random_document(rng);
    auto ks = summarize_document(d);
    CHECK(validate_keyphrases(d, ks).empty());
    for (const Keyphrase& k : ks) {
      CHECK(k.score > 0);
      std::size_t words = 0;
      bool in_word = false;
      for (char c : k.phrase) {
        const bool alnum = std::isalnum(static_cast<unsigned char>(c));
        if (alnum && !in_word) ++words;
        in_word = alnum;
      }
      CHECK(words <= 4);
    }
  }
}
