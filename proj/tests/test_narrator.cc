#include <algorithm>

#include "doctest.h"
#include "eyesfree/ingest.h"
#include "eyesfree/linker.h"
#include "eyesfree/narrator.h"
#include "generators.h"
#include "oracles.h"

using namespace eyesfree;

namespace {

Document single(std::string text, SourceKind source = SourceKind::kDigital,
                std::optional<double> ocr = {}) {
  Document d;
  d.id = "n";
  d.source_kind = source;
  d.pages.push_back({0, 600, 800, {{"r", 0, {10, 10, 300, 20}, RegionKind::kParagraph,
                                    std::move(text), ocr}}});
  d.reading_order = {"r"};
  return d;
}

ReadingScript narrate(const Document& d, const std::vector<Link>& links = {},
                      NarrationOptions options = {}) {
  return compile_script(d, segment_sentences(d), links, MockTiming(), options);
}

template <typename T>
std::vector<T> all_of_type(const ReadingScript& s) {
  std::vector<T> out;
  for (const ScriptEvent& e : s.events) {
    if (const auto* x = std::get_if<T>(&e)) out.push_back(*x);
  }
  return out;
}

}  // namespace

TEST_CASE("mock timing counts code points") {
  MockTiming t;
  CHECK(t.word_duration("Hi") == 200);
  CHECK(t.word_duration("there.") == 400);
  CHECK(t.word_duration("naïve") == 350);
  CHECK(t.inter_word_gap() == 30);
  CHECK(t.inter_sentence_pause() == 300);
}

TEST_CASE("Hi there.") {
  ReadingScript s = narrate(single("Hi there."));
  auto speaks = all_of_type<SpeakSpan>(s);
  REQUIRE(speaks.size() == 2);
  CHECK(speaks[0].t_start == 0);
  CHECK(speaks[0].t_end == 200);
  CHECK(speaks[0].span == TextSpan{"r", 0, 2});
  CHECK(speaks[1].t_start == 230);
  CHECK(speaks[1].t_end == 630);
  auto bounds = all_of_type<SentenceBoundary>(s);
  REQUIRE(bounds.size() == 1);
  CHECK(bounds[0].t == 630);
  CHECK(all_of_type<RegionStart>(s) == std::vector<RegionStart>{{0, "r"}});
  CHECK(std::get<DocumentEnd>(s.events.back()).t == 630);
  CHECK(sentence_clip_plan(s) == std::vector<ClipPlanEntry>{{0, 0, 630}});
}

TEST_CASE("sentences are separated by the pause") {
  ReadingScript s = narrate(single("Hi. Yo."));
  auto speaks = all_of_type<SpeakSpan>(s);
  REQUIRE(speaks.size() == 2);
  CHECK(speaks[0].t_end == 250);
  CHECK(speaks[1].t_start == 550);
  auto plan = sentence_clip_plan(s);
  CHECK(plan == std::vector<ClipPlanEntry>{{0, 0, 250}, {1, 550, 800}});
}

TEST_CASE("link trigger sits at the start of the mention's first word") {
  Document d = single("Now see Figure 2 here.");
  d.pages[0].regions.push_back({"f", 0, {400, 10, 100, 100}, RegionKind::kFigure, "", {}});
  d.pages[0].regions.push_back({"c", 0, {400, 120, 100, 20}, RegionKind::kCaption, "Figure 2: X.", {}});
  d.reading_order = infer_reading_order(d.pages[0]);
  auto links = link_document(d);
  REQUIRE(links.size() == 1);
  ReadingScript s = narrate(d, links);
  auto triggers = all_of_type<LinkTrigger>(s);
  REQUIRE(triggers.size() == 1);
  // Now(250) gap see(250) gap -> Figure starts at 560.
  CHECK(triggers[0].t == 560);
  CHECK(triggers[0].link_id == links[0].id);
}

TEST_CASE("link outside any spoken word is a compile error naming the link") {
  Document d = single("Hi   there.");
  Link bad{"L9", {"r", 3, 4}, "r", LinkKind::kFigureRef, " ", 1.0};
  CHECK_THROWS_WITH_AS(narrate(d, {bad}), doctest::Contains("L9"), CompileError);
}

TEST_CASE("OCR warnings") {
  SUBCASE("low confidence scanned region is announced first") {
    ReadingScript s = narrate(single("Hi there.", SourceKind::kScanned, 0.3));
    auto warnings = all_of_type<Warning>(s);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].text == "Warning, upcoming TTS may be unintelligible");
    CHECK(warnings[0].t_start == 0);
    CHECK(warnings[0].t_end == 2000);
    CHECK(all_of_type<SpeakSpan>(s)[0].t_start == 2000);
  }
  SUBCASE("confident region and digital documents get none") {
    CHECK(all_of_type<Warning>(narrate(single("Hi.", SourceKind::kScanned, 0.9))).empty());
    CHECK(all_of_type<Warning>(narrate(single("Hi.", SourceKind::kScanned, 0.6))).empty());
    CHECK(all_of_type<Warning>(narrate(single("Hi.", SourceKind::kScanned))).empty());
  }
  SUBCASE("threshold is configurable") {
    CHECK(all_of_type<Warning>(narrate(single("Hi.", SourceKind::kScanned, 0.7), {}, {0.8})).size() == 1);
  }
  SUBCASE("silent regions are not warned") {
    CHECK(all_of_type<Warning>(narrate(single("  ", SourceKind::kScanned, 0.1))).empty());
  }
}

TEST_CASE("empty document ends at zero") {
  Document d;
  d.id = "e";
  d.pages.push_back({0, 100, 100, {}});
  ReadingScript s = narrate(d);
  REQUIRE(s.events.size() == 1);
  CHECK(s.events.back() == ScriptEvent{DocumentEnd{0}});
  CHECK(sentence_clip_plan(s).empty());
}

TEST_CASE("page boundaries mark each later page as narration reaches it") {
  Document d = single("One.");
  d.pages.push_back({1, 600, 800, {}});
  d.pages.push_back({2, 600, 800, {{"q", 2, {10, 10, 100, 20}, RegionKind::kParagraph, "Two.", {}}}});
  d.reading_order = {"r", "q"};
  auto pages = all_of_type<PageBoundary>(narrate(d));
  REQUIRE(pages.size() == 2);
  CHECK(pages[0].page_index == 1);
  CHECK(pages[1].page_index == 2);
  CHECK(pages[0].t == pages[1].t);
}

TEST_CASE("format_event lines") {
  CHECK(format_event(SpeakSpan{0, 200, {"r1", 0, 2}, 0}) == "0 speak end=200 sentence=0 span=r1:0-2");
  CHECK(format_event(LinkTrigger{1200, "L0"}) == "1200 link_trigger link=L0");
}

TEST_CASE("property: scripts of generated documents hold every invariant") {
  testing::Rng rng(41);
  for (int i = 0; i < 300; ++i) {
    Document d = testing::random_document(rng);
    auto links = link_document(d);
    ReadingScript s = narrate(d, links);
    auto problems = testing::check_script(d, links, s, kDefaultWarningThreshold);
    INFO("document " << i << ": " << (problems.empty() ? "" : problems[0]));
    CHECK(problems.empty());
    CHECK(s == narrate(d, links));

    auto plan = sentence_clip_plan(s);
    for (std::size_t k = 0; k < plan.size(); ++k) {
      CHECK(plan[k].sentence_index == static_cast<int>(k));
      CHECK(plan[k].t_start < plan[k].t_end);
      if (k) CHECK(plan[k - 1].t_end <= plan[k].t_start);
    }
  }
}

TEST_CASE("timing model limits") {
  Document d = single("Hi there.");
  auto with = [&](TimingConfig c) {
    return compile_script(d, segment_sentences(d), {}, MockTiming(c), {});
  };
  TimingConfig abut;
  abut.inter_word_gap_ms = 0;
  auto speaks = all_of_type<SpeakSpan>(with(abut));
  REQUIRE(speaks.size() == 2);
  CHECK(speaks[1].t_start == speaks[0].t_end);

  TimingConfig negative;
  negative.inter_sentence_pause_ms = -1;
  CHECK_THROWS_AS(with(negative), CompileError);
  TimingConfig silent;
  silent.warning_duration_ms = 0;
  CHECK_THROWS_AS(with(silent), CompileError);
}
