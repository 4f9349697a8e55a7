#include <algorithm>
#include <filesystem>

#include "doctest.h"
#include "eyesfree/delivery.h"
#include "eyesfree/pipeline.h"
#include "generators.h"
#include "httplib.h"
#include "json.hpp"
#include "oracles.h"

using namespace eyesfree;
namespace fs = std::filesystem;

namespace {

DocSummary doc(std::string id, int pages, std::vector<int> sentence_pages) {
  return {std::move(id), "T", pages, std::move(sentence_pages)};
}

// Compiles the fixture corpus once into a scratch bundle root.
const fs::path& bundle_root() {
  static const fs::path root = [] {
    fs::path r = testing::scratch_dir("delivery-root");
    for (const char* name : {"alpha", "beta", "gamma"}) {
      compile_layout(testing::fixture_path(std::string("corpus/") + name + ".layout.json"), r / name);
    }
    return r;
  }();
  return root;
}

bool classes_sorted(const FetchPlan& plan) {
  return std::is_sorted(plan.begin(), plan.end(), [](const FetchItem& a, const FetchItem& b) {
    return a.priority < b.priority;
  });
}

}  // namespace

TEST_CASE("fresh start fetches the catalog listing first") {
  FetchPlan plan = plan_fetches({});
  REQUIRE(plan.size() == 1);
  CHECK(plan[0].kind == FetchKind::kDocMeta);
  CHECK(resource_path(plan[0]) == "/docs");
}

TEST_CASE("document view wants every meta and thumbnail, metas first") {
  PlanInput in;
  in.doc_meta_known = true;
  in.docs = {doc("a", 2, {0}), doc("b", 1, {0, 0})};
  FetchPlan plan = plan_fetches(in);
  REQUIRE(plan.size() == 4);
  CHECK(resource_path(plan[0]) == "/docs/a/meta");
  CHECK(resource_path(plan[1]) == "/docs/b/meta");
  CHECK(resource_path(plan[2]) == "/docs/a/thumb");
  CHECK(resource_path(plan[3]) == "/docs/b/thumb");
}

TEST_CASE("opened document: current page image before any audio") {
  PlanInput in;
  in.doc_meta_known = true;
  in.docs = {doc("a", 3, {0, 0, 1, 1, 2, 2})};
  in.opened_doc = "a";
  in.cursor = {1, 2};
  in.already_fetched = {{FetchKind::kDocMeta, "a", 0, {}}, {FetchKind::kThumbnail, "a", 0, {}}};
  FetchPlan plan = plan_fetches(in);
  std::vector<std::string> paths;
  for (const FetchItem& i : plan) paths.push_back(resource_path(i));
  CHECK(paths == std::vector<std::string>{
                     "/docs/a/pages/1/image", "/docs/a/pages/0/image", "/docs/a/pages/2/image",
                     "/docs/a/audio/2", "/docs/a/audio/3", "/docs/a/audio/1", "/docs/a/audio/0",
                     "/docs/a/audio/4", "/docs/a/audio/5"});
  CHECK(plan[3].priority == PriorityClass::kNearAudio);
  CHECK(plan[5].priority == PriorityClass::kFarAudio);
}

TEST_CASE("everything fetched means an empty plan") {
  PlanInput in;
  in.doc_meta_known = true;
  DocSummary d = doc("a", 1, {0});
  in.docs = {d};
  in.opened_doc = "a";
  for (const FetchItem& i : document_items(d)) in.already_fetched.insert(i);
  CHECK(plan_fetches(in).empty());
}

TEST_CASE("planner rejects an unknown document or cursor") {
  PlanInput in;
  in.doc_meta_known = true;
  in.docs = {doc("a", 1, {0})};
  in.opened_doc = "b";
  CHECK_THROWS_AS(plan_fetches(in), std::invalid_argument);
  in.opened_doc = "a";
  in.cursor = {1, 0};
  CHECK_THROWS_AS(plan_fetches(in), std::invalid_argument);
}

TEST_CASE("property: plans are ordered, complete and distance-sorted within a class") {
  testing::Rng rng(81);
  for (int i = 0; i < 2000; ++i) {
    PlanInput in;
    in.doc_meta_known = testing::chance(rng, 0.9);
    const int docs = testing::uniform_int(rng, 1, 3);
    for (int d = 0; d < docs; ++d) {
      const int pages = testing::uniform_int(rng, 1, 5);
      std::vector<int> sp;
      for (int p = 0; p < pages; ++p) {
        for (int k = testing::uniform_int(rng, 0, 4); k > 0; --k) sp.push_back(p);
      }
      in.docs.push_back(doc("d" + std::to_string(d), pages, sp));
    }
    const DocSummary& open = testing::pick(rng, in.docs);
    if (in.doc_meta_known && testing::chance(rng, 0.7)) {
      in.opened_doc = open.id;
      in.cursor.page = testing::uniform_int(rng, 0, open.page_count - 1);
      in.cursor.sentence = open.sentence_pages.empty()
                               ? 0
                               : testing::uniform_int(rng, 0, static_cast<int>(open.sentence_pages.size()) - 1);
    }
    std::set<FetchItem> scope;
    if (!in.doc_meta_known) {
      scope.insert({FetchKind::kDocMeta, "", 0, {}});
    } else if (!in.opened_doc) {
      for (const DocSummary& d : in.docs) {
        scope.insert({FetchKind::kDocMeta, d.id, 0, {}});
        scope.insert({FetchKind::kThumbnail, d.id, 0, {}});
      }
    } else {
      for (int p = 0; p < open.page_count; ++p) scope.insert({FetchKind::kPageImage, open.id, p, {}});
      for (int s = 0; s < static_cast<int>(open.sentence_pages.size()); ++s) {
        scope.insert({FetchKind::kAudioClip, open.id, s, {}});
      }
      scope.insert({FetchKind::kDocMeta, open.id, 0, {}});
      scope.insert({FetchKind::kThumbnail, open.id, 0, {}});
    }
    for (const FetchItem& item : scope) {
      if (testing::chance(rng, 0.4)) in.already_fetched.insert(item);
    }

    FetchPlan plan = plan_fetches(in);
    CHECK(classes_sorted(plan));
    std::set<FetchItem> covered = in.already_fetched;
    for (const FetchItem& item : plan) {
      CHECK(!in.already_fetched.count(item));
      CHECK(covered.insert(item).second);
    }
    CHECK(covered == scope);

    if (in.opened_doc) {
      for (std::size_t k = 1; k < plan.size(); ++k) {
        const FetchItem& a = plan[k - 1];
        const FetchItem& b = plan[k];
        if (a.priority != b.priority || a.kind != b.kind || a.kind == FetchKind::kDocMeta ||
            a.kind == FetchKind::kThumbnail) {
          continue;
        }
        const int origin = a.kind == FetchKind::kPageImage ? in.cursor.page : in.cursor.sentence;
        CHECK(std::abs(a.index - origin) <= std::abs(b.index - origin));
      }
      for (const FetchItem& item : plan) {
        if (item.kind == FetchKind::kAudioClip) {
          const bool near = open.sentence_pages[static_cast<std::size_t>(item.index)] == in.cursor.page;
          CHECK((item.priority == PriorityClass::kNearAudio) == near);
        }
      }
    }
  }
}

TEST_CASE("sha256 and resource paths") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(resource_path({FetchKind::kPageImage, "x", 3, {}}) == "/docs/x/pages/3/image");
  CHECK(resource_path({FetchKind::kAudioClip, "x", 7, {}}) == "/docs/x/audio/7");
}

TEST_CASE("store: listing, resources and validators") {
  BundleStore store = BundleStore::load(bundle_root());
  REQUIRE(store.documents().size() == 3);
  CHECK(store.documents()[0].id == "alpha");
  CHECK(store.documents()[0].page_count == 2);

  const auto* listing = store.find("/docs");
  REQUIRE(listing);
  auto j = nlohmann::json::parse(listing->body);
  CHECK(j.at("documents").size() == 3);
  CHECK(j.at("documents")[1].at("title") == "A Wheel for Scrubbing Speech");

  const auto* image = store.find("/docs/alpha/pages/1/image");
  REQUIRE(image);
  CHECK(image->body == testing::slurp(bundle_root() / "alpha" / "page-1.png"));
  CHECK(image->etag == "\"" + sha256_hex(image->body) + "\"");
  CHECK(image->content_type == "image/png");
  CHECK(!store.find("/docs/alpha/pages/2/image"));
  CHECK(!store.find("/docs/nope/meta"));
}

TEST_CASE("store: corrupt or missing bundles fail naming the bundle") {
  fs::path root = testing::scratch_dir("delivery-bad");
  CHECK_THROWS_AS(BundleStore::load(root), std::runtime_error);
  fs::copy(bundle_root() / "beta", root / "beta", fs::copy_options::recursive);
  CHECK_NOTHROW(BundleStore::load(root));

  fs::copy(bundle_root() / "beta", root / "zz-copy", fs::copy_options::recursive);
  CHECK_THROWS_WITH(BundleStore::load(root), doctest::Contains("zz-copy"));
  fs::remove_all(root / "zz-copy");

  fs::copy(bundle_root() / "gamma", root / "gamma", fs::copy_options::recursive);
  std::string manifest = testing::slurp(root / "gamma" / "manifest.json");
  write_file(root / "gamma" / "manifest.json", manifest.substr(0, manifest.size() / 2));
  CHECK_THROWS_WITH(BundleStore::load(root), doctest::Contains("bundle gamma"));

  write_file(root / "gamma" / "manifest.json", manifest);
  fs::remove(root / "gamma" / "audio" / "0");
  CHECK_THROWS_WITH(BundleStore::load(root), doctest::Contains("bundle gamma"));
}

TEST_CASE("server: endpoints, validators and not-found") {
  BundleServer server(BundleStore::load(bundle_root()));
  const int port = server.start("127.0.0.1", 0);
  REQUIRE(port > 0);
  httplib::Client client("127.0.0.1", port);

  auto listing = client.Get("/docs");
  REQUIRE(listing);
  CHECK(listing->status == 200);
  CHECK(listing->get_header_value("Content-Type") == "application/json");

  auto image = client.Get("/docs/beta/pages/0/image");
  REQUIRE(image);
  CHECK(image->status == 200);
  CHECK(image->body == testing::slurp(bundle_root() / "beta" / "page-0.png"));
  const std::string etag = image->get_header_value("ETag");
  CHECK(etag == "\"" + sha256_hex(image->body) + "\"");

  auto again = client.Get("/docs/beta/pages/0/image", {{"If-None-Match", etag}});
  REQUIRE(again);
  CHECK(again->status == 304);
  CHECK(again->body.empty());

  auto meta = client.Get("/docs/gamma/meta");
  REQUIRE(meta);
  CHECK(read_bundle(meta->body).document.id == "gamma");

  auto missing = client.Get("/docs/zeta/meta");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  auto post = client.Post("/docs", "x", "text/plain");
  REQUIRE(post);
  CHECK(post->status != 200);
  server.stop();
}

TEST_CASE("progressive client follows the plan order") {
  BundleServer server(BundleStore::load(bundle_root()));
  const int port = server.start("127.0.0.1", 0);
  ProgressiveClient client("127.0.0.1", port, 2);

  client.sync(std::nullopt, {});
  REQUIRE(!client.issued().empty());
  CHECK(resource_path(client.issued()[0]) == "/docs");
  CHECK(client.catalog().size() == 3);
  // 1 listing + 3 metas + 3 thumbnails.
  CHECK(client.issued().size() == 7);
  CHECK(std::is_sorted(client.issued().begin() + 1, client.issued().end(),
                       [](const FetchItem& a, const FetchItem& b) { return a.priority < b.priority; }));

  const std::size_t before = client.issued().size();
  client.sync(std::string("alpha"), {1, 9});
  std::vector<FetchItem> opened(client.issued().begin() + static_cast<long>(before), client.issued().end());
  REQUIRE(!opened.empty());
  CHECK(opened[0].kind == FetchKind::kPageImage);
  CHECK(opened[0].index == 1);
  CHECK(std::is_sorted(opened.begin(), opened.end(),
                       [](const FetchItem& a, const FetchItem& b) { return a.priority < b.priority; }));
  for (const FetchItem& item : opened) {
    if (item.kind == FetchKind::kAudioClip) {
      CHECK(*client.body(item) ==
            testing::slurp(bundle_root() / "alpha" / BundleLayout::audio_clip(item.index)));
    }
  }
  server.stop();
}
