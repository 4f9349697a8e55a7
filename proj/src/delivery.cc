#include "eyesfree/delivery.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdlib>
#include <future>

#include "json.hpp"

namespace eyesfree {

using json = nlohmann::ordered_json;

std::vector<FetchItem> document_items(const DocSummary& doc) {
  std::vector<FetchItem> items;
  items.push_back({FetchKind::kDocMeta, doc.id, 0, PriorityClass::kDocMeta});
  items.push_back({FetchKind::kThumbnail, doc.id, 0, PriorityClass::kThumbnail});
  for (int p = 0; p < doc.page_count; ++p) {
    items.push_back({FetchKind::kPageImage, doc.id, p, PriorityClass::kOtherPageImage});
  }
  for (int s = 0; s < static_cast<int>(doc.sentence_pages.size()); ++s) {
    items.push_back({FetchKind::kAudioClip, doc.id, s, PriorityClass::kFarAudio});
  }
  return items;
}

FetchPlan plan_fetches(const PlanInput& input) {
  FetchPlan plan;
  auto missing = [&](const FetchItem& item) { return !input.already_fetched.count(item); };

  if (!input.doc_meta_known) {
    FetchItem listing{FetchKind::kDocMeta, "", 0, PriorityClass::kDocMeta};
    if (missing(listing)) plan.push_back(listing);
    return plan;
  }

  if (!input.opened_doc) {
    // Stable sort keeps catalog order within each class.
    for (const DocSummary& doc : input.docs) {
      for (FetchItem item : {FetchItem{FetchKind::kDocMeta, doc.id, 0, PriorityClass::kDocMeta},
                             FetchItem{FetchKind::kThumbnail, doc.id, 0, PriorityClass::kThumbnail}}) {
        if (missing(item)) plan.push_back(item);
      }
    }
    std::stable_sort(plan.begin(), plan.end(), [](const FetchItem& a, const FetchItem& b) {
      return a.priority < b.priority;
    });
    return plan;
  }

  auto doc = std::find_if(input.docs.begin(), input.docs.end(),
                          [&](const DocSummary& d) { return d.id == *input.opened_doc; });
  if (doc == input.docs.end()) {
    throw std::invalid_argument("plan_fetches: unknown document " + *input.opened_doc);
  }
  const Cursor& cursor = input.cursor;
  const int sentences = static_cast<int>(doc->sentence_pages.size());
  if (cursor.page < 0 || cursor.page >= std::max(1, doc->page_count) || cursor.sentence < 0 ||
      (sentences > 0 && cursor.sentence >= sentences)) {
    throw std::invalid_argument("plan_fetches: cursor outside document " + doc->id);
  }

  std::vector<std::pair<int, FetchItem>> ranked;  // (distance, item)
  for (FetchItem item : document_items(*doc)) {
    if (!missing(item)) continue;
    int distance = 0;
    if (item.kind == FetchKind::kPageImage) {
      distance = std::abs(item.index - cursor.page);
      item.priority =
          distance == 0 ? PriorityClass::kCurrentPageImage : PriorityClass::kOtherPageImage;
    } else if (item.kind == FetchKind::kAudioClip) {
      distance = std::abs(item.index - cursor.sentence);
      item.priority = doc->sentence_pages[item.index] == cursor.page ? PriorityClass::kNearAudio
                                                                     : PriorityClass::kFarAudio;
    }
    ranked.emplace_back(distance, item);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return std::make_tuple(a.second.priority, a.first, a.second.index) <
           std::make_tuple(b.second.priority, b.first, b.second.index);
  });
  for (auto& [distance, item] : ranked) plan.push_back(std::move(item));
  return plan;
}

std::string resource_path(const FetchItem& item) {
  if (item.kind == FetchKind::kDocMeta && item.doc_id.empty()) return "/docs";
  const std::string base = "/docs/" + item.doc_id;
  switch (item.kind) {
    case FetchKind::kDocMeta:
      return base + "/meta";
    case FetchKind::kThumbnail:
      return base + "/thumb";
    case FetchKind::kPageImage:
      return base + "/pages/" + std::to_string(item.index) + "/image";
    case FetchKind::kAudioClip:
      return base + "/audio/" + std::to_string(item.index);
  }
  return base;
}

DocSummary summarize_bundle(const Bundle& bundle) {
  DocSummary doc;
  doc.id = bundle.document.id;
  doc.title = bundle.document.title;
  doc.page_count = static_cast<int>(bundle.document.pages.size());
  doc.sentence_pages.assign(
      std::count_if(bundle.script.events.begin(), bundle.script.events.end(),
                    [](const ScriptEvent& e) { return std::holds_alternative<SentenceBoundary>(e); }),
      0);
  // Page of each sentence comes from its first spoken word.
  for (const ScriptEvent& e : bundle.script.events) {
    if (const auto* s = std::get_if<SpeakSpan>(&e)) {
      if (const Region* r = bundle.document.find_region(s->span.region_id)) {
        if (s->sentence_index < static_cast<int>(doc.sentence_pages.size())) {
          doc.sentence_pages[s->sentence_index] = r->page_index;
        }
      }
    }
  }
  return doc;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

namespace {

json catalog_json(const std::vector<DocSummary>& docs) {
  json list = json::array();
  for (const DocSummary& d : docs) {
    list.push_back(json{{"id", d.id},
                        {"title", d.title},
                        {"pages", d.page_count},
                        {"sentence_pages", d.sentence_pages}});
  }
  return json{{"version", kBundleVersion}, {"documents", std::move(list)}};
}

std::vector<DocSummary> catalog_from(const std::string& body) {
  std::vector<DocSummary> docs;
  json root = json::parse(body);
  for (const json& d : root.at("documents")) {
    docs.push_back({d.at("id").get<std::string>(), d.at("title").get<std::string>(),
                    d.at("pages").get<int>(), d.at("sentence_pages").get<std::vector<int>>()});
  }
  return docs;
}

BundleStore::Resource make_resource(std::string body, std::string type) {
  std::string etag = "\"" + sha256_hex(body) + "\"";
  return {std::move(body), std::move(type), std::move(etag)};
}

}  // namespace

BundleStore BundleStore::load(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw std::runtime_error("bundle root " + root.string() + " is not a directory");

  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / BundleLayout::kManifest)) {
      dirs.push_back(entry.path());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty()) throw std::runtime_error("no bundles under " + root.string());

  BundleStore store;
  for (const fs::path& dir : dirs) {
    const std::string name = dir.filename().string();
    try {
      std::string manifest = read_file(dir / BundleLayout::kManifest);
      Bundle bundle = read_bundle(manifest);
      DocSummary doc = summarize_bundle(bundle);
      const std::string base = "/docs/" + doc.id;
      if (store.resources_.count(base + "/meta")) {
        throw std::runtime_error("duplicate document id " + doc.id);
      }
      store.resources_[base + "/meta"] = make_resource(std::move(manifest), "application/json");
      store.resources_[base + "/thumb"] =
          make_resource(read_file(dir / BundleLayout::kThumbnail), "image/png");
      for (int p = 0; p < doc.page_count; ++p) {
        store.resources_[base + "/pages/" + std::to_string(p) + "/image"] =
            make_resource(read_file(dir / BundleLayout::page_image(p)), "image/png");
      }
      for (int s = 0; s < static_cast<int>(doc.sentence_pages.size()); ++s) {
        store.resources_[base + "/audio/" + std::to_string(s)] =
            make_resource(read_file(dir / BundleLayout::audio_clip(s)), "audio/wav");
      }
      store.docs_.push_back(std::move(doc));
    } catch (const std::exception& e) {
      throw std::runtime_error("bundle " + name + ": " + e.what());
    }
  }
  std::sort(store.docs_.begin(), store.docs_.end(),
            [](const DocSummary& a, const DocSummary& b) { return a.id < b.id; });
  store.resources_["/docs"] = make_resource(catalog_json(store.docs_).dump(), "application/json");
  return store;
}

const BundleStore::Resource* BundleStore::find(const std::string& path) const {
  auto it = resources_.find(path);
  return it == resources_.end() ? nullptr : &it->second;
}

ProgressiveClient::ProgressiveClient(std::string host, int port, int max_in_flight)
    : host_(std::move(host)), port_(port), max_in_flight_(std::max(1, max_in_flight)) {}

const std::string* ProgressiveClient::body(const FetchItem& item) const {
  auto it = bodies_.find(item);
  return it == bodies_.end() ? nullptr : &it->second;
}

void ProgressiveClient::sync(const std::optional<std::string>& opened_doc, Cursor cursor,
                             const std::function<void(const FetchItem&)>& on_fetched) {
  for (;;) {
    PlanInput input{catalog_known_, catalog_, opened_doc, cursor, fetched_};
    FetchPlan plan = plan_fetches(input);
    if (plan.empty()) return;

    // The head of the plan, up to the in-flight limit, goes out together;
    // the remainder is replanned once the batch lands.
    const std::size_t batch = std::min<std::size_t>(plan.size(), max_in_flight_);
    std::vector<std::future<std::string>> pending;
    for (std::size_t i = 0; i < batch; ++i) {
      issued_.push_back(plan[i]);
      pending.push_back(std::async(std::launch::async,
                                   [this, path = resource_path(plan[i])] { return get(path); }));
    }
    for (std::size_t i = 0; i < batch; ++i) {
      std::string body = pending[i].get();
      const FetchItem& item = plan[i];
      if (item.kind == FetchKind::kDocMeta && item.doc_id.empty()) {
        catalog_ = catalog_from(body);
        catalog_known_ = true;
      }
      fetched_.insert(item);
      bodies_[item] = std::move(body);
      if (on_fetched) on_fetched(item);
    }
  }
}

}  // namespace eyesfree
