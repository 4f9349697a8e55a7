// Progressive delivery: the client's fetch planner, the read-only bundle
// service and a fetch loop that consumes plans against it.
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "eyesfree/bundle.h"

namespace eyesfree {

enum class FetchKind { kDocMeta, kThumbnail, kPageImage, kAudioClip };

// Lower value is fetched first.
enum class PriorityClass {
  kDocMeta = 0,
  kThumbnail = 1,
  kCurrentPageImage = 2,
  kOtherPageImage = 3,
  kNearAudio = 4,
  kFarAudio = 5,
};

struct FetchItem {
  FetchKind kind = FetchKind::kDocMeta;
  std::string doc_id;
  int index = 0;  // page for page images, sentence for audio clips, else 0
  PriorityClass priority = PriorityClass::kDocMeta;

  // Identity ignores the priority, which depends on the cursor.
  auto key() const { return std::tie(kind, doc_id, index); }
  bool operator<(const FetchItem& other) const { return key() < other.key(); }
  bool operator==(const FetchItem& other) const { return key() == other.key(); }
};

// What the client knows about one document from the catalog listing.
struct DocSummary {
  std::string id;
  std::string title;
  int page_count = 0;
  std::vector<int> sentence_pages;  // page of each sentence
};

struct Cursor {
  int page = 0;
  int sentence = 0;
};

struct PlanInput {
  bool doc_meta_known = false;  // catalog listing fetched
  std::vector<DocSummary> docs;
  std::optional<std::string> opened_doc;
  Cursor cursor;
  std::set<FetchItem> already_fetched;
};

using FetchPlan = std::vector<FetchItem>;

// Items still missing, best first. Without the catalog the only item is the
// listing itself (a DocMeta with an empty doc id). With no document open the
// scope is every DocMeta and Thumbnail; otherwise it is every item of the
// opened document.
FetchPlan plan_fetches(const PlanInput& input);

// Every item that makes up one document.
std::vector<FetchItem> document_items(const DocSummary& doc);

std::string resource_path(const FetchItem& item);

DocSummary summarize_bundle(const Bundle& bundle);

// Loaded, immutable view of a directory of bundles.
class BundleStore {
 public:
  struct Resource {
    std::string body;
    std::string content_type;
    std::string etag;  // quoted SHA-256 of body
  };

  // Every subdirectory holding a manifest is a bundle. Throws
  // std::runtime_error naming the bundle on a missing or corrupt one.
  static BundleStore load(const std::filesystem::path& root);

  const std::vector<DocSummary>& documents() const { return docs_; }

  // Resource for an endpoint path, or nullptr when there is none.
  const Resource* find(const std::string& path) const;

 private:
  std::vector<DocSummary> docs_;
  std::map<std::string, Resource> resources_;
};

std::string sha256_hex(std::string_view bytes);

struct ServerConfig {
  std::string address = "127.0.0.1";
  int port = 8080;
};

// HTTP front for a BundleStore. Endpoints:
//   GET /docs, /docs/{id}/meta, /docs/{id}/thumb,
//   /docs/{id}/pages/{n}/image, /docs/{id}/audio/{sentence}
class BundleServer {
 public:
  explicit BundleServer(BundleStore store);
  ~BundleServer();
  BundleServer(const BundleServer&) = delete;
  BundleServer& operator=(const BundleServer&) = delete;

  // Binds (port 0 picks a free port) and serves on a background thread.
  // Returns the bound port.
  int start(const std::string& address, int port);
  // Serves on the calling thread until stop().
  void listen(const std::string& address, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Client side: consumes plans in order with bounded concurrency.
class ProgressiveClient {
 public:
  ProgressiveClient(std::string host, int port, int max_in_flight = 2);

  // Fetches everything plan_fetches asks for at the given cursor, replanning
  // as the catalog arrives. on_fetched sees items in completion order.
  void sync(const std::optional<std::string>& opened_doc, Cursor cursor,
            const std::function<void(const FetchItem&)>& on_fetched = {});

  const std::set<FetchItem>& fetched() const { return fetched_; }
  const std::vector<DocSummary>& catalog() const { return catalog_; }
  const std::string* body(const FetchItem& item) const;
  // Request issue order, for checking the priority contract.
  const std::vector<FetchItem>& issued() const { return issued_; }

 private:
  std::string get(const std::string& path) const;

  std::string host_;
  int port_;
  int max_in_flight_;
  bool catalog_known_ = false;
  std::vector<DocSummary> catalog_;
  std::set<FetchItem> fetched_;
  std::map<FetchItem, std::string> bodies_;
  std::vector<FetchItem> issued_;
};

}  // namespace eyesfree
