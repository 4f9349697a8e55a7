// Compiled bundle: the manifest (document, links, keyphrases, script) and
// the on-disk directory around it.
#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "eyesfree/docmodel.h"
#include "eyesfree/narrator.h"

namespace eyesfree {

inline constexpr int kBundleVersion = 1;
inline constexpr std::string_view kBundleFormat = "eyesfree-bundle";

struct Bundle {
  Document document;
  std::vector<Link> links;
  std::vector<Keyphrase> keyphrases;
  ReadingScript script;

  friend bool operator==(const Bundle&, const Bundle&) = default;
};

// Malformed manifest. offset() is the byte position of a syntax error and
// empty for well-formed JSON that does not match the schema.
class BundleFormatError : public std::runtime_error {
 public:
  BundleFormatError(const std::string& what, std::optional<std::size_t> offset)
      : std::runtime_error(what), offset_(offset) {}
  std::optional<std::size_t> offset() const { return offset_; }

 private:
  std::optional<std::size_t> offset_;
};

class BundleVersionError : public std::runtime_error {
 public:
  BundleVersionError(const std::string& what, int found)
      : std::runtime_error(what), found_(found) {}
  int found() const { return found_; }

 private:
  int found_;
};

// Byte-deterministic manifest encoding. The document must be valid.
std::string write_bundle(const Bundle& bundle);
Bundle read_bundle(std::string_view bytes);

struct BundleLayout {
  static constexpr const char* kManifest = "manifest.json";
  static constexpr const char* kThumbnail = "thumb.png";
  static std::string page_image(int page) { return "page-" + std::to_string(page) + ".png"; }
  static std::string audio_clip(int sentence) { return "audio/" + std::to_string(sentence); }
};

struct RasterOptions {
  double page_scale = 0.5;  // pixels per page unit
  int thumbnail_max = 96;   // longest thumbnail side in pixels
};

// Writes manifest, placeholder thumbnail, page rasters and per-sentence
// audio clips into dir (created if missing). Returns the relative paths
// written, in write order.
std::vector<std::string> write_bundle_dir(const std::filesystem::path& dir, const Bundle& bundle,
                                          const RasterOptions& options = {});

Bundle read_bundle_dir(const std::filesystem::path& dir);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace eyesfree
