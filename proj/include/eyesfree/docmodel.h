// Layout model shared by every stage: pages, typed regions, links and
// keyphrases, plus the structural checker.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eyesfree {

// Page units are abstract points, origin at the top-left, y grows downward.
struct BoundingBox {
  double x = 0;
  double y = 0;
  double w = 0;
  double h = 0;

  double right() const { return x + w; }
  double bottom() const { return y + h; }
  double center_x() const { return x + w / 2; }
  double center_y() const { return y + h / 2; }
  bool contains(double px, double py) const {
    return px >= x && px <= right() && py >= y && py <= bottom();
  }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

enum class RegionKind {
  kParagraph,
  kFigure,
  kTable,
  kCaption,
  kHeading,
  kFootnote,
  kReferenceEntry,
  kOther,
};

std::string_view to_string(RegionKind kind);
std::optional<RegionKind> region_kind_from_string(std::string_view name);

// Regions whose text is narrated and therefore listed in the reading order.
bool is_text_bearing(RegionKind kind);

struct Region {
  std::string id;
  int page_index = 0;
  BoundingBox bbox;
  RegionKind kind = RegionKind::kParagraph;
  std::string text;
  std::optional<double> ocr_confidence;

  friend bool operator==(const Region&, const Region&) = default;
};

struct Page {
  int index = 0;
  double width = 0;
  double height = 0;
  std::vector<Region> regions;

  friend bool operator==(const Page&, const Page&) = default;
};

enum class SourceKind { kDigital, kScanned };

std::string_view to_string(SourceKind kind);
std::optional<SourceKind> source_kind_from_string(std::string_view name);

struct Document {
  std::string id;
  std::string title;
  SourceKind source_kind = SourceKind::kDigital;
  std::vector<Page> pages;
  std::vector<std::string> reading_order;

  // Linear scan; documents are small.
  const Region* find_region(std::string_view region_id) const;

  friend bool operator==(const Document&, const Document&) = default;
};

// Half-open byte range [char_start, char_end) into a region's UTF-8 text.
struct TextSpan {
  std::string region_id;
  std::size_t char_start = 0;
  std::size_t char_end = 0;

  friend bool operator==(const TextSpan&, const TextSpan&) = default;
};

enum class LinkKind { kFigureRef, kTableRef, kSectionRef, kCitation };

std::string_view to_string(LinkKind kind);
std::optional<LinkKind> link_kind_from_string(std::string_view name);

struct Link {
  std::string id;
  TextSpan source;
  std::string target_region;
  LinkKind kind = LinkKind::kFigureRef;
  std::string label;
  double confidence = 1.0;

  friend bool operator==(const Link&, const Link&) = default;
};

struct Keyphrase {
  std::string region_id;
  std::string phrase;
  double score = 0;

  friend bool operator==(const Keyphrase&, const Keyphrase&) = default;
};

struct Violation {
  std::string where;  // "region r3", "page 1", "reading_order", ...
  std::string rule;

  friend bool operator==(const Violation&, const Violation&) = default;
};

std::string to_string(const Violation& v);

// Checks every structural invariant of the layout model. Never throws on
// well-typed input; an empty result means the document is valid.
std::vector<Violation> validate(const Document& document);

// Checks links and keyphrases against the document they belong to.
std::vector<Violation> validate_links(const Document& document,
                                      const std::vector<Link>& links);
std::vector<Violation> validate_keyphrases(
    const Document& document, const std::vector<Keyphrase>& keyphrases);

}  // namespace eyesfree
