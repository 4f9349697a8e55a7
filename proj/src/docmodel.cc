#include "eyesfree/docmodel.h"

#include <array>
#include <map>
#include <set>
#include <utility>

#include "eyesfree/text.h"

namespace eyesfree {

namespace {

constexpr std::array<std::pair<RegionKind, std::string_view>, 8> kRegionKinds{{
    {RegionKind::kParagraph, "paragraph"},
    {RegionKind::kFigure, "figure"},
    {RegionKind::kTable, "table"},
    {RegionKind::kCaption, "caption"},
    {RegionKind::kHeading, "heading"},
    {RegionKind::kFootnote, "footnote"},
    {RegionKind::kReferenceEntry, "reference_entry"},
    {RegionKind::kOther, "other"},
}};

constexpr std::array<std::pair<LinkKind, std::string_view>, 4> kLinkKinds{{
    {LinkKind::kFigureRef, "figure_ref"},
    {LinkKind::kTableRef, "table_ref"},
    {LinkKind::kSectionRef, "section_ref"},
    {LinkKind::kCitation, "citation"},
}};

template <typename Enum, std::size_t N>
std::string_view name_of(const std::array<std::pair<Enum, std::string_view>, N>& table,
                         Enum value) {
  for (const auto& [e, name] : table) {
    if (e == value) return name;
  }
  return "?";
}

template <typename Enum, std::size_t N>
std::optional<Enum> value_of(const std::array<std::pair<Enum, std::string_view>, N>& table,
                             std::string_view name) {
  for (const auto& [e, n] : table) {
    if (n == name) return e;
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(RegionKind kind) { return name_of(kRegionKinds, kind); }

std::optional<RegionKind> region_kind_from_string(std::string_view name) {
  return value_of(kRegionKinds, name);
}

bool is_text_bearing(RegionKind kind) {
  switch (kind) {
    case RegionKind::kParagraph:
    case RegionKind::kCaption:
    case RegionKind::kHeading:
    case RegionKind::kFootnote:
    case RegionKind::kReferenceEntry:
      return true;
    case RegionKind::kFigure:
    case RegionKind::kTable:
    case RegionKind::kOther:
      return false;
  }
  return false;
}

std::string_view to_string(SourceKind kind) {
  return kind == SourceKind::kScanned ? "scanned" : "digital";
}

std::optional<SourceKind> source_kind_from_string(std::string_view name) {
  if (name == "digital") return SourceKind::kDigital;
  if (name == "scanned") return SourceKind::kScanned;
  return std::nullopt;
}

std::string_view to_string(LinkKind kind) { return name_of(kLinkKinds, kind); }

std::optional<LinkKind> link_kind_from_string(std::string_view name) {
  return value_of(kLinkKinds, name);
}

const Region* Document::find_region(std::string_view region_id) const {
  for (const Page& page : pages) {
    for (const Region& region : page.regions) {
      if (region.id == region_id) return &region;
    }
  }
  return nullptr;
}

std::string to_string(const Violation& v) { return v.where + ": " + v.rule; }

std::vector<Violation> validate(const Document& document) {
  std::vector<Violation> out;
  auto fail = [&out](std::string where, std::string rule) {
    out.push_back({std::move(where), std::move(rule)});
  };

  std::map<std::string, const Region*> by_id;
  for (std::size_t p = 0; p < document.pages.size(); ++p) {
    const Page& page = document.pages[p];
    const std::string page_name = "page " + std::to_string(p);
    if (page.index != static_cast<int>(p)) fail(page_name, "index contiguous from 0");
    if (!(page.width > 0)) fail(page_name, "width > 0");
    if (!(page.height > 0)) fail(page_name, "height > 0");

    for (const Region& region : page.regions) {
      const std::string name = "region " + region.id;
      if (region.id.empty()) fail(page_name, "region id non-empty");
      if (!by_id.emplace(region.id, &region).second) fail(name, "id unique within document");
      if (region.page_index != page.index) fail(name, "page_index matches page");

      const BoundingBox& b = region.bbox;
      if (!(b.w > 0)) fail(name, "w > 0");
      if (!(b.h > 0)) fail(name, "h > 0");
      if (!(b.x >= 0)) fail(name, "x >= 0");
      if (!(b.y >= 0)) fail(name, "y >= 0");
      if (!(b.x + b.w <= page.width)) fail(name, "x+w <= page.width");
      if (!(b.y + b.h <= page.height)) fail(name, "y+h <= page.height");

      if (region.ocr_confidence) {
        if (document.source_kind != SourceKind::kScanned) {
          fail(name, "ocr_confidence only in scanned documents");
        }
        double c = *region.ocr_confidence;
        if (!(c >= 0 && c <= 1)) fail(name, "ocr_confidence in [0,1]");
      }
    }
  }

  std::map<std::string, int> seen;
  for (const std::string& id : document.reading_order) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      fail("reading_order", "unknown region " + id);
      continue;
    }
    if (!is_text_bearing(it->second->kind)) {
      fail("reading_order", std::string(to_string(it->second->kind)) + " region " + id +
                                " is not text-bearing");
    }
    ++seen[id];
  }
  for (const auto& [id, region] : by_id) {
    if (!is_text_bearing(region->kind)) continue;
    auto it = seen.find(id);
    int count = it == seen.end() ? 0 : it->second;
    if (count != 1) {
      fail("reading_order", "region " + id + " listed " + std::to_string(count) +
                                " times, expected exactly once");
    }
  }
  return out;
}

std::vector<Violation> validate_links(const Document& document,
                                      const std::vector<Link>& links) {
  std::vector<Violation> out;
  std::set<std::string> ids;
  for (const Link& link : links) {
    const std::string name = "link " + link.id;
    if (!ids.insert(link.id).second) out.push_back({name, "id unique"});
    const Region* source = document.find_region(link.source.region_id);
    if (!source) {
      out.push_back({name, "source region exists"});
    } else if (!(link.source.char_start < link.source.char_end &&
                 link.source.char_end <= source->text.size())) {
      out.push_back({name, "0 <= char_start < char_end <= text length"});
    }
    if (!document.find_region(link.target_region)) out.push_back({name, "target exists"});
    if (link.source.region_id == link.target_region) {
      out.push_back({name, "source region != target region"});
    }
    if (link.label.empty()) out.push_back({name, "label non-empty"});
    if (!(link.confidence > 0 && link.confidence <= 1)) {
      out.push_back({name, "confidence in (0,1]"});
    }
  }
  return out;
}

std::vector<Violation> validate_keyphrases(const Document& document,
                                           const std::vector<Keyphrase>& keyphrases) {
  std::vector<Violation> out;
  for (const Keyphrase& k : keyphrases) {
    const std::string name = "keyphrase of " + k.region_id;
    const Region* region = document.find_region(k.region_id);
    if (!region) {
      out.push_back({name, "region exists"});
      continue;
    }
    std::size_t words = text::alnum_tokens(k.phrase).size();
    if (words < 1 || words > 4) out.push_back({name, "phrase has 1-4 words"});
    if (!(k.score >= 0)) out.push_back({name, "score >= 0"});

    // Contiguous token-wise substring: the phrase occurs in the text and
    // neither end cuts through a token.
    bool found = false;
    const std::string& t = region->text;
    for (std::size_t pos = t.find(k.phrase); !k.phrase.empty() && pos != std::string::npos;
         pos = t.find(k.phrase, pos + 1)) {
      std::size_t end = pos + k.phrase.size();
      bool clean_start = pos == 0 || !text::is_ascii_alnum(t[pos - 1]);
      bool clean_end = end == t.size() || !text::is_ascii_alnum(t[end]);
      if (clean_start && clean_end) {
        found = true;
        break;
      }
    }
    if (!found) out.push_back({name, "phrase is a contiguous token substring of region text"});
  }
  return out;
}

}  // namespace eyesfree
