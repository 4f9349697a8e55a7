#include "eyesfree/linker.h"

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string_view>

#include "eyesfree/text.h"

namespace eyesfree {

namespace {

struct Keyword {
  std::string_view text;
  LinkKind kind;
};

// Longer spellings first so "Figure" wins over "Fig.".
constexpr std::array<Keyword, 6> kMentionKeywords{{
    {"figure", LinkKind::kFigureRef},
    {"fig.", LinkKind::kFigureRef},
    {"table", LinkKind::kTableRef},
    {"section", LinkKind::kSectionRef},
    {"sec.", LinkKind::kSectionRef},
    {"\xC2\xA7", LinkKind::kSectionRef},  // §
}};

// Length of an ordinal ([0-9]+(.[0-9]+)*) starting at pos, or 0.
std::size_t ordinal_length(std::string_view s, std::size_t pos) {
  std::size_t i = pos;
  if (i >= s.size() || !text::is_ascii_digit(s[i])) return 0;
  while (i < s.size() && text::is_ascii_digit(s[i])) ++i;
  while (i + 1 < s.size() && s[i] == '.' && text::is_ascii_digit(s[i + 1])) {
    ++i;
    while (i < s.size() && text::is_ascii_digit(s[i])) ++i;
  }
  return i - pos;
}

struct KeywordMatch {
  LinkKind kind;
  std::size_t end;      // end of the whole match
  std::size_t ordinal;  // start of the ordinal
};

// keyword + whitespace + ordinal at pos.
std::optional<KeywordMatch> match_keyword(std::string_view s, std::size_t pos,
                                          std::span<const Keyword> keywords) {
  for (const Keyword& k : keywords) {
    if (!text::istarts_with(s.substr(pos), k.text)) continue;
    std::size_t i = pos + k.text.size();
    std::size_t ws = i;
    while (i < s.size() && text::is_space(s[i])) ++i;
    if (i == ws) continue;
    std::size_t n = ordinal_length(s, i);
    if (n == 0) continue;
    return KeywordMatch{k.kind, i + n, i};
  }
  return std::nullopt;
}

// "[" integer "]" at pos; returns the end offset or 0.
std::size_t match_citation(std::string_view s, std::size_t pos) {
  if (pos >= s.size() || s[pos] != '[') return 0;
  std::size_t i = pos + 1;
  while (i < s.size() && text::is_ascii_digit(s[i])) ++i;
  if (i == pos + 1 || i >= s.size() || s[i] != ']') return 0;
  return i + 1;
}

double center_distance(const BoundingBox& a, const BoundingBox& b) {
  return std::hypot(a.center_x() - b.center_x(), a.center_y() - b.center_y());
}

}  // namespace

std::vector<ReferenceMention> scan_mentions(const std::string& region_id,
                                            const std::string& body) {
  std::vector<ReferenceMention> out;
  std::string_view s = body;
  std::size_t i = 0;
  while (i < s.size()) {
    const bool word_start = i == 0 || !text::is_ascii_alnum(s[i - 1]);
    if (word_start) {
      if (auto m = match_keyword(s, i, kMentionKeywords)) {
        out.push_back({{region_id, i, m->end},
                       m->kind,
                       std::string(s.substr(m->ordinal, m->end - m->ordinal)),
                       std::string(s.substr(i, m->end - i))});
        i = m->end;
        continue;
      }
    }
    if (std::size_t end = match_citation(s, i)) {
      out.push_back({{region_id, i, end},
                     LinkKind::kCitation,
                     std::string(s.substr(i + 1, end - i - 2)),
                     std::string(s.substr(i, end - i))});
      i = end;
      continue;
    }
    ++i;
  }
  return out;
}

std::vector<ReferenceMention> extract_mentions(const Document& document) {
  std::vector<ReferenceMention> out;
  for (const std::string& id : document.reading_order) {
    const Region* region = document.find_region(id);
    if (!region || region->kind == RegionKind::kCaption ||
        region->kind == RegionKind::kReferenceEntry) {
      continue;
    }
    auto found = scan_mentions(region->id, region->text);
    out.insert(out.end(), found.begin(), found.end());
  }
  return out;
}

TargetIndex build_target_index(const Document& document) {
  static constexpr std::array<Keyword, 3> kCaptionKeywords{{
      {"figure", LinkKind::kFigureRef},
      {"fig.", LinkKind::kFigureRef},
      {"table", LinkKind::kTableRef},
  }};
  static constexpr std::array<Keyword, 3> kHeadingPrefixes{{
      {"section", LinkKind::kSectionRef},
      {"sec.", LinkKind::kSectionRef},
      {"\xC2\xA7", LinkKind::kSectionRef},
  }};

  TargetIndex index;
  std::map<TargetKey, int> produced;
  auto add = [&](TargetKey key, const std::string& region_id) {
    if (++produced[key] == 1) {
      index.targets.emplace(std::move(key), region_id);
    } else {
      index.targets.erase(key);
      index.ambiguous.insert(std::move(key));
    }
  };

  for (const Page& page : document.pages) {
    for (const Region& region : page.regions) {
      std::string_view body = text::trim(region.text);
      switch (region.kind) {
        case RegionKind::kCaption: {
          auto m = match_keyword(body, 0, kCaptionKeywords);
          if (!m) break;
          const RegionKind wanted =
              m->kind == LinkKind::kTableRef ? RegionKind::kTable : RegionKind::kFigure;
          const Region* best = nullptr;
          double best_distance = std::numeric_limits<double>::infinity();
          for (const Region& candidate : page.regions) {
            if (candidate.kind != wanted) continue;
            double d = center_distance(candidate.bbox, region.bbox);
            if (d < best_distance) {
              best_distance = d;
              best = &candidate;
            }
          }
          add({m->kind, std::string(body.substr(m->ordinal, m->end - m->ordinal))},
              best ? best->id : region.id);
          break;
        }
        case RegionKind::kHeading: {
          std::size_t start = 0;
          if (auto m = match_keyword(body, 0, kHeadingPrefixes)) start = m->ordinal;
          std::size_t n = ordinal_length(body, start);
          if (n == 0) break;
          if (start + n < body.size() && text::is_ascii_alnum(body[start + n])) break;
          add({LinkKind::kSectionRef, std::string(body.substr(start, n))}, region.id);
          break;
        }
        case RegionKind::kReferenceEntry: {
          if (std::size_t end = match_citation(body, 0)) {
            add({LinkKind::kCitation, std::string(body.substr(1, end - 2))}, region.id);
          }
          break;
        }
        default:
          break;
      }
    }
  }
  return index;
}

std::vector<Link> resolve(const std::vector<ReferenceMention>& mentions,
                          const TargetIndex& index) {
  std::vector<Link> out;
  for (const ReferenceMention& m : mentions) {
    auto it = index.targets.find({m.kind, m.ordinal});
    if (it == index.targets.end()) continue;
    // A heading that names its own section is not a link.
    if (it->second == m.span.region_id) continue;
    Link link;
    link.id = "L" + std::to_string(out.size());
    link.source = m.span;
    link.target_region = it->second;
    link.kind = m.kind;
    link.label = m.text;
    link.confidence = 1.0;
    out.push_back(std::move(link));
  }
  return out;
}

std::vector<Link> link_document(const Document& document) {
  return resolve(extract_mentions(document), build_target_index(document));
}

}  // namespace eyesfree
