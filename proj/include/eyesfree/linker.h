// Reference mentions ("Figure 2", "Sec. 3.1", "[12]") and their
// resolution to target regions.
#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "eyesfree/docmodel.h"

namespace eyesfree {

struct ReferenceMention {
  TextSpan span;
  LinkKind kind = LinkKind::kFigureRef;
  std::string ordinal;
  std::string text;  // the matched surface text, e.g. "Fig. 2"

  friend bool operator==(const ReferenceMention&, const ReferenceMention&) = default;
};

using TargetKey = std::pair<LinkKind, std::string>;

struct TargetIndex {
  std::map<TargetKey, std::string> targets;  // key -> region id
  std::set<TargetKey> ambiguous;
};

// All mentions outside Caption and ReferenceEntry regions, in reading
// order then by offset.
std::vector<ReferenceMention> extract_mentions(const Document& document);

// Mentions found in one piece of text, ignoring the region-kind exclusion.
std::vector<ReferenceMention> scan_mentions(const std::string& region_id,
                                            const std::string& text);

TargetIndex build_target_index(const Document& document);

// One link per mention with an unambiguous indexed key. Link ids are
// "L<n>" in mention order.
std::vector<Link> resolve(const std::vector<ReferenceMention>& mentions,
                          const TargetIndex& index);

// extract_mentions + build_target_index + resolve.
std::vector<Link> link_document(const Document& document);

}  // namespace eyesfree
