// Layout interchange parsing, reading order inference and sentence
// segmentation.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "eyesfree/docmodel.h"

namespace eyesfree {

struct Sentence {
  int index = 0;
  TextSpan span;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

// Syntax error in a layout file. line and column are 1-based.
class LayoutSyntaxError : public std::runtime_error {
 public:
  LayoutSyntaxError(const std::string& what, std::size_t offset, std::size_t line,
                    std::size_t column)
      : std::runtime_error(what), offset_(offset), line_(line), column_(column) {}

  std::size_t offset() const { return offset_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t offset_;
  std::size_t line_;
  std::size_t column_;
};

// Layout parsed but the resulting document breaks the model invariants.
class LayoutInvalidError : public std::runtime_error {
 public:
  explicit LayoutInvalidError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

// Parses a layout file. The returned document is valid and carries a
// reading order computed by infer_reading_order for each page in turn.
Document parse_layout(std::string_view bytes);

// Inverse of parse_layout for valid documents (reading order is implied).
std::string serialize_layout(const Document& document);

// Gap between column clusters, as a fraction of page width, above which a
// page is treated as two columns.
inline constexpr double kColumnGapFraction = 0.10;

// Column-major, top-to-bottom order over the page's text-bearing regions.
// Footnotes follow the body of the page.
std::vector<std::string> infer_reading_order(const Page& page);

// Sentence spans of one region text, as byte ranges, in order.
std::vector<TextSpan> split_sentences(const std::string& region_id, std::string_view text);

// All sentences of the document in reading order, indexed from 0.
std::vector<Sentence> segment_sentences(const Document& document);

}  // namespace eyesfree
