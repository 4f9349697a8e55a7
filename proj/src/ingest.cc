#include "eyesfree/ingest.h"

#include <algorithm>
#include <array>
#include <tuple>

#include "eyesfree/text.h"
#include "json.hpp"

namespace eyesfree {

using json = nlohmann::ordered_json;

namespace {

constexpr int kLayoutVersion = 1;

LayoutSyntaxError syntax_error(std::string_view bytes, std::size_t offset,
                               const std::string& message) {
  offset = std::min(offset, bytes.size());
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < offset; ++i) {
    if (bytes[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return LayoutSyntaxError("layout syntax error at line " + std::to_string(line) + ", column " +
                               std::to_string(column) + ": " + message,
                           offset, line, column);
}

// Collects schema problems with their JSON path instead of failing on the
// first one.
class SchemaReader {
 public:
  const json* field(const json& obj, const std::string& path, const char* key, bool required) {
    if (!obj.is_object()) {
      problem(path, "expected an object");
      return nullptr;
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) problem(path + "/" + key, "missing field");
      return nullptr;
    }
    return &*it;
  }

  std::string str(const json& obj, const std::string& path, const char* key,
                  bool required = true) {
    const json* v = field(obj, path, key, required);
    if (!v) return {};
    if (!v->is_string()) {
      problem(path + "/" + key, "expected a string");
      return {};
    }
    return v->get<std::string>();
  }

  double num(const json& obj, const std::string& path, const char* key) {
    const json* v = field(obj, path, key, true);
    if (!v) return 0;
    if (!v->is_number()) {
      problem(path + "/" + key, "expected a number");
      return 0;
    }
    return v->get<double>();
  }

  void problem(const std::string& path, const std::string& rule) {
    problems_.push_back({path.empty() ? "/" : path, rule});
  }

  std::vector<Violation> take() { return std::move(problems_); }

 private:
  std::vector<Violation> problems_;
};

Document read_document(const json& root) {
  SchemaReader r;
  Document doc;
  if (const json* v = r.field(root, "", "version", true)) {
    if (!v->is_number_integer() || v->get<int>() != kLayoutVersion) {
      r.problem("/version", "unsupported layout version, expected " +
                                std::to_string(kLayoutVersion));
    }
  }
  doc.id = r.str(root, "", "id");
  doc.title = r.str(root, "", "title", false);
  std::string source = r.str(root, "", "source_kind");
  if (auto kind = source_kind_from_string(source)) {
    doc.source_kind = *kind;
  } else if (!source.empty()) {
    r.problem("/source_kind", "expected \"digital\" or \"scanned\"");
  }

  const json* pages = r.field(root, "", "pages", true);
  if (pages && !pages->is_array()) {
    r.problem("/pages", "expected an array");
    pages = nullptr;
  }
  if (pages) {
    for (std::size_t p = 0; p < pages->size(); ++p) {
      const json& pj = (*pages)[p];
      const std::string path = "/pages/" + std::to_string(p);
      Page page;
      page.index = static_cast<int>(p);
      page.width = r.num(pj, path, "width");
      page.height = r.num(pj, path, "height");
      const json* regions = r.field(pj, path, "regions", true);
      if (regions && !regions->is_array()) {
        r.problem(path + "/regions", "expected an array");
        regions = nullptr;
      }
      for (std::size_t i = 0; regions && i < regions->size(); ++i) {
        const json& rj = (*regions)[i];
        const std::string rpath = path + "/regions/" + std::to_string(i);
        Region region;
        region.page_index = page.index;
        region.id = r.str(rj, rpath, "id");
        std::string kind = r.str(rj, rpath, "kind");
        if (auto k = region_kind_from_string(kind)) {
          region.kind = *k;
        } else if (!kind.empty()) {
          r.problem(rpath + "/kind", "unknown region kind \"" + kind + "\"");
        }
        if (const json* bbox = r.field(rj, rpath, "bbox", true)) {
          if (!bbox->is_array() || bbox->size() != 4 ||
              !std::all_of(bbox->begin(), bbox->end(),
                           [](const json& v) { return v.is_number(); })) {
            r.problem(rpath + "/bbox", "expected [x, y, w, h]");
          } else {
            region.bbox = {(*bbox)[0].get<double>(), (*bbox)[1].get<double>(),
                           (*bbox)[2].get<double>(), (*bbox)[3].get<double>()};
          }
        }
        region.text = r.str(rj, rpath, "text", false);
        if (const json* c = r.field(rj, rpath, "ocr_confidence", false)) {
          if (c->is_number()) {
            region.ocr_confidence = c->get<double>();
          } else if (!c->is_null()) {
            r.problem(rpath + "/ocr_confidence", "expected a number");
          }
        }
        page.regions.push_back(std::move(region));
      }
      doc.pages.push_back(std::move(page));
    }
  }

  auto problems = r.take();
  if (!problems.empty()) throw LayoutInvalidError(std::move(problems));
  return doc;
}

std::vector<const Region*> column_major(std::vector<const Region*> regions, double page_width) {
  if (regions.empty()) return regions;

  std::vector<double> mids;
  for (const Region* r : regions) mids.push_back(r->bbox.center_x());
  std::sort(mids.begin(), mids.end());
  double best_gap = 0;
  double split = 0;
  for (std::size_t i = 1; i < mids.size(); ++i) {
    double gap = mids[i] - mids[i - 1];
    if (gap > best_gap) {
      best_gap = gap;
      split = (mids[i] + mids[i - 1]) / 2;
    }
  }
  const bool two_columns = best_gap > kColumnGapFraction * page_width;

  auto key = [&](const Region* r) {
    int column = two_columns && r->bbox.center_x() > split ? 1 : 0;
    return std::make_tuple(column, r->bbox.y, r->bbox.x, std::string_view(r->id));
  };
  std::sort(regions.begin(), regions.end(),
            [&](const Region* a, const Region* b) { return key(a) < key(b); });
  return regions;
}

bool is_abbreviation(std::string_view text, std::size_t period) {
  static constexpr std::array<std::string_view, 7> kAbbreviations = {
      "fig.", "dr.", "e.g.", "i.e.", "vs.", "pp.", "no."};
  std::size_t begin = period;
  while (begin > 0 && !text::is_space(text[begin - 1])) --begin;
  std::string_view word = text.substr(begin, period + 1 - begin);
  while (!word.empty() && (word.front() == '(' || word.front() == '[' ||
                           word.front() == '"' || word.front() == '\'')) {
    word.remove_prefix(1);
  }
  for (std::string_view abbreviation : kAbbreviations) {
    if (text::iequals(word, abbreviation)) return true;
  }
  if (text::iequals(word, "al.")) {
    std::size_t e = begin;
    while (e > 0 && text::is_space(text[e - 1])) --e;
    std::size_t b = e;
    while (b > 0 && !text::is_space(text[b - 1])) --b;
    return e > b && text::iequals(text.substr(b, e - b), "et");
  }
  return false;
}

}  // namespace

LayoutInvalidError::LayoutInvalidError(std::vector<Violation> violations)
    : std::runtime_error([&] {
        std::string msg = "invalid layout:";
        for (const Violation& v : violations) msg += "\n  " + to_string(v);
        return msg;
      }()),
      violations_(std::move(violations)) {}

Document parse_layout(std::string_view bytes) {
  json root;
  try {
    root = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw syntax_error(bytes, e.byte == 0 ? 0 : e.byte - 1, e.what());
  }
  Document doc = read_document(root);
  for (const Page& page : doc.pages) {
    auto order = infer_reading_order(page);
    doc.reading_order.insert(doc.reading_order.end(), order.begin(), order.end());
  }
  auto violations = validate(doc);
  if (!violations.empty()) throw LayoutInvalidError(std::move(violations));
  return doc;
}

std::string serialize_layout(const Document& document) {
  json root;
  root["version"] = kLayoutVersion;
  root["id"] = document.id;
  root["title"] = document.title;
  root["source_kind"] = to_string(document.source_kind);
  json pages = json::array();
  for (const Page& page : document.pages) {
    json pj;
    pj["width"] = page.width;
    pj["height"] = page.height;
    json regions = json::array();
    for (const Region& region : page.regions) {
      json rj;
      rj["id"] = region.id;
      rj["kind"] = to_string(region.kind);
      rj["bbox"] = {region.bbox.x, region.bbox.y, region.bbox.w, region.bbox.h};
      rj["text"] = region.text;
      if (region.ocr_confidence) rj["ocr_confidence"] = *region.ocr_confidence;
      regions.push_back(std::move(rj));
    }
    pj["regions"] = std::move(regions);
    pages.push_back(std::move(pj));
  }
  root["pages"] = std::move(pages);
  return root.dump(2) + "\n";
}

std::vector<std::string> infer_reading_order(const Page& page) {
  std::vector<const Region*> body;
  std::vector<const Region*> notes;
  for (const Region& region : page.regions) {
    if (!is_text_bearing(region.kind)) continue;
    (region.kind == RegionKind::kFootnote ? notes : body).push_back(&region);
  }
  std::vector<std::string> order;
  for (const Region* r : column_major(std::move(body), page.width)) order.push_back(r->id);
  for (const Region* r : column_major(std::move(notes), page.width)) order.push_back(r->id);
  return order;
}

std::vector<TextSpan> split_sentences(const std::string& region_id, std::string_view text) {
  std::vector<TextSpan> out;
  std::size_t last = text.size();
  while (last > 0 && text::is_space(text[last - 1])) --last;

  std::size_t start = 0;
  while (start < last && text::is_space(text[start])) ++start;

  for (std::size_t i = start; i < last; ++i) {
    char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    if (i + 1 >= last) break;  // the final sentence closes below
    if (!text::is_space(text[i + 1])) continue;
    std::size_t next = i + 1;
    while (next < last && text::is_space(text[next])) ++next;
    if (!text::is_ascii_upper(text[next])) continue;
    if (c == '.' && is_abbreviation(text, i)) continue;
    out.push_back({region_id, start, i + 1});
    start = next;
    i = next - 1;
  }
  if (start < last) out.push_back({region_id, start, last});
  return out;
}

std::vector<Sentence> segment_sentences(const Document& document) {
  std::vector<Sentence> out;
  for (const std::string& id : document.reading_order) {
    const Region* region = document.find_region(id);
    if (!region) continue;
    for (TextSpan& span : split_sentences(region->id, region->text)) {
      out.push_back({static_cast<int>(out.size()), std::move(span)});
    }
  }
  return out;
}

}  // namespace eyesfree
