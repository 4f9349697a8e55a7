#include "eyesfree/bundle.h"

#include <fstream>
#include <sstream>

#include "eyesfree/raster.h"
#include "json.hpp"

namespace eyesfree {

using json = nlohmann::ordered_json;

namespace {

json span_json(const TextSpan& s) {
  return json{{"region", s.region_id}, {"start", s.char_start}, {"end", s.char_end}};
}

TextSpan span_from(const json& j) {
  return {j.at("region").get<std::string>(), j.at("start").get<std::size_t>(),
          j.at("end").get<std::size_t>()};
}

json event_json(const ScriptEvent& event) {
  return std::visit(
      [](const auto& e) -> json {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, SpeakSpan>) {
          return {{"type", "speak"},
                  {"t_start", e.t_start},
                  {"t_end", e.t_end},
                  {"sentence", e.sentence_index},
                  {"span", span_json(e.span)}};
        } else if constexpr (std::is_same_v<T, SentenceBoundary>) {
          return {{"type", "sentence_boundary"}, {"t", e.t}, {"sentence", e.sentence_index}};
        } else if constexpr (std::is_same_v<T, LinkTrigger>) {
          return {{"type", "link_trigger"}, {"t", e.t}, {"link", e.link_id}};
        } else if constexpr (std::is_same_v<T, Warning>) {
          return {{"type", "warning"},
                  {"t_start", e.t_start},
                  {"t_end", e.t_end},
                  {"region", e.region_id},
                  {"text", e.text}};
        } else if constexpr (std::is_same_v<T, RegionStart>) {
          return {{"type", "region_start"}, {"t", e.t}, {"region", e.region_id}};
        } else if constexpr (std::is_same_v<T, PageBoundary>) {
          return {{"type", "page_boundary"}, {"t", e.t}, {"page", e.page_index}};
        } else {
          return {{"type", "document_end"}, {"t", e.t}};
        }
      },
      event);
}

ScriptEvent event_from(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "speak") {
    return SpeakSpan{j.at("t_start").get<Millis>(), j.at("t_end").get<Millis>(),
                     span_from(j.at("span")), j.at("sentence").get<int>()};
  }
  if (type == "sentence_boundary") {
    return SentenceBoundary{j.at("t").get<Millis>(), j.at("sentence").get<int>()};
  }
  if (type == "link_trigger") {
    return LinkTrigger{j.at("t").get<Millis>(), j.at("link").get<std::string>()};
  }
  if (type == "warning") {
    return Warning{j.at("t_start").get<Millis>(), j.at("t_end").get<Millis>(),
                   j.at("region").get<std::string>(), j.at("text").get<std::string>()};
  }
  if (type == "region_start") {
    return RegionStart{j.at("t").get<Millis>(), j.at("region").get<std::string>()};
  }
  if (type == "page_boundary") {
    return PageBoundary{j.at("t").get<Millis>(), j.at("page").get<int>()};
  }
  if (type == "document_end") return DocumentEnd{j.at("t").get<Millis>()};
  throw BundleFormatError("unknown script event type \"" + type + "\"", std::nullopt);
}

json timing_json(const TimingConfig& t) {
  return {{"model", t.model},
          {"base_ms", t.base_ms},
          {"per_char_ms", t.per_char_ms},
          {"inter_word_gap_ms", t.inter_word_gap_ms},
          {"inter_sentence_pause_ms", t.inter_sentence_pause_ms},
          {"warning_duration_ms", t.warning_duration_ms}};
}

TimingConfig timing_from(const json& j) {
  TimingConfig t;
  t.model = j.at("model").get<std::string>();
  t.base_ms = j.at("base_ms").get<Millis>();
  t.per_char_ms = j.at("per_char_ms").get<Millis>();
  t.inter_word_gap_ms = j.at("inter_word_gap_ms").get<Millis>();
  t.inter_sentence_pause_ms = j.at("inter_sentence_pause_ms").get<Millis>();
  t.warning_duration_ms = j.at("warning_duration_ms").get<Millis>();
  return t;
}

template <typename Enum, typename Parse>
Enum enum_from(const json& j, Parse parse, const char* what) {
  auto name = j.get<std::string>();
  auto value = parse(name);
  if (!value) throw BundleFormatError(std::string("unknown ") + what + " \"" + name + "\"", {});
  return *value;
}

Document document_from(const json& j) {
  Document doc;
  doc.id = j.at("id").get<std::string>();
  doc.title = j.at("title").get<std::string>();
  doc.source_kind = enum_from<SourceKind>(j.at("source_kind"), source_kind_from_string,
                                          "source kind");
  for (const json& pj : j.at("pages")) {
    Page page;
    page.index = pj.at("index").get<int>();
    page.width = pj.at("width").get<double>();
    page.height = pj.at("height").get<double>();
    for (const json& rj : pj.at("regions")) {
      Region r;
      r.id = rj.at("id").get<std::string>();
      r.page_index = page.index;
      r.kind = enum_from<RegionKind>(rj.at("kind"), region_kind_from_string, "region kind");
      const json& b = rj.at("bbox");
      if (!b.is_array() || b.size() != 4) throw BundleFormatError("bbox must have 4 numbers", {});
      r.bbox = {b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
      r.text = rj.at("text").get<std::string>();
      if (auto it = rj.find("ocr_confidence"); it != rj.end()) r.ocr_confidence = it->get<double>();
      page.regions.push_back(std::move(r));
    }
    doc.pages.push_back(std::move(page));
  }
  doc.reading_order = j.at("reading_order").get<std::vector<std::string>>();
  return doc;
}

json document_json(const Document& doc) {
  json pages = json::array();
  for (const Page& page : doc.pages) {
    json regions = json::array();
    for (const Region& r : page.regions) {
      json rj{{"id", r.id},
              {"kind", to_string(r.kind)},
              {"bbox", {r.bbox.x, r.bbox.y, r.bbox.w, r.bbox.h}},
              {"text", r.text}};
      if (r.ocr_confidence) rj["ocr_confidence"] = *r.ocr_confidence;
      regions.push_back(std::move(rj));
    }
    pages.push_back(json{{"index", page.index},
                         {"width", page.width},
                         {"height", page.height},
                         {"regions", std::move(regions)}});
  }
  return {{"id", doc.id},
          {"title", doc.title},
          {"source_kind", to_string(doc.source_kind)},
          {"pages", std::move(pages)},
          {"reading_order", doc.reading_order}};
}

}  // namespace

std::string write_bundle(const Bundle& bundle) {
  if (auto violations = validate(bundle.document); !violations.empty()) {
    throw std::invalid_argument("write_bundle: invalid document: " + to_string(violations[0]));
  }
  json links = json::array();
  for (const Link& l : bundle.links) {
    links.push_back(json{{"id", l.id},
                         {"source", span_json(l.source)},
                         {"target", l.target_region},
                         {"kind", to_string(l.kind)},
                         {"label", l.label},
                         {"confidence", l.confidence}});
  }
  json keyphrases = json::array();
  for (const Keyphrase& k : bundle.keyphrases) {
    keyphrases.push_back(json{{"region", k.region_id}, {"phrase", k.phrase}, {"score", k.score}});
  }
  json events = json::array();
  for (const ScriptEvent& e : bundle.script.events) events.push_back(event_json(e));

  json root{{"format", kBundleFormat},
            {"version", kBundleVersion},
            {"document", document_json(bundle.document)},
            {"links", std::move(links)},
            {"keyphrases", std::move(keyphrases)},
            {"script",
             {{"document", bundle.script.document_id},
              {"timing", timing_json(bundle.script.timing)},
              {"events", std::move(events)}}}};
  // No trailing newline: every proper prefix is then malformed.
  return root.dump(1);
}

Bundle read_bundle(std::string_view bytes) {
  json root;
  try {
    root = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    std::size_t offset = e.byte == 0 ? 0 : e.byte - 1;
    throw BundleFormatError("bundle parse error at byte " + std::to_string(offset) + ": " +
                                e.what(),
                            offset);
  }

  Bundle bundle;
  try {
    if (!root.is_object() || root.value("format", std::string()) != kBundleFormat) {
      throw BundleFormatError("not an eyesfree bundle manifest", std::nullopt);
    }
    const json& version = root.at("version");
    if (!version.is_number_integer() || version.get<int>() != kBundleVersion) {
      int found = version.is_number_integer() ? version.get<int>() : -1;
      throw BundleVersionError("unsupported bundle version " + version.dump() + ", expected " +
                                   std::to_string(kBundleVersion),
                               found);
    }
    bundle.document = document_from(root.at("document"));
    for (const json& lj : root.at("links")) {
      Link l;
      l.id = lj.at("id").get<std::string>();
      l.source = span_from(lj.at("source"));
      l.target_region = lj.at("target").get<std::string>();
      l.kind = enum_from<LinkKind>(lj.at("kind"), link_kind_from_string, "link kind");
      l.label = lj.at("label").get<std::string>();
      l.confidence = lj.at("confidence").get<double>();
      bundle.links.push_back(std::move(l));
    }
    for (const json& kj : root.at("keyphrases")) {
      bundle.keyphrases.push_back({kj.at("region").get<std::string>(),
                                   kj.at("phrase").get<std::string>(),
                                   kj.at("score").get<double>()});
    }
    const json& script = root.at("script");
    bundle.script.document_id = script.at("document").get<std::string>();
    bundle.script.timing = timing_from(script.at("timing"));
    for (const json& ej : script.at("events")) bundle.script.events.push_back(event_from(ej));
  } catch (const json::exception& e) {
    throw BundleFormatError(std::string("bundle schema error: ") + e.what(), std::nullopt);
  }

  auto violations = validate(bundle.document);
  auto link_violations = validate_links(bundle.document, bundle.links);
  auto key_violations = validate_keyphrases(bundle.document, bundle.keyphrases);
  violations.insert(violations.end(), link_violations.begin(), link_violations.end());
  violations.insert(violations.end(), key_violations.begin(), key_violations.end());
  if (!violations.empty()) {
    throw BundleFormatError("bundle content invalid: " + to_string(violations[0]), std::nullopt);
  }
  return bundle;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("short write to " + path.string());
}

std::vector<std::string> write_bundle_dir(const std::filesystem::path& dir, const Bundle& bundle,
                                          const RasterOptions& options) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "audio");
  std::vector<std::string> written;
  auto emit = [&](const std::string& rel, std::string_view bytes) {
    write_file(dir / rel, bytes);
    written.push_back(rel);
  };

  emit(BundleLayout::kManifest, write_bundle(bundle));
  std::vector<GrayImage> rasters;
  for (const Page& page : bundle.document.pages) {
    rasters.push_back(render_page(page, options.page_scale));
  }
  GrayImage thumb =
      rasters.empty() ? GrayImage(1, 1, 255) : downscale(rasters.front(), options.thumbnail_max);
  emit(BundleLayout::kThumbnail, encode_png(thumb));
  for (std::size_t p = 0; p < rasters.size(); ++p) {
    emit(BundleLayout::page_image(static_cast<int>(p)), encode_png(rasters[p]));
  }
  for (const ClipPlanEntry& clip : sentence_clip_plan(bundle.script)) {
    emit(BundleLayout::audio_clip(clip.sentence_index),
         placeholder_clip(clip.t_end - clip.t_start));
  }
  return written;
}

Bundle read_bundle_dir(const std::filesystem::path& dir) {
  return read_bundle(read_file(dir / BundleLayout::kManifest));
}

}  // namespace eyesfree
