#include "eyesfree/pipeline.h"

#include "eyesfree/ingest.h"
#include "eyesfree/linker.h"
#include "eyesfree/summarizer.h"
#include "json.hpp"

namespace eyesfree {

using json = nlohmann::json;

namespace {

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

TimingConfig timing_from(const json& j, TimingConfig t) {
  read_opt(j, "model", t.model);
  read_opt(j, "base_ms", t.base_ms);
  read_opt(j, "per_char_ms", t.per_char_ms);
  read_opt(j, "inter_word_gap_ms", t.inter_word_gap_ms);
  read_opt(j, "inter_sentence_pause_ms", t.inter_sentence_pause_ms);
  read_opt(j, "warning_duration_ms", t.warning_duration_ms);
  return t;
}

json parse_config_file(const std::filesystem::path& path) {
  std::string bytes = read_file(path);
  try {
    return json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

}  // namespace

AppConfig load_config(const std::filesystem::path& path) {
  json root = parse_config_file(path);
  AppConfig config;
  try {
    if (auto it = root.find("server"); it != root.end()) {
      read_opt(*it, "address", config.server.address);
      read_opt(*it, "port", config.server.port);
    }
    if (auto it = root.find("timing"); it != root.end()) {
      config.compile.timing = timing_from(*it, config.compile.timing);
    }
    read_opt(root, "warning_threshold", config.compile.warning_threshold);
    if (auto it = root.find("playback"); it != root.end()) {
      PlaybackConfig& p = config.playback;
      read_opt(*it, "screen_aspect", p.screen_aspect);
      read_opt(*it, "margin_frac", p.margin_frac);
      read_opt(*it, "wheel_quantum_degrees", p.wheel_quantum_degrees);
      read_opt(*it, "boundary_vibrate_ms", p.boundary_vibrate_ms);
      read_opt(*it, "link_vibrate_ms", p.link_vibrate_ms);
      read_opt(*it, "pan_animate_ms", p.pan_animate_ms);
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
  return config;
}

TimingConfig load_timing(const std::filesystem::path& path) {
  json root = parse_config_file(path);
  try {
    return timing_from(root, {});
  } catch (const json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

Bundle compile_document(const Document& document, const CompileOptions& options) {
  if (auto violations = validate(document); !violations.empty()) {
    throw StageError("validate", to_string(violations.front()), true);
  }
  if (options.timing.model != "mock") {
    throw StageError("narrate", "unknown timing model \"" + options.timing.model + "\"", true);
  }
  Bundle bundle;
  bundle.document = document;
  std::vector<Sentence> sentences = segment_sentences(document);
  try {
    bundle.links = link_document(document);
  } catch (const std::exception& e) {
    throw StageError("link", e.what(), false);
  }
  try {
    bundle.keyphrases = summarize_document(document);
  } catch (const std::exception& e) {
    throw StageError("summarize", e.what(), false);
  }
  try {
    MockTiming timing(options.timing);
    bundle.script = compile_script(document, sentences, bundle.links, timing,
                                   {options.warning_threshold});
  } catch (const CompileError& e) {
    throw StageError("narrate", e.what(), true);
  }
  return bundle;
}

Bundle compile_layout(const std::filesystem::path& layout_path,
                      const std::filesystem::path& out_dir, const CompileOptions& options) {
  Document document;
  try {
    document = parse_layout(read_file(layout_path));
  } catch (const std::exception& e) {
    throw StageError("ingest", layout_path.string() + ": " + e.what(), true);
  }
  Bundle bundle = compile_document(document, options);
  try {
    write_bundle_dir(out_dir, bundle, options.raster);
  } catch (const std::exception& e) {
    throw StageError("write", e.what(), false);
  }
  return bundle;
}

}  // namespace eyesfree
