// End-to-end compilation and the shared configuration file.
#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "eyesfree/bundle.h"
#include "eyesfree/delivery.h"
#include "eyesfree/playback.h"

namespace eyesfree {

struct CompileOptions {
  TimingConfig timing;
  double warning_threshold = kDefaultWarningThreshold;
  RasterOptions raster;
};

// Defaults for every subcommand, read from a JSON file:
//   {"server": {"address": "...", "port": 8080},
//    "timing": {...TimingConfig fields...},
//    "warning_threshold": 0.6,
//    "playback": {"screen_aspect": 0.75, "margin_frac": 0.05, ...}}
// Absent keys keep their defaults.
struct AppConfig {
  ServerConfig server;
  CompileOptions compile;
  PlaybackConfig playback;
};

AppConfig load_config(const std::filesystem::path& path);
TimingConfig load_timing(const std::filesystem::path& path);

// A failure in one named stage of the pipeline (ingest, link, summarize,
// narrate, write). input_error distinguishes bad input from internal faults.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message, bool input_error)
      : std::runtime_error(stage + ": " + message),
        stage_(std::move(stage)),
        input_error_(input_error) {}
  const std::string& stage() const { return stage_; }
  bool input_error() const { return input_error_; }

 private:
  std::string stage_;
  bool input_error_;
};

Bundle compile_document(const Document& document, const CompileOptions& options = {});

// parse_layout + compile_document + write_bundle_dir.
Bundle compile_layout(const std::filesystem::path& layout_path,
                      const std::filesystem::path& out_dir, const CompileOptions& options = {});

}  // namespace eyesfree
