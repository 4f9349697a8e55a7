// Compiles a document into a timed reading script.
#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "eyesfree/docmodel.h"
#include "eyesfree/ingest.h"

namespace eyesfree {

using Millis = std::int64_t;

inline constexpr std::string_view kOcrWarningText =
    "Warning, upcoming TTS may be unintelligible";
inline constexpr double kDefaultWarningThreshold = 0.6;

struct TimingConfig {
  std::string model = "mock";
  Millis base_ms = 100;
  Millis per_char_ms = 50;
  Millis inter_word_gap_ms = 30;
  Millis inter_sentence_pause_ms = 300;
  Millis warning_duration_ms = 2000;

  friend bool operator==(const TimingConfig&, const TimingConfig&) = default;
};

// Speech timing model. Implementations must be deterministic and return
// strictly positive durations.
class TtsTiming {
 public:
  virtual ~TtsTiming() = default;

  virtual Millis word_duration(std::string_view word) const = 0;
  virtual Millis inter_word_gap() const = 0;
  virtual Millis inter_sentence_pause() const = 0;
  virtual Millis warning_duration() const = 0;

  // Echoed into the compiled script.
  virtual TimingConfig config() const = 0;
};

// word_duration = base + per_char * code points.
class MockTiming : public TtsTiming {
 public:
  MockTiming() = default;
  explicit MockTiming(TimingConfig config);

  Millis word_duration(std::string_view word) const override;
  Millis inter_word_gap() const override { return config_.inter_word_gap_ms; }
  Millis inter_sentence_pause() const override { return config_.inter_sentence_pause_ms; }
  Millis warning_duration() const override { return config_.warning_duration_ms; }
  TimingConfig config() const override { return config_; }

 private:
  TimingConfig config_;
};

struct SpeakSpan {
  Millis t_start = 0;
  Millis t_end = 0;
  TextSpan span;
  int sentence_index = 0;
  friend bool operator==(const SpeakSpan&, const SpeakSpan&) = default;
};

struct SentenceBoundary {
  Millis t = 0;
  int sentence_index = 0;
  friend bool operator==(const SentenceBoundary&, const SentenceBoundary&) = default;
};

struct LinkTrigger {
  Millis t = 0;
  std::string link_id;
  friend bool operator==(const LinkTrigger&, const LinkTrigger&) = default;
};

struct Warning {
  Millis t_start = 0;
  Millis t_end = 0;
  std::string region_id;
  std::string text;
  friend bool operator==(const Warning&, const Warning&) = default;
};

struct RegionStart {
  Millis t = 0;
  std::string region_id;
  friend bool operator==(const RegionStart&, const RegionStart&) = default;
};

struct PageBoundary {
  Millis t = 0;
  int page_index = 0;
  friend bool operator==(const PageBoundary&, const PageBoundary&) = default;
};

struct DocumentEnd {
  Millis t = 0;
  friend bool operator==(const DocumentEnd&, const DocumentEnd&) = default;
};

using ScriptEvent = std::variant<SpeakSpan, SentenceBoundary, LinkTrigger, Warning,
                                 RegionStart, PageBoundary, DocumentEnd>;

// The time an event is ordered by (t_start for ranged events).
Millis event_time(const ScriptEvent& event);

struct ReadingScript {
  std::string document_id;
  TimingConfig timing;
  std::vector<ScriptEvent> events;

  friend bool operator==(const ReadingScript&, const ReadingScript&) = default;
};

class CompileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NarrationOptions {
  double warning_threshold = kDefaultWarningThreshold;
};

ReadingScript compile_script(const Document& document, const std::vector<Sentence>& sentences,
                             const std::vector<Link>& links, const TtsTiming& timing,
                             const NarrationOptions& options = {});

struct ClipPlanEntry {
  int sentence_index = 0;
  Millis t_start = 0;
  Millis t_end = 0;
  friend bool operator==(const ClipPlanEntry&, const ClipPlanEntry&) = default;
};

// Per-sentence audio chunk boundaries: first word start to sentence end.
std::vector<ClipPlanEntry> sentence_clip_plan(const ReadingScript& script);

// One event per line, used by the `script` subcommand.
std::string format_event(const ScriptEvent& event);

}  // namespace eyesfree
