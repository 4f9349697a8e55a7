// Deterministic reader engine. A PlaybackState is advanced by a media clock
// and by navigation commands; every visible or haptic effect comes back as
// a value.
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "eyesfree/bundle.h"

namespace eyesfree {

struct PlaybackConfig {
  double screen_aspect = 0.75;  // width / height
  double margin_frac = 0.05;
  double wheel_quantum_degrees = 30;
  Millis boundary_vibrate_ms = 40;
  Millis link_vibrate_ms = 200;
  Millis pan_animate_ms = 400;
};

// Smallest rectangle of the given aspect that holds the margin-expanded
// target, centred on it, then translated into the page. A dimension the page
// cannot hold is centred on the page instead. Throws std::invalid_argument
// on a target outside the page, aspect <= 0 or margin outside [0, 0.5).
BoundingBox fit_region(const BoundingBox& target, const Page& page, double screen_aspect,
                       double margin_frac);

struct DocumentView {
  std::optional<std::string> selected_doc;
  friend bool operator==(const DocumentView&, const DocumentView&) = default;
};
struct PageView {
  int page_index = 0;
  friend bool operator==(const PageView&, const PageView&) = default;
};
struct TextView {
  int page_index = 0;
  BoundingBox viewport;
  friend bool operator==(const TextView&, const TextView&) = default;
};
using ViewState = std::variant<DocumentView, PageView, TextView>;

struct WheelState {
  bool engaged = false;
  double accumulated_degrees = 0;
  int origin_sentence = 0;
  int cursor_sentence = 0;
  int pinned = 0;  // -1 at the first sentence, +1 at the last, 0 free
  friend bool operator==(const WheelState&, const WheelState&) = default;
};

struct PlaybackState {
  Millis clock_ms = 0;
  std::size_t event_cursor = 0;  // next script event to emit
  bool playing = false;
  ViewState view = DocumentView{};
  std::optional<int> current_sentence;
  WheelState wheel;
  friend bool operator==(const PlaybackState&, const PlaybackState&) = default;
};

// Commands, as delivered by the gesture layer.
struct SelectDocument {
  std::string doc_id;
};
struct SelectRegion {
  std::string region_id;
};
struct PressAt {
  double x = 0;
  double y = 0;
};
struct TogglePlay {};
struct ZoomToggle {};
enum class FlickDirection { kNext, kPrev };
struct Flick {
  FlickDirection direction = FlickDirection::kNext;
};
struct WheelMove {
  double delta_degrees = 0;
};
struct WheelRelease {};
using Command = std::variant<SelectDocument, SelectRegion, PressAt, TogglePlay, ZoomToggle,
                             Flick, WheelMove, WheelRelease>;

// Effects.
struct KeyphraseClip {
  std::string region_id;
  friend bool operator==(const KeyphraseClip&, const KeyphraseClip&) = default;
};
struct SentenceClip {
  int sentence_index = 0;
  friend bool operator==(const SentenceClip&, const SentenceClip&) = default;
};
enum class NoticeKind { kPageBoundary, kDocumentBoundary };
struct Notice {
  NoticeKind kind = NoticeKind::kPageBoundary;
  friend bool operator==(const Notice&, const Notice&) = default;
};
using Clip = std::variant<KeyphraseClip, SentenceClip, Notice>;

struct HighlightSentence {
  int sentence_index = 0;
  friend bool operator==(const HighlightSentence&, const HighlightSentence&) = default;
};
struct HighlightRegion {
  std::string region_id;
  friend bool operator==(const HighlightRegion&, const HighlightRegion&) = default;
};
struct Vibrate {
  Millis duration_ms = 0;
  friend bool operator==(const Vibrate&, const Vibrate&) = default;
};
struct HighlightLink {
  std::string link_id;
  friend bool operator==(const HighlightLink&, const HighlightLink&) = default;
};
struct PanTo {
  BoundingBox viewport;
  Millis animate_ms = 0;
  friend bool operator==(const PanTo&, const PanTo&) = default;
};
struct PlayClip {
  Clip clip;
  friend bool operator==(const PlayClip&, const PlayClip&) = default;
};
struct ShowWarning {
  std::string region_id;
  friend bool operator==(const ShowWarning&, const ShowWarning&) = default;
};
// The view changed (zoom, flick, page turn, document selection).
struct ShowView {
  ViewState view;
  friend bool operator==(const ShowView&, const ShowView&) = default;
};
using UIEvent = std::variant<HighlightSentence, HighlightRegion, Vibrate, HighlightLink, PanTo,
                             PlayClip, ShowWarning, ShowView>;

struct Effect {
  Millis t = 0;
  UIEvent event;
  friend bool operator==(const Effect&, const Effect&) = default;
};

struct Transition {
  PlaybackState state;
  std::vector<Effect> effects;
};

class PlaybackError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SentenceInfo {
  std::string region_id;
  int page_index = 0;
  Millis t_start = 0;
  Millis t_end = 0;
};

class Engine {
 public:
  explicit Engine(Bundle bundle, PlaybackConfig config = {});

  const Bundle& bundle() const { return bundle_; }
  const PlaybackConfig& config() const { return config_; }
  const std::vector<SentenceInfo>& sentences() const { return sentences_; }

  PlaybackState initial_state() const { return {}; }

  // Emits effects for script events up to new_clock_ms. A paused state is
  // returned unchanged. Throws PlaybackError if the clock runs backwards.
  Transition advance(const PlaybackState& state, Millis new_clock_ms) const;

  // Throws PlaybackError for SelectRegion on an unknown region.
  Transition apply(const PlaybackState& state, const Command& command) const;

  // Sentence index reached from origin after the given wheel rotation,
  // ignoring document ends.
  int wheel_offset(double accumulated_degrees) const;

 private:
  struct Emitter;

  void seek(PlaybackState& state, Millis t) const;
  void process(PlaybackState& state, const ScriptEvent& event, Emitter& out) const;
  void set_page(PlaybackState& state, int page, Emitter& out) const;
  BoundingBox focus_viewport(const PlaybackState& state, int page) const;
  void select_region(PlaybackState& state, const Region& region, Emitter& out) const;
  void wheel_move(PlaybackState& state, double delta, Emitter& out) const;

  Bundle bundle_;
  PlaybackConfig config_;
  std::vector<Millis> event_times_;
  std::vector<SentenceInfo> sentences_;
  std::map<std::string, int, std::less<>> region_first_sentence_;
  std::map<std::string, const Link*, std::less<>> links_;
};

// Headless trace files: one command or clock step per line.
struct AdvanceStep {
  Millis ms = 0;
  bool relative = false;
};
using TraceStep = std::variant<Command, AdvanceStep>;

// Throws std::invalid_argument naming the offending line.
std::vector<TraceStep> parse_trace(std::string_view text);

// Runs the steps from the initial state and returns every effect in order.
std::vector<Effect> run_trace(const Engine& engine, const std::vector<TraceStep>& steps,
                              PlaybackState* final_state = nullptr);

std::string format_effect(const Effect& effect);
std::string format_view(const ViewState& view);
std::string format_number(double value);

}  // namespace eyesfree
