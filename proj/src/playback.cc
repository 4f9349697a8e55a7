#include "eyesfree/playback.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "eyesfree/text.h"

namespace eyesfree {

BoundingBox fit_region(const BoundingBox& target, const Page& page, double screen_aspect,
                       double margin_frac) {
  if (!(screen_aspect > 0)) throw std::invalid_argument("fit_region: screen aspect must be > 0");
  if (!(margin_frac >= 0 && margin_frac < 0.5)) {
    throw std::invalid_argument("fit_region: margin must be in [0, 0.5)");
  }
  if (!(target.w > 0 && target.h > 0 && target.x >= 0 && target.y >= 0 &&
        target.right() <= page.width && target.bottom() <= page.height)) {
    throw std::invalid_argument("fit_region: target must lie within the page");
  }

  const double need_w = target.w * (1 + 2 * margin_frac);
  const double need_h = target.h * (1 + 2 * margin_frac);
  double w = need_w;
  double h = need_h;
  if (need_w / need_h >= screen_aspect) {
    h = need_w / screen_aspect;
  } else {
    w = need_h * screen_aspect;
  }

  auto place = [](double center, double size, double limit) {
    if (size >= limit) return (limit - size) / 2;
    return std::clamp(center - size / 2, 0.0, limit - size);
  };
  return {place(target.center_x(), w, page.width), place(target.center_y(), h, page.height), w,
          h};
}

namespace {

// Keeps the viewport size and moves it into the page.
BoundingBox clamp_into(BoundingBox v, const Page& page) {
  auto place = [](double pos, double size, double limit) {
    if (size >= limit) return (limit - size) / 2;
    return std::clamp(pos, 0.0, limit - size);
  };
  v.x = place(v.x, v.w, page.width);
  v.y = place(v.y, v.h, page.height);
  return v;
}

int view_page(const ViewState& view) {
  if (const auto* p = std::get_if<PageView>(&view)) return p->page_index;
  if (const auto* t = std::get_if<TextView>(&view)) return t->page_index;
  return -1;
}

}  // namespace

struct Engine::Emitter {
  Millis t = 0;
  std::vector<Effect> effects;
  void operator()(UIEvent e) { effects.push_back({t, std::move(e)}); }
};

Engine::Engine(Bundle bundle, PlaybackConfig config)
    : bundle_(std::move(bundle)), config_(config) {
  if (!(config_.wheel_quantum_degrees > 0)) {
    throw std::invalid_argument("wheel quantum must be > 0");
  }
  for (const ScriptEvent& e : bundle_.script.events) {
    const Millis t = event_time(e);
    if (!event_times_.empty() && t < event_times_.back()) {
      throw std::invalid_argument("script events are not sorted by time");
    }
    event_times_.push_back(t);
    if (const auto* speak = std::get_if<SpeakSpan>(&e)) {
      const int idx = speak->sentence_index;
      if (idx == static_cast<int>(sentences_.size())) {
        const Region* region = bundle_.document.find_region(speak->span.region_id);
        if (!region) throw std::invalid_argument("script names unknown region");
        sentences_.push_back({region->id, region->page_index, speak->t_start, speak->t_end});
        region_first_sentence_.try_emplace(region->id, idx);
      } else if (idx != static_cast<int>(sentences_.size()) - 1) {
        throw std::invalid_argument("script sentences are not contiguous");
      }
      sentences_.back().t_end = speak->t_end;
    }
  }
  for (const Link& link : bundle_.links) links_.emplace(link.id, &link);
}

int Engine::wheel_offset(double accumulated_degrees) const {
  // Summed float deltas drift; 359.9999999 is a full turn.
  constexpr double kSlack = 1e-9;
  const double steps = accumulated_degrees / config_.wheel_quantum_degrees;
  return static_cast<int>(std::trunc(steps + std::copysign(kSlack, steps)));
}

void Engine::seek(PlaybackState& state, Millis t) const {
  state.clock_ms = t;
  state.event_cursor = static_cast<std::size_t>(
      std::lower_bound(event_times_.begin(), event_times_.end(), t) - event_times_.begin());
  state.current_sentence.reset();
}

void Engine::set_page(PlaybackState& state, int page, Emitter& out) const {
  if (auto* p = std::get_if<PageView>(&state.view)) {
    if (p->page_index == page) return;
    p->page_index = page;
  } else if (auto* t = std::get_if<TextView>(&state.view)) {
    if (t->page_index == page) return;
    t->page_index = page;
    t->viewport = clamp_into({t->viewport.x, 0, t->viewport.w, t->viewport.h},
                             bundle_.document.pages[page]);
  } else {
    return;
  }
  out(ShowView{state.view});
}

BoundingBox Engine::focus_viewport(const PlaybackState& state, int page) const {
  const Page& p = bundle_.document.pages[page];
  const Region* focus = nullptr;
  if (state.current_sentence) {
    const Region* r = bundle_.document.find_region(sentences_[*state.current_sentence].region_id);
    if (r && r->page_index == page) focus = r;
  }
  if (!focus) {
    for (const std::string& id : bundle_.document.reading_order) {
      const Region* r = bundle_.document.find_region(id);
      if (r && r->page_index == page) {
        focus = r;
        break;
      }
    }
  }
  BoundingBox target = focus ? focus->bbox : BoundingBox{0, 0, p.width, p.height};
  return fit_region(target, p, config_.screen_aspect, config_.margin_frac);
}

void Engine::process(PlaybackState& state, const ScriptEvent& event, Emitter& out) const {
  if (const auto* speak = std::get_if<SpeakSpan>(&event)) {
    if (state.current_sentence != speak->sentence_index) {
      state.current_sentence = speak->sentence_index;
      out(HighlightSentence{speak->sentence_index});
      out(PlayClip{SentenceClip{speak->sentence_index}});
    }
  } else if (std::holds_alternative<SentenceBoundary>(event)) {
    if (state.wheel.engaged) out(Vibrate{config_.boundary_vibrate_ms});
  } else if (const auto* trigger = std::get_if<LinkTrigger>(&event)) {
    auto it = links_.find(trigger->link_id);
    if (it == links_.end()) throw PlaybackError("script triggers unknown link " + trigger->link_id);
    const Region* target = bundle_.document.find_region(it->second->target_region);
    out(Vibrate{config_.link_vibrate_ms});
    if (target && std::holds_alternative<TextView>(state.view)) {
      set_page(state, target->page_index, out);
      auto& text_view = std::get<TextView>(state.view);
      text_view.viewport = fit_region(target->bbox, bundle_.document.pages[target->page_index],
                                      config_.screen_aspect, config_.margin_frac);
      out(PanTo{text_view.viewport, config_.pan_animate_ms});
    } else {
      out(HighlightLink{trigger->link_id});
    }
  } else if (const auto* warning = std::get_if<Warning>(&event)) {
    out(ShowWarning{warning->region_id});
  } else if (const auto* page = std::get_if<PageBoundary>(&event)) {
    set_page(state, page->page_index, out);
  } else if (std::holds_alternative<DocumentEnd>(event)) {
    state.playing = false;
  }
}

Transition Engine::advance(const PlaybackState& state, Millis new_clock_ms) const {
  if (new_clock_ms < state.clock_ms) {
    throw PlaybackError("clock regression: " + std::to_string(new_clock_ms) + " < " +
                        std::to_string(state.clock_ms));
  }
  Transition out{state, {}};
  if (!state.playing) return out;

  PlaybackState& s = out.state;
  Emitter emit;
  const auto& events = bundle_.script.events;
  while (s.playing && s.event_cursor < events.size() &&
         event_times_[s.event_cursor] <= new_clock_ms) {
    const ScriptEvent& event = events[s.event_cursor++];
    emit.t = event_times_[s.event_cursor - 1];
    process(s, event, emit);
    if (!s.playing) s.clock_ms = emit.t;  // stopped at the document end
  }
  if (s.playing) s.clock_ms = new_clock_ms;
  out.effects = std::move(emit.effects);
  return out;
}

void Engine::select_region(PlaybackState& state, const Region& region, Emitter& out) const {
  out(HighlightRegion{region.id});
  if (std::holds_alternative<DocumentView>(state.view)) {
    state.view = PageView{region.page_index};
    out(ShowView{state.view});
  } else {
    set_page(state, region.page_index, out);
  }
  auto it = region_first_sentence_.find(region.id);
  if (it == region_first_sentence_.end()) return;  // nothing to read here
  state.wheel = {};
  seek(state, sentences_[it->second].t_start);
  state.playing = true;
}

void Engine::wheel_move(PlaybackState& state, double delta, Emitter& out) const {
  const int count = static_cast<int>(sentences_.size());
  WheelState& wheel = state.wheel;
  if (!wheel.engaged) {
    int origin = 0;
    if (state.current_sentence) {
      origin = *state.current_sentence;
    } else {
      const int page = view_page(state.view);
      for (int i = 0; i < count; ++i) {
        if (sentences_[i].page_index >= page) {
          origin = i;
          break;
        }
      }
    }
    wheel = WheelState{true, 0, origin, origin, 0};
    state.playing = false;
  }

  wheel.accumulated_degrees += delta;
  const double quantum = config_.wheel_quantum_degrees;
  const int target = wheel.origin_sentence + wheel_offset(wheel.accumulated_degrees);
  while (wheel.cursor_sentence != target) {
    const int step = target > wheel.cursor_sentence ? 1 : -1;
    const int next = wheel.cursor_sentence + step;
    if (next < 0 || next >= count) {
      if (wheel.pinned != step) {
        out(PlayClip{Notice{NoticeKind::kDocumentBoundary}});
        wheel.pinned = step;
      }
      // Park inside the last reachable step so further motion stays pinned.
      wheel.accumulated_degrees =
          (wheel.cursor_sentence - wheel.origin_sentence + step * 0.5) * quantum;
      break;
    }
    wheel.pinned = 0;
    const SentenceInfo& from = sentences_[wheel.cursor_sentence];
    const SentenceInfo& to = sentences_[next];
    wheel.cursor_sentence = next;
    out(Vibrate{config_.boundary_vibrate_ms});
    out(HighlightSentence{next});
    if (to.page_index != from.page_index) {
      set_page(state, to.page_index, out);
      out(PlayClip{Notice{NoticeKind::kPageBoundary}});
    }
    if (to.region_id != from.region_id) out(PlayClip{KeyphraseClip{to.region_id}});
  }
}

Transition Engine::apply(const PlaybackState& state, const Command& command) const {
  Transition out{state, {}};
  PlaybackState& s = out.state;
  Emitter emit;
  emit.t = s.clock_ms;
  const bool in_document_view = std::holds_alternative<DocumentView>(s.view);
  const auto& pages = bundle_.document.pages;

  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, SelectDocument>) {
          if (c.doc_id != bundle_.document.id || pages.empty()) return;
          s = PlaybackState{};
          s.view = PageView{0};
          emit(ShowView{s.view});
        } else if constexpr (std::is_same_v<T, SelectRegion>) {
          const Region* region = bundle_.document.find_region(c.region_id);
          if (!region) throw PlaybackError("unknown region " + c.region_id);
          select_region(s, *region, emit);
        } else if constexpr (std::is_same_v<T, PressAt>) {
          if (in_document_view) return;
          const Page& page = pages[view_page(s.view)];
          const Region* hit = nullptr;
          for (const Region& r : page.regions) {
            if (!r.bbox.contains(c.x, c.y)) continue;
            // Prefer narrated regions, then the smaller box.
            auto rank = [](const Region* x) {
              return std::make_pair(!is_text_bearing(x->kind), x->bbox.w * x->bbox.h);
            };
            if (!hit || rank(&r) < rank(hit)) hit = &r;
          }
          if (hit) select_region(s, *hit, emit);
        } else if constexpr (std::is_same_v<T, TogglePlay>) {
          if (in_document_view) return;
          s.playing = !s.playing;
          if (s.playing && s.event_cursor >= bundle_.script.events.size()) seek(s, 0);
        } else if constexpr (std::is_same_v<T, ZoomToggle>) {
          if (const auto* p = std::get_if<PageView>(&s.view)) {
            s.view = TextView{p->page_index, focus_viewport(s, p->page_index)};
          } else if (const auto* t = std::get_if<TextView>(&s.view)) {
            s.view = PageView{t->page_index};
          } else {
            return;
          }
          emit(ShowView{s.view});
        } else if constexpr (std::is_same_v<T, Flick>) {
          if (in_document_view) return;
          const int page = view_page(s.view);
          const int next = c.direction == FlickDirection::kNext ? page + 1 : page - 1;
          if (next < 0 || next >= static_cast<int>(pages.size())) return;
          set_page(s, next, emit);
        } else if constexpr (std::is_same_v<T, WheelMove>) {
          if (in_document_view || sentences_.empty()) return;
          wheel_move(s, c.delta_degrees, emit);
        } else if constexpr (std::is_same_v<T, WheelRelease>) {
          if (!s.wheel.engaged) return;
          const int cursor = s.wheel.cursor_sentence;
          s.wheel = {};
          seek(s, sentences_[cursor].t_start);
          s.playing = true;
        }
      },
      command);
  out.effects = std::move(emit.effects);
  return out;
}

namespace {

std::string trim_copy(std::string_view s) { return std::string(text::trim(s)); }

double parse_double(const std::string& token, std::size_t line) {
  double v = 0;
  auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || end != token.data() + token.size()) {
    throw std::invalid_argument("trace line " + std::to_string(line) + ": bad number \"" +
                                token + "\"");
  }
  return v;
}

}  // namespace

std::vector<TraceStep> parse_trace(std::string_view text) {
  std::vector<TraceStep> steps;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim_copy(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    std::istringstream words(line);
    std::vector<std::string> w;
    for (std::string tok; words >> tok;) w.push_back(tok);
    auto fail = [&](const std::string& why) {
      return std::invalid_argument("trace line " + std::to_string(line_no) + ": " + why);
    };
    auto arity = [&](std::size_t n) {
      if (w.size() != n + 1) throw fail("\"" + w[0] + "\" takes " + std::to_string(n) + " argument(s)");
    };

    const std::string& op = w[0];
    if (op == "advance") {
      arity(1);
      bool relative = w[1][0] == '+';
      double ms = parse_double(relative ? w[1].substr(1) : w[1], line_no);
      if (ms < 0 || ms != std::floor(ms)) throw fail("advance takes whole non-negative ms");
      steps.push_back(AdvanceStep{static_cast<Millis>(ms), relative});
    } else if (op == "select_document") {
      arity(1);
      steps.push_back(Command{SelectDocument{w[1]}});
    } else if (op == "select_region") {
      arity(1);
      steps.push_back(Command{SelectRegion{w[1]}});
    } else if (op == "press") {
      arity(2);
      steps.push_back(Command{PressAt{parse_double(w[1], line_no), parse_double(w[2], line_no)}});
    } else if (op == "toggle_play") {
      arity(0);
      steps.push_back(Command{TogglePlay{}});
    } else if (op == "zoom") {
      arity(0);
      steps.push_back(Command{ZoomToggle{}});
    } else if (op == "flick") {
      arity(1);
      if (w[1] != "next" && w[1] != "prev") throw fail("flick takes next or prev");
      steps.push_back(
          Command{Flick{w[1] == "next" ? FlickDirection::kNext : FlickDirection::kPrev}});
    } else if (op == "wheel") {
      arity(1);
      steps.push_back(Command{WheelMove{parse_double(w[1], line_no)}});
    } else if (op == "wheel_release") {
      arity(0);
      steps.push_back(Command{WheelRelease{}});
    } else {
      throw fail("unknown step \"" + op + "\"");
    }
  }
  return steps;
}

std::vector<Effect> run_trace(const Engine& engine, const std::vector<TraceStep>& steps,
                              PlaybackState* final_state) {
  PlaybackState state = engine.initial_state();
  std::vector<Effect> effects;
  for (const TraceStep& step : steps) {
    Transition t = std::visit(
        [&](const auto& s) -> Transition {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, AdvanceStep>) {
            return engine.advance(state, s.relative ? state.clock_ms + s.ms : s.ms);
          } else {
            return engine.apply(state, s);
          }
        },
        step);
    state = std::move(t.state);
    effects.insert(effects.end(), std::make_move_iterator(t.effects.begin()),
                   std::make_move_iterator(t.effects.end()));
  }
  if (final_state) *final_state = state;
  return effects;
}

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

namespace {

std::string format_box(const BoundingBox& b) {
  return format_number(b.x) + "," + format_number(b.y) + "," + format_number(b.w) + "," +
         format_number(b.h);
}

}  // namespace

std::string format_view(const ViewState& view) {
  if (const auto* d = std::get_if<DocumentView>(&view)) {
    return d->selected_doc ? "view=document doc=" + *d->selected_doc : "view=document";
  }
  if (const auto* p = std::get_if<PageView>(&view)) {
    return "view=page page=" + std::to_string(p->page_index);
  }
  const auto& t = std::get<TextView>(view);
  return "view=text page=" + std::to_string(t.page_index) + " viewport=" + format_box(t.viewport);
}

std::string format_effect(const Effect& effect) {
  std::ostringstream os;
  os << effect.t << ' ';
  std::visit(
      [&os](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, HighlightSentence>) {
          os << "HighlightSentence sentence=" << e.sentence_index;
        } else if constexpr (std::is_same_v<T, HighlightRegion>) {
          os << "HighlightRegion region=" << e.region_id;
        } else if constexpr (std::is_same_v<T, Vibrate>) {
          os << "Vibrate duration_ms=" << e.duration_ms;
        } else if constexpr (std::is_same_v<T, HighlightLink>) {
          os << "HighlightLink link=" << e.link_id;
        } else if constexpr (std::is_same_v<T, PanTo>) {
          os << "PanTo viewport=" << format_box(e.viewport) << " animate_ms=" << e.animate_ms;
        } else if constexpr (std::is_same_v<T, PlayClip>) {
          os << "PlayClip ";
          if (const auto* k = std::get_if<KeyphraseClip>(&e.clip)) {
            os << "clip=keyphrase region=" << k->region_id;
          } else if (const auto* s = std::get_if<SentenceClip>(&e.clip)) {
            os << "clip=sentence sentence=" << s->sentence_index;
          } else {
            os << "clip=notice kind="
               << (std::get<Notice>(e.clip).kind == NoticeKind::kPageBoundary ? "page_boundary"
                                                                                : "document_boundary");
          }
        } else if constexpr (std::is_same_v<T, ShowWarning>) {
          os << "ShowWarning region=" << e.region_id;
        } else {
          os << "ShowView " << format_view(e.view);
        }
      },
      effect.event);
  return os.str();
}

}  // namespace eyesfree
