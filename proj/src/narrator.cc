#include "eyesfree/narrator.h"

#include <map>
#include <sstream>
#include <type_traits>
#include <utility>

#include "eyesfree/text.h"

namespace eyesfree {

MockTiming::MockTiming(TimingConfig config) : config_(std::move(config)) {}

Millis MockTiming::word_duration(std::string_view word) const {
  return config_.base_ms + config_.per_char_ms * static_cast<Millis>(text::utf8_length(word));
}

Millis event_time(const ScriptEvent& event) {
  return std::visit(
      [](const auto& e) -> Millis {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, SpeakSpan> || std::is_same_v<T, Warning>) {
          return e.t_start;
        } else {
          return e.t;
        }
      },
      event);
}

namespace {

struct WordKey {
  int sentence;
  std::size_t word;
  auto operator<=>(const WordKey&) const = default;
};

Millis positive(Millis value, const char* what) {
  if (value <= 0) {
    throw CompileError(std::string("timing model returned non-positive ") + what);
  }
  return value;
}

// Gaps may be zero: words then abut.
Millis non_negative(Millis value, const char* what) {
  if (value < 0) {
    throw CompileError(std::string("timing model returned negative ") + what);
  }
  return value;
}

}  // namespace

ReadingScript compile_script(const Document& document, const std::vector<Sentence>& sentences,
                             const std::vector<Link>& links, const TtsTiming& timing,
                             const NarrationOptions& options) {
  ReadingScript script;
  script.document_id = document.id;
  script.timing = timing.config();

  const Millis gap = non_negative(timing.inter_word_gap(), "inter-word gap");
  const Millis pause = non_negative(timing.inter_sentence_pause(), "inter-sentence pause");
  const Millis warning = positive(timing.warning_duration(), "warning duration");

  std::vector<const Region*> sentence_region;
  std::vector<std::vector<text::Piece>> sentence_words;
  for (const Sentence& s : sentences) {
    const Region* region = document.find_region(s.span.region_id);
    if (!region || s.span.char_end > region->text.size() ||
        s.span.char_start >= s.span.char_end) {
      throw CompileError("sentence " + std::to_string(s.index) + " does not lie in region " +
                         s.span.region_id);
    }
    std::string_view body =
        std::string_view(region->text).substr(s.span.char_start, s.span.char_end - s.span.char_start);
    auto words = text::whitespace_words(body);
    for (auto& w : words) {
      w.begin += s.span.char_start;
      w.end += s.span.char_start;
    }
    sentence_region.push_back(region);
    sentence_words.push_back(std::move(words));
  }

  // Each link fires on the word holding the first character of its source.
  std::map<WordKey, std::vector<std::string>> triggers;
  for (const Link& link : links) {
    bool placed = false;
    for (std::size_t s = 0; s < sentences.size() && !placed; ++s) {
      if (sentences[s].span.region_id != link.source.region_id) continue;
      const auto& words = sentence_words[s];
      for (std::size_t w = 0; w < words.size(); ++w) {
        if (link.source.char_start >= words[w].begin && link.source.char_start < words[w].end) {
          triggers[{static_cast<int>(s), w}].push_back(link.id);
          placed = true;
          break;
        }
      }
    }
    if (!placed) {
      throw CompileError("link " + link.id + " (" + link.label +
                         ") does not start inside any spoken word");
    }
  }

  auto& events = script.events;
  Millis t = 0;
  int page = 0;
  const Region* current = nullptr;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    const Region* region = sentence_region[s];
    if (region != current) {
      current = region;
      for (; page < region->page_index; ++page) events.push_back(PageBoundary{t, page + 1});
      if (document.source_kind == SourceKind::kScanned && region->ocr_confidence &&
          *region->ocr_confidence < options.warning_threshold) {
        events.push_back(Warning{t, t + warning, region->id, std::string(kOcrWarningText)});
        t += warning;
      }
      events.push_back(RegionStart{t, region->id});
    }

    const auto& words = sentence_words[s];
    const std::string_view region_text = region->text;
    for (std::size_t w = 0; w < words.size(); ++w) {
      if (w > 0) t += gap;
      Millis d = positive(
          timing.word_duration(region_text.substr(words[w].begin, words[w].size())),
          "word duration");
      events.push_back(SpeakSpan{t, t + d, {region->id, words[w].begin, words[w].end},
                                 sentences[s].index});
      if (auto it = triggers.find({static_cast<int>(s), w}); it != triggers.end()) {
        for (const std::string& id : it->second) events.push_back(LinkTrigger{t, id});
      }
      t += d;
    }
    events.push_back(SentenceBoundary{t, sentences[s].index});
    if (s + 1 < sentences.size()) t += pause;
  }
  const int last_page = static_cast<int>(document.pages.size()) - 1;
  for (; page < last_page; ++page) events.push_back(PageBoundary{t, page + 1});
  events.push_back(DocumentEnd{t});
  return script;
}

std::vector<ClipPlanEntry> sentence_clip_plan(const ReadingScript& script) {
  std::vector<ClipPlanEntry> out;
  std::map<int, Millis> starts;
  for (const ScriptEvent& event : script.events) {
    if (const auto* speak = std::get_if<SpeakSpan>(&event)) {
      starts.try_emplace(speak->sentence_index, speak->t_start);
    } else if (const auto* boundary = std::get_if<SentenceBoundary>(&event)) {
      auto it = starts.find(boundary->sentence_index);
      Millis start = it == starts.end() ? boundary->t : it->second;
      out.push_back({boundary->sentence_index, start, boundary->t});
    }
  }
  return out;
}

namespace {

std::string quoted(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_event(const ScriptEvent& event) {
  std::ostringstream os;
  os << event_time(event) << ' ';
  std::visit(
      [&os](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, SpeakSpan>) {
          os << "speak end=" << e.t_end << " sentence=" << e.sentence_index
             << " span=" << e.span.region_id << ':' << e.span.char_start << '-'
             << e.span.char_end;
        } else if constexpr (std::is_same_v<T, SentenceBoundary>) {
          os << "sentence_boundary sentence=" << e.sentence_index;
        } else if constexpr (std::is_same_v<T, LinkTrigger>) {
          os << "link_trigger link=" << e.link_id;
        } else if constexpr (std::is_same_v<T, Warning>) {
          os << "warning end=" << e.t_end << " region=" << e.region_id
             << " text=" << quoted(e.text);
        } else if constexpr (std::is_same_v<T, RegionStart>) {
          os << "region_start region=" << e.region_id;
        } else if constexpr (std::is_same_v<T, PageBoundary>) {
          os << "page_boundary page=" << e.page_index;
        } else {
          os << "document_end";
        }
      },
      event);
  return os.str();
}

}  // namespace eyesfree
