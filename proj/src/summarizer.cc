#include "eyesfree/summarizer.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "eyesfree/ingest.h"
#include "eyesfree/text.h"

namespace eyesfree {

namespace {

// Sorted, for binary search.
constexpr std::array<std::string_view, 127> kStopwords = {
    "a",       "about",   "above",  "after",   "again",   "against", "all",     "also",
    "am",      "an",      "and",    "any",     "are",     "as",      "at",      "be",
    "because", "been",    "before", "being",   "below",   "between", "both",    "but",
    "by",      "can",     "could",  "did",     "do",      "does",    "doing",   "down",
    "during",  "each",    "either", "few",     "for",     "from",    "further", "had",
    "has",     "have",    "having", "he",      "her",     "here",    "hers",    "him",
    "his",     "how",     "however", "i",      "if",      "in",      "into",    "is",
    "it",      "its",     "itself", "just",    "may",     "me",      "might",   "more",
    "most",    "much",    "must",   "my",      "no",      "nor",     "not",     "now",
    "of",      "off",     "on",     "once",    "only",    "or",      "other",   "our",
    "ours",    "out",     "over",   "own",     "same",    "she",     "should",  "so",
    "some",    "such",    "than",   "that",    "the",     "their",   "them",    "then",
    "there",   "these",   "they",   "this",    "those",   "through", "to",      "too",
    "under",   "until",   "up",     "upon",    "us",      "very",    "was",     "we",
    "were",    "what",    "when",   "where",   "which",   "while",   "who",     "whom",
    "why",     "will",    "with",   "within",  "would",   "you",     "your",
};

static_assert(std::is_sorted(kStopwords.begin(), kStopwords.end()));

struct Token {
  text::Piece piece;
  std::string term;
  int sentence = 0;
};

}  // namespace

bool is_stopword(std::string_view lowercase_token) {
  return std::binary_search(kStopwords.begin(), kStopwords.end(), lowercase_token);
}

bool is_index_term(std::string_view lowercase_token) {
  return lowercase_token.size() >= 2 && !is_stopword(lowercase_token);
}

CorpusStats corpus_stats(const Document& document) {
  CorpusStats stats;
  for (const Page& page : document.pages) {
    for (const Region& region : page.regions) {
      if (!is_text_bearing(region.kind)) continue;
      ++stats.region_count;
      std::set<std::string> terms;
      for (const text::Piece& p : text::alnum_tokens(region.text)) {
        std::string term = text::lowercase(std::string_view(region.text).substr(p.begin, p.size()));
        if (is_index_term(term)) terms.insert(std::move(term));
      }
      for (const std::string& term : terms) ++stats.doc_freq[term];
    }
  }
  return stats;
}

std::optional<Keyphrase> TfIdfScorer::summarize(const Region& region,
                                                const CorpusStats& stats) const {
  const std::string_view body = region.text;
  const auto sentences = split_sentences(region.id, body);

  std::vector<Token> tokens;
  std::map<std::string, int> tf;
  for (const text::Piece& p : text::alnum_tokens(body)) {
    Token t{p, text::lowercase(body.substr(p.begin, p.size())), 0};
    while (t.sentence + 1 < static_cast<int>(sentences.size()) &&
           p.begin >= sentences[t.sentence].char_end) {
      ++t.sentence;
    }
    ++tf[t.term];
    tokens.push_back(std::move(t));
  }

  const double regions = std::max(1, stats.region_count);
  auto weight = [&](const std::string& term) {
    if (!is_index_term(term)) return 0.0;
    auto it = stats.doc_freq.find(term);
    double df = it == stats.doc_freq.end() ? 1.0 : std::max(1, it->second);
    return tf[term] * (1.0 + std::log(regions / df));
  };

  std::optional<Keyphrase> best;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!is_index_term(tokens[i].term)) continue;
    double sum = 0;
    for (std::size_t n = 1; n <= kMaxKeyphraseWords && i + n <= tokens.size(); ++n) {
      const Token& last = tokens[i + n - 1];
      if (last.sentence != tokens[i].sentence) break;
      sum += weight(last.term);
      if (!is_index_term(last.term)) continue;
      double score = sum / std::sqrt(static_cast<double>(n));
      if (tokens[i].sentence == 0) score *= kFirstSentenceBonus;
      if (!best || score > best->score) {
        best = Keyphrase{region.id,
                         std::string(body.substr(tokens[i].piece.begin,
                                                 last.piece.end - tokens[i].piece.begin)),
                         score};
      }
    }
  }
  return best;
}

std::optional<Keyphrase> summarize_region(const Region& region, const CorpusStats& stats) {
  return TfIdfScorer().summarize(region, stats);
}

std::vector<Keyphrase> summarize_document(const Document& document,
                                          const KeyphraseScorer& scorer) {
  const CorpusStats stats = corpus_stats(document);
  std::vector<Keyphrase> out;
  for (const std::string& id : document.reading_order) {
    const Region* region = document.find_region(id);
    if (!region) continue;
    if (auto k = scorer.summarize(*region, stats)) out.push_back(std::move(*k));
  }
  return out;
}

}  // namespace eyesfree
