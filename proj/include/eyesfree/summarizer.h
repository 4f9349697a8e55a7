// One keyphrase per region, for announcements during wheel scrubbing.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eyesfree/docmodel.h"

namespace eyesfree {

inline constexpr int kMaxKeyphraseWords = 4;
inline constexpr double kFirstSentenceBonus = 1.5;

bool is_stopword(std::string_view lowercase_token);

struct CorpusStats {
  int region_count = 0;                   // text-bearing regions
  std::map<std::string, int> doc_freq;  // lowercased term -> regions containing it
};

CorpusStats corpus_stats(const Document& document);

// Lowercased terms eligible for scoring (length >= 2, not a stopword).
bool is_index_term(std::string_view lowercase_token);

// Scorer for a region; the default is tf-idf over regions with a
// first-sentence position bonus.
class KeyphraseScorer {
 public:
  virtual ~KeyphraseScorer() = default;
  virtual std::optional<Keyphrase> summarize(const Region& region,
                                             const CorpusStats& stats) const = 0;
};

class TfIdfScorer : public KeyphraseScorer {
 public:
  std::optional<Keyphrase> summarize(const Region& region,
                                     const CorpusStats& stats) const override;
};

std::optional<Keyphrase> summarize_region(const Region& region, const CorpusStats& stats);

// Keyphrases for every text-bearing region in reading order.
std::vector<Keyphrase> summarize_document(const Document& document,
                                          const KeyphraseScorer& scorer = TfIdfScorer());

}  // namespace eyesfree
