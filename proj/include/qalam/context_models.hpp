#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "qalam/lexicon.hpp"

namespace qalam {

/// Boundary marker used to pad POS windows at sentence edges and to stand
/// in for a missing POS tag.
inline constexpr std::string_view kBoundaryPos = "#";

/// The most frequent lemmas of the training corpus (list L), sorted by
/// descending frequency with lexicographic tie-break.
struct TopLemmaList {
  std::vector<std::pair<std::string, std::uint64_t>> lemmas;
  std::unordered_set<std::string> members;

  bool contains(std::string_view lemma) const {
    return members.count(std::string(lemma)) > 0;
  }
  static TopLemmaList build(const std::vector<Sentence>& corpus,
                            std::size_t limit = 5000);
};

/// POS-trigram tables per frequent lemma. The slot records where the
/// target lemma sits in the window: first (left), middle (mid) or last
/// (right).
struct CollocationSlots {
  std::map<std::string, std::uint64_t> tables[3];  // left, mid, right
  std::uint64_t totals[3] = {0, 0, 0};
};

struct CollocationFeatures {
  double left = 0, mid = 0, right = 0, product = 0;
};

/// Context-lemma counts per frequent lemma, from radius-10 windows over
/// stop-word-free lemmatized sentences.
struct CooccurrenceTable {
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;
  std::uint64_t max_count = 0;
};

struct CooccurrenceDistances {
  double d1 = 0;  // share of context lemmas found in the trained table
  double d2 = 0;  // sum of context counts normalized by the table maximum
  double d3 = 0;  // size of the trained table (context independent)
};

struct ContextModels {
  TopLemmaList top;
  std::unordered_map<std::string, CollocationSlots> collocation;
  std::unordered_map<std::string, CooccurrenceTable> cooccurrence;
};

/// Lemmas of the sentence's content words: stop-words, punctuation and
/// digits are dropped; a missing lemma falls back to the surface.
std::vector<std::string> content_lemmas(const Sentence& sentence,
                                        const Lexicon& lexicon);

ContextModels train_context_models(const std::vector<Sentence>& corpus,
                                   const Lexicon& lexicon,
                                   std::size_t top_limit = 5000,
                                   std::size_t radius = 10);

/// Normalized slot counts of the POS 5-window centered on the candidate
/// slot; zeros when the lemma is outside L or a table is empty.
CollocationFeatures collocation_features(
    const ContextModels& models, std::string_view lemma,
    const std::array<std::string, 5>& pos_window);

/// d1/d2/d3 for target lemma b against the reduced context window.
CooccurrenceDistances cooccurrence_distances(
    const ContextModels& models, std::string_view lemma,
    const std::vector<std::string>& context);

/// Sectioned TSV (#L, #COLL <lemma> <slot>, #COOC <lemma>), deterministic
/// ordering.
void save_context_models(const ContextModels& models, const std::string& path);
ContextModels load_context_models(const std::string& path);

}  // namespace qalam
