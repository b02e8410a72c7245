#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace qalam {

inline constexpr std::string_view kSentenceBegin = "<s>";
inline constexpr std::string_view kSentenceEnd = "</s>";
inline constexpr std::string_view kUnknown = "<unk>";
inline constexpr int kLmOrder = 3;

/// Raw n-gram counts for orders 1..3, keyed by space-joined tokens.
/// Sentences are padded with two begin markers and one end marker;
/// n-grams of order >= 2 ending in the begin marker are not counted,
/// while unigram counts include the begin markers themselves.
struct NgramCounts {
  std::array<std::unordered_map<std::string, std::uint64_t>, kLmOrder> counts;
  std::set<std::string> vocabulary;  // includes <s>, </s>, <unk>

  std::uint64_t get(int order, const std::string& key) const {
    const auto& table = counts[order - 1];
    auto it = table.find(key);
    return it == table.end() ? 0 : it->second;
  }
};

/// Counts n-grams over normalized sentences. Tokens outside `vocabulary`
/// are counted as the unknown marker. Throws on an empty corpus.
NgramCounts count_ngrams(const std::vector<std::vector<std::string>>& corpus,
                         const std::set<std::string>& vocabulary);

/// Interpolated modified Kneser-Ney trigram model.
///
/// Storage follows the ARPA backoff convention: each stored n-gram carries
/// its interpolated probability, and each n-gram that acts as a context
/// carries the backoff weight gamma. Entries with log10 probability of -99
/// are context placeholders (e.g. "<s>" and "<s> <s>") that are never
/// predicted. The unigram table is complete over the prediction vocabulary
/// so the file is self-contained.
class LanguageModel {
 public:
  struct Entry {
    double logp = 0;       // natural log of the probability
    double logbo = 0;      // natural log of the backoff weight
    bool has_backoff = false;
  };

  /// Per-order tables, keys space-joined.
  std::array<std::unordered_map<std::string, Entry>, kLmOrder> table;
  /// Prediction vocabulary: every surface the model can predict
  /// (includes </s> and <unk>, excludes <s>). Sorted.
  std::vector<std::string> vocab_pred;

  /// Estimation metadata. discounts[order-1] = {D1, D2, D3+}.
  std::array<std::array<double, 3>, kLmOrder> discounts{};
  std::array<bool, kLmOrder> discount_fallback{};

  bool in_vocabulary(std::string_view word) const {
    return vocab_.count(std::string(word)) > 0;
  }
  void rebuild_vocab_index();

 private:
  std::unordered_set<std::string> vocab_;
};

/// Chen-Goodman modified Kneser-Ney estimation with interpolation.
/// Lower orders use continuation counts; discounts come from the
/// count-of-counts at each order, falling back to a fixed 0.5 when n1 or
/// n2 is zero (reported in discount_fallback). Throws when some order has
/// no counts.
LanguageModel estimate_mkn(const NgramCounts& counts);

/// Smoothed probability of `word` given up to two preceding surfaces
/// (context = {prev2, prev1}, earlier first). Out-of-vocabulary surfaces
/// map to the unknown marker. Strictly positive.
double ngram_prob(const LanguageModel& lm, std::string_view word,
                  const std::vector<std::string>& context);

/// Equal-weight mixture (P1 + P2 + P3) / 3 of the unigram, bigram and
/// trigram probabilities of `word` after (prev2, prev1).
double mixture_prob(const LanguageModel& lm, std::string_view word,
                    std::string_view prev2, std::string_view prev1);

/// Sum of log probabilities over the padded sentence (natural log).
double sequence_score(const LanguageModel& lm,
                      const std::vector<std::string>& tokens);

/// ARPA-style text serialization (log10, ten decimal places).
/// read_arpa throws with a line number on malformed headers or a section
/// whose entry count does not match the declared count.
void write_arpa(const LanguageModel& lm, const std::string& path);
LanguageModel read_arpa(const std::string& path);

}  // namespace qalam
