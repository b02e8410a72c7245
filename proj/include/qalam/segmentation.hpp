#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qalam/lexicon.hpp"
#include "qalam/ngram_lm.hpp"

namespace qalam {

/// A merge (two tokens -> one) or split (one token -> two) whose
/// replacement words are all in the lexicon and whose sentence LM score
/// beats the unmodified sentence.
struct SegmentationProposal {
  enum class Kind { merge, split };
  Kind kind = Kind::merge;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::vector<std::string> replacement;
  double lm_score = 0;  // sentence score with the replacement applied
};

/// Joins tokens[position] with its successor when the concatenation is a
/// lexicon word and improves the sentence LM score by more than min_gain.
std::optional<SegmentationProposal> correct_merge(
    const std::vector<std::string>& tokens, std::size_t position,
    const Lexicon& lexicon, const LanguageModel& lm, double min_gain = 0.0);

/// Best (prefix, suffix) partition of tokens[position] with both parts of
/// length >= 2 and in the lexicon, accepted only when the sentence LM
/// score improves by more than min_gain. Words shorter than 4 characters
/// have no valid partition.
std::optional<SegmentationProposal> correct_split(
    const std::vector<std::string>& tokens, std::size_t position,
    const Lexicon& lexicon, const LanguageModel& lm, double min_gain = 0.0);

}  // namespace qalam
