#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qalam/context_models.hpp"
#include "qalam/correction.hpp"
#include "qalam/lexicon.hpp"
#include "qalam/naive_bayes.hpp"
#include "qalam/ngram_lm.hpp"
#include "qalam/noisy_channel.hpp"

namespace qalam {

inline constexpr std::string_view kLabelCorrect = "correct";
inline constexpr std::string_view kLabelIncorrect = "incorrect";

/// The 17-feature schema of the edit-candidate classifier.
const std::array<std::string, 17>& edit_feature_names();
/// The 9-feature schema of the add-before classifier.
const std::array<std::string, 9>& addbefore_feature_names();

struct EditModelRefs {
  const Lexicon& lexicon;
  const LanguageModel& lm;
  const ConfusionMatrix& cm;
  const ContextModels& context;
};

struct EditConfig {
  unsigned max_distance = 2;
  std::size_t candidate_cap = 5000;
  std::size_t negative_cap = 20;  // negative candidates kept per instance
  double boost_k = 1.5;
  std::size_t cooccurrence_radius = 10;
};

/// Builds the 17 Table-style features for one candidate of the word at
/// `position`; neighbor features come from the records (lexicon fallback),
/// boundaries map to the begin/end markers and "none".
FeatureVector extract_edit_features(const Candidate& candidate,
                                    std::size_t position,
                                    const Sentence& sentence,
                                    const EditModelRefs& models,
                                    const EditConfig& config);

struct EditDecision {
  std::optional<Candidate> chosen;
  double posterior = 0;
};

/// Ranks all candidates by the posterior of the "correct" label; ties
/// break by (distance, surface). No candidates -> no change.
EditDecision correct_edit(std::size_t position, const Sentence& sentence,
                          const EditModelRefs& models, const NBModel& nb,
                          const EditConfig& config);

/// Per-candidate binary training over the gold edit corrections, with
/// deterministic negative subsampling.
NBModel train_edit_classifier(
    const std::vector<Sentence>& corpus,
    const std::vector<std::vector<Correction>>& gold_per_sentence,
    const EditModelRefs& models, const EditConfig& config, std::uint64_t seed);

struct AddBeforeConfig {
  std::size_t min_label_count = 5;  // gold insertions rarer than this are ignored
  std::size_t max_label_length = 3;
};

/// Features of the gap before `position` in a (punctuation-free) sentence
/// view; position == sentence.size() is the end gap. Out-of-range slots
/// are "#".
FeatureVector extract_addbefore_features(std::size_t position,
                                         const Sentence& sentence,
                                         const Lexicon& lexicon);

struct InsertionDecision {
  std::size_t gap = 0;            // index in the punctuation-free view
  std::size_t source_position = 0;  // insertion point in the original sentence
  std::string token;              // empty = insert nothing
};

/// Labels every gap of the punctuation-removed sentences with the gold
/// insertion (or the removed punctuation mark itself) and trains the
/// classifier.
NBModel train_addbefore(
    const std::vector<Sentence>& corpus,
    const std::vector<std::vector<Correction>>& gold_per_sentence,
    const Lexicon& lexicon, const AddBeforeConfig& config);

/// Queries the classifier at every gap of the punctuation-removed view.
/// A prediction that duplicates punctuation already present at the gap
/// comes back empty.
std::vector<InsertionDecision> predict_insertions(const Sentence& sentence,
                                                  const NBModel& model,
                                                  const Lexicon& lexicon);

}  // namespace qalam
