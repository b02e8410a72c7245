#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qalam/classifiers.hpp"
#include "qalam/context_models.hpp"
#include "qalam/correction.hpp"
#include "qalam/eval.hpp"
#include "qalam/lexicon.hpp"
#include "qalam/naive_bayes.hpp"
#include "qalam/ngram_lm.hpp"
#include "qalam/noisy_channel.hpp"

namespace qalam {

struct PipelineConfig {
  // detection and normalization are always active
  bool edit = true;
  bool add_before = true;
  bool merge = true;
  bool split = true;

  double boost_k = 1.5;
  unsigned max_edit_distance = 2;
  std::size_t candidate_cap = 5000;
  std::size_t negative_cap = 20;
  double segment_min_gain = 0.0;
  std::size_t addbefore_min_count = 5;
  std::size_t addbefore_max_label_length = 3;
  std::size_t top_lemmas = 5000;
  std::size_t cooccurrence_radius = 10;
  std::uint64_t seed = 1;

  EditConfig edit_config() const {
    return EditConfig{max_edit_distance, candidate_cap, negative_cap, boost_k,
                      cooccurrence_radius};
  }
  AddBeforeConfig addbefore_config() const {
    return AddBeforeConfig{addbefore_min_count, addbefore_max_label_length};
  }
};

/// Applies stage letters (E, A, M, S) to the stage flags; anything else
/// throws std::invalid_argument naming the stage.
void apply_stage_string(PipelineConfig& config, std::string_view stages);
std::string stage_string(const PipelineConfig& config);

struct TrainedSystem {
  Lexicon lexicon;
  LanguageModel lm;
  ConfusionMatrix cm;
  ContextModels context;
  NBModel edit_nb;
  NBModel addbefore_nb;
  PipelineConfig config;

  EditModelRefs edit_refs() const { return {lexicon, lm, cm, context}; }
};

/// A word is incorrect when it has no analysis and the lexicon does not
/// know it. Punctuation and digits are never flagged.
bool detect(const WordRecord& record, const Lexicon& lexicon);

struct SentenceResult {
  std::vector<std::string> tokens;
  std::vector<Correction> corrections;
};

/// Runs the stages in order (normalize, edit, add-before, merge, split) on
/// one sentence. Applying the returned corrections to the input surfaces
/// reproduces the returned tokens.
SentenceResult correct_sentence(const Sentence& sentence,
                                const TrainedSystem& system,
                                const PipelineConfig& config);

/// Trains every sub-model. `gold` must align with `corpus` (same sentences,
/// same tokens) or training fails naming the sentence id. When `lm_corpus`
/// is empty the language model trains on the gold-corrected corpus.
TrainedSystem train_system(const std::vector<Sentence>& corpus,
                           const std::vector<GoldAnnotation>& gold,
                           Lexicon lexicon,
                           const std::vector<std::vector<std::string>>& lm_corpus,
                           const PipelineConfig& config);

/// Model directory layout: dictionary.tsv, stoplist.txt, lm.arpa,
/// confusion.tsv, context.tsv, nb_edit.tsv, nb_addbefore.tsv, config.json.
void save_system(const TrainedSystem& system, const std::string& dir);
TrainedSystem load_system(const std::string& dir);

void save_config(const PipelineConfig& config, const std::string& path);
PipelineConfig load_config(const std::string& path);

}  // namespace qalam
