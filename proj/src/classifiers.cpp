#include "qalam/classifiers.hpp"

#include <algorithm>
#include <random>

namespace qalam {

namespace {

std::string pos_or_marker(const WordRecord& rec) {
  if (rec.features && !rec.features->pos.empty()) return rec.features->pos;
  return std::string(kBoundaryPos);
}

std::string lemma_or_surface(const WordRecord& rec) {
  if (rec.features && !rec.features->lemma.empty()) return rec.features->lemma;
  return rec.token.surface;
}

}  // namespace

const std::array<std::string, 17>& edit_feature_names() {
  static const std::array<std::string, 17> names = {
      "Likelihood model probability",
      "unigram probability",
      "previous bigram probability",
      "next bigram probability",
      "trigram probability",
      "language model product",
      "collocation left",
      "collocation right",
      "collocation mid",
      "collocation product",
      "cooccurrence distance 1",
      "cooccurrence distance 2",
      "cooccurrence distance 3",
      "previous gender",
      "previous number",
      "next gender",
      "next number",
  };
  return names;
}

const std::array<std::string, 9>& addbefore_feature_names() {
  static const std::array<std::string, 9> names = {
      "before previous word",
      "before previous word POS tag",
      "previous word",
      "previous word POS tag",
      "next word",
      "next word POS tag",
      "next word pregloss",
      "after next word",
      "after next POS tag",
  };
  return names;
}

FeatureVector extract_edit_features(const Candidate& candidate,
                                    std::size_t position,
                                    const Sentence& sentence,
                                    const EditModelRefs& models,
                                    const EditConfig& config) {
  const auto& names = edit_feature_names();
  const std::string& x = sentence[position].token.surface;

  const std::string prev1 = position >= 1
                                ? sentence[position - 1].token.surface
                                : std::string(kSentenceBegin);
  const std::string prev2 = position >= 2
                                ? sentence[position - 2].token.surface
                                : std::string(kSentenceBegin);
  const std::string next = position + 1 < sentence.size()
                               ? sentence[position + 1].token.surface
                               : std::string(kSentenceEnd);

  const double likelihood =
      channel_likelihood(models.cm, x, candidate.surface, config.boost_k);
  const double unigram = ngram_prob(models.lm, candidate.surface, {});
  const double prev_bigram = ngram_prob(models.lm, candidate.surface, {prev1});
  const double next_bigram = ngram_prob(models.lm, next, {candidate.surface});
  const double trigram =
      ngram_prob(models.lm, candidate.surface, {prev2, prev1});
  const double lm_product = unigram * prev_bigram * next_bigram * trigram;

  std::array<std::string, 5> window;
  for (int k = -2; k <= 2; ++k) {
    const std::size_t slot = static_cast<std::size_t>(k + 2);
    if (k == 0) {
      window[slot] = candidate.features.pos.empty() ? std::string(kBoundaryPos)
                                                    : candidate.features.pos;
      continue;
    }
    const long idx = static_cast<long>(position) + k;
    if (idx < 0 || idx >= static_cast<long>(sentence.size()))
      window[slot] = std::string(kBoundaryPos);
    else
      window[slot] = pos_or_marker(sentence[idx]);
  }
  const CollocationFeatures coll =
      collocation_features(models.context, candidate.features.lemma, window);

  // radius-10 stop-word-free lemma window around the target, excluding it
  std::vector<std::string> reduced;
  std::size_t insertion_point = 0;
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    if (i == position) continue;
    const WordRecord& rec = sentence[i];
    if (rec.token.kind != TokenKind::word) continue;
    if (models.lexicon.is_stopword(rec.token.surface)) continue;
    if (i < position) ++insertion_point;
    reduced.push_back(lemma_or_surface(rec));
  }
  const std::size_t lo = insertion_point > config.cooccurrence_radius
                             ? insertion_point - config.cooccurrence_radius
                             : 0;
  const std::size_t hi = std::min(
      reduced.size(), insertion_point + config.cooccurrence_radius);
  const std::vector<std::string> context(reduced.begin() + lo,
                                         reduced.begin() + hi);
  const CooccurrenceDistances cooc = cooccurrence_distances(
      models.context, candidate.features.lemma, context);

  auto gender_at = [&](long idx) -> std::string {
    if (idx < 0 || idx >= static_cast<long>(sentence.size()))
      return std::string(to_string(Gender::none));
    const WordRecord& rec = sentence[idx];
    return std::string(
        to_string(rec.features ? rec.features->gender : Gender::none));
  };
  auto number_at = [&](long idx) -> std::string {
    if (idx < 0 || idx >= static_cast<long>(sentence.size()))
      return std::string(to_string(Number::none));
    const WordRecord& rec = sentence[idx];
    return std::string(
        to_string(rec.features ? rec.features->number : Number::none));
  };

  const long p = static_cast<long>(position);
  FeatureVector fv;
  fv[names[0]] = likelihood;
  fv[names[1]] = unigram;
  fv[names[2]] = prev_bigram;
  fv[names[3]] = next_bigram;
  fv[names[4]] = trigram;
  fv[names[5]] = lm_product;
  fv[names[6]] = coll.left;
  fv[names[7]] = coll.right;
  fv[names[8]] = coll.mid;
  fv[names[9]] = coll.product;
  fv[names[10]] = cooc.d1;
  fv[names[11]] = cooc.d2;
  fv[names[12]] = cooc.d3;
  fv[names[13]] = gender_at(p - 1);
  fv[names[14]] = number_at(p - 1);
  fv[names[15]] = gender_at(p + 1);
  fv[names[16]] = number_at(p + 1);
  return fv;
}

EditDecision correct_edit(std::size_t position, const Sentence& sentence,
                          const EditModelRefs& models, const NBModel& nb,
                          const EditConfig& config) {
  EditDecision decision;
  const std::string& x = sentence[position].token.surface;
  const std::vector<Candidate> candidates = generate_candidates(
      x, models.lexicon, config.max_distance, config.candidate_cap);
  if (candidates.empty()) return decision;

  bool first = true;
  for (const Candidate& cand : candidates) {
    const FeatureVector fv =
        extract_edit_features(cand, position, sentence, models, config);
    const auto posteriors = nb_posteriors(nb, fv);
    auto it = posteriors.find(std::string(kLabelCorrect));
    const double p = it == posteriors.end() ? 0.0 : it->second;
    // candidates arrive ordered by (distance, surface), so strictly-greater
    // keeps that order as the tie-break
    if (first || p > decision.posterior) {
      decision.chosen = cand;
      decision.posterior = p;
      first = false;
    }
  }
  return decision;
}

NBModel train_edit_classifier(
    const std::vector<Sentence>& corpus,
    const std::vector<std::vector<Correction>>& gold_per_sentence,
    const EditModelRefs& models, const EditConfig& config, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<FeatureVector, std::string>> examples;

  for (std::size_t s = 0; s < corpus.size(); ++s) {
    const Sentence& sentence = corpus[s];
    for (const Correction& gold : gold_per_sentence[s]) {
      if (gold.kind != CorrectionKind::edit) continue;
      if (gold.end != gold.begin + 1 || gold.replacement.size() != 1) continue;
      if (gold.begin >= sentence.size()) continue;
      const std::string& x = sentence[gold.begin].token.surface;
      const std::vector<Candidate> candidates = generate_candidates(
          x, models.lexicon, config.max_distance, config.candidate_cap);
      if (candidates.empty()) continue;

      std::vector<const Candidate*> negatives;
      const Candidate* positive = nullptr;
      for (const Candidate& cand : candidates) {
        if (cand.surface == gold.replacement[0])
          positive = &cand;
        else
          negatives.push_back(&cand);
      }
      if (negatives.size() > config.negative_cap) {
        std::vector<const Candidate*> sampled;
        std::sample(negatives.begin(), negatives.end(),
                    std::back_inserter(sampled), config.negative_cap, rng);
        negatives = std::move(sampled);
      }
      if (positive)
        examples.emplace_back(
            extract_edit_features(*positive, gold.begin, sentence, models,
                                  config),
            std::string(kLabelCorrect));
      for (const Candidate* cand : negatives)
        examples.emplace_back(
            extract_edit_features(*cand, gold.begin, sentence, models, config),
            std::string(kLabelIncorrect));
    }
  }
  if (examples.empty()) {
    // degenerate but valid: a classifier that never proposes anything
    FeatureVector fv;
    for (const std::string& name : edit_feature_names()) fv[name] = 0.0;
    examples.emplace_back(fv, std::string(kLabelIncorrect));
  }
  return nb_train(examples);
}

FeatureVector extract_addbefore_features(std::size_t position,
                                         const Sentence& sentence,
                                         const Lexicon& lexicon) {
  const auto& names = addbefore_feature_names();
  auto word_at = [&](long idx) -> std::string {
    if (idx < 0 || idx >= static_cast<long>(sentence.size()))
      return std::string(kBoundaryPos);
    return sentence[idx].token.surface;
  };
  auto pos_at = [&](long idx) -> std::string {
    if (idx < 0 || idx >= static_cast<long>(sentence.size()))
      return std::string(kBoundaryPos);
    return pos_or_marker(sentence[idx]);
  };
  auto pregloss_at = [&](long idx) -> std::string {
    if (idx < 0 || idx >= static_cast<long>(sentence.size()))
      return std::string(kBoundaryPos);
    const WordRecord& rec = sentence[idx];
    if (rec.features) return rec.features->pregloss;
    if (const WordFeatures* f = lexicon.lookup(rec.token.surface))
      return f->pregloss;
    return std::string();
  };

  const long p = static_cast<long>(position);
  FeatureVector fv;
  fv[names[0]] = word_at(p - 2);
  fv[names[1]] = pos_at(p - 2);
  fv[names[2]] = word_at(p - 1);
  fv[names[3]] = pos_at(p - 1);
  fv[names[4]] = word_at(p);
  fv[names[5]] = pos_at(p);
  fv[names[6]] = pregloss_at(p);
  fv[names[7]] = word_at(p + 1);
  fv[names[8]] = pos_at(p + 1);
  return fv;
}

namespace {

struct ReducedView {
  Sentence records;                  // punctuation removed
  std::vector<std::size_t> source;   // reduced index -> source index
};

ReducedView remove_punctuation(const Sentence& sentence) {
  ReducedView view;
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    if (sentence[i].token.kind == TokenKind::punctuation) continue;
    view.records.push_back(sentence[i]);
    view.source.push_back(i);
  }
  return view;
}

std::size_t source_gap(const ReducedView& view, std::size_t gap,
                       std::size_t sentence_len) {
  return gap < view.source.size() ? view.source[gap] : sentence_len;
}

std::size_t codepoints(const std::string& s) { return utf8_decode(s).size(); }

}  // namespace

NBModel train_addbefore(
    const std::vector<Sentence>& corpus,
    const std::vector<std::vector<Correction>>& gold_per_sentence,
    const Lexicon& lexicon, const AddBeforeConfig& config) {
  std::vector<std::pair<FeatureVector, std::string>> examples;

  for (std::size_t s = 0; s < corpus.size(); ++s) {
    const Sentence& sentence = corpus[s];
    const ReducedView view = remove_punctuation(sentence);

    // reduced gap -> label, from gold insertions first, then from the
    // punctuation marks that were removed from the view
    std::map<std::size_t, std::string> labels;
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      if (sentence[i].token.kind != TokenKind::punctuation) continue;
      std::size_t gap = 0;
      for (std::size_t j = 0; j < i; ++j)
        if (sentence[j].token.kind != TokenKind::punctuation) ++gap;
      labels.emplace(gap, sentence[i].token.surface);  // first mark wins
    }
    for (const Correction& gold : gold_per_sentence[s]) {
      if (gold.begin != gold.end || gold.replacement.size() != 1) continue;
      std::size_t gap = 0;
      for (std::size_t j = 0; j < gold.begin && j < sentence.size(); ++j)
        if (sentence[j].token.kind != TokenKind::punctuation) ++gap;
      labels[gap] = gold.replacement[0];  // gold beats the removed mark
    }

    for (std::size_t gap = 0; gap <= view.records.size(); ++gap) {
      auto it = labels.find(gap);
      const std::string label = it == labels.end() ? std::string() : it->second;
      examples.emplace_back(
          extract_addbefore_features(gap, view.records, lexicon), label);
    }
  }

  // ignore rare or long insertion labels
  std::map<std::string, std::size_t> label_freq;
  for (const auto& [fv, label] : examples)
    if (!label.empty()) ++label_freq[label];
  for (auto& [fv, label] : examples) {
    if (label.empty()) continue;
    if (codepoints(label) > config.max_label_length ||
        label_freq[label] < config.min_label_count)
      label.clear();
  }

  if (examples.empty()) {
    FeatureVector fv;
    for (const std::string& name : addbefore_feature_names())
      fv[name] = std::string(kBoundaryPos);
    examples.emplace_back(fv, std::string());
  }
  return nb_train(examples);
}

std::vector<InsertionDecision> predict_insertions(const Sentence& sentence,
                                                  const NBModel& model,
                                                  const Lexicon& lexicon) {
  const ReducedView view = remove_punctuation(sentence);
  std::vector<InsertionDecision> out;
  for (std::size_t gap = 0; gap <= view.records.size(); ++gap) {
    InsertionDecision decision;
    decision.gap = gap;
    decision.source_position = source_gap(view, gap, sentence.size());
    const NBResult result = nb_classify(
        model, extract_addbefore_features(gap, view.records, lexicon));
    decision.token = result.label;
    if (!decision.token.empty()) {
      // a gap that still holds punctuation keeps it; predictions only fill
      // punctuation-free gaps
      const std::size_t lo = gap == 0 ? 0 : view.source[gap - 1] + 1;
      const std::size_t hi = decision.source_position;
      for (std::size_t i = lo; i < hi; ++i) {
        if (sentence[i].token.kind == TokenKind::punctuation) {
          decision.token.clear();
          break;
        }
      }
    }
    out.push_back(std::move(decision));
  }
  return out;
}

}  // namespace qalam
