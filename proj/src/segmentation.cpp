#include "qalam/segmentation.hpp"

namespace qalam {

namespace {

std::vector<std::string> with_replacement(const std::vector<std::string>& tokens,
                                          std::size_t begin, std::size_t end,
                                          std::vector<std::string> replacement) {
  std::vector<std::string> out;
  out.reserve(tokens.size() + replacement.size());
  out.insert(out.end(), tokens.begin(), tokens.begin() + begin);
  out.insert(out.end(), replacement.begin(), replacement.end());
  out.insert(out.end(), tokens.begin() + end, tokens.end());
  return out;
}

}  // namespace

std::optional<SegmentationProposal> correct_merge(
    const std::vector<std::string>& tokens, std::size_t position,
    const Lexicon& lexicon, const LanguageModel& lm, double min_gain) {
  if (position + 1 >= tokens.size()) return std::nullopt;
  const std::string joined = tokens[position] + tokens[position + 1];
  if (!lexicon.contains(joined)) return std::nullopt;

  const double base = sequence_score(lm, tokens);
  const double merged =
      sequence_score(lm, with_replacement(tokens, position, position + 2, {joined}));
  if (merged - base <= min_gain) return std::nullopt;

  SegmentationProposal out;
  out.kind = SegmentationProposal::Kind::merge;
  out.begin = position;
  out.end = position + 2;
  out.replacement = {joined};
  out.lm_score = merged;
  return out;
}

std::optional<SegmentationProposal> correct_split(
    const std::vector<std::string>& tokens, std::size_t position,
    const Lexicon& lexicon, const LanguageModel& lm, double min_gain) {
  const std::string& word = tokens[position];
  if (word.size() < 4) return std::nullopt;

  const double base = sequence_score(lm, tokens);
  std::optional<SegmentationProposal> best;
  for (std::size_t cut = 2; cut + 2 <= word.size(); ++cut) {
    const std::string prefix = word.substr(0, cut);
    const std::string suffix = word.substr(cut);
    if (!lexicon.contains(prefix) || !lexicon.contains(suffix)) continue;
    const double score = sequence_score(
        lm, with_replacement(tokens, position, position + 1, {prefix, suffix}));
    if (score - base <= min_gain) continue;
    if (!best || score > best->lm_score) {
      SegmentationProposal prop;
      prop.kind = SegmentationProposal::Kind::split;
      prop.begin = position;
      prop.end = position + 1;
      prop.replacement = {prefix, suffix};
      prop.lm_score = score;
      best = std::move(prop);
    }
  }
  return best;
}

}  // namespace qalam
