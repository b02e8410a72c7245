#include "qalam/correction.hpp"

#include <algorithm>
#include <stdexcept>

namespace qalam {

std::string_view to_string(CorrectionKind k) {
  switch (k) {
    case CorrectionKind::edit: return "edit";
    case CorrectionKind::add_before: return "add_before";
    case CorrectionKind::merge: return "merge";
    case CorrectionKind::split: return "split";
    case CorrectionKind::normalize: return "normalize";
  }
  return "edit";
}

CorrectionKind correction_kind_from(std::string_view s) {
  if (s == "edit") return CorrectionKind::edit;
  if (s == "add_before") return CorrectionKind::add_before;
  if (s == "merge") return CorrectionKind::merge;
  if (s == "split") return CorrectionKind::split;
  if (s == "normalize") return CorrectionKind::normalize;
  throw std::invalid_argument("unknown correction kind: " + std::string(s));
}

std::vector<Correction> sorted_validated(std::vector<Correction> corrections,
                                         std::size_t sentence_len) {
  std::sort(corrections.begin(), corrections.end(),
            [](const Correction& a, const Correction& b) {
              if (a.begin != b.begin) return a.begin < b.begin;
              return a.end < b.end;
            });
  std::size_t prev_end = 0;
  bool prev_insertion = false;
  std::size_t prev_begin = 0;
  bool first = true;
  for (const Correction& c : corrections) {
    if (c.begin > c.end || c.end > sentence_len)
      throw std::invalid_argument("correction span out of bounds");
    if (!first) {
      if (c.begin < prev_end) throw std::invalid_argument("overlapping spans");
      if (c.begin == c.end && prev_insertion && prev_begin == c.begin)
        throw std::invalid_argument("duplicate insertion point");
    }
    prev_end = c.end;
    prev_begin = c.begin;
    prev_insertion = c.begin == c.end;
    first = false;
  }
  return corrections;
}

std::vector<std::string> apply_corrections(
    const std::vector<std::string>& tokens,
    std::vector<Correction> corrections) {
  corrections = sorted_validated(std::move(corrections), tokens.size());
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (const Correction& c : corrections) {
    while (pos < c.begin) out.push_back(tokens[pos++]);
    for (const std::string& t : c.replacement) out.push_back(t);
    pos = c.end;
  }
  while (pos < tokens.size()) out.push_back(tokens[pos++]);
  return out;
}

}  // namespace qalam
