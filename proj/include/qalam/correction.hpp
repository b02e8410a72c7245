#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qalam {

enum class CorrectionKind { edit, add_before, merge, split, normalize };

std::string_view to_string(CorrectionKind k);
CorrectionKind correction_kind_from(std::string_view s);

/// A proposed sentence edit: replace tokens [begin, end) of the source
/// sentence with `replacement`. Insertions carry an empty span
/// (begin == end).
struct Correction {
  CorrectionKind kind = CorrectionKind::edit;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::vector<std::string> original;
  std::vector<std::string> replacement;

  bool operator==(const Correction&) const = default;
};

/// Sorts by span; throws std::invalid_argument on overlapping spans,
/// duplicate insertion points or spans outside the sentence.
std::vector<Correction> sorted_validated(std::vector<Correction> corrections,
                                         std::size_t sentence_len);

/// Applies the corrections to the source tokens (replay). Validates first.
std::vector<std::string> apply_corrections(
    const std::vector<std::string>& tokens,
    std::vector<Correction> corrections);

}  // namespace qalam
