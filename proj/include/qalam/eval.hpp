#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qalam/correction.hpp"
#include "qalam/lexicon.hpp"

namespace qalam {

/// One sentence of the gold file: its (noisy) tokens and the corrections
/// that repair it. Spans are non-overlapping.
struct GoldAnnotation {
  std::size_t id = 0;
  std::vector<std::string> tokens;
  std::vector<Correction> corrections;
};

struct ScoreReport {
  std::uint64_t matched = 0;
  std::uint64_t proposed = 0;
  std::uint64_t gold = 0;

  double precision() const {
    return proposed == 0 ? 1.0 : static_cast<double>(matched) / proposed;
  }
  double recall() const {
    return gold == 0 ? 1.0 : static_cast<double>(matched) / gold;
  }
  double f1() const {
    const double p = precision(), r = recall();
    return p + r == 0 ? 0.0 : 2 * p * r / (p + r);
  }
};

using ProposalSet = std::vector<std::pair<std::size_t, std::vector<Correction>>>;

/// Matches proposals against gold: a proposal matches iff some gold
/// correction of the same sentence has the same span and replacement
/// tokens (kind-insensitive). Throws on a proposal for an unknown
/// sentence id.
ScoreReport score(const ProposalSet& proposed,
                  const std::vector<GoldAnnotation>& gold);

/// Gold file format:
///   S <id><TAB>tok1<TAB>tok2...
///   A <start> <end>|||<kind>|||<replacement tokens, space joined>
///   (blank line after each sentence)
std::vector<GoldAnnotation> read_gold(const std::string& path);
void write_gold(const std::vector<GoldAnnotation>& annotations,
                const std::string& path);

struct InjectionRates {
  double edit = 0;
  double add_before = 0;
  double merge = 0;  // insert a spurious space (fixed by merging)
  double split = 0;  // remove a space (fixed by splitting)
};

struct InjectionResult {
  std::vector<std::vector<std::string>> noisy;
  std::vector<GoldAnnotation> gold;
  std::uint64_t injected_edit = 0;
  std::uint64_t injected_add_before = 0;
  std::uint64_t injected_merge = 0;
  std::uint64_t injected_split = 0;
};

/// Corrupts a clean corpus with the four in-scope error kinds; the gold
/// annotations are exactly the inverse operations, so applying them to
/// the noisy corpus restores the clean corpus. Deterministic per seed.
/// Corruptions that would produce a lexicon word (a real-word error) or
/// an unrecoverable token are skipped.
InjectionResult inject_errors(const std::vector<std::vector<std::string>>& clean,
                              const InjectionRates& rates, std::uint64_t seed,
                              const Lexicon& lexicon,
                              std::string_view alphabet);

}  // namespace qalam
