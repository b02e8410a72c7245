#include "support/oracles.hpp"

#include <algorithm>

#include "qalam/textnorm.hpp"

namespace qalam::testsupport {

unsigned dl_distance_oracle(std::string_view a, std::string_view b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::vector<unsigned>> d(n + 1, std::vector<unsigned>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      unsigned best = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                                d[i - 1][j - 1] + (a[i - 1] != b[j - 1])});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1])
        best = std::min(best, d[i - 2][j - 2] + 1);
      d[i][j] = best;
    }
  }
  return d[n][m];
}

std::vector<std::pair<std::string, unsigned>> brute_force_candidates(
    std::string_view query, const Lexicon& lexicon, unsigned max_d) {
  std::vector<std::pair<std::string, unsigned>> out;
  for (const std::string& w : lexicon.sorted_surfaces()) {
    const unsigned d = dl_distance_oracle(query, w);
    if (d <= max_d) out.emplace_back(w, d);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second < b.second : a.first < b.first;
  });
  return out;
}

std::vector<std::string> tokenize_oracle(std::string_view line) {
  std::vector<std::string> out;
  std::string current;
  for (char32_t cp : utf8_decode(line)) {
    const bool space = cp == U' ' || cp == U'\t' || cp == U'\r' || cp == U'\n';
    if (space || is_splitting_punct(cp)) {
      if (!current.empty()) {
        out.push_back(current);
        current.clear();
      }
      if (!space) {
        std::string punct;
        utf8_append(punct, cp);
        out.push_back(punct);
      }
      continue;
    }
    utf8_append(current, cp);
  }
  if (!current.empty()) out.push_back(current);
  return out;
}

}  // namespace qalam::testsupport
