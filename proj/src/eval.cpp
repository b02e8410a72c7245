#include "qalam/eval.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "qalam/textnorm.hpp"

namespace qalam {

namespace {

std::string match_key(const Correction& c) {
  std::string key = std::to_string(c.begin) + ':' + std::to_string(c.end) + ':';
  for (std::size_t i = 0; i < c.replacement.size(); ++i) {
    if (i) key.push_back('\x1f');
    key += c.replacement[i];
  }
  return key;
}

}  // namespace

ScoreReport score(const ProposalSet& proposed,
                  const std::vector<GoldAnnotation>& gold) {
  std::unordered_map<std::size_t, const GoldAnnotation*> by_id;
  ScoreReport report;
  for (const GoldAnnotation& g : gold) {
    by_id[g.id] = &g;
    report.gold += g.corrections.size();
  }
  for (const auto& [id, corrections] : proposed) {
    auto it = by_id.find(id);
    if (it == by_id.end())
      throw std::runtime_error("score: proposals for unknown sentence id " +
                               std::to_string(id));
    std::set<std::string> gold_keys;
    for (const Correction& c : it->second->corrections)
      gold_keys.insert(match_key(c));
    std::set<std::string> seen;
    for (const Correction& c : corrections) {
      if (!seen.insert(match_key(c)).second) continue;  // ignore duplicates
      ++report.proposed;
      if (gold_keys.count(match_key(c))) ++report.matched;
    }
  }
  return report;
}

std::vector<GoldAnnotation> read_gold(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open gold file: " + path);
  std::vector<GoldAnnotation> out;
  GoldAnnotation current;
  bool in_sentence = false;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    std::ostringstream msg;
    msg << path << ":" << line_no << ": " << what;
    throw std::runtime_error(msg.str());
  };
  auto finish = [&]() {
    if (!in_sentence) return;
    try {
      current.corrections =
          sorted_validated(std::move(current.corrections), current.tokens.size());
    } catch (const std::invalid_argument& e) {
      fail(std::string("invalid annotation for sentence ") +
           std::to_string(current.id) + ": " + e.what());
    }
    out.push_back(std::move(current));
    current = GoldAnnotation{};
    in_sentence = false;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      finish();
      continue;
    }
    if (line.rfind("S ", 0) == 0) {
      finish();
      in_sentence = true;
      const std::string rest = line.substr(2);
      auto tab = rest.find('\t');
      const std::string id_str = tab == std::string::npos ? rest : rest.substr(0, tab);
      try {
        current.id = std::stoull(id_str);
      } catch (const std::exception&) {
        fail("malformed sentence id: " + id_str);
      }
      current.tokens.clear();
      std::size_t start = tab;
      while (start != std::string::npos) {
        std::size_t next = rest.find('\t', start + 1);
        current.tokens.push_back(
            rest.substr(start + 1, next == std::string::npos
                                       ? std::string::npos
                                       : next - start - 1));
        start = next;
      }
      continue;
    }
    if (line.rfind("A ", 0) == 0) {
      if (!in_sentence) fail("annotation line outside a sentence");
      const std::string rest = line.substr(2);
      auto sep1 = rest.find("|||");
      if (sep1 == std::string::npos) fail("malformed annotation line");
      auto sep2 = rest.find("|||", sep1 + 3);
      if (sep2 == std::string::npos) fail("malformed annotation line");
      Correction c;
      std::istringstream span(rest.substr(0, sep1));
      if (!(span >> c.begin >> c.end)) fail("malformed annotation span");
      try {
        c.kind = correction_kind_from(rest.substr(sep1 + 3, sep2 - sep1 - 3));
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
      const std::string repl = rest.substr(sep2 + 3);
      if (!repl.empty()) {
        std::istringstream toks(repl);
        std::string tok;
        while (toks >> tok) c.replacement.push_back(tok);
      }
      for (std::size_t i = c.begin; i < c.end && i < current.tokens.size(); ++i)
        c.original.push_back(current.tokens[i]);
      current.corrections.push_back(std::move(c));
      continue;
    }
    fail("unrecognized line: " + line);
  }
  finish();
  return out;
}

void write_gold(const std::vector<GoldAnnotation>& annotations,
                const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write gold file: " + path);
  for (const GoldAnnotation& g : annotations) {
    out << "S " << g.id;
    for (const std::string& tok : g.tokens) out << '\t' << tok;
    out << '\n';
    for (const Correction& c : g.corrections) {
      out << "A " << c.begin << ' ' << c.end << "|||" << to_string(c.kind)
          << "|||";
      for (std::size_t i = 0; i < c.replacement.size(); ++i) {
        if (i) out << ' ';
        out << c.replacement[i];
      }
      out << '\n';
    }
    out << '\n';
  }
}

namespace {

struct Injector {
  std::mt19937_64 rng;
  const Lexicon& lexicon;
  std::string alphabet;

  Injector(std::uint64_t seed, const Lexicon& lex, std::string_view alpha)
      : rng(seed), lexicon(lex), alphabet(alpha) {}

  double uniform() { return std::uniform_real_distribution<double>(0, 1)(rng); }
  std::size_t below(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  }
  char letter() { return alphabet[below(alphabet.size())]; }

  // one random edit op at distance exactly 1, avoiding real-word results
  std::optional<std::string> corrupt(const std::string& word) {
    for (int attempt = 0; attempt < 10; ++attempt) {
      const int op = static_cast<int>(below(4));
      std::string result = word;
      switch (op) {
        case 0: {  // insert
          const std::size_t pos = below(word.size() + 1);
          result.insert(result.begin() + pos, letter());
          break;
        }
        case 1: {  // delete
          if (word.size() < 2) continue;
          result.erase(result.begin() + below(word.size()));
          break;
        }
        case 2: {  // substitute
          const std::size_t pos = below(word.size());
          const char c = letter();
          if (c == word[pos]) continue;
          result[pos] = c;
          break;
        }
        default: {  // transpose
          if (word.size() < 2) continue;
          const std::size_t pos = below(word.size() - 1);
          if (word[pos] == word[pos + 1]) continue;
          std::swap(result[pos], result[pos + 1]);
          break;
        }
      }
      if (result != word && !result.empty() && !lexicon.contains(result))
        return result;
    }
    return std::nullopt;
  }

  // cut point making at least one OOV half, so detection can fire
  std::optional<std::size_t> merge_cut(const std::string& word) {
    std::vector<std::size_t> cuts;
    for (std::size_t c = 1; c < word.size(); ++c)
      if (!lexicon.contains(word.substr(0, c)) ||
          !lexicon.contains(word.substr(c)))
        cuts.push_back(c);
    if (cuts.empty()) return std::nullopt;
    return cuts[below(cuts.size())];
  }
};

bool is_word_surface(const std::string& s) {
  auto cps = utf8_decode(s);
  if (cps.empty()) return false;
  for (char32_t cp : cps) {
    if (is_splitting_punct(cp)) return false;
    if (cp >= U'0' && cp <= U'9') return false;
  }
  return true;
}

}  // namespace

InjectionResult inject_errors(const std::vector<std::vector<std::string>>& clean,
                              const InjectionRates& rates, std::uint64_t seed,
                              const Lexicon& lexicon,
                              std::string_view alphabet) {
  Injector inj(seed, lexicon, alphabet);
  InjectionResult result;
  result.noisy.reserve(clean.size());
  result.gold.reserve(clean.size());

  for (std::size_t s = 0; s < clean.size(); ++s) {
    const std::vector<std::string>& tokens = clean[s];
    GoldAnnotation gold;
    gold.id = s;
    std::vector<std::string> noisy;
    std::string pending_insert;  // deleted punctuation awaiting its anchor

    auto flush_pending = [&]() {
      if (pending_insert.empty()) return;
      Correction c;
      c.kind = CorrectionKind::add_before;
      c.begin = c.end = noisy.size();
      c.replacement = {pending_insert};
      gold.corrections.push_back(std::move(c));
      pending_insert.clear();
      ++result.injected_add_before;
    };

    std::size_t i = 0;
    while (i < tokens.size()) {
      const std::string& tok = tokens[i];
      if (!is_word_surface(tok)) {
        flush_pending();
        noisy.push_back(tok);
        ++i;
        continue;
      }
      flush_pending();

      const double u = inj.uniform();
      const double r1 = rates.edit;
      const double r2 = r1 + rates.add_before;
      const double r3 = r2 + rates.merge;
      const double r4 = r3 + rates.split;

      if (u < r1) {
        if (auto corrupted = inj.corrupt(tok)) {
          Correction c;
          c.kind = CorrectionKind::edit;
          c.begin = noisy.size();
          c.end = c.begin + 1;
          c.original = {*corrupted};
          c.replacement = {tok};
          gold.corrections.push_back(std::move(c));
          noisy.push_back(*corrupted);
          ++result.injected_edit;
          ++i;
          continue;
        }
      } else if (u < r2) {
        if (i + 1 < tokens.size() && !is_word_surface(tokens[i + 1])) {
          noisy.push_back(tok);
          pending_insert = tokens[i + 1];
          i += 2;
          continue;
        }
      } else if (u < r3) {
        if (tok.size() >= 2 && lexicon.contains(tok)) {
          if (auto cut = inj.merge_cut(tok)) {
            Correction c;
            c.kind = CorrectionKind::merge;
            c.begin = noisy.size();
            c.end = c.begin + 2;
            c.original = {tok.substr(0, *cut), tok.substr(*cut)};
            c.replacement = {tok};
            gold.corrections.push_back(std::move(c));
            noisy.push_back(tok.substr(0, *cut));
            noisy.push_back(tok.substr(*cut));
            ++result.injected_merge;
            ++i;
            continue;
          }
        }
      } else if (u < r4) {
        if (i + 1 < tokens.size() && is_word_surface(tokens[i + 1]) &&
            tok.size() >= 2 && tokens[i + 1].size() >= 2) {
          const std::string joined = tok + tokens[i + 1];
          if (!lexicon.contains(joined)) {
            Correction c;
            c.kind = CorrectionKind::split;
            c.begin = noisy.size();
            c.end = c.begin + 1;
            c.original = {joined};
            c.replacement = {tok, tokens[i + 1]};
            gold.corrections.push_back(std::move(c));
            noisy.push_back(joined);
            ++result.injected_split;
            i += 2;
            continue;
          }
        }
      }
      noisy.push_back(tok);
      ++i;
    }
    flush_pending();
    gold.tokens = noisy;
    result.noisy.push_back(std::move(noisy));
    result.gold.push_back(std::move(gold));
  }
  return result;
}

}  // namespace qalam
