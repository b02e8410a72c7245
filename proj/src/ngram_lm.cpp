#include "qalam/ngram_lm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qalam {

namespace {

constexpr double kPlaceholderLog10 = -99.0;
const double kLn10 = std::log(10.0);

// Minimum discount. Keeps every backoff weight strictly positive so that
// smoothed probabilities never reach zero, while preserving exact
// normalization (the same discount feeds both the numerator subtraction
// and gamma).
constexpr double kMinDiscount = 1e-4;

std::string join(const std::vector<std::string>& tokens, std::size_t begin,
                 std::size_t count) {
  std::string out;
  for (std::size_t i = 0; i < count; ++i) {
    if (i) out.push_back(' ');
    out += tokens[begin + i];
  }
  return out;
}

// Splits "u v w" into ("u v", "w").
std::pair<std::string, std::string> split_last(const std::string& key) {
  auto pos = key.rfind(' ');
  if (pos == std::string::npos) return {std::string(), key};
  return {key.substr(0, pos), key.substr(pos + 1)};
}

struct Discounts {
  double d[3];  // for counts 1, 2, >=3
  bool fallback = false;

  double of(std::uint64_t count) const {
    if (count == 1) return d[0];
    if (count == 2) return d[1];
    return d[2];
  }
};

template <typename Map>
Discounts compute_discounts(const Map& table) {
  std::uint64_t n1 = 0, n2 = 0, n3 = 0, n4 = 0;
  for (const auto& [key, count] : table) {
    if (count == 1) ++n1;
    else if (count == 2) ++n2;
    else if (count == 3) ++n3;
    else if (count == 4) ++n4;
  }
  Discounts out;
  if (n1 == 0 || n2 == 0) {
    out.d[0] = out.d[1] = out.d[2] = 0.5;
    out.fallback = true;
    return out;
  }
  const double y = static_cast<double>(n1) / (n1 + 2.0 * n2);
  out.d[0] = 1.0 - 2.0 * y * n2 / n1;
  out.d[1] = 2.0 - 3.0 * y * n3 / n2;
  out.d[2] = n3 > 0 ? 3.0 - 4.0 * y * n4 / n3 : 0.5;
  out.d[0] = std::clamp(out.d[0], kMinDiscount, 1.0);
  out.d[1] = std::clamp(out.d[1], kMinDiscount, 2.0);
  out.d[2] = std::clamp(out.d[2], kMinDiscount, 3.0);
  return out;
}

}  // namespace

NgramCounts count_ngrams(const std::vector<std::vector<std::string>>& corpus,
                         const std::set<std::string>& vocabulary) {
  if (corpus.empty()) throw std::runtime_error("count_ngrams: empty corpus");
  NgramCounts out;
  out.vocabulary = vocabulary;
  out.vocabulary.insert(std::string(kSentenceBegin));
  out.vocabulary.insert(std::string(kSentenceEnd));
  out.vocabulary.insert(std::string(kUnknown));

  const std::string begin(kSentenceBegin);
  const std::string end(kSentenceEnd);
  for (const auto& sentence : corpus) {
    std::vector<std::string> padded;
    padded.reserve(sentence.size() + 3);
    padded.push_back(begin);
    padded.push_back(begin);
    for (const std::string& tok : sentence)
      padded.push_back(vocabulary.count(tok) ? tok : std::string(kUnknown));
    padded.push_back(end);

    for (int order = 1; order <= kLmOrder; ++order) {
      for (std::size_t i = 0; i + order <= padded.size(); ++i) {
        // n-grams of order >= 2 never end in the begin marker
        if (order > 1 && padded[i + order - 1] == begin) continue;
        ++out.counts[order - 1][join(padded, i, order)];
      }
    }
  }
  return out;
}

void LanguageModel::rebuild_vocab_index() {
  vocab_.clear();
  for (const auto& [key, entry] : table[0]) vocab_.insert(key);
  vocab_pred.clear();
  for (const auto& [key, entry] : table[0])
    if (key != kSentenceBegin) vocab_pred.push_back(key);
  std::sort(vocab_pred.begin(), vocab_pred.end());
}

LanguageModel estimate_mkn(const NgramCounts& counts) {
  for (int order = 1; order <= kLmOrder; ++order)
    if (counts.counts[order - 1].empty())
      throw std::runtime_error("estimate_mkn: no counts at order " +
                               std::to_string(order));

  // Continuation ("modified") counts: a lower-order n-gram is counted once
  // per distinct extension to the left.
  std::unordered_map<std::string, std::uint64_t> bigram_mod;
  for (const auto& [key, count] : counts.counts[2]) {
    auto [context, word] = split_last(key);
    auto [u, v] = split_last(context);
    (void)u;
    bigram_mod[v + ' ' + word] += 1;
  }
  std::unordered_map<std::string, std::uint64_t> unigram_mod;
  for (const auto& [key, count] : counts.counts[1]) {
    auto [v, word] = split_last(key);
    (void)v;
    unigram_mod[word] += 1;
  }

  const Discounts d3 = compute_discounts(counts.counts[2]);
  const Discounts d2 = compute_discounts(bigram_mod);
  const Discounts d1 = compute_discounts(unigram_mod);

  LanguageModel lm;
  lm.discounts[0] = {d1.d[0], d1.d[1], d1.d[2]};
  lm.discounts[1] = {d2.d[0], d2.d[1], d2.d[2]};
  lm.discounts[2] = {d3.d[0], d3.d[1], d3.d[2]};
  lm.discount_fallback = {d1.fallback, d2.fallback, d3.fallback};

  // ---- unigrams: complete over the prediction vocabulary ----
  std::vector<std::string> vocab_pred;
  for (const std::string& w : counts.vocabulary)
    if (w != kSentenceBegin) vocab_pred.push_back(w);
  std::sort(vocab_pred.begin(), vocab_pred.end());

  double total1 = 0;
  double gamma1_num = 0;
  for (const auto& [word, count] : unigram_mod) {
    total1 += static_cast<double>(count);
    gamma1_num += d1.of(count);
  }
  const double gamma1 = gamma1_num / total1;
  const double uniform = 1.0 / static_cast<double>(vocab_pred.size());

  std::unordered_map<std::string, double> p1;
  p1.reserve(vocab_pred.size());
  for (const std::string& w : vocab_pred) {
    auto it = unigram_mod.find(w);
    double num = 0;
    if (it != unigram_mod.end())
      num = static_cast<double>(it->second) - d1.of(it->second);
    const double p = num / total1 + gamma1 * uniform;
    p1[w] = p;
    LanguageModel::Entry e;
    e.logp = std::log(p);
    lm.table[0][w] = e;
  }
  {
    LanguageModel::Entry e;
    e.logp = kPlaceholderLog10 * kLn10;
    lm.table[0][std::string(kSentenceBegin)] = e;
  }

  // ---- bigrams, grouped by context ----
  std::unordered_map<std::string, std::vector<std::pair<std::string, std::uint64_t>>>
      by_ctx2;
  for (const auto& [key, count] : bigram_mod) {
    auto [v, w] = split_last(key);
    by_ctx2[v].emplace_back(w, count);
  }
  std::unordered_map<std::string, double> p2;  // interpolated bigram probs
  p2.reserve(bigram_mod.size());
  for (const auto& [v, grams] : by_ctx2) {
    double total = 0;
    double gamma_num = 0;
    for (const auto& [w, count] : grams) {
      total += static_cast<double>(count);
      gamma_num += d2.of(count);
    }
    const double gamma = gamma_num / total;
    auto uit = lm.table[0].find(v);
    if (uit == lm.table[0].end())
      throw std::logic_error("estimate_mkn: bigram context outside vocabulary");
    uit->second.logbo = std::log(gamma);
    uit->second.has_backoff = true;
    for (const auto& [w, count] : grams) {
      const double p =
          (static_cast<double>(count) - d2.of(count)) / total + gamma * p1.at(w);
      p2[v + ' ' + w] = p;
      LanguageModel::Entry e;
      e.logp = std::log(p);
      lm.table[1][v + ' ' + w] = e;
    }
  }

  // ---- trigrams, grouped by context; raw counts at the top order ----
  std::unordered_map<std::string, std::vector<std::pair<std::string, std::uint64_t>>>
      by_ctx3;
  for (const auto& [key, count] : counts.counts[2]) {
    auto [context, w] = split_last(key);
    by_ctx3[context].emplace_back(w, count);
  }
  for (const auto& [context, grams] : by_ctx3) {
    double total = 0;
    double gamma_num = 0;
    for (const auto& [w, count] : grams) {
      total += static_cast<double>(count);
      gamma_num += d3.of(count);
    }
    const double gamma = gamma_num / total;
    auto bit = lm.table[1].find(context);
    if (bit == lm.table[1].end()) {
      // context such as "<s> <s>" that is not itself a predicted bigram
      LanguageModel::Entry placeholder;
      placeholder.logp = kPlaceholderLog10 * kLn10;
      bit = lm.table[1].emplace(context, placeholder).first;
    }
    bit->second.logbo = std::log(gamma);
    bit->second.has_backoff = true;
    auto [u, v] = split_last(context);
    (void)u;
    for (const auto& [w, count] : grams) {
      auto p2it = p2.find(v + ' ' + w);
      if (p2it == p2.end())
        throw std::logic_error("estimate_mkn: missing bigram under trigram");
      const double p = (static_cast<double>(count) - d3.of(count)) / total +
                       gamma * p2it->second;
      LanguageModel::Entry e;
      e.logp = std::log(p);
      lm.table[2][context + ' ' + w] = e;
    }
  }

  lm.rebuild_vocab_index();
  return lm;
}

namespace {

double prob1(const LanguageModel& lm, const std::string& w) {
  auto it = lm.table[0].find(w);
  if (it == lm.table[0].end()) {
    it = lm.table[0].find(std::string(kUnknown));
    if (it == lm.table[0].end())
      throw std::logic_error("language model has no unknown-word entry");
  }
  return std::exp(it->second.logp);
}

double prob2(const LanguageModel& lm, const std::string& v,
             const std::string& w) {
  auto it = lm.table[1].find(v + ' ' + w);
  if (it != lm.table[1].end()) return std::exp(it->second.logp);
  double bo = 1.0;
  auto uit = lm.table[0].find(v);
  if (uit != lm.table[0].end() && uit->second.has_backoff)
    bo = std::exp(uit->second.logbo);
  return bo * prob1(lm, w);
}

}  // namespace

double ngram_prob(const LanguageModel& lm, std::string_view word,
                  const std::vector<std::string>& context) {
  auto mapped = [&lm](std::string_view s) {
    return lm.in_vocabulary(s) ? std::string(s) : std::string(kUnknown);
  };
  const std::string w = mapped(word);
  if (context.empty()) return prob1(lm, w);
  if (context.size() == 1) return prob2(lm, mapped(context[0]), w);

  const std::string u = mapped(context[context.size() - 2]);
  const std::string v = mapped(context[context.size() - 1]);
  const std::string ctx = u + ' ' + v;
  auto it = lm.table[2].find(ctx + ' ' + w);
  if (it != lm.table[2].end()) return std::exp(it->second.logp);
  double bo = 1.0;
  auto bit = lm.table[1].find(ctx);
  if (bit != lm.table[1].end() && bit->second.has_backoff)
    bo = std::exp(bit->second.logbo);
  return bo * prob2(lm, v, w);
}

double mixture_prob(const LanguageModel& lm, std::string_view word,
                    std::string_view prev2, std::string_view prev1) {
  const double p1 = ngram_prob(lm, word, {});
  const double p2 = ngram_prob(lm, word, {std::string(prev1)});
  const double p3 = ngram_prob(lm, word, {std::string(prev2), std::string(prev1)});
  return (p1 + p2 + p3) / 3.0;
}

double sequence_score(const LanguageModel& lm,
                      const std::vector<std::string>& tokens) {
  std::string c0(kSentenceBegin), c1(kSentenceBegin);
  double score = 0;
  for (const std::string& tok : tokens) {
    score += std::log(ngram_prob(lm, tok, {c0, c1}));
    c0 = c1;
    c1 = lm.in_vocabulary(tok) ? tok : std::string(kUnknown);
  }
  score += std::log(ngram_prob(lm, kSentenceEnd, {c0, c1}));
  return score;
}

void write_arpa(const LanguageModel& lm, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write ARPA file: " + path);
  out << "\\data\\\n";
  for (int order = 1; order <= kLmOrder; ++order)
    out << "ngram " << order << "=" << lm.table[order - 1].size() << "\n";
  out << "\n";
  char buf[64];
  for (int order = 1; order <= kLmOrder; ++order) {
    out << "\\" << order << "-grams:\n";
    std::vector<std::pair<std::string, LanguageModel::Entry>> rows(
        lm.table[order - 1].begin(), lm.table[order - 1].end());
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [key, entry] : rows) {
      std::snprintf(buf, sizeof buf, "%.10f", entry.logp / kLn10);
      out << buf << '\t' << key;
      if (entry.has_backoff) {
        std::snprintf(buf, sizeof buf, "%.10f", entry.logbo / kLn10);
        out << '\t' << buf;
      }
      out << '\n';
    }
    out << "\n";
  }
  out << "\\end\\\n";
}

LanguageModel read_arpa(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open ARPA file: " + path);
  auto fail = [&path](std::size_t line_no, const std::string& what) {
    std::ostringstream msg;
    msg << path << ":" << line_no << ": " << what;
    throw std::runtime_error(msg.str());
  };

  std::string line;
  std::size_t line_no = 0;
  bool buffered = false;  // `line` holds an unconsumed line
  auto next_line = [&]() -> bool {
    if (buffered) {
      buffered = false;
      return true;
    }
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };
  auto next_nonempty = [&]() -> bool {
    while (next_line())
      if (!line.empty()) return true;
    return false;
  };

  if (!next_nonempty() || line != "\\data\\")
    fail(line_no, "expected \\data\\ header");

  std::array<std::size_t, kLmOrder> declared{};
  while (next_line()) {
    if (line.empty()) break;
    if (line[0] == '\\') {
      buffered = true;
      break;
    }
    unsigned order = 0;
    unsigned long long count = 0;
    if (std::sscanf(line.c_str(), "ngram %u=%llu", &order, &count) != 2 ||
        order == 0 || order > kLmOrder)
      fail(line_no, "malformed ngram count line: " + line);
    declared[order - 1] = static_cast<std::size_t>(count);
  }

  LanguageModel lm;
  for (int order = 1; order <= kLmOrder; ++order) {
    const std::string header = "\\" + std::to_string(order) + "-grams:";
    if (!next_nonempty()) fail(line_no, "expected section header " + header);
    if (line != header) {
      // sections declared with zero entries may be omitted
      if (declared[order - 1] == 0) {
        buffered = true;
        continue;
      }
      fail(line_no, "expected section header " + header);
    }
    std::size_t read = 0;
    while (next_line()) {
      if (line.empty()) continue;
      if (line[0] == '\\') {
        buffered = true;
        break;
      }
      std::vector<std::string> cols;
      std::size_t start = 0;
      while (true) {
        auto tab = line.find('\t', start);
        if (tab == std::string::npos) {
          cols.push_back(line.substr(start));
          break;
        }
        cols.push_back(line.substr(start, tab - start));
        start = tab + 1;
      }
      if (cols.size() < 2 || cols.size() > 3)
        fail(line_no, "malformed n-gram line in " + std::to_string(order) +
                          "-grams section");
      LanguageModel::Entry e;
      try {
        e.logp = std::stod(cols[0]) * kLn10;
        if (cols.size() == 3) {
          e.logbo = std::stod(cols[2]) * kLn10;
          e.has_backoff = true;
        }
      } catch (const std::exception&) {
        fail(line_no, "malformed numeric field");
      }
      int spaces = 0;
      for (char c : cols[1])
        if (c == ' ') ++spaces;
      if (spaces != order - 1)
        fail(line_no, "n-gram arity does not match section " +
                          std::to_string(order) + "-grams");
      lm.table[order - 1][cols[1]] = e;
      ++read;
    }
    if (read != declared[order - 1]) {
      std::ostringstream msg;
      msg << "section " << order << "-grams has " << read
          << " entries but the header declared " << declared[order - 1];
      fail(line_no, msg.str());
    }
  }
  if (!next_nonempty() || line != "\\end\\")
    fail(line_no, "missing \\end\\ terminator");

  lm.rebuild_vocab_index();
  return lm;
}

}  // namespace qalam
