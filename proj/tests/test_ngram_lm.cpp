#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "doctest.h"
#include "qalam/ngram_lm.hpp"
#include "support/mkn_oracle.hpp"

using namespace qalam;
using qalam::testsupport::MknOracle;

namespace {

using Corpus = std::vector<std::vector<std::string>>;

std::set<std::string> vocab_of(std::initializer_list<const char*> words) {
  std::set<std::string> out;
  for (const char* w : words) out.insert(w);
  return out;
}

Corpus random_corpus(std::size_t sentences, std::uint64_t seed,
                     const std::vector<std::string>& words) {
  std::mt19937_64 rng(seed);
  Corpus out;
  for (std::size_t s = 0; s < sentences; ++s) {
    std::vector<std::string> sent;
    const std::size_t len = 1 + rng() % 6;
    for (std::size_t i = 0; i < len; ++i)
      sent.push_back(words[rng() % words.size()]);
    out.push_back(std::move(sent));
  }
  return out;
}

void check_against_oracle(const Corpus& corpus, const std::set<std::string>& vocab,
                          double tol = 1e-9) {
  const NgramCounts counts = count_ngrams(corpus, vocab);
  const LanguageModel lm = estimate_mkn(counts);
  const MknOracle oracle(corpus, vocab);

  std::vector<std::string> vp = lm.vocab_pred;
  std::vector<std::string> contexts_u = vp;
  contexts_u.push_back(std::string(kSentenceBegin));

  for (const std::string& w : vp)
    CHECK(std::abs(ngram_prob(lm, w, {}) - oracle.prob(w, {})) <= tol);
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const std::string& w = vp[rng() % vp.size()];
    const std::string& v = contexts_u[rng() % contexts_u.size()];
    const std::string& u = contexts_u[rng() % contexts_u.size()];
    const double got2 = ngram_prob(lm, w, {v});
    const double want2 = oracle.prob(w, {v});
    CHECK(std::abs(got2 - want2) <= tol);
    const double got3 = ngram_prob(lm, w, {u, v});
    const double want3 = oracle.prob(w, {u, v});
    CHECK(std::abs(got3 - want3) <= tol);
  }
  // unknown words route through <unk>
  CHECK(std::abs(ngram_prob(lm, "zzz-oov", {}) - oracle.prob("zzz-oov", {})) <=
        tol);
}

}  // namespace

TEST_CASE("count_ngrams counts the basics") {
  const Corpus corpus = {{"a", "b"}, {"a", "c"}};
  const NgramCounts counts = count_ngrams(corpus, vocab_of({"a", "b", "c"}));
  CHECK(counts.get(1, "a") == 2);
  CHECK(counts.get(2, "a b") == 1);
  CHECK(counts.get(2, "a c") == 1);
  CHECK(counts.vocabulary.count("<s>") == 1);
  CHECK(counts.vocabulary.count("</s>") == 1);
  CHECK(counts.vocabulary.count("<unk>") == 1);
}

TEST_CASE("count_ngrams pads with two begin markers and one end marker") {
  const Corpus corpus = {{"a"}};
  const NgramCounts counts = count_ngrams(corpus, vocab_of({"a"}));
  CHECK(counts.get(3, "<s> <s> a") == 1);
  CHECK(counts.get(3, "<s> a </s>") == 1);
  CHECK(counts.counts[2].size() == 2);
  CHECK(counts.get(2, "<s> a") == 1);
  CHECK(counts.get(2, "a </s>") == 1);
  // n-grams of order >= 2 never end in the begin marker
  CHECK(counts.get(2, "<s> <s>") == 0);
}

TEST_CASE("count_ngrams maps out-of-vocabulary tokens to the unknown marker") {
  const Corpus corpus = {{"a", "zzz"}};
  const NgramCounts counts = count_ngrams(corpus, vocab_of({"a"}));
  CHECK(counts.get(1, "<unk>") == 1);
  CHECK(counts.get(2, "a <unk>") == 1);
  CHECK(counts.get(1, "zzz") == 0);
}

TEST_CASE("count_ngrams rejects an empty corpus") {
  CHECK_THROWS_AS(count_ngrams({}, vocab_of({"a"})), std::runtime_error);
}

TEST_CASE("every counted bigram's prefix unigram exists") {
  const Corpus corpus = {{"a", "b"}, {"c"}};
  const NgramCounts counts = count_ngrams(corpus, vocab_of({"a", "b", "c"}));
  for (const auto& [key, count] : counts.counts[1]) {
    const std::string prefix = key.substr(0, key.find(' '));
    CHECK(counts.get(1, prefix) > 0);
  }
}

TEST_CASE("estimated model normalizes over the prediction vocabulary") {
  const Corpus corpus = {{"a", "b", "c"}, {"a", "b", "d"}, {"b", "a"},
                         {"a", "c", "a"}, {"d"}};
  const NgramCounts counts = count_ngrams(corpus, vocab_of({"a", "b", "c", "d"}));
  const LanguageModel lm = estimate_mkn(counts);

  std::vector<std::vector<std::string>> contexts = {
      {}, {"a"}, {"b"}, {"zzz"}, {"<s>"},
      {"<s>", "<s>"}, {"<s>", "a"}, {"a", "b"}, {"b", "a"}, {"c", "d"},
      {"zzz", "qqq"}};
  for (const auto& ctx : contexts) {
    double sum = 0;
    for (const std::string& w : lm.vocab_pred) sum += ngram_prob(lm, w, ctx);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("model probabilities match the direct-formula oracle") {
  check_against_oracle({{"a", "b", "c"}, {"a", "b", "d"}, {"a", "c"}},
                       vocab_of({"a", "b", "c", "d"}));
  check_against_oracle({{"a", "b"}, {"a", "b"}, {"a", "b"}, {"b", "a"},
                        {"b", "a"}, {"a", "c"}},
                       vocab_of({"a", "b", "c"}));
  check_against_oracle(random_corpus(40, 5, {"a", "b", "c", "d", "e", "f"}),
                       vocab_of({"a", "b", "c", "d", "e", "f", "g"}));
  // out-of-vocabulary tokens in the training data
  check_against_oracle({{"a", "qqq", "b"}, {"a", "b"}, {"qqq"}},
                       vocab_of({"a", "b"}));
}

TEST_CASE("words after many distinct predecessors get more continuation mass") {
  // the {"q"} sentence keeps the count-of-counts off the n2 bucket so the
  // fixed 0.5 discount applies uniformly
  const Corpus corpus = {{"a", "b"}, {"a", "b"}, {"a", "b"}, {"x", "c"},
                         {"y", "c"}, {"z", "c"}, {"q"}};
  const NgramCounts counts =
      count_ngrams(corpus, vocab_of({"a", "b", "c", "q", "x", "y", "z"}));
  const LanguageModel lm = estimate_mkn(counts);
  REQUIRE(lm.discount_fallback[0]);
  // raw counts tie at 3, but c was seen after three distinct predecessors
  CHECK(ngram_prob(lm, "c", {}) > ngram_prob(lm, "b", {}));
}

TEST_CASE("stored trigram beats its zero-evidence backoff path") {
  const Corpus corpus = random_corpus(30, 7, {"a", "b", "c", "d"});
  const LanguageModel lm =
      estimate_mkn(count_ngrams(corpus, vocab_of({"a", "b", "c", "d"})));
  for (const auto& [key, entry] : lm.table[2]) {
    const auto sp1 = key.find(' ');
    const auto sp2 = key.find(' ', sp1 + 1);
    const std::string u = key.substr(0, sp1);
    const std::string v = key.substr(sp1 + 1, sp2 - sp1 - 1);
    const std::string w = key.substr(sp2 + 1);
    const auto& ctx_entry = lm.table[1].at(u + ' ' + v);
    REQUIRE(ctx_entry.has_backoff);
    const double backoff_only =
        std::exp(ctx_entry.logbo) * ngram_prob(lm, w, {v});
    CHECK(std::exp(entry.logp) >= backoff_only - 1e-12);
  }
}

TEST_CASE("probabilities are strictly positive and in (0, 1]") {
  const Corpus corpus = {{"a", "b"}, {"c"}};
  const LanguageModel lm =
      estimate_mkn(count_ngrams(corpus, vocab_of({"a", "b", "c"})));
  for (const std::string& w : lm.vocab_pred) {
    for (const auto& ctx : std::vector<std::vector<std::string>>{
             {}, {"a"}, {"zzz"}, {"a", "b"}, {"qqq", "zzz"}}) {
      const double p = ngram_prob(lm, w, ctx);
      CHECK(p > 0.0);
      CHECK(p <= 1.0);
    }
  }
  CHECK(ngram_prob(lm, "unseen-word", {}) > 0.0);
}

TEST_CASE("ngram_prob is independent of training sentence order") {
  Corpus corpus = random_corpus(25, 21, {"a", "b", "c", "d", "e"});
  const auto vocab = vocab_of({"a", "b", "c", "d", "e"});
  const LanguageModel lm1 = estimate_mkn(count_ngrams(corpus, vocab));
  std::reverse(corpus.begin(), corpus.end());
  const LanguageModel lm2 = estimate_mkn(count_ngrams(corpus, vocab));
  for (const std::string& w : lm1.vocab_pred) {
    CHECK(ngram_prob(lm1, w, {}) == ngram_prob(lm2, w, {}));
    CHECK(ngram_prob(lm1, w, {"a"}) == ngram_prob(lm2, w, {"a"}));
    CHECK(ngram_prob(lm1, w, {"a", "b"}) == ngram_prob(lm2, w, {"a", "b"}));
  }
}

TEST_CASE("sequence_score is the padded sum of log probabilities") {
  const Corpus corpus = {{"a", "b"}, {"a", "c"}, {"b", "a"}};
  const LanguageModel lm =
      estimate_mkn(count_ngrams(corpus, vocab_of({"a", "b", "c"})));
  const double expected = std::log(ngram_prob(lm, "a", {"<s>", "<s>"})) +
                          std::log(ngram_prob(lm, "b", {"<s>", "a"})) +
                          std::log(ngram_prob(lm, "</s>", {"a", "b"}));
  CHECK(sequence_score(lm, {"a", "b"}) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("appending a token strictly decreases the sequence score") {
  const Corpus corpus = random_corpus(20, 3, {"a", "b", "c"});
  const LanguageModel lm =
      estimate_mkn(count_ngrams(corpus, vocab_of({"a", "b", "c"})));
  std::vector<std::string> sent = {"a"};
  double prev = sequence_score(lm, sent);
  for (const char* tok : {"b", "c", "a", "zzz"}) {
    sent.push_back(tok);
    const double cur = sequence_score(lm, sent);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("a frequent word outscores an unknown word") {
  const Corpus corpus = {{"a", "b"}, {"a", "c"}, {"a"}};
  const LanguageModel lm =
      estimate_mkn(count_ngrams(corpus, vocab_of({"a", "b", "c"})));
  CHECK(sequence_score(lm, {"a"}) > sequence_score(lm, {"zzz"}));
}

TEST_CASE("the training sentence outscores its reversal") {
  Corpus corpus;
  for (int i = 0; i < 3; ++i) corpus.push_back({"a", "b", "c"});
  corpus.push_back({"c", "d"});
  const LanguageModel lm =
      estimate_mkn(count_ngrams(corpus, vocab_of({"a", "b", "c", "d"})));
  CHECK(sequence_score(lm, {"a", "b", "c"}) >
        sequence_score(lm, {"c", "b", "a"}));
}

TEST_CASE("mixture_prob averages the three orders") {
  const Corpus corpus = {{"a", "b", "c"}, {"a", "b"}};
  const LanguageModel lm =
      estimate_mkn(count_ngrams(corpus, vocab_of({"a", "b", "c"})));
  const double expected = (ngram_prob(lm, "c", {}) + ngram_prob(lm, "c", {"b"}) +
                           ngram_prob(lm, "c", {"a", "b"})) /
                          3.0;
  CHECK(mixture_prob(lm, "c", "a", "b") == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("ARPA round trip reproduces probabilities within 1e-9") {
  const Corpus corpus = random_corpus(30, 9, {"a", "b", "c", "d"});
  const LanguageModel lm =
      estimate_mkn(count_ngrams(corpus, vocab_of({"a", "b", "c", "d"})));
  const std::string path = "lm_roundtrip_test.arpa";
  write_arpa(lm, path);
  const LanguageModel back = read_arpa(path);
  for (int order = 0; order < kLmOrder; ++order) {
    REQUIRE(back.table[order].size() == lm.table[order].size());
    for (const auto& [key, entry] : lm.table[order]) {
      const auto& other = back.table[order].at(key);
      CHECK(std::abs(std::exp(other.logp) - std::exp(entry.logp)) <= 1e-9);
      CHECK(other.has_backoff == entry.has_backoff);
      if (entry.has_backoff)
        CHECK(std::abs(std::exp(other.logbo) - std::exp(entry.logbo)) <= 1e-9);
    }
  }
  // writing the reread model reproduces the file byte for byte
  const std::string path2 = "lm_roundtrip_test2.arpa";
  write_arpa(back, path2);
  std::ifstream a(path), b(path2);
  const std::string sa((std::istreambuf_iterator<char>(a)),
                       std::istreambuf_iterator<char>());
  const std::string sb((std::istreambuf_iterator<char>(b)),
                       std::istreambuf_iterator<char>());
  CHECK(sa == sb);
  std::remove(path.c_str());
  std::remove(path2.c_str());
}

TEST_CASE("ARPA reader names the section with a wrong declared count") {
  const std::string path = "lm_badcount_test.arpa";
  {
    std::ofstream out(path);
    out << "\\data\\\nngram 1=2\nngram 2=3\nngram 3=0\n\n"
        << "\\1-grams:\n-0.5\ta\n-0.6\tb\n\n"
        << "\\2-grams:\n-0.3\ta b\n\n"
        << "\\3-grams:\n\n\\end\\\n";
  }
  CHECK_THROWS_WITH_AS(read_arpa(path), doctest::Contains("2-grams"),
                       std::runtime_error);
  std::remove(path.c_str());
}

TEST_CASE("a hand-written unigram-only ARPA model is queryable") {
  const std::string path = "lm_unigram_test.arpa";
  {
    std::ofstream out(path);
    out << "\\data\\\nngram 1=2\nngram 2=0\nngram 3=0\n\n"
        << "\\1-grams:\n-0.5\ta\n-0.9\tb\n\n\\end\\\n";
  }
  const LanguageModel lm = read_arpa(path);
  CHECK(ngram_prob(lm, "a", {}) == doctest::Approx(std::pow(10, -0.5)).epsilon(1e-12));
  CHECK(ngram_prob(lm, "b", {}) == doctest::Approx(std::pow(10, -0.9)).epsilon(1e-12));
  // missing bigram backs off with weight 1
  CHECK(ngram_prob(lm, "b", {"a"}) == doctest::Approx(std::pow(10, -0.9)).epsilon(1e-12));
  std::remove(path.c_str());
}

TEST_CASE("ARPA reader rejects malformed headers") {
  const std::string path = "lm_badheader_test.arpa";
  {
    std::ofstream out(path);
    out << "not an arpa file\n";
  }
  CHECK_THROWS_AS(read_arpa(path), std::runtime_error);
  std::remove(path.c_str());
}
