#include "support/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace qalam::testsupport {

namespace {

const std::string kRootLetters = "btjHdrzsSDTZEgfqklmnhwyxv$";

const std::vector<std::string> kNounPrefixes = {"",  "Al", "w",
                                                "wAl", "b",  "bAl"};
const std::vector<std::string> kNounSuffixes = {"", "p", "At", "wn", "yn"};
const std::vector<std::string> kVerbPrefixes = {"", "w", "s"};
const std::vector<std::string> kVerbSuffixes = {"", "wA", "nA", "t"};
const std::vector<std::string> kAdjPrefixes = {"", "Al", "w"};
const std::vector<std::string> kAdjSuffixes = {"y", "yp"};

struct FunctionWord {
  const char* surface;
  const char* pos;
  const char* gloss;
};
const FunctionWord kFunctionWords[] = {
    {"fy", "prep", "in"},    {"mn", "prep", "from"},  {"ElY", "prep", "on"},
    {"<lY", "prep", "to"},   {"En", "prep", "about"}, {"mE", "prep", "with"},
    {"hl", "part", "is"},    {"lA", "part", "not"},   {"mA", "part", "what"},
    {"<n", "part", "that"},  {"qd", "part", "did"},   {"lm", "part", "not"},
    {"vm", "conj", "then"},  {">w", "conj", "or"},    {"bl", "conj", "rather"},
    {"lkn", "conj", "but"},
};

const char* kGlossPool[] = {
    "book",   "house",  "man",    "road",   "city",   "school", "water",
    "sun",    "moon",   "work",   "day",    "night",  "hand",   "heart",
    "word",   "land",   "sea",    "tree",   "door",   "friend", "time",
    "year",   "world",  "life",   "people", "voice",  "light",  "fire",
    "mind",   "truth",  "peace",  "war",    "food",   "money",  "child",
    "mother", "father", "sister", "market", "garden",
};

std::string pregloss_for(const std::string& prefix, std::size_t root_index) {
  if (prefix == "w" || prefix == "wAl") return "and";
  if (prefix == "b" || prefix == "bAl") return "with";
  if (prefix == "Al") return "the";
  return kGlossPool[root_index % (sizeof(kGlossPool) / sizeof(*kGlossPool))];
}

std::vector<std::string> draw_roots(std::mt19937_64& rng, std::size_t count,
                                    std::set<std::string>& used) {
  std::uniform_int_distribution<std::size_t> pick(0, kRootLetters.size() - 1);
  std::vector<std::string> roots;
  while (roots.size() < count) {
    std::string root;
    root.push_back(kRootLetters[pick(rng)]);
    while (root.size() < 3) {
      const char c = kRootLetters[pick(rng)];
      if (c == root.back()) continue;  // no adjacent doubles
      root.push_back(c);
    }
    if (!used.insert(root).second) continue;
    roots.push_back(std::move(root));
  }
  return roots;
}

Gender noun_gender(const std::string& suffix) {
  return (suffix == "p" || suffix == "At" || suffix == "yp") ? Gender::fem
                                                             : Gender::masc;
}

Number noun_number(const std::string& suffix) {
  return (suffix == "At" || suffix == "wn" || suffix == "yn" || suffix == "wA")
             ? Number::pl
             : Number::sg;
}

}  // namespace

Lexicon make_fixture_lexicon(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::set<std::string> used;
  for (const FunctionWord& f : kFunctionWords) used.insert(f.surface);

  const std::vector<std::string> noun_roots = draw_roots(rng, 1350, used);
  const std::vector<std::string> verb_roots = draw_roots(rng, 550, used);
  const std::vector<std::string> adj_roots = draw_roots(rng, 450, used);

  Lexicon lex;
  for (std::size_t r = 0; r < noun_roots.size(); ++r) {
    for (const std::string& prefix : kNounPrefixes) {
      for (const std::string& suffix : kNounSuffixes) {
        WordFeatures f;
        f.pos = "noun";
        f.lemma = noun_roots[r];
        f.gender = noun_gender(suffix);
        f.number = noun_number(suffix);
        f.pregloss = pregloss_for(prefix, r);
        lex.add(prefix + noun_roots[r] + suffix, std::move(f));
      }
    }
  }
  for (std::size_t r = 0; r < verb_roots.size(); ++r) {
    for (const std::string& prefix : kVerbPrefixes) {
      for (const std::string& suffix : kVerbSuffixes) {
        WordFeatures f;
        f.pos = "verb";
        f.lemma = verb_roots[r];
        f.gender = Gender::none;
        f.number = suffix == "wA" ? Number::pl : Number::sg;
        f.pregloss = pregloss_for(prefix, r);
        lex.add(prefix + verb_roots[r] + suffix, std::move(f));
      }
    }
  }
  for (std::size_t r = 0; r < adj_roots.size(); ++r) {
    for (const std::string& prefix : kAdjPrefixes) {
      for (const std::string& suffix : kAdjSuffixes) {
        WordFeatures f;
        f.pos = "adj";
        f.lemma = adj_roots[r];
        f.gender = noun_gender(suffix);
        f.number = Number::sg;
        f.pregloss = pregloss_for(prefix, r);
        lex.add(prefix + adj_roots[r] + suffix, std::move(f));
      }
    }
  }
  for (const FunctionWord& f : kFunctionWords) {
    WordFeatures wf;
    wf.pos = f.pos;
    wf.lemma = f.surface;
    wf.gender = Gender::none;
    wf.number = Number::none;
    wf.pregloss = f.gloss;
    lex.add(f.surface, std::move(wf));
    lex.add_stopword(f.surface);
  }
  return lex;
}

namespace {

struct ZipfPool {
  std::vector<std::string> words;
  std::discrete_distribution<std::size_t> dist;

  explicit ZipfPool(std::vector<std::string> w) : words(std::move(w)) {
    std::vector<double> weights;
    weights.reserve(words.size());
    for (std::size_t i = 0; i < words.size(); ++i)
      weights.push_back(1.0 / std::pow(static_cast<double>(i + 1), 1.15));
    dist = std::discrete_distribution<std::size_t>(weights.begin(),
                                                   weights.end());
  }
  const std::string& draw(std::mt19937_64& rng) { return words[dist(rng)]; }
  bool empty() const { return words.empty(); }
};

std::vector<std::string> filter_surfaces(const Lexicon& lexicon,
                                         const std::string& pos,
                                         const std::string& prefix,
                                         Gender gender = Gender::none,
                                         bool any_gender = true) {
  std::vector<std::string> out;
  for (const std::string& s : lexicon.sorted_surfaces()) {
    const WordFeatures* f = lexicon.lookup(s);
    if (f->pos != pos) continue;
    if (!prefix.empty() && s.rfind(prefix, 0) != 0) continue;
    if (!any_gender && f->gender != gender) continue;
    out.push_back(s);
  }
  return out;
}

}  // namespace

std::vector<std::vector<std::string>> make_clean_corpus(
    const Lexicon& lexicon, std::size_t n_sentences, std::uint64_t seed) {
  std::mt19937_64 rng(seed);

  ZipfPool det_nouns(filter_surfaces(lexicon, "noun", "Al"));
  ZipfPool bare_nouns(filter_surfaces(lexicon, "noun", ""));
  ZipfPool det_adj_masc(
      filter_surfaces(lexicon, "adj", "Al", Gender::masc, false));
  ZipfPool det_adj_fem(
      filter_surfaces(lexicon, "adj", "Al", Gender::fem, false));
  ZipfPool verbs(filter_surfaces(lexicon, "verb", ""));
  ZipfPool preps(filter_surfaces(lexicon, "prep", ""));

  std::uniform_real_distribution<double> coin(0, 1);

  auto emit_np = [&](std::vector<std::string>& out) {
    const std::string& noun = det_nouns.draw(rng);
    out.push_back(noun);
    if (coin(rng) < 0.45) {
      const Gender g = lexicon.lookup(noun)->gender;
      out.push_back(g == Gender::fem ? det_adj_fem.draw(rng)
                                     : det_adj_masc.draw(rng));
    }
  };
  auto emit_pp = [&](std::vector<std::string>& out) {
    out.push_back(preps.draw(rng));
    out.push_back(det_nouns.draw(rng));
  };
  auto emit_vp = [&](std::vector<std::string>& out) {
    out.push_back(verbs.draw(rng));
    const double u = coin(rng);
    if (u < 0.40)
      emit_np(out);
    else if (u < 0.55)
      out.push_back(bare_nouns.draw(rng));
  };

  std::vector<std::vector<std::string>> corpus;
  corpus.reserve(n_sentences);
  for (std::size_t s = 0; s < n_sentences; ++s) {
    std::vector<std::string> sent;
    if (coin(rng) < 0.12) sent.push_back("vm");
    emit_np(sent);
    emit_vp(sent);
    if (coin(rng) < 0.55) emit_pp(sent);
    if (coin(rng) < 0.25) {
      sent.push_back("\xD8\x8C");  // ،
      emit_np(sent);
      emit_vp(sent);
    }
    const double e = coin(rng);
    if (e < 0.85)
      sent.push_back(".");
    else if (e < 0.95)
      sent.push_back("\xD8\x9F");  // ؟
    else
      sent.push_back("!");
    corpus.push_back(std::move(sent));
  }
  return corpus;
}

SynthFixture make_fixture(std::size_t n_sentences, std::uint64_t seed) {
  SynthFixture fx;
  fx.lexicon = make_fixture_lexicon(seed);
  fx.sentences = make_clean_corpus(fx.lexicon, n_sentences, seed + 1);
  return fx;
}

}  // namespace qalam::testsupport
