#pragma once

// Deterministic synthetic fixtures: a morphology-flavored Buckwalter
// lexicon (~45k surfaces with features) and a template-grammar corpus
// drawn from it. Everything is a pure function of the seed.

#include <cstdint>
#include <string>
#include <vector>

#include "qalam/lexicon.hpp"

namespace qalam::testsupport {

struct SynthFixture {
  Lexicon lexicon;
  std::vector<std::vector<std::string>> sentences;  // clean token surfaces
};

Lexicon make_fixture_lexicon(std::uint64_t seed);

/// Clean sentences generated from simple NP/VP templates with Zipfian word
/// choice, gender agreement between nouns and adjectives, and sentence-
/// final punctuation. Every word surface is a lexicon entry.
std::vector<std::vector<std::string>> make_clean_corpus(
    const Lexicon& lexicon, std::size_t n_sentences, std::uint64_t seed);

SynthFixture make_fixture(std::size_t n_sentences, std::uint64_t seed);

}  // namespace qalam::testsupport
