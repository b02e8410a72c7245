#include <cstdio>
#include <fstream>
#include <random>

#include "doctest.h"
#include "qalam/lexicon.hpp"
#include "support/fixtures.hpp"

using namespace qalam;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& content)
      : path(name) {
    std::ofstream out(path, std::ios::binary);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

const char* kDict =
    "ktAb\tnoun\tktb\tmasc\tsg\tbook\n"
    "ktb\tverb\tktb\tnone\tsg\twrote\n"
    "byn\tprep\tbyn\tnone\tnone\tbetween\n";

}  // namespace

TEST_CASE("load_lexicon ingests rows and lookup returns them") {
  TempFile dict("lex_test_dict.tsv", kDict);
  const Lexicon lex = load_lexicon(dict.path);
  CHECK(lex.size() == 3);
  const WordFeatures* f = lex.lookup("ktAb");
  REQUIRE(f != nullptr);
  CHECK(f->pos == "noun");
  CHECK(f->lemma == "ktb");
  CHECK(f->gender == Gender::masc);
  CHECK(f->number == Number::sg);
  CHECK(f->pregloss == "book");
}

TEST_CASE("load_lexicon skips malformed rows and counts them") {
  TempFile dict("lex_test_bad.tsv",
                "ktAb\tnoun\tktb\tmasc\tsg\tbook\n"
                "broken row without tabs\n"
                "ktb\tverb\tktb\tnone\tsg\twrote\n"
                "a\tb\tc\td\n"
                "byn\tprep\tbyn\tnone\tnone\tbetween\n"
                "drs\tnoun\tdrs\tmasc\tsg\tlesson\n");
  const Lexicon lex = load_lexicon(dict.path);
  CHECK(lex.size() == 4);
  CHECK(lex.skipped_rows() == 2);
}

TEST_CASE("load_lexicon keeps the first row on duplicate surfaces") {
  TempFile dict("lex_test_dup.tsv",
                "ktb\tverb\tktb\tnone\tsg\twrote\n"
                "ktb\tnoun\tktb\tmasc\tpl\tbooks\n");
  const Lexicon lex = load_lexicon(dict.path);
  CHECK(lex.size() == 1);
  CHECK(lex.lookup("ktb")->pos == "verb");
}

TEST_CASE("load_lexicon failure modes") {
  CHECK_THROWS_WITH_AS(load_lexicon("no_such_dict.tsv"),
                       doctest::Contains("no_such_dict.tsv"),
                       std::runtime_error);
  TempFile dict("lex_test_empty.tsv", "only junk\n");
  CHECK_THROWS_AS(load_lexicon(dict.path), std::runtime_error);
}

TEST_CASE("lookup misses unknown words") {
  TempFile dict("lex_test_miss.tsv", kDict);
  const Lexicon lex = load_lexicon(dict.path);
  CHECK(lex.lookup("xqzv") == nullptr);
  CHECK(lex.lookup("") == nullptr);
}

TEST_CASE("stoplist membership is orthogonal to dictionary lookup") {
  TempFile dict("lex_test_stop_d.tsv", kDict);
  TempFile stop("lex_test_stop_s.tsv", "byn\nHyv\n");
  const Lexicon lex = load_lexicon(dict.path, stop.path);
  CHECK(lex.is_stopword("byn"));
  CHECK(lex.lookup("byn") != nullptr);  // still a dictionary entry
  CHECK(lex.is_stopword("Hyv"));
  CHECK(!lex.is_stopword("AstEmAr"));
  CHECK(!lex.is_stopword(""));
}

TEST_CASE("lookup agrees with a linear file scan on random surfaces") {
  const Lexicon lex = testsupport::make_fixture_lexicon(3);
  const std::string dict_path = "lex_oracle_dict.tsv";
  const std::string stop_path = "lex_oracle_stop.txt";
  save_lexicon(lex, dict_path, stop_path);
  const Lexicon reloaded = load_lexicon(dict_path, stop_path);

  // completeness: every surface in the file is found
  std::vector<std::string> file_surfaces;
  {
    std::ifstream in(dict_path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      file_surfaces.push_back(line.substr(0, line.find('\t')));
    }
  }
  CHECK(file_surfaces.size() == reloaded.size());
  std::mt19937_64 rng(17);
  for (int i = 0; i < 1000; ++i) {
    const std::string& s = file_surfaces[rng() % file_surfaces.size()];
    const WordFeatures* f = reloaded.lookup(s);
    REQUIRE(f != nullptr);
    CHECK(*f == *lex.lookup(s));
  }
  // misses agree with the scan too
  for (int i = 0; i < 50; ++i) {
    std::string junk = "zzz" + std::to_string(rng() % 100000);
    const bool in_file =
        std::find(file_surfaces.begin(), file_surfaces.end(), junk) !=
        file_surfaces.end();
    CHECK((reloaded.lookup(junk) != nullptr) == in_file);
  }
  std::remove(dict_path.c_str());
  std::remove(stop_path.c_str());
}

TEST_CASE("column corpus parses sentences and analysis flags") {
  TempFile corpus("lex_test_corpus.col",
                  "AlrjAl\tnoun\trjl\tmasc\tpl\tmen\t1\n"
                  "ktbx\t\t\t\t\t\t0\n"
                  "\n"
                  "byn\tprep\tbyn\tnone\tnone\tbetween\t1\n"
                  "\n");
  const auto sentences = read_column_corpus(corpus.path);
  REQUIRE(sentences.size() == 2);
  REQUIRE(sentences[0].size() == 2);
  CHECK(sentences[0][0].has_analysis);
  CHECK(sentences[0][0].features->pos == "noun");
  CHECK(!sentences[0][1].has_analysis);
  CHECK(!sentences[0][1].features.has_value());
  CHECK(sentences[1].size() == 1);
}

TEST_CASE("column corpus reports the line of a bad row") {
  TempFile corpus("lex_test_badrow.col",
                  "AlrjAl\tnoun\trjl\tmasc\tpl\tmen\t1\n"
                  "bad\trow\n");
  CHECK_THROWS_WITH_AS(read_column_corpus(corpus.path), doctest::Contains(":2"),
                       std::runtime_error);
}

TEST_CASE("column corpus of an empty file is empty") {
  TempFile corpus("lex_test_emptycorpus.col", "");
  CHECK(read_column_corpus(corpus.path).empty());
}

TEST_CASE("column corpus write/read round trip") {
  TempFile corpus("lex_test_rt.col",
                  "AlrjAl\tnoun\trjl\tmasc\tpl\tmen\t1\n"
                  "ktbx\t\t\t\t\t\t0\n"
                  ".\tpunct\t.\tnone\tnone\t\t1\n"
                  "\n"
                  "byn\tprep\tbyn\tnone\tnone\tbetween\t1\n"
                  "\n");
  const auto first = read_column_corpus(corpus.path);
  const std::string copy = "lex_test_rt_copy.col";
  write_column_corpus(first, copy);
  const auto second = read_column_corpus(copy);
  REQUIRE(second.size() == first.size());
  const std::string copy2 = "lex_test_rt_copy2.col";
  write_column_corpus(second, copy2);
  CHECK(slurp(copy) == slurp(copy2));
  std::remove(copy.c_str());
  std::remove(copy2.c_str());
}

TEST_CASE("make_records fills analysis from the lexicon") {
  TempFile dict("lex_test_mr.tsv", kDict);
  const Lexicon lex = load_lexicon(dict.path);
  const Sentence sent = make_records({"ktAb", "xqzv", "."}, lex);
  REQUIRE(sent.size() == 3);
  CHECK(sent[0].has_analysis);
  CHECK(!sent[1].has_analysis);
  CHECK(sent[2].token.kind == TokenKind::punctuation);
  CHECK(!sent[2].has_analysis);
}
