#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "qalam/textnorm.hpp"

namespace qalam {

enum class Gender { masc, fem, none };
enum class Number { sg, du, pl, none };

std::string_view to_string(Gender g);
std::string_view to_string(Number n);
Gender gender_from(std::string_view s);
Number number_from(std::string_view s);

/// Morphological features attached to a dictionary entry or corpus token.
struct WordFeatures {
  std::string pos;
  std::string lemma;
  Gender gender = Gender::none;
  Number number = Number::none;
  std::string pregloss;

  bool operator==(const WordFeatures&) const = default;
};

/// A token plus its analysis as it flows through the pipeline.
struct WordRecord {
  Token token;
  std::optional<WordFeatures> features;
  bool has_analysis = false;
};

using Sentence = std::vector<WordRecord>;

/// Dictionary of valid word surfaces with features, plus the stoplist.
/// Immutable in spirit once loaded; lookups are exact-match on normalized
/// surfaces.
class Lexicon {
 public:
  /// First row wins on duplicate surfaces.
  void add(std::string surface, WordFeatures features);
  void add_stopword(std::string surface);

  const WordFeatures* lookup(std::string_view surface) const;
  bool contains(std::string_view surface) const { return lookup(surface) != nullptr; }
  bool is_stopword(std::string_view surface) const;

  std::size_t size() const { return entries_.size(); }
  std::size_t stoplist_size() const { return stoplist_.size(); }
  std::size_t skipped_rows() const { return skipped_rows_; }
  void set_skipped_rows(std::size_t n) { skipped_rows_ = n; }

  /// Surfaces of a given length, sorted; used by candidate generation.
  const std::vector<std::string>& surfaces_of_length(std::size_t len) const;
  std::size_t max_surface_length() const;

  /// All surfaces, sorted (for serialization and brute-force oracles).
  std::vector<std::string> sorted_surfaces() const;
  std::vector<std::string> sorted_stopwords() const;

 private:
  std::unordered_map<std::string, WordFeatures> entries_;
  std::unordered_set<std::string> stoplist_;
  std::size_t skipped_rows_ = 0;

  mutable bool buckets_fresh_ = false;
  mutable std::vector<std::vector<std::string>> by_length_;
  void refresh_buckets() const;
};

/// Dictionary TSV: surface<TAB>pos<TAB>lemma<TAB>gender<TAB>number<TAB>pregloss.
/// Stoplist: one surface per line; pass an empty path for no stoplist.
/// Throws on unreadable files or a dictionary with zero valid rows.
Lexicon load_lexicon(const std::string& dictionary_path,
                     const std::string& stoplist_path = {});

void save_lexicon(const Lexicon& lexicon, const std::string& dictionary_path,
                  const std::string& stoplist_path);

/// Column corpus: surface<TAB>pos<TAB>lemma<TAB>gender<TAB>number<TAB>
/// pregloss<TAB>has_analysis(0|1), blank line between sentences.
/// Throws with a line number on a row with the wrong column count.
std::vector<Sentence> read_column_corpus(const std::string& path);
void write_column_corpus(const std::vector<Sentence>& corpus,
                         const std::string& path);

/// Builds records for raw tokens: features come from the lexicon and
/// has_analysis mirrors lookup success.
Sentence to_records(const std::vector<Token>& tokens, const Lexicon& lexicon);
Sentence make_records(const std::vector<std::string>& surfaces,
                      const Lexicon& lexicon);

std::vector<std::string> surfaces_of(const Sentence& sentence);

}  // namespace qalam
