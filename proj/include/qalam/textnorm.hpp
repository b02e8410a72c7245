#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace qalam {

enum class TokenKind { word, punctuation, digit };

/// A single surface token. Word tokens are Buckwalter ASCII; punctuation
/// tokens may carry Arabic marks (UTF-8) after normalization.
struct Token {
  std::string surface;
  TokenKind kind = TokenKind::word;

  bool operator==(const Token&) const = default;
};

// --- minimal UTF-8 handling (byte-exact pass-through for invalid input) ---

std::vector<char32_t> utf8_decode(std::string_view text);
void utf8_append(std::string& out, char32_t cp);
std::string utf8_encode(const std::vector<char32_t>& cps);

/// Buckwalter letter inventory (36 letters, no diacritics).
const std::string& buckwalter_letters();
/// Diacritic characters removed by normalize().
const std::string& buckwalter_diacritics();

/// True for marks that tokenize() splits off words. Buckwalter letter
/// characters that look like punctuation (* $ ' > < | & }) are NOT in
/// this set.
bool is_splitting_punct(char32_t cp);

/// Splits one line into tokens: whitespace-delimited, with splitting
/// punctuation broken out as standalone tokens. Empty input gives an
/// empty sequence.
std::vector<Token> tokenize(std::string_view line);

/// Kind a standalone surface would get from the tokenizer.
TokenKind classify_surface(std::string_view surface);

enum class Direction { to_ascii, to_arabic };

/// Bijective Arabic codepoint <-> Buckwalter ASCII mapping.
class TransliterationTable {
 public:
  /// Built-in default covering the full Buckwalter letter and diacritic
  /// inventory.
  static const TransliterationTable& buckwalter();

  /// Loads a two-column TSV: column 1 is the Arabic codepoint (either the
  /// literal character or U+XXXX), column 2 the ASCII character.
  static TransliterationTable load_tsv(const std::string& path);
  void save_tsv(const std::string& path) const;

  /// Inserting a pair that breaks bijectivity throws std::invalid_argument.
  void add(char32_t arabic, char ascii);

  std::optional<char> ascii_for(char32_t arabic) const;
  std::optional<char32_t> arabic_for(char ascii) const;
  std::size_t size() const { return to_ascii_.size(); }

 private:
  std::unordered_map<char32_t, char> to_ascii_;
  std::unordered_map<char, char32_t> to_arabic_;
};

struct TransliterationResult {
  std::string text;
  std::size_t uncovered = 0;  // letters outside the table, passed through
};

TransliterationResult transliterate(
    std::string_view text, Direction direction,
    const TransliterationTable& table = TransliterationTable::buckwalter());

/// Normalizes a word surface: strips diacritics, collapses runs of three
/// or more identical letters to one. Runs of exactly two are kept. If
/// stripping would empty the surface it is returned unchanged.
std::string normalize_word(std::string_view surface);

/// Token-level normalization: words via normalize_word, Roman punctuation
/// mapped to the Arabic marks (? -> U+061F, , -> U+060C, ; -> U+061B).
/// Idempotent.
Token normalize(const Token& token);

}  // namespace qalam
