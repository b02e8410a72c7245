#include "qalam/textnorm.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qalam {

namespace {

constexpr char32_t kArabicQuestion = 0x061F;   // ؟
constexpr char32_t kArabicComma = 0x060C;      // ،
constexpr char32_t kArabicSemicolon = 0x061B;  // ؛

bool is_space_cp(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\r' || cp == U'\n' ||
         cp == 0x00A0;
}

}  // namespace

std::vector<char32_t> utf8_decode(std::string_view text) {
  std::vector<char32_t> out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char b = static_cast<unsigned char>(text[i]);
    char32_t cp = 0;
    std::size_t len = 1;
    if (b < 0x80) {
      cp = b;
    } else if ((b & 0xE0) == 0xC0) {
      cp = b & 0x1F;
      len = 2;
    } else if ((b & 0xF0) == 0xE0) {
      cp = b & 0x0F;
      len = 3;
    } else if ((b & 0xF8) == 0xF0) {
      cp = b & 0x07;
      len = 4;
    } else {
      // stray continuation byte: keep it as-is
      out.push_back(b);
      ++i;
      continue;
    }
    if (i + len > text.size()) {
      out.push_back(b);
      ++i;
      continue;
    }
    bool ok = true;
    for (std::size_t k = 1; k < len; ++k) {
      unsigned char c = static_cast<unsigned char>(text[i + k]);
      if ((c & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (c & 0x3F);
    }
    if (!ok) {
      out.push_back(b);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

void utf8_append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string utf8_encode(const std::vector<char32_t>& cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) utf8_append(out, cp);
  return out;
}

const std::string& buckwalter_letters() {
  static const std::string letters = "'|><&}AbptvjHxd*rzs$SDTZEgfqklmnhwYy";
  return letters;
}

const std::string& buckwalter_diacritics() {
  static const std::string diacritics = "auio~FNK";
  return diacritics;
}

bool is_splitting_punct(char32_t cp) {
  switch (cp) {
    case U'.':
    case U',':
    case U';':
    case U':':
    case U'!':
    case U'?':
    case U'"':
    case U'(':
    case U')':
    case U'-':
    case 0x00AB:  // «
    case 0x00BB:  // »
    case kArabicQuestion:
    case kArabicComma:
    case kArabicSemicolon:
      return true;
    default:
      return false;
  }
}

namespace {

bool all_digits(const std::vector<char32_t>& cps, std::size_t b, std::size_t e) {
  for (std::size_t i = b; i < e; ++i)
    if (cps[i] < U'0' || cps[i] > U'9') return false;
  return true;
}

Token make_token(const std::vector<char32_t>& cps, std::size_t b, std::size_t e,
                 bool punct) {
  Token t;
  std::vector<char32_t> piece(cps.begin() + b, cps.begin() + e);
  t.surface = utf8_encode(piece);
  if (punct)
    t.kind = TokenKind::punctuation;
  else if (all_digits(cps, b, e))
    t.kind = TokenKind::digit;
  else
    t.kind = TokenKind::word;
  return t;
}

}  // namespace

TokenKind classify_surface(std::string_view surface) {
  auto cps = utf8_decode(surface);
  bool all_punct = !cps.empty();
  bool all_digit = !cps.empty();
  for (char32_t cp : cps) {
    if (!is_splitting_punct(cp)) all_punct = false;
    if (cp < U'0' || cp > U'9') all_digit = false;
  }
  if (all_punct) return TokenKind::punctuation;
  if (all_digit) return TokenKind::digit;
  return TokenKind::word;
}

std::vector<Token> tokenize(std::string_view line) {
  const std::vector<char32_t> cps = utf8_decode(line);
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < cps.size()) {
    if (is_space_cp(cps[i])) {
      ++i;
      continue;
    }
    if (is_splitting_punct(cps[i])) {
      out.push_back(make_token(cps, i, i + 1, true));
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < cps.size() && !is_space_cp(cps[j]) && !is_splitting_punct(cps[j]))
      ++j;
    out.push_back(make_token(cps, i, j, false));
    i = j;
  }
  return out;
}

const TransliterationTable& TransliterationTable::buckwalter() {
  static const TransliterationTable table = [] {
    TransliterationTable t;
    static constexpr struct {
      char32_t arabic;
      char ascii;
    } pairs[] = {
        {0x0621, '\''}, {0x0622, '|'}, {0x0623, '>'}, {0x0624, '&'},
        {0x0625, '<'},  {0x0626, '}'}, {0x0627, 'A'}, {0x0628, 'b'},
        {0x0629, 'p'},  {0x062A, 't'}, {0x062B, 'v'}, {0x062C, 'j'},
        {0x062D, 'H'},  {0x062E, 'x'}, {0x062F, 'd'}, {0x0630, '*'},
        {0x0631, 'r'},  {0x0632, 'z'}, {0x0633, 's'}, {0x0634, '$'},
        {0x0635, 'S'},  {0x0636, 'D'}, {0x0637, 'T'}, {0x0638, 'Z'},
        {0x0639, 'E'},  {0x063A, 'g'}, {0x0641, 'f'}, {0x0642, 'q'},
        {0x0643, 'k'},  {0x0644, 'l'}, {0x0645, 'm'}, {0x0646, 'n'},
        {0x0647, 'h'},  {0x0648, 'w'}, {0x0649, 'Y'}, {0x064A, 'y'},
        {0x064B, 'F'},  {0x064C, 'N'}, {0x064D, 'K'}, {0x064E, 'a'},
        {0x064F, 'u'},  {0x0650, 'i'}, {0x0651, '~'}, {0x0652, 'o'},
    };
    for (const auto& p : pairs) t.add(p.arabic, p.ascii);
    return t;
  }();
  return table;
}

void TransliterationTable::add(char32_t arabic, char ascii) {
  auto a = to_ascii_.find(arabic);
  auto b = to_arabic_.find(ascii);
  if (a != to_ascii_.end() || b != to_arabic_.end()) {
    if (a != to_ascii_.end() && a->second == ascii) return;  // same pair
    throw std::invalid_argument("transliteration table: mapping is not a bijection");
  }
  to_ascii_.emplace(arabic, ascii);
  to_arabic_.emplace(ascii, arabic);
}

std::optional<char> TransliterationTable::ascii_for(char32_t arabic) const {
  auto it = to_ascii_.find(arabic);
  if (it == to_ascii_.end()) return std::nullopt;
  return it->second;
}

std::optional<char32_t> TransliterationTable::arabic_for(char ascii) const {
  auto it = to_arabic_.find(ascii);
  if (it == to_arabic_.end()) return std::nullopt;
  return it->second;
}

TransliterationTable TransliterationTable::load_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open transliteration table: " + path);
  TransliterationTable t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab + 1 >= line.size()) {
      std::ostringstream msg;
      msg << path << ":" << line_no << ": expected two tab-separated columns";
      throw std::runtime_error(msg.str());
    }
    std::string col1 = line.substr(0, tab);
    std::string col2 = line.substr(tab + 1);
    char32_t arabic;
    if (col1.size() > 2 && (col1[0] == 'U' || col1[0] == 'u') && col1[1] == '+') {
      arabic = static_cast<char32_t>(std::stoul(col1.substr(2), nullptr, 16));
    } else {
      auto cps = utf8_decode(col1);
      if (cps.size() != 1) {
        std::ostringstream msg;
        msg << path << ":" << line_no << ": column 1 must be one codepoint";
        throw std::runtime_error(msg.str());
      }
      arabic = cps[0];
    }
    if (col2.size() != 1) {
      std::ostringstream msg;
      msg << path << ":" << line_no << ": column 2 must be one ASCII character";
      throw std::runtime_error(msg.str());
    }
    t.add(arabic, col2[0]);
  }
  return t;
}

void TransliterationTable::save_tsv(const std::string& path) const {
  std::vector<std::pair<char32_t, char>> rows(to_ascii_.begin(), to_ascii_.end());
  std::sort(rows.begin(), rows.end());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write transliteration table: " + path);
  for (const auto& [arabic, ascii] : rows) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "U+%04X", static_cast<unsigned>(arabic));
    out << buf << '\t' << ascii << '\n';
  }
}

TransliterationResult transliterate(std::string_view text, Direction direction,
                                    const TransliterationTable& table) {
  TransliterationResult res;
  if (direction == Direction::to_ascii) {
    for (char32_t cp : utf8_decode(text)) {
      if (auto a = table.ascii_for(cp)) {
        res.text.push_back(*a);
      } else {
        utf8_append(res.text, cp);
        if (cp >= 0x80 || std::isalpha(static_cast<unsigned char>(cp)))
          ++res.uncovered;
      }
    }
  } else {
    for (char32_t cp : utf8_decode(text)) {
      if (cp < 0x80) {
        if (auto a = table.arabic_for(static_cast<char>(cp))) {
          utf8_append(res.text, *a);
          continue;
        }
        res.text.push_back(static_cast<char>(cp));
        if (std::isalpha(static_cast<unsigned char>(cp))) ++res.uncovered;
      } else {
        utf8_append(res.text, cp);
        ++res.uncovered;
      }
    }
  }
  return res;
}

std::string normalize_word(std::string_view surface) {
  const std::string& diacritics = buckwalter_diacritics();
  std::vector<char32_t> cps = utf8_decode(surface);
  std::vector<char32_t> stripped;
  stripped.reserve(cps.size());
  for (char32_t cp : cps) {
    if (cp < 0x80 && diacritics.find(static_cast<char>(cp)) != std::string::npos)
      continue;
    stripped.push_back(cp);
  }
  if (stripped.empty()) return std::string(surface);
  std::vector<char32_t> out;
  out.reserve(stripped.size());
  std::size_t i = 0;
  while (i < stripped.size()) {
    std::size_t j = i;
    while (j < stripped.size() && stripped[j] == stripped[i]) ++j;
    std::size_t run = j - i;
    // runs of >= 3 collapse to one; doubled letters are legitimate
    std::size_t keep = run >= 3 ? 1 : run;
    for (std::size_t k = 0; k < keep; ++k) out.push_back(stripped[i]);
    i = j;
  }
  return utf8_encode(out);
}

Token normalize(const Token& token) {
  Token out = token;
  switch (token.kind) {
    case TokenKind::word:
      out.surface = normalize_word(token.surface);
      break;
    case TokenKind::punctuation: {
      std::string mapped;
      for (char32_t cp : utf8_decode(token.surface)) {
        if (cp == U'?')
          utf8_append(mapped, kArabicQuestion);
        else if (cp == U',')
          utf8_append(mapped, kArabicComma);
        else if (cp == U';')
          utf8_append(mapped, kArabicSemicolon);
        else
          utf8_append(mapped, cp);
      }
      out.surface = std::move(mapped);
      break;
    }
    case TokenKind::digit:
      break;
  }
  return out;
}

}  // namespace qalam
