#include "qalam/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qalam {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return out;
}

}  // namespace

std::string_view to_string(Gender g) {
  switch (g) {
    case Gender::masc: return "masc";
    case Gender::fem: return "fem";
    default: return "none";
  }
}

std::string_view to_string(Number n) {
  switch (n) {
    case Number::sg: return "sg";
    case Number::du: return "du";
    case Number::pl: return "pl";
    default: return "none";
  }
}

Gender gender_from(std::string_view s) {
  if (s == "masc") return Gender::masc;
  if (s == "fem") return Gender::fem;
  return Gender::none;
}

Number number_from(std::string_view s) {
  if (s == "sg") return Number::sg;
  if (s == "du") return Number::du;
  if (s == "pl") return Number::pl;
  return Number::none;
}

void Lexicon::add(std::string surface, WordFeatures features) {
  auto [it, inserted] = entries_.emplace(std::move(surface), std::move(features));
  (void)it;
  if (inserted) buckets_fresh_ = false;
}

void Lexicon::add_stopword(std::string surface) {
  stoplist_.insert(std::move(surface));
}

const WordFeatures* Lexicon::lookup(std::string_view surface) const {
  auto it = entries_.find(std::string(surface));
  return it == entries_.end() ? nullptr : &it->second;
}

bool Lexicon::is_stopword(std::string_view surface) const {
  return stoplist_.count(std::string(surface)) > 0;
}

void Lexicon::refresh_buckets() const {
  by_length_.clear();
  for (const auto& [surface, features] : entries_) {
    std::size_t len = surface.size();
    if (by_length_.size() <= len) by_length_.resize(len + 1);
    by_length_[len].push_back(surface);
  }
  for (auto& bucket : by_length_) std::sort(bucket.begin(), bucket.end());
  buckets_fresh_ = true;
}

const std::vector<std::string>& Lexicon::surfaces_of_length(std::size_t len) const {
  if (!buckets_fresh_) refresh_buckets();
  static const std::vector<std::string> empty;
  if (len >= by_length_.size()) return empty;
  return by_length_[len];
}

std::size_t Lexicon::max_surface_length() const {
  if (!buckets_fresh_) refresh_buckets();
  return by_length_.empty() ? 0 : by_length_.size() - 1;
}

std::vector<std::string> Lexicon::sorted_surfaces() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [surface, features] : entries_) out.push_back(surface);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> Lexicon::sorted_stopwords() const {
  std::vector<std::string> out(stoplist_.begin(), stoplist_.end());
  std::sort(out.begin(), out.end());
  return out;
}

Lexicon load_lexicon(const std::string& dictionary_path,
                     const std::string& stoplist_path) {
  std::ifstream dict(dictionary_path);
  if (!dict)
    throw std::runtime_error("cannot open dictionary: " + dictionary_path);
  Lexicon lex;
  std::string line;
  std::size_t skipped = 0;
  while (std::getline(dict, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cols = split_tabs(line);
    if (cols.size() != 6 || cols[0].empty() || cols[1].empty()) {
      ++skipped;
      continue;
    }
    WordFeatures f;
    f.pos = cols[1];
    f.lemma = cols[2];
    f.gender = gender_from(cols[3]);
    f.number = number_from(cols[4]);
    f.pregloss = cols[5];
    lex.add(cols[0], std::move(f));
  }
  if (lex.size() == 0)
    throw std::runtime_error("dictionary has no valid rows: " + dictionary_path);
  lex.set_skipped_rows(skipped);

  if (!stoplist_path.empty()) {
    std::ifstream stop(stoplist_path);
    if (!stop)
      throw std::runtime_error("cannot open stoplist: " + stoplist_path);
    while (std::getline(stop, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      lex.add_stopword(line);
    }
  }
  return lex;
}

void save_lexicon(const Lexicon& lexicon, const std::string& dictionary_path,
                  const std::string& stoplist_path) {
  std::ofstream dict(dictionary_path);
  if (!dict)
    throw std::runtime_error("cannot write dictionary: " + dictionary_path);
  for (const std::string& surface : lexicon.sorted_surfaces()) {
    const WordFeatures* f = lexicon.lookup(surface);
    dict << surface << '\t' << f->pos << '\t' << f->lemma << '\t'
         << to_string(f->gender) << '\t' << to_string(f->number) << '\t'
         << f->pregloss << '\n';
  }
  std::ofstream stop(stoplist_path);
  if (!stop)
    throw std::runtime_error("cannot write stoplist: " + stoplist_path);
  for (const std::string& s : lexicon.sorted_stopwords()) stop << s << '\n';
}

std::vector<Sentence> read_column_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open column corpus: " + path);
  std::vector<Sentence> corpus;
  Sentence current;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (!current.empty()) corpus.push_back(std::move(current));
      current.clear();
      continue;
    }
    auto cols = split_tabs(line);
    if (cols.size() != 7) {
      std::ostringstream msg;
      msg << path << ":" << line_no << ": expected 7 columns, got "
          << cols.size();
      throw std::runtime_error(msg.str());
    }
    WordRecord rec;
    rec.token.surface = cols[0];
    rec.token.kind = classify_surface(cols[0]);
    rec.has_analysis = cols[6] == "1";
    if (rec.has_analysis) {
      WordFeatures f;
      f.pos = cols[1];
      f.lemma = cols[2];
      f.gender = gender_from(cols[3]);
      f.number = number_from(cols[4]);
      f.pregloss = cols[5];
      rec.features = std::move(f);
    }
    current.push_back(std::move(rec));
  }
  if (!current.empty()) corpus.push_back(std::move(current));
  return corpus;
}

void write_column_corpus(const std::vector<Sentence>& corpus,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write column corpus: " + path);
  for (const Sentence& sentence : corpus) {
    for (const WordRecord& rec : sentence) {
      if (rec.has_analysis && rec.features) {
        const WordFeatures& f = *rec.features;
        out << rec.token.surface << '\t' << f.pos << '\t' << f.lemma << '\t'
            << to_string(f.gender) << '\t' << to_string(f.number) << '\t'
            << f.pregloss << "\t1\n";
      } else {
        out << rec.token.surface << "\t\t\t\t\t\t0\n";
      }
    }
    out << '\n';
  }
}

Sentence to_records(const std::vector<Token>& tokens, const Lexicon& lexicon) {
  Sentence out;
  out.reserve(tokens.size());
  for (const Token& tok : tokens) {
    WordRecord rec;
    rec.token = tok;
    if (tok.kind == TokenKind::word) {
      if (const WordFeatures* f = lexicon.lookup(tok.surface)) {
        rec.features = *f;
        rec.has_analysis = true;
      }
    }
    out.push_back(std::move(rec));
  }
  return out;
}

Sentence make_records(const std::vector<std::string>& surfaces,
                      const Lexicon& lexicon) {
  std::vector<Token> tokens;
  tokens.reserve(surfaces.size());
  for (const std::string& s : surfaces)
    tokens.push_back(Token{s, classify_surface(s)});
  return to_records(tokens, lexicon);
}

std::vector<std::string> surfaces_of(const Sentence& sentence) {
  std::vector<std::string> out;
  out.reserve(sentence.size());
  for (const WordRecord& rec : sentence) out.push_back(rec.token.surface);
  return out;
}

}  // namespace qalam
