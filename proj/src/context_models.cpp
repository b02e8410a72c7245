#include "qalam/context_models.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qalam {

namespace {

std::string lemma_of(const WordRecord& rec) {
  if (rec.features && !rec.features->lemma.empty()) return rec.features->lemma;
  return rec.token.surface;
}

std::string pos_of(const WordRecord& rec) {
  if (rec.features && !rec.features->pos.empty()) return rec.features->pos;
  return std::string(kBoundaryPos);
}

}  // namespace

TopLemmaList TopLemmaList::build(const std::vector<Sentence>& corpus,
                                 std::size_t limit) {
  std::unordered_map<std::string, std::uint64_t> freq;
  for (const Sentence& sentence : corpus)
    for (const WordRecord& rec : sentence)
      if (rec.token.kind == TokenKind::word) ++freq[lemma_of(rec)];

  std::vector<std::pair<std::string, std::uint64_t>> ordered(freq.begin(),
                                                             freq.end());
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (ordered.size() > limit) ordered.resize(limit);

  TopLemmaList out;
  out.lemmas = std::move(ordered);
  for (const auto& [lemma, count] : out.lemmas) out.members.insert(lemma);
  return out;
}

std::vector<std::string> content_lemmas(const Sentence& sentence,
                                        const Lexicon& lexicon) {
  std::vector<std::string> out;
  for (const WordRecord& rec : sentence) {
    if (rec.token.kind != TokenKind::word) continue;
    if (lexicon.is_stopword(rec.token.surface)) continue;
    out.push_back(lemma_of(rec));
  }
  return out;
}

ContextModels train_context_models(const std::vector<Sentence>& corpus,
                                   const Lexicon& lexicon,
                                   std::size_t top_limit, std::size_t radius) {
  ContextModels models;
  models.top = TopLemmaList::build(corpus, top_limit);

  // collocation: slide a 3-POS window over the padded tag sequence
  for (const Sentence& sentence : corpus) {
    if (sentence.empty()) continue;
    std::vector<std::string> pos;
    pos.reserve(sentence.size() + 2);
    pos.emplace_back(kBoundaryPos);
    for (const WordRecord& rec : sentence) pos.push_back(pos_of(rec));
    pos.emplace_back(kBoundaryPos);

    for (std::size_t w = 0; w + 3 <= pos.size(); ++w) {
      const std::string key = pos[w] + ' ' + pos[w + 1] + ' ' + pos[w + 2];
      for (int slot = 0; slot < 3; ++slot) {
        // padded index w+slot corresponds to sentence index w+slot-1
        if (w + slot == 0 || w + slot > sentence.size()) continue;
        const WordRecord& rec = sentence[w + slot - 1];
        if (rec.token.kind != TokenKind::word) continue;
        const std::string lemma = lemma_of(rec);
        if (!models.top.contains(lemma)) continue;
        CollocationSlots& slots = models.collocation[lemma];
        ++slots.tables[slot][key];
        ++slots.totals[slot];
      }
    }
  }

  // co-occurrence over stop-word-free lemma sequences
  for (const Sentence& sentence : corpus) {
    const std::vector<std::string> reduced = content_lemmas(sentence, lexicon);
    for (std::size_t i = 0; i < reduced.size(); ++i) {
      if (!models.top.contains(reduced[i])) continue;
      CooccurrenceTable& table = models.cooccurrence[reduced[i]];
      const std::size_t lo = i > radius ? i - radius : 0;
      const std::size_t hi = std::min(reduced.size(), i + radius + 1);
      for (std::size_t j = lo; j < hi; ++j) {
        if (j == i) continue;
        std::uint64_t& cell = table.counts[reduced[j]];
        ++cell;
        ++table.total;
        table.max_count = std::max(table.max_count, cell);
      }
    }
  }
  return models;
}

CollocationFeatures collocation_features(
    const ContextModels& models, std::string_view lemma,
    const std::array<std::string, 5>& pos_window) {
  CollocationFeatures out;
  auto it = models.collocation.find(std::string(lemma));
  if (it == models.collocation.end()) return out;
  const CollocationSlots& slots = it->second;

  // candidate at the window center: it is last of (q0,q1,q2), middle of
  // (q1,q2,q3) and first of (q2,q3,q4)
  const std::string right_key =
      pos_window[0] + ' ' + pos_window[1] + ' ' + pos_window[2];
  const std::string mid_key =
      pos_window[1] + ' ' + pos_window[2] + ' ' + pos_window[3];
  const std::string left_key =
      pos_window[2] + ' ' + pos_window[3] + ' ' + pos_window[4];

  auto norm = [](const std::map<std::string, std::uint64_t>& table,
                 std::uint64_t total, const std::string& key) -> double {
    if (total == 0) return 0;
    auto kit = table.find(key);
    if (kit == table.end()) return 0;
    return static_cast<double>(kit->second) / static_cast<double>(total);
  };
  out.left = norm(slots.tables[0], slots.totals[0], left_key);
  out.mid = norm(slots.tables[1], slots.totals[1], mid_key);
  out.right = norm(slots.tables[2], slots.totals[2], right_key);
  out.product = out.left * out.mid * out.right;
  return out;
}

CooccurrenceDistances cooccurrence_distances(
    const ContextModels& models, std::string_view lemma,
    const std::vector<std::string>& context) {
  CooccurrenceDistances out;
  auto it = models.cooccurrence.find(std::string(lemma));
  if (it == models.cooccurrence.end()) return out;
  const CooccurrenceTable& table = it->second;
  out.d3 = static_cast<double>(table.counts.size());
  if (context.empty()) return out;

  std::size_t found = 0;
  double weight = 0;
  for (const std::string& c : context) {
    auto cit = table.counts.find(c);
    if (cit == table.counts.end()) continue;
    ++found;
    weight += static_cast<double>(cit->second);
  }
  out.d1 = static_cast<double>(found) / static_cast<double>(context.size());
  if (table.max_count > 0)
    out.d2 = weight / static_cast<double>(table.max_count);
  return out;
}

namespace {

const char* slot_name(int slot) {
  switch (slot) {
    case 0: return "left";
    case 1: return "mid";
    default: return "right";
  }
}

int slot_index(const std::string& name) {
  if (name == "left") return 0;
  if (name == "mid") return 1;
  if (name == "right") return 2;
  return -1;
}

}  // namespace

void save_context_models(const ContextModels& models, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write context models: " + path);
  out << "#L\n";
  for (const auto& [lemma, count] : models.top.lemmas)
    out << lemma << '\t' << count << '\n';

  std::vector<std::string> coll_lemmas;
  for (const auto& [lemma, slots] : models.collocation)
    coll_lemmas.push_back(lemma);
  std::sort(coll_lemmas.begin(), coll_lemmas.end());
  for (const std::string& lemma : coll_lemmas) {
    const CollocationSlots& slots = models.collocation.at(lemma);
    for (int slot = 0; slot < 3; ++slot) {
      if (slots.tables[slot].empty()) continue;
      out << "#COLL " << lemma << ' ' << slot_name(slot) << '\n';
      for (const auto& [key, count] : slots.tables[slot])
        out << key << '\t' << count << '\n';
    }
  }

  std::vector<std::string> cooc_lemmas;
  for (const auto& [lemma, table] : models.cooccurrence)
    cooc_lemmas.push_back(lemma);
  std::sort(cooc_lemmas.begin(), cooc_lemmas.end());
  for (const std::string& lemma : cooc_lemmas) {
    const CooccurrenceTable& table = models.cooccurrence.at(lemma);
    out << "#COOC " << lemma << '\n';
    for (const auto& [key, count] : table.counts)
      out << key << '\t' << count << '\n';
  }
}

ContextModels load_context_models(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open context models: " + path);
  ContextModels models;
  std::string line;
  std::size_t line_no = 0;
  enum { none, top, coll, cooc } section = none;
  CollocationSlots* cur_slots = nullptr;
  int cur_slot = 0;
  CooccurrenceTable* cur_table = nullptr;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line == "#L") {
      section = top;
      continue;
    }
    if (line.rfind("#COLL ", 0) == 0) {
      std::istringstream hdr(line.substr(6));
      std::string lemma, slot;
      hdr >> lemma >> slot;
      cur_slot = slot_index(slot);
      if (lemma.empty() || cur_slot < 0) {
        std::ostringstream msg;
        msg << path << ":" << line_no << ": malformed #COLL header";
        throw std::runtime_error(msg.str());
      }
      cur_slots = &models.collocation[lemma];
      section = coll;
      continue;
    }
    if (line.rfind("#COOC ", 0) == 0) {
      const std::string lemma = line.substr(6);
      cur_table = &models.cooccurrence[lemma];
      section = cooc;
      continue;
    }
    auto tab = line.rfind('\t');
    if (section == none || tab == std::string::npos) {
      std::ostringstream msg;
      msg << path << ":" << line_no << ": malformed context model row";
      throw std::runtime_error(msg.str());
    }
    const std::string key = line.substr(0, tab);
    const std::uint64_t count = std::stoull(line.substr(tab + 1));
    switch (section) {
      case top:
        models.top.lemmas.emplace_back(key, count);
        models.top.members.insert(key);
        break;
      case coll:
        cur_slots->tables[cur_slot][key] = count;
        cur_slots->totals[cur_slot] += count;
        break;
      case cooc: {
        cur_table->counts[key] = count;
        cur_table->total += count;
        cur_table->max_count = std::max(cur_table->max_count, count);
        break;
      }
      default:
        break;
    }
  }
  return models;
}

}  // namespace qalam
