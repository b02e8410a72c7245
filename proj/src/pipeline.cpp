#include "qalam/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "qalam/segmentation.hpp"
#include "qalam/textnorm.hpp"

namespace qalam {

namespace fs = std::filesystem;

void apply_stage_string(PipelineConfig& config, std::string_view stages) {
  config.edit = config.add_before = config.merge = config.split = false;
  std::string current;
  auto apply_one = [&config](const std::string& s) {
    if (s.empty()) return;
    if (s == "E")
      config.edit = true;
    else if (s == "A")
      config.add_before = true;
    else if (s == "M")
      config.merge = true;
    else if (s == "S")
      config.split = true;
    else
      throw std::invalid_argument("unknown stage: " + s);
  };
  for (char c : stages) {
    if (c == ',' || c == ' ') {
      apply_one(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  apply_one(current);
}

std::string stage_string(const PipelineConfig& config) {
  std::vector<std::string> parts;
  if (config.edit) parts.push_back("E");
  if (config.add_before) parts.push_back("A");
  if (config.merge) parts.push_back("M");
  if (config.split) parts.push_back("S");
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back(',');
    out += parts[i];
  }
  return out;
}

bool detect(const WordRecord& record, const Lexicon& lexicon) {
  if (record.token.kind != TokenKind::word) return false;
  if (record.has_analysis) return false;
  return !lexicon.contains(record.token.surface);
}

namespace {

struct Entry {
  Token tok;
  std::optional<WordFeatures> features;
  bool has_analysis = false;
  std::size_t ob = 0, oe = 0;  // source-token span this entry came from
  bool changed = false;
  CorrectionKind kind = CorrectionKind::normalize;
};

WordRecord to_record(const Entry& e) {
  WordRecord rec;
  rec.token = e.tok;
  rec.features = e.features;
  rec.has_analysis = e.has_analysis;
  return rec;
}

Sentence records_view(const std::vector<Entry>& entries) {
  Sentence out;
  out.reserve(entries.size());
  for (const Entry& e : entries) out.push_back(to_record(e));
  return out;
}

std::vector<std::string> surfaces_view(const std::vector<Entry>& entries) {
  std::vector<std::string> out;
  out.reserve(entries.size());
  for (const Entry& e : entries) out.push_back(e.tok.surface);
  return out;
}

void refresh_from_lexicon(Entry& e, const Lexicon& lexicon) {
  e.features.reset();
  e.has_analysis = false;
  if (e.tok.kind != TokenKind::word) return;
  if (const WordFeatures* f = lexicon.lookup(e.tok.surface)) {
    e.features = *f;
    e.has_analysis = true;
  }
}

bool entry_incorrect(const Entry& e, const Lexicon& lexicon) {
  return detect(to_record(e), lexicon);
}

}  // namespace

SentenceResult correct_sentence(const Sentence& sentence,
                                const TrainedSystem& system,
                                const PipelineConfig& config) {
  const std::vector<std::string> source = surfaces_of(sentence);
  std::vector<Entry> entries;
  entries.reserve(sentence.size());
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    Entry e;
    e.tok = sentence[i].token;
    e.features = sentence[i].features;
    e.has_analysis = sentence[i].has_analysis;
    e.ob = i;
    e.oe = i + 1;
    entries.push_back(std::move(e));
  }

  // 1. normalize
  for (Entry& e : entries) {
    Token normalized = normalize(e.tok);
    if (normalized.surface == e.tok.surface) continue;
    e.tok = std::move(normalized);
    refresh_from_lexicon(e, system.lexicon);
    e.changed = true;
    e.kind = CorrectionKind::normalize;
  }

  // 2. edit
  if (config.edit) {
    const EditModelRefs refs = system.edit_refs();
    const EditConfig edit_cfg = config.edit_config();
    Sentence view = records_view(entries);
    for (std::size_t i = 0; i < entries.size(); ++i) {
      Entry& e = entries[i];
      if (!entry_incorrect(e, system.lexicon)) continue;
      if (config.merge) {
        // leave words that merge with a neighbor to the merge stage
        auto joinable = [&](std::size_t a, std::size_t b) {
          return entries[a].tok.kind == TokenKind::word &&
                 entries[b].tok.kind == TokenKind::word &&
                 system.lexicon.contains(entries[a].tok.surface +
                                         entries[b].tok.surface);
        };
        if (i + 1 < entries.size() && joinable(i, i + 1)) continue;
        if (i >= 1 && joinable(i - 1, i)) continue;
      }
      const EditDecision decision =
          correct_edit(i, view, refs, system.edit_nb, edit_cfg);
      if (!decision.chosen) continue;
      if (decision.chosen->surface == e.tok.surface) continue;
      e.tok.surface = decision.chosen->surface;
      e.features = decision.chosen->features;
      e.has_analysis = true;
      e.changed = true;
      e.kind = CorrectionKind::edit;
      view[i] = to_record(e);
    }
  }

  // 3. add-before
  if (config.add_before) {
    const Sentence view = records_view(entries);
    const auto predictions =
        predict_insertions(view, system.addbefore_nb, system.lexicon);
    // apply from the back so earlier positions stay valid
    for (auto it = predictions.rbegin(); it != predictions.rend(); ++it) {
      if (it->token.empty()) continue;
      Entry inserted;
      inserted.tok.surface = it->token;
      inserted.tok.kind = classify_surface(it->token);
      const std::size_t pos = it->source_position;
      const std::size_t anchor = pos < entries.size()
                                     ? entries[pos].ob
                                     : source.size();
      inserted.ob = inserted.oe = anchor;
      inserted.changed = true;
      inserted.kind = CorrectionKind::add_before;
      entries.insert(entries.begin() + pos, std::move(inserted));
    }
  }

  // 4. merge
  if (config.merge) {
    std::size_t i = 0;
    while (i + 1 < entries.size()) {
      Entry& a = entries[i];
      Entry& b = entries[i + 1];
      const bool eligible =
          a.tok.kind == TokenKind::word && b.tok.kind == TokenKind::word &&
          (entry_incorrect(a, system.lexicon) ||
           entry_incorrect(b, system.lexicon));
      if (eligible) {
        const auto prop =
            correct_merge(surfaces_view(entries), i, system.lexicon, system.lm,
                          config.segment_min_gain);
        if (prop) {
          Entry merged;
          merged.tok.surface = prop->replacement[0];
          merged.tok.kind = TokenKind::word;
          merged.ob = a.ob;
          merged.oe = b.oe;
          merged.changed = true;
          merged.kind = CorrectionKind::merge;
          refresh_from_lexicon(merged, system.lexicon);
          entries.erase(entries.begin() + i, entries.begin() + i + 2);
          entries.insert(entries.begin() + i, std::move(merged));
          ++i;  // a token joins at most one segmentation fix per pass
          continue;
        }
      }
      ++i;
    }
  }

  // 5. split
  if (config.split) {
    std::size_t i = 0;
    while (i < entries.size()) {
      Entry& e = entries[i];
      if (e.tok.kind == TokenKind::word && entry_incorrect(e, system.lexicon) &&
          e.tok.surface.size() >= 4) {
        const auto prop =
            correct_split(surfaces_view(entries), i, system.lexicon, system.lm,
                          config.segment_min_gain);
        if (prop) {
          Entry first, second;
          first.tok.surface = prop->replacement[0];
          first.tok.kind = TokenKind::word;
          first.ob = e.ob;
          first.oe = e.oe;
          first.changed = true;
          first.kind = CorrectionKind::split;
          refresh_from_lexicon(first, system.lexicon);
          second = first;
          second.tok.surface = prop->replacement[1];
          refresh_from_lexicon(second, system.lexicon);
          entries.erase(entries.begin() + i);
          entries.insert(entries.begin() + i, first);
          entries.insert(entries.begin() + i + 1, second);
          i += 2;
          continue;
        }
      }
      ++i;
    }
  }

  // emit corrections against the source sentence
  SentenceResult result;
  result.tokens = surfaces_view(entries);
  std::size_t i = 0;
  while (i < entries.size()) {
    const Entry& e = entries[i];
    if (!e.changed) {
      ++i;
      continue;
    }
    if (e.ob == e.oe) {  // insertion
      Correction c;
      c.kind = e.kind;
      c.begin = c.end = e.ob;
      c.replacement = {e.tok.surface};
      result.corrections.push_back(std::move(c));
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < entries.size() && entries[j].changed &&
           entries[j].ob == e.ob && entries[j].oe == e.oe)
      ++j;
    Correction c;
    c.kind = e.kind;
    c.begin = e.ob;
    c.end = e.oe;
    for (std::size_t k = e.ob; k < e.oe; ++k) c.original.push_back(source[k]);
    for (std::size_t k = i; k < j; ++k)
      c.replacement.push_back(entries[k].tok.surface);
    result.corrections.push_back(std::move(c));
    i = j;
  }
  return result;
}

TrainedSystem train_system(const std::vector<Sentence>& corpus,
                           const std::vector<GoldAnnotation>& gold,
                           Lexicon lexicon,
                           const std::vector<std::vector<std::string>>& lm_corpus,
                           const PipelineConfig& config) {
  if (gold.size() != corpus.size()) {
    std::ostringstream msg;
    msg << "train_system: corpus has " << corpus.size()
        << " sentences but the gold file has " << gold.size();
    throw std::runtime_error(msg.str());
  }
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (gold[i].tokens != surfaces_of(corpus[i])) {
      std::ostringstream msg;
      msg << "train_system: gold/corpus token mismatch at sentence "
          << gold[i].id;
      throw std::runtime_error(msg.str());
    }
  }

  // the pipeline normalizes before the edit stage; mirror that in training
  std::vector<Sentence> normalized = corpus;
  for (Sentence& sentence : normalized) {
    for (WordRecord& rec : sentence) {
      Token n = normalize(rec.token);
      if (n.surface == rec.token.surface) continue;
      rec.token = std::move(n);
      rec.features.reset();
      rec.has_analysis = false;
      if (rec.token.kind == TokenKind::word) {
        if (const WordFeatures* f = lexicon.lookup(rec.token.surface)) {
          rec.features = *f;
          rec.has_analysis = true;
        }
      }
    }
  }

  std::vector<std::vector<Correction>> gold_per_sentence(gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i)
    gold_per_sentence[i] = gold[i].corrections;

  // gold-corrected corpus backs the context models (and the LM by default)
  std::vector<std::vector<std::string>> corrected_surfaces;
  corrected_surfaces.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i)
    corrected_surfaces.push_back(
        apply_corrections(surfaces_of(corpus[i]), gold[i].corrections));
  std::vector<Sentence> corrected;
  corrected.reserve(corpus.size());
  for (const auto& surfaces : corrected_surfaces)
    corrected.push_back(make_records(surfaces, lexicon));

  TrainedSystem system;
  system.config = config;

  std::set<std::string> vocabulary;
  for (const std::string& s : lexicon.sorted_surfaces()) vocabulary.insert(s);
  const NgramCounts counts = count_ngrams(
      lm_corpus.empty() ? corrected_surfaces : lm_corpus, vocabulary);
  system.lm = estimate_mkn(counts);

  std::vector<std::pair<std::string, std::string>> channel_pairs;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (const Correction& c : gold[i].corrections) {
      if (c.kind != CorrectionKind::edit) continue;
      if (c.end != c.begin + 1 || c.replacement.size() != 1) continue;
      if (c.begin >= normalized[i].size()) continue;
      channel_pairs.emplace_back(normalized[i][c.begin].token.surface,
                                 c.replacement[0]);
    }
  }
  system.cm = train_confusion(channel_pairs);

  system.context = train_context_models(corrected, lexicon, config.top_lemmas,
                                        config.cooccurrence_radius);

  system.lexicon = std::move(lexicon);
  const EditModelRefs refs{system.lexicon, system.lm, system.cm, system.context};
  system.edit_nb = train_edit_classifier(normalized, gold_per_sentence, refs,
                                         config.edit_config(), config.seed);
  system.addbefore_nb = train_addbefore(normalized, gold_per_sentence,
                                        system.lexicon,
                                        config.addbefore_config());
  return system;
}

void save_config(const PipelineConfig& config, const std::string& path) {
  nlohmann::json j;
  j["stages"] = stage_string(config);
  j["boost_k"] = config.boost_k;
  j["max_edit_distance"] = config.max_edit_distance;
  j["candidate_cap"] = config.candidate_cap;
  j["negative_cap"] = config.negative_cap;
  j["segment_min_gain"] = config.segment_min_gain;
  j["addbefore_min_count"] = config.addbefore_min_count;
  j["addbefore_max_label_length"] = config.addbefore_max_label_length;
  j["top_lemmas"] = config.top_lemmas;
  j["cooccurrence_radius"] = config.cooccurrence_radius;
  j["seed"] = config.seed;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config: " + path);
  out << j.dump(2) << '\n';
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  nlohmann::json j;
  in >> j;
  PipelineConfig config;
  apply_stage_string(config, j.value("stages", std::string("E,A,M,S")));
  config.boost_k = j.value("boost_k", config.boost_k);
  config.max_edit_distance = j.value("max_edit_distance", config.max_edit_distance);
  config.candidate_cap = j.value("candidate_cap", config.candidate_cap);
  config.negative_cap = j.value("negative_cap", config.negative_cap);
  config.segment_min_gain = j.value("segment_min_gain", config.segment_min_gain);
  config.addbefore_min_count =
      j.value("addbefore_min_count", config.addbefore_min_count);
  config.addbefore_max_label_length =
      j.value("addbefore_max_label_length", config.addbefore_max_label_length);
  config.top_lemmas = j.value("top_lemmas", config.top_lemmas);
  config.cooccurrence_radius =
      j.value("cooccurrence_radius", config.cooccurrence_radius);
  config.seed = j.value("seed", config.seed);
  return config;
}

void save_system(const TrainedSystem& system, const std::string& dir) {
  fs::create_directories(dir);
  const fs::path base(dir);
  save_lexicon(system.lexicon, (base / "dictionary.tsv").string(),
               (base / "stoplist.txt").string());
  write_arpa(system.lm, (base / "lm.arpa").string());
  system.cm.save((base / "confusion.tsv").string());
  save_context_models(system.context, (base / "context.tsv").string());
  save_nb_model(system.edit_nb, (base / "nb_edit.tsv").string());
  save_nb_model(system.addbefore_nb, (base / "nb_addbefore.tsv").string());
  save_config(system.config, (base / "config.json").string());
}

TrainedSystem load_system(const std::string& dir) {
  const fs::path base(dir);
  TrainedSystem system;
  system.lexicon = load_lexicon((base / "dictionary.tsv").string(),
                                (base / "stoplist.txt").string());
  system.lm = read_arpa((base / "lm.arpa").string());
  system.cm = ConfusionMatrix::load((base / "confusion.tsv").string());
  system.context = load_context_models((base / "context.tsv").string());
  system.edit_nb = load_nb_model((base / "nb_edit.tsv").string());
  system.addbefore_nb = load_nb_model((base / "nb_addbefore.tsv").string());
  system.config = load_config((base / "config.json").string());
  return system;
}

}  // namespace qalam
