// qalam: trainable Arabic (Buckwalter) spelling correction.
// Subcommands: train, lm-build, correct, evaluate, inject.
// Every run writes a manifest (resolved config, paths, seed, content
// hashes) next to its outputs; identical manifests imply identical
// outputs.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qalam/eval.hpp"
#include "qalam/pipeline.hpp"
#include "qalam/textnorm.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string file_fingerprint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "missing";
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(bytes)));
  return buf;
}

std::uint64_t resolve_seed(std::uint64_t cli_seed) {
  if (const char* env = std::getenv("QALAM_SEED")) return std::stoull(env);
  return cli_seed;
}

json config_json(const qalam::PipelineConfig& c) {
  json j;
  j["stages"] = qalam::stage_string(c);
  j["boost_k"] = c.boost_k;
  j["max_edit_distance"] = c.max_edit_distance;
  j["candidate_cap"] = c.candidate_cap;
  j["negative_cap"] = c.negative_cap;
  j["segment_min_gain"] = c.segment_min_gain;
  j["addbefore_min_count"] = c.addbefore_min_count;
  j["addbefore_max_label_length"] = c.addbefore_max_label_length;
  j["top_lemmas"] = c.top_lemmas;
  j["cooccurrence_radius"] = c.cooccurrence_radius;
  j["seed"] = c.seed;
  return j;
}

void write_manifest(const std::string& dir, const std::string& command,
                    const json& config,
                    const std::vector<std::pair<std::string, std::string>>& inputs,
                    const std::vector<std::pair<std::string, std::string>>& outputs,
                    std::uint64_t seed) {
  json j;
  j["command"] = command;
  j["config"] = config;
  j["seed"] = seed;
  j["version"] = "qalam 1.0";
  json in = json::object();
  for (const auto& [name, path] : inputs) {
    in[name] = {{"path", path}, {"fingerprint", file_fingerprint(path)}};
  }
  json out = json::object();
  for (const auto& [name, path] : outputs) {
    out[name] = {{"path", path}, {"fingerprint", file_fingerprint(path)}};
  }
  j["inputs"] = in;
  j["outputs"] = out;
  if (!dir.empty()) fs::create_directories(dir);
  std::ofstream f(fs::path(dir.empty() ? "." : dir) /
                  ("manifest-" + command + ".json"));
  f << j.dump(2) << '\n';
}

// reads either a column corpus (.col) or raw tokenized text
std::vector<qalam::Sentence> read_input_corpus(const std::string& path,
                                               const qalam::Lexicon& lexicon,
                                               const std::string& format) {
  const bool column =
      format == "col" ||
      (format == "auto" && fs::path(path).extension() == ".col");
  if (column) return qalam::read_column_corpus(path);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input: " + path);
  std::vector<qalam::Sentence> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    out.push_back(qalam::to_records(qalam::tokenize(line), lexicon));
  }
  return out;
}

std::vector<std::vector<std::string>> read_plain_sentences(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus: " + path);
  std::vector<std::vector<std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> sent;
    for (const qalam::Token& t : qalam::tokenize(line)) sent.push_back(t.surface);
    out.push_back(std::move(sent));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qalam: statistical spelling correction for Buckwalter Arabic"};
  app.require_subcommand(1);

  // ---- train ----
  auto* train = app.add_subcommand("train", "train all models from a corpus");
  std::string t_corpus, t_gold, t_lexicon, t_stoplist, t_lm_corpus, t_out;
  qalam::PipelineConfig t_config;
  std::uint64_t t_seed = 1;
  train->add_option("--corpus", t_corpus, "column corpus (.col)")->required();
  train->add_option("--gold", t_gold, "gold annotation file")->required();
  train->add_option("--lexicon", t_lexicon, "dictionary TSV")->required();
  train->add_option("--stoplist", t_stoplist, "stoplist file");
  train->add_option("--lm-corpus", t_lm_corpus,
                    "plain text LM corpus (default: the corrected corpus)");
  train->add_option("--out", t_out, "output model directory")->required();
  train->add_option("--seed", t_seed, "training seed");
  train->add_option("--boost", t_config.boost_k, "substitution boost");
  train->add_option("--candidate-cap", t_config.candidate_cap,
                    "distance-2 candidate cap (0 = unlimited)");
  train->add_option("--negative-cap", t_config.negative_cap,
                    "negative training candidates per instance");
  train->add_option("--addbefore-min-count", t_config.addbefore_min_count,
                    "minimum gold count for an insertion label");

  // ---- lm-build ----
  auto* lmb = app.add_subcommand("lm-build", "build the language model alone");
  std::string l_corpus, l_lexicon, l_out;
  std::uint64_t l_seed = 1;
  lmb->add_option("--corpus", l_corpus, "plain tokenized text")->required();
  lmb->add_option("--lexicon", l_lexicon, "dictionary TSV (vocabulary)")
      ->required();
  lmb->add_option("--out", l_out, "output ARPA file")->required();
  lmb->add_option("--seed", l_seed, "seed (recorded in the manifest)");

  // ---- correct ----
  auto* correct = app.add_subcommand("correct", "correct a corpus");
  std::string c_model, c_in, c_out, c_proposals, c_stages, c_format = "auto";
  std::uint64_t c_seed = 1;
  correct->add_option("--model", c_model, "model directory")->required();
  correct->add_option("--in", c_in, "input corpus (.col or raw text)")
      ->required();
  correct->add_option("--out", c_out, "corrected text output")->required();
  correct->add_option("--proposals", c_proposals,
                      "write proposed corrections in gold format");
  correct->add_option("--stages", c_stages,
                      "comma list of stages to run (E,A,M,S)");
  correct->add_option("--format", c_format, "input format: auto|col|txt");
  correct->add_option("--seed", c_seed, "seed (recorded in the manifest)");

  // ---- evaluate ----
  auto* eval = app.add_subcommand("evaluate", "score proposals against gold");
  std::string e_proposals, e_gold, e_report;
  eval->add_option("--proposals", e_proposals, "proposed corrections file")
      ->required();
  eval->add_option("--gold", e_gold, "gold annotation file")->required();
  eval->add_option("--report", e_report, "optional JSON report path");

  // ---- inject ----
  auto* inject = app.add_subcommand("inject", "inject synthetic errors");
  std::string i_in, i_lexicon, i_stoplist, i_noisy, i_gold;
  double i_edit = 0.05, i_add = 0.03, i_merge = 0.02, i_split = 0.02;
  std::uint64_t i_seed = 1;
  inject->add_option("--in", i_in, "clean corpus (plain tokenized text)")
      ->required();
  inject->add_option("--lexicon", i_lexicon, "dictionary TSV")->required();
  inject->add_option("--stoplist", i_stoplist, "stoplist file");
  inject->add_option("--out-noisy", i_noisy, "noisy column corpus output")
      ->required();
  inject->add_option("--out-gold", i_gold, "gold annotation output")->required();
  inject->add_option("--edit-rate", i_edit, "edit error rate per word");
  inject->add_option("--add-rate", i_add, "add-before error rate per word");
  inject->add_option("--merge-rate", i_merge, "merge error rate per word");
  inject->add_option("--split-rate", i_split, "split error rate per word");
  inject->add_option("--seed", i_seed, "injection seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      t_config.seed = resolve_seed(t_seed);
      const qalam::Lexicon lexicon = qalam::load_lexicon(t_lexicon, t_stoplist);
      const auto corpus = qalam::read_column_corpus(t_corpus);
      const auto gold = qalam::read_gold(t_gold);
      std::vector<std::vector<std::string>> lm_corpus;
      if (!t_lm_corpus.empty()) lm_corpus = read_plain_sentences(t_lm_corpus);
      const qalam::TrainedSystem system =
          qalam::train_system(corpus, gold, lexicon, lm_corpus, t_config);
      qalam::save_system(system, t_out);
      std::vector<std::pair<std::string, std::string>> inputs = {
          {"corpus", t_corpus}, {"gold", t_gold}, {"lexicon", t_lexicon}};
      if (!t_stoplist.empty()) inputs.emplace_back("stoplist", t_stoplist);
      if (!t_lm_corpus.empty()) inputs.emplace_back("lm_corpus", t_lm_corpus);
      std::vector<std::pair<std::string, std::string>> outputs;
      for (const char* name :
           {"dictionary.tsv", "stoplist.txt", "lm.arpa", "confusion.tsv",
            "context.tsv", "nb_edit.tsv", "nb_addbefore.tsv", "config.json"})
        outputs.emplace_back(name, (fs::path(t_out) / name).string());
      write_manifest(t_out, "train", config_json(t_config), inputs, outputs,
                     t_config.seed);
      std::cout << "trained " << corpus.size() << " sentences -> " << t_out
                << "\n";
    } else if (*lmb) {
      const std::uint64_t seed = resolve_seed(l_seed);
      const qalam::Lexicon lexicon = qalam::load_lexicon(l_lexicon);
      const auto sentences = read_plain_sentences(l_corpus);
      std::set<std::string> vocab;
      for (const std::string& s : lexicon.sorted_surfaces()) vocab.insert(s);
      const qalam::LanguageModel lm =
          qalam::estimate_mkn(qalam::count_ngrams(sentences, vocab));
      qalam::write_arpa(lm, l_out);
      write_manifest(fs::path(l_out).parent_path().string(), "lm-build",
                     json{{"order", qalam::kLmOrder}},
                     {{"corpus", l_corpus}, {"lexicon", l_lexicon}},
                     {{"lm", l_out}}, seed);
      std::cout << "built " << l_out << " (" << lm.table[0].size()
                << " unigrams)\n";
    } else if (*correct) {
      const std::uint64_t seed = resolve_seed(c_seed);
      qalam::TrainedSystem system = qalam::load_system(c_model);
      qalam::PipelineConfig config = system.config;
      config.seed = seed;
      if (!c_stages.empty()) qalam::apply_stage_string(config, c_stages);
      const auto corpus = read_input_corpus(c_in, system.lexicon, c_format);

      std::ofstream out(c_out);
      if (!out) throw std::runtime_error("cannot write output: " + c_out);
      std::vector<qalam::GoldAnnotation> proposals;
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        const qalam::SentenceResult result =
            qalam::correct_sentence(corpus[i], system, config);
        for (std::size_t t = 0; t < result.tokens.size(); ++t) {
          if (t) out << ' ';
          out << result.tokens[t];
        }
        out << '\n';
        qalam::GoldAnnotation ann;
        ann.id = i;
        ann.tokens = qalam::surfaces_of(corpus[i]);
        ann.corrections = result.corrections;
        proposals.push_back(std::move(ann));
      }
      out.close();
      std::vector<std::pair<std::string, std::string>> outputs = {
          {"corrected", c_out}};
      if (!c_proposals.empty()) {
        qalam::write_gold(proposals, c_proposals);
        outputs.emplace_back("proposals", c_proposals);
      }
      write_manifest(
          fs::path(c_out).parent_path().string(), "correct",
          config_json(config),
          {{"model", (fs::path(c_model) / "manifest-train.json").string()},
           {"in", c_in}},
          outputs, seed);
      std::cout << "corrected " << corpus.size() << " sentences -> " << c_out
                << "\n";
    } else if (*eval) {
      const auto proposal_file = qalam::read_gold(e_proposals);
      const auto gold = qalam::read_gold(e_gold);
      qalam::ProposalSet proposals;
      for (const qalam::GoldAnnotation& g : proposal_file)
        proposals.emplace_back(g.id, g.corrections);
      const qalam::ScoreReport report = qalam::score(proposals, gold);
      char line[160];
      std::snprintf(line, sizeof line,
                    "P=%.4f R=%.4f F1=%.4f matched=%llu proposed=%llu gold=%llu",
                    report.precision(), report.recall(), report.f1(),
                    static_cast<unsigned long long>(report.matched),
                    static_cast<unsigned long long>(report.proposed),
                    static_cast<unsigned long long>(report.gold));
      std::cout << line << "\n";
      if (!e_report.empty()) {
        json j;
        j["precision"] = report.precision();
        j["recall"] = report.recall();
        j["f1"] = report.f1();
        j["matched"] = report.matched;
        j["proposed"] = report.proposed;
        j["gold"] = report.gold;
        std::ofstream f(e_report);
        f << j.dump(2) << '\n';
        write_manifest(fs::path(e_report).parent_path().string(), "evaluate",
                       json::object(),
                       {{"proposals", e_proposals}, {"gold", e_gold}},
                       {{"report", e_report}}, 0);
      }
    } else if (*inject) {
      const std::uint64_t seed = resolve_seed(i_seed);
      const qalam::Lexicon lexicon = qalam::load_lexicon(i_lexicon, i_stoplist);
      const auto clean = read_plain_sentences(i_in);
      qalam::InjectionRates rates;
      rates.edit = i_edit;
      rates.add_before = i_add;
      rates.merge = i_merge;
      rates.split = i_split;
      const qalam::InjectionResult result = qalam::inject_errors(
          clean, rates, seed, lexicon, qalam::buckwalter_letters());
      std::vector<qalam::Sentence> noisy_records;
      for (const auto& sent : result.noisy)
        noisy_records.push_back(qalam::make_records(sent, lexicon));
      qalam::write_column_corpus(noisy_records, i_noisy);
      qalam::write_gold(result.gold, i_gold);
      write_manifest(
          fs::path(i_noisy).parent_path().string(), "inject",
          json{{"edit", i_edit},
               {"add_before", i_add},
               {"merge", i_merge},
               {"split", i_split}},
          {{"in", i_in}, {"lexicon", i_lexicon}},
          {{"noisy", i_noisy}, {"gold", i_gold}}, seed);
      std::cout << "injected " << result.injected_edit << " edit, "
                << result.injected_add_before << " add-before, "
                << result.injected_merge << " merge, " << result.injected_split
                << " split errors\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
