#include "qalam/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qalam {

std::string NBModel::discretize(const std::string& feature,
                                const FeatureValue& v) const {
  if (std::holds_alternative<double>(v)) {
    auto it = bins.find(feature);
    if (it == bins.end())
      throw std::invalid_argument("numeric value for categorical feature: " +
                                  feature);
    const std::vector<double>& b = it->second;
    auto pos = std::upper_bound(b.begin(), b.end(), std::get<double>(v));
    return std::to_string(pos - b.begin());
  }
  return std::get<std::string>(v);
}

NBModel nb_train(const std::vector<std::pair<FeatureVector, std::string>>& examples,
                 int num_bins) {
  if (examples.empty()) throw std::runtime_error("nb_train: no examples");

  // establish the schema and collect numeric values for binning
  std::map<std::string, std::vector<double>> numeric_values;
  std::map<std::string, bool> numeric;
  for (const auto& [fv, label] : examples) {
    for (const auto& [name, value] : fv) {
      const bool is_num = std::holds_alternative<double>(value);
      auto it = numeric.find(name);
      if (it == numeric.end())
        numeric[name] = is_num;
      else if (it->second != is_num)
        throw std::runtime_error("nb_train: feature typed inconsistently: " +
                                 name);
      if (is_num) numeric_values[name].push_back(std::get<double>(value));
    }
  }

  NBModel model;
  for (auto& [name, values] : numeric_values) {
    std::sort(values.begin(), values.end());
    std::vector<double> boundaries;
    const std::size_t n = values.size();
    for (int q = 1; q < num_bins; ++q) {
      const std::size_t idx = q * n / num_bins;
      if (idx == 0 || idx >= n) continue;
      const double b = values[idx];
      if (boundaries.empty() || boundaries.back() < b) boundaries.push_back(b);
    }
    model.bins[name] = std::move(boundaries);
  }

  for (const auto& [fv, label] : examples) {
    ++model.label_counts[label];
    ++model.total;
    for (const auto& [name, value] : fv)
      ++model.counts[name][model.discretize(name, value)][label];
  }
  return model;
}

std::map<std::string, double> nb_posteriors(const NBModel& model,
                                            const FeatureVector& fv) {
  if (model.label_counts.empty())
    throw std::runtime_error("nb_posteriors: empty model");
  std::map<std::string, double> log_scores;
  for (const auto& [label, count] : model.label_counts) {
    double score = std::log(static_cast<double>(count)) -
                   std::log(static_cast<double>(model.total));
    for (const auto& [name, value] : fv) {
      auto fit = model.counts.find(name);
      if (fit == model.counts.end()) continue;  // feature unseen in training
      const std::string v = model.discretize(name, value);
      const double distinct = static_cast<double>(fit->second.size());
      std::uint64_t c = 0;
      auto vit = fit->second.find(v);
      if (vit != fit->second.end()) {
        auto lit = vit->second.find(label);
        if (lit != vit->second.end()) c = lit->second;
      }
      score += std::log((static_cast<double>(c) + 1.0) /
                        (static_cast<double>(count) + distinct));
    }
    log_scores[label] = score;
  }

  double max_score = log_scores.begin()->second;
  for (const auto& [label, s] : log_scores) max_score = std::max(max_score, s);
  double z = 0;
  for (const auto& [label, s] : log_scores) z += std::exp(s - max_score);
  std::map<std::string, double> out;
  for (const auto& [label, s] : log_scores)
    out[label] = std::exp(s - max_score) / z;
  return out;
}

NBResult nb_classify(const NBModel& model, const FeatureVector& fv) {
  const auto posteriors = nb_posteriors(model, fv);
  NBResult best;
  bool first = true;
  for (const auto& [label, p] : posteriors) {
    // map order is lexicographic, so strictly-greater keeps the smallest
    // label on ties
    if (first || p > best.posterior) {
      best.label = label;
      best.posterior = p;
      first = false;
    }
  }
  return best;
}

void save_nb_model(const NBModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write NB model: " + path);
  char buf[40];
  out << "#PRIORS\n";
  for (const auto& [label, count] : model.label_counts)
    out << label << '\t' << count << '\n';
  out << "#BINS\n";
  for (const auto& [name, boundaries] : model.bins) {
    out << name << '\t';
    for (std::size_t i = 0; i < boundaries.size(); ++i) {
      if (i) out << ',';
      std::snprintf(buf, sizeof buf, "%.17g", boundaries[i]);
      out << buf;
    }
    out << '\n';
  }
  out << "#COUNTS\n";
  for (const auto& [name, values] : model.counts)
    for (const auto& [value, labels] : values)
      for (const auto& [label, count] : labels)
        out << name << '\t' << value << '\t' << label << '\t' << count << '\n';
}

NBModel load_nb_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open NB model: " + path);
  NBModel model;
  std::string line;
  std::size_t line_no = 0;
  enum { none, priors, bins, counts } section = none;
  auto split = [](const std::string& s) {
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      auto tab = s.find('\t', start);
      if (tab == std::string::npos) {
        cols.push_back(s.substr(start));
        break;
      }
      cols.push_back(s.substr(start, tab - start));
      start = tab + 1;
    }
    return cols;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line == "#PRIORS") { section = priors; continue; }
    if (line == "#BINS") { section = bins; continue; }
    if (line == "#COUNTS") { section = counts; continue; }
    auto cols = split(line);
    auto fail = [&](const char* what) {
      std::ostringstream msg;
      msg << path << ":" << line_no << ": " << what;
      throw std::runtime_error(msg.str());
    };
    switch (section) {
      case priors: {
        if (cols.size() != 2) fail("expected label<TAB>count");
        const std::uint64_t count = std::stoull(cols[1]);
        model.label_counts[cols[0]] = count;
        model.total += count;
        break;
      }
      case bins: {
        if (cols.size() != 2) fail("expected feature<TAB>boundaries");
        std::vector<double> boundaries;
        std::stringstream ss(cols[1]);
        std::string item;
        while (std::getline(ss, item, ','))
          if (!item.empty()) boundaries.push_back(std::stod(item));
        model.bins[cols[0]] = std::move(boundaries);
        break;
      }
      case counts: {
        if (cols.size() != 4) fail("expected feature<TAB>value<TAB>label<TAB>count");
        model.counts[cols[0]][cols[1]][cols[2]] = std::stoull(cols[3]);
        break;
      }
      default:
        fail("row outside any section");
    }
  }
  return model;
}

}  // namespace qalam
