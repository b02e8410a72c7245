#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qalam {

using FeatureValue = std::variant<double, std::string>;
/// Ordered map so feature iteration (and therefore log-sum order) is fixed.
using FeatureVector = std::map<std::string, FeatureValue>;

/// Multinomial Naive Bayes with add-1 smoothing at query time. Numeric
/// features are discretized into quantile bins computed at training time.
struct NBModel {
  std::map<std::string, std::uint64_t> label_counts;
  std::uint64_t total = 0;
  /// Sorted bin boundaries per numeric feature; bin(v) = #{b : b <= v}.
  std::map<std::string, std::vector<double>> bins;
  /// feature -> discretized value -> label -> count
  std::map<std::string, std::map<std::string, std::map<std::string, std::uint64_t>>>
      counts;

  bool is_numeric(std::string_view feature) const {
    return bins.count(std::string(feature)) > 0;
  }
  std::string discretize(const std::string& feature, const FeatureValue& v) const;
};

/// Trains from (features, label) examples. 10 quantile bins by default.
/// Throws on an empty set or a feature typed inconsistently across
/// examples. A single distinct label yields a valid always-predict model.
NBModel nb_train(const std::vector<std::pair<FeatureVector, std::string>>& examples,
                 int num_bins = 10);

/// Posterior distribution over labels; sums to 1.
std::map<std::string, double> nb_posteriors(const NBModel& model,
                                            const FeatureVector& fv);

struct NBResult {
  std::string label;
  double posterior = 0;
};

/// Argmax label; ties break to the lexicographically smallest label.
NBResult nb_classify(const NBModel& model, const FeatureVector& fv);

/// Sectioned TSV (#PRIORS, #BINS, #COUNTS), deterministic ordering.
void save_nb_model(const NBModel& model, const std::string& path);
NBModel load_nb_model(const std::string& path);

}  // namespace qalam
