#pragma once

// Direct-formula implementation of interpolated modified Kneser-Ney used
// as an independent oracle for the language model. It recounts the corpus
// itself and evaluates the published equations per query, sharing no code
// with the engine. The discount policy must match the engine's documented
// policy: fixed 0.5 discounts when n1 or n2 is zero at an order, otherwise
// the Chen-Goodman closed forms clamped to [1e-4, i].

#include <map>
#include <set>
#include <string>
#include <vector>

namespace qalam::testsupport {

class MknOracle {
 public:
  MknOracle(const std::vector<std::vector<std::string>>& corpus,
            const std::set<std::string>& vocabulary);

  // p(word | context), context = up to two preceding tokens, earlier first
  double prob(const std::string& word,
              const std::vector<std::string>& context) const;

  const std::vector<std::string>& prediction_vocabulary() const {
    return vocab_pred_;
  }

 private:
  using Gram = std::vector<std::string>;
  std::map<Gram, unsigned long long> tri_, bi_, uni_;      // raw counts
  std::map<Gram, unsigned long long> bi_mod_, uni_mod_;    // continuation
  double d3_[3], d2_[3], d1_[3];
  std::set<std::string> vocab_;
  std::vector<std::string> vocab_pred_;

  std::string map_word(const std::string& w) const;
  double p1(const std::string& w) const;
  double p2(const std::string& v, const std::string& w) const;
  double p3(const std::string& u, const std::string& v,
            const std::string& w) const;
};

}  // namespace qalam::testsupport
