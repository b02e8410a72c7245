#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qalam/lexicon.hpp"
#include "qalam/ngram_lm.hpp"

namespace qalam {

enum class EditKind { Insert, Delete, Substitute, Transpose };

/// Marker standing in for "before the first character" when an edit is
/// conditioned on the preceding character.
inline constexpr char kWordStart = '^';

/// One aligned edit transforming the intended word into the typed word.
///  Insert:     a = inserted char, prev = preceding intended char
///  Delete:     a = deleted char,  prev = preceding intended char
///  Substitute: a = intended char, b = typed char
///  Transpose:  (a, b) = intended pair typed in swapped order
struct EditOp {
  EditKind kind;
  std::size_t position = 0;  // index into the typed (wrong) word
  char prev = kWordStart;
  char a = 0;
  char b = 0;
};

/// Unit-cost Damerau-Levenshtein distance (adjacent transposition = 1).
unsigned edit_distance(std::string_view a, std::string_view b);

/// Banded variant: distance if it is <= max_d, otherwise nullopt.
std::optional<unsigned> bounded_distance(std::string_view a, std::string_view b,
                                         unsigned max_d);

/// Minimal edit script turning `correct` into `wrong`; nullopt when the
/// pair is farther than max_d apart (training pairs beyond the radius are
/// skipped). |ops| equals the edit distance.
std::optional<std::vector<EditOp>> align_edits(std::string_view wrong,
                                               std::string_view correct,
                                               unsigned max_d = 2);

/// Replays an edit script against the intended word (test oracle hook).
std::string apply_edits(std::string_view correct,
                        const std::vector<EditOp>& ops);

/// Per-operation character edit counts plus background character counts
/// from the correct sides of the training pairs. Probabilities use add-1
/// smoothing over a configurable alphabet size.
class ConfusionMatrix {
 public:
  /// The Buckwalter letters plus the word-start marker.
  static std::string default_alphabet();

  explicit ConfusionMatrix(std::string alphabet = default_alphabet());

  /// Aligns and counts one training pair; returns false (and counts a
  /// skip) when the pair is beyond two edit operations.
  bool add_pair(std::string_view wrong, std::string_view correct);

  /// Smoothed probability of a single edit operation:
  ///   substitute a->b : (sub[a][b] + 1) / (bg1[a] + |A|)
  ///   insert c after p: (ins[p][c] + 1) / (bg1[p] + |A|)
  ///   delete c after p: (del[p][c] + 1) / (bg2[p][c] + |A|)
  ///   transpose (a,b) : (trans[a][b] + 1) / (bg2[a][b] + |A|)
  double op_prob(const EditOp& op) const;

  std::uint64_t sub_count(char intended, char typed) const;
  std::uint64_t ins_count(char prev, char inserted) const;
  std::uint64_t del_count(char prev, char deleted) const;
  std::uint64_t trans_count(char first, char second) const;
  std::uint64_t bg1(char c) const;
  std::uint64_t bg2(char first, char second) const;

  const std::string& alphabet() const { return alphabet_; }
  std::size_t alphabet_size() const { return alphabet_.size(); }
  std::size_t skipped_pairs() const { return skipped_; }

  /// Sectioned TSV (#ALPHABET/#SUB/#INS/#DEL/#TRANS/#BG), deterministic
  /// row order.
  void save(const std::string& path) const;
  static ConfusionMatrix load(const std::string& path);

 private:
  using Table = std::array<std::array<std::uint64_t, 256>, 256>;
  std::string alphabet_;
  std::vector<Table> tables_;  // sub, ins, del, trans, bg2
  std::array<std::uint64_t, 256> bg1_{};
  std::size_t skipped_ = 0;
};

ConfusionMatrix train_confusion(
    const std::vector<std::pair<std::string, std::string>>& pairs,
    std::string alphabet = ConfusionMatrix::default_alphabet());

/// Channel probability p(x|w): product of per-op probabilities over the
/// alignment; 1 when x == w. Throws std::invalid_argument beyond two edits.
double channel_prob(const ConfusionMatrix& cm, std::string_view x,
                    std::string_view w);

/// True when the two letters share one of the letter groups
/// (|,<,>,A) (y,n,v,t,b) (x,H,j) (*,d) (z,r) ($,s) (D,S) (Z,T) (g,E)
/// (q,f) (p,h) (&,w) (Y,y).
bool same_letter_group(char a, char b);

/// True when the letters sit on adjacent keys of the standard Arabic
/// keyboard layout.
bool keyboard_adjacent(char a, char b);

/// k when the pair shares a letter group or sits on adjacent keys, else 1.
double substitution_boost(char intended, char typed, double k = 1.5);

/// channel_prob times the substitution boost of every substitute op in
/// the alignment.
double channel_likelihood(const ConfusionMatrix& cm, std::string_view x,
                          std::string_view w, double boost_k = 1.5);

/// A dictionary word within edit distance <= 2 of the query.
struct Candidate {
  std::string surface;
  unsigned distance = 0;
  WordFeatures features;
  double channel_score = 0;
};

/// Exactly { w in lexicon : d(x, w) <= max_distance }, ordered by
/// (distance, surface). cap > 0 truncates deterministically after that
/// ordering; cap == 0 disables truncation.
std::vector<Candidate> generate_candidates(std::string_view word,
                                           const Lexicon& lexicon,
                                           unsigned max_distance,
                                           std::size_t cap = 5000);

/// Score = p(x|w) * p(w), with p(w) the equal-weight unigram/bigram/
/// trigram mixture and the substitution boost applied on top.
double noisy_channel_score(const ConfusionMatrix& cm, const LanguageModel& lm,
                           std::string_view x, std::string_view w,
                           std::string_view prev2, std::string_view prev1,
                           double boost_k = 1.5);

}  // namespace qalam
