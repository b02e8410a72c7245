#include "qalam/noisy_channel.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qalam {

namespace {

constexpr unsigned kInf = std::numeric_limits<unsigned>::max() / 2;

inline unsigned char uc(char c) { return static_cast<unsigned char>(c); }

std::vector<std::vector<unsigned>> dl_matrix(std::string_view x,
                                             std::string_view w) {
  const std::size_t n = x.size(), m = w.size();
  std::vector<std::vector<unsigned>> d(n + 1, std::vector<unsigned>(m + 1, 0));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = static_cast<unsigned>(i);
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = static_cast<unsigned>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      unsigned best = d[i - 1][j - 1] + (x[i - 1] != w[j - 1] ? 1 : 0);
      best = std::min(best, d[i - 1][j] + 1);  // insert x[i-1]
      best = std::min(best, d[i][j - 1] + 1);  // delete w[j-1]
      if (i >= 2 && j >= 2 && x[i - 1] == w[j - 2] && x[i - 2] == w[j - 1])
        best = std::min(best, d[i - 2][j - 2] + 1);
      d[i][j] = best;
    }
  }
  return d;
}

}  // namespace

unsigned edit_distance(std::string_view a, std::string_view b) {
  return dl_matrix(a, b)[a.size()][b.size()];
}

std::optional<unsigned> bounded_distance(std::string_view a, std::string_view b,
                                         unsigned max_d) {
  const std::size_t n = a.size(), m = b.size();
  const std::size_t diff = n > m ? n - m : m - n;
  if (diff > max_d) return std::nullopt;
  if (n == 0) return static_cast<unsigned>(m);
  if (m == 0) return static_cast<unsigned>(n);

  // three rolling rows, band half-width max_d around the diagonal
  const std::size_t width = m + 1;
  std::vector<unsigned> prev2(width, kInf), prev(width, kInf), cur(width, kInf);
  for (std::size_t j = 0; j <= std::min<std::size_t>(m, max_d); ++j)
    prev[j] = static_cast<unsigned>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    std::fill(cur.begin(), cur.end(), kInf);
    const std::size_t lo = i > max_d ? i - max_d : 0;
    const std::size_t hi = std::min(m, i + max_d);
    unsigned row_min = kInf;
    for (std::size_t j = lo; j <= hi; ++j) {
      unsigned best;
      if (j == 0) {
        best = static_cast<unsigned>(i);
      } else {
        best = prev[j - 1] + (a[i - 1] != b[j - 1] ? 1 : 0);
        if (prev[j] != kInf) best = std::min(best, prev[j] + 1);
        if (cur[j - 1] != kInf) best = std::min(best, cur[j - 1] + 1);
        if (i >= 2 && j >= 2 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1] &&
            prev2[j - 2] != kInf)
          best = std::min(best, prev2[j - 2] + 1);
      }
      cur[j] = best;
      row_min = std::min(row_min, best);
    }
    if (row_min > max_d) return std::nullopt;
    std::swap(prev2, prev);
    std::swap(prev, cur);
  }
  const unsigned d = prev[m];
  if (d > max_d) return std::nullopt;
  return d;
}

std::optional<std::vector<EditOp>> align_edits(std::string_view wrong,
                                               std::string_view correct,
                                               unsigned max_d) {
  const auto d = dl_matrix(wrong, correct);
  const std::size_t n = wrong.size(), m = correct.size();
  if (d[n][m] > max_d) return std::nullopt;

  std::vector<EditOp> ops;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    // fixed transition priority keeps the alignment deterministic:
    // match, substitute, transpose, delete, insert
    if (i > 0 && j > 0 && wrong[i - 1] == correct[j - 1] &&
        d[i][j] == d[i - 1][j - 1]) {
      --i;
      --j;
      continue;
    }
    if (i > 0 && j > 0 && d[i][j] == d[i - 1][j - 1] + 1 &&
        wrong[i - 1] != correct[j - 1]) {
      EditOp op;
      op.kind = EditKind::Substitute;
      op.position = i - 1;
      op.a = correct[j - 1];
      op.b = wrong[i - 1];
      op.prev = j >= 2 ? correct[j - 2] : kWordStart;
      ops.push_back(op);
      --i;
      --j;
      continue;
    }
    if (i >= 2 && j >= 2 && wrong[i - 1] == correct[j - 2] &&
        wrong[i - 2] == correct[j - 1] && d[i][j] == d[i - 2][j - 2] + 1) {
      EditOp op;
      op.kind = EditKind::Transpose;
      op.position = i - 2;
      op.a = correct[j - 2];
      op.b = correct[j - 1];
      op.prev = j >= 3 ? correct[j - 3] : kWordStart;
      ops.push_back(op);
      i -= 2;
      j -= 2;
      continue;
    }
    if (j > 0 && d[i][j] == d[i][j - 1] + 1) {
      EditOp op;
      op.kind = EditKind::Delete;
      op.position = i;
      op.a = correct[j - 1];
      op.prev = j >= 2 ? correct[j - 2] : kWordStart;
      ops.push_back(op);
      --j;
      continue;
    }
    if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
      EditOp op;
      op.kind = EditKind::Insert;
      op.position = i - 1;
      op.a = wrong[i - 1];
      op.prev = j >= 1 ? correct[j - 1] : kWordStart;
      ops.push_back(op);
      --i;
      continue;
    }
    throw std::logic_error("align_edits: inconsistent DP matrix");
  }
  std::reverse(ops.begin(), ops.end());
  return ops;
}

std::string apply_edits(std::string_view correct,
                        const std::vector<EditOp>& ops) {
  std::string out;
  std::size_t j = 0;
  for (const EditOp& op : ops) {
    while (out.size() < op.position && j < correct.size())
      out.push_back(correct[j++]);
    switch (op.kind) {
      case EditKind::Insert:
        out.push_back(op.a);
        break;
      case EditKind::Delete:
        ++j;
        break;
      case EditKind::Substitute:
        out.push_back(op.b);
        ++j;
        break;
      case EditKind::Transpose:
        out.push_back(op.b);
        out.push_back(op.a);
        j += 2;
        break;
    }
  }
  out.append(correct.substr(j));
  return out;
}

std::string ConfusionMatrix::default_alphabet() {
  return buckwalter_letters() + kWordStart;
}

ConfusionMatrix::ConfusionMatrix(std::string alphabet)
    : alphabet_(std::move(alphabet)), tables_(5) {
  for (Table& t : tables_)
    for (auto& row : t) row.fill(0);
}

bool ConfusionMatrix::add_pair(std::string_view wrong, std::string_view correct) {
  auto ops = align_edits(wrong, correct, 2);
  if (!ops) {
    ++skipped_;
    return false;
  }
  for (const EditOp& op : *ops) {
    switch (op.kind) {
      case EditKind::Substitute:
        ++tables_[0][uc(op.a)][uc(op.b)];
        break;
      case EditKind::Insert:
        ++tables_[1][uc(op.prev)][uc(op.a)];
        break;
      case EditKind::Delete:
        ++tables_[2][uc(op.prev)][uc(op.a)];
        break;
      case EditKind::Transpose:
        ++tables_[3][uc(op.a)][uc(op.b)];
        break;
    }
  }
  char prev = kWordStart;
  ++bg1_[uc(prev)];
  for (char c : correct) {
    ++bg1_[uc(c)];
    ++tables_[4][uc(prev)][uc(c)];
    prev = c;
  }
  return true;
}

double ConfusionMatrix::op_prob(const EditOp& op) const {
  const double A = static_cast<double>(alphabet_.size());
  switch (op.kind) {
    case EditKind::Substitute:
      return (tables_[0][uc(op.a)][uc(op.b)] + 1.0) / (bg1_[uc(op.a)] + A);
    case EditKind::Insert:
      return (tables_[1][uc(op.prev)][uc(op.a)] + 1.0) / (bg1_[uc(op.prev)] + A);
    case EditKind::Delete:
      return (tables_[2][uc(op.prev)][uc(op.a)] + 1.0) /
             (tables_[4][uc(op.prev)][uc(op.a)] + A);
    case EditKind::Transpose:
      return (tables_[3][uc(op.a)][uc(op.b)] + 1.0) /
             (tables_[4][uc(op.a)][uc(op.b)] + A);
  }
  return 0;  // unreachable
}

std::uint64_t ConfusionMatrix::sub_count(char a, char b) const {
  return tables_[0][uc(a)][uc(b)];
}
std::uint64_t ConfusionMatrix::ins_count(char prev, char c) const {
  return tables_[1][uc(prev)][uc(c)];
}
std::uint64_t ConfusionMatrix::del_count(char prev, char c) const {
  return tables_[2][uc(prev)][uc(c)];
}
std::uint64_t ConfusionMatrix::trans_count(char a, char b) const {
  return tables_[3][uc(a)][uc(b)];
}
std::uint64_t ConfusionMatrix::bg1(char c) const { return bg1_[uc(c)]; }
std::uint64_t ConfusionMatrix::bg2(char a, char b) const {
  return tables_[4][uc(a)][uc(b)];
}

namespace {

std::string esc_char(char c) {
  unsigned char b = static_cast<unsigned char>(c);
  if (b > 0x20 && b < 0x7F && b != '\\') return std::string(1, c);
  char buf[8];
  std::snprintf(buf, sizeof buf, "\\x%02X", b);
  return buf;
}

// consumes one (possibly escaped) character from s at pos
char unesc_char(const std::string& s, std::size_t& pos) {
  if (s[pos] == '\\' && pos + 3 < s.size() && s[pos + 1] == 'x') {
    char c = static_cast<char>(std::stoul(s.substr(pos + 2, 2), nullptr, 16));
    pos += 4;
    return c;
  }
  return s[pos++];
}

}  // namespace

void ConfusionMatrix::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write confusion matrix: " + path);
  out << "#ALPHABET\n";
  for (char c : alphabet_) out << esc_char(c);
  out << '\n';
  static const char* names[] = {"#SUB", "#INS", "#DEL", "#TRANS"};
  for (int t = 0; t < 4; ++t) {
    out << names[t] << '\n';
    for (int a = 0; a < 256; ++a)
      for (int b = 0; b < 256; ++b)
        if (tables_[t][a][b])
          out << esc_char(static_cast<char>(a)) << esc_char(static_cast<char>(b))
              << '\t' << tables_[t][a][b] << '\n';
  }
  out << "#BG\n";
  for (int a = 0; a < 256; ++a)
    if (bg1_[a]) out << esc_char(static_cast<char>(a)) << '\t' << bg1_[a] << '\n';
  for (int a = 0; a < 256; ++a)
    for (int b = 0; b < 256; ++b)
      if (tables_[4][a][b])
        out << esc_char(static_cast<char>(a)) << esc_char(static_cast<char>(b))
            << '\t' << tables_[4][a][b] << '\n';
}

ConfusionMatrix ConfusionMatrix::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open confusion matrix: " + path);
  ConfusionMatrix cm(std::string{});
  std::string line;
  int section = -1;  // 0..3 tables, 4 bg, 5 alphabet
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line == "#ALPHABET") { section = 5; continue; }
    if (line == "#SUB") { section = 0; continue; }
    if (line == "#INS") { section = 1; continue; }
    if (line == "#DEL") { section = 2; continue; }
    if (line == "#TRANS") { section = 3; continue; }
    if (line == "#BG") { section = 4; continue; }
    if (section == 5) {
      std::size_t pos = 0;
      while (pos < line.size()) cm.alphabet_.push_back(unesc_char(line, pos));
      continue;
    }
    auto tab = line.find('\t');
    if (section < 0 || tab == std::string::npos) {
      std::ostringstream msg;
      msg << path << ":" << line_no << ": malformed confusion matrix row";
      throw std::runtime_error(msg.str());
    }
    const std::string chars = line.substr(0, tab);
    const std::uint64_t count = std::stoull(line.substr(tab + 1));
    std::size_t pos = 0;
    char first = unesc_char(chars, pos);
    if (pos >= chars.size()) {
      if (section != 4) {
        std::ostringstream msg;
        msg << path << ":" << line_no << ": expected a character pair";
        throw std::runtime_error(msg.str());
      }
      cm.bg1_[uc(first)] = count;
      continue;
    }
    char second = unesc_char(chars, pos);
    cm.tables_[section][uc(first)][uc(second)] = count;
  }
  if (cm.alphabet_.empty()) cm.alphabet_ = default_alphabet();
  return cm;
}

ConfusionMatrix train_confusion(
    const std::vector<std::pair<std::string, std::string>>& pairs,
    std::string alphabet) {
  ConfusionMatrix cm(std::move(alphabet));
  for (const auto& [wrong, correct] : pairs) cm.add_pair(wrong, correct);
  return cm;
}

double channel_prob(const ConfusionMatrix& cm, std::string_view x,
                    std::string_view w) {
  if (x == w) return 1.0;
  auto ops = align_edits(x, w, 2);
  if (!ops)
    throw std::invalid_argument("channel_prob: pair beyond two edit operations");
  double p = 1.0;
  for (const EditOp& op : *ops) p *= cm.op_prob(op);
  return p;
}

bool same_letter_group(char a, char b) {
  static const std::vector<std::string> groups = {
      "|<>A", "ynvtb", "xHj", "*d", "zr", "$s", "DS",
      "ZT",   "gE",    "qf",  "ph", "&w", "Yy"};
  if (a == b) return false;
  for (const std::string& g : groups)
    if (g.find(a) != std::string::npos && g.find(b) != std::string::npos)
      return true;
  return false;
}

bool keyboard_adjacent(char a, char b) {
  // standard Arabic 101 layout in Buckwalter; space marks the lam-alef key
  static const std::array<std::string, 3> rows = {"DSvqfgEhxHjd",
                                                  "$syblAtnmkT",
                                                  "}'&r YpwzZ"};
  if (a == b) return false;
  int ra = -1, ca = -1, rb = -1, cb = -1;
  for (int r = 0; r < 3; ++r) {
    auto pa = rows[r].find(a);
    if (pa != std::string::npos && a != ' ') {
      ra = r;
      ca = static_cast<int>(pa);
    }
    auto pb = rows[r].find(b);
    if (pb != std::string::npos && b != ' ') {
      rb = r;
      cb = static_cast<int>(pb);
    }
  }
  if (ra < 0 || rb < 0) return false;
  if (ra == rb) return std::abs(ca - cb) == 1;
  if (std::abs(ra - rb) == 1) return std::abs(ca - cb) <= 1;
  return false;
}

double substitution_boost(char intended, char typed, double k) {
  return (same_letter_group(intended, typed) || keyboard_adjacent(intended, typed))
             ? k
             : 1.0;
}

double channel_likelihood(const ConfusionMatrix& cm, std::string_view x,
                          std::string_view w, double boost_k) {
  if (x == w) return 1.0;
  auto ops = align_edits(x, w, 2);
  if (!ops)
    throw std::invalid_argument(
        "channel_likelihood: pair beyond two edit operations");
  double p = 1.0;
  for (const EditOp& op : *ops) {
    p *= cm.op_prob(op);
    if (op.kind == EditKind::Substitute)
      p *= substitution_boost(op.a, op.b, boost_k);
  }
  return p;
}

std::vector<Candidate> generate_candidates(std::string_view word,
                                           const Lexicon& lexicon,
                                           unsigned max_distance,
                                           std::size_t cap) {
  std::vector<Candidate> out;
  const std::size_t len = word.size();
  const std::size_t lo = len > max_distance ? len - max_distance : 1;
  const std::size_t hi =
      std::min(len + max_distance, lexicon.max_surface_length());
  for (std::size_t l = lo; l <= hi; ++l) {
    for (const std::string& w : lexicon.surfaces_of_length(l)) {
      if (auto d = bounded_distance(word, w, max_distance)) {
        Candidate c;
        c.surface = w;
        c.distance = *d;
        c.features = *lexicon.lookup(w);
        out.push_back(std::move(c));
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    return a.distance != b.distance ? a.distance < b.distance
                                    : a.surface < b.surface;
  });
  if (cap > 0 && out.size() > cap) out.resize(cap);
  return out;
}

double noisy_channel_score(const ConfusionMatrix& cm, const LanguageModel& lm,
                           std::string_view x, std::string_view w,
                           std::string_view prev2, std::string_view prev1,
                           double boost_k) {
  return channel_likelihood(cm, x, w, boost_k) *
         mixture_prob(lm, w, prev2, prev1);
}

}  // namespace qalam
