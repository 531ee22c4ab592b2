#include "pmorph/braid.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace pmorph {

bool operator==(const BraidWord& a, const BraidWord& b) {
  return a.strands == b.strands && a.letters == b.letters;
}

void validate(const BraidWord& w) {
  if (w.strands < 1) throw ParseError("braid word: strand count must be positive");
  for (const BraidLetter& l : w.letters) {
    if (l.index < 1 || l.index >= w.strands) {
      throw ParseError("braid word: generator index " + std::to_string(l.index) +
                       " out of range for " + std::to_string(w.strands) + " strands");
    }
    if (l.sign != 1 && l.sign != -1) throw ParseError("braid word: sign must be +-1");
  }
}

BraidWord braid_compose(const BraidWord& g, const BraidWord& f) {
  if (g.strands != f.strands) {
    throw StrandMismatchError("braid_compose: strand counts differ (" +
                              std::to_string(g.strands) + " vs " + std::to_string(f.strands) +
                              ")");
  }
  BraidWord out;
  out.strands = f.strands;
  out.letters = f.letters;
  out.letters.insert(out.letters.end(), g.letters.begin(), g.letters.end());
  return out;
}

BraidWord braid_inverse(const BraidWord& w) {
  BraidWord out;
  out.strands = w.strands;
  out.letters.reserve(w.letters.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
    out.letters.push_back({it->index, -it->sign});
  }
  return out;
}

BraidWord free_reduce(BraidWord w) {
  std::vector<BraidLetter> stack;
  stack.reserve(w.letters.size());
  for (const BraidLetter& l : w.letters) {
    if (!stack.empty() && stack.back().index == l.index && stack.back().sign == -l.sign) {
      stack.pop_back();
    } else {
      stack.push_back(l);
    }
  }
  w.letters = std::move(stack);
  return w;
}

std::vector<int> permutation(const BraidWord& w) {
  // slot_of[s] = current slot of the strand that started in slot s.
  std::vector<int> strand_at(w.strands);  // strand currently in each slot
  std::iota(strand_at.begin(), strand_at.end(), 0);
  for (const BraidLetter& l : w.letters) {
    std::swap(strand_at[l.index - 1], strand_at[l.index]);
  }
  std::vector<int> perm(w.strands);
  for (int slot = 0; slot < w.strands; ++slot) perm[strand_at[slot]] = slot;
  return perm;
}

bool is_pure(const BraidWord& w) {
  std::vector<int> p = permutation(w);
  for (int i = 0; i < w.strands; ++i) {
    if (p[i] != i) return false;
  }
  return true;
}

int exponent_sum(const BraidWord& w) {
  int s = 0;
  for (const BraidLetter& l : w.letters) s += l.sign;
  return s;
}

int crossing_sum(const BraidWord& w, int a, int b) {
  int total = 0;
  std::vector<int> strand_at(w.strands);
  std::iota(strand_at.begin(), strand_at.end(), 0);
  for (const BraidLetter& l : w.letters) {
    int u = strand_at[l.index - 1], v = strand_at[l.index];
    if ((u == a && v == b) || (u == b && v == a)) total += l.sign;
    std::swap(strand_at[l.index - 1], strand_at[l.index]);
  }
  return total;
}

double linking_number(const BraidWord& w, int a, int b) {
  return 0.5 * crossing_sum(w, a, b);
}

std::vector<std::vector<int>> crossing_sum_matrix(const BraidWord& w) {
  std::vector<std::vector<int>> m(w.strands, std::vector<int>(w.strands, 0));
  std::vector<int> strand_at(w.strands);
  std::iota(strand_at.begin(), strand_at.end(), 0);
  for (const BraidLetter& l : w.letters) {
    int u = strand_at[l.index - 1], v = strand_at[l.index];
    m[u][v] += l.sign;
    m[v][u] += l.sign;
    std::swap(strand_at[l.index - 1], strand_at[l.index]);
  }
  return m;
}

std::string to_text(const BraidWord& w) {
  std::ostringstream os;
  std::size_t i = 0;
  bool first = true;
  while (i < w.letters.size()) {
    std::size_t j = i;
    while (j < w.letters.size() && w.letters[j] == w.letters[i]) ++j;
    int run = static_cast<int>(j - i);
    if (!first) os << ' ';
    first = false;
    os << 's' << w.letters[i].index;
    int e = run * w.letters[i].sign;
    if (e != 1) os << '^' << e;
    i = j;
  }
  return os.str();
}

BraidWord parse_word(const std::string& text, int strands) {
  BraidWord w;
  std::istringstream is(text);
  std::string tok;
  int max_index = 0;
  while (is >> tok) {
    if (tok.size() < 2 || tok[0] != 's') {
      throw ParseError("braid word: bad token '" + tok + "'");
    }
    std::size_t caret = tok.find('^');
    std::string idx_str = tok.substr(1, caret == std::string::npos ? std::string::npos : caret - 1);
    int exp = 1;
    if (caret != std::string::npos) {
      std::string exp_str = tok.substr(caret + 1);
      char* end = nullptr;
      long e = std::strtol(exp_str.c_str(), &end, 10);
      if (exp_str.empty() || *end != '\0') {
        throw ParseError("braid word: bad exponent in '" + tok + "'");
      }
      exp = static_cast<int>(e);
    }
    char* end = nullptr;
    long idx = std::strtol(idx_str.c_str(), &end, 10);
    if (idx_str.empty() || *end != '\0' || idx < 1) {
      throw ParseError("braid word: bad generator in '" + tok + "'");
    }
    max_index = std::max(max_index, static_cast<int>(idx));
    int sgn = exp >= 0 ? 1 : -1;
    for (int r = 0; r < std::abs(exp); ++r) {
      w.letters.push_back({static_cast<int>(idx), sgn});
    }
  }
  w.strands = strands > 0 ? strands : max_index + 1;
  if (w.strands < 2) w.strands = 2;
  validate(w);
  return w;
}

nlohmann::json to_json(const BraidWord& w) {
  nlohmann::json letters = nlohmann::json::array();
  for (const BraidLetter& l : w.letters) letters.push_back({l.index, l.sign});
  return nlohmann::json{{"strands", w.strands}, {"letters", letters}};
}

BraidWord word_from_json(const nlohmann::json& j) {
  try {
    BraidWord w;
    w.strands = j.at("strands").get<int>();
    for (const auto& l : j.at("letters")) {
      if (!l.is_array() || l.size() != 2) throw ParseError("braid json: letter must be [index, sign]");
      w.letters.push_back({l[0].get<int>(), l[1].get<int>()});
    }
    validate(w);
    return w;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("braid json: ") + e.what());
  }
}

BraidWord generator_word(int n, int index, int sign) {
  BraidWord w;
  w.strands = n;
  w.letters.push_back({index, sign});
  validate(w);
  return w;
}

BraidWord band_generator(int n, int a, int b) {
  if (a > b) std::swap(a, b);
  if (a < 0 || b >= n || a == b) throw ParseError("band_generator: bad slots");
  // (sigma_{b} ... sigma_{a+2}) sigma_{a+1}^2 (sigma_{a+2}^-1 ... sigma_{b}^-1)
  // in 1-based generator indices: conjugates slots a,b adjacent, then a full
  // twist, then back. Pure: permutation is the identity.
  BraidWord w;
  w.strands = n;
  for (int i = b; i >= a + 2; --i) w.letters.push_back({i, 1});
  w.letters.push_back({a + 1, 1});
  w.letters.push_back({a + 1, 1});
  for (int i = a + 2; i <= b; ++i) w.letters.push_back({i, -1});
  validate(w);
  return w;
}

}  // namespace pmorph
