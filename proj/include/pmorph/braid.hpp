#pragma once

// Braid words on n strands in generator-index form. Letters are stored in
// time order: the first letter is the first crossing the strands make.
// Composition follows map composition: braid_compose(g, f) is "f first,
// then g", matching gf = g after f for the flows the words come from.
//
// Words live in the surface braid group of the sphere but are stored as
// planar (disk) words read off a fixed stereographic projection; no sphere
// relations are applied. All invariants below are invariants of the planar
// word (free reduction, permutation, linking counts) or of the closed-link
// diagram it bounds.

#include "pmorph/errors.hpp"

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace pmorph {

struct BraidLetter {
  int index = 1;  // generator index, 1-based: sigma_index crosses slots index, index+1
  int sign = 1;   // +1 or -1
};

inline bool operator==(BraidLetter a, BraidLetter b) {
  return a.index == b.index && a.sign == b.sign;
}

struct BraidWord {
  int strands = 2;
  std::vector<BraidLetter> letters;

  int length() const { return static_cast<int>(letters.size()); }
};

bool operator==(const BraidWord& a, const BraidWord& b);

// Validates 1 <= index < strands for every letter; throws ParseError.
void validate(const BraidWord& w);

// g after f: f's letters first.
BraidWord braid_compose(const BraidWord& g, const BraidWord& f);

BraidWord braid_inverse(const BraidWord& w);

// Cancels adjacent sigma_i sigma_i^-1 pairs to a fixed point.
BraidWord free_reduce(BraidWord w);

// perm[s] = final slot of the strand starting in slot s (0-based).
std::vector<int> permutation(const BraidWord& w);

bool is_pure(const BraidWord& w);

int exponent_sum(const BraidWord& w);

// Signed count of crossings between the strands starting in slots a and b
// (0-based). The pairwise linking number is half of this.
int crossing_sum(const BraidWord& w, int a, int b);

double linking_number(const BraidWord& w, int a, int b);

// All pairwise signed crossing counts; [a][b] = [b][a], diagonal 0.
std::vector<std::vector<int>> crossing_sum_matrix(const BraidWord& w);

// ----- serialization -----

// "s1 s2^-1 s1" (empty word -> ""). Exponents other than +-1 are expanded on
// parse and contracted on print.
std::string to_text(const BraidWord& w);

// strands == 0 infers the strand count as (max index + 1). Throws ParseError
// on malformed input or out-of-range indices.
BraidWord parse_word(const std::string& text, int strands = 0);

nlohmann::json to_json(const BraidWord& w);
BraidWord word_from_json(const nlohmann::json& j);

// sigma_i as a word, and the pure band generator A_{ab} (0-based slots a<b):
// conjugate of sigma^2 linking exactly the strands a and b.
BraidWord generator_word(int n, int index, int sign = 1);
BraidWord band_generator(int n, int a, int b);

}  // namespace pmorph
