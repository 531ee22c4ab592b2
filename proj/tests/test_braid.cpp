#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <vector>

#include "pmorph/braid.hpp"

using namespace pmorph;

namespace {

BraidWord make(int strands, std::vector<BraidLetter> ls) {
  BraidWord w;
  w.strands = strands;
  w.letters = std::move(ls);
  return w;
}

}  // namespace

TEST_CASE("validation rejects out-of-range generators") {
  CHECK_NOTHROW(validate(make(3, {{1, 1}, {2, -1}})));
  CHECK_THROWS_AS(validate(make(3, {{3, 1}})), ParseError);
  CHECK_THROWS_AS(validate(make(3, {{0, 1}})), ParseError);
  CHECK_THROWS_AS(validate(make(2, {{1, 2}})), ParseError);
}

TEST_CASE("composition keeps time order: f's letters first") {
  BraidWord f = make(3, {{1, 1}});
  BraidWord g = make(3, {{2, -1}});
  BraidWord gf = braid_compose(g, f);
  REQUIRE(gf.length() == 2);
  CHECK(gf.letters[0] == BraidLetter{1, 1});
  CHECK(gf.letters[1] == BraidLetter{2, -1});
  CHECK_THROWS_AS(braid_compose(make(3, {}), make(4, {})), StrandMismatchError);
}

TEST_CASE("inverse composes to the identity after free reduction") {
  std::mt19937 gen(52u);
  std::uniform_int_distribution<int> idx(1, 3), flip(0, 1), len(0, 12);
  for (int trial = 0; trial < 100; ++trial) {
    BraidWord w;
    w.strands = 4;
    int L = len(gen);
    for (int i = 0; i < L; ++i) w.letters.push_back({idx(gen), flip(gen) ? 1 : -1});
    BraidWord e = free_reduce(braid_compose(braid_inverse(w), w));
    CHECK(e.length() == 0);
    BraidWord e2 = free_reduce(braid_compose(w, braid_inverse(w)));
    CHECK(e2.length() == 0);
  }
}

TEST_CASE("free reduction cancels nested pairs") {
  BraidWord w = make(3, {{1, 1}, {2, 1}, {2, -1}, {1, -1}, {2, 1}});
  BraidWord r = free_reduce(w);
  REQUIRE(r.length() == 1);
  CHECK(r.letters[0] == BraidLetter{2, 1});
  CHECK(free_reduce(make(2, {})).length() == 0);
}

TEST_CASE("permutation tracks slots in time order") {
  // sigma_1 then sigma_2 in B3: slot 0 ends at 2.
  BraidWord w = make(3, {{1, 1}, {2, 1}});
  auto p = permutation(w);
  CHECK(p == std::vector<int>{2, 0, 1});
  CHECK_FALSE(is_pure(w));
  CHECK(is_pure(make(3, {})));
  CHECK(is_pure(make(2, {{1, 1}, {1, -1}})));
  CHECK(is_pure(make(2, {{1, 1}, {1, 1}})));
}

TEST_CASE("exponent sum and crossing counts") {
  BraidWord w = make(2, {{1, 1}, {1, 1}, {1, -1}});
  CHECK(exponent_sum(w) == 1);
  CHECK(crossing_sum(w, 0, 1) == 1);

  BraidWord hopf = make(2, {{1, 1}, {1, 1}});
  CHECK(crossing_sum(hopf, 0, 1) == 2);
  CHECK(linking_number(hopf, 0, 1) == doctest::Approx(1.0));

  auto m = crossing_sum_matrix(make(3, {{1, 1}, {2, 1}, {1, 1}}));
  CHECK(m[0][1] == m[1][0]);
  CHECK(m[0][0] == 0);
  int total = 0;
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) total += m[a][b];
  }
  CHECK(total == 3);  // every letter crosses exactly one pair
}

TEST_CASE("crossing sums are symmetric in strand labels and sign-aware") {
  BraidWord w = make(3, {{1, 1}, {2, -1}, {1, 1}, {2, -1}});
  auto m = crossing_sum_matrix(w);
  CHECK(exponent_sum(w) == 0);
  int sum = 0;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) sum += m[a][b];
  }
  CHECK(sum == 2 * exponent_sum(w));
}

TEST_CASE("band generators are pure and link exactly one pair") {
  for (int n = 3; n <= 6; ++n) {
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        BraidWord band = band_generator(n, a, b);
        CAPTURE(n);
        CAPTURE(a);
        CAPTURE(b);
        CHECK(is_pure(band));
        for (int u = 0; u < n; ++u) {
          for (int v = u + 1; v < n; ++v) {
            int want = (u == a && v == b) ? 2 : 0;
            CHECK(crossing_sum(band, u, v) == want);
          }
        }
      }
    }
  }
  CHECK(to_text(band_generator(4, 0, 2)) == "s2 s1^2 s2^-1");
}

TEST_CASE("text serialization round-trips") {
  BraidWord w = make(4, {{1, 1}, {1, 1}, {1, 1}, {3, -1}, {3, -1}, {2, 1}});
  CHECK(to_text(w) == "s1^3 s3^-2 s2");
  BraidWord back = parse_word(to_text(w), 4);
  CHECK(back == w);

  CHECK(to_text(make(2, {})) == "");
  CHECK(parse_word("", 2) == make(2, {}));
  CHECK(parse_word("s1 s1 s1", 0).strands == 2);
  CHECK(parse_word("s3", 0).strands == 4);
  CHECK(parse_word("  s1^2   s2^-1 ", 3) == make(3, {{1, 1}, {1, 1}, {2, -1}}));

  CHECK_THROWS_AS(parse_word("x1", 2), ParseError);
  CHECK_THROWS_AS(parse_word("s0", 2), ParseError);
  CHECK_THROWS_AS(parse_word("s2", 2), ParseError);
  CHECK_THROWS_AS(parse_word("s1^", 2), ParseError);
  CHECK(parse_word("s1^0", 2).length() == 0);  // zero exponent expands to nothing
  CHECK_THROWS_AS(parse_word("s1 junk", 2), ParseError);
}

TEST_CASE("json serialization round-trips") {
  BraidWord w = make(5, {{4, -1}, {1, 1}, {2, 1}});
  nlohmann::json j = to_json(w);
  CHECK(j["strands"] == 5);
  BraidWord back = word_from_json(j);
  CHECK(back == w);
  CHECK_THROWS_AS(word_from_json(nlohmann::json{{"strands", 2}}), ParseError);
}

TEST_CASE("generator words") {
  BraidWord g = generator_word(3, 2, -1);
  REQUIRE(g.length() == 1);
  CHECK(g.strands == 3);
  CHECK(g.letters[0] == BraidLetter{2, -1});
}
