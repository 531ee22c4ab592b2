#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "pmorph/quasimorphism.hpp"

using namespace pmorph;

namespace {

// a then b, matching the product convention inside the plug-ins.
BraidWord product(const BraidWord& a, const BraidWord& b) {
  return braid_compose(b, a);
}

// Independent exponent sum: fold the letter signs directly.
int sign_sum(const BraidWord& w) {
  int s = 0;
  for (BraidLetter l : w.letters) s += l.sign;
  return s;
}

std::vector<std::vector<double>> zero_weights(int n) {
  return std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0));
}

// Random word mixing only the generators inside the blocks {0..split-1}
// and {split..n-1}; the blocks never interact, so the word is split.
BraidWord random_split_word(Rng& rng, int strands, int split, int length) {
  BraidWord w;
  w.strands = strands;
  for (int i = 0; i < length; ++i) {
    // Valid indices are 1..split-1 and split+1..strands-1 (1-based letters
    // sigma_index cross slots index-1, index).
    int index;
    do {
      index = 1 + static_cast<int>(rng.uniform_index(strands - 1));
    } while (index == split);
    int sign = rng.uniform() < 0.5 ? -1 : 1;
    w.letters.push_back({index, sign});
  }
  return w;
}

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

// ----- exponent-sum plug-in -----

TEST_CASE("exponent plug-in is the sign sum and a homomorphism everywhere") {
  Quasimorphism qm = exponent_sum_qm();
  CHECK(qm.declared_defect == 0.0);
  CHECK(qm.homogeneous);
  CHECK_FALSE(qm.vanishes_on_split);
  CHECK_FALSE(qm.pure_domain);
  Rng rng(11);
  for (int t = 0; t < 10000; ++t) {
    BraidWord a = random_word(rng, 4, 12);
    BraidWord b = random_word(rng, 4, 12);
    CHECK(qm.evaluate(a) == static_cast<double>(sign_sum(a)));
    CHECK(qm.evaluate(product(a, b)) == qm.evaluate(a) + qm.evaluate(b));
  }
  CHECK(qm.evaluate(parse_word("s1 s2^-1")) == 0.0);
  CHECK(qm.evaluate(parse_word("s1^3")) == 3.0);
}

// ----- cross-linking plug-ins -----

TEST_CASE("cross-linking weights validate") {
  CHECK_THROWS_AS(cross_linking_qm({}), ConfigInvalidError);
  CHECK_THROWS_AS(cross_linking_qm({{0.0}}), ConfigInvalidError);
  CHECK_THROWS_AS(cross_linking_qm({{0.0, 1.0}, {0.0}}), ConfigInvalidError);
  std::vector<std::vector<double>> bad = zero_weights(3);
  bad[0][2] = std::nan("");
  CHECK_THROWS_AS(cross_linking_qm(bad), ConfigInvalidError);
  Quasimorphism qm = cross_linking_qm(zero_weights(3));
  BraidWord w = parse_word("s1 s2", 4);
  CHECK_THROWS_AS(qm.evaluate(w), StrandMismatchError);
}

TEST_CASE("zero weights give the zero evaluator") {
  Quasimorphism qm = cross_linking_qm(zero_weights(4));
  Rng rng(12);
  for (int t = 0; t < 100; ++t) {
    CHECK(qm.evaluate(random_word(rng, 4, 30)) == 0.0);
  }
}

TEST_CASE("single-pair weight reads off the pair linking number") {
  // Band generators link exactly their own pair once.
  for (int n : {4, 5}) {
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        BraidWord band = band_generator(n, a, b);
        for (int i = 0; i < n; ++i) {
          for (int j = i + 1; j < n; ++j) {
            Quasimorphism qm = pair_linking_qm(n, i, j);
            double expect = (i == a && j == b) ? 1.0 : 0.0;
            CHECK(qm.evaluate(band) == expect);
            CHECK(qm.evaluate(braid_inverse(band)) == -expect);
          }
        }
      }
    }
  }
  CHECK_THROWS_AS(pair_linking_qm(4, 2, 2), ConfigInvalidError);
  CHECK_THROWS_AS(pair_linking_qm(4, -1, 2), ConfigInvalidError);
  CHECK_THROWS_AS(pair_linking_qm(4, 1, 4), ConfigInvalidError);
}

TEST_CASE("all-pairs linking halves the exponent sum on any word") {
  // Every letter is a crossing of exactly one labeled pair, so summing the
  // linking over all pairs counts each sign once with weight 1/2.
  int n = 5;
  std::vector<std::vector<double>> w = zero_weights(n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) w[a][b] = 1.0;
  }
  Quasimorphism qm = cross_linking_qm(w);
  Rng rng(13);
  for (int t = 0; t < 200; ++t) {
    BraidWord word = random_word(rng, n, 40);
    CHECK(qm.evaluate(word) == 0.5 * sign_sum(word));
  }
}

TEST_CASE("cross-linking is a homomorphism on pure words") {
  Quasimorphism qm = cross_pair_qm(4, 2);
  CHECK(qm.pure_domain);
  CHECK(qm.homogeneous);
  CHECK(qm.declared_defect == 0.0);
  Rng rng(14);
  for (int t = 0; t < 10000; ++t) {
    BraidWord a = random_pure_word(rng, 4, 3);
    BraidWord b = random_pure_word(rng, 4, 3);
    CHECK(qm.evaluate(product(a, b)) == qm.evaluate(a) + qm.evaluate(b));
  }
}

TEST_CASE("cross-pair weights vanish on split words") {
  Quasimorphism qm = cross_pair_qm(4, 2);
  CHECK(qm.vanishes_on_split);
  CHECK(qm.params["split"] == 2);
  Rng rng(15);
  for (int t = 0; t < 500; ++t) {
    CHECK(qm.evaluate(random_split_word(rng, 4, 2, 40)) == 0.0);
  }
  // Block-internal bands stay at zero; a straddling band counts.
  BraidWord south = band_generator(4, 0, 1);
  BraidWord north = band_generator(4, 2, 3);
  CHECK(qm.evaluate(product(south, north)) == 0.0);
  CHECK(qm.evaluate(band_generator(4, 1, 2)) == 1.0);
  CHECK(qm.evaluate(band_generator(4, 0, 2)) == 1.0);
  CHECK_THROWS_AS(cross_pair_qm(4, 0), ConfigInvalidError);
  CHECK_THROWS_AS(cross_pair_qm(4, 4), ConfigInvalidError);
}

// ----- signature plug-in -----

TEST_CASE("signature plug-in matches the frozen small closures") {
  Quasimorphism qm = signature_qm();
  CHECK(qm.declared_defect == 3.75);
  CHECK_FALSE(qm.homogeneous);
  CHECK_FALSE(qm.vanishes_on_split);
  CHECK(qm.evaluate(parse_word("", 2)) == 0.0);
  CHECK(qm.evaluate(parse_word("s1^3")) == -2.0);
  CHECK(qm.evaluate(parse_word("s1^-3")) == 2.0);
}

TEST_CASE("signature inverse antisymmetry and conjugation invariance are exact") {
  // Inverting the word mirrors the closure; conjugation does not change it.
  Quasimorphism qm = signature_qm();
  Rng rng(16);
  for (int t = 0; t < 300; ++t) {
    BraidWord a = random_word(rng, 4, 20);
    CHECK(qm.evaluate(braid_inverse(a)) == -qm.evaluate(a));
  }
  for (int t = 0; t < 300; ++t) {
    BraidWord a = random_word(rng, 4, 12);
    BraidWord b = random_word(rng, 4, 12);
    BraidWord conj = product(product(braid_inverse(b), a), b);
    CHECK(qm.evaluate(conj) == qm.evaluate(a));
  }
}

TEST_CASE("homomorphism plug-ins are exactly antisymmetric and conjugation invariant") {
  Quasimorphism exp = exponent_sum_qm();
  Quasimorphism cross = cross_pair_qm(4, 2);
  Rng rng(17);
  for (int t = 0; t < 1000; ++t) {
    BraidWord a = random_word(rng, 4, 20);
    CHECK(exp.evaluate(braid_inverse(a)) == -exp.evaluate(a));
    BraidWord p = random_pure_word(rng, 4, 4);
    CHECK(cross.evaluate(braid_inverse(p)) == -cross.evaluate(p));
    BraidWord q = random_pure_word(rng, 4, 3);
    BraidWord conj = product(product(braid_inverse(q), p), q);
    CHECK(cross.evaluate(conj) == cross.evaluate(p));
  }
}

TEST_CASE("homogeneous plug-ins scale exactly under powers") {
  Quasimorphism exp = exponent_sum_qm();
  Quasimorphism cross = cross_pair_qm(4, 2);
  Rng rng(18);
  for (int t = 0; t < 100; ++t) {
    BraidWord a = random_word(rng, 4, 10);
    BraidWord p = random_pure_word(rng, 4, 3);
    for (int k = 2; k <= 8; ++k) {
      CHECK(exp.evaluate(power_word(a, k)) == k * exp.evaluate(a));
      CHECK(cross.evaluate(power_word(p, k)) == k * cross.evaluate(p));
    }
  }
}

// ----- homogenization -----

TEST_CASE("power_word concatenates") {
  BraidWord w = parse_word("s1 s2^-1", 3);
  CHECK(power_word(w, 0).letters.empty());
  CHECK(power_word(w, 0).strands == 3);
  CHECK(to_text(power_word(w, 2)) == "s1 s2^-1 s1 s2^-1");
  CHECK_THROWS_AS(power_word(w, -1), ConfigInvalidError);
}

TEST_CASE("homogenize is exact for homomorphisms") {
  Quasimorphism qm = exponent_sum_qm();
  BraidWord w = parse_word("s1 s1 s2^-1");
  HomogenizationEstimate est = homogenize(qm, w, 2, 1e-12);
  CHECK(est.value == 1.0);
  CHECK(est.converged);
  CHECK(est.per_k.size() == 2);
  CHECK(est.per_k[0] == 1.0);
  CHECK(est.per_k[1] == 1.0);
  HomogenizationEstimate empty = homogenize(qm, parse_word("", 3), 4, 1e-12);
  CHECK(empty.value == 0.0);
  CHECK(empty.converged);
  CHECK_THROWS_AS(homogenize(qm, w, 1, 1e-12), ConfigInvalidError);
}

TEST_CASE("signature homogenization follows the torus-link slope") {
  // Closures of s1^(2k) are the (2, 2k) torus links with signature 1 - 2k,
  // so the per-iterate ratio tends to -2 and the fitted slope is exact.
  Quasimorphism qm = signature_qm();
  BraidWord w = parse_word("s1 s1");
  HomogenizationEstimate est = homogenize(qm, w, 10, 0.05);
  std::vector<double> ks, vals;
  for (int k = 1; k <= 10; ++k) {
    CHECK(est.per_k[k - 1] == doctest::Approx((1.0 - 2.0 * k) / k).epsilon(1e-12));
    ks.push_back(k);
    vals.push_back(est.per_k[k - 1] * k);
  }
  CHECK(fit_slope(ks, vals) == doctest::Approx(-2.0).epsilon(1e-12));
  // Successive ratios differ by 1/(k(k+1)); the last gap at k_max 10 is
  // 1/90, inside 0.05, while k_max 3 leaves a 1/6 gap.
  CHECK(est.converged);
  CHECK_FALSE(homogenize(qm, w, 3, 0.1).converged);
  CHECK(homogenize(qm, w, 3, 0.25).converged);
}

// ----- defect estimation -----

TEST_CASE("defect estimates are zero for homomorphisms") {
  Rng rng(19);
  CHECK(defect_estimate(exponent_sum_qm(), rng, 200, 20, 4) == 0.0);
  CHECK(defect_estimate(cross_pair_qm(4, 2), rng, 200, 20, 4) == 0.0);
  CHECK_THROWS_AS(defect_estimate(exponent_sum_qm(), rng, 0, 20, 4),
                  ConfigInvalidError);
}

TEST_CASE("signature defect stays under the declared bound at calibration size") {
  Quasimorphism qm = signature_qm();
  Rng rng(2026);  // the calibration seed, frozen
  double observed = defect_estimate(qm, rng, 10000, 20, 4);
  CHECK(observed == 3.0);
  CHECK(observed <= qm.declared_defect);
  CHECK(observed > 0.0);  // genuinely quasi, not a homomorphism
}

// ----- random words -----

TEST_CASE("random pure words are pure") {
  Rng rng(20);
  for (int t = 0; t < 50; ++t) {
    int n = 2 + static_cast<int>(rng.uniform_index(5));
    BraidWord w = random_pure_word(rng, n, 4);
    CHECK(is_pure(w));
    CHECK(w.strands == n);
  }
  CHECK_THROWS_AS(random_word(rng, 1, 5), ConfigInvalidError);
  CHECK_THROWS_AS(random_word(rng, 4, -1), ConfigInvalidError);
  CHECK_THROWS_AS(random_pure_word(rng, 1, 5), ConfigInvalidError);
  CHECK_THROWS_AS(random_pure_word(rng, 4, -1), ConfigInvalidError);
}

TEST_CASE("random words hit every generator and sign") {
  Rng rng(21);
  BraidWord w = random_word(rng, 4, 2000);
  int seen[4][2] = {};
  for (BraidLetter l : w.letters) {
    CHECK(l.index >= 1);
    CHECK(l.index <= 3);
    seen[l.index][l.sign > 0 ? 1 : 0]++;
  }
  for (int i = 1; i <= 3; ++i) {
    CHECK(seen[i][0] > 0);
    CHECK(seen[i][1] > 0);
  }
}

// ----- registry and manifest -----

TEST_CASE("registry builds plug-ins by name") {
  Quasimorphism cross = qm_from_name("cross-linking", 4);
  CHECK(cross.name == "cross-linking");
  CHECK(cross.params["split"] == 2);
  CHECK(cross.vanishes_on_split);
  CHECK(qm_from_name("exponent-sum", 4).name == "exponent-sum");
  CHECK(qm_from_name("signature", 4).name == "signature");
  Quasimorphism lk = qm_from_name("linking:0-2", 4);
  CHECK(lk.name == "linking");
  CHECK(lk.evaluate(band_generator(4, 0, 2)) == 1.0);
  CHECK(lk.evaluate(band_generator(4, 0, 1)) == 0.0);
  CHECK_THROWS_AS(qm_from_name("entropy", 4), ConfigInvalidError);
  CHECK_THROWS_AS(qm_from_name("linking:2-0", 4), ConfigInvalidError);
  CHECK_THROWS_AS(qm_from_name("linking:0-9", 4), ConfigInvalidError);
  CHECK_THROWS_AS(qm_from_name("linking:a-b", 4), ConfigInvalidError);
  CHECK_THROWS_AS(qm_from_name("linking:0-", 4), ConfigInvalidError);
  CHECK_THROWS_AS(qm_from_name("cross-linking", 1), ConfigInvalidError);
  CHECK(qm_names().size() == 4);
}

TEST_CASE("manifest carries the certified properties") {
  nlohmann::json m = qm_manifest(qm_from_name("cross-linking", 4));
  CHECK(m["name"] == "cross-linking");
  CHECK(m["declared_defect"] == 0.0);
  CHECK(m["homogeneous"] == true);
  CHECK(m["vanishes_on_split"] == true);
  CHECK(m["parameters"]["pure_domain"] == true);
  CHECK(m["parameters"]["strands"] == 4);
  nlohmann::json s = qm_manifest(signature_qm());
  CHECK(s["declared_defect"] == 3.75);
  CHECK(s["parameters"]["calibration"]["max_observed"] == 3);
  CHECK(s["parameters"]["calibration"]["trials"] == 10000);
  CHECK(s["parameters"]["pure_domain"] == false);
}
