#include "pmorph/quasimorphism.hpp"

#include "pmorph/errors.hpp"
#include "pmorph/signature.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace pmorph {

namespace {

// a then b: the left-to-right product ab.
BraidWord product(const BraidWord& a, const BraidWord& b) {
  return braid_compose(b, a);
}

// Calibrated additivity bound for the closure-signature plug-in: the
// maximum of |sig(ab) - sig(a) - sig(b)| over 10^4 random length-20 pairs
// on 4 strands (seed 2026) was 3, declared at 1.25x that. A sampling
// bound, not a proof.
constexpr double kSignatureDefect = 3.75;
constexpr int kSignatureCalibrationTrials = 10000;
constexpr int kSignatureCalibrationLength = 20;
constexpr int kSignatureCalibrationStrands = 4;
constexpr int kSignatureCalibrationMax = 3;

}  // namespace

// ----- plug-ins -----

Quasimorphism exponent_sum_qm() {
  Quasimorphism qm;
  qm.name = "exponent-sum";
  qm.homogeneous = true;
  qm.evaluate = [](const BraidWord& w) {
    return static_cast<double>(exponent_sum(w));
  };
  return qm;
}

Quasimorphism cross_linking_qm(const std::vector<std::vector<double>>& weights) {
  int n = static_cast<int>(weights.size());
  if (n < 2) {
    throw ConfigInvalidError("cross_linking_qm: need at least a 2x2 weight matrix");
  }
  for (const auto& row : weights) {
    if (static_cast<int>(row.size()) != n) {
      throw ConfigInvalidError("cross_linking_qm: weight matrix must be square");
    }
    for (double v : row) {
      if (!std::isfinite(v)) {
        throw ConfigInvalidError("cross_linking_qm: weights must be finite");
      }
    }
  }
  Quasimorphism qm;
  qm.name = "cross-linking";
  qm.homogeneous = true;
  qm.pure_domain = true;
  qm.params["strands"] = n;
  nlohmann::json jw = nlohmann::json::array();
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (weights[a][b] != 0.0) {
        jw.push_back({{"pair", {a, b}}, {"weight", weights[a][b]}});
      }
    }
  }
  qm.params["weights"] = jw;
  qm.evaluate = [weights, n](const BraidWord& w) {
    if (w.strands != n) {
      throw StrandMismatchError("cross-linking weights are for " + std::to_string(n) +
                                " strands, word has " + std::to_string(w.strands));
    }
    std::vector<std::vector<int>> m = crossing_sum_matrix(w);
    double s = 0.0;
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (weights[a][b] != 0.0) s += weights[a][b] * 0.5 * m[a][b];
      }
    }
    return s;
  };
  return qm;
}

Quasimorphism pair_linking_qm(int strands, int a, int b) {
  if (strands < 2 || a < 0 || b <= a || b >= strands) {
    throw ConfigInvalidError("pair_linking_qm: need 0 <= a < b < strands");
  }
  std::vector<std::vector<double>> w(strands, std::vector<double>(strands, 0.0));
  w[a][b] = 1.0;
  Quasimorphism qm = cross_linking_qm(w);
  qm.name = "linking";
  return qm;
}

Quasimorphism cross_pair_qm(int strands, int split) {
  if (strands < 2 || split <= 0 || split >= strands) {
    throw ConfigInvalidError("cross_pair_qm: need 0 < split < strands");
  }
  std::vector<std::vector<double>> w(strands, std::vector<double>(strands, 0.0));
  for (int a = 0; a < split; ++a) {
    for (int b = split; b < strands; ++b) w[a][b] = 1.0;
  }
  Quasimorphism qm = cross_linking_qm(w);
  // Split words for this boundary have no straddling crossings, so every
  // weighted term is zero.
  qm.vanishes_on_split = true;
  qm.params["split"] = split;
  return qm;
}

Quasimorphism signature_qm() {
  Quasimorphism qm;
  qm.name = "signature";
  qm.declared_defect = kSignatureDefect;
  qm.params["calibration"] = {
      {"trials", kSignatureCalibrationTrials},
      {"word_length", kSignatureCalibrationLength},
      {"strands", kSignatureCalibrationStrands},
      {"max_observed", kSignatureCalibrationMax},
      {"margin", 1.25},
  };
  qm.evaluate = [](const BraidWord& w) {
    return static_cast<double>(link_signature(w));
  };
  return qm;
}

// ----- registry and manifest -----

nlohmann::json qm_manifest(const Quasimorphism& qm) {
  nlohmann::json params = qm.params;
  params["pure_domain"] = qm.pure_domain;
  return {
      {"name", qm.name},
      {"declared_defect", qm.declared_defect},
      {"homogeneous", qm.homogeneous},
      {"vanishes_on_split", qm.vanishes_on_split},
      {"parameters", params},
  };
}

Quasimorphism qm_from_name(const std::string& name, int strands) {
  if (strands < 2) {
    throw ConfigInvalidError("qm_from_name: need at least 2 strands");
  }
  if (name == "exponent-sum") return exponent_sum_qm();
  if (name == "signature") return signature_qm();
  if (name == "cross-linking") return cross_pair_qm(strands, strands / 2);
  const std::string prefix = "linking:";
  if (name.rfind(prefix, 0) == 0) {
    std::string pair = name.substr(prefix.size());
    std::size_t dash = pair.find('-');
    if (dash != std::string::npos) {
      try {
        std::size_t used_a = 0, used_b = 0;
        std::string sa = pair.substr(0, dash), sb = pair.substr(dash + 1);
        int a = std::stoi(sa, &used_a);
        int b = std::stoi(sb, &used_b);
        if (used_a == sa.size() && used_b == sb.size()) {
          return pair_linking_qm(strands, a, b);
        }
      } catch (const std::logic_error&) {
        // fall through to the unknown-name error
      }
    }
    throw ConfigInvalidError("qm_from_name: malformed pair in '" + name +
                             "', expected linking:A-B with 0 <= A < B < strands");
  }
  std::string known;
  for (const std::string& k : qm_names()) {
    known += known.empty() ? k : ", " + k;
  }
  throw ConfigInvalidError("qm_from_name: unknown plug-in '" + name +
                           "'; available: " + known);
}

std::vector<std::string> qm_names() {
  return {"exponent-sum", "cross-linking", "linking:A-B", "signature"};
}

// ----- analysis -----

BraidWord power_word(const BraidWord& w, int k) {
  if (k < 0) throw ConfigInvalidError("power_word: power must be >= 0");
  BraidWord out;
  out.strands = w.strands;
  out.letters.reserve(w.letters.size() * static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    out.letters.insert(out.letters.end(), w.letters.begin(), w.letters.end());
  }
  return out;
}

HomogenizationEstimate homogenize(const Quasimorphism& qm, const BraidWord& w,
                                  int k_max, double tol) {
  if (k_max < 2) throw ConfigInvalidError("homogenize: k_max must be >= 2");
  if (!(tol >= 0.0)) throw ConfigInvalidError("homogenize: tol must be >= 0");
  HomogenizationEstimate est;
  est.k_max = k_max;
  est.per_k.reserve(static_cast<std::size_t>(k_max));
  BraidWord acc;
  acc.strands = w.strands;
  for (int k = 1; k <= k_max; ++k) {
    acc = product(acc, w);
    est.per_k.push_back(qm.evaluate(acc) / k);
  }
  est.value = est.per_k.back();
  est.converged = std::abs(est.per_k[k_max - 1] - est.per_k[k_max - 2]) < tol;
  return est;
}

double defect_estimate(const Quasimorphism& qm, Rng& rng, int trials,
                       int word_length, int strands) {
  if (trials < 1) throw ConfigInvalidError("defect_estimate: trials must be >= 1");
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    BraidWord a = qm.pure_domain ? random_pure_word(rng, strands, word_length)
                                 : random_word(rng, strands, word_length);
    BraidWord b = qm.pure_domain ? random_pure_word(rng, strands, word_length)
                                 : random_word(rng, strands, word_length);
    double d = std::abs(qm.evaluate(product(a, b)) - qm.evaluate(a) - qm.evaluate(b));
    worst = std::max(worst, d);
  }
  return worst;
}

BraidWord random_word(Rng& rng, int strands, int length) {
  if (strands < 2) throw ConfigInvalidError("random_word: need at least 2 strands");
  if (length < 0) throw ConfigInvalidError("random_word: length must be >= 0");
  BraidWord w;
  w.strands = strands;
  w.letters.reserve(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) {
    int index = 1 + static_cast<int>(rng.uniform_index(strands - 1));
    int sign = rng.uniform() < 0.5 ? -1 : 1;
    w.letters.push_back({index, sign});
  }
  return w;
}

BraidWord random_pure_word(Rng& rng, int strands, int bands) {
  if (strands < 2) throw ConfigInvalidError("random_pure_word: need at least 2 strands");
  if (bands < 0) throw ConfigInvalidError("random_pure_word: bands must be >= 0");
  BraidWord w;
  w.strands = strands;
  for (int i = 0; i < bands; ++i) {
    int a = static_cast<int>(rng.uniform_index(strands));
    int b = static_cast<int>(rng.uniform_index(strands - 1));
    if (b >= a) {
      ++b;
    } else {
      std::swap(a, b);
    }
    BraidWord band = band_generator(strands, a, b);
    if (rng.uniform() < 0.5) band = braid_inverse(band);
    w = product(w, band);
  }
  return w;
}

}  // namespace pmorph
