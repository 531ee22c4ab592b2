#pragma once

// Real-valued evaluators on braid words packaged with their certified
// properties: a declared additivity defect D (|phi(ab) - phi(a) - phi(b)|
// <= D on the plug-in's domain), exact homogeneity (phi(w^k) = k phi(w)),
// and certified vanishing on split words (words whose strands never cross
// a fixed block boundary).
//
// The linking plug-ins count crossings by followed strand labels, so they
// are homomorphisms (defect 0) on pure words, which is the only kind of
// word trajectory extraction produces; on non-pure words label tracking is
// not additive, so those plug-ins declare a pure domain and random probes
// sample pure words for them. The closure-signature plug-in is a genuine
// quasimorphism on all words; its defect bound is calibrated by sampling,
// not proven.

#include "pmorph/braid.hpp"
#include "pmorph/rng.hpp"

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace pmorph {

struct Quasimorphism {
  std::string name;
  double declared_defect = 0.0;   // D: additivity defect bound on the domain
  bool homogeneous = false;       // phi(w^k) = k phi(w) exactly on the domain
  bool vanishes_on_split = false; // certified 0 on split words for the
                                  // block boundary recorded in params
  bool pure_domain = false;       // certificates hold on pure words only;
                                  // random probes then sample pure words
  nlohmann::json params = nlohmann::json::object();
  std::function<double(const BraidWord&)> evaluate;
};

struct HomogenizationEstimate {
  double value = 0.0;         // last per-iterate ratio
  int k_max = 0;
  std::vector<double> per_k;  // evaluate(w^k) / k for k = 1..k_max
  bool converged = false;     // last two ratios agree within tol
};

// ----- plug-ins -----

// phi(w) = exponent sum. Homomorphism on all words, defect 0.
Quasimorphism exponent_sum_qm();

// phi(w) = sum over slot pairs a < b of weights[a][b] * lk_ab(w), linking
// by followed labels. weights must be square with >= 2 rows and finite
// entries; only the strict upper triangle is read. Homomorphism on pure
// words. Evaluation throws StrandMismatchError unless w.strands matches
// the weight dimension.
Quasimorphism cross_linking_qm(const std::vector<std::vector<double>>& weights);

// Single-pair convenience: weight 1 on the slot pair (a, b), 0 elsewhere.
Quasimorphism pair_linking_qm(int strands, int a, int b);

// Weight 1 on every pair straddling the boundary (slots < split vs >=
// split). Split words for that boundary have no straddling crossings, so
// the value is certified 0 on them; requires 0 < split < strands.
Quasimorphism cross_pair_qm(int strands, int split);

// phi(w) = signature of the closure link (exact integer arithmetic).
// Genuine quasimorphism; declared_defect is 1.25x the maximum observed
// over 10^4 random length-20 pairs on 4 strands, frozen here, not proven.
Quasimorphism signature_qm();

// ----- registry and manifest -----

// {name, declared_defect, homogeneous, vanishes_on_split, parameters};
// pure_domain is folded into parameters.
nlohmann::json qm_manifest(const Quasimorphism& qm);

// Lookup by CLI name: "exponent-sum", "cross-linking" (boundary at
// strands/2), "linking:A-B" (0-based slot pair), "signature". Throws
// ConfigInvalidError for unknown names or malformed pairs.
Quasimorphism qm_from_name(const std::string& name, int strands);

std::vector<std::string> qm_names();

// ----- analysis -----

// w^k by concatenation; k >= 0 (k = 0 gives the empty word).
BraidWord power_word(const BraidWord& w, int k);

// per_k = evaluate(w^k)/k for k = 1..k_max (k_max >= 2); value is the last
// ratio; converged when the last two ratios differ by less than tol.
HomogenizationEstimate homogenize(const Quasimorphism& qm, const BraidWord& w,
                                  int k_max, double tol);

// Max over trials of |phi(ab) - phi(a) - phi(b)| for random words a, b of
// the given length (band-generator factors when the plug-in declares a
// pure domain). A lower bound for the true defect on that domain.
double defect_estimate(const Quasimorphism& qm, Rng& rng, int trials,
                       int word_length, int strands);

// Uniform random letters sigma_i^{+-1}.
BraidWord random_word(Rng& rng, int strands, int length);

// Product of `bands` random band generators A_ab^{+-1}; always pure.
BraidWord random_pure_word(Rng& rng, int strands, int bands);

}  // namespace pmorph
