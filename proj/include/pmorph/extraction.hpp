#pragma once

// Braid extraction: turn a flow and a configuration into a planar braid word.
//
// Each configuration point x_i contributes a loop based at a template point
// z_i: geodesic z_i -> x_i on the first third of loop time, the flow applied
// to x_i on the middle third, geodesic f(x_i) -> z_i on the last third. All
// strands are sampled on one shared time grid, projected stereographically,
// and swept for adjacent transpositions in the first planar coordinate.
//
// Sign convention: a crossing is positive when the right-hand strand passes
// the left-hand one through the upper half of the relative plane (the pair
// winds counterclockwise). Pairwise winding numbers of the projected loops
// equal half the signed crossing counts of the word.

#include "pmorph/braid.hpp"
#include "pmorph/errors.hpp"
#include "pmorph/flows.hpp"
#include "pmorph/rng.hpp"
#include "pmorph/sphere.hpp"

#include <vector>

namespace pmorph {

struct ExtractionOptions {
  SpherePoint pole = default_projection_pole();
  double pole_clearance = 1e-3;  // min angle any sampled point keeps from the pole
  double tail_resolution = 0.02; // max angular motion per tail sample
  int max_retries = 8;           // base-point jitter retries in the robust wrapper
  double jitter = 1e-6;          // base jitter angle per retry
};

// Projected strand loops on a shared time grid.
struct LoopDiagram {
  std::vector<double> times;                      // strictly increasing, [0, 1]
  std::vector<std::vector<PlanarPoint>> strands;  // [strand][time index]
};

struct ExtractedBraid {
  BraidWord word;
  // slot_of_point[i] = starting slot (0-based, left to right at time 0) of
  // the strand attached to configuration point i.
  std::vector<int> slot_of_point;
};

// Builds the projected diagram. Throws PoleCollisionError, AntipodalPairError.
LoopDiagram build_loop_diagram(const Isotopy& f, const Configuration& x,
                               const Configuration& base, const ExtractionOptions& opts = {});

// Sweeps a diagram for crossings. Throws TangentialCrossingError on
// unresolvable order (ties, grazing contact).
BraidWord sweep_diagram(const LoopDiagram& d);

// Full pipeline, no retries.
ExtractedBraid extract_braid(const Isotopy& f, const Configuration& x,
                             const Configuration& base, const ExtractionOptions& opts = {});

// Retries with jittered base points on tangential/pole/antipodal failures.
// The rng only feeds the jitter; a fresh substream keeps runs reproducible.
ExtractedBraid extract_braid_robust(const Isotopy& f, const Configuration& x,
                                    const Configuration& base, Rng rng,
                                    const ExtractionOptions& opts = {});

// Braids of f, f^2, ..., f^k_max from one integration: the trajectory of
// the k_max-fold iterate is computed once, and every whole-period prefix is
// closed and swept separately. Entry j-1 is bit-identical to
// extract_braid(iterate(f, j), x, base, opts). k_max >= 1.
std::vector<ExtractedBraid> extract_braid_iterates(const Isotopy& f, const Configuration& x,
                                                   const Configuration& base, int k_max,
                                                   const ExtractionOptions& opts = {});

// Retry wrapper over the iterate family with the same jitter policy as
// extract_braid_robust; a failure at any iterate jitters the shared base.
// The flow trajectory is reused across retries (jitter only moves tails).
std::vector<ExtractedBraid> extract_braid_iterates_robust(const Isotopy& f,
                                                          const Configuration& x,
                                                          const Configuration& base, int k_max,
                                                          Rng rng,
                                                          const ExtractionOptions& opts = {});

// ----- cocycle diagnostics -----

struct CocycleReport {
  BraidWord lhs;  // braid of (g after f) at x
  BraidWord rhs;  // braid of f at x composed with braid of g at f(x)
  bool permutation_equal = false;
  bool crossing_matrix_equal = false;
  bool exponent_equal = false;
  bool signature_equal = false;

  bool all_equal() const {
    return permutation_equal && crossing_matrix_equal && exponent_equal && signature_equal;
  }
};

// Compares gamma(gf, x) with gamma(g, f(x)) * gamma(f, x), both based at the
// same template; equality is checked on the invariant set (permutation,
// crossing matrix, exponent sum, link signature).
CocycleReport cocycle_check(const Isotopy& g, const Isotopy& f, const Configuration& x,
                            const Configuration& base, const ExtractionOptions& opts = {});

// Invariant fingerprint equality of extractions across projection poles or
// jittered bases (planar-word pole sensitivity diagnostic).
bool extraction_stable(const Isotopy& f, const Configuration& x, const Configuration& base,
                       const std::vector<SpherePoint>& poles);

}  // namespace pmorph
