#pragma once

// Experiment suites over the stratified estimator: the additivity-defect
// envelope, iterate growth, equator-preserving boundedness, the affine
// length bound, collar scaling, split cancellation, nondegeneracy, stratum
// weight checks, displacement certificates, the degree-four disk
// polynomial, and growth certificates for the equator metric. Every suite
// returns a PropertyReport whose pass flag is a deterministic function of
// the raw points and the tolerances declared here; the fitted constants are
// empirical envelopes from finite scans, never proofs.

#include "pmorph/estimator.hpp"
#include "pmorph/stats.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace pmorph {

struct PointRow {
  std::string series;  // sub-series inside the experiment
  double k_or_index;   // abscissa: iterate count, length, angle, or index
  double value;
  double std_error;
  int samples;
};

struct PropertyReport {
  std::string property;  // P1..P4, Frag, NonDeg, Split, Weights, Length, D1, Ishida
  std::map<std::string, double> constants;
  std::vector<PointRow> points;
  bool pass = false;
  std::uint64_t seed = 0;
  nlohmann::json config = nlohmann::json::object();  // hashed, canonical
  nlohmann::json meta = nlohmann::json::object();    // excluded from the hash

  // Report object with the config hash embedded; keys are sorted, so equal
  // reports dump to identical bytes.
  nlohmann::json to_json() const;
  // Plot-ready rows: experiment,k_or_index,value,stderr,samples,seed with
  // the experiment column spelled "<property>-<series>".
  std::string to_csv() const;
};

// FNV-1a over the canonical dump of `config` with the volatile keys
// ("workers", "out") removed, so worker-count and output-path changes never
// change the hash.
std::uint64_t config_hash(const nlohmann::json& config);

// A flow together with the label and scan parameter it carries in reports.
struct LabeledIsotopy {
  std::string label;
  double parameter = 0.0;
  Isotopy flow;
};

// ----- additivity defect envelope -----

// Measures defect(f, g) = Phi(gf) - Phi(f) - Phi(g) per pair at shared seed
// (the three estimates reuse the same sample grid, so the defect is a
// per-sample difference) and fits the envelope |defect| <= C + D * |g|_1.
// D is clamped at zero; C is the smallest value closing the envelope over
// the scan. Requires >= 10 pairs whose |g|_1 values span a decade unless
// the lengths are all equal, in which case the fit degenerates to D = 0.
// Constants: C, D, D_se, significant (1 when D > 2 * D_se), and
// degenerate_lengths. Pass: every defect is finite and inside the envelope.
PropertyReport property1_scan(const std::vector<std::pair<Isotopy, Isotopy>>& pairs,
                              const Quasimorphism& qm, int n, int samples, std::uint64_t seed,
                              const EstimatorOptions& opt = {});

// Default scan family: a fixed eggbeater f against polar rotations g with
// log-spaced angles covering two decades of length.
std::vector<std::pair<Isotopy, Isotopy>> default_p1_pairs(int count = 12);

// ----- iterate growth -----

// Estimates Phi(f^k) over k_range from shared trajectories and fits a
// weighted line in k. Constants: slope, slope_se, ci_lo, ci_hi (95%), r2,
// intercept. Pass: the confidence interval excludes zero and r2 >= 0.99
// (the growth certificate); bounded flows are expected to fail this with a
// confidence interval containing zero. Requires k_range increasing with at
// least three values.
PropertyReport phi_bar_estimate(const Isotopy& f, const Quasimorphism& qm, int n,
                                const std::vector<int>& k_range, int samples, std::uint64_t seed,
                                const EstimatorOptions& opt = {});

// ----- equator-preserving boundedness -----

// Verifies every family member maps the equator to itself (100 probes, max
// |z| of the images < 1e-6, else EquatorNotPreservedError), estimates Phi
// for each, and contrasts the family maximum B with the eggbeater iterate
// curve k = 1..5. Constants: B, egg_k3, rotation_trend_p (Kendall p-value
// over members labeled "rotation"). Pass: B < egg_k3 and the eggbeater
// curve rises monotonically after 3 sigma smoothing.
PropertyReport property3_check(const std::vector<LabeledIsotopy>& family,
                               const Quasimorphism& qm, int n, int samples, std::uint64_t seed,
                               const EstimatorOptions& opt = {});

// Default family: polar rotations up to two full turns, collar cutoffs, and
// hemisphere-supported twist compositions.
std::vector<LabeledIsotopy> default_equator_family();

// ----- affine length bound -----

// Scatter of Phi against |f|_1 over the flow family; fits the smallest
// A with |Phi| <= A * (length + 1) and counts leave-one-out outliers
// (|Phi_i| exceeding the envelope refit without point i by more than
// 3 * stderr_i). Constants: A, outliers. Pass: zero outliers. Requires
// >= 20 flows whose positive lengths span two decades.
PropertyReport property4_scan(const std::vector<Isotopy>& flows, const Quasimorphism& qm, int n,
                              int samples, std::uint64_t seed,
                              const EstimatorOptions& opt = {});

// Default family of 20 flows: log-spaced rotations, random Fourier fields,
// twist compositions, collar cutoffs, and eggbeater iterates.
std::vector<Isotopy> default_p4_flows();

// ----- collar scaling -----

// Lengths of the collar cutoff at fixed boundary angle over shrinking
// widths; fits the log-log slope. Constants: slope, intercept. Pass:
// slope >= 0.8 (the linear-in-width vanishing of the collar correction).
PropertyReport collar_scaling_report(double angle,
                                     const std::vector<double>& deltas = {0.2, 0.1, 0.05,
                                                                          0.025});

// ----- nondegeneracy -----

// Single estimate of Phi(f); pass when mean > 5 * stderr, the detection
// certificate that the functional sees the flow at all. Constants: mean,
// stderr, sigmas.
PropertyReport nondegeneracy_check(const Isotopy& f, const Quasimorphism& qm, int n, int samples,
                                   std::uint64_t seed, const EstimatorOptions& opt = {});

// ----- split cancellation -----

// Estimates Phi(compose(north, south)) with per-sample retention; pass when
// every sample value is exactly zero (hemisphere-supported factors cannot
// cross-link). Constants: max_abs_sample. The caller supplies flows
// supported in the open northern / southern hemispheres.
PropertyReport split_cancellation_check(const Isotopy& north, const Isotopy& south,
                                        const Quasimorphism& qm, int n, int samples,
                                        std::uint64_t seed, const EstimatorOptions& opt = {});

// ----- stratum weights -----

// Draws unconditioned configurations and compares hemisphere-occupancy
// frequencies against stratum_volume. Constants: max_z (worst deviation in
// binomial sigmas). Pass: every occupancy count within 3 sigma. Requires
// draws >= 1000.
PropertyReport stratum_weight_check(int n, int draws, std::uint64_t seed);

// ----- length report -----

// Computes |f|_1 by quadrature. With expected >= 0, pass when the value
// matches within rel_tol (absolute for expected 0); otherwise pass is
// always true and the report is informational. Constants: length.
PropertyReport length_report(const Isotopy& f, double expected = -1.0, double rel_tol = 1e-3);

// ----- equator metric growth certificate -----

// Certificate series |Phi(f^k)| for k = 1..k_max (lower bound for the
// equator displacement metric up to the affine constants of the length
// bound) against the path-length upper bound k * |f|_1. Constants:
// certificate_first, certificate_last, length_unit, trend_p. Pass: the
// certificate rises monotonically after 3 sigma smoothing.
PropertyReport d1_lower_bound_report(const Isotopy& f, const Quasimorphism& qm, int n, int k_max,
                                     int samples, std::uint64_t seed,
                                     const EstimatorOptions& opt = {});

// ----- displacement certificate -----

// epsilon * area(disk) where epsilon is the minimal angular displacement of
// the time-1 map over probe points of the disk, provided the probe images
// all leave the disk; zero otherwise.
double displacement_lower_bound(const Isotopy& f, const Disk& disk, int probes);

// ----- degree-four disk polynomial -----

// Four marked disks with a target braid value and the interaction
// coefficient table; scale multiplies every area.
struct IshidaSpec {
  std::vector<Disk> disks;  // exactly four, pairwise disjoint, each inside a hemisphere
  BraidWord target;         // the braid whose plug-in value is coefficient "b"
  double scale = 1.0;
  std::map<std::string, double> coefficients;  // keys: b, 1133, 1144, 1134,
                                               // 1233, 1244, 2233, 2234, 2244
};

// Evaluates 4! * (b a1 a2 a3 a4 + sum of the eight quartic interaction
// monomials) at the scaled areas. The scale enters as a single structural
// factor scale^4, so doubling the scale multiplies the value by exactly 16
// in floating point. Throws IncompleteCoefficientsError when a coefficient
// is missing or non-finite, ConfigInvalidError when the disks are not four,
// overlap, leave their hemispheres, or the scaled areas sum to >= 1.
double ishida_polynomial_prediction(const IshidaSpec& spec);

// Homogeneity battery: 100 seeded random specs checked for exact
// scale^4 covariance, plus the bare-target evaluation b = 1, areas 0.1
// (expected 24 * 10^-4). Constants: checks, exact_failures, b_only.
PropertyReport ishida_report(std::uint64_t seed);

}  // namespace pmorph
