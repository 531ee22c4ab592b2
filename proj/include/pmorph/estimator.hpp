#pragma once

// Stratified Monte Carlo estimation of the loop functional
//
//   Phi(f) = sum_{k=2}^{n-2} vol_k * E[ phi(gamma(f, x)) | x in stratum k ],
//
// where stratum k holds the configurations with exactly k points in the
// northern hemisphere, vol_k = C(n, k) / 2^n is its share of the product
// measure, and gamma(f, x) is the loop braid of f at x closed against the
// stratum's template configuration.  Every sample draws a configuration in
// its stratum, extracts the braid, and feeds the word to a quasimorphism
// plug-in; failed extractions are dropped and counted.
//
// Results are deterministic in (seed, n, samples) and byte-identical across
// worker counts: each sample owns a counter-derived stream, values land in
// per-index slots, and the reductions run on a fixed summation tree.

#include "pmorph/extraction.hpp"
#include "pmorph/quasimorphism.hpp"

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace pmorph {

struct EstimatorOptions {
  int workers = 1;                 // sample-level threads; output-identical
  ExtractionOptions extraction;    // passed through to braid extraction
  double max_failure_rate = 0.01;  // abort a stratum above this rate
  double min_separation = kMinSeparationDefault;
  bool keep_samples = false;       // retain per-sample values (NaN = failed)
};

// Per-stratum moments over the successful samples.
struct StratumStats {
  int k = 0;               // points in the northern hemisphere
  double weight = 0.0;     // stratum volume C(n, k) / 2^n
  int samples = 0;         // attempted
  int failures = 0;        // lost to extraction or evaluation errors
  double mean = 0.0;
  double variance = 0.0;   // unbiased; 0 when fewer than two successes
  double std_error = 0.0;  // sqrt(variance / successes)
};

struct ParamorphismEstimate {
  double mean = 0.0;       // sum over strata of weight * stratum mean
  double std_error = 0.0;  // sqrt(sum of weight^2 * variance / successes)
  int n = 0;
  int samples_per_stratum = 0;
  std::string qm_name;
  std::uint64_t seed = 0;
  std::vector<StratumStats> strata;  // k = 2..n-2 in order
  std::string first_error;           // message of the lowest failed index
  std::vector<std::vector<double>> sample_values;  // per stratum, if kept

  // Canonical report object; keys are sorted and the layout is stable, so
  // equal estimates dump to identical bytes.  The standard-error key is
  // spelled "stderr" even though the field cannot use that name (it is a
  // C stdio macro).
  nlohmann::json to_json() const;
};

// Estimates Phi(f) with `samples` draws in every stratum.  Requires n > 3,
// samples >= 10, and workers >= 1.  Sample (k, i) uses the stream
// Rng(seed).substream("phi").substream(k, i), first for the configuration
// draw and then for extraction retry jitter, so any subset of the sample
// grid can be recomputed independently of the rest.  Throws
// NumericalFailureError when a stratum's failure count exceeds
// max_failure_rate * samples or fewer than two samples survive.
ParamorphismEstimate phi_estimate(const Isotopy& f, const Quasimorphism& qm, int n, int samples,
                                  std::uint64_t seed, const EstimatorOptions& opt = {});

// Estimates Phi(f^j) for j = 1..k_max from one flow solve per sample: the
// k_max-fold trajectory is integrated once and every whole-period prefix is
// swept separately, so entry j - 1 agrees with
// phi_estimate(iterate(f, j), ...) at the per-sample value level while
// costing a single integration.  A failed sample is dropped from every j.
std::vector<ParamorphismEstimate> phi_iterates_estimate(const Isotopy& f,
                                                        const Quasimorphism& qm, int n, int k_max,
                                                        int samples, std::uint64_t seed,
                                                        const EstimatorOptions& opt = {});

}  // namespace pmorph
