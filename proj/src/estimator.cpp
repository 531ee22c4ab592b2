#include "pmorph/estimator.hpp"

#include "pmorph/kernels/field_table.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

namespace pmorph {

namespace {

constexpr std::uint64_t kPhiTag = 0x706869ull;  // "phi"

void validate(int n, int samples, const EstimatorOptions& opt) {
  if (n <= 3) throw ConfigInvalidError("estimator: need n > 3, got " + std::to_string(n));
  if (samples < 10) throw ConfigInvalidError("estimator: need samples >= 10");
  if (opt.workers < 1) throw ConfigInvalidError("estimator: workers must be >= 1");
  if (!(opt.max_failure_rate >= 0.0 && opt.max_failure_rate <= 1.0)) {
    throw ConfigInvalidError("estimator: max_failure_rate must lie in [0, 1]");
  }
}

// Hands indices 0..samples-1 to `workers` threads. The body writes results
// into per-index slots, so the outcome does not depend on the interleaving;
// domain errors are recorded per index and mark the sample failed.
std::map<int, std::string> dispatch(int samples, int workers,
                                    const std::function<void(int)>& body) {
  std::atomic<int> next{0};
  std::mutex mu;
  std::map<int, std::string> errors;
  auto worker = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= samples) return;
      try {
        body(i);
      } catch (const Error& e) {
        std::lock_guard<std::mutex> lock(mu);
        errors.emplace(i, e.what());
      }
    }
  };
  const int nthreads = std::min(workers, samples);
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  return errors;
}

void check_failures(int k, int samples, const std::map<int, std::string>& errors,
                    const EstimatorOptions& opt) {
  const int failures = static_cast<int>(errors.size());
  if (failures > opt.max_failure_rate * samples) {
    throw NumericalFailureError("estimator: stratum " + std::to_string(k) + " lost " +
                                std::to_string(failures) + " of " + std::to_string(samples) +
                                " samples; first: " + errors.begin()->second);
  }
  if (samples - failures < 2) {
    throw NumericalFailureError("estimator: stratum " + std::to_string(k) +
                                " has fewer than two surviving samples");
  }
}

// Moments over the successful samples, compacted in index order and reduced
// on the fixed summation tree so the result is worker-count independent.
StratumStats moments(int k, double weight, const std::vector<double>& values,
                     const std::map<int, std::string>& errors) {
  StratumStats s;
  s.k = k;
  s.weight = weight;
  s.samples = static_cast<int>(values.size());
  s.failures = static_cast<int>(errors.size());

  std::vector<double> ok;
  ok.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (errors.count(static_cast<int>(i)) == 0) ok.push_back(values[i]);
  }
  const std::size_t m = ok.size();
  s.mean = kern::kernels().sum(ok.data(), m) / static_cast<double>(m);
  std::vector<double> dev(m);
  for (std::size_t i = 0; i < m; ++i) dev[i] = (ok[i] - s.mean) * (ok[i] - s.mean);
  s.variance = m >= 2 ? kern::kernels().sum(dev.data(), m) / static_cast<double>(m - 1) : 0.0;
  s.std_error = std::sqrt(s.variance / static_cast<double>(m));
  return s;
}

void combine(ParamorphismEstimate& e) {
  double mean = 0.0;
  double var = 0.0;
  for (const StratumStats& s : e.strata) {
    mean += s.weight * s.mean;
    var += s.weight * s.weight * s.variance / static_cast<double>(s.samples - s.failures);
  }
  e.mean = mean;
  e.std_error = std::sqrt(var);
}

}  // namespace

nlohmann::json ParamorphismEstimate::to_json() const {
  nlohmann::json strata_json = nlohmann::json::array();
  nlohmann::json stratum_means = nlohmann::json::object();
  nlohmann::json stratum_counts = nlohmann::json::object();
  for (const StratumStats& s : strata) {
    stratum_means[std::to_string(s.k)] = s.mean;
    stratum_counts[std::to_string(s.k)] = s.samples;
    strata_json.push_back({{"k", s.k},
                           {"weight", s.weight},
                           {"samples", s.samples},
                           {"failures", s.failures},
                           {"mean", s.mean},
                           {"variance", s.variance},
                           {"stderr", s.std_error}});
  }
  nlohmann::json out{{"mean", mean},
                     {"stderr", std_error},
                     {"n", n},
                     {"qm_name", qm_name},
                     {"seed", seed},
                     {"samples_per_stratum", stratum_counts},
                     {"stratum_means", stratum_means},
                     {"strata", strata_json}};
  if (!first_error.empty()) out["first_error"] = first_error;
  if (!sample_values.empty()) out["sample_values"] = sample_values;
  return out;
}

ParamorphismEstimate phi_estimate(const Isotopy& f, const Quasimorphism& qm, int n, int samples,
                                  std::uint64_t seed, const EstimatorOptions& opt) {
  validate(n, samples, opt);
  ParamorphismEstimate out;
  out.n = n;
  out.samples_per_stratum = samples;
  out.qm_name = qm.name;
  out.seed = seed;

  const Rng base = Rng(seed).substream(kPhiTag);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int k = 2; k <= n - 2; ++k) {
    const Configuration tmpl = base_configuration(n, k);
    std::vector<double> values(samples, nan);
    auto errors = dispatch(samples, opt.workers, [&](int i) {
      Rng rng = base.substream(k, i);
      Configuration x = sample_stratified_configuration(rng, n, k, opt.min_separation);
      ExtractedBraid b = extract_braid_robust(f, x, tmpl, rng, opt.extraction);
      values[i] = qm.evaluate(b.word);
    });
    check_failures(k, samples, errors, opt);
    if (out.first_error.empty() && !errors.empty()) out.first_error = errors.begin()->second;
    out.strata.push_back(moments(k, stratum_volume(n, k), values, errors));
    if (opt.keep_samples) out.sample_values.push_back(std::move(values));
  }
  combine(out);
  return out;
}

std::vector<ParamorphismEstimate> phi_iterates_estimate(const Isotopy& f,
                                                        const Quasimorphism& qm, int n, int k_max,
                                                        int samples, std::uint64_t seed,
                                                        const EstimatorOptions& opt) {
  validate(n, samples, opt);
  if (k_max < 1) throw ConfigInvalidError("phi_iterates_estimate: k_max must be >= 1");

  std::vector<ParamorphismEstimate> out(k_max);
  for (ParamorphismEstimate& e : out) {
    e.n = n;
    e.samples_per_stratum = samples;
    e.qm_name = qm.name;
    e.seed = seed;
  }

  const Rng base = Rng(seed).substream(kPhiTag);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int k = 2; k <= n - 2; ++k) {
    const Configuration tmpl = base_configuration(n, k);
    std::vector<std::vector<double>> values(k_max, std::vector<double>(samples, nan));
    auto errors = dispatch(samples, opt.workers, [&](int i) {
      Rng rng = base.substream(k, i);
      Configuration x = sample_stratified_configuration(rng, n, k, opt.min_separation);
      auto fam = extract_braid_iterates_robust(f, x, tmpl, k_max, rng, opt.extraction);
      // Commit only after the whole family evaluates, so a failure drops
      // the sample from every power at once.
      std::vector<double> row(k_max);
      for (int j = 0; j < k_max; ++j) row[j] = qm.evaluate(fam[j].word);
      for (int j = 0; j < k_max; ++j) values[j][i] = row[j];
    });
    check_failures(k, samples, errors, opt);
    for (int j = 0; j < k_max; ++j) {
      if (out[j].first_error.empty() && !errors.empty()) {
        out[j].first_error = errors.begin()->second;
      }
      out[j].strata.push_back(moments(k, stratum_volume(n, k), values[j], errors));
      if (opt.keep_samples) out[j].sample_values.push_back(std::move(values[j]));
    }
  }
  for (ParamorphismEstimate& e : out) combine(e);
  return out;
}

}  // namespace pmorph
