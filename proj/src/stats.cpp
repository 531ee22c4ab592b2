#include "pmorph/stats.hpp"

#include "pmorph/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pmorph {

LineFit wls_fit(const std::vector<double>& x, const std::vector<double>& y,
                const std::vector<double>& se, double se_floor) {
  const std::size_t n = x.size();
  if (y.size() != n || se.size() != n) {
    throw ConfigInvalidError("wls_fit: input vectors differ in length");
  }
  if (n < 2) throw ConfigInvalidError("wls_fit: need at least two points");
  if (!(se_floor > 0.0)) throw ConfigInvalidError("wls_fit: se_floor must be positive");

  double s = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i]) || !std::isfinite(se[i])) {
      throw NumericalFailureError("wls_fit: non-finite input at index " + std::to_string(i));
    }
    double w = 1.0 / (std::max(se[i], se_floor) * std::max(se[i], se_floor));
    s += w;
    sx += w * x[i];
    sy += w * y[i];
    sxx += w * x[i] * x[i];
    sxy += w * x[i] * y[i];
  }
  const double delta = s * sxx - sx * sx;
  if (!(delta > 0.0)) throw ConfigInvalidError("wls_fit: abscissae are degenerate");

  LineFit fit;
  fit.points = static_cast<int>(n);
  fit.slope = (s * sxy - sx * sy) / delta;
  fit.intercept = (sxx * sy - sx * sxy) / delta;
  fit.slope_se = std::sqrt(s / delta);
  fit.intercept_se = std::sqrt(sxx / delta);

  const double ybar = sy / s;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double w = 1.0 / (std::max(se[i], se_floor) * std::max(se[i], se_floor));
    double fitted = fit.intercept + fit.slope * x[i];
    ss_res += w * (y[i] - fitted) * (y[i] - fitted);
    ss_tot += w * (y[i] - ybar) * (y[i] - ybar);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

TrendTest kendall_trend(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (y.size() != n) throw ConfigInvalidError("kendall_trend: input vectors differ in length");
  if (n < 3) throw ConfigInvalidError("kendall_trend: need at least three points");

  long concordant_minus_discordant = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double dx = x[j] - x[i];
      double dy = y[j] - y[i];
      double prod = dx * dy;
      if (prod > 0.0) ++concordant_minus_discordant;
      if (prod < 0.0) --concordant_minus_discordant;
    }
  }
  const double nn = static_cast<double>(n);
  TrendTest t;
  t.points = static_cast<int>(n);
  t.tau = static_cast<double>(concordant_minus_discordant) / (nn * (nn - 1.0) / 2.0);
  t.z = 3.0 * t.tau * std::sqrt(nn * (nn - 1.0)) / std::sqrt(2.0 * (2.0 * nn + 5.0));
  t.p_value = std::erfc(std::abs(t.z) / std::sqrt(2.0));
  return t;
}

double binomial_sigma(double n, double p) {
  if (!(n >= 0.0) || !(p >= 0.0) || !(p <= 1.0)) {
    throw ConfigInvalidError("binomial_sigma: need n >= 0 and p in [0, 1]");
  }
  return std::sqrt(n * p * (1.0 - p));
}

bool monotone_after_smoothing(const std::vector<double>& values, const std::vector<double>& se,
                              double z) {
  const std::size_t n = values.size();
  if (se.size() != n) {
    throw ConfigInvalidError("monotone_after_smoothing: input vectors differ in length");
  }
  if (n < 2) throw ConfigInvalidError("monotone_after_smoothing: need at least two points");
  if (!(z >= 0.0)) throw ConfigInvalidError("monotone_after_smoothing: z must be >= 0");

  for (std::size_t i = 0; i + 1 < n; ++i) {
    double step_sigma = std::sqrt(se[i] * se[i] + se[i + 1] * se[i + 1]);
    if (values[i + 1] < values[i] - z * step_sigma) return false;
  }
  double total_sigma = std::sqrt(se.front() * se.front() + se.back() * se.back());
  return values.back() - values.front() > z * total_sigma;
}

}  // namespace pmorph
