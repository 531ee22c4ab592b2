#pragma once

// Small statistics kit for the experiment reports: weighted least squares
// lines through Monte Carlo estimates, a Kendall rank trend test with a
// normal-approximation p-value, and tolerance-aware monotonicity of noisy
// series. Everything is deterministic and runs in a single pass over the
// input vectors.

#include <vector>

namespace pmorph {

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double intercept_se = 0.0;
  double slope_se = 0.0;
  double r2 = 0.0;  // weighted coefficient of determination
  int points = 0;
};

// Weighted least squares line y = intercept + slope * x with weights
// 1 / max(se_i, se_floor)^2, so exact points (se 0) still carry finite
// weight. Requires at least two points, equal-sized inputs, and x values
// that are not all identical.
LineFit wls_fit(const std::vector<double>& x, const std::vector<double>& y,
                const std::vector<double>& se, double se_floor = 1e-9);

struct TrendTest {
  double tau = 0.0;      // Kendall rank correlation, ties count zero
  double z = 0.0;        // normal approximation score
  double p_value = 1.0;  // two-sided
  int points = 0;
};

// Rank correlation trend of y against x with the large-sample normal
// approximation for the null distribution. Requires at least three points.
TrendTest kendall_trend(const std::vector<double>& x, const std::vector<double>& y);

// Standard deviation of a Binomial(n, p) count.
double binomial_sigma(double n, double p);

// True when the series rises monotonically once measurement noise is
// allowed for: no step falls by more than z times its own standard error
// sqrt(se_i^2 + se_{i+1}^2), and the net change from first to last exceeds
// z times the endpoint standard error. Requires at least two points.
bool monotone_after_smoothing(const std::vector<double>& values, const std::vector<double>& se,
                              double z);

}  // namespace pmorph
