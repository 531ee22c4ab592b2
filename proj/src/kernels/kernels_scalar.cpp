#include "kernels_detail.hpp"
#include "pmorph/kernels/field_table.hpp"

#include <cmath>

namespace pmorph::kern {

namespace {

void field_eval_scalar(const FieldTable& tab, const double* px, const double* py,
                       const double* pz, std::size_t n, double* vx, double* vy, double* vz) {
  for (std::size_t i = 0; i < n; ++i) {
    detail::field_one(tab, px[i], py[i], pz[i], vx[i], vy[i], vz[i]);
  }
}

void speed_eval_scalar(const FieldTable& tab, const double* px, const double* py,
                       const double* pz, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double vx, vy, vz;
    detail::field_one(tab, px[i], py[i], pz[i], vx, vy, vz);
    out[i] = std::sqrt(vx * vx + vy * vy + vz * vz);
  }
}

void midpoint_advance_scalar(const FieldTable& tab, double* px, double* py, double* pz,
                             std::size_t n, int n_steps, int fp_iters) {
  for (std::size_t i = 0; i < n; ++i) {
    detail::midpoint_one(tab, px[i], py[i], pz[i], n_steps, fp_iters);
  }
}

double sum_scalar(const double* x, std::size_t n) {
  double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
  std::size_t n4 = n - (n % 4);
  for (std::size_t i = 0; i < n4; i += 4) {
    a0 += x[i];
    a1 += x[i + 1];
    a2 += x[i + 2];
    a3 += x[i + 3];
  }
  double s = (a0 + a2) + (a1 + a3);
  for (std::size_t i = n4; i < n; ++i) s += x[i];
  return s;
}

}  // namespace

const KernelOps& scalar_kernels() {
  static const KernelOps ops = {field_eval_scalar, speed_eval_scalar, midpoint_advance_scalar,
                                sum_scalar, "scalar"};
  return ops;
}

}  // namespace pmorph::kern
