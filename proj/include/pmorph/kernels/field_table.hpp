#pragma once

// Flattened, kernel-ready description of a Hamiltonian vector field on the
// unit sphere. Higher-level flow types compile down to this table; the scalar
// and SIMD kernels consume it without knowing anything about flows.
//
// Every term contributes grad_H x p to the velocity:
//   height:   H = c * <p, axis>
//   cap:      H = c * g(<p, center>), g' a quintic ramp from 0 (u <= u_lo)
//             to 1 (u >= u_hi); the cap u >= u_hi rotates rigidly at speed c
//   collar:   H' (z) = amp * chi(|asin z| / delta), a band around the equator
//             rotating at angular speed amp * chi; chi is the plateau cutoff
//             profile (1 on [0,1/3], supported in [0,1), |chi'| <= 2)
//   monomial: H = c * x^ex * y^ey * z^ez

#include <cstddef>
#include <cstdint>
#include <vector>

namespace pmorph::kern {

enum class TermKind : std::uint8_t { height, cap, collar, monomial };

struct FieldTerm {
  TermKind kind = TermKind::height;
  // height/cap: unit axis or cap center.
  double ax = 0.0, ay = 0.0, az = 1.0;
  double coeff = 0.0;
  // cap: ramp window in u = <p, center>.
  double u_lo = 0.0, u_hi = 1.0;
  // collar: half width.
  double delta = 0.1;
  // monomial exponents.
  int ex = 0, ey = 0, ez = 0;
};

struct FieldTable {
  std::vector<FieldTerm> terms;
  // Uniform multiplier applied to the summed field (time profile value,
  // orientation sign, step size are folded in here by the caller).
  double scale = 1.0;
};

// Cutoff profile constants. The profile is 1 on [0, 1/3], falls along a
// quintic-eased trapezoid ramp, and vanishes for s >= 1. Peak slope is
// kChiSlope = 1/(2/3 - kChiRampWidth) < 2.
inline constexpr double kChiRampWidth = 0.125;
inline constexpr double kChiSlope = 24.0 / 13.0;
inline constexpr double kCollarMaxHalfWidth = 0.25;

struct KernelOps {
  // v = scale * sum_terms grad_H(p) x p, elementwise over the batch (SoA).
  void (*field_eval)(const FieldTable&, const double* px, const double* py, const double* pz,
                     std::size_t n, double* vx, double* vy, double* vz);
  // |v| per point.
  void (*speed_eval)(const FieldTable&, const double* px, const double* py, const double* pz,
                     std::size_t n, double* out);
  // n_steps of the spherical midpoint rule with a fixed iteration count.
  // table.scale must already include the time step and any time profile
  // (constant over the call); points are renormalized every step.
  void (*midpoint_advance)(const FieldTable&, double* px, double* py, double* pz, std::size_t n,
                           int n_steps, int fp_iters);
  // Fixed-tree sum: four interleaved accumulators, combined (a0+a2)+(a1+a3),
  // tail appended sequentially. Identical result in both variants.
  double (*sum)(const double* x, std::size_t n);
  const char* name;
};

// Selected-at-first-use kernel set. Honors PMORPH_KERNEL=scalar|avx2 in the
// environment; otherwise picks the widest variant the CPU supports.
const KernelOps& kernels();

// Test hook: force a variant by name ("scalar", "avx2"); nullptr re-selects
// automatically. Throws std::runtime_error for unknown/unsupported names.
void force_kernel(const char* name);

// True if the avx2 variant is compiled in and the CPU supports it.
bool avx2_available();

const KernelOps& scalar_kernels();

}  // namespace pmorph::kern
