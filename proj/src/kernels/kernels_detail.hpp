#pragma once

// Per-lane reference arithmetic shared by the scalar kernel and the SIMD
// tails. The SIMD bodies mirror these exact operation sequences; any change
// here must be reflected there or the bit-equality tests will fail.

#include "pmorph/kernels/field_table.hpp"

#include <cmath>

namespace pmorph::kern::detail {

// Quintic smoothstep on [0,1], exact 0/1 at the ends.
inline double smooth5(double u) {
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

// Integral of smooth5 from 0 to u; smooth ramp area profile.
inline double smooth5_int(double u) {
  return u * u * u * u * (2.5 + u * (-3.0 + u));
}

inline double clamp01(double u) {
  double a = (u < 0.0) ? 0.0 : u;
  return (a > 1.0) ? 1.0 : a;
}

// Odd-polynomial arcsine, accurate to ~1e-13 for |z| <= 0.26 and monotone
// overestimating-toward-1 beyond, which the collar profile selection relies
// on (chi = 0 whenever the true latitude exceeds the collar width).
inline double asin_small(double z) {
  const double z2 = z * z;
  double s = 0.0097616095291940094;              // 12155/1245184
  s = s * z2 + 0.011551800896137381;             // 6435/557056
  s = s * z2 + 0.013964843750000000;             // 143/10240
  s = s * z2 + 0.017352764423076923;             // 231/13312
  s = s * z2 + 0.022372159090909091;             // 63/2816
  s = s * z2 + 0.030381944444444444;             // 35/1152
  s = s * z2 + 0.044642857142857144;             // 15/336
  s = s * z2 + 0.075;                            // 3/40
  s = s * z2 + 0.16666666666666666;              // 1/6
  s = s * z2 + 1.0;
  return z * s;
}

// Plateau cutoff profile chi(s): 1 on [0,1/3], quintic-eased trapezoid ramp,
// 0 for s >= 1. Accepts any s >= 0.
inline double chi_profile(double s) {
  const double wr = kChiRampWidth;
  const double h = kChiSlope;
  const double hw = h * wr;
  const double third = 1.0 / 3.0;

  double u1 = (s - third) * (1.0 / wr);
  double u2 = (1.0 - s) * (1.0 / wr);
  double chi_b = 1.0 - hw * smooth5_int(clamp01(u1));
  double chi_c = 1.0 - 0.5 * hw - h * (s - (third + wr));
  double chi_d = hw * smooth5_int(clamp01(u2));

  double r = (s < 1.0) ? chi_d : 0.0;
  r = (s < 1.0 - wr) ? chi_c : r;
  r = (s < third + wr) ? chi_b : r;
  r = (s < third) ? 1.0 : r;
  return r;
}

inline double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r = r * x;
  return r;
}

// Accumulates scale-free grad_H x p for one term into (vx, vy, vz).
inline void accumulate_term(const FieldTerm& t, double px, double py, double pz, double& vx,
                            double& vy, double& vz) {
  switch (t.kind) {
    case TermKind::height: {
      // grad H = c * a; X = c * (a x p)
      vx = vx + t.coeff * (t.ay * pz - t.az * py);
      vy = vy + t.coeff * (t.az * px - t.ax * pz);
      vz = vz + t.coeff * (t.ax * py - t.ay * px);
      break;
    }
    case TermKind::cap: {
      double u = px * t.ax + py * t.ay + pz * t.az;
      double w = clamp01((u - t.u_lo) * (1.0 / (t.u_hi - t.u_lo)));
      double g = t.coeff * smooth5(w);
      vx = vx + g * (t.ay * pz - t.az * py);
      vy = vy + g * (t.az * px - t.ax * pz);
      vz = vz + g * (t.ax * py - t.ay * px);
      break;
    }
    case TermKind::collar: {
      double lat = asin_small(pz);
      double s = ((lat < 0.0) ? -lat : lat) * (1.0 / t.delta);
      double g = t.coeff * chi_profile(s);
      vx = vx - g * py;
      vy = vy + g * px;
      break;
    }
    case TermKind::monomial: {
      // grad H = c * (ex x^(ex-1) y^ey z^ez, ...)
      double xe = ipow(px, t.ex), ye = ipow(py, t.ey), ze = ipow(pz, t.ez);
      double xm = (t.ex > 0) ? ipow(px, t.ex - 1) : 0.0;
      double ym = (t.ey > 0) ? ipow(py, t.ey - 1) : 0.0;
      double zm = (t.ez > 0) ? ipow(pz, t.ez - 1) : 0.0;
      double gx = t.coeff * static_cast<double>(t.ex) * xm * ye * ze;
      double gy = t.coeff * static_cast<double>(t.ey) * xe * ym * ze;
      double gz = t.coeff * static_cast<double>(t.ez) * xe * ye * zm;
      vx = vx + (gy * pz - gz * py);
      vy = vy + (gz * px - gx * pz);
      vz = vz + (gx * py - gy * px);
      break;
    }
  }
}

inline void field_one(const FieldTable& tab, double px, double py, double pz, double& vx,
                      double& vy, double& vz) {
  double ax = 0.0, ay = 0.0, az = 0.0;
  for (const FieldTerm& t : tab.terms) accumulate_term(t, px, py, pz, ax, ay, az);
  vx = tab.scale * ax;
  vy = tab.scale * ay;
  vz = tab.scale * az;
}

inline void midpoint_one(const FieldTable& tab, double& px, double& py, double& pz, int n_steps,
                         int fp_iters) {
  for (int s = 0; s < n_steps; ++s) {
    double qx = px, qy = py, qz = pz;
    for (int it = 0; it < fp_iters; ++it) {
      double mx = px + qx, my = py + qy, mz = pz + qz;
      double inv = 1.0 / std::sqrt(mx * mx + my * my + mz * mz);
      mx = mx * inv;
      my = my * inv;
      mz = mz * inv;
      double vx, vy, vz;
      field_one(tab, mx, my, mz, vx, vy, vz);
      qx = px + vx;
      qy = py + vy;
      qz = pz + vz;
    }
    double inv = 1.0 / std::sqrt(qx * qx + qy * qy + qz * qz);
    px = qx * inv;
    py = qy * inv;
    pz = qz * inv;
  }
}

}  // namespace pmorph::kern::detail
