// AVX2 variant of the field kernels. Mirrors the per-lane operation sequences
// in kernels_detail.hpp exactly (same order, no FMA, IEEE sqrt/div), so
// results are bit-identical to the scalar reference; the equivalence suite
// enforces that. Compiled with -mavx2; only dispatched when the CPU has it.

#if defined(__x86_64__) || defined(__i386__)

#include "kernels_detail.hpp"
#include "pmorph/kernels/field_table.hpp"

#include <immintrin.h>

#include <cmath>

namespace pmorph::kern {

namespace {

inline __m256d clamp01_v(__m256d u) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d a = _mm256_blendv_pd(u, zero, _mm256_cmp_pd(u, zero, _CMP_LT_OQ));
  return _mm256_blendv_pd(a, one, _mm256_cmp_pd(a, one, _CMP_GT_OQ));
}

inline __m256d smooth5_v(__m256d u) {
  const __m256d c10 = _mm256_set1_pd(10.0);
  const __m256d cm15 = _mm256_set1_pd(-15.0);
  const __m256d c6 = _mm256_set1_pd(6.0);
  __m256d inner = _mm256_add_pd(c10, _mm256_mul_pd(u, _mm256_add_pd(cm15, _mm256_mul_pd(c6, u))));
  __m256d u3 = _mm256_mul_pd(_mm256_mul_pd(_mm256_mul_pd(u, u), u), inner);
  return u3;
}

inline __m256d smooth5_int_v(__m256d u) {
  const __m256d c25 = _mm256_set1_pd(2.5);
  const __m256d cm3 = _mm256_set1_pd(-3.0);
  __m256d inner = _mm256_add_pd(c25, _mm256_mul_pd(u, _mm256_add_pd(cm3, u)));
  __m256d u4 = _mm256_mul_pd(_mm256_mul_pd(_mm256_mul_pd(_mm256_mul_pd(u, u), u), u), inner);
  return u4;
}

inline __m256d asin_small_v(__m256d z) {
  const __m256d z2 = _mm256_mul_pd(z, z);
  __m256d s = _mm256_set1_pd(0.0097616095291940094);
  s = _mm256_add_pd(_mm256_mul_pd(s, z2), _mm256_set1_pd(0.011551800896137381));
  s = _mm256_add_pd(_mm256_mul_pd(s, z2), _mm256_set1_pd(0.013964843750000000));
  s = _mm256_add_pd(_mm256_mul_pd(s, z2), _mm256_set1_pd(0.017352764423076923));
  s = _mm256_add_pd(_mm256_mul_pd(s, z2), _mm256_set1_pd(0.022372159090909091));
  s = _mm256_add_pd(_mm256_mul_pd(s, z2), _mm256_set1_pd(0.030381944444444444));
  s = _mm256_add_pd(_mm256_mul_pd(s, z2), _mm256_set1_pd(0.044642857142857144));
  s = _mm256_add_pd(_mm256_mul_pd(s, z2), _mm256_set1_pd(0.075));
  s = _mm256_add_pd(_mm256_mul_pd(s, z2), _mm256_set1_pd(0.16666666666666666));
  s = _mm256_add_pd(_mm256_mul_pd(s, z2), _mm256_set1_pd(1.0));
  return _mm256_mul_pd(z, s);
}

inline __m256d chi_profile_v(__m256d s) {
  const double wr = kChiRampWidth;
  const double h = kChiSlope;
  const double hw = h * wr;
  const double third = 1.0 / 3.0;
  const __m256d one = _mm256_set1_pd(1.0);

  __m256d u1 = _mm256_mul_pd(_mm256_sub_pd(s, _mm256_set1_pd(third)), _mm256_set1_pd(1.0 / wr));
  __m256d u2 = _mm256_mul_pd(_mm256_sub_pd(one, s), _mm256_set1_pd(1.0 / wr));
  __m256d chi_b = _mm256_sub_pd(one, _mm256_mul_pd(_mm256_set1_pd(hw), smooth5_int_v(clamp01_v(u1))));
  __m256d chi_c = _mm256_sub_pd(
      _mm256_sub_pd(one, _mm256_set1_pd(0.5 * hw)),
      _mm256_mul_pd(_mm256_set1_pd(h), _mm256_sub_pd(s, _mm256_set1_pd(third + wr))));
  __m256d chi_d = _mm256_mul_pd(_mm256_set1_pd(hw), smooth5_int_v(clamp01_v(u2)));

  __m256d r = _mm256_blendv_pd(_mm256_setzero_pd(), chi_d, _mm256_cmp_pd(s, one, _CMP_LT_OQ));
  r = _mm256_blendv_pd(r, chi_c, _mm256_cmp_pd(s, _mm256_set1_pd(1.0 - wr), _CMP_LT_OQ));
  r = _mm256_blendv_pd(r, chi_b, _mm256_cmp_pd(s, _mm256_set1_pd(third + wr), _CMP_LT_OQ));
  r = _mm256_blendv_pd(r, one, _mm256_cmp_pd(s, _mm256_set1_pd(third), _CMP_LT_OQ));
  return r;
}

inline __m256d ipow_v(__m256d x, int e) {
  __m256d r = _mm256_set1_pd(1.0);
  for (int i = 0; i < e; ++i) r = _mm256_mul_pd(r, x);
  return r;
}

struct Acc {
  __m256d x, y, z;
};

inline void accumulate_term_v(const FieldTerm& t, __m256d px, __m256d py, __m256d pz, Acc& v) {
  switch (t.kind) {
    case TermKind::height: {
      __m256d ax = _mm256_set1_pd(t.ax), ay = _mm256_set1_pd(t.ay), az = _mm256_set1_pd(t.az);
      __m256d c = _mm256_set1_pd(t.coeff);
      v.x = _mm256_add_pd(v.x, _mm256_mul_pd(c, _mm256_sub_pd(_mm256_mul_pd(ay, pz), _mm256_mul_pd(az, py))));
      v.y = _mm256_add_pd(v.y, _mm256_mul_pd(c, _mm256_sub_pd(_mm256_mul_pd(az, px), _mm256_mul_pd(ax, pz))));
      v.z = _mm256_add_pd(v.z, _mm256_mul_pd(c, _mm256_sub_pd(_mm256_mul_pd(ax, py), _mm256_mul_pd(ay, px))));
      break;
    }
    case TermKind::cap: {
      __m256d ax = _mm256_set1_pd(t.ax), ay = _mm256_set1_pd(t.ay), az = _mm256_set1_pd(t.az);
      __m256d u = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(px, ax), _mm256_mul_pd(py, ay)),
                                _mm256_mul_pd(pz, az));
      __m256d w = clamp01_v(
          _mm256_mul_pd(_mm256_sub_pd(u, _mm256_set1_pd(t.u_lo)),
                        _mm256_set1_pd(1.0 / (t.u_hi - t.u_lo))));
      __m256d g = _mm256_mul_pd(_mm256_set1_pd(t.coeff), smooth5_v(w));
      v.x = _mm256_add_pd(v.x, _mm256_mul_pd(g, _mm256_sub_pd(_mm256_mul_pd(ay, pz), _mm256_mul_pd(az, py))));
      v.y = _mm256_add_pd(v.y, _mm256_mul_pd(g, _mm256_sub_pd(_mm256_mul_pd(az, px), _mm256_mul_pd(ax, pz))));
      v.z = _mm256_add_pd(v.z, _mm256_mul_pd(g, _mm256_sub_pd(_mm256_mul_pd(ax, py), _mm256_mul_pd(ay, px))));
      break;
    }
    case TermKind::collar: {
      __m256d lat = asin_small_v(pz);
      __m256d neg = _mm256_sub_pd(_mm256_setzero_pd(), lat);
      __m256d absl = _mm256_blendv_pd(lat, neg, _mm256_cmp_pd(lat, _mm256_setzero_pd(), _CMP_LT_OQ));
      __m256d s = _mm256_mul_pd(absl, _mm256_set1_pd(1.0 / t.delta));
      __m256d g = _mm256_mul_pd(_mm256_set1_pd(t.coeff), chi_profile_v(s));
      v.x = _mm256_sub_pd(v.x, _mm256_mul_pd(g, py));
      v.y = _mm256_add_pd(v.y, _mm256_mul_pd(g, px));
      break;
    }
    case TermKind::monomial: {
      __m256d xe = ipow_v(px, t.ex), ye = ipow_v(py, t.ey), ze = ipow_v(pz, t.ez);
      __m256d zero = _mm256_setzero_pd();
      __m256d xm = (t.ex > 0) ? ipow_v(px, t.ex - 1) : zero;
      __m256d ym = (t.ey > 0) ? ipow_v(py, t.ey - 1) : zero;
      __m256d zm = (t.ez > 0) ? ipow_v(pz, t.ez - 1) : zero;
      __m256d cex = _mm256_set1_pd(t.coeff * static_cast<double>(t.ex));
      __m256d cey = _mm256_set1_pd(t.coeff * static_cast<double>(t.ey));
      __m256d cez = _mm256_set1_pd(t.coeff * static_cast<double>(t.ez));
      __m256d gx = _mm256_mul_pd(_mm256_mul_pd(_mm256_mul_pd(cex, xm), ye), ze);
      __m256d gy = _mm256_mul_pd(_mm256_mul_pd(_mm256_mul_pd(cey, xe), ym), ze);
      __m256d gz = _mm256_mul_pd(_mm256_mul_pd(_mm256_mul_pd(cez, xe), ye), zm);
      v.x = _mm256_add_pd(v.x, _mm256_sub_pd(_mm256_mul_pd(gy, pz), _mm256_mul_pd(gz, py)));
      v.y = _mm256_add_pd(v.y, _mm256_sub_pd(_mm256_mul_pd(gz, px), _mm256_mul_pd(gx, pz)));
      v.z = _mm256_add_pd(v.z, _mm256_sub_pd(_mm256_mul_pd(gx, py), _mm256_mul_pd(gy, px)));
      break;
    }
  }
}

inline void field_block(const FieldTable& tab, __m256d px, __m256d py, __m256d pz, Acc& out) {
  Acc a{_mm256_setzero_pd(), _mm256_setzero_pd(), _mm256_setzero_pd()};
  for (const FieldTerm& t : tab.terms) accumulate_term_v(t, px, py, pz, a);
  __m256d sc = _mm256_set1_pd(tab.scale);
  out.x = _mm256_mul_pd(sc, a.x);
  out.y = _mm256_mul_pd(sc, a.y);
  out.z = _mm256_mul_pd(sc, a.z);
}

void field_eval_avx2(const FieldTable& tab, const double* px, const double* py, const double* pz,
                     std::size_t n, double* vx, double* vy, double* vz) {
  std::size_t n4 = n - (n % 4);
  for (std::size_t i = 0; i < n4; i += 4) {
    Acc v;
    field_block(tab, _mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i), _mm256_loadu_pd(pz + i), v);
    _mm256_storeu_pd(vx + i, v.x);
    _mm256_storeu_pd(vy + i, v.y);
    _mm256_storeu_pd(vz + i, v.z);
  }
  for (std::size_t i = n4; i < n; ++i) {
    detail::field_one(tab, px[i], py[i], pz[i], vx[i], vy[i], vz[i]);
  }
}

void speed_eval_avx2(const FieldTable& tab, const double* px, const double* py, const double* pz,
                     std::size_t n, double* out) {
  std::size_t n4 = n - (n % 4);
  for (std::size_t i = 0; i < n4; i += 4) {
    Acc v;
    field_block(tab, _mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i), _mm256_loadu_pd(pz + i), v);
    __m256d s2 = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(v.x, v.x), _mm256_mul_pd(v.y, v.y)),
                               _mm256_mul_pd(v.z, v.z));
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(s2));
  }
  for (std::size_t i = n4; i < n; ++i) {
    double vx, vy, vz;
    detail::field_one(tab, px[i], py[i], pz[i], vx, vy, vz);
    out[i] = std::sqrt(vx * vx + vy * vy + vz * vz);
  }
}

void midpoint_advance_avx2(const FieldTable& tab, double* px, double* py, double* pz,
                           std::size_t n, int n_steps, int fp_iters) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t n4 = n - (n % 4);
  for (std::size_t i = 0; i < n4; i += 4) {
    __m256d Px = _mm256_loadu_pd(px + i);
    __m256d Py = _mm256_loadu_pd(py + i);
    __m256d Pz = _mm256_loadu_pd(pz + i);
    for (int s = 0; s < n_steps; ++s) {
      __m256d qx = Px, qy = Py, qz = Pz;
      for (int it = 0; it < fp_iters; ++it) {
        __m256d mx = _mm256_add_pd(Px, qx);
        __m256d my = _mm256_add_pd(Py, qy);
        __m256d mz = _mm256_add_pd(Pz, qz);
        __m256d nrm2 = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(mx, mx), _mm256_mul_pd(my, my)),
                                     _mm256_mul_pd(mz, mz));
        __m256d inv = _mm256_div_pd(one, _mm256_sqrt_pd(nrm2));
        mx = _mm256_mul_pd(mx, inv);
        my = _mm256_mul_pd(my, inv);
        mz = _mm256_mul_pd(mz, inv);
        Acc v;
        field_block(tab, mx, my, mz, v);
        qx = _mm256_add_pd(Px, v.x);
        qy = _mm256_add_pd(Py, v.y);
        qz = _mm256_add_pd(Pz, v.z);
      }
      __m256d nrm2 = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(qx, qx), _mm256_mul_pd(qy, qy)),
                                   _mm256_mul_pd(qz, qz));
      __m256d inv = _mm256_div_pd(one, _mm256_sqrt_pd(nrm2));
      Px = _mm256_mul_pd(qx, inv);
      Py = _mm256_mul_pd(qy, inv);
      Pz = _mm256_mul_pd(qz, inv);
    }
    _mm256_storeu_pd(px + i, Px);
    _mm256_storeu_pd(py + i, Py);
    _mm256_storeu_pd(pz + i, Pz);
  }
  for (std::size_t i = n4; i < n; ++i) {
    detail::midpoint_one(tab, px[i], py[i], pz[i], n_steps, fp_iters);
  }
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t n4 = n - (n % 4);
  for (std::size_t i = 0; i < n4; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  }
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  __m128d s2 = _mm_add_pd(lo, hi);  // (a0+a2, a1+a3)
  double s = _mm_cvtsd_f64(s2) + _mm_cvtsd_f64(_mm_unpackhi_pd(s2, s2));
  for (std::size_t i = n4; i < n; ++i) s += x[i];
  return s;
}

}  // namespace

const KernelOps& avx2_kernels() {
  static const KernelOps ops = {field_eval_avx2, speed_eval_avx2, midpoint_advance_avx2, sum_avx2,
                                "avx2"};
  return ops;
}

}  // namespace pmorph::kern

#endif  // x86
