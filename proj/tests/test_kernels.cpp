#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <vector>

#include "pmorph/kernels/field_table.hpp"
#include "pmorph/rng.hpp"
#include "pmorph/vec3.hpp"

using namespace pmorph;
using namespace pmorph::kern;

namespace {

struct Batch {
  std::vector<double> x, y, z;
  std::size_t size() const { return x.size(); }
};

Batch random_batch(Rng& rng, std::size_t n) {
  Batch b;
  b.x.resize(n);
  b.y.resize(n);
  b.z.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Area-uniform unit vectors.
    double zc = rng.uniform(-1.0, 1.0);
    double ph = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
    double r = std::sqrt(std::max(0.0, 1.0 - zc * zc));
    b.x[i] = r * std::cos(ph);
    b.y[i] = r * std::sin(ph);
    b.z[i] = zc;
  }
  return b;
}

Vec3 random_axis(Rng& rng) {
  double zc = rng.uniform(-1.0, 1.0);
  double ph = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
  double r = std::sqrt(std::max(0.0, 1.0 - zc * zc));
  return Vec3{r * std::cos(ph), r * std::sin(ph), zc};
}

FieldTable random_table(Rng& rng, int terms) {
  FieldTable t;
  t.scale = rng.uniform(-0.05, 0.05);
  for (int i = 0; i < terms; ++i) {
    FieldTerm term;
    Vec3 ax = random_axis(rng);
    term.ax = ax.x;
    term.ay = ax.y;
    term.az = ax.z;
    term.coeff = rng.uniform(-2.0, 2.0);
    switch (static_cast<int>(rng.uniform_index(4))) {
      case 0:
        term.kind = TermKind::height;
        break;
      case 1:
        term.kind = TermKind::cap;
        term.u_lo = rng.uniform(-0.5, 0.4);
        term.u_hi = term.u_lo + rng.uniform(0.05, 0.5);
        break;
      case 2:
        term.kind = TermKind::collar;
        term.delta = rng.uniform(0.05, kCollarMaxHalfWidth);
        break;
      default:
        term.kind = TermKind::monomial;
        term.ex = static_cast<int>(rng.uniform_index(4));
        term.ey = static_cast<int>(rng.uniform_index(4));
        term.ez = static_cast<int>(rng.uniform_index(4));
        term.coeff = rng.uniform(-0.5, 0.5);
        break;
    }
    t.terms.push_back(term);
  }
  return t;
}

bool bits_equal(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  return a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("height, plateau cap, centered collar, and linear monomial fields are exact rotations") {
  const KernelOps& ops = scalar_kernels();
  double px = 0.6, py = -0.64, pz = std::sqrt(1.0 - 0.6 * 0.6 - 0.64 * 0.64);

  FieldTable t;
  t.scale = 2.0;
  FieldTerm height;
  height.kind = TermKind::height;
  height.ax = 0.0;
  height.ay = 0.0;
  height.az = 1.0;
  height.coeff = 0.7;
  t.terms = {height};
  double vx, vy, vz;
  ops.field_eval(t, &px, &py, &pz, 1, &vx, &vy, &vz);
  CHECK(vx == 2.0 * 0.7 * -py);
  CHECK(vy == 2.0 * 0.7 * px);
  CHECK(vz == 0.0);

  // Cap term on its rigid plateau: u = <p, center> above u_hi.
  FieldTerm cap;
  cap.kind = TermKind::cap;
  cap.ax = 0.0;
  cap.ay = 0.0;
  cap.az = 1.0;
  cap.coeff = -1.3;
  cap.u_lo = -0.2;
  cap.u_hi = 0.1;  // pz ~ 0.48 > u_hi
  t.terms = {cap};
  t.scale = 1.0;
  ops.field_eval(t, &px, &py, &pz, 1, &vx, &vy, &vz);
  CHECK(vx == doctest::Approx(-1.3 * -py).epsilon(1e-15));
  CHECK(vy == doctest::Approx(-1.3 * px).epsilon(1e-15));
  CHECK(vz == 0.0);

  // Collar at the equator: profile is exactly 1 on the plateau.
  FieldTerm collar;
  collar.kind = TermKind::collar;
  collar.coeff = 0.9;
  collar.delta = 0.2;
  t.terms = {collar};
  double qx = std::sqrt(0.5), qy = -std::sqrt(0.5), qz = 0.0;
  ops.field_eval(t, &qx, &qy, &qz, 1, &vx, &vy, &vz);
  CHECK(vx == 0.9 * -qy);
  CHECK(vy == 0.9 * qx);
  CHECK(vz == 0.0);

  // Monomial x: H = c x, field = c (xhat cross p).
  FieldTerm mono;
  mono.kind = TermKind::monomial;
  mono.coeff = 0.4;
  mono.ex = 1;
  t.terms = {mono};
  ops.field_eval(t, &px, &py, &pz, 1, &vx, &vy, &vz);
  CHECK(vx == doctest::Approx(0.0).epsilon(1e-16));
  CHECK(vy == doctest::Approx(0.4 * -pz).epsilon(1e-15));
  CHECK(vz == doctest::Approx(0.4 * py).epsilon(1e-15));
}

TEST_CASE("speed_eval equals the field norm") {
  Rng rng(11);
  FieldTable t = random_table(rng, 5);
  Batch b = random_batch(rng, 37);
  std::vector<double> vx(b.size()), vy(b.size()), vz(b.size()), sp(b.size());
  const KernelOps& ops = scalar_kernels();
  ops.field_eval(t, b.x.data(), b.y.data(), b.z.data(), b.size(), vx.data(), vy.data(), vz.data());
  ops.speed_eval(t, b.x.data(), b.y.data(), b.z.data(), b.size(), sp.data());
  for (std::size_t i = 0; i < b.size(); ++i) {
    CHECK(sp[i] == std::sqrt(vx[i] * vx[i] + vy[i] * vy[i] + vz[i] * vz[i]));
  }
}

TEST_CASE("midpoint advance of a uniform rotation is the Cayley rotation") {
  const KernelOps& ops = scalar_kernels();
  FieldTable t;
  FieldTerm height;
  height.kind = TermKind::height;
  height.az = 1.0;
  height.coeff = 1.0;
  t.terms = {height};
  const double dt = 0.02;
  t.scale = dt;  // step folded into scale
  double px = 1.0, py = 0.0, pz = 0.0;
  const int steps = 250;
  ops.midpoint_advance(t, &px, &py, &pz, 1, steps, 10);
  // One spherical midpoint step of p' = omega x p is an exact rotation:
  // the chord |q - p| equals |omega| dt, so the step angle is
  // 2 asin(|omega| dt / 2) (the normalized midpoint, unlike the planar
  // midpoint average, sits on the sphere).
  double theta = steps * 2.0 * std::asin(dt / 2.0);
  CHECK(px == doctest::Approx(std::cos(theta)).epsilon(1e-10));
  CHECK(py == doctest::Approx(std::sin(theta)).epsilon(1e-10));
  CHECK(std::abs(pz) < 1e-14);
  CHECK(px * px + py * py + pz * pz == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("midpoint advance stays on the sphere for rough fields") {
  Rng rng(17);
  const KernelOps& ops = scalar_kernels();
  for (int trial = 0; trial < 10; ++trial) {
    FieldTable t = random_table(rng, 6);
    t.scale = 0.05;
    Batch b = random_batch(rng, 33);
    ops.midpoint_advance(t, b.x.data(), b.y.data(), b.z.data(), b.size(), 40, 10);
    for (std::size_t i = 0; i < b.size(); ++i) {
      double r2 = b.x[i] * b.x[i] + b.y[i] * b.y[i] + b.z[i] * b.z[i];
      CHECK(r2 == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("fixed-tree sum is exact on pinned data and order-stable") {
  const KernelOps& ops = scalar_kernels();
  std::vector<double> xs = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0};
  CHECK(ops.sum(xs.data(), xs.size()) == 45.0);
  CHECK(ops.sum(xs.data(), 0) == 0.0);
  CHECK(ops.sum(xs.data(), 1) == 1.0);
  CHECK(ops.sum(xs.data(), 5) == 15.0);
}

TEST_CASE("scalar and avx2 kernels agree bit for bit") {
  if (!avx2_available()) {
    MESSAGE("avx2 variant not available on this host; skipping equivalence");
    return;
  }
  const KernelOps& sc = scalar_kernels();
  force_kernel("avx2");
  const KernelOps& vx = kernels();
  REQUIRE(std::strcmp(vx.name, "avx2") == 0);

  Rng rng(20260819);
  const std::size_t sizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 12, 16, 17, 31, 64, 257, 1000};
  for (int trial = 0; trial < 12; ++trial) {
    FieldTable t = random_table(rng, 1 + static_cast<int>(rng.uniform_index(7)));
    for (std::size_t n : sizes) {
      Batch b = random_batch(rng, n);
      CAPTURE(trial);
      CAPTURE(n);

      std::vector<double> ax(n), ay(n), az(n), bx(n), by(n), bz(n);
      sc.field_eval(t, b.x.data(), b.y.data(), b.z.data(), n, ax.data(), ay.data(), az.data());
      vx.field_eval(t, b.x.data(), b.y.data(), b.z.data(), n, bx.data(), by.data(), bz.data());
      REQUIRE(bits_equal(ax, bx));
      REQUIRE(bits_equal(ay, by));
      REQUIRE(bits_equal(az, bz));

      std::vector<double> s1(n), s2(n);
      sc.speed_eval(t, b.x.data(), b.y.data(), b.z.data(), n, s1.data());
      vx.speed_eval(t, b.x.data(), b.y.data(), b.z.data(), n, s2.data());
      REQUIRE(bits_equal(s1, s2));

      Batch c1 = b, c2 = b;
      FieldTable tt = t;
      tt.scale = 0.013;
      sc.midpoint_advance(tt, c1.x.data(), c1.y.data(), c1.z.data(), n, 25, 10);
      vx.midpoint_advance(tt, c2.x.data(), c2.y.data(), c2.z.data(), n, 25, 10);
      REQUIRE(bits_equal(c1.x, c2.x));
      REQUIRE(bits_equal(c1.y, c2.y));
      REQUIRE(bits_equal(c1.z, c2.z));

      if (n > 0) {
        double r1 = sc.sum(s1.data(), n);
        double r2 = vx.sum(s2.data(), n);
        REQUIRE(std::memcmp(&r1, &r2, sizeof(double)) == 0);
      }
    }
  }
  force_kernel(nullptr);
}

TEST_CASE("kernel forcing hook selects variants and rejects unknown names") {
  force_kernel("scalar");
  CHECK(std::strcmp(kernels().name, "scalar") == 0);
  CHECK_THROWS(force_kernel("sse9"));
  force_kernel(nullptr);
  if (avx2_available()) {
    CHECK(std::strcmp(kernels().name, "avx2") == 0);
  }
}
