#pragma once

// Small fixed-size linear algebra for points on the unit sphere and tangent
// vectors in the ambient space. Kept header-only: these ops inline into the
// scalar kernels and must cost nothing.

#include <cmath>

namespace pmorph {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
constexpr Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
constexpr Vec3 operator*(Vec3 a, double s) { return s * a; }
constexpr Vec3 operator/(Vec3 a, double s) { return {a.x / s, a.y / s, a.z / s}; }

constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

inline Vec3 normalized(Vec3 a) {
  double n = norm(a);
  return {a.x / n, a.y / n, a.z / n};
}

// A point constrained to the unit sphere. Construct through unit() so the
// |p| = 1 invariant holds to rounding after every construction.
struct SpherePoint {
  double x = 0.0;
  double y = 0.0;
  double z = 1.0;

  constexpr Vec3 vec() const { return {x, y, z}; }
};

inline SpherePoint unit(Vec3 v) {
  Vec3 n = normalized(v);
  return {n.x, n.y, n.z};
}

inline SpherePoint unit(double x, double y, double z) { return unit(Vec3{x, y, z}); }

constexpr double dot(SpherePoint a, SpherePoint b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr double dot(SpherePoint a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr double dot(Vec3 a, SpherePoint b) { return dot(b, a); }

// Geodesic (angular) distance, robust near 0 and pi.
inline double angle_between(SpherePoint a, SpherePoint b) {
  Vec3 c = cross(a.vec(), b.vec());
  return std::atan2(norm(c), dot(a, b));
}

inline SpherePoint antipode(SpherePoint p) { return {-p.x, -p.y, -p.z}; }

}  // namespace pmorph
