#pragma once

// Geometry of the unit sphere: geodesics, hemispheres, area-uniform and
// stratified configuration sampling, stereographic projection, geodesic
// disks, and deterministic point templates used as closure base points.
//
// Areas are normalized so the whole sphere has measure 1 (hemisphere 1/2);
// lengths and speeds stay in radius-1 units.

#include "pmorph/errors.hpp"
#include "pmorph/rng.hpp"
#include "pmorph/vec3.hpp"

#include <vector>

namespace pmorph {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEquatorDeadZone = 1e-12;   // |z| below this: on the equator
inline constexpr double kAntipodalTol = 1e-9;       // geodesic undefined this close to pi
inline constexpr double kMinSeparationDefault = 1e-9;
inline constexpr int kSamplingMaxAttempts = 10000;

enum class Hemisphere { north, south, equator };

Hemisphere hemisphere_of(SpherePoint p);

// Minor arc between two non-antipodal points.
struct Geodesic {
  SpherePoint a, b;
  double angle = 0.0;  // arc length in radians
  Vec3 axis{0, 0, 1};  // unit rotation axis taking a toward b

  SpherePoint at(double s) const;  // s in [0,1], at(0)=a, at(1)=b
};

// Throws AntipodalPairError when the pair is within kAntipodalTol of antipodal.
Geodesic geodesic(SpherePoint a, SpherePoint b);

struct Configuration {
  std::vector<SpherePoint> points;
  int size() const { return static_cast<int>(points.size()); }
};

// Area-uniform iid points with pairwise angular separation >= min_separation
// and |z| outside the equator dead zone. Throws SamplingExhaustedError when a
// point cannot be placed within kSamplingMaxAttempts draws.
Configuration sample_configuration(Rng& rng, int n, double min_separation = kMinSeparationDefault);

// Same, conditioned on the stratum: the first k points lie in the open upper
// hemisphere, the remaining n-k in the open lower one.
Configuration sample_stratified_configuration(Rng& rng, int n, int k,
                                              double min_separation = kMinSeparationDefault);

// Probability that exactly k of n area-uniform points land in the upper
// hemisphere: binomial(n,k) / 2^n.
double stratum_volume(int n, int k);

// ----- stereographic projection -----

struct PlanarPoint {
  double x = 0.0, y = 0.0;
};

// Projection plane basis is chosen deterministically from the pole. For an
// equatorial pole, e1 is the +z axis, so the first planar coordinate has the
// sign of the source point's z: hemispheres map into half-planes.
struct ProjectionFrame {
  SpherePoint pole;
  Vec3 e1, e2;

  static ProjectionFrame from_pole(SpherePoint pole);

  // Throws NearPoleError within kAntipodalTol of the pole.
  PlanarPoint project(SpherePoint p) const;
  SpherePoint unproject(PlanarPoint q) const;
};

PlanarPoint stereographic_project(SpherePoint p, SpherePoint pole);

// Fixed default pole for planar braid words: on the equator, opposite the
// meridian where flow presets place their features.
SpherePoint default_projection_pole();

// ----- geodesic disks -----

struct Disk {
  SpherePoint center;
  double area = 0.0;  // normalized (sphere = 1)

  double cap_cos() const { return 1.0 - 2.0 * area; }  // cos of angular radius
  double radius() const;                                // angular radius
  bool contains(SpherePoint p) const;
};

// Deterministic low-discrepancy probe points covering a disk (sunflower
// layout), used for displacement certificates and area checks.
std::vector<SpherePoint> disk_probe_points(const Disk& d, int m);

// ----- closure base configurations -----

// Deterministic base configuration for braid closures in the stratum with k
// upper points: k template points in the upper hemisphere, n-k mirrored ones
// below, all at least 0.34 in |z|, away from the default projection pole.
Configuration base_configuration(int n, int k);

// Signed area of a geodesic polygon (normalized units), vertices in order.
double spherical_polygon_area(const std::vector<SpherePoint>& vertices);

}  // namespace pmorph
