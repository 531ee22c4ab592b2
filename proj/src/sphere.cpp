#include "pmorph/sphere.hpp"

#include <cmath>
#include <string>

namespace pmorph {

namespace {

constexpr double kGoldenAngle = 2.399963229728653;

// Rotate v by angle about unit axis (Rodrigues).
Vec3 rotate_about(Vec3 v, Vec3 axis, double angle) {
  double c = std::cos(angle), s = std::sin(angle);
  return c * v + s * cross(axis, v) + (1.0 - c) * dot(axis, v) * axis;
}

}  // namespace

Hemisphere hemisphere_of(SpherePoint p) {
  if (p.z > kEquatorDeadZone) return Hemisphere::north;
  if (p.z < -kEquatorDeadZone) return Hemisphere::south;
  return Hemisphere::equator;
}

SpherePoint Geodesic::at(double s) const {
  return unit(rotate_about(a.vec(), axis, s * angle));
}

Geodesic geodesic(SpherePoint a, SpherePoint b) {
  double ang = angle_between(a, b);
  if (ang > kPi - kAntipodalTol) {
    throw AntipodalPairError("geodesic: endpoints within tolerance of antipodal");
  }
  Vec3 c = cross(a.vec(), b.vec());
  Vec3 axis;
  if (norm(c) < 1e-15) {
    axis = {0, 0, 1};  // coincident points: arc is a point, axis arbitrary
  } else {
    axis = normalized(c);
  }
  return Geodesic{a, b, ang, axis};
}

namespace {

SpherePoint draw_point(Rng& rng, int hemi) {
  for (;;) {
    double z;
    if (hemi > 0) {
      z = rng.uniform();
    } else if (hemi < 0) {
      z = -rng.uniform();
    } else {
      z = rng.uniform(-1.0, 1.0);
    }
    if (std::abs(z) <= kEquatorDeadZone) continue;
    double phi = rng.uniform(0.0, 2.0 * kPi);
    double r = std::sqrt((1.0 - z) * (1.0 + z));
    return unit(r * std::cos(phi), r * std::sin(phi), z);
  }
}

Configuration sample_impl(Rng& rng, int n, double min_separation, const int* hemis) {
  Configuration cfg;
  cfg.points.reserve(n);
  for (int i = 0; i < n; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kSamplingMaxAttempts; ++attempt) {
      SpherePoint p = draw_point(rng, hemis ? hemis[i] : 0);
      bool ok = true;
      for (const SpherePoint& q : cfg.points) {
        if (angle_between(p, q) < min_separation) {
          ok = false;
          break;
        }
      }
      if (ok) {
        cfg.points.push_back(p);
        placed = true;
        break;
      }
    }
    if (!placed) {
      throw SamplingExhaustedError("sample_configuration: separation " +
                                   std::to_string(min_separation) + " unattainable for point " +
                                   std::to_string(i));
    }
  }
  return cfg;
}

}  // namespace

Configuration sample_configuration(Rng& rng, int n, double min_separation) {
  return sample_impl(rng, n, min_separation, nullptr);
}

Configuration sample_stratified_configuration(Rng& rng, int n, int k, double min_separation) {
  std::vector<int> hemis(n);
  for (int i = 0; i < n; ++i) hemis[i] = (i < k) ? 1 : -1;
  return sample_impl(rng, n, min_separation, hemis.data());
}

double stratum_volume(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 0; i < k; ++i) c = c * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return c * std::pow(0.5, n);
}

ProjectionFrame ProjectionFrame::from_pole(SpherePoint pole) {
  Vec3 p = pole.vec();
  Vec3 zhat{0, 0, 1};
  Vec3 e1;
  if (std::abs(p.z) < 1.0 - 1e-9) {
    e1 = normalized(zhat - dot(zhat, p) * p);
  } else {
    Vec3 xhat{1, 0, 0};
    e1 = normalized(xhat - dot(xhat, p) * p);
  }
  Vec3 e2 = cross(p, e1);
  return ProjectionFrame{pole, e1, e2};
}

PlanarPoint ProjectionFrame::project(SpherePoint p) const {
  double d = dot(p, pole);
  // 1 - cos(tol) ~ tol^2/2 is far below one ulp of 1.0, so test the gap
  // 1 - d (exact near 1) instead of comparing d against a threshold that
  // would round to 1.0.
  if (1.0 - d <= 0.5 * kAntipodalTol * kAntipodalTol) {
    throw NearPoleError("stereographic_project: point at the projection pole");
  }
  double inv = 1.0 / (1.0 - d);
  return PlanarPoint{dot(p.vec(), e1) * inv, dot(p.vec(), e2) * inv};
}

SpherePoint ProjectionFrame::unproject(PlanarPoint q) const {
  // Inverse of q = (p - <p,P>P) / (1 - <p,P>) in the (e1,e2) basis.
  double r2 = q.x * q.x + q.y * q.y;
  double denom = 1.0 + r2;
  double d = (r2 - 1.0) / denom;          // <p, P>
  double s = 1.0 - d;                      // 1 - <p,P> = 2/denom
  Vec3 v = (q.x * s) * e1 + (q.y * s) * e2 + d * pole.vec();
  return unit(v);
}

PlanarPoint stereographic_project(SpherePoint p, SpherePoint pole) {
  return ProjectionFrame::from_pole(pole).project(p);
}

SpherePoint default_projection_pole() { return unit(-1.0, 0.0, 0.0); }

double Disk::radius() const { return std::acos(cap_cos()); }

bool Disk::contains(SpherePoint p) const { return dot(p, center) >= cap_cos(); }

std::vector<SpherePoint> disk_probe_points(const Disk& d, int m) {
  Vec3 c = d.center.vec();
  Vec3 zhat{0, 0, 1};
  Vec3 u = (std::abs(dot(c, zhat)) < 1.0 - 1e-9) ? normalized(zhat - dot(zhat, c) * c)
                                                 : normalized(Vec3{1, 0, 0} - c.x * c);
  Vec3 v = cross(c, u);

  double cos_r = d.cap_cos();
  std::vector<SpherePoint> pts;
  pts.reserve(m);
  for (int i = 0; i < m; ++i) {
    double t = (i + 0.5) / m;                      // uniform in cap area
    double cz = 1.0 - t * (1.0 - cos_r);           // cos of polar offset
    double sz = std::sqrt((1.0 - cz) * (1.0 + cz));
    double phi = kGoldenAngle * i;
    Vec3 p = cz * c + sz * (std::cos(phi) * u + std::sin(phi) * v);
    pts.push_back(unit(p));
  }
  return pts;
}

Configuration base_configuration(int n, int k) {
  if (n < 1 || k < 0 || k > n) {
    throw ConfigInvalidError("base_configuration: invalid stratum");
  }
  auto cap_points = [](int m, bool north, double az_off) {
    std::vector<SpherePoint> pts;
    pts.reserve(m);
    for (int i = 0; i < m; ++i) {
      double z = (m == 1) ? 0.55 : 0.75 - 0.4 * static_cast<double>(i) / (m - 1);
      double psi = 0.5 + kGoldenAngle * i + az_off;
      double r = std::sqrt((1.0 - z) * (1.0 + z));
      double s = north ? 1.0 : -1.0;
      pts.push_back(unit(r * std::cos(psi), r * std::sin(psi), s * z));
    }
    return pts;
  };
  Configuration cfg;
  auto up = cap_points(k, true, 0.0);
  auto dn = cap_points(n - k, false, 0.37);
  cfg.points.insert(cfg.points.end(), up.begin(), up.end());
  cfg.points.insert(cfg.points.end(), dn.begin(), dn.end());
  return cfg;
}

double spherical_polygon_area(const std::vector<SpherePoint>& vertices) {
  // Fan of signed triangle solid angles from vertex 0 (van Oosterom &
  // Strackee), scaled to the normalized measure (sphere area 1).
  std::size_t m = vertices.size();
  if (m < 3) return 0.0;
  Vec3 a = vertices[0].vec();
  double total = 0.0;
  for (std::size_t i = 1; i + 1 < m; ++i) {
    Vec3 b = vertices[i].vec();
    Vec3 c = vertices[i + 1].vec();
    double num = dot(a, cross(b, c));
    double den = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
    total += 2.0 * std::atan2(num, den);
  }
  return total / (4.0 * kPi);
}

}  // namespace pmorph
