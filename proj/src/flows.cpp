#include "pmorph/flows.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pmorph {

namespace {

constexpr int kMinStepsPerSegment = 16;
constexpr int kFixedPointIters = 10;
constexpr double kTrajectoryRes = 0.03;  // max angular motion per step
constexpr double kMaxStepLimit = 0.5;

// Orientation of the half-twist realizing a positive generator under the
// default projection frame (pole on the equator, e1 = +z). Pinned by the
// round-trip test: extracting the eggbeater flow for a word returns the word.
constexpr double kTwistOrient = -1.0;

double cap_profile_integral(double u, double u_lo, double u_hi) {
  // g with g' = smooth5((u - u_lo)/(u_hi - u_lo)) clamped; g(u_lo) = 0.
  double w = u_hi - u_lo;
  if (u <= u_lo) return 0.0;
  if (u >= u_hi) return 0.5 * w + (u - u_hi);
  double s = (u - u_lo) / w;
  double s4 = s * s * s * s;
  return w * s4 * (2.5 + s * (-3.0 + s));
}

double chi_scalar(double s) {
  const double wr = kern::kChiRampWidth;
  const double h = kern::kChiSlope;
  const double hw = h * wr;
  const double third = 1.0 / 3.0;
  if (s < third) return 1.0;
  if (s < third + wr) {
    double u = (s - third) / wr;
    double u4 = u * u * u * u;
    return 1.0 - hw * (u4 * (2.5 + u * (-3.0 + u)));
  }
  if (s < 1.0 - wr) return 1.0 - 0.5 * hw - h * (s - third - wr);
  if (s < 1.0) {
    double u = (1.0 - s) / wr;
    double u4 = u * u * u * u;
    return hw * (u4 * (2.5 + u * (-3.0 + u)));
  }
  return 0.0;
}

}  // namespace

// ----- TimeProfile -----

double TimeProfile::value(double t) const {
  double v = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) v = v * t + coeffs[i];
  return v;
}

bool TimeProfile::is_constant() const {
  for (std::size_t i = 1; i < coeffs.size(); ++i) {
    if (coeffs[i] != 0.0) return false;
  }
  return true;
}

double TimeProfile::max_abs() const {
  double s = 0.0;
  for (double c : coeffs) s += std::abs(c);
  return s;
}

double TimeProfile::abs_integral() const {
  if (is_constant()) return std::abs(coeffs.empty() ? 0.0 : coeffs[0]);
  const int n = 2048;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += std::abs(value((i + 0.5) / n));
  return acc / n;
}

// ----- Hamiltonian -----

void Hamiltonian::add_height(Vec3 axis, double coeff) {
  Vec3 a = normalized(axis);
  kern::FieldTerm t;
  t.kind = kern::TermKind::height;
  t.ax = a.x;
  t.ay = a.y;
  t.az = a.z;
  t.coeff = coeff;
  table_.terms.push_back(t);
}

void Hamiltonian::add_cap_twist(SpherePoint center, double core_radius, double support_radius,
                                double coeff) {
  if (!(core_radius > 0.0) || !(support_radius > core_radius) || support_radius >= kPi) {
    throw LayoutInfeasibleError("cap twist: need 0 < core < support < pi");
  }
  kern::FieldTerm t;
  t.kind = kern::TermKind::cap;
  t.ax = center.x;
  t.ay = center.y;
  t.az = center.z;
  t.coeff = coeff;
  t.u_hi = std::cos(core_radius);
  t.u_lo = std::cos(support_radius);
  table_.terms.push_back(t);
}

void Hamiltonian::add_collar(double amplitude, double half_width) {
  if (!(half_width > 0.0) || half_width > kern::kCollarMaxHalfWidth) {
    throw CollarTooWideError("collar: half width must lie in (0, " +
                             std::to_string(kern::kCollarMaxHalfWidth) + "]");
  }
  kern::FieldTerm t;
  t.kind = kern::TermKind::collar;
  t.coeff = amplitude;
  t.delta = half_width;
  table_.terms.push_back(t);
}

void Hamiltonian::add_monomial(double coeff, int ex, int ey, int ez) {
  if (ex < 0 || ey < 0 || ez < 0 || ex + ey + ez < 1 || ex + ey + ez > 8) {
    throw ConfigInvalidError("monomial term: exponents out of range");
  }
  kern::FieldTerm t;
  t.kind = kern::TermKind::monomial;
  t.coeff = coeff;
  t.ex = ex;
  t.ey = ey;
  t.ez = ez;
  table_.terms.push_back(t);
}

double Hamiltonian::value(double t, SpherePoint p) const {
  double h = 0.0;
  for (const kern::FieldTerm& term : table_.terms) {
    switch (term.kind) {
      case kern::TermKind::height:
        h += term.coeff * (p.x * term.ax + p.y * term.ay + p.z * term.az);
        break;
      case kern::TermKind::cap: {
        double u = p.x * term.ax + p.y * term.ay + p.z * term.az;
        h += term.coeff * cap_profile_integral(u, term.u_lo, term.u_hi);
        break;
      }
      case kern::TermKind::collar: {
        // integral of amp * chi(|asin z|/delta) dz from 0 to p.z
        double zc = std::clamp(p.z, -0.999, 0.999);
        double hi = std::min(std::abs(zc), std::sin(term.delta) * 1.0001);
        const int n = 256;
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
          double zz = hi * (i + 0.5) / n;
          acc += chi_scalar(std::asin(zz) / term.delta);
        }
        h += term.coeff * (zc < 0 ? -1.0 : 1.0) * acc * hi / n;
        break;
      }
      case kern::TermKind::monomial: {
        double v = term.coeff;
        for (int i = 0; i < term.ex; ++i) v *= p.x;
        for (int i = 0; i < term.ey; ++i) v *= p.y;
        for (int i = 0; i < term.ez; ++i) v *= p.z;
        h += v;
        break;
      }
    }
  }
  return profile.value(t) * h;
}

Vec3 Hamiltonian::field(double t, SpherePoint p) const {
  kern::FieldTable tab = table_;
  tab.scale = profile.value(t);
  double vx, vy, vz;
  double px = p.x, py = p.y, pz = p.z;
  kern::kernels().field_eval(tab, &px, &py, &pz, 1, &vx, &vy, &vz);
  return {vx, vy, vz};
}

double Hamiltonian::speed_bound() const {
  double s = 0.0;
  for (const kern::FieldTerm& t : table_.terms) {
    switch (t.kind) {
      case kern::TermKind::height:
      case kern::TermKind::cap:
      case kern::TermKind::collar:
        s += std::abs(t.coeff);
        break;
      case kern::TermKind::monomial:
        s += std::abs(t.coeff) * static_cast<double>(t.ex + t.ey + t.ez) * 1.7320508075688772;
        break;
    }
  }
  return s * profile.max_abs();
}

double Hamiltonian::feature_scale() const {
  double f = 10.0;
  for (const kern::FieldTerm& t : table_.terms) {
    switch (t.kind) {
      case kern::TermKind::height:
        break;
      case kern::TermKind::cap:
        f = std::min(f, std::acos(t.u_lo) - std::acos(t.u_hi));  // annulus width
        break;
      case kern::TermKind::collar:
        // The sharpest feature is the cutoff ramp, not the full half width.
        f = std::min(f, t.delta * kern::kChiRampWidth);
        break;
      case kern::TermKind::monomial:
        f = std::min(f, 1.0 / static_cast<double>(std::max(1, t.ex + t.ey + t.ez)));
        break;
    }
  }
  return f;
}

// ----- Isotopy -----

double Isotopy::total_duration() const {
  double d = 0.0;
  for (const FlowSegment& s : segments) d += s.duration;
  return d;
}

Isotopy compose(const Isotopy& g, const Isotopy& f) {
  Isotopy out;
  out.max_step = std::min(g.max_step, f.max_step);
  out.segments = f.segments;
  out.segments.insert(out.segments.end(), g.segments.begin(), g.segments.end());
  return out;
}

Isotopy inverse(const Isotopy& f) {
  Isotopy out;
  out.max_step = f.max_step;
  out.segments.assign(f.segments.rbegin(), f.segments.rend());
  for (FlowSegment& s : out.segments) s.direction = -s.direction;
  return out;
}

Isotopy iterate(const Isotopy& f, int k) {
  if (k < 0) throw ConfigInvalidError("iterate: negative count");
  Isotopy out;
  out.max_step = f.max_step;
  out.segments.reserve(f.segments.size() * k);
  for (int i = 0; i < k; ++i) {
    out.segments.insert(out.segments.end(), f.segments.begin(), f.segments.end());
  }
  return out;
}

// ----- integration -----

namespace {

int steps_for_segment(const FlowSegment& seg, double max_step) {
  double dur = seg.duration;
  double sp = seg.h.speed_bound();
  double feat = seg.h.feature_scale();
  double n = static_cast<double>(kMinStepsPerSegment);
  n = std::max(n, std::ceil(dur / max_step));
  n = std::max(n, std::ceil(dur * sp / kTrajectoryRes));
  n = std::max(n, std::ceil(2.5 * dur * sp / feat));
  return static_cast<int>(std::min(n, 2.0e5));
}

void check_step(const Isotopy& iso) {
  if (!(iso.max_step > 0.0) || iso.max_step > kMaxStepLimit) {
    throw StepSizeInvalidError("integrate: max_step must lie in (0, " +
                               std::to_string(kMaxStepLimit) + "]");
  }
}

struct Soa {
  std::vector<double> x, y, z;

  explicit Soa(const std::vector<SpherePoint>& pts) {
    x.reserve(pts.size());
    y.reserve(pts.size());
    z.reserve(pts.size());
    for (const SpherePoint& p : pts) {
      x.push_back(p.x);
      y.push_back(p.y);
      z.push_back(p.z);
    }
  }
  std::size_t size() const { return x.size(); }
  SpherePoint point(std::size_t i) const { return unit(x[i], y[i], z[i]); }
};

template <typename PerStep>
void run_segments(const Isotopy& iso, Soa& pts, PerStep&& per_step) {
  double t_base = 0.0;
  for (const FlowSegment& seg : iso.segments) {
    int n = steps_for_segment(seg, iso.max_step);
    double dt = seg.duration / n;
    kern::FieldTable tab = seg.h.table();
    bool constant = seg.h.profile.is_constant();
    if (constant) {
      tab.scale = seg.direction * seg.h.profile.value(0.0) * dt;
    }
    for (int s = 0; s < n; ++s) {
      if (!constant) {
        double local = (s + 0.5) / n;
        double arg = seg.direction > 0 ? local : 1.0 - local;
        tab.scale = seg.direction * seg.h.profile.value(arg) * dt;
      }
      kern::kernels().midpoint_advance(tab, pts.x.data(), pts.y.data(), pts.z.data(), pts.size(),
                                       1, kFixedPointIters);
      per_step(t_base + (s + 1) * dt);
    }
    t_base += seg.duration;
  }
}

}  // namespace

std::vector<Trajectory> integrate_batch(const Isotopy& iso,
                                        const std::vector<SpherePoint>& starts) {
  check_step(iso);
  Soa pts(starts);
  std::vector<Trajectory> trajs(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    trajs[i].times.push_back(0.0);
    trajs[i].points.push_back(starts[i]);
  }
  run_segments(iso, pts, [&](double t) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      trajs[i].times.push_back(t);
      trajs[i].points.push_back(pts.point(i));
    }
  });
  if (iso.segments.empty()) {
    for (std::size_t i = 0; i < starts.size(); ++i) {
      trajs[i].times.push_back(1.0);
      trajs[i].points.push_back(starts[i]);
    }
  }
  return trajs;
}

Trajectory integrate(const Isotopy& iso, SpherePoint start) {
  return integrate_batch(iso, {start})[0];
}

std::vector<SpherePoint> time1_map_batch(const Isotopy& iso, std::vector<SpherePoint> starts) {
  check_step(iso);
  Soa pts(starts);
  for (const FlowSegment& seg : iso.segments) {
    int n = steps_for_segment(seg, iso.max_step);
    double dt = seg.duration / n;
    kern::FieldTable tab = seg.h.table();
    if (seg.h.profile.is_constant()) {
      tab.scale = seg.direction * seg.h.profile.value(0.0) * dt;
      kern::kernels().midpoint_advance(tab, pts.x.data(), pts.y.data(), pts.z.data(), pts.size(),
                                       n, kFixedPointIters);
    } else {
      for (int s = 0; s < n; ++s) {
        double local = (s + 0.5) / n;
        double arg = seg.direction > 0 ? local : 1.0 - local;
        tab.scale = seg.direction * seg.h.profile.value(arg) * dt;
        kern::kernels().midpoint_advance(tab, pts.x.data(), pts.y.data(), pts.z.data(),
                                         pts.size(), 1, kFixedPointIters);
      }
    }
  }
  std::vector<SpherePoint> out;
  out.reserve(starts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) out.push_back(pts.point(i));
  return out;
}

SpherePoint time1_map(const Isotopy& iso, SpherePoint start) {
  return time1_map_batch(iso, {start})[0];
}

Trajectory integrate_fixed(const Isotopy& iso, SpherePoint start, int steps_per_segment) {
  if (steps_per_segment < 1) throw StepSizeInvalidError("integrate_fixed: steps must be >= 1");
  Trajectory tr;
  tr.times.push_back(0.0);
  tr.points.push_back(start);
  double px = start.x, py = start.y, pz = start.z;
  double t_base = 0.0;
  for (const FlowSegment& seg : iso.segments) {
    int n = steps_per_segment;
    double dt = seg.duration / n;
    kern::FieldTable tab = seg.h.table();
    for (int s = 0; s < n; ++s) {
      double local = (s + 0.5) / n;
      double arg = seg.direction > 0 ? local : 1.0 - local;
      tab.scale = seg.direction * seg.h.profile.value(arg) * dt;
      kern::kernels().midpoint_advance(tab, &px, &py, &pz, 1, 1, kFixedPointIters);
      tr.times.push_back(t_base + (s + 1) * dt);
      tr.points.push_back(unit(px, py, pz));
    }
    t_base += seg.duration;
  }
  return tr;
}

// ----- length -----

namespace {

double grid_speed_integral(const Hamiltonian& h, int nz, int nphi) {
  // Midpoint product grid in (z, phi); the area element is exactly dz dphi.
  const double wz = 2.0 / nz;
  const double wphi = 2.0 * kPi / nphi;
  const double w = wz * wphi;
  kern::FieldTable tab = h.table();
  tab.scale = 1.0;

  const std::size_t chunk = 16384;
  std::vector<double> px(chunk), py(chunk), pz(chunk), sp(chunk);
  double total = 0.0;
  std::size_t fill = 0;
  auto flush = [&]() {
    if (fill == 0) return;
    kern::kernels().speed_eval(tab, px.data(), py.data(), pz.data(), fill, sp.data());
    total += kern::kernels().sum(sp.data(), fill);
    fill = 0;
  };
  for (int iz = 0; iz < nz; ++iz) {
    double z = -1.0 + (iz + 0.5) * wz;
    double r = std::sqrt(std::max(0.0, (1.0 - z) * (1.0 + z)));
    for (int ip = 0; ip < nphi; ++ip) {
      double phi = (ip + 0.5) * wphi;
      px[fill] = r * std::cos(phi);
      py[fill] = r * std::sin(phi);
      pz[fill] = z;
      if (++fill == chunk) flush();
    }
  }
  flush();
  return total * w;
}

}  // namespace

double lp_length(const Isotopy& iso, const QuadratureSpec& spec) {
  double feat = 10.0;
  for (const FlowSegment& s : iso.segments) feat = std::min(feat, s.h.feature_scale());
  int nz = spec.nz > 0 ? spec.nz : std::min(8192, std::max(128, static_cast<int>(std::ceil(8.0 / feat))));
  int nphi = spec.nphi > 0 ? spec.nphi
                           : std::max(256, std::min(1024, static_cast<int>(std::ceil(6.2832 / feat))));

  auto total_at = [&](int z, int p) {
    double L = 0.0;
    for (const FlowSegment& seg : iso.segments) {
      double tfactor = seg.h.profile.abs_integral() * seg.duration;
      if (tfactor == 0.0) continue;
      L += tfactor * grid_speed_integral(seg.h, z, p);
    }
    return L;
  };

  double coarse = total_at(nz, nphi);
  if (!spec.refine_check) return coarse;
  double fine = total_at(2 * nz, 2 * nphi);
  double denom = std::max(std::abs(fine), 1e-9);
  if (std::abs(fine - coarse) > 1e-3 * denom) {
    throw QuadratureTooCoarseError("lp_length: refinement moved the value by " +
                                   std::to_string(std::abs(fine - coarse) / denom) +
                                   " relative at nz=" + std::to_string(nz));
  }
  return fine;
}

// ----- presets -----

Isotopy identity_isotopy() {
  Isotopy iso;
  FlowSegment seg;
  seg.h.add_height({0, 0, 1}, 0.0);
  iso.segments.push_back(seg);
  return iso;
}

Isotopy rotation(Vec3 axis, double angle) {
  if (norm(axis) < 1e-12) throw ConfigInvalidError("rotation: zero axis");
  Isotopy iso;
  FlowSegment seg;
  seg.h.add_height(axis, angle);
  iso.segments.push_back(seg);
  return iso;
}

Isotopy cap_twist(SpherePoint center, double core_radius, double support_radius, double angle) {
  Isotopy iso;
  FlowSegment seg;
  seg.h.add_cap_twist(center, core_radius, support_radius, angle);
  iso.segments.push_back(seg);
  return iso;
}

EggbeaterSpec::EggbeaterSpec() : target(band_generator(4, 0, 2)) {}

namespace {

// South to north, so slot i sits at planar position i (left to right) under
// the default projection frame and generator indices of the target word line
// up with the sweep's letter indices.
constexpr std::array<double, 4> kSlotColatitudes = {kPi - 0.38, kPi - 1.12, 1.12, 0.38};

SpherePoint slot_center(int i) {
  double th = kSlotColatitudes[i];
  return unit(std::sin(th), 0.0, std::cos(th));
}

struct TwistLayout {
  SpherePoint center;
  double core, support;
};

TwistLayout twist_layout(int index, const std::vector<Disk>& disks) {
  // index is the 1-based generator index: twist exchanges slots index-1, index.
  int a = index - 1, b = index;
  SpherePoint La = disks[a].center, Lb = disks[b].center;
  double gap = angle_between(La, Lb);
  Geodesic g = geodesic(La, Lb);
  SpherePoint m = g.at(0.5);
  double core = 0.5 * gap + std::max(disks[a].radius(), disks[b].radius()) + 0.02;
  double clearance = kPi;
  for (int j = 0; j < 4; ++j) {
    if (j == a || j == b) continue;
    clearance = std::min(clearance, angle_between(m, disks[j].center) - disks[j].radius());
  }
  clearance = std::min(clearance, angle_between(m, default_projection_pole()) - 0.2);
  clearance -= 0.02;
  double avail = clearance - core;
  if (avail < 0.03) {
    throw LayoutInfeasibleError("eggbeater: twist " + std::to_string(index) +
                                " support collides with another slot");
  }
  double width = std::min(std::max(0.1, 0.3 * core), 0.9 * avail);
  return {m, core, core + width};
}

}  // namespace

std::vector<Disk> eggbeater_disks(const EggbeaterSpec& spec) {
  std::vector<Disk> disks;
  for (int i = 0; i < 4; ++i) {
    double a = spec.scale * spec.areas[i];
    if (!(a > 0.0)) throw LayoutInfeasibleError("eggbeater: disk areas must be positive");
    disks.push_back(Disk{slot_center(i), a});
  }
  double north = 0.0, south = 0.0;
  for (int i = 0; i < 4; ++i) {
    (kSlotColatitudes[i] < kPi / 2 ? north : south) += disks[i].area;
  }
  if (north >= 0.5 || south >= 0.5) {
    throw LayoutInfeasibleError("eggbeater: disk areas exceed the hemisphere budget");
  }
  for (int i = 0; i < 4; ++i) {
    double colat = kSlotColatitudes[i];
    double r = disks[i].radius();
    bool isnorth = colat < kPi / 2;
    if (isnorth && colat + r > kPi / 2 - 0.02) {
      throw LayoutInfeasibleError("eggbeater: north disk " + std::to_string(i + 1) +
                                  " reaches the equator");
    }
    if (!isnorth && colat - r < kPi / 2 + 0.02) {
      throw LayoutInfeasibleError("eggbeater: south disk " + std::to_string(i + 1) +
                                  " reaches the equator");
    }
    if (colat - r < 0.02 || colat + r > kPi - 0.02) {
      throw LayoutInfeasibleError("eggbeater: disk " + std::to_string(i + 1) + " reaches a pole");
    }
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (angle_between(disks[i].center, disks[j].center) <
          disks[i].radius() + disks[j].radius() + 0.02) {
        throw LayoutInfeasibleError("eggbeater: disks " + std::to_string(i + 1) + "," +
                                    std::to_string(j + 1) + " overlap");
      }
    }
  }
  return disks;
}

Isotopy eggbeater_family(const EggbeaterSpec& spec) {
  validate(spec.target);
  if (spec.target.strands != 4) {
    throw ConfigInvalidError("eggbeater: target word must be on 4 strands");
  }
  std::vector<Disk> disks = eggbeater_disks(spec);
  Isotopy iso;
  for (const BraidLetter& l : spec.target.letters) {
    TwistLayout lay = twist_layout(l.index, disks);
    FlowSegment seg;
    seg.h.add_cap_twist(lay.center, lay.core, lay.support, kTwistOrient * l.sign * kPi);
    iso.segments.push_back(seg);
  }
  if (iso.segments.empty()) return identity_isotopy();
  return iso;
}

Isotopy collar_cutoff_isotopy(double angle, double half_width) {
  Isotopy iso;
  FlowSegment seg;
  seg.h.add_collar(angle, half_width);
  iso.segments.push_back(seg);
  return iso;
}

Isotopy random_fourier_flow(int degree, double amplitude, std::uint64_t seed) {
  if (degree < 1 || degree > 6) throw ConfigInvalidError("random-fourier: degree must be 1..6");
  if (!(amplitude > 0.0)) throw ConfigInvalidError("random-fourier: amplitude must be positive");
  Rng rng = Rng(seed).substream(0x666c6f77ull);  // flow construction stream
  Hamiltonian h;
  for (int d = 1; d <= degree; ++d) {
    for (int ex = 0; ex <= d; ++ex) {
      for (int ey = 0; ey + ex <= d; ++ey) {
        int ez = d - ex - ey;
        h.add_monomial(rng.normal(), ex, ey, ez);
      }
    }
  }
  // Normalize the measured top speed to `amplitude` over a deterministic probe set.
  const int m = 2048;
  std::vector<double> px(m), py(m), pz(m), sp(m);
  for (int i = 0; i < m; ++i) {
    double z = 1.0 - 2.0 * (i + 0.5) / m;
    double r = std::sqrt((1.0 - z) * (1.0 + z));
    double phi = 2.399963229728653 * i;
    px[i] = r * std::cos(phi);
    py[i] = r * std::sin(phi);
    pz[i] = z;
  }
  kern::FieldTable tab = h.table();
  kern::kernels().speed_eval(tab, px.data(), py.data(), pz.data(), m, sp.data());
  double top = 0.0;
  for (double v : sp) top = std::max(top, v);
  if (top < 1e-12) throw NumericalFailureError("random-fourier: degenerate field");

  double factor = amplitude / top;
  Hamiltonian scaled;
  Rng rng2 = Rng(seed).substream(0x666c6f77ull);
  for (int d = 1; d <= degree; ++d) {
    for (int ex = 0; ex <= d; ++ex) {
      for (int ey = 0; ey + ex <= d; ++ey) {
        int ez = d - ex - ey;
        scaled.add_monomial(factor * rng2.normal(), ex, ey, ez);
      }
    }
  }
  Isotopy iso;
  FlowSegment seg;
  seg.h = scaled;
  iso.segments.push_back(seg);
  return iso;
}

Isotopy named_flow(const FlowParams& p) {
  if (p.name == "rotation") return rotation(p.axis, p.angle);
  if (p.name == "eggbeater") {
    EggbeaterSpec spec;
    spec.scale = p.scale;
    return eggbeater_family(spec);
  }
  if (p.name == "collar") return collar_cutoff_isotopy(p.angle, p.delta);
  if (p.name == "random-fourier") return random_fourier_flow(p.degree, p.amplitude, p.seed);
  if (p.name == "identity") return identity_isotopy();
  throw ConfigInvalidError("unknown flow preset: " + p.name);
}

}  // namespace pmorph
