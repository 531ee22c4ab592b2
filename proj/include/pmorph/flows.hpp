#pragma once

// Time-dependent Hamiltonian flows on the unit sphere. An Isotopy is a list
// of flow segments, each an autonomous Hamiltonian with a polynomial time
// profile and an orientation flag; the time-1 map is the composition of the
// segment flows in order. Integration uses the spherical midpoint rule with
// a fixed inner iteration count, so results are bit-reproducible and the
// points stay on the sphere to rounding.

#include "pmorph/braid.hpp"
#include "pmorph/errors.hpp"
#include "pmorph/kernels/field_table.hpp"
#include "pmorph/sphere.hpp"

#include <array>
#include <string>
#include <vector>

namespace pmorph {

// Polynomial time profile c(t) on the segment's local [0,1].
struct TimeProfile {
  std::vector<double> coeffs{1.0};

  double value(double t) const;
  bool is_constant() const;
  double max_abs() const;                 // bound of |c| on [0,1]
  double abs_integral() const;            // integral of |c| over [0,1]
};

class Hamiltonian {
 public:
  void add_height(Vec3 axis, double coeff);
  void add_cap_twist(SpherePoint center, double core_radius, double support_radius, double coeff);
  void add_collar(double amplitude, double half_width);
  void add_monomial(double coeff, int ex, int ey, int ez);

  double value(double t, SpherePoint p) const;
  Vec3 field(double t, SpherePoint p) const;

  // Scale-1 kernel table (profile/orientation applied by the caller).
  const kern::FieldTable& table() const { return table_; }

  double speed_bound() const;        // sup |X_H| bound, profile included
  double feature_scale() const;      // smallest angular feature, for step/grid density

  TimeProfile profile;

 private:
  kern::FieldTable table_;
};

struct FlowSegment {
  Hamiltonian h;
  double duration = 1.0;
  int direction = 1;  // -1 runs the segment backward (inverse flow)
};

struct Isotopy {
  std::vector<FlowSegment> segments;
  double max_step = 0.02;  // upper bound on the integrator time step

  double total_duration() const;
};

// ----- composition algebra -----

// g after f: f's segments run first.
Isotopy compose(const Isotopy& g, const Isotopy& f);
Isotopy inverse(const Isotopy& f);
Isotopy iterate(const Isotopy& f, int k);  // k >= 0; k applications in sequence

// ----- integration -----

struct Trajectory {
  std::vector<double> times;        // global time stamps, 0 .. total_duration
  std::vector<SpherePoint> points;  // same length

  SpherePoint end() const { return points.back(); }
};

// Throws StepSizeInvalidError unless 0 < max_step <= 0.5.
Trajectory integrate(const Isotopy& iso, SpherePoint start);

// All starts advance through the same step sequence (shared time stamps).
std::vector<Trajectory> integrate_batch(const Isotopy& iso,
                                        const std::vector<SpherePoint>& starts);

// Endpoint only; no trajectory storage (fast path for large batches).
SpherePoint time1_map(const Isotopy& iso, SpherePoint start);
std::vector<SpherePoint> time1_map_batch(const Isotopy& iso, std::vector<SpherePoint> starts);

// Fixed per-segment step count (convergence studies).
Trajectory integrate_fixed(const Isotopy& iso, SpherePoint start, int steps_per_segment);

// ----- L1-type length -----

struct QuadratureSpec {
  int nz = 0;    // 0: auto from feature scale
  int nphi = 0;
  bool refine_check = true;  // compare against doubled grid, throw if drifting
};

// integral over time of the integral of |X_t| against the radius-1 area form
// (total area 4 pi). Throws QuadratureTooCoarseError when the doubled grid
// moves the value by more than 1e-3 relative.
double lp_length(const Isotopy& iso, const QuadratureSpec& spec = {});

// ----- presets -----

Isotopy identity_isotopy();
Isotopy rotation(Vec3 axis, double angle);

// Twist supported on a cap: the core cap rotates rigidly by `angle` about its
// center over unit time, with a quintic ramp to rest across the annulus.
Isotopy cap_twist(SpherePoint center, double core_radius, double support_radius, double angle);

struct EggbeaterSpec {
  std::array<double, 4> areas{0.02, 0.02, 0.02, 0.02};  // disk areas (sphere = 1)
  double scale = 1.0;                                    // multiplies every area
  BraidWord target;                                      // word in B4 over the slots
  EggbeaterSpec();
};

// Four fixed slots on the reference meridian (two per hemisphere), numbered
// south to north, which is left to right in the default projection plane;
// each target letter becomes a half-twist exchanging the adjacent slot pair.
// Slot centers are mapped exactly onto each other, so pure target words fix
// all four disk centers. Throws LayoutInfeasibleError when disks or twist
// supports cannot be placed disjointly (in particular when scale * total
// area reaches the packing limit).
Isotopy eggbeater_family(const EggbeaterSpec& spec);

// The four disks described by `spec` (centers at the slots).
std::vector<Disk> eggbeater_disks(const EggbeaterSpec& spec);

// Equator band rotation: the equator rotates by `angle`, the motion dies out
// across the collar |latitude| <= half_width. Identity outside the collar.
// Throws CollarTooWideError when half_width exceeds kern::kCollarMaxHalfWidth.
Isotopy collar_cutoff_isotopy(double angle, double half_width);

// Random polynomial Hamiltonian (monomials of total degree 1..degree, iid
// coefficients from the given seed), normalized so the measured top speed is
// `amplitude`.
Isotopy random_fourier_flow(int degree, double amplitude, std::uint64_t seed);

// Named preset lookup used by the CLI: "rotation", "eggbeater", "collar",
// "random-fourier", "identity". Throws ConfigInvalidError for unknown names.
struct FlowParams {
  std::string name = "eggbeater";
  Vec3 axis{0, 0, 1};
  double angle = kPi;
  double delta = 0.1;
  int degree = 3;
  double amplitude = 1.0;
  std::uint64_t seed = 1;
  double scale = 1.0;
};
Isotopy named_flow(const FlowParams& p);

}  // namespace pmorph
