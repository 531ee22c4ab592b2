#include "pmorph/extraction.hpp"

#include "pmorph/signature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace pmorph {

namespace {

constexpr double kTangentTol = 1e-9;
constexpr int kMinTailSamples = 16;

void check_pole_clearance(SpherePoint p, SpherePoint pole, double clearance) {
  if (angle_between(p, pole) < clearance) {
    throw PoleCollisionError("extraction: sampled point within " + std::to_string(clearance) +
                             " of the projection pole");
  }
}

// Inbound tails, the flow samples up to grid index flow_end, outbound tails
// from there back to base. flow_end must land on a segment-structure point
// of every trajectory (whole periods when the flow is an iterate).
LoopDiagram assemble_loop_diagram(const std::vector<Trajectory>& trajs, std::size_t flow_end,
                                  const Configuration& x, const Configuration& base,
                                  const ExtractionOptions& opts) {
  const int n = static_cast<int>(trajs.size());
  ProjectionFrame frame = ProjectionFrame::from_pole(opts.pole);

  // Inbound tails.
  std::vector<Geodesic> tin;
  tin.reserve(n);
  for (int i = 0; i < n; ++i) tin.push_back(geodesic(base.points[i], x.points[i]));

  const double flow_dur = std::max(trajs[0].times[flow_end], 1e-12);

  // Outbound tails.
  std::vector<Geodesic> tout;
  tout.reserve(n);
  for (int i = 0; i < n; ++i) tout.push_back(geodesic(trajs[i].points[flow_end], base.points[i]));

  auto tail_samples = [&](const std::vector<Geodesic>& tails) {
    double longest = 0.0;
    for (const Geodesic& g : tails) longest = std::max(longest, g.angle);
    return std::max(kMinTailSamples,
                    static_cast<int>(std::ceil(longest / opts.tail_resolution)));
  };
  const int m_in = tail_samples(tin);
  const int m_out = tail_samples(tout);

  LoopDiagram d;
  d.strands.assign(n, {});
  auto push = [&](double t, int i, SpherePoint p) {
    check_pole_clearance(p, opts.pole, opts.pole_clearance);
    if (i == 0) d.times.push_back(t);
    d.strands[i].push_back(frame.project(p));
  };

  // [0, 1/3]: base -> x. Include s = 0, exclude nothing; the flow part then
  // starts strictly after 1/3 to keep times strictly increasing.
  for (int j = 0; j <= m_in; ++j) {
    double s = static_cast<double>(j) / m_in;
    for (int i = 0; i < n; ++i) push(s / 3.0, i, tin[i].at(s));
  }
  // (1/3, 2/3]: the flow, skipping its t = 0 sample (equals the tail end).
  for (std::size_t k = 1; k <= flow_end; ++k) {
    double s = trajs[0].times[k] / flow_dur;
    for (int i = 0; i < n; ++i) push((1.0 + s) / 3.0, i, trajs[i].points[k]);
  }
  // (2/3, 1]: f(x) -> base.
  for (int j = 1; j <= m_out; ++j) {
    double s = static_cast<double>(j) / m_out;
    for (int i = 0; i < n; ++i) push((2.0 + s) / 3.0, i, tout[i].at(s));
  }
  return d;
}

std::vector<int> slots_from_diagram(const LoopDiagram& d) {
  const int n = static_cast<int>(d.strands.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return d.strands[a][0].x < d.strands[b][0].x; });
  std::vector<int> slots(n);
  for (int slot = 0; slot < n; ++slot) slots[order[slot]] = slot;
  return slots;
}

// Rotate every point by ang about an axis drawn from step.
void jitter_points(Configuration& c, Rng step, double ang) {
  for (SpherePoint& z : c.points) {
    Vec3 axis = {step.uniform(-1, 1), step.uniform(-1, 1), step.uniform(-1, 1)};
    if (norm(axis) < 1e-3) axis = {0, 0, 1};
    axis = normalized(axis);
    Vec3 v = z.vec();
    double cs = std::cos(ang), sn = std::sin(ang);
    Vec3 r = cs * v + sn * cross(axis, v) + (1.0 - cs) * dot(axis, v) * axis;
    z = unit(r);
  }
}

// Close and sweep every whole-period prefix of an iterate trajectory.
std::vector<ExtractedBraid> sweep_iterates(const std::vector<Trajectory>& trajs, int k_max,
                                           const Configuration& x, const Configuration& base,
                                           const ExtractionOptions& opts) {
  const std::size_t len = trajs[0].times.size() - 1;
  const std::size_t period = len / static_cast<std::size_t>(k_max);
  if (period * static_cast<std::size_t>(k_max) != len) {
    throw Error("extract_braid_iterates: iterate grid is not periodic");
  }
  std::vector<ExtractedBraid> out;
  out.reserve(static_cast<std::size_t>(k_max));
  for (int j = 1; j <= k_max; ++j) {
    LoopDiagram d = assemble_loop_diagram(trajs, period * static_cast<std::size_t>(j), x, base, opts);
    ExtractedBraid b;
    b.word = sweep_diagram(d);
    b.slot_of_point = slots_from_diagram(d);
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace

LoopDiagram build_loop_diagram(const Isotopy& f, const Configuration& x,
                               const Configuration& base, const ExtractionOptions& opts) {
  const int n = x.size();
  if (base.size() != n) {
    throw StrandMismatchError("extraction: configuration and base sizes differ");
  }
  std::vector<Trajectory> trajs = integrate_batch(f, x.points);
  return assemble_loop_diagram(trajs, trajs[0].times.size() - 1, x, base, opts);
}

BraidWord sweep_diagram(const LoopDiagram& d) {
  const int n = static_cast<int>(d.strands.size());
  BraidWord w;
  w.strands = std::max(n, 2);
  if (n < 2) return w;
  const std::size_t T = d.times.size();

  std::vector<int> order(n);  // strand ids, left to right
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return d.strands[a][0].x < d.strands[b][0].x; });
  for (int j = 0; j + 1 < n; ++j) {
    if (!(d.strands[order[j]][0].x < d.strands[order[j + 1]][0].x)) {
      throw TangentialCrossingError("sweep: tied initial order");
    }
  }

  const int max_events = 4 * n * n;
  for (std::size_t k = 0; k + 1 < T; ++k) {
    // Strand positions are linear in s over [t_k, t_k+1]; every adjacent
    // x-difference is linear, so each pair crosses at most once. Process
    // swaps in time order, refreshing adjacency after each.
    double s_cur = 0.0;
    int events = 0;
    for (;;) {
      double best_s = 2.0;
      int best_j = -1;
      for (int j = 0; j + 1 < n; ++j) {
        int a = order[j], b = order[j + 1];
        double dx0 = d.strands[b][k].x - d.strands[a][k].x;
        double dx1 = d.strands[b][k + 1].x - d.strands[a][k + 1].x;
        if (dx1 < 0.0) {
          if (dx0 < 0.0) {
            // A linear difference negative at both ends cannot be ordered at
            // s_cur; the diagram is numerically inconsistent here.
            throw TangentialCrossingError("sweep: inconsistent order inside interval");
          }
          double s_star = dx0 / (dx0 - dx1);
          if (s_star >= s_cur - 1e-15 && s_star < best_s) {
            best_s = s_star;
            best_j = j;
          }
        } else if (dx1 == 0.0 && dx0 == 0.0) {
          throw TangentialCrossingError("sweep: strands coincide over an interval");
        }
      }
      if (best_j < 0) break;
      if (++events > max_events) {
        throw TangentialCrossingError("sweep: event cascade (grazing contact)");
      }
      int a = order[best_j], b = order[best_j + 1];
      double s = std::clamp(best_s, 0.0, 1.0);
      double ya = d.strands[a][k].y + s * (d.strands[a][k + 1].y - d.strands[a][k].y);
      double yb = d.strands[b][k].y + s * (d.strands[b][k + 1].y - d.strands[b][k].y);
      double dy = yb - ya;
      double scale = 1.0 + std::abs(ya) + std::abs(yb);
      if (std::abs(dy) < kTangentTol * scale) {
        throw TangentialCrossingError("sweep: tangential crossing");
      }
      w.letters.push_back({best_j + 1, dy > 0.0 ? 1 : -1});
      std::swap(order[best_j], order[best_j + 1]);
      s_cur = s;
    }
  }
  return w;
}

ExtractedBraid extract_braid(const Isotopy& f, const Configuration& x,
                             const Configuration& base, const ExtractionOptions& opts) {
  LoopDiagram d = build_loop_diagram(f, x, base, opts);
  ExtractedBraid out;
  out.word = sweep_diagram(d);
  out.slot_of_point = slots_from_diagram(d);
  return out;
}

ExtractedBraid extract_braid_robust(const Isotopy& f, const Configuration& x,
                                    const Configuration& base, Rng rng,
                                    const ExtractionOptions& opts) {
  Configuration jittered = base;
  for (int attempt = 0;; ++attempt) {
    try {
      return extract_braid(f, x, jittered, opts);
    } catch (const TangentialCrossingError&) {
      if (attempt >= opts.max_retries) throw;
    } catch (const PoleCollisionError&) {
      if (attempt >= opts.max_retries) throw;
    } catch (const AntipodalPairError&) {
      if (attempt >= opts.max_retries) throw;
    }
    jitter_points(jittered, rng.substream(0x6a697474ull, attempt),
                  opts.jitter * (1 << std::min(attempt, 12)));
  }
}

std::vector<ExtractedBraid> extract_braid_iterates(const Isotopy& f, const Configuration& x,
                                                   const Configuration& base, int k_max,
                                                   const ExtractionOptions& opts) {
  if (k_max < 1) throw ConfigInvalidError("extract_braid_iterates: k_max must be >= 1");
  if (base.size() != x.size()) {
    throw StrandMismatchError("extraction: configuration and base sizes differ");
  }
  std::vector<Trajectory> trajs = integrate_batch(iterate(f, k_max), x.points);
  return sweep_iterates(trajs, k_max, x, base, opts);
}

std::vector<ExtractedBraid> extract_braid_iterates_robust(const Isotopy& f,
                                                          const Configuration& x,
                                                          const Configuration& base, int k_max,
                                                          Rng rng,
                                                          const ExtractionOptions& opts) {
  if (k_max < 1) throw ConfigInvalidError("extract_braid_iterates: k_max must be >= 1");
  if (base.size() != x.size()) {
    throw StrandMismatchError("extraction: configuration and base sizes differ");
  }
  std::vector<Trajectory> trajs = integrate_batch(iterate(f, k_max), x.points);
  Configuration jittered = base;
  for (int attempt = 0;; ++attempt) {
    try {
      return sweep_iterates(trajs, k_max, x, jittered, opts);
    } catch (const TangentialCrossingError&) {
      if (attempt >= opts.max_retries) throw;
    } catch (const PoleCollisionError&) {
      if (attempt >= opts.max_retries) throw;
    } catch (const AntipodalPairError&) {
      if (attempt >= opts.max_retries) throw;
    }
    jitter_points(jittered, rng.substream(0x6a697474ull, attempt),
                  opts.jitter * (1 << std::min(attempt, 12)));
  }
}

CocycleReport cocycle_check(const Isotopy& g, const Isotopy& f, const Configuration& x,
                            const Configuration& base, const ExtractionOptions& opts) {
  Configuration fx;
  fx.points = time1_map_batch(f, x.points);

  ExtractedBraid bf = extract_braid(f, x, base, opts);
  ExtractedBraid bg = extract_braid(g, fx, base, opts);
  Isotopy gf = compose(g, f);
  ExtractedBraid bgf = extract_braid(gf, x, base, opts);

  CocycleReport rep;
  rep.lhs = free_reduce(bgf.word);
  rep.rhs = free_reduce(braid_compose(bg.word, bf.word));
  rep.permutation_equal = permutation(rep.lhs) == permutation(rep.rhs);
  rep.crossing_matrix_equal = crossing_sum_matrix(rep.lhs) == crossing_sum_matrix(rep.rhs);
  rep.exponent_equal = exponent_sum(rep.lhs) == exponent_sum(rep.rhs);
  rep.signature_equal = link_signature(rep.lhs) == link_signature(rep.rhs);
  return rep;
}

bool extraction_stable(const Isotopy& f, const Configuration& x, const Configuration& base,
                       const std::vector<SpherePoint>& poles) {
  bool have_ref = false;
  std::vector<int> ref_perm;
  std::vector<std::vector<int>> ref_matrix;
  int ref_exp = 0;
  for (const SpherePoint& pole : poles) {
    ExtractionOptions opts;
    opts.pole = pole;
    ExtractedBraid b = extract_braid(f, x, base, opts);
    // Crossing counts are tracked per configuration point (slot labels vary
    // with the pole, point identity does not).
    const int n = x.size();
    std::vector<std::vector<int>> m(n, std::vector<int>(n, 0));
    auto slot_m = crossing_sum_matrix(b.word);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m[i][j] = slot_m[b.slot_of_point[i]][b.slot_of_point[j]];
    }
    std::vector<int> perm_pts(n);
    auto slot_perm = permutation(b.word);
    for (int i = 0; i < n; ++i) perm_pts[i] = slot_perm[b.slot_of_point[i]];
    // Normalize: strand of point i ends at slot slot_perm[slot_of_point[i]];
    // map back to point indices for pole-independent comparison.
    std::vector<int> slot_to_point(n);
    for (int i = 0; i < n; ++i) slot_to_point[b.slot_of_point[i]] = i;
    std::vector<int> point_perm(n);
    for (int i = 0; i < n; ++i) point_perm[i] = slot_to_point[perm_pts[i]];

    int es = exponent_sum(b.word);
    if (!have_ref) {
      ref_perm = point_perm;
      ref_matrix = m;
      ref_exp = es;
      have_ref = true;
    } else if (point_perm != ref_perm || m != ref_matrix || es != ref_exp) {
      return false;
    }
  }
  return true;
}

}  // namespace pmorph
