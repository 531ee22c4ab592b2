#include "pmorph/signature.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "pmorph/errors.hpp"

namespace pmorph {

namespace detail {

// ---------------------------------------------------------------------------
// Exact signature of a symmetric integer matrix.
//
// Symmetric congruence elimination over the rationals. Sylvester's law of
// inertia: congruence preserves the signature, so we peel off pivots and sum
// their signs. Two pivot shapes cover every case:
//   * a nonzero diagonal entry d contributes sign(d) and a rank-1 Schur
//     update removes its row/column;
//   * if every active diagonal entry is zero but some off-diagonal a != 0,
//     the 2x2 block [[0,a],[a,0]] has eigenvalues +-a and contributes 0; its
//     Schur update removes both rows/columns.
// A remaining zero matrix contributes nothing.
// ---------------------------------------------------------------------------

int signature_of_symmetric(const std::vector<std::vector<long long>>& m) {
  const std::size_t n = m.size();
  std::vector<std::vector<mpq_class>> a(n, std::vector<mpq_class>(n));
  for (std::size_t r = 0; r < n; ++r) {
    if (m[r].size() != n) throw DiagramDegenerateError("signature: matrix not square");
    for (std::size_t c = 0; c < n; ++c) a[r][c] = static_cast<long>(m[r][c]);
  }
  std::vector<std::size_t> act(n);
  for (std::size_t i = 0; i < n; ++i) act[i] = i;

  int sig = 0;
  while (!act.empty()) {
    // Prefer a 1x1 pivot on the largest-magnitude diagonal entry; the size
    // bias keeps rational growth mild on the banded matrices we see here.
    std::size_t kpos = act.size();
    for (std::size_t t = 0; t < act.size(); ++t) {
      std::size_t i = act[t];
      if (a[i][i] == 0) continue;
      if (kpos == act.size() || cmp(abs(a[i][i]), abs(a[act[kpos]][act[kpos]])) > 0) kpos = t;
    }
    if (kpos < act.size()) {
      std::size_t k = act[kpos];
      sig += sgn(a[k][k]);
      mpq_class piv = a[k][k];
      act.erase(act.begin() + static_cast<std::ptrdiff_t>(kpos));
      for (std::size_t r : act) {
        if (a[r][k] == 0) continue;
        mpq_class f = a[r][k] / piv;
        for (std::size_t c : act) a[r][c] -= f * a[k][c];
      }
      for (std::size_t r : act) a[r][k] = 0;
      continue;
    }
    // All active diagonals vanish: hyperbolic 2x2 pivot.
    std::size_t ipos = act.size(), jpos = act.size();
    for (std::size_t t = 0; t < act.size() && ipos == act.size(); ++t) {
      for (std::size_t u = t + 1; u < act.size(); ++u) {
        if (a[act[t]][act[u]] != 0) {
          ipos = t;
          jpos = u;
          break;
        }
      }
    }
    if (ipos == act.size()) break;  // zero matrix: done
    std::size_t i = act[ipos], j = act[jpos];
    mpq_class piv = a[i][j];
    act.erase(act.begin() + static_cast<std::ptrdiff_t>(jpos));
    act.erase(act.begin() + static_cast<std::ptrdiff_t>(ipos));
    for (std::size_t r : act) {
      if (a[r][i] == 0 && a[r][j] == 0) continue;
      mpq_class fi = a[r][j] / piv;  // coefficient on row i
      mpq_class fj = a[r][i] / piv;  // coefficient on row j
      for (std::size_t c : act) a[r][c] -= fi * a[i][c] + fj * a[j][c];
    }
    for (std::size_t r : act) a[r][i] = a[r][j] = 0;
  }
  return sig;
}

}  // namespace detail

namespace {

using detail::signature_of_symmetric;

// ---------------------------------------------------------------------------
// Checkerboard data for the closure of one block of a braid word.
//
// The block diagram is drawn with strands as vertical lines and crossings
// stacked in word order, closed around the side. Regions ("corridors") are
// indexed 0..width: 0 is the region left of the first strand, c in 1..width-1
// the corridor between strands c and c+1, width the outer region. Adjacent
// corridors share strand edges, so coloring by corridor parity (even = black)
// checkers the diagram: at a crossing in corridor c the north/south corners
// lie in corridor c and the east/west corners in corridors c-1 and c+1.
//
// A corridor with m >= 1 crossings is cut into m faces; face f in 1..m-1
// spans the interval between its f-th and (f+1)-th crossing, and face m wraps
// through the closure arcs. White faces (odd corridors, plus the outer region
// when width is odd) index the Goeritz matrix:
//   G[u][v] = -sum of eta(c) over crossings c where faces u, v meet (u != v),
//   G[u][u] = -sum of the off-diagonal row,
// with eta(c) = +sign(c) in even corridors and -sign(c) in odd ones. One
// white face is deleted, and the correction subtracts mu = sum of eta over
// even-corridor crossings, whose white corners are east/west. Split blocks
// are scored independently; signatures add across split unions.
//
// Convention anchors (verified in tests): closures of s1^3 -> -2, s1^-3 ->
// +2, s1^2 -> -1, s1^4 -> -3, s1 s2^-1 s1 s2^-1 -> 0, (s1 s2)^4 -> -6.
// ---------------------------------------------------------------------------

struct BlockCrossing {
  int time = 0;      // position in the word
  int corridor = 1;  // local corridor index of its gap, 1..width-1
  int sign = 1;
};

int block_signature(const std::vector<BlockCrossing>& xs, int width) {
  if (width < 2) return 0;
  // Crossing times per corridor, in word order.
  std::vector<std::vector<int>> times(static_cast<std::size_t>(width) + 1);
  for (const BlockCrossing& c : xs) {
    times[static_cast<std::size_t>(c.corridor)].push_back(c.time);
  }
  for (auto& t : times) {
    if (!std::is_sorted(t.begin(), t.end())) throw DiagramDegenerateError("signature: unsorted crossings");
  }

  // Global ids for white faces. face_base[c] is the id of corridor c's first
  // face; corridors are white when their index is odd.
  std::vector<int> face_base(static_cast<std::size_t>(width) + 1, -1);
  int faces = 0;
  for (int c = 1; c < width; c += 2) {
    std::size_t m = times[static_cast<std::size_t>(c)].size();
    if (m == 0) throw DiagramDegenerateError("signature: empty corridor inside block");
    face_base[static_cast<std::size_t>(c)] = faces;
    faces += static_cast<int>(m);
  }
  int outer_face = -1;
  if (width % 2 == 1) {
    outer_face = faces;
    ++faces;
  }

  // Face of white corridor c covering word position t. Faces are numbered
  // 1..m in crossing order with face m wrapping through the closure, so the
  // face at t is the count of crossings before t, with 0 mapping to the wrap.
  auto face_at = [&](int c, int t) -> int {
    if (c == width) return outer_face;
    const std::vector<int>& tc = times[static_cast<std::size_t>(c)];
    std::size_t before = static_cast<std::size_t>(
        std::lower_bound(tc.begin(), tc.end(), t) - tc.begin());
    std::size_t f = (before == 0) ? tc.size() : before;
    return face_base[static_cast<std::size_t>(c)] + static_cast<int>(f) - 1;
  };

  std::map<std::pair<int, int>, long long> off;  // eta sums between distinct faces
  long long mu = 0;
  for (const BlockCrossing& c : xs) {
    std::size_t cor = static_cast<std::size_t>(c.corridor);
    if (c.corridor % 2 == 1) {
      // White corners are the corridor's own faces bordering the crossing.
      const std::vector<int>& tc = times[cor];
      std::size_t m = tc.size();
      std::size_t j = static_cast<std::size_t>(
          std::lower_bound(tc.begin(), tc.end(), c.time) - tc.begin());
      if (j >= m || tc[j] != c.time) throw DiagramDegenerateError("signature: crossing not in corridor");
      int after = face_base[cor] + static_cast<int>(j < m - 1 ? j : m - 1);
      int before = face_base[cor] + static_cast<int>(j == 0 ? m - 1 : j - 1);
      if (before != after) {
        auto key = std::minmax(before, after);
        off[{key.first, key.second}] += -c.sign;  // eta = -sign in odd corridors
      }
      // A crossing meeting the same white face on both sides drops out of
      // the pairing matrix, and odd-corridor crossings never enter mu.
    } else {
      int west = face_at(c.corridor - 1, c.time);
      int east = face_at(c.corridor + 1, c.time);
      if (west == east) throw DiagramDegenerateError("signature: even corridor face collision");
      auto key = std::minmax(west, east);
      off[{key.first, key.second}] += c.sign;  // eta = +sign in even corridors
      mu += c.sign;
    }
  }

  // Assemble, zero-row-sum diagonal, delete the last white face.
  std::vector<std::vector<long long>> g(static_cast<std::size_t>(faces),
                                        std::vector<long long>(static_cast<std::size_t>(faces), 0));
  for (const auto& [uv, s] : off) {
    g[static_cast<std::size_t>(uv.first)][static_cast<std::size_t>(uv.second)] = -s;
    g[static_cast<std::size_t>(uv.second)][static_cast<std::size_t>(uv.first)] = -s;
  }
  for (int u = 0; u < faces; ++u) {
    long long row = 0;
    for (int v = 0; v < faces; ++v) {
      if (v != u) row += g[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
    }
    g[static_cast<std::size_t>(u)][static_cast<std::size_t>(u)] = -row;
  }
  std::size_t red = static_cast<std::size_t>(faces > 0 ? faces - 1 : 0);
  std::vector<std::vector<long long>> reduced(red, std::vector<long long>(red));
  for (std::size_t u = 0; u < red; ++u) {
    for (std::size_t v = 0; v < red; ++v) reduced[u][v] = g[u][v];
  }
  return signature_of_symmetric(reduced) - static_cast<int>(mu);
}

}  // namespace

int link_signature(const BraidWord& w) {
  validate(w);
  if (w.letters.empty()) return 0;
  const int n = w.strands;

  // Split at unused gaps: the closure is then a split union of the closures
  // of the strand intervals, and signatures add over split components.
  std::vector<char> used(static_cast<std::size_t>(n), 0);  // used[g]: gap g+1 has a crossing
  for (const BraidLetter& l : w.letters) used[static_cast<std::size_t>(l.index - 1)] = 1;

  int total = 0;
  int lo = 1;  // first strand of the current block, 1-based
  while (lo <= n) {
    int hi = lo;
    while (hi < n && used[static_cast<std::size_t>(hi - 1)]) ++hi;
    if (hi > lo) {
      std::vector<BlockCrossing> xs;
      for (int t = 0; t < static_cast<int>(w.letters.size()); ++t) {
        const BraidLetter& l = w.letters[static_cast<std::size_t>(t)];
        if (l.index >= lo && l.index < hi) {
          xs.push_back({t, l.index - lo + 1, l.sign});
        }
      }
      total += block_signature(xs, hi - lo + 1);
    }
    lo = hi + 1;
  }
  return total;
}

}  // namespace pmorph
