#include "support/seifert_oracle.hpp"

#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

namespace pmorph::testing {

namespace {

// Signature of a symmetric mpz matrix by congruence, division-free. A pivot
// step replaces row/col r by p*row_r - A_rk*row_k, which clears column k and
// multiplies the active block by p; dividing the block by p afterwards keeps
// growth quadratic but flips the inertia of the remainder when p < 0, so the
// running flip sign is folded into each pivot contribution. All-zero
// diagonals are repaired with the congruence e_i += e_j, which plants
// 2*A_ij on the diagonal.
int signature_of_symmetric_mpz(std::vector<std::vector<mpz_class>> a) {
  const std::size_t n = a.size();
  std::vector<std::size_t> act(n);
  std::iota(act.begin(), act.end(), std::size_t{0});
  int sig = 0;
  int flip = 1;
  while (!act.empty()) {
    std::size_t kpos = act.size();
    for (std::size_t t = 0; t < act.size(); ++t) {
      if (a[act[t]][act[t]] != 0) {
        kpos = t;
        break;
      }
    }
    if (kpos == act.size()) {
      // Zero diagonal everywhere; plant a pivot or finish on a zero matrix.
      bool planted = false;
      for (std::size_t t = 0; t < act.size() && !planted; ++t) {
        for (std::size_t u = t + 1; u < act.size() && !planted; ++u) {
          std::size_t i = act[t], j = act[u];
          if (a[i][j] != 0) {
            for (std::size_t c : act) a[i][c] += a[j][c];
            for (std::size_t r : act) a[r][i] += a[r][j];
            planted = true;
          }
        }
      }
      if (!planted) break;
      continue;
    }
    std::size_t k = act[kpos];
    mpz_class p = a[k][k];
    sig += flip * sgn(p);
    act.erase(act.begin() + static_cast<std::ptrdiff_t>(kpos));
    for (std::size_t r : act) {
      for (std::size_t s : act) {
        if (s > r) continue;  // fill lower triangle, mirror after
        a[r][s] = p * a[r][s] - a[r][k] * a[s][k];
      }
    }
    for (std::size_t r : act) {
      for (std::size_t s : act) {
        if (s > r) a[r][s] = a[s][r];
      }
      a[r][k] = 0;
      a[k][r] = 0;
    }
    if (p < 0) flip = -flip;
  }
  return sig;
}

struct SeifertLoop {
  int gap = 0;  // 0-based gap index within the block
  int t1 = 0;   // word positions of the two bands, t1 < t2
  int t2 = 0;
  int e1 = 1;
  int e2 = 1;
};

int seifert_block_signature(const std::vector<std::vector<std::pair<int, int>>>& by_gap) {
  // by_gap[g] = (time, sign) list for gap g, time-ordered.
  std::vector<SeifertLoop> loops;
  for (std::size_t g = 0; g < by_gap.size(); ++g) {
    const auto& xs = by_gap[g];
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      loops.push_back({static_cast<int>(g), xs[i].first, xs[i + 1].first,
                       xs[i].second, xs[i + 1].second});
    }
  }
  const std::size_t r = loops.size();
  std::vector<std::vector<long long>> v(r, std::vector<long long>(r, 0));
  for (std::size_t i = 0; i < r; ++i) {
    const SeifertLoop& L = loops[i];
    v[i][i] = -(L.e1 + L.e2) / 2;
    for (std::size_t j = i + 1; j < r; ++j) {
      const SeifertLoop& M = loops[j];
      if (M.gap == L.gap && M.t1 == L.t2) {
        // Consecutive loops through a shared band of sign e.
        v[i][j] = (1 + M.e1) / 2;
        v[j][i] = (M.e1 - 1) / 2;
      } else if (M.gap == L.gap + 1) {
        // L in the lower gap; only interleaved spans link.
        if (L.t1 < M.t1 && M.t1 < L.t2 && L.t2 < M.t2) {
          v[i][j] = 1;  // lower-gap loop starts first
        } else if (M.t1 < L.t1 && L.t1 < M.t2 && M.t2 < L.t2) {
          v[i][j] = -1;  // upper-gap loop starts first
        }
      } else if (L.gap == M.gap + 1) {
        if (M.t1 < L.t1 && L.t1 < M.t2 && M.t2 < L.t2) {
          v[j][i] = 1;
        } else if (L.t1 < M.t1 && M.t1 < L.t2 && L.t2 < M.t2) {
          v[j][i] = -1;
        }
      }
    }
  }
  std::vector<std::vector<mpz_class>> w(r, std::vector<mpz_class>(r));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      w[i][j] = static_cast<long>(v[i][j] + v[j][i]);
    }
  }
  return signature_of_symmetric_mpz(std::move(w));
}

}  // namespace

int seifert_signature(const BraidWord& w) {
  validate(w);
  if (w.letters.empty()) return 0;
  const int n = w.strands;
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  for (const BraidLetter& l : w.letters) used[static_cast<std::size_t>(l.index - 1)] = 1;

  int total = 0;
  int lo = 1;
  while (lo <= n) {
    int hi = lo;
    while (hi < n && used[static_cast<std::size_t>(hi - 1)]) ++hi;
    if (hi > lo) {
      std::vector<std::vector<std::pair<int, int>>> by_gap(
          static_cast<std::size_t>(hi - lo));
      for (int t = 0; t < static_cast<int>(w.letters.size()); ++t) {
        const BraidLetter& l = w.letters[static_cast<std::size_t>(t)];
        if (l.index >= lo && l.index < hi) {
          by_gap[static_cast<std::size_t>(l.index - lo)].push_back({t, l.sign});
        }
      }
      total += seifert_block_signature(by_gap);
    }
    lo = hi + 1;
  }
  return total;
}

int torus_signature_count(int p, int q) {
  if (p < 2 || q < 2 || std::gcd(p, q) != 1) {
    throw std::invalid_argument("torus_signature_count: need coprime p, q >= 2");
  }
  long long sig = 0;
  for (int i = 1; i < p; ++i) {
    for (int j = 1; j < q; ++j) {
      long long num = 2LL * (1LL * i * q + 1LL * j * p);
      long long lo = 1LL * p * q, hi = 3LL * p * q;
      if (num == lo || num == hi) {
        throw std::logic_error("torus_signature_count: boundary lattice point");
      }
      sig += (num > lo && num < hi) ? -1 : +1;
    }
  }
  return static_cast<int>(sig);
}

}  // namespace pmorph::testing
