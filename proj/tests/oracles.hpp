#pragma once
// Independent reference computations shared by the unit tests and the
// acceptance binary. Deliberately naive: direct sums, exhaustive search,
// plain greedy loops.
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "morandim/interval_set.hpp"
#include "morandim/seqspec.hpp"

namespace oracle {

using namespace morandim;

// Random line construction: n_k in [2, n_max], c_k in [c_min, 1/n_k].
inline MoranSpec random_spec(std::mt19937_64& rng, std::size_t levels, int n_max, double c_min) {
  std::uniform_int_distribution<int> n_dist(2, n_max);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ListTailRule branch;
  ListTailRule ratio;
  for (std::size_t k = 0; k < levels; ++k) {
    int n = n_dist(rng);
    while (c_min * n > 1.0) n = n_dist(rng);
    const double hi = 1.0 / n;
    branch.values.push_back(n);
    ratio.values.push_back(c_min + (hi - c_min) * u(rng));
  }
  branch.tail = 2;
  ratio.tail = std::max(c_min, 0.25);
  MoranSpec spec;
  spec.branch = branch;
  spec.ratio = SequenceRule{ratio};
  return spec;
}

// Per-level logs read straight off the rules, summed without prefix tables.
struct Levels {
  std::vector<double> log_n, log_c;  // index k-1
};

inline Levels raw_levels(const MoranSpec& spec, std::size_t depth) {
  Levels out;
  const auto& rule = std::get<SequenceRule>(spec.ratio);
  for (std::size_t k = 1; k <= depth; ++k) {
    out.log_n.push_back(std::log(double(eval_branch(spec.branch, k))));
    out.log_c.push_back(std::log(eval_ratio(rule, k)));
  }
  return out;
}

inline double oracle_s(const Levels& l, std::size_t p, std::size_t q) {
  double n = 0.0;
  double c = 0.0;
  for (std::size_t i = p; i <= q; ++i) {
    n += l.log_n[i - 1];
    c += l.log_c[i - 1];
  }
  return n / -c;
}

inline std::size_t oracle_l(const Levels& l, std::size_t q, double delta) {
  double total = 0.0;
  for (std::size_t i = 1; i <= q; ++i) total += l.log_c[i - 1];
  std::size_t best = 0;
  for (std::size_t p = 1; p <= q; ++p) {
    double part = 0.0;
    for (std::size_t i = p; i <= q; ++i) part += l.log_c[i - 1];
    if (part / total > delta) best = p;
  }
  return best;
}

// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Smallest subset of points used as left ball edges that covers every point.
inline std::size_t exhaustive_cover(const std::vector<double>& pts, double r) {
  const std::size_t n = pts.size();
  std::size_t best = n;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const auto used = static_cast<std::size_t>(std::popcount(mask));
    if (used >= best) continue;
    bool ok = true;
    for (double p : pts) {
      bool hit = false;
      for (std::size_t i = 0; i < n && !hit; ++i) {
        hit = (mask >> i & 1u) && pts[i] <= p && p - pts[i] <= 2 * r;
      }
      if (!hit) {
        ok = false;
        break;
      }
    }
    if (ok) best = used;
  }
  return best;
}

// Plain greedy over a clipped interval list.
inline std::size_t greedy_cover(const std::vector<Interval>& iv, double r) {
  std::size_t count = 0;
  double reach = -std::numeric_limits<double>::infinity();
  for (const auto& i : iv) {
    if (i.lo > reach) {
      reach = i.lo + 2 * r;
      ++count;
    }
    while (i.hi > reach) {
      reach += 2 * r;
      ++count;
    }
  }
  return count;
}

inline std::vector<Interval> clip_list(const IntervalSet& s, double lo, double hi) {
  std::vector<Interval> out;
  for (const auto& i : s.intervals()) {
    if (i.hi < lo || i.lo > hi) continue;
    out.push_back({std::max(i.lo, lo), std::min(i.hi, hi)});
  }
  return out;
}

// Random set on the lattice j/64 in [0, 1]: points and short intervals.
inline IntervalSet random_dyadic(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> step(1, 10);
  std::uniform_int_distribution<int> len(0, 4);
  std::vector<Interval> iv;
  int at = step(rng) - 1;
  while (at <= 64) {
    const int hi = std::min(64, at + len(rng));
    iv.push_back({at / 64.0, hi / 64.0});
    at = hi + step(rng);
  }
  return IntervalSet(iv);
}

// Every union of consecutive components around x, checked literally.
inline bool brute_gap_cut(const IntervalSet& s, double x, double r, double th) {
  const auto c = s.components();
  const std::size_t home = s.component_of(x);
  for (std::size_t i = 0; i <= home; ++i) {
    for (std::size_t j = home; j < c.size(); ++j) {
      if (c[i].lo < x - r || c[j].hi > x + r) continue;
      bool inner = true;
      for (std::size_t k = 0; k < c.size(); ++k) {
        const bool touches = c[k].hi >= x - th && c[k].lo <= x + th;
        if (touches && (k < i || k > j)) inner = false;
      }
      if (!inner) continue;
      double sep = std::numeric_limits<double>::infinity();
      if (i > 0) sep = std::min(sep, c[i].lo - c[i - 1].hi);
      if (j + 1 < c.size()) sep = std::min(sep, c[j + 1].lo - c[j].hi);
      if (sep >= th) return true;
    }
  }
  return false;
}

}  // namespace oracle
