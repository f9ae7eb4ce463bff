#include "morandim/metriclab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "morandim/error.hpp"
#include "morandim/prefix_table.hpp"

namespace morandim {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative slack when turning a length into a ball count, so that a length
// of exactly m diameters computed with rounding error still needs m balls.
constexpr double kCountSlack = 1e-9;

std::size_t balls_for(double length, double diameter) {
  const double q = length / diameter - kCountSlack;
  return q <= 0.0 ? 0 : static_cast<std::size_t>(std::ceil(q));
}

// Greedy sweep over pieces given in ascending order; each ball is a closed
// interval [anchor, anchor + d].
class CoverSweep {
 public:
  explicit CoverSweep(double r) : d_(2.0 * r) {}

  void add(double a, double b) {
    if (open_ && a - anchor_ <= d_) {
      if (b - anchor_ <= d_) return;
      const double start = anchor_ + d_;
      const std::size_t m = balls_for(b - start, d_);
      if (m == 0) return;
      count_ += m;
      anchor_ = start + static_cast<double>(m - 1) * d_;
      return;
    }
    const std::size_t m = std::max<std::size_t>(1, balls_for(b - a, d_));
    count_ += m;
    anchor_ = a + static_cast<double>(m - 1) * d_;
    open_ = true;
  }

  std::size_t count() const { return count_; }

 private:
  double d_;
  double anchor_ = 0.0;
  bool open_ = false;
  std::size_t count_ = 0;
};

// Max-with-leftmost-argmax segment tree over gap lengths.
class GapTree {
 public:
  explicit GapTree(std::span<const Interval> comps) {
    n_ = comps.size() > 1 ? comps.size() - 1 : 0;
    size_ = 1;
    while (size_ < n_) size_ <<= 1;
    len_.assign(2 * size_, -kInf);
    idx_.assign(2 * size_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
      len_[size_ + i] = comps[i + 1].lo - comps[i].hi;
      idx_[size_ + i] = i;
    }
    for (std::size_t i = size_ - 1; i >= 1; --i) pull(i);
  }

  // Leftmost argmax over gap indices [lo, hi]; npos when empty.
  std::size_t argmax(std::size_t lo, std::size_t hi) const {
    if (lo > hi || hi >= n_) return npos;
    double best = -kInf;
    std::size_t arg = npos;
    auto take = [&](std::size_t node) {
      if (len_[node] > best || (len_[node] == best && idx_[node] < arg)) {
        best = len_[node];
        arg = idx_[node];
      }
    };
    for (std::size_t l = lo + size_, r = hi + size_ + 1; l < r; l >>= 1, r >>= 1) {
      if (l & 1) take(l++);
      if (r & 1) take(--r);
    }
    return arg;
  }

  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

 private:
  void pull(std::size_t i) {
    const std::size_t a = 2 * i;
    const std::size_t b = 2 * i + 1;
    const std::size_t w = len_[b] > len_[a] ? b : a;
    len_[i] = len_[w];
    idx_[i] = idx_[w];
  }

  std::size_t n_ = 0;
  std::size_t size_ = 1;
  std::vector<double> len_;
  std::vector<std::size_t> idx_;
};

Witness search(const IntervalSet& set, const GapTree& tree, double x, double r, double th) {
  const auto comps = set.components();
  const std::size_t m = comps.size();
  const std::size_t ci = set.component_of(x);
  if (ci == m) throw RangeError("witness centre is not a point of the set");

  Witness w;
  w.x = x;
  w.r = r;
  w.threshold = th;
  w.part_lo = comps[ci].lo;
  w.part_hi = comps[ci].hi;

  // Left: the gap i sits between comps[i] and comps[i+1].
  double left_sep = 0.0;
  bool left_ok = false;
  if (comps.front().lo >= x - r) {
    w.part_lo = comps.front().lo;
    left_sep = kInf;
    left_ok = true;
  } else if (ci > 0) {
    // comps[i+1].lo >= x - r
    const auto j0 = static_cast<std::size_t>(
        std::partition_point(comps.begin(), comps.end(),
                             [&](const Interval& c) { return c.lo < x - r; }) -
        comps.begin());
    // comps[i].hi < x - th
    const auto h0 = static_cast<std::size_t>(
        std::partition_point(comps.begin(), comps.end(),
                             [&](const Interval& c) { return c.hi < x - th; }) -
        comps.begin());
    const std::size_t lo = j0 == 0 ? 0 : j0 - 1;
    if (h0 > 0) {
      const std::size_t hi = std::min(ci - 1, h0 - 1);
      const std::size_t i = tree.argmax(lo, hi);
      if (i != GapTree::npos) {
        const Gap g{comps[i].hi, comps[i + 1].lo};
        left_sep = g.length();
        w.part_lo = g.hi;
        if (g.length() >= th) {
          w.left_cut = g;
          left_ok = true;
        }
      }
    }
  }

  double right_sep = 0.0;
  bool right_ok = false;
  if (comps.back().hi <= x + r) {
    w.part_hi = comps.back().hi;
    right_sep = kInf;
    right_ok = true;
  } else if (ci + 1 < m) {
    // comps[i].hi <= x + r
    const auto e0 = static_cast<std::size_t>(
        std::partition_point(comps.begin(), comps.end(),
                             [&](const Interval& c) { return c.hi <= x + r; }) -
        comps.begin());
    // comps[i+1].lo > x + th
    const auto g0 = static_cast<std::size_t>(
        std::partition_point(comps.begin(), comps.end(),
                             [&](const Interval& c) { return c.lo <= x + th; }) -
        comps.begin());
    const std::size_t lo = std::max(ci, g0 == 0 ? 0 : g0 - 1);
    if (e0 > 0) {
      const std::size_t hi = std::min(e0 - 1, m - 2);
      const std::size_t i = tree.argmax(lo, hi);
      if (i != GapTree::npos) {
        const Gap g{comps[i].hi, comps[i + 1].lo};
        right_sep = g.length();
        w.part_hi = g.lo;
        if (g.length() >= th) {
          w.right_cut = g;
          right_ok = true;
        }
      }
    }
  }

  w.separation = std::min(left_sep, right_sep);
  w.pass = left_ok && right_ok;
  return w;
}

double margin(const Witness& w) { return w.separation / w.threshold; }

}  // namespace

std::size_t interval_cap_from_env() {
  const char* raw = std::getenv("MORANDIM_CAP");
  if (raw == nullptr || *raw == '\0') return kDefaultIntervalCap;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (*end != '\0' || v == 0) {
    throw ValidationError(std::string("MORANDIM_CAP must be a positive integer, got '") + raw +
                          "'");
  }
  return static_cast<std::size_t>(v);
}

IntervalSet realize(const MoranSpec& spec, std::size_t depth, std::size_t cap) {
  const ValidationReport report = validate(spec, depth);
  if (!report.ok) {
    if (report.level > 0) throw ValidationError(report.level, report.constraint);
    throw ValidationError(report.constraint);
  }
  double log_count = 0.0;
  for (std::size_t k = 1; k <= depth; ++k) log_count += eval_log_branch(spec.branch, k);
  if (log_count > std::log(static_cast<double>(cap)) + 1e-9) {
    throw ResourceError("depth " + std::to_string(depth) + " needs about exp(" +
                        std::to_string(log_count) + ") intervals, over the cap of " +
                        std::to_string(cap) + "; use the formula engine (dims) instead");
  }

  std::vector<Interval> cur{{spec.interval.lo, spec.interval.hi}};
  std::vector<Interval> next;
  for (std::size_t k = 1; k <= depth; ++k) {
    const std::vector<double> ratios = eval_child_ratios(spec, k);
    const std::size_t n = ratios.size();
    double ratio_sum = 0.0;
    for (double c : ratios) ratio_sum += c;
    next.clear();
    next.reserve(cur.size() * n);
    for (const Interval& parent : cur) {
      const double len = parent.length();
      double pos = parent.lo;
      if (spec.placement == Placement::uniform_cantor) {
        const double gap = n > 1 ? std::max(0.0, len * (1.0 - ratio_sum) / double(n - 1)) : 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double child = ratios[i] * len;
          Interval iv{pos, pos + child};
          if (i + 1 == n) {
            iv.hi = parent.hi;
            iv.lo = std::max(parent.hi - child, next.empty() ? parent.lo : next.back().hi);
          }
          iv.hi = std::min(iv.hi, parent.hi);
          next.push_back(iv);
          pos = iv.hi + gap;
        }
      } else {
        for (std::size_t i = 0; i < n; ++i) {
          const double hi = std::min(pos + ratios[i] * len, parent.hi);
          next.push_back({pos, hi});
          pos = hi;
        }
      }
    }
    cur.swap(next);
  }
  return IntervalSet(std::move(cur));
}

std::size_t realization_depth(const MoranSpec& spec, double r) {
  if (!(r > 0.0)) throw RangeError("realization scale must be positive");
  const double target = std::log(r / 8.0) - std::log(spec.interval.length());
  double lc = 0.0;
  for (std::size_t k = 1; k <= kDefaultMaxDepth; ++k) {
    const auto ratios = eval_child_ratios(spec, k);
    lc += std::log(*std::max_element(ratios.begin(), ratios.end()));
    if (lc <= target) return k;
  }
  throw ResourceError("scale " + std::to_string(r) + " is not reached within the depth limit");
}

Example1::Example1(double alpha, std::size_t k_max) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw RangeError("alpha must lie in (0, 1)");
  if (k_max < 1) throw RangeError("k_max must be at least 1");
  log_a_.resize(k_max + 1);
  log_a_[0] = 0.0;
  for (std::size_t i = 1; i <= k_max; ++i) {
    log_a_[i] = log_a_[i - 1] + std::log1p(-std::pow(double(i + 1), -alpha));
  }
}

double Example1::a(std::size_t k) const { return std::exp(log_a(k)); }

double Example1::gap(std::size_t k) const {
  return std::exp(log_a(k) - alpha_ * std::log(double(k + 2)));
}

std::size_t Example1::bracket(double r) const {
  if (!(r < 1.0) || r < a(k_max())) {
    throw RangeError("r must lie in [a_kmax, 1) for the Example-1 scale function");
  }
  // smallest k >= 1 with a_k <= r
  std::size_t lo = 1;
  std::size_t hi = k_max();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (a(mid) <= r) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

double Example1::psi(double r) const { return gap(bracket(r)) / 2.0; }

std::size_t Example1::ud_failure_level(double c) const {
  if (!(c > 0.0 && c < 1.0)) throw RangeError("c must lie in (0, 1)");
  // (k+2)^alpha >= 3/c, with a relative slack for the rounding in 3/c
  const double need = (3.0 / c) * (1.0 - 1e-12);
  std::size_t k = 1;
  while (std::pow(double(k + 2), alpha_) < need) ++k;
  return k;
}

IntervalSet Example1::set() const {
  std::vector<Interval> pts;
  pts.reserve(k_max() + 2);
  pts.push_back({0.0, 0.0});
  for (std::size_t k = k_max(); k >= 1; --k) pts.push_back({a(k), a(k)});
  pts.push_back({1.0, 1.0});
  return IntervalSet(std::move(pts), a(k_max()));
}

IntervalSet example1_set(double alpha, std::size_t k_max) {
  return Example1(alpha, k_max).set();
}

double psi_example1(double alpha, double r, std::size_t k_max) {
  return Example1(alpha, k_max).psi(r);
}

std::size_t min_cover(const IntervalSet& set, double r) {
  return min_cover_window(set, r, -kInf, kInf);
}

std::size_t min_cover_window(const IntervalSet& set, double r, double lo, double hi) {
  if (!(r > 0.0)) throw RangeError("cover radius must be positive");
  const auto comps = set.components();
  auto it = std::partition_point(comps.begin(), comps.end(),
                                 [&](const Interval& c) { return c.hi < lo; });
  CoverSweep sweep(r);
  for (; it != comps.end() && it->lo <= hi; ++it) {
    sweep.add(std::max(it->lo, lo), std::min(it->hi, hi));
  }
  return sweep.count();
}

PointCoverIndex::PointCoverIndex(std::span<const double> sorted_points, double r)
    : x_(sorted_points) {
  if (!(r > 0.0)) throw RangeError("cover radius must be positive");
  const std::size_t n = x_.size();
  if (n >= std::numeric_limits<std::uint32_t>::max()) {
    throw ResourceError("too many points for the cover index");
  }
  const double d = 2.0 * r;
  std::vector<std::uint32_t> next(n + 1, static_cast<std::uint32_t>(n));
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    j = std::max(j, i + 1);
    while (j < n && x_[j] - x_[i] <= d) ++j;
    next[i] = static_cast<std::uint32_t>(j);
  }
  up_.push_back(std::move(next));
  for (std::size_t span = 1; span < n; span <<= 1) {
    const auto& prev = up_.back();
    std::vector<std::uint32_t> level(n + 1);
    for (std::size_t i = 0; i <= n; ++i) level[i] = prev[prev[i]];
    up_.push_back(std::move(level));
  }
}

std::size_t PointCoverIndex::count(std::size_t first, double length) const {
  const std::size_t n = x_.size();
  if (first >= n) return 0;
  // last index with x - x_first <= length
  std::size_t end = first + 1;
  {
    std::size_t lo = first + 1;
    std::size_t hi = n;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (x_[mid] - x_[first] <= length) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    end = lo;
  }
  std::size_t pos = first;
  std::size_t balls = 1;
  for (std::size_t j = up_.size(); j-- > 0;) {
    const std::size_t to = up_[j][pos];
    if (to < end) {
      pos = to;
      balls += std::size_t{1} << j;
    }
  }
  return balls;
}

CoverCount PointCoverIndex::max_window(double R) const {
  CoverCount out;
  out.candidates = x_.size();
  for (std::size_t i = 0; i < x_.size(); ++i) {
    const std::size_t c = count(i, 2.0 * R);
    if (c > out.count) {
      out.count = c;
      out.center = x_[i] + R;
    }
  }
  return out;
}

CoverCount n_r_R(const IntervalSet& set, double r, double R, std::size_t candidate_cap) {
  if (!(r > 0.0 && r < R)) throw RangeError("n_r_R needs 0 < r < R");
  if (set.empty()) return {};
  if (set.points_only()) {
    std::vector<double> pts;
    pts.reserve(set.size());
    for (const auto& iv : set.intervals()) pts.push_back(iv.lo);
    return PointCoverIndex(pts, r).max_window(R);
  }

  // Window [L, L + 2R]. The greedy count changes only where L, L + 2R, or a
  // ball edge chained from L or from a component start crosses an endpoint.
  const auto comps = set.components();
  const double d = 2.0 * r;
  const double w = 2.0 * R;
  std::vector<double> ends;
  ends.reserve(2 * comps.size());
  for (const auto& c : comps) {
    ends.push_back(c.lo);
    if (c.hi > c.lo) ends.push_back(c.hi);
  }
  const auto max_j = static_cast<std::int64_t>(std::floor(w / d));

  // Pass 0 counts, pass 1 emits every stride-th chain candidate.
  std::vector<double> cands;
  std::size_t total = 0;
  std::size_t stride = 1;
  std::size_t seen = 0;
  auto emit = [&](int pass, double L) {
    if (pass == 0) {
      ++total;
    } else if (seen++ % stride == 0) {
      cands.push_back(L);
    }
  };
  for (int pass = 0; pass < 2; ++pass) {
    for (double e : ends) {
      emit(pass, e);
      emit(pass, e - R);
      emit(pass, e - w);
    }
    for (const auto& c : comps) {
      if (c.hi == c.lo) continue;
      // L inside c, ball edge L + j d on an endpoint e
      const auto from = std::upper_bound(ends.begin(), ends.end(), c.lo);
      const auto to = std::upper_bound(ends.begin(), ends.end(), c.hi + w);
      for (auto e = from; e != to; ++e) {
        const auto j_lo = std::max<std::int64_t>(1, std::ceil((*e - c.hi) / d));
        const auto j_hi = std::min<std::int64_t>(max_j, std::floor((*e - c.lo) / d));
        for (std::int64_t j = j_lo; j <= j_hi; ++j) emit(pass, *e - double(j) * d);
      }
    }
    for (std::size_t a = 0; a < comps.size(); ++a) {
      // ball edge chained from a component start meets the window's right end
      const double root = comps[a].lo;
      for (std::size_t b = a; b < comps.size() && comps[b].lo <= root + w; ++b) {
        const auto j_lo = std::max<std::int64_t>(1, std::ceil((comps[b].lo - root) / d));
        const auto j_hi = std::min<std::int64_t>(max_j, std::floor((comps[b].hi - root) / d));
        for (std::int64_t j = j_lo; j <= j_hi; ++j) emit(pass, root + double(j) * d - w);
      }
    }
    if (pass == 0 && total > candidate_cap) {
      stride = (total + candidate_cap - 1) / candidate_cap;
    }
    if (pass == 0) cands.reserve(total / stride + 1);
  }

  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  const std::size_t base = cands.size();
  for (std::size_t i = 0; i + 1 < base; ++i) cands.push_back(0.5 * (cands[i] + cands[i + 1]));
  std::sort(cands.begin(), cands.end());

  CoverCount out;
  out.stride = stride;
  out.candidates = cands.size();
  for (double L : cands) {
    if (L + w < set.min() || L > set.max()) continue;
    const std::size_t c = min_cover_window(set, r, L, L + w);
    if (c > out.count) {
      out.count = c;
      out.center = L + R;
    }
  }
  return out;
}

std::vector<double> geometric_ladder(double R_lo, double R_hi, int per_decade) {
  if (!(R_lo > 0.0) || per_decade < 1) throw RangeError("ladder needs R_lo > 0, per_decade >= 1");
  std::vector<double> out;
  for (int j = 0;; ++j) {
    const double R = R_lo * std::pow(10.0, double(j) / per_decade);
    if (!(R < R_hi)) break;
    out.push_back(R);
  }
  return out;
}

EmpiricalH empirical_h(const IntervalSet& set, double delta, std::span<const double> r_grid,
                       std::span<const double> R_ladder) {
  if (!(delta > 0.0 && delta < 1.0)) throw RangeError("delta must lie in (0, 1)");
  if (r_grid.empty()) throw RangeError("empty r grid");
  if (set.empty()) throw RangeError("empty set");
  const double r_min = *std::min_element(r_grid.begin(), r_grid.end());
  if (!(r_min > 0.0)) throw RangeError("radii must be positive");
  if (set.resolution() > r_min / 8.0) {
    throw RangeError("set resolves scales down to " + std::to_string(set.resolution()) +
                     " only; r = " + std::to_string(r_min) + " needs resolution <= r/8");
  }
  const double diam = set.diameter();
  std::vector<double> pts;
  if (set.points_only()) {
    for (const auto& iv : set.intervals()) pts.push_back(iv.lo);
  }

  EmpiricalH out;
  out.value = -kInf;
  for (double r : r_grid) {
    const double R_lo = std::pow(r, 1.0 - delta);
    std::vector<double> ladder;
    if (R_ladder.empty()) {
      ladder = geometric_ladder(R_lo, diam, 10);
    } else {
      for (double R : R_ladder) {
        if (R >= R_lo * (1.0 - 1e-12) && R < diam) ladder.push_back(R);
      }
    }
    std::optional<PointCoverIndex> index;
    if (set.points_only()) index.emplace(pts, r);
    for (double R : ladder) {
      if (!(R > r)) continue;
      const std::size_t n = index ? index->max_window(R).count : n_r_R(set, r, R).count;
      const double ratio = std::log(double(n)) / (std::log(R) - std::log(r));
      out.rows.push_back({r, R, n, ratio});
      if (ratio > out.value) {
        out.value = ratio;
        out.argmax = out.rows.size() - 1;
      }
    }
  }
  if (out.rows.empty()) throw RangeError("no admissible (r, R) pairs below the set diameter");
  return out;
}

Witness gap_witness(const IntervalSet& set, double x, double r, double threshold) {
  if (!(r > 0.0 && threshold > 0.0)) throw RangeError("witness needs r > 0, threshold > 0");
  return search(set, GapTree(set.components()), x, r, threshold);
}

Witness ud_witness(const IntervalSet& set, double x, double r, double c) {
  if (!(c > 0.0 && c < 1.0)) throw RangeError("c must lie in (0, 1)");
  return gap_witness(set, x, r, c * r);
}

bool recheck_witness(const IntervalSet& set, const Witness& w) {
  if (!w.pass) return false;
  const double th = w.threshold;
  if (!(w.part_lo <= w.x && w.x <= w.part_hi)) return false;
  if (w.part_lo < w.x - w.r || w.part_hi > w.x + w.r) return false;
  bool has_x = false;
  for (const auto& iv : set.intervals()) {
    if (iv.lo <= w.x && w.x <= iv.hi) has_x = true;
    const bool inside = iv.lo >= w.part_lo && iv.hi <= w.part_hi;
    if (inside) continue;
    const bool left = iv.hi < w.part_lo;
    const bool right = iv.lo > w.part_hi;
    if (!left && !right) return false;  // straddles the part boundary
    // E ∩ B(x, th) must lie in the part
    if (iv.hi >= w.x - th && iv.lo <= w.x + th) return false;
    const double dist = left ? w.part_lo - iv.hi : iv.lo - w.part_hi;
    if (dist < th) return false;
  }
  return has_x;
}

std::vector<double> sample_points(const IntervalSet& set, std::size_t max_samples) {
  std::vector<double> all;
  all.reserve(2 * set.size());
  for (const auto& iv : set.intervals()) {
    all.push_back(iv.lo);
    if (iv.hi > iv.lo) all.push_back(iv.hi);
  }
  all.erase(std::unique(all.begin(), all.end()), all.end());
  if (max_samples == 0 || all.size() <= max_samples) return all;
  std::vector<double> out;
  out.reserve(max_samples);
  for (std::size_t i = 0; i < max_samples; ++i) out.push_back(all[i * all.size() / max_samples]);
  return out;
}

DisconnectSummary qud_check(const IntervalSet& set, const std::function<double(double)>& psi,
                            std::span<const double> r_grid, std::size_t max_samples) {
  if (set.empty()) throw RangeError("empty set");
  const GapTree tree(set.components());
  const std::vector<double> xs = sample_points(set, max_samples);
  const double diam = set.diameter();
  DisconnectSummary out;
  double worst_all = kInf;
  for (double r : r_grid) {
    if (!(r > 0.0 && r <= diam)) {
      throw RangeError("radius " + std::to_string(r) + " outside (0, diameter]");
    }
    const double th = psi(r);
    if (!(th > 0.0 && th < r)) {
      throw RangeError("inner threshold must satisfy 0 < psi(r) < r at r = " + std::to_string(r));
    }
    DisconnectRow row;
    row.r = r;
    row.threshold = th;
    double worst = kInf;
    for (double x : xs) {
      const Witness w = search(set, tree, x, r, th);
      ++row.samples;
      if (w.pass) ++row.passed;
      const double mg = margin(w);
      if (row.samples == 1 || mg < worst) {
        worst = mg;
        row.worst = w;
      }
    }
    out.samples += row.samples;
    out.passed += row.passed;
    if (out.rows.empty() || worst < worst_all) {
      worst_all = worst;
      out.worst = row.worst;
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

DisconnectSummary ud_check(const IntervalSet& set, double c, std::span<const double> r_grid,
                           std::size_t max_samples) {
  if (!(c > 0.0 && c < 1.0)) throw RangeError("c must lie in (0, 1)");
  return qud_check(set, [c](double r) { return c * r; }, r_grid, max_samples);
}

}  // namespace morandim
