#include "morandim/dims.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "morandim/error.hpp"

namespace morandim {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct QRange {
  std::size_t lo;
  std::size_t hi;
};

QRange tail_range(std::size_t depth) { return {std::max<std::size_t>(1, depth / 2), depth}; }
QRange drift_range(std::size_t depth) {
  return {std::max<std::size_t>(1, depth / 4), std::max<std::size_t>(1, depth / 2)};
}

inline double window_exponent(std::span<const double> ln, std::span<const double> lc,
                              std::size_t p, std::size_t q) {
  return (ln[q] - ln[p - 1]) / (lc[p - 1] - lc[q]);
}

void require_depth(const PrefixTable& table, std::size_t min_depth, const char* what) {
  if (table.depth() < min_depth) {
    throw RangeError(std::string(what) + " needs table depth >= " +
                     std::to_string(min_depth));
  }
}

void require_decreasing_unit_grid(std::span<const double> grid, const char* name) {
  if (grid.empty()) throw RangeError(std::string(name) + " grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0 && grid[i] < 1.0)) {
      throw RangeError(std::string(name) + " grid entries must lie in (0, 1)");
    }
    if (i > 0 && !(grid[i] < grid[i - 1])) {
      throw RangeError(std::string(name) + " grid must be strictly decreasing");
    }
  }
}

std::size_t resolve_stride(std::size_t requested, std::size_t depth) {
  return requested == 0 ? default_q_stride(depth) : requested;
}

// For each grid entry i, max over sampled q in `range` of
// max_{1 <= p <= limits(q)[i]} s_{p,q}. q is sampled downward from range.hi so
// the deepest level is always included. When sampling skips levels, p = 1 is
// still scanned at every q so the result dominates the box surrogate.
template <class LimitFn>
std::vector<double> window_max(const PrefixTable& table, QRange range, std::size_t stride,
                               std::size_t grid_size, LimitFn&& limits) {
  const auto ln = table.ln_values();
  const auto lc = table.lc_values();
  std::vector<double> best(grid_size, kNegInf);
  std::vector<std::size_t> lim(grid_size);
  std::vector<std::size_t> order(grid_size);
  for (std::size_t q = range.hi; q >= range.lo; ) {
    limits(q, lim);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return lim[a] < lim[b]; });
    double running = kNegInf;
    std::size_t p = 1;
    for (std::size_t idx : order) {
      for (; p <= lim[idx]; ++p) running = std::max(running, window_exponent(ln, lc, p, q));
      best[idx] = std::max(best[idx], running);
    }
    if (q < range.lo + stride) break;
    q -= stride;
  }
  if (stride > 1) {
    double first = kNegInf;
    for (std::size_t q = range.lo; q <= range.hi; ++q) {
      first = std::max(first, window_exponent(ln, lc, 1, q));
    }
    for (double& b : best) b = std::max(b, first);
  }
  return best;
}

std::size_t eta_limit(std::size_t q, double eta) {
  const double bound = std::floor(static_cast<double>(q) * (1.0 - eta) + 1e-9);
  return std::max<std::size_t>(1, static_cast<std::size_t>(bound));
}

bool nondecreasing(const std::vector<double>& v) {
  return std::is_sorted(v.begin(), v.end());
}

double log_sum_exp_scaled(const std::vector<double>& log_c, double s) {
  double peak = kNegInf;
  for (double lc : log_c) peak = std::max(peak, s * lc);
  double acc = 0.0;
  for (double lc : log_c) acc += std::exp(s * lc - peak);
  return peak + std::log(acc);
}

}  // namespace

std::size_t default_q_stride(std::size_t depth) {
  return std::max<std::size_t>(1, (depth + 4095) / 4096);
}

double s_pq(const PrefixTable& table, std::size_t p, std::size_t q) {
  if (p < 1 || p > q || q > table.depth()) {
    throw RangeError("s_pq needs 1 <= p <= q <= K (p=" + std::to_string(p) +
                     ", q=" + std::to_string(q) + ", K=" + std::to_string(table.depth()) +
                     ")");
  }
  return window_exponent(table.ln_values(), table.lc_values(), p, q);
}

BoxEstimate box_hausdorff(const PrefixTable& table) {
  require_depth(table, 16, "box_hausdorff");
  const auto ln = table.ln_values();
  const auto lc = table.lc_values();
  auto extremes = [&](QRange r) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = kNegInf;
    for (std::size_t k = r.lo; k <= r.hi; ++k) {
      const double v = window_exponent(ln, lc, 1, k);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return std::pair{lo, hi};
  };
  const auto [lo, hi] = extremes(tail_range(table.depth()));
  const auto [dlo, dhi] = extremes(drift_range(table.depth()));
  return {lo, hi, std::abs(lo - dlo), std::abs(hi - dhi), table.depth()};
}

std::size_t l_q_delta(const PrefixTable& table, std::size_t q, double delta) {
  if (q < 1 || q > table.depth()) throw RangeError("l_q_delta needs 1 <= q <= K");
  if (!(delta > 0.0 && delta < 1.0)) throw RangeError("l_q_delta needs delta in (0, 1)");
  const auto lc = table.lc_values();
  const double total = lc[q];
  // Prefix differences carry rounding of order q * eps; a ratio that equals
  // delta in exact arithmetic must not pass the strict test.
  constexpr double kTieSlack = 1e-12;
  auto admissible = [&](std::size_t p) {
    return (lc[q] - lc[p - 1]) / total > delta + kTieSlack;
  };
  // ratio is 1 at p = 1 and strictly decreasing in p
  std::size_t lo = 1;
  std::size_t hi = q;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    if (admissible(mid)) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

double h_delta(const PrefixTable& table, double delta, WindowOptions options) {
  require_depth(table, 16, "h_delta");
  if (!(delta > 0.0 && delta < 1.0)) throw RangeError("h_delta needs delta in (0, 1)");
  const std::size_t stride = resolve_stride(options.q_stride, table.depth());
  return window_max(table, tail_range(table.depth()), stride, 1,
                    [&](std::size_t q, std::vector<std::size_t>& lim) {
                      lim[0] = l_q_delta(table, q, delta);
                    })[0];
}

DimEstimate quasi_assouad(const PrefixTable& table, std::span<const double> delta_grid,
                          WindowOptions options) {
  require_depth(table, 16, "quasi_assouad");
  require_decreasing_unit_grid(delta_grid, "delta");
  const std::size_t depth = table.depth();
  const std::size_t stride = resolve_stride(options.q_stride, depth);
  auto limits = [&](std::size_t q, std::vector<std::size_t>& lim) {
    for (std::size_t i = 0; i < delta_grid.size(); ++i) lim[i] = l_q_delta(table, q, delta_grid[i]);
  };
  DimEstimate out;
  out.grid.assign(delta_grid.begin(), delta_grid.end());
  out.per_grid = window_max(table, tail_range(depth), stride, delta_grid.size(), limits);
  out.value = out.per_grid.back();
  out.depth = depth;
  out.q_stride = stride;
  out.monotone_ok = nondecreasing(out.per_grid);
  const double smallest = delta_grid.back();
  const double earlier = window_max(table, drift_range(depth), stride, 1,
                                    [&](std::size_t q, std::vector<std::size_t>& lim) {
                                      lim[0] = l_q_delta(table, q, smallest);
                                    })[0];
  out.drift = std::abs(out.value - earlier);
  return out;
}

DimEstimate quasi_assouad_eta(const PrefixTable& table, std::span<const double> eta_grid,
                              WindowOptions options) {
  require_depth(table, 16, "quasi_assouad_eta");
  require_decreasing_unit_grid(eta_grid, "eta");
  const std::size_t depth = table.depth();
  const std::size_t stride = resolve_stride(options.q_stride, depth);
  auto limits = [&](std::size_t q, std::vector<std::size_t>& lim) {
    for (std::size_t i = 0; i < eta_grid.size(); ++i) lim[i] = eta_limit(q, eta_grid[i]);
  };
  DimEstimate out;
  out.grid.assign(eta_grid.begin(), eta_grid.end());
  out.per_grid = window_max(table, tail_range(depth), stride, eta_grid.size(), limits);
  out.value = out.per_grid.back();
  out.depth = depth;
  out.q_stride = stride;
  out.monotone_ok = nondecreasing(out.per_grid);
  const double smallest = eta_grid.back();
  const double earlier = window_max(table, drift_range(depth), stride, 1,
                                    [&](std::size_t q, std::vector<std::size_t>& lim) {
                                      lim[0] = eta_limit(q, smallest);
                                    })[0];
  out.drift = std::abs(out.value - earlier);
  if (!table.ratio_bounded_below()) {
    out.warnings.emplace_back("c_k appears to tend to 0 but the eta form assumes inf c_k > 0");
  }
  return out;
}

DimEstimate assouad_llmx(const PrefixTable& table, std::span<const std::size_t> m_grid) {
  const std::size_t depth = table.depth();
  if (m_grid.empty()) throw RangeError("m grid is empty");
  for (std::size_t i = 0; i < m_grid.size(); ++i) {
    if (m_grid[i] < 1) throw RangeError("m grid entries must be >= 1");
    if (i > 0 && !(m_grid[i] > m_grid[i - 1])) {
      throw RangeError("m grid must be strictly increasing");
    }
  }
  if (2 * m_grid.back() > depth) {
    throw RangeError("assouad_llmx needs max(m) <= K/2 (K=" + std::to_string(depth) + ")");
  }
  const auto ln = table.ln_values();
  const auto lc = table.lc_values();
  // sup over windows (k+1 .. k+m) with k+1 >= first and k+m <= last
  auto sup_windows = [&](std::size_t m, std::size_t first, std::size_t last) {
    double best = kNegInf;
    for (std::size_t start = first; start + m - 1 <= last; ++start) {
      best = std::max(best, window_exponent(ln, lc, start, start + m - 1));
    }
    return best;
  };
  DimEstimate out;
  out.depth = depth;
  for (std::size_t m : m_grid) {
    out.grid.push_back(static_cast<double>(m));
    out.per_grid.push_back(sup_windows(m, 1, depth));
  }
  out.value = out.per_grid.back();
  out.monotone_ok = nondecreasing(out.per_grid);
  const std::size_t m = m_grid.back();
  const double late = sup_windows(m, std::max<std::size_t>(1, depth / 2), depth);
  const double early =
      sup_windows(m, std::max<std::size_t>(1, depth / 4), std::max<std::size_t>(1, depth / 2));
  out.drift = (late == kNegInf || early == kNegInf) ? 0.0 : std::abs(late - early);
  if (!table.ratio_bounded_below()) {
    out.warnings.emplace_back("c_k appears to tend to 0 but the window formula assumes inf c_k > 0");
  }
  return out;
}

double pressure_root(std::span<const std::vector<double>> levels, double tol,
                     int max_iterations) {
  if (levels.empty()) throw RangeError("pressure_root needs at least one level");
  std::vector<std::vector<double>> logs;
  logs.reserve(levels.size());
  for (const auto& level : levels) {
    if (level.empty()) throw RangeError("pressure_root: empty level");
    auto& out = logs.emplace_back();
    for (double c : level) {
      if (!(c > 0.0 && c < 1.0)) throw RangeError("pressure_root needs every c in (0, 1)");
      out.push_back(std::log(c));
    }
  }
  auto log_pressure = [&](double s) {
    double acc = 0.0;
    for (const auto& l : logs) acc += log_sum_exp_scaled(l, s);
    return acc;
  };
  double lo = 0.0;
  double hi = 1.0;
  for (int guard = 0; log_pressure(hi) >= 0.0; ++guard) {
    if (guard > 60) throw ConvergenceError("pressure_root: could not bracket the root");
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; hi - lo > tol; ++it) {
    if (it >= max_iterations) {
      throw ConvergenceError("pressure_root: tolerance not reached within iteration cap");
    }
    const double mid = 0.5 * (lo + hi);
    if (log_pressure(mid) >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

DimEstimate quasi_assouad_general(const MoranSpec& spec, std::span<const double> eta_grid,
                                  std::size_t depth, GeneralOptions options) {
  if (depth < 16) throw RangeError("quasi_assouad_general needs depth >= 16");
  require_decreasing_unit_grid(eta_grid, "eta");
  if (options.p_stride < 1) throw RangeError("p_stride must be >= 1");
  std::vector<std::vector<double>> log_c(depth);
  for (std::size_t k = 1; k <= depth; ++k) {
    for (double c : eval_child_ratios(spec, k)) {
      if (!(c > 0.0 && c < 1.0)) throw ValidationError(k, "c_{k,i} not in (0, 1)");
      log_c[k - 1].push_back(std::log(c));
    }
  }
  const std::size_t stride = resolve_stride(options.q_stride, depth);
  const std::size_t p_stride = options.p_stride;

  std::vector<double> cumulative(depth + 1);
  std::vector<double> aligned_min(depth + 1);
  // true when some admissible window (p, q) has log Delta_{p,q}(s) >= 0
  auto some_window_reaches = [&](double s, double eta, QRange range) {
    cumulative[0] = 0.0;
    for (std::size_t k = 1; k <= depth; ++k) {
      cumulative[k] = cumulative[k - 1] + log_sum_exp_scaled(log_c[k - 1], s);
    }
    // aligned_min[j] = min F[j'] over j' <= j with j' a multiple of p_stride
    double running = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j <= depth; ++j) {
      if (j % p_stride == 0) running = std::min(running, cumulative[j]);
      aligned_min[j] = running;
    }
    for (std::size_t q = range.hi; q >= range.lo;) {
      const std::size_t limit = eta_limit(q, eta);
      const double floor_val = std::min(aligned_min[limit - 1], cumulative[limit - 1]);
      if (cumulative[q] >= floor_val) return true;
      if (q < range.lo + stride) break;
      q -= stride;
    }
    for (std::size_t q = range.lo; q <= range.hi; ++q) {
      if (cumulative[q] >= 0.0) return true;
    }
    return false;
  };
  auto solve = [&](double eta, QRange range) {
    double lo = 0.0;
    double hi = 1.0;
    for (int guard = 0; some_window_reaches(hi, eta, range); ++guard) {
      if (guard > 60) throw ConvergenceError("quasi_assouad_general: cannot bracket");
      lo = hi;
      hi *= 2.0;
    }
    for (int it = 0; hi - lo > options.tol; ++it) {
      if (it >= 200) throw ConvergenceError("quasi_assouad_general: iteration cap");
      const double mid = 0.5 * (lo + hi);
      if (some_window_reaches(mid, eta, range)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  DimEstimate out;
  out.depth = depth;
  out.q_stride = stride;
  out.grid.assign(eta_grid.begin(), eta_grid.end());
  for (double eta : eta_grid) out.per_grid.push_back(solve(eta, tail_range(depth)));
  out.value = out.per_grid.back();
  out.monotone_ok = nondecreasing(out.per_grid);
  out.drift = std::abs(out.value - solve(eta_grid.back(), drift_range(depth)));
  return out;
}

double scale_function_log(const PrefixTable& table, double log_r, double length) {
  if (!(length > 0.0)) throw RangeError("scale_function needs |J| > 0");
  const double x = log_r - std::log(length);
  if (!(x < 0.0)) throw RangeError("scale_function needs 0 < r < |J|");
  const auto lc = table.lc_values();
  if (lc.back() > x) {
    throw DepthError(table.depth(),
                     "scale r/|J| = exp(" + std::to_string(x) + ") lies below c_1...c_K at K=" +
                         std::to_string(table.depth()) + "; deepen the table");
  }
  // first k with lc[k] <= x; lc is strictly decreasing and lc[0] = 0 > x
  const auto it = std::partition_point(lc.begin(), lc.end(), [x](double v) { return v > x; });
  const auto k = static_cast<std::size_t>(std::distance(lc.begin(), it));
  return table.ln(k) / -table.lc(k);
}

double scale_function(const PrefixTable& table, double r, double length) {
  if (!(r > 0.0)) throw RangeError("scale_function needs r > 0");
  return scale_function_log(table, std::log(r), length);
}

std::vector<double> log_radius_grid(double log_r_max, double log_r_min, int per_decade) {
  if (per_decade < 1) throw RangeError("per-decade count must be >= 1");
  if (!(log_r_min < log_r_max)) throw RangeError("radius grid needs r_min < r_max");
  const double step = std::log(10.0) / per_decade;
  const auto count = static_cast<std::size_t>(std::floor((log_r_max - log_r_min) / step + 1e-9));
  std::vector<double> out;
  out.reserve(count + 1);
  for (std::size_t i = 0; i <= count; ++i) out.push_back(log_r_max - static_cast<double>(i) * step);
  return out;
}

EquivReport equiv_ratio(const PrefixTable& a, double length_a, const PrefixTable& b,
                        double length_b, std::span<const double> log_r_grid,
                        EquivOptions options) {
  if (log_r_grid.empty()) throw RangeError("equivalence grid is empty");
  for (std::size_t i = 1; i < log_r_grid.size(); ++i) {
    if (!(log_r_grid[i] < log_r_grid[i - 1])) {
      throw RangeError("equivalence grid must be strictly decreasing");
    }
  }
  EquivReport out;
  out.tolerance = options.tolerance;
  out.log_r.assign(log_r_grid.begin(), log_r_grid.end());
  for (double log_r : log_r_grid) {
    const double ga = scale_function_log(a, log_r, length_a);
    const double gb = scale_function_log(b, log_r, length_b);
    out.g_a.push_back(ga);
    out.g_b.push_back(gb);
    out.ratio.push_back(ga / gb);
  }
  const std::size_t tail = std::min(options.tail_points, out.ratio.size());
  out.tail_from = out.ratio.size() - tail;
  for (std::size_t i = out.tail_from; i < out.ratio.size(); ++i) {
    out.tail_max_deviation = std::max(out.tail_max_deviation, std::abs(out.ratio[i] - 1.0));
  }
  out.equivalent = out.tail_max_deviation <= options.tolerance;
  return out;
}

}  // namespace morandim
