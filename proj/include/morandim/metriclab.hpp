#pragma once

// Metric side: explicit interval realizations of Moran constructions, exact
// one-dimensional covering numbers, two-scale counts N_{r,R}, the empirical
// restricted exponent h(delta), and gap-cut witnesses for (quasi) uniform
// disconnectedness.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "morandim/interval_set.hpp"
#include "morandim/seqspec.hpp"

namespace morandim {

inline constexpr std::size_t kDefaultIntervalCap = std::size_t{1} << 24;
inline constexpr std::size_t kCandidateCap = 1'000'000;

// MORANDIM_CAP if set to a positive integer, else kDefaultIntervalCap.
std::size_t interval_cap_from_env();

// Depth-k basic intervals. Throws ResourceError when n_1...n_depth > cap.
IntervalSet realize(const MoranSpec& spec, std::size_t depth,
                    std::size_t cap = kDefaultIntervalCap);

// Smallest k with |J| c_1...c_k <= r / 8.
std::size_t realization_depth(const MoranSpec& spec, double r);

// The countable set {0, 1} U {a_k}, a_k = prod_{i<=k} (1 - (i+1)^-alpha).
class Example1 {
 public:
  Example1(double alpha, std::size_t k_max);

  double alpha() const { return alpha_; }
  std::size_t k_max() const { return log_a_.size() - 1; }
  double log_a(std::size_t k) const { return log_a_.at(k); }  // log_a(0) == 0
  double a(std::size_t k) const;
  // a_k - a_{k+1} = a_k (k+2)^-alpha, for 0 <= k <= k_max.
  double gap(std::size_t k) const;
  // The k with a_k <= r < a_{k-1}. RangeError unless a_{k_max} <= r < 1.
  std::size_t bracket(double r) const;
  // (a_k - a_{k+1}) / 2 on a_k <= r < a_{k-1}.
  double psi(double r) const;
  // Smallest k >= 1 with (k+2)^-alpha <= c/3: from there on every gap near
  // a_k is shorter than c a_k / 2.
  std::size_t ud_failure_level(double c) const;
  IntervalSet set() const;

 private:
  double alpha_;
  std::vector<double> log_a_;
};

IntervalSet example1_set(double alpha, std::size_t k_max);
double psi_example1(double alpha, double r, std::size_t k_max = 5000);

// Minimal number of closed radius-r balls covering the set (greedy sweep).
std::size_t min_cover(const IntervalSet& set, double r);

// min_cover of the set clipped to [lo, hi], without materializing the clip.
std::size_t min_cover_window(const IntervalSet& set, double r, double lo, double hi);

struct CoverCount {
  std::size_t count = 0;
  double center = 0.0;         // a maximizing ball centre
  std::size_t candidates = 0;  // window positions enumerated
  std::size_t stride = 1;      // > 1 when the candidate cap forced thinning
};

// max_x min_cover(set ∩ B(x, R), r) over an enumeration of window positions
// that is exact unless `stride` comes back > 1.
CoverCount n_r_R(const IntervalSet& set, double r, double R,
                 std::size_t candidate_cap = kCandidateCap);

// Greedy covers of a point set at one radius, answered in O(log n) per window
// by binary lifting over next(i) = first point beyond x_i + 2r.
class PointCoverIndex {
 public:
  PointCoverIndex(std::span<const double> sorted_points, double r);
  // Balls used on the points of [x_first, x_first + length].
  std::size_t count(std::size_t first, double length) const;
  // max over windows of length 2R starting at a point.
  CoverCount max_window(double R) const;

 private:
  std::span<const double> x_;
  std::vector<std::vector<std::uint32_t>> up_;  // up_[j][i]: 2^j jumps from i
};

struct EmpiricalRow {
  double r = 0.0;
  double R = 0.0;
  std::size_t n = 0;
  double log_ratio = 0.0;  // log N / (log R - log r)
};

struct EmpiricalH {
  double value = 0.0;
  std::vector<EmpiricalRow> rows;
  std::size_t argmax = 0;  // row attaining value
};

// R_lo * 10^(j / per_decade) for j = 0, 1, ... while below R_hi.
std::vector<double> geometric_ladder(double R_lo, double R_hi, int per_decade);

// max over r in r_grid and R in the admissible part of R_ladder
// ([r^(1-delta), diameter)) of log N_{r,R} / log(R/r). An empty ladder means
// a geometric ladder from r^(1-delta), ten per decade. Throws RangeError if
// the set's resolution exceeds min(r_grid) / 8.
EmpiricalH empirical_h(const IntervalSet& set, double delta, std::span<const double> r_grid,
                       std::span<const double> R_ladder = {});

struct Gap {
  double lo = 0.0;  // right end of the component before the gap
  double hi = 0.0;  // left end of the component after it
  double length() const { return hi - lo; }
};

// A candidate E_{x,r}: the components in [part_lo, part_hi], split off by the
// gaps left_cut / right_cut (absent when the set ends inside B(x, r)).
struct Witness {
  double x = 0.0;
  double r = 0.0;
  double threshold = 0.0;
  std::optional<Gap> left_cut;
  std::optional<Gap> right_cut;
  double part_lo = 0.0;
  double part_hi = 0.0;
  double separation = 0.0;  // +inf when neither side needs a cut
  bool pass = false;
};

// Searches gap-cut subsets with E ∩ B(x, threshold) ⊆ part ⊆ B(x, r) and
// separation >= threshold. Throws RangeError if x is not in the set.
Witness gap_witness(const IntervalSet& set, double x, double r, double threshold);
Witness ud_witness(const IntervalSet& set, double x, double r, double c);

// Re-derives the pass conditions of a witness by a linear scan of the set.
bool recheck_witness(const IntervalSet& set, const Witness& witness);

struct DisconnectRow {
  double r = 0.0;
  double threshold = 0.0;
  std::size_t samples = 0;
  std::size_t passed = 0;
  Witness worst;  // smallest separation / threshold at this r
};

struct DisconnectSummary {
  std::vector<DisconnectRow> rows;
  std::size_t samples = 0;
  std::size_t passed = 0;
  Witness worst;
  bool all_pass() const { return passed == samples; }
};

// Sample points: every interval endpoint, thinned evenly to max_samples.
std::vector<double> sample_points(const IntervalSet& set, std::size_t max_samples);

// Runs gap_witness with threshold psi(r) for each r (r <= diameter) and each
// sampled x. Throws RangeError if psi(r) >= r.
DisconnectSummary qud_check(const IntervalSet& set, const std::function<double(double)>& psi,
                            std::span<const double> r_grid, std::size_t max_samples = 10'000);
DisconnectSummary ud_check(const IntervalSet& set, double c, std::span<const double> r_grid,
                           std::size_t max_samples = 10'000);

}  // namespace morandim
