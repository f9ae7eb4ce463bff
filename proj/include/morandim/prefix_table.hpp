#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "morandim/seqspec.hpp"

namespace morandim {

inline constexpr std::size_t kDefaultMaxDepth = std::size_t{1} << 24;

// Cumulative logs of the level products:
//   ln(k) = log(n_1 ... n_k),  lc(k) = log(c_1 ... c_k),  ln(0) = lc(0) = 0.
// Immutable after construction.
class PrefixTable {
 public:
  PrefixTable() : ln_{0.0}, lc_{0.0} {}
  // Takes per-level logs (index 0 is level 1) and accumulates them.
  PrefixTable(std::span<const double> log_branch, std::span<const double> log_ratio);

  std::size_t depth() const { return ln_.size() - 1; }
  double ln(std::size_t k) const { return ln_[k]; }
  double lc(std::size_t k) const { return lc_[k]; }
  double log_branch(std::size_t k) const { return ln_[k] - ln_[k - 1]; }
  double log_ratio(std::size_t k) const { return lc_[k] - lc_[k - 1]; }
  std::span<const double> ln_values() const { return ln_; }
  std::span<const double> lc_values() const { return lc_; }

  // Heuristic read of inf_k c_k > 0 on a finite table: the smallest log c_k
  // over the deeper half does not undercut the shallower half by more than
  // log 2.
  bool ratio_bounded_below() const;

 private:
  std::vector<double> ln_;
  std::vector<double> lc_;
};

// One pass over levels 1..depth. Throws ValidationError naming the first bad
// level and ResourceError if depth > max_depth. Per-child specs are accepted
// only when every level's children share one ratio.
PrefixTable build_prefix(const MoranSpec& spec, std::size_t depth,
                         std::size_t max_depth = kDefaultMaxDepth);

struct SlowChangeReport {
  std::size_t tail_from = 0;            // first k of the reported tail
  std::vector<double> tail_ratios;      // log c_k / log(c_1...c_k)
  double tail_max = 0.0;
  double min_branch_ratio = 0.0;        // min_k log n_k / -log c_k
  std::size_t min_branch_ratio_level = 0;
  bool plausible = false;
};

// Tail is the last tenth of the table, k in [ceil(0.9 K), K]. Requires K >= 10.
SlowChangeReport slow_change_diagnostic(const PrefixTable& table,
                                        double threshold = 0.01);

}  // namespace morandim
