#include "morandim/prefix_table.hpp"

#include <algorithm>
#include <cmath>

#include "morandim/error.hpp"

namespace morandim {
namespace {

constexpr double kLogSlack = 1e-12;

}  // namespace

PrefixTable::PrefixTable(std::span<const double> log_branch,
                         std::span<const double> log_ratio) {
  if (log_branch.size() != log_ratio.size()) {
    throw RangeError("prefix table: branch and ratio level counts differ");
  }
  ln_.resize(log_branch.size() + 1);
  lc_.resize(log_ratio.size() + 1);
  ln_[0] = 0.0;
  lc_[0] = 0.0;
  for (std::size_t k = 1; k < ln_.size(); ++k) {
    ln_[k] = ln_[k - 1] + log_branch[k - 1];
    lc_[k] = lc_[k - 1] + log_ratio[k - 1];
  }
}

bool PrefixTable::ratio_bounded_below() const {
  const std::size_t depth = this->depth();
  if (depth < 2) return true;
  const std::size_t mid = depth / 2;
  double head = 0.0;
  double tail = 0.0;
  for (std::size_t k = 1; k <= mid; ++k) head = std::min(head, log_ratio(k));
  for (std::size_t k = mid + 1; k <= depth; ++k) tail = std::min(tail, log_ratio(k));
  return tail >= head - std::log(2.0);
}

PrefixTable build_prefix(const MoranSpec& spec, std::size_t depth,
                         std::size_t max_depth) {
  if (depth > max_depth) {
    throw ResourceError("prefix depth " + std::to_string(depth) +
                        " exceeds the configured limit " + std::to_string(max_depth));
  }
  check_rule(spec.branch, RuleRole::branch);
  const auto* rule = std::get_if<SequenceRule>(&spec.ratio);
  if (rule != nullptr) check_rule(*rule, RuleRole::ratio);

  std::vector<double> log_n(depth);
  std::vector<double> log_c(depth);
  for (std::size_t k = 1; k <= depth; ++k) {
    const double ln = eval_log_branch(spec.branch, k);
    double lc = 0.0;
    if (rule != nullptr) {
      lc = eval_log_ratio(*rule, k);
    } else {
      const auto children = eval_child_ratios(spec, k);
      const auto [lo, hi] = std::minmax_element(children.begin(), children.end());
      if (*hi - *lo > 1e-15 * *hi) {
        throw ValidationError(k, "per-child ratios differ; use the pressure engine");
      }
      if (!(*lo > 0.0 && *hi < 1.0)) throw ValidationError(k, "c_k not in (0, 1)");
      lc = std::log(*hi);
    }
    if (ln + lc > kLogSlack) throw ValidationError(k, "c_k > 1/n_k");
    log_n[k - 1] = ln;
    log_c[k - 1] = lc;
  }
  return PrefixTable(log_n, log_c);
}

SlowChangeReport slow_change_diagnostic(const PrefixTable& table, double threshold) {
  const std::size_t depth = table.depth();
  if (depth < 10) throw RangeError("slow-change diagnostic needs depth >= 10");
  SlowChangeReport out;
  out.tail_from = (9 * depth + 9) / 10;  // ceil(0.9 K)
  for (std::size_t k = out.tail_from; k <= depth; ++k) {
    const double v = table.log_ratio(k) / table.lc(k);
    out.tail_ratios.push_back(v);
    out.tail_max = std::max(out.tail_max, v);
  }
  out.min_branch_ratio = table.log_branch(1) / -table.log_ratio(1);
  out.min_branch_ratio_level = 1;
  for (std::size_t k = 2; k <= depth; ++k) {
    const double v = table.log_branch(k) / -table.log_ratio(k);
    if (v < out.min_branch_ratio) {
      out.min_branch_ratio = v;
      out.min_branch_ratio_level = k;
    }
  }
  out.plausible = out.tail_max < threshold && out.min_branch_ratio > 0.0;
  return out;
}

}  // namespace morandim
