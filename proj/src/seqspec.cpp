#include "morandim/seqspec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "morandim/error.hpp"

namespace morandim {
namespace {

// log n_k + log c_k may round a hair above zero when n_k c_k == 1.
constexpr double kLogSlack = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const char* selector_name(RegionSelector s) {
  switch (s) {
    case RegionSelector::first_block: return "(q_t, 2q_t]";
    case RegionSelector::tail_block: return "(2q_t, 2q_t+t]";
    case RegionSelector::otherwise: return "else";
  }
  return "?";
}

bool is_integer_value(double x) {
  return std::isfinite(x) && x == std::floor(x);
}

struct BlockHit {
  RegionSelector select = RegionSelector::otherwise;
  std::int64_t t = 0;
  std::int64_t q = 0;
};

BlockHit locate(const Breakpoints& bp, std::size_t k) {
  const auto kk = static_cast<std::int64_t>(k);
  // largest t with q_t < k
  auto it = std::lower_bound(bp.q.begin(), bp.q.end(), kk);
  if (it == bp.q.begin()) return {};
  const auto idx = static_cast<std::int64_t>(std::distance(bp.q.begin(), it)) - 1;
  const std::int64_t t = idx + 1;
  const std::int64_t q = bp.q[static_cast<std::size_t>(idx)];
  if (kk <= 2 * q) return {RegionSelector::first_block, t, q};
  if (kk <= 2 * q + t) return {RegionSelector::tail_block, t, q};
  return {};
}

const Region& region_for(const BlocksRule& rule, RegionSelector s) {
  const Region* fallback = nullptr;
  for (const auto& r : rule.regions) {
    if (r.select == s) return r;
    if (r.select == RegionSelector::otherwise) fallback = &r;
  }
  if (fallback == nullptr) throw ValidationError("blocks rule has no 'else' region");
  return *fallback;
}

double region_value(const RegionValue& v, std::size_t k, const BlockHit& hit) {
  switch (v.form) {
    case RegionValue::Form::constant:
      return v.value;
    case RegionValue::Form::half_one_minus_inverse_2t:
      return (1.0 - 1.0 / (2.0 * static_cast<double>(hit.t))) / 2.0;
    case RegionValue::Form::inverse_affine: {
      const double x = static_cast<double>(k) / static_cast<double>(hit.q);
      return 1.0 / (v.u + v.v * x);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double raw_value(const SequenceRule& rule, std::size_t k) {
  return std::visit(
      Overloaded{
          [](const ConstantRule& r) { return r.value; },
          [k](const ListTailRule& r) {
            return k <= r.values.size() ? r.values[k - 1] : r.tail;
          },
          [k](const GeometricRule& r) {
            return std::pow(r.base, static_cast<double>(r.exponent) *
                                        static_cast<double>(k));
          },
          [k](const BlocksRule& r) {
            const BlockHit hit = locate(r.breakpoints, k);
            return region_value(region_for(r, hit.select).value, k, hit);
          },
      },
      rule);
}

double raw_log_value(const SequenceRule& rule, std::size_t k) {
  if (const auto* g = std::get_if<GeometricRule>(&rule)) {
    return static_cast<double>(g->exponent) * static_cast<double>(k) *
           std::log(g->base);
  }
  return std::log(raw_value(rule, k));
}

void check_breakpoints(const Breakpoints& bp, bool needs_tail_room) {
  if (bp.q.empty()) throw ValidationError("blocks rule: empty breakpoint list");
  if (bp.q.front() < 1) throw ValidationError("blocks rule: q_1 must be >= 1");
  for (std::size_t i = 1; i < bp.q.size(); ++i) {
    const std::int64_t prev = bp.q[i - 1];
    const std::int64_t cur = bp.q[i];
    const auto t = static_cast<std::int64_t>(i);
    if (cur <= 2 * prev) {
      throw ValidationError("blocks rule: breakpoints need q_{t+1} > 2 q_t (t=" +
                            std::to_string(t) + ")");
    }
    if (needs_tail_room && cur < 2 * prev + t) {
      throw ValidationError(
          "blocks rule: (2q_t, 2q_t+t] overlaps (q_{t+1}, 2q_{t+1}] at t=" +
          std::to_string(t));
    }
  }
}

void check_affine(const RegionValue& v) {
  // range of u + v x on [1, 2] must sit inside (2, 5)
  const double a = v.u + v.v;
  const double b = v.u + 2.0 * v.v;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  if (!(lo > 2.0 && hi < 5.0)) {
    throw ValidationError("blocks rule: affine f(x) = u + v x must map [1,2] into (2,5)");
  }
}

void check_blocks(const BlocksRule& rule, RuleRole role) {
  int counts[3] = {0, 0, 0};
  for (const auto& r : rule.regions) {
    ++counts[static_cast<int>(r.select)];
    const auto form = r.value.form;
    if (role == RuleRole::branch && form != RegionValue::Form::constant) {
      throw ValidationError("blocks rule: branch regions must be constants");
    }
    if (form == RegionValue::Form::inverse_affine) {
      if (r.select != RegionSelector::first_block) {
        throw ValidationError("blocks rule: 1/f(k/q_t) is only defined on (q_t, 2q_t]");
      }
      check_affine(r.value);
    }
    if (form == RegionValue::Form::half_one_minus_inverse_2t &&
        r.select == RegionSelector::otherwise) {
      throw ValidationError("blocks rule: (1 - 1/(2t))/2 needs a block index t");
    }
    if (form == RegionValue::Form::constant && !std::isfinite(r.value.value)) {
      throw ValidationError("blocks rule: non-finite constant");
    }
  }
  for (int s = 0; s < 3; ++s) {
    if (counts[s] > 1) {
      throw ValidationError(std::string("blocks rule: region '") +
                            selector_name(static_cast<RegionSelector>(s)) +
                            "' listed twice");
    }
  }
  if (counts[static_cast<int>(RegionSelector::otherwise)] != 1) {
    throw ValidationError("blocks rule: exactly one 'else' region is required");
  }
  check_breakpoints(rule.breakpoints,
                    counts[static_cast<int>(RegionSelector::tail_block)] == 1);
}

void check_branch_value(double v, std::size_t k) {
  if (!is_integer_value(v)) throw ValidationError(k, "n_k is not an integer");
  if (v < 2.0) throw ValidationError(k, "n_k < 2");
}

void check_ratio_value(double v, std::size_t k) {
  if (!(v > 0.0 && v <= 1.0)) throw ValidationError(k, "c_k not in (0, 1]");
}

const std::vector<double>& child_level(const ChildTable& t, std::size_t k) {
  return k <= t.levels.size() ? t.levels[k - 1] : t.tail;
}

}  // namespace

Breakpoints Breakpoints::square_exponent(int t_max) {
  if (t_max < 1 || t_max > 7) {
    throw ValidationError("square-exponent breakpoints need 1 <= t_max <= 7");
  }
  Breakpoints bp;
  bp.generator = Generator::square_exponent;
  bp.t_max = t_max;
  for (int t = 1; t <= t_max; ++t) bp.q.push_back(std::int64_t{1} << (t * t));
  return bp;
}

Breakpoints Breakpoints::explicit_list(std::vector<std::int64_t> q) {
  Breakpoints bp;
  bp.generator = Generator::explicit_list;
  bp.t_max = static_cast<int>(q.size());
  bp.q = std::move(q);
  return bp;
}

void check_rule(const SequenceRule& rule, RuleRole role) {
  const bool branch = role == RuleRole::branch;
  std::visit(
      Overloaded{
          [&](const ConstantRule& r) {
            if (branch) {
              check_branch_value(r.value, 1);
            } else {
              check_ratio_value(r.value, 1);
            }
          },
          [&](const ListTailRule& r) {
            for (std::size_t i = 0; i < r.values.size(); ++i) {
              if (branch) {
                check_branch_value(r.values[i], i + 1);
              } else {
                check_ratio_value(r.values[i], i + 1);
              }
            }
            if (branch) {
              check_branch_value(r.tail, r.values.size() + 1);
            } else {
              check_ratio_value(r.tail, r.values.size() + 1);
            }
          },
          [&](const GeometricRule& r) {
            if (!(r.base > 1.0) || !std::isfinite(r.base)) {
              throw ValidationError("geometric rule: base must be > 1");
            }
            if (branch && (!is_integer_value(r.base) || r.exponent < 1)) {
              throw ValidationError(
                  "geometric branch rule: base must be an integer and exponent >= 1");
            }
            if (!branch && r.exponent >= 0) {
              throw ValidationError("geometric ratio rule: exponent must be negative");
            }
          },
          [&](const BlocksRule& r) { check_blocks(r, role); },
      },
      rule);
}

std::uint64_t eval_branch(const SequenceRule& rule, std::size_t k) {
  if (k == 0) throw RangeError("levels are indexed from k=1");
  if (const auto* g = std::get_if<GeometricRule>(&rule)) {
    if (!is_integer_value(g->base) || g->base < 2.0 || g->exponent < 1) {
      throw ValidationError(k, "geometric branch rule does not yield an integer >= 2");
    }
    const auto base = static_cast<std::uint64_t>(g->base);
    const auto steps = static_cast<std::uint64_t>(g->exponent) * k;
    std::uint64_t out = 1;
    for (std::uint64_t i = 0; i < steps; ++i) {
      if (out > std::numeric_limits<std::uint64_t>::max() / base) {
        throw RangeError("n_" + std::to_string(k) + " does not fit 64 bits");
      }
      out *= base;
    }
    return out;
  }
  const double v = raw_value(rule, k);
  check_branch_value(v, k);
  if (v >= 18446744073709551616.0) {
    throw RangeError("n_" + std::to_string(k) + " does not fit 64 bits");
  }
  return static_cast<std::uint64_t>(v);
}

double eval_log_branch(const SequenceRule& rule, std::size_t k) {
  if (k == 0) throw RangeError("levels are indexed from k=1");
  if (const auto* g = std::get_if<GeometricRule>(&rule)) {
    if (!is_integer_value(g->base) || g->base < 2.0 || g->exponent < 1) {
      throw ValidationError(k, "geometric branch rule does not yield an integer >= 2");
    }
    return raw_log_value(rule, k);
  }
  const double v = raw_value(rule, k);
  check_branch_value(v, k);
  return std::log(v);
}

double eval_log_ratio(const SequenceRule& rule, std::size_t k) {
  if (k == 0) throw RangeError("levels are indexed from k=1");
  if (std::holds_alternative<GeometricRule>(rule)) {
    const double lv = raw_log_value(rule, k);
    if (!(lv < 0.0)) throw ValidationError(k, "c_k not in (0, 1)");
    return lv;
  }
  const double v = raw_value(rule, k);
  check_ratio_value(v, k);
  return std::log(v);
}

double eval_ratio(const SequenceRule& rule, std::size_t k) {
  const double lv = eval_log_ratio(rule, k);
  const double v = std::exp(lv);
  if (v == 0.0) {
    throw RangeError("c_" + std::to_string(k) +
                     " underflows a double; use the log-domain value");
  }
  return v;
}

bool has_per_child_ratios(const MoranSpec& spec) {
  return std::holds_alternative<ChildTable>(spec.ratio);
}

std::vector<double> eval_child_ratios(const MoranSpec& spec, std::size_t k) {
  const std::uint64_t n = eval_branch(spec.branch, k);
  if (const auto* table = std::get_if<ChildTable>(&spec.ratio)) {
    const auto& level = child_level(*table, k);
    if (level.size() != n) {
      throw ValidationError(k, "per-child ratio count differs from n_k");
    }
    return level;
  }
  const double c = eval_ratio(std::get<SequenceRule>(spec.ratio), k);
  return std::vector<double>(static_cast<std::size_t>(n), c);
}

ValidationReport validate(const MoranSpec& spec, std::size_t probe_depth) {
  ValidationReport report;
  auto fail = [&report](std::size_t level, std::string what) {
    report.ok = false;
    report.level = level;
    report.constraint = std::move(what);
    return report;
  };
  if (!(spec.interval.hi > spec.interval.lo) || !std::isfinite(spec.interval.lo) ||
      !std::isfinite(spec.interval.hi)) {
    return fail(0, "interval needs hi > lo");
  }
  try {
    check_rule(spec.branch, RuleRole::branch);
    if (const auto* rule = std::get_if<SequenceRule>(&spec.ratio)) {
      check_rule(*rule, RuleRole::ratio);
    }
  } catch (const ValidationError& e) {
    return fail(e.level(), e.what());
  }

  const auto* table = std::get_if<ChildTable>(&spec.ratio);
  for (std::size_t k = 1; k <= probe_depth; ++k) {
    try {
      const double log_n = eval_log_branch(spec.branch, k);
      if (table == nullptr) {
        const double log_c = eval_log_ratio(std::get<SequenceRule>(spec.ratio), k);
        if (log_n + log_c > kLogSlack) return fail(k, "c_k > 1/n_k");
        continue;
      }
      const auto& level = child_level(*table, k);
      const double n = std::exp(log_n);
      if (static_cast<double>(level.size()) != std::round(n)) {
        return fail(k, "per-child ratio count differs from n_k");
      }
      double sum = 0.0;
      for (double c : level) {
        if (!(c > 0.0)) return fail(k, "c_{k,i} <= 0");
        sum += c;
      }
      if (sum > 1.0 + kLogSlack) return fail(k, "sum_i c_{k,i} > 1");
    } catch (const ValidationError& e) {
      return fail(k, e.what());
    }
  }
  return report;
}

}  // namespace morandim
