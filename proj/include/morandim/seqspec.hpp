#pragma once

// Defining sequences of Moran constructions on the line: branch counts n_k,
// contraction ratios c_k (or per-child c_{k,i}), and the log-domain prefix
// tables the dimension engines query.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace morandim {

struct ConstantRule {
  double value = 0.0;
};

// values[0] is level 1; every level past the list takes `tail`.
struct ListTailRule {
  std::vector<double> values;
  double tail = 0.0;
};

// value(k) = base^(exponent * k)
struct GeometricRule {
  double base = 0.0;
  std::int64_t exponent = 0;
};

// Block breakpoints q_1 < q_2 < ... with q_{t+1} > 2 q_t.
struct Breakpoints {
  enum class Generator { square_exponent, explicit_list };

  Generator generator = Generator::square_exponent;
  int t_max = 4;
  std::vector<std::int64_t> q;  // q[t-1] == q_t

  // q_t = 2^(t^2), t = 1..t_max.
  static Breakpoints square_exponent(int t_max);
  static Breakpoints explicit_list(std::vector<std::int64_t> q);
};

enum class RegionSelector {
  first_block,  // k in (q_t, 2q_t]
  tail_block,   // k in (2q_t, 2q_t + t]
  otherwise,    // everything else
};

struct RegionValue {
  enum class Form {
    constant,                   // value
    half_one_minus_inverse_2t,  // (1 - 1/(2t)) / 2
    inverse_affine,             // 1 / (u + v * k/q_t)
  };
  Form form = Form::constant;
  double value = 0.0;
  double u = 0.0;
  double v = 0.0;
};

struct Region {
  RegionSelector select = RegionSelector::otherwise;
  RegionValue value;
};

struct BlocksRule {
  Breakpoints breakpoints;
  std::vector<Region> regions;  // exactly one `otherwise` entry
};

using SequenceRule =
    std::variant<ConstantRule, ListTailRule, GeometricRule, BlocksRule>;

// Per-child ratios c_{k,i}: levels[k-1] holds level k, `tail` every deeper one.
struct ChildTable {
  std::vector<std::vector<double>> levels;
  std::vector<double> tail;
};

using RatioSpec = std::variant<SequenceRule, ChildTable>;

enum class Placement { uniform_cantor, touching_left };

struct Segment {
  double lo = 0.0;
  double hi = 1.0;
  double length() const { return hi - lo; }
};

struct MoranSpec {
  Segment interval;
  SequenceRule branch;
  RatioSpec ratio;
  Placement placement = Placement::uniform_cantor;
};

enum class RuleRole { branch, ratio };

// Structural checks that do not depend on k (bases, breakpoints, region
// table shape, affine range). Throws ValidationError.
void check_rule(const SequenceRule& rule, RuleRole role);

// n_k. Throws ValidationError if the rule yields a non-integer or n_k < 2,
// RangeError if n_k does not fit 64 bits (use eval_log_branch).
std::uint64_t eval_branch(const SequenceRule& rule, std::size_t k);
double eval_log_branch(const SequenceRule& rule, std::size_t k);

// c_k. Throws ValidationError if c_k is not in (0, 1], RangeError if it
// underflows a double (use eval_log_ratio).
double eval_ratio(const SequenceRule& rule, std::size_t k);
double eval_log_ratio(const SequenceRule& rule, std::size_t k);

// (c_{k,1}, ..., c_{k,n_k}) for any ratio form.
std::vector<double> eval_child_ratios(const MoranSpec& spec, std::size_t k);

bool has_per_child_ratios(const MoranSpec& spec);

struct ValidationReport {
  bool ok = true;
  std::size_t level = 0;  // first violating k; 0 for structural problems
  std::string constraint;
};

// Checks every MoranSpec invariant for k <= probe_depth. Never throws for
// bad specs; violations are reported.
ValidationReport validate(const MoranSpec& spec, std::size_t probe_depth);

}  // namespace morandim
