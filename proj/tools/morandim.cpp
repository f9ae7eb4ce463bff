// morandim: dimensions of Moran constructions from their defining sequences,
// cross-checked against covering counts on explicit realizations.
//
//   morandim dims       --preset example5 --tmax 4
//   morandim empirical  --preset cantor --depth 5 --delta 0.2
//   morandim disconnect --preset example1 --alpha 0.5 --c 0.1
//   morandim equiv      --preset-a cantor --preset-b example4
//
// Tables go to --out (default stdout) as CSV or JSON; one-line verdicts and
// diagnostics go to stderr. Exit codes: 0 ok, 1 spec/argument error, 2 a
// resource or depth cap was hit.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "morandim/dims.hpp"
#include "morandim/error.hpp"
#include "morandim/format.hpp"
#include "morandim/metriclab.hpp"
#include "morandim/prefix_table.hpp"
#include "morandim/presets.hpp"
#include "morandim/spec_io.hpp"

namespace {

using namespace morandim;
using Json = nlohmann::ordered_json;

constexpr std::size_t kDefaultDimsDepth = 4096;

struct RunConfig {
  std::string command;
  std::string spec_path, spec_a, spec_b;
  std::string preset, preset_a, preset_b;
  int t_max = 4;
  double f_u = 2.0;
  double f_v = 1.0;
  std::size_t depth = 0;  // 0: command-specific default
  std::vector<double> delta{std::begin(kDefaultDeltaGrid), std::end(kDefaultDeltaGrid)};
  std::vector<double> eta{std::begin(kDefaultEtaGrid), std::end(kDefaultEtaGrid)};
  std::vector<std::size_t> m{std::begin(kDefaultMGrid), std::end(kDefaultMGrid)};
  double c = 0.1;
  double psi_scale = 0.125;
  double alpha = 0.5;
  std::size_t k_max = 2000;
  double r_min = 0.0;  // 0: command-specific default
  double r_max = 0.0;
  int per_decade = 0;  // 0: command-specific default
  std::string out_path;
  std::string format = "csv";
};

// A named Moran spec, or the Example-1 countable set.
struct Source {
  std::string label;
  std::optional<MoranSpec> spec;
  bool example1 = false;
};

Source load(const RunConfig& cfg, const std::string& path, const std::string& preset) {
  if (!path.empty() && !preset.empty()) {
    throw ValidationError("give either a spec file or a preset, not both");
  }
  if (!path.empty()) return {path, read_spec_file(path), false};
  if (preset == "example1") return {"example1", std::nullopt, true};
  if (preset == "example4") return {preset, presets::example4(), false};
  if (preset == "example5") return {preset, presets::example5(cfg.t_max), false};
  if (preset == "example6") {
    return {preset, presets::example6(cfg.t_max, cfg.f_u, cfg.f_v), false};
  }
  if (preset == "cantor") return {preset, presets::constant(2, 0.25), false};
  if (preset == "unit-interval") {
    return {preset, presets::constant(2, 0.5, Placement::touching_left), false};
  }
  if (preset.empty()) throw ValidationError("no spec given: use --spec or --preset");
  throw ValidationError("unknown preset '" + preset + "'");
}

bool is_block_preset(const Source& s) {
  return s.label == "example5" || s.label == "example6";
}

// ---- tables ---------------------------------------------------------------

struct Table {
  std::vector<std::string> columns;
  std::vector<Json> rows;  // each an object keyed by column
};

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number()) return format_number(v.get<double>());
  std::string s = v.get<std::string>();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

Json number_or_null(double x) {
  return std::isfinite(x) ? Json(x) : Json(format_number(x));
}

void emit(const RunConfig& cfg, const Table& table, const Json& summary) {
  std::ostringstream buf;
  if (cfg.format == "json") {
    Json doc;
    doc["command"] = cfg.command;
    doc["columns"] = table.columns;
    doc["rows"] = Json::array();
    for (const auto& row : table.rows) doc["rows"].push_back(row);
    doc["summary"] = summary;
    buf << doc.dump(2) << '\n';
  } else {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      buf << (i ? "," : "") << table.columns[i];
    }
    buf << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < table.columns.size(); ++i) {
        const auto it = row.find(table.columns[i]);
        buf << (i ? "," : "") << (it == row.end() ? "" : csv_cell(*it));
      }
      buf << '\n';
    }
  }
  if (cfg.out_path.empty()) {
    std::cout << buf.str();
  } else {
    std::ofstream out(cfg.out_path);
    if (!out) throw ValidationError("cannot write '" + cfg.out_path + "'");
    out << buf.str();
  }
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + format_number(v[i]);
  return s;
}

// ---- dims -----------------------------------------------------------------

Json dim_row(const std::string& quantity, const DimEstimate& e, const std::string& flags) {
  Json row;
  row["quantity"] = quantity;
  row["value"] = e.value;
  row["grid"] = join(e.grid);
  row["grid_values"] = join(e.per_grid);
  row["depth"] = e.depth;
  row["drift"] = e.drift;
  std::string f = flags;
  if (!e.monotone_ok) f += (f.empty() ? "" : ";") + std::string("non-monotone-grid");
  for (const auto& w : e.warnings) f += (f.empty() ? "" : ";") + w;
  row["flags"] = f;
  return row;
}

int cmd_dims(const RunConfig& cfg) {
  const Source src = load(cfg, cfg.spec_path, cfg.preset);
  if (src.example1) throw ValidationError("dims needs a Moran spec, not example1");
  const MoranSpec& spec = *src.spec;
  std::size_t depth = cfg.depth;
  if (depth == 0) {
    depth = is_block_preset(src) ? static_cast<std::size_t>(presets::block_depth(cfg.t_max))
                                 : kDefaultDimsDepth;
  }
  const ValidationReport report = validate(spec, depth);
  if (!report.ok) {
    if (report.level > 0) throw ValidationError(report.level, report.constraint);
    throw ValidationError(report.constraint);
  }

  Table table;
  table.columns = {"quantity", "value", "grid", "grid_values", "depth", "drift", "flags"};
  Json summary;
  summary["spec"] = src.label;
  summary["depth"] = depth;

  bool equal_ratios = true;
  if (has_per_child_ratios(spec)) {
    for (std::size_t k = 1; k <= depth && equal_ratios; ++k) {
      const auto c = eval_child_ratios(spec, k);
      for (double v : c) equal_ratios = equal_ratios && v == c.front();
    }
  }

  if (!equal_ratios) {
    const DimEstimate g = quasi_assouad_general(spec, cfg.eta, depth);
    const std::string hint = g.value < 1.0 ? "quasi-uniformly-disconnected" : "";
    table.rows.push_back(dim_row("quasi_assouad_general", g, hint));
    summary["quasi_assouad"] = g.value;
    emit(cfg, table, summary);
    return 0;
  }

  const PrefixTable prefix = build_prefix(spec, depth);
  const SlowChangeReport slow = slow_change_diagnostic(prefix);
  const bool bounded = prefix.ratio_bounded_below();
  const std::string base = std::string("slow-change=") + (slow.plausible ? "yes" : "no") +
                           ";inf-c-positive=" + (bounded ? "yes" : "no");

  const BoxEstimate box = box_hausdorff(prefix);
  DimEstimate upper;
  upper.value = box.upper;
  upper.depth = box.depth;
  upper.drift = box.upper_drift;
  DimEstimate lower;
  lower.value = box.lower;
  lower.depth = box.depth;
  lower.drift = box.lower_drift;
  table.rows.push_back(dim_row("upper_box", upper, base));
  table.rows.push_back(dim_row("hausdorff", lower, base));

  const DimEstimate qa = quasi_assouad(prefix, cfg.delta);
  std::string qa_flags = base;
  if (qa.value < 1.0) qa_flags += ";quasi-uniformly-disconnected";
  table.rows.push_back(dim_row("quasi_assouad", qa, qa_flags));

  const DimEstimate qe = quasi_assouad_eta(prefix, cfg.eta);
  table.rows.push_back(dim_row("quasi_assouad_eta", qe, base));

  std::vector<std::size_t> m_grid;
  for (std::size_t m : cfg.m) {
    if (m <= depth / 2) m_grid.push_back(m);
  }
  if (!m_grid.empty()) {
    const DimEstimate as = assouad_llmx(prefix, m_grid);
    table.rows.push_back(dim_row("assouad_llmx", as, base));
    summary["assouad_llmx"] = as.value;
  }
  summary["upper_box"] = box.upper;
  summary["quasi_assouad"] = qa.value;
  summary["slow_change_plausible"] = slow.plausible;
  summary["ratio_bounded_below"] = bounded;
  emit(cfg, table, summary);
  return 0;
}

// ---- empirical ------------------------------------------------------------

// Construction scales |J| c_1...c_k (largest child ratio per level).
std::vector<double> construction_scales(const MoranSpec& spec, std::size_t depth) {
  std::vector<double> out;
  double log_r = std::log(spec.interval.length());
  for (std::size_t k = 1; k <= depth; ++k) {
    const auto c = eval_child_ratios(spec, k);
    log_r += std::log(*std::max_element(c.begin(), c.end()));
    out.push_back(std::exp(log_r));
  }
  return out;
}

int cmd_empirical(const RunConfig& cfg) {
  const Source src = load(cfg, cfg.spec_path, cfg.preset);
  Table table;
  table.columns = {"kind", "delta", "r", "R", "N", "value"};
  Json summary;
  summary["spec"] = src.label;
  summary["h"] = Json::array();

  IntervalSet set;
  std::vector<double> r_grid;
  std::vector<double> ladder;
  std::optional<PrefixTable> formula;
  if (src.example1) {
    const Example1 ex(cfg.alpha, cfg.k_max);
    set = ex.set();
    // h is a small-scale quantity: by default only the decade above r_min.
    const double r_min = cfg.r_min > 0.0 ? cfg.r_min : ex.a(cfg.k_max * 3 / 4);
    const double r_max = cfg.r_max > 0.0 ? cfg.r_max : 10.0 * r_min;
    const int pd = cfg.per_decade > 0 ? cfg.per_decade : 5;
    for (double lr : log_radius_grid(std::log(r_max), std::log(r_min) - 1e-9, pd)) {
      r_grid.push_back(std::exp(lr));
    }
    summary["k_max"] = cfg.k_max;
    summary["r_min"] = r_min;
  } else {
    const MoranSpec& spec = *src.spec;
    std::size_t depth = cfg.depth;
    if (depth == 0) depth = cfg.r_min > 0.0 ? realization_depth(spec, cfg.r_min) : 8;
    set = realize(spec, depth, interval_cap_from_env());
    // r and R both run over construction scales; r must sit 8x above the
    // realization's finest intervals.
    for (double s : construction_scales(spec, depth)) {
      if (s < set.diameter()) ladder.push_back(s);
      if (s >= 8.0 * set.resolution() && s < set.diameter()) r_grid.push_back(s);
    }
    if (r_grid.empty()) {
      throw DepthError(depth, "realization depth " + std::to_string(depth) +
                                  " resolves no construction scale; raise --depth");
    }
    formula = build_prefix(spec, is_block_preset(src) ? static_cast<std::size_t>(
                                                            presets::block_depth(cfg.t_max))
                                                      : kDefaultDimsDepth);
    summary["realization_depth"] = depth;
    summary["intervals"] = set.size();
  }

  for (double delta : cfg.delta) {
    const EmpiricalH h = empirical_h(set, delta, r_grid, ladder);
    for (const auto& row : h.rows) {
      table.rows.push_back(
          {{"kind", "pair"}, {"delta", delta}, {"r", row.r}, {"R", row.R}, {"N", row.n},
           {"value", row.log_ratio}});
    }
    table.rows.push_back({{"kind", "empirical_h"}, {"delta", delta}, {"r", h.rows[h.argmax].r},
                          {"R", h.rows[h.argmax].R}, {"N", h.rows[h.argmax].n},
                          {"value", h.value}});
    Json entry{{"delta", delta}, {"empirical", h.value}};
    if (formula) {
      const double f = h_delta(*formula, delta);
      table.rows.push_back({{"kind", "formula_h"}, {"delta", delta}, {"value", f}});
      entry["formula"] = f;
    }
    summary["h"].push_back(entry);
    std::cerr << "delta " << format_number(delta) << ": empirical h = " << format_number(h.value)
              << (formula ? ", formula h = " + format_number(h_delta(*formula, delta)) : "")
              << '\n';
  }
  emit(cfg, table, summary);
  return 0;
}

// ---- disconnect -----------------------------------------------------------

Json witness_row(const std::string& test, const Witness& w, std::size_t samples,
                 std::size_t passed) {
  return {{"test", test},
          {"r", w.r},
          {"threshold", w.threshold},
          {"samples", samples},
          {"passed", passed},
          {"worst_x", w.x},
          {"worst_separation", number_or_null(w.separation)},
          {"verdict", passed == samples ? "pass" : "fail"}};
}

void summarize(Table& table, Json& summary, const std::string& test,
               const DisconnectSummary& s) {
  for (const auto& row : s.rows) {
    table.rows.push_back(witness_row(test, row.worst, row.samples, row.passed));
  }
  summary[test] = {{"samples", s.samples},
                   {"passed", s.passed},
                   {"verdict", s.all_pass() ? "pass" : "fail"},
                   {"worst_x", s.worst.x},
                   {"worst_r", s.worst.r}};
  std::cerr << test << ": " << s.passed << "/" << s.samples << " (x, r) pairs pass -> "
            << (s.all_pass() ? "pass" : "fail") << "; worst x=" << format_number(s.worst.x)
            << " r=" << format_number(s.worst.r) << '\n';
}

int cmd_disconnect(const RunConfig& cfg) {
  const Source src = load(cfg, cfg.spec_path, cfg.preset);
  Table table;
  table.columns = {"test",    "r",      "threshold",        "samples",
                   "passed",  "worst_x", "worst_separation", "verdict"};
  Json summary;
  summary["spec"] = src.label;
  summary["c"] = cfg.c;

  if (src.example1) {
    const Example1 ex(cfg.alpha, cfg.k_max);
    const IntervalSet set = ex.set();
    const double r_min = cfg.r_min > 0.0 ? cfg.r_min : ex.a(cfg.k_max * 3 / 4);
    const int pd = cfg.per_decade > 0 ? cfg.per_decade : 5;
    std::vector<double> r_grid;
    for (double lr : log_radius_grid(std::log(0.5), std::log(r_min) - 1e-9, pd)) {
      r_grid.push_back(std::exp(lr));
    }
    summarize(table, summary, "UD", ud_check(set, cfg.c, r_grid));
    summarize(table, summary, "QUD", qud_check(set, [&ex](double r) { return ex.psi(r); }, r_grid));

    // The failing pair exhibited for the countable set: x = a_k, r = a_k / 2.
    const std::size_t k = ex.ud_failure_level(cfg.c);
    if (k <= ex.k_max()) {
      const Witness w = ud_witness(set, ex.a(k), ex.a(k) / 2.0, cfg.c);
      table.rows.push_back(witness_row("UD-at-a_" + std::to_string(k), w, 1, w.pass ? 1 : 0));
      summary["ud_failure_level"] = k;
      summary["ud_failure_witness_pass"] = w.pass;
    }
  } else {
    const MoranSpec& spec = *src.spec;
    const std::size_t depth = cfg.depth > 0 ? cfg.depth
                              : cfg.r_min > 0.0 ? realization_depth(spec, cfg.r_min)
                                                : 8;
    const IntervalSet set = realize(spec, depth, interval_cap_from_env());
    // Below half the diameter, so a ball never swallows the whole set.
    std::vector<double> r_grid;
    for (double s : construction_scales(spec, depth)) {
      if (s >= 8.0 * set.resolution() && s <= set.diameter() / 2.0 * (1.0 - 1e-12)) {
        r_grid.push_back(s);
      }
    }
    if (r_grid.empty()) {
      throw DepthError(depth, "realization depth " + std::to_string(depth) +
                                  " resolves no construction scale below diam/2");
    }
    summary["realization_depth"] = depth;
    summary["psi_scale"] = cfg.psi_scale;
    summarize(table, summary, "UD", ud_check(set, cfg.c, r_grid));
    const double s = cfg.psi_scale;
    summarize(table, summary, "QUD", qud_check(set, [s](double r) { return s * r; }, r_grid));
  }
  emit(cfg, table, summary);
  return 0;
}

// ---- equiv ----------------------------------------------------------------

std::size_t depth_for(const MoranSpec& spec, double log_r_min) {
  const double target = log_r_min - std::log(spec.interval.length());
  double lc = 0.0;
  for (std::size_t k = 1; k <= kDefaultMaxDepth; ++k) {
    lc += eval_log_ratio(std::get<SequenceRule>(spec.ratio), k);
    if (lc < target) return k + 1;
  }
  throw ResourceError("r_min is not reached within the depth limit");
}

void print_slow_change(const std::string& label, const PrefixTable& t) {
  const SlowChangeReport s = slow_change_diagnostic(t);
  std::cerr << "slow change [" << label << "]: tail max |log c_k / log(c_1..c_k)| = "
            << format_number(s.tail_max) << " over k >= " << s.tail_from
            << ", min log n_k / -log c_k = " << format_number(s.min_branch_ratio) << " at k = "
            << s.min_branch_ratio_level << " -> " << (s.plausible ? "plausible" : "not plausible")
            << '\n';
}

int cmd_equiv(const RunConfig& cfg) {
  const Source a = load(cfg, cfg.spec_a, cfg.preset_a);
  const Source b = load(cfg, cfg.spec_b, cfg.preset_b);
  if (a.example1 || b.example1) throw ValidationError("equiv needs two Moran specs");
  for (const auto* s : {&a, &b}) {
    if (has_per_child_ratios(*s->spec)) {
      throw ValidationError("equiv needs specs with one ratio per level");
    }
  }
  const double r_min = cfg.r_min > 0.0 ? cfg.r_min : 1e-30;
  const int pd = cfg.per_decade > 0 ? cfg.per_decade : 10;
  const double log_r_max = std::log(0.1);
  const double log_r_min = std::log(r_min);
  const std::vector<double> grid = log_radius_grid(log_r_max, log_r_min, pd);

  const std::size_t depth_a = cfg.depth > 0 ? cfg.depth : depth_for(*a.spec, log_r_min);
  const std::size_t depth_b = cfg.depth > 0 ? cfg.depth : depth_for(*b.spec, log_r_min);
  const PrefixTable ta = build_prefix(*a.spec, depth_a);
  const PrefixTable tb = build_prefix(*b.spec, depth_b);
  // The slow-change read needs a long table even when r_min is shallow.
  print_slow_change(a.label, build_prefix(*a.spec, std::max(depth_a, kDefaultDimsDepth)));
  print_slow_change(b.label, build_prefix(*b.spec, std::max(depth_b, kDefaultDimsDepth)));

  EquivOptions opts;
  opts.tail_points = static_cast<std::size_t>(pd);
  const EquivReport rep =
      equiv_ratio(ta, a.spec->interval.length(), tb, b.spec->interval.length(), grid, opts);

  Table table;
  table.columns = {"r", "g_a", "g_b", "ratio", "tail"};
  for (std::size_t i = 0; i < rep.log_r.size(); ++i) {
    table.rows.push_back({{"r", std::exp(rep.log_r[i])},
                          {"g_a", rep.g_a[i]},
                          {"g_b", rep.g_b[i]},
                          {"ratio", rep.ratio[i]},
                          {"tail", i >= rep.tail_from}});
  }
  Json summary{{"spec_a", a.label},
               {"spec_b", b.label},
               {"tail_max_deviation", rep.tail_max_deviation},
               {"tolerance", rep.tolerance},
               {"verdict", rep.equivalent ? "equivalent" : "not-equivalent"}};
  std::cerr << "verdict: " << (rep.equivalent ? "equivalent" : "not equivalent")
            << " (tail max |ratio - 1| = " << format_number(rep.tail_max_deviation)
            << ", tolerance " << format_number(rep.tolerance) << ")\n";
  emit(cfg, table, summary);
  return 0;
}

void add_spec_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--spec", cfg.spec_path, "Spec JSON file");
  cmd->add_option("--preset", cfg.preset,
                  "example1 | example4 | example5 | example6 | cantor | unit-interval");
  cmd->add_option("--tmax", cfg.t_max, "Block count for example5/example6")
      ->check(CLI::Range(1, 7));
  cmd->add_option("--fu", cfg.f_u, "example6: c_k = 1/(fu + fv k/q_t) on the first block");
  cmd->add_option("--fv", cfg.f_v, "example6: see --fu");
}

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--depth", cfg.depth, "Depth K (prefix or realization depth)");
  cmd->add_option("--rmin", cfg.r_min, "Smallest radius")->check(CLI::PositiveNumber);
  cmd->add_option("--per-decade", cfg.per_decade, "Radius grid points per decade")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", cfg.out_path, "Output file (default stdout)");
  cmd->add_option("--format", cfg.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
}

void check_grid(const std::vector<double>& g, const char* name) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(g[i] > 0.0 && g[i] < 1.0) || (i > 0 && !(g[i] < g[i - 1]))) {
      throw ValidationError(std::string("--") + name +
                            " must be strictly decreasing inside (0, 1)");
    }
  }
  if (g.empty()) throw ValidationError(std::string("--") + name + " is empty");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dimensions of Moran constructions: formula engines and metric checks"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* dims = app.add_subcommand("dims", "Box, quasi-Assouad and Assouad estimates");
  add_spec_options(dims, cfg);
  add_common(dims, cfg);
  dims->add_option("--delta", cfg.delta, "delta grid, decreasing")->delimiter(',');
  dims->add_option("--eta", cfg.eta, "eta grid, decreasing")->delimiter(',');
  dims->add_option("--m", cfg.m, "window lengths for the Assouad formula")->delimiter(',');

  auto* emp = app.add_subcommand("empirical", "Covering-number estimate of h(delta)");
  add_spec_options(emp, cfg);
  add_common(emp, cfg);
  emp->add_option("--delta", cfg.delta, "delta values")->delimiter(',');
  emp->add_option("--rmax", cfg.r_max, "example1: largest radius (default 10 r_min)")
      ->check(CLI::PositiveNumber);
  emp->add_option("--alpha", cfg.alpha, "example1 exponent");
  emp->add_option("--kmax", cfg.k_max, "example1 point count");

  auto* dis = app.add_subcommand("disconnect", "Uniform / quasi-uniform disconnectedness");
  add_spec_options(dis, cfg);
  add_common(dis, cfg);
  dis->add_option("--c", cfg.c, "UD constant");
  dis->add_option("--psi-scale", cfg.psi_scale, "QUD threshold psi(r) = s r for spec sets");
  dis->add_option("--alpha", cfg.alpha, "example1 exponent");
  dis->add_option("--kmax", cfg.k_max, "example1 point count");

  auto* eq = app.add_subcommand("equiv", "Scale-function ratio test");
  eq->add_option("--spec-a", cfg.spec_a, "First spec file");
  eq->add_option("--spec-b", cfg.spec_b, "Second spec file");
  eq->add_option("--preset-a", cfg.preset_a, "First preset");
  eq->add_option("--preset-b", cfg.preset_b, "Second preset");
  eq->add_option("--tmax", cfg.t_max, "Block count for example presets")
      ->check(CLI::Range(1, 7));
  add_common(eq, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (dims->parsed()) {
      cfg.command = "dims";
      check_grid(cfg.delta, "delta");
      check_grid(cfg.eta, "eta");
      return cmd_dims(cfg);
    }
    if (emp->parsed()) {
      cfg.command = "empirical";
      return cmd_empirical(cfg);
    }
    if (dis->parsed()) {
      cfg.command = "disconnect";
      if (!(cfg.c > 0.0 && cfg.c < 1.0)) throw ValidationError("--c must lie in (0, 1)");
      if (!(cfg.psi_scale > 0.0 && cfg.psi_scale < 1.0)) {
        throw ValidationError("--psi-scale must lie in (0, 1)");
      }
      return cmd_disconnect(cfg);
    }
    cfg.command = "equiv";
    return cmd_equiv(cfg);
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return 2;
  } catch (const DepthError& e) {
    std::cerr << "depth limit: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
