#include "morandim/spec_io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "morandim/error.hpp"

namespace morandim {
namespace {

using nlohmann::json;

constexpr std::string_view kFirstBlock = "(q_t,2q_t]";
constexpr std::string_view kTailBlock = "(2q_t,2q_t+t]";
constexpr std::string_view kElse = "else";

void only_fields(const json& j, std::string_view where,
                 std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ValidationError(std::string(where) + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ValidationError(std::string(where) + ": unknown field '" + key + "'");
  }
}

const json& field(const json& j, std::string_view where, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw ValidationError(std::string(where) + ": missing field '" + key + "'");
  }
  return *it;
}

double number(const json& j, std::string_view where) {
  if (!j.is_number()) throw ValidationError(std::string(where) + ": expected a number");
  return j.get<double>();
}

std::int64_t integer(const json& j, std::string_view where) {
  if (!j.is_number_integer()) throw ValidationError(std::string(where) + ": expected an integer");
  return j.get<std::int64_t>();
}

std::vector<double> numbers(const json& j, std::string_view where) {
  if (!j.is_array()) throw ValidationError(std::string(where) + ": expected an array");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, where));
  return out;
}

std::string text(const json& j, std::string_view where) {
  if (!j.is_string()) throw ValidationError(std::string(where) + ": expected a string");
  return j.get<std::string>();
}

RegionValue parse_value(const json& j) {
  const std::string form = text(field(j, "region value", "form"), "region value.form");
  RegionValue v;
  if (form == "constant") {
    only_fields(j, "region value", {"form", "value"});
    v.form = RegionValue::Form::constant;
    v.value = number(field(j, "region value", "value"), "region value.value");
  } else if (form == "half-one-minus-inverse-2t") {
    only_fields(j, "region value", {"form"});
    v.form = RegionValue::Form::half_one_minus_inverse_2t;
  } else if (form == "inverse-affine") {
    only_fields(j, "region value", {"form", "u", "v"});
    v.form = RegionValue::Form::inverse_affine;
    v.u = number(field(j, "region value", "u"), "region value.u");
    v.v = number(field(j, "region value", "v"), "region value.v");
  } else {
    throw ValidationError("region value: unknown form '" + form + "'");
  }
  return v;
}

BlocksRule parse_blocks(const json& j) {
  only_fields(j, "blocks rule", {"kind", "breakpoints", "regions"});
  BlocksRule rule;
  const json& bp = field(j, "blocks rule", "breakpoints");
  const std::string gen = text(field(bp, "breakpoints", "generator"), "breakpoints.generator");
  if (gen == "square-exponent") {
    only_fields(bp, "breakpoints", {"generator", "t_max"});
    rule.breakpoints = Breakpoints::square_exponent(
        static_cast<int>(integer(field(bp, "breakpoints", "t_max"), "breakpoints.t_max")));
  } else if (gen == "explicit") {
    only_fields(bp, "breakpoints", {"generator", "q"});
    const json& q = field(bp, "breakpoints", "q");
    if (!q.is_array()) throw ValidationError("breakpoints.q: expected an array");
    std::vector<std::int64_t> qs;
    for (const auto& v : q) qs.push_back(integer(v, "breakpoints.q"));
    rule.breakpoints = Breakpoints::explicit_list(std::move(qs));
  } else {
    throw ValidationError("breakpoints: unknown generator '" + gen + "'");
  }
  const json& regions = field(j, "blocks rule", "regions");
  if (!regions.is_array()) throw ValidationError("blocks rule.regions: expected an array");
  for (const auto& r : regions) {
    only_fields(r, "region", {"select", "value"});
    const std::string sel = text(field(r, "region", "select"), "region.select");
    Region region;
    if (sel == kFirstBlock) {
      region.select = RegionSelector::first_block;
    } else if (sel == kTailBlock) {
      region.select = RegionSelector::tail_block;
    } else if (sel == kElse) {
      region.select = RegionSelector::otherwise;
    } else {
      throw ValidationError("region.select: unknown selector '" + sel + "'");
    }
    region.value = parse_value(field(r, "region", "value"));
    rule.regions.push_back(region);
  }
  return rule;
}

SequenceRule parse_rule(const json& j, std::string_view where) {
  const std::string kind = text(field(j, where, "kind"), std::string(where) + ".kind");
  if (kind == "constant") {
    only_fields(j, where, {"kind", "value"});
    return ConstantRule{number(field(j, where, "value"), where)};
  }
  if (kind == "list") {
    only_fields(j, where, {"kind", "values", "tail"});
    return ListTailRule{numbers(field(j, where, "values"), where),
                        number(field(j, where, "tail"), where)};
  }
  if (kind == "geometric") {
    only_fields(j, where, {"kind", "base", "exponent"});
    return GeometricRule{number(field(j, where, "base"), where),
                         integer(field(j, where, "exponent"), where)};
  }
  if (kind == "blocks") return parse_blocks(j);
  throw ValidationError(std::string(where) + ": unknown kind '" + kind + "'");
}

RatioSpec parse_ratio(const json& j) {
  if (j.is_object() && j.value("kind", "") == "per-child") {
    only_fields(j, "ratio", {"kind", "levels", "tail"});
    ChildTable table;
    const json& levels = field(j, "ratio", "levels");
    if (!levels.is_array()) throw ValidationError("ratio.levels: expected an array");
    for (const auto& level : levels) table.levels.push_back(numbers(level, "ratio.levels"));
    table.tail = numbers(field(j, "ratio", "tail"), "ratio.tail");
    return table;
  }
  return parse_rule(j, "ratio");
}

json value_json(const RegionValue& v) {
  switch (v.form) {
    case RegionValue::Form::constant: return {{"form", "constant"}, {"value", v.value}};
    case RegionValue::Form::half_one_minus_inverse_2t:
      return {{"form", "half-one-minus-inverse-2t"}};
    case RegionValue::Form::inverse_affine:
      return {{"form", "inverse-affine"}, {"u", v.u}, {"v", v.v}};
  }
  return {};
}

json rule_json(const SequenceRule& rule) {
  if (const auto* r = std::get_if<ConstantRule>(&rule)) {
    return {{"kind", "constant"}, {"value", r->value}};
  }
  if (const auto* r = std::get_if<ListTailRule>(&rule)) {
    return {{"kind", "list"}, {"values", r->values}, {"tail", r->tail}};
  }
  if (const auto* r = std::get_if<GeometricRule>(&rule)) {
    return {{"kind", "geometric"}, {"base", r->base}, {"exponent", r->exponent}};
  }
  const auto& b = std::get<BlocksRule>(rule);
  json bp;
  if (b.breakpoints.generator == Breakpoints::Generator::square_exponent) {
    bp = {{"generator", "square-exponent"}, {"t_max", b.breakpoints.t_max}};
  } else {
    bp = {{"generator", "explicit"}, {"q", b.breakpoints.q}};
  }
  json regions = json::array();
  for (const auto& r : b.regions) {
    const std::string_view sel = r.select == RegionSelector::first_block ? kFirstBlock
                                 : r.select == RegionSelector::tail_block ? kTailBlock
                                                                          : kElse;
    regions.push_back({{"select", std::string(sel)}, {"value", value_json(r.value)}});
  }
  return {{"kind", "blocks"}, {"breakpoints", bp}, {"regions", regions}};
}

MoranSpec parse_document(const json& doc);

}  // namespace

MoranSpec parse_spec_json(const std::string& source) {
  json doc;
  try {
    doc = json::parse(source);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("spec is not valid JSON: ") + e.what());
  }
  try {
    return parse_document(doc);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("spec: ") + e.what());
  }
}

namespace {

MoranSpec parse_document(const json& doc) {
  only_fields(doc, "spec", {"version", "interval", "branch", "ratio", "placement"});
  if (integer(field(doc, "spec", "version"), "spec.version") != 1) {
    throw ValidationError("spec.version: only version 1 is supported");
  }
  MoranSpec spec;
  if (doc.contains("interval")) {
    const auto iv = numbers(doc.at("interval"), "spec.interval");
    if (iv.size() != 2) throw ValidationError("spec.interval: expected [lo, hi]");
    spec.interval = {iv[0], iv[1]};
  }
  spec.branch = parse_rule(field(doc, "spec", "branch"), "branch");
  spec.ratio = parse_ratio(field(doc, "spec", "ratio"));
  if (doc.contains("placement")) {
    const std::string p = text(doc.at("placement"), "spec.placement");
    if (p == "uniform-cantor") {
      spec.placement = Placement::uniform_cantor;
    } else if (p == "touching-left") {
      spec.placement = Placement::touching_left;
    } else {
      throw ValidationError("spec.placement: unknown placement '" + p + "'");
    }
  }
  return spec;
}

}  // namespace

MoranSpec read_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open spec file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec_json(buf.str());
}

std::string spec_to_json(const MoranSpec& spec) {
  json doc;
  doc["version"] = 1;
  doc["interval"] = {spec.interval.lo, spec.interval.hi};
  doc["branch"] = rule_json(spec.branch);
  if (const auto* rule = std::get_if<SequenceRule>(&spec.ratio)) {
    doc["ratio"] = rule_json(*rule);
  } else {
    const auto& t = std::get<ChildTable>(spec.ratio);
    doc["ratio"] = {{"kind", "per-child"}, {"levels", t.levels}, {"tail", t.tail}};
  }
  doc["placement"] =
      spec.placement == Placement::uniform_cantor ? "uniform-cantor" : "touching-left";
  return doc.dump(2);
}

}  // namespace morandim
