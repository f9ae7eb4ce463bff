#include "morandim/presets.hpp"

namespace morandim::presets {
namespace {

BlocksRule example5_blocks(int t_max, RegionValue first, double background) {
  BlocksRule rule;
  rule.breakpoints = Breakpoints::square_exponent(t_max);
  rule.regions.push_back({RegionSelector::first_block, first});
  rule.regions.push_back({RegionSelector::tail_block,
                          {RegionValue::Form::half_one_minus_inverse_2t, 0.0, 0.0, 0.0}});
  rule.regions.push_back({RegionSelector::otherwise,
                          {RegionValue::Form::constant, background, 0.0, 0.0}});
  return rule;
}

}  // namespace

MoranSpec constant(std::uint64_t n, double c, Placement placement) {
  MoranSpec spec;
  spec.branch = ConstantRule{static_cast<double>(n)};
  spec.ratio = SequenceRule{ConstantRule{c}};
  spec.placement = placement;
  return spec;
}

MoranSpec example4() {
  MoranSpec spec;
  spec.branch = GeometricRule{3.0, 1};
  spec.ratio = SequenceRule{GeometricRule{3.0, -2}};
  return spec;
}

MoranSpec example5_with_background(int t_max, double background) {
  MoranSpec spec;
  spec.branch = ConstantRule{2.0};
  spec.ratio = SequenceRule{example5_blocks(
      t_max, {RegionValue::Form::constant, 0.25, 0.0, 0.0}, background)};
  return spec;
}

MoranSpec example5(int t_max) { return example5_with_background(t_max, 0.2); }

MoranSpec example6(int t_max, double u, double v) {
  MoranSpec spec;
  spec.branch = ConstantRule{2.0};
  spec.ratio = SequenceRule{
      example5_blocks(t_max, {RegionValue::Form::inverse_affine, 0.0, u, v}, 0.2)};
  return spec;
}

std::int64_t block_depth(int t_max) {
  const auto q = std::int64_t{1} << (t_max * t_max);
  return 2 * q + t_max;
}

}  // namespace morandim::presets
