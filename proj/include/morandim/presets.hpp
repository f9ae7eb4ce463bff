#pragma once

#include <cstdint>

#include "morandim/seqspec.hpp"

namespace morandim::presets {

// n_k == n, c_k == c on [0, 1].
MoranSpec constant(std::uint64_t n, double c,
                   Placement placement = Placement::uniform_cantor);

// n_k = 3^k, c_k = 3^{-2k}.
MoranSpec example4();

// n_k == 2; c_k = 1/4 on (q_t, 2q_t], (1 - 1/(2t))/2 on (2q_t, 2q_t + t],
// 1/5 elsewhere; q_t = 2^(t^2) for t <= t_max.
MoranSpec example5(int t_max = 4);

// As example5 but c_k = 1/(u + v k/q_t) on (q_t, 2q_t].
MoranSpec example6(int t_max = 4, double u = 2.0, double v = 1.0);

// Example-5 blocks with a different constant off the blocks.
MoranSpec example5_with_background(int t_max, double background);

// Deepest level of the last block: 2 q_{t_max} + t_max.
std::int64_t block_depth(int t_max);

}  // namespace morandim::presets
