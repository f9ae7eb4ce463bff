#pragma once

// JSON spec documents:
//
//   {"version": 1, "interval": [lo, hi], "branch": RULE, "ratio": RULE,
//    "placement": "uniform-cantor" | "touching-left"}
//
// RULE is one of
//   {"kind": "constant", "value": x}
//   {"kind": "list", "values": [x1, x2, ...], "tail": x}
//   {"kind": "geometric", "base": b, "exponent": e}          value b^(e k)
//   {"kind": "blocks", "breakpoints": BP, "regions": [REGION, ...]}
//   {"kind": "per-child", "levels": [[c, ...], ...], "tail": [c, ...]}  (ratio only)
// BP is {"generator": "square-exponent", "t_max": t} or {"generator": "explicit", "q": [...]}.
// REGION is {"select": "(q_t,2q_t]" | "(2q_t,2q_t+t]" | "else", "value": VALUE} with
// VALUE one of {"form": "constant", "value": x}, {"form": "half-one-minus-inverse-2t"},
// {"form": "inverse-affine", "u": u, "v": v}.
//
// Unknown fields, wrong types and unknown kinds are ValidationErrors.

#include <string>

#include "morandim/seqspec.hpp"

namespace morandim {

MoranSpec parse_spec_json(const std::string& text);
MoranSpec read_spec_file(const std::string& path);
std::string spec_to_json(const MoranSpec& spec);

}  // namespace morandim
