#pragma once

#include <vector>

#include "matchrobust/stability.hpp"

namespace matchrobust::detail {

/// Every rotation of an instance, in the order a single elimination sequence
/// from the men-optimal to the women-optimal matching exposes them.
struct RotationTrace {
  Matching men_optimal;
  Matching women_optimal;
  std::vector<Rotation> rotations;
  std::vector<std::vector<std::size_t>> predecessors;  // filled only on request
};

RotationTrace trace_rotations(const Instance& inst, bool with_precedence);

}  // namespace matchrobust::detail
