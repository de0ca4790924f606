#pragma once

#include "grid.hpp"

namespace gradfuse {

/// Sum over the (2*half+1)^2 window centred on each pixel, replicate borders.
/// Separable prefix sums: O(W*H) regardless of the window size.
RealMap box_sum(const RealMap& in, int half);

/// box_sum divided by the window area.
RealMap box_mean(const RealMap& in, int half);

}  // namespace gradfuse
