#pragma once

#include "grid.hpp"

namespace gradfuse {

/// Non-negative focus map; no upper bound.
using SaliencyMap = RealMap;

/// Per-pixel Sobel energy Gx^2 + Gy^2 with replicate borders.
RealMap sobel_energy(const RealMap& p);

/// Tenengrad saliency: Sobel energy summed over a tw x tw window (replicate borders).
/// tw must be odd with 1 <= tw <= min(width, height); tw = 1 gives the energy itself.
SaliencyMap tenengrad(const RealMap& p, int tw);

/// Whole-image Tenengrad: energy summed over interior pixels only.
double total_tenengrad(const RealMap& p);

}  // namespace gradfuse
