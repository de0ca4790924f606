#pragma once

#include "image.hpp"

namespace gradfuse {

/// Forward-difference gradients. The last column of gx and the last row of gy are 0.
struct GradientField {
  RealMap gx;
  RealMap gy;

  int width() const noexcept { return gx.width(); }
  int height() const noexcept { return gx.height(); }
};

GradientField compute_gradients(const Plane& p);

/// Per pixel, keeps whichever input vector has the larger Euclidean norm; ties keep `a`.
GradientField fuse_gradients(const GradientField& a, const GradientField& b);

/// Least-squares integration of `g` under Neumann boundaries, solved exactly in the
/// cosine basis. The free constant is fixed so the unclamped mean equals `target_mean`;
/// the result is then clamped to [0,1].
Plane reconstruct_from_gradients(const GradientField& g, double target_mean);

/// Same solve without the final clamp; exposed for mean and residual checks.
RealMap integrate_gradients(const GradientField& g, double target_mean);

/// Initial all-in-focus luminance from two source luminances.
Plane initial_fusion(const Plane& la, const Plane& lb);

}  // namespace gradfuse
