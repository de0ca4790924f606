#include "gradient.hpp"

#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include <fftw3.h>

namespace gradfuse {

GradientField compute_gradients(const Plane& p) {
  const int w = p.width();
  const int h = p.height();
  GradientField g{RealMap(w, h), RealMap(w, h)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (x + 1 < w) g.gx(x, y) = p(x + 1, y) - p(x, y);
      if (y + 1 < h) g.gy(x, y) = p(x, y + 1) - p(x, y);
    }
  }
  return g;
}

GradientField fuse_gradients(const GradientField& a, const GradientField& b) {
  require_same_shape(a.gx, b.gx, "fuse_gradients");
  require_same_shape(a.gx, a.gy, "fuse_gradients");
  require_same_shape(b.gx, b.gy, "fuse_gradients");
  GradientField out{a.gx, a.gy};
  const auto ax = a.gx.data();
  const auto ay = a.gy.data();
  const auto bx = b.gx.data();
  const auto by = b.gy.data();
  auto ox = out.gx.data();
  auto oy = out.gy.data();
  for (std::size_t i = 0; i < ox.size(); ++i) {
    // Squared norms compare the same as norms.
    if (bx[i] * bx[i] + by[i] * by[i] > ax[i] * ax[i] + ay[i] * ay[i]) {
      ox[i] = bx[i];
      oy[i] = by[i];
    }
  }
  return out;
}

namespace {

// FFTW's planner is not reentrant; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* plan) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

Plan make_plan(int w, int h, double* buffer, fftw_r2r_kind kind) {
  std::lock_guard lock(planner_mutex());
  // FFTW_ESTIMATE never measures, so the chosen algorithm and its rounding are fixed.
  return Plan(fftw_plan_r2r_2d(h, w, buffer, buffer, kind, kind, FFTW_ESTIMATE));
}

}  // namespace

RealMap integrate_gradients(const GradientField& g, double target_mean) {
  require_same_shape(g.gx, g.gy, "integrate_gradients");
  const int w = g.width();
  const int h = g.height();
  if (w < 1 || h < 1) throw Error(Error::Code::dimension, "empty gradient field");

  // Normal equations D^T D u = D^T g; D^T g is the negative backward divergence.
  std::vector<double> buf(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double rhs = -g.gx(x, y) - g.gy(x, y);
      if (x > 0) rhs += g.gx(x - 1, y);
      if (y > 0) rhs += g.gy(x, y - 1);
      buf[static_cast<std::size_t>(y) * w + x] = rhs;
    }
  }

  const Plan forward = make_plan(w, h, buf.data(), FFTW_REDFT10);
  const Plan inverse = make_plan(w, h, buf.data(), FFTW_REDFT01);
  if (!forward || !inverse) throw Error(Error::Code::invalid_argument, "FFTW planning failed");

  fftw_execute_r2r(forward.get(), buf.data(), buf.data());

  // The Neumann Laplacian is diagonal in the DCT-II basis.
  std::vector<double> lx(static_cast<std::size_t>(w));
  std::vector<double> ly(static_cast<std::size_t>(h));
  for (int i = 0; i < w; ++i) lx[i] = 2.0 - 2.0 * std::cos(std::numbers::pi * i / w);
  for (int j = 0; j < h; ++j) ly[j] = 2.0 - 2.0 * std::cos(std::numbers::pi * j / h);
  const double norm = 4.0 * static_cast<double>(w) * static_cast<double>(h);
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      double& c = buf[static_cast<std::size_t>(j) * w + i];
      c = (i == 0 && j == 0) ? 0.0 : c / ((lx[i] + ly[j]) * norm);
    }
  }

  fftw_execute_r2r(inverse.get(), buf.data(), buf.data());

  // The DC term was zeroed, so the mean is zero up to rounding; remove it exactly.
  double mean = 0.0;
  for (double v : buf) mean += v;
  mean /= static_cast<double>(buf.size());
  RealMap u(w, h);
  auto out = u.data();
  for (std::size_t i = 0; i < buf.size(); ++i) out[i] = buf[i] - mean + target_mean;
  return u;
}

Plane reconstruct_from_gradients(const GradientField& g, double target_mean) {
  return Plane::clamped_from(integrate_gradients(g, target_mean));
}

Plane initial_fusion(const Plane& la, const Plane& lb) {
  require_same_shape(la, lb, "initial_fusion");
  const auto fused = fuse_gradients(compute_gradients(la), compute_gradients(lb));
  return reconstruct_from_gradients(fused, 0.5 * (la.mean() + lb.mean()));
}

}  // namespace gradfuse
