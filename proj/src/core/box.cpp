#include "box.hpp"

#include <algorithm>
#include <vector>

namespace gradfuse {

namespace {

// Sums `n` strided samples over a clamped window; `out` receives the same stride.
void sum_line(const double* in, double* out, int n, std::ptrdiff_t stride, int half,
              std::vector<double>& prefix) {
  const int padded = n + 2 * half;
  prefix.assign(static_cast<std::size_t>(padded) + 1, 0.0);
  for (int i = 0; i < padded; ++i) {
    const int src = std::clamp(i - half, 0, n - 1);
    prefix[static_cast<std::size_t>(i) + 1] = prefix[static_cast<std::size_t>(i)] + in[src * stride];
  }
  const int span = 2 * half + 1;
  for (int i = 0; i < n; ++i) {
    out[i * stride] =
        prefix[static_cast<std::size_t>(i + span)] - prefix[static_cast<std::size_t>(i)];
  }
}

}  // namespace

RealMap box_sum(const RealMap& in, int half) {
  if (half < 0) throw Error(Error::Code::invalid_argument, "negative window radius");
  const int w = in.width();
  const int h = in.height();
  RealMap rows(w, h);
  RealMap out(w, h);
  std::vector<double> prefix;
  for (int y = 0; y < h; ++y) {
    sum_line(in.row(y).data(), rows.row(y).data(), w, 1, half, prefix);
  }
  const double* src = rows.data().data();
  double* dst = out.data().data();
  for (int x = 0; x < w; ++x) sum_line(src + x, dst + x, h, w, half, prefix);
  return out;
}

RealMap box_mean(const RealMap& in, int half) {
  RealMap out = box_sum(in, half);
  const double area = static_cast<double>(2 * half + 1) * static_cast<double>(2 * half + 1);
  for (double& v : out.data()) v /= area;
  return out;
}

}  // namespace gradfuse
