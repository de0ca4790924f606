#include "saliency.hpp"

#include <algorithm>
#include <string>

#include "box.hpp"

namespace gradfuse {

RealMap sobel_energy(const RealMap& p) {
  const int w = p.width();
  const int h = p.height();
  RealMap e(w, h);
  for (int y = 0; y < h; ++y) {
    const int ym = std::max(y - 1, 0);
    const int yp = std::min(y + 1, h - 1);
    for (int x = 0; x < w; ++x) {
      const int xm = std::max(x - 1, 0);
      const int xp = std::min(x + 1, w - 1);
      const double gx = (p(xp, ym) + 2.0 * p(xp, y) + p(xp, yp)) -
                        (p(xm, ym) + 2.0 * p(xm, y) + p(xm, yp));
      const double gy = (p(xm, yp) + 2.0 * p(x, yp) + p(xp, yp)) -
                        (p(xm, ym) + 2.0 * p(x, ym) + p(xp, ym));
      e(x, y) = gx * gx + gy * gy;
    }
  }
  return e;
}

SaliencyMap tenengrad(const RealMap& p, int tw) {
  if (tw < 1 || tw % 2 == 0 || tw > std::min(p.width(), p.height())) {
    throw Error(Error::Code::invalid_argument,
                "tenengrad window must be odd and within [1, min(W,H)], got " +
                    std::to_string(tw));
  }
  RealMap e = sobel_energy(p);
  if (tw == 1) return e;
  return box_sum(e, tw / 2);
}

double total_tenengrad(const RealMap& p) {
  const RealMap e = sobel_energy(p);
  double total = 0.0;
  for (int y = 1; y + 1 < p.height(); ++y) {
    for (int x = 1; x + 1 < p.width(); ++x) total += e(x, y);
  }
  return total;
}

}  // namespace gradfuse
