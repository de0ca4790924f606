#include "refine.hpp"

#include <cmath>
#include <vector>

#include "box.hpp"
#include "gici.hpp"

namespace gradfuse {

int adaptive_area_threshold(double th, int width, int height) {
  if (!(th > 0.0 && th < 1.0)) {
    throw Error(Error::Code::invalid_argument, "th must lie in (0,1)");
  }
  const double t = std::round(th * static_cast<double>(width) * static_cast<double>(height));
  return t < 1.0 ? 1 : static_cast<int>(t);
}

DecisionMap area_open(const DecisionMap& m, int t, Connectivity connectivity) {
  if (t < 1) throw Error(Error::Code::invalid_argument, "area_open: t must be >= 1");
  DecisionMap out = m;
  if (t == 1) return out;
  const int w = m.width();
  const int h = m.height();
  std::vector<std::uint8_t> seen(m.size(), 0);
  std::vector<int> component;
  const bool eight = connectivity == Connectivity::eight;

  for (int start = 0; start < static_cast<int>(m.size()); ++start) {
    if (!m.data()[start] || seen[start]) continue;
    component.clear();
    component.push_back(start);
    seen[start] = 1;
    // The component vector doubles as the BFS queue.
    for (std::size_t head = 0; head < component.size(); ++head) {
      const int idx = component[head];
      const int x = idx % w;
      const int y = idx / w;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if ((dx == 0 && dy == 0) || (!eight && dx != 0 && dy != 0)) continue;
          const int nx = x + dx;
          const int ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const int n = ny * w + nx;
          if (m.data()[n] && !seen[n]) {
            seen[n] = 1;
            component.push_back(n);
          }
        }
      }
    }
    if (static_cast<int>(component.size()) < t) {
      for (int idx : component) out.data()[idx] = 0;
    }
  }
  return out;
}

Plane guided_filter(const Plane& guide, const Plane& input, int r, double eps) {
  require_same_shape(guide, input, "guided_filter");
  if (!(eps > 0.0)) throw Error(Error::Code::invalid_argument, "guided_filter: eps must be > 0");
  if (r < 1) throw Error(Error::Code::invalid_argument, "guided_filter: r must be >= 1");

  const int w = guide.width();
  const int h = guide.height();
  RealMap gg(w, h);
  RealMap gp(w, h);
  for (std::size_t i = 0; i < gg.size(); ++i) {
    const double g = guide.data()[i];
    gg.data()[i] = g * g;
    gp.data()[i] = g * input.data()[i];
  }
  const RealMap mean_g = box_mean(guide, r);
  const RealMap mean_p = box_mean(input, r);
  const RealMap mean_gg = box_mean(gg, r);
  const RealMap mean_gp = box_mean(gp, r);

  RealMap a(w, h);
  RealMap b(w, h);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double mg = mean_g.data()[i];
    const double var = mean_gg.data()[i] - mg * mg;
    const double cov = mean_gp.data()[i] - mg * mean_p.data()[i];
    a.data()[i] = cov / (var + eps);
    b.data()[i] = mean_p.data()[i] - a.data()[i] * mg;
  }
  const RealMap mean_a = box_mean(a, r);
  const RealMap mean_b = box_mean(b, r);

  RealMap q(w, h);
  for (std::size_t i = 0; i < q.size(); ++i) {
    q.data()[i] = mean_a.data()[i] * guide.data()[i] + mean_b.data()[i];
  }
  return Plane::clamped_from(q);
}

int consistency_window(double q, int width, int height) {
  if (!(q > 0.0)) throw Error(Error::Code::invalid_argument, "q must be > 0");
  const double phi = q * static_cast<double>(width) * static_cast<double>(height);
  auto side = static_cast<long long>(std::llround(std::sqrt(phi)));
  if (side % 2 == 0) --side;
  return side < 3 ? 3 : static_cast<int>(side);
}

DecisionMap consistency_verify(const RealMap& fm, int side) {
  if (side < 3 || side % 2 == 0) {
    throw Error(Error::Code::invalid_argument, "consistency window must be odd and >= 3");
  }
  const RealMap sums = box_sum(fm, side / 2);
  const double half_area = static_cast<double>(side) * static_cast<double>(side) / 2.0;
  DecisionMap out(fm.width(), fm.height());
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = sums.data()[i] >= half_area;
  return out;
}

std::pair<DecisionMap, DecisionMap> resolve_conflicts(const DecisionMap& vma,
                                                      const DecisionMap& vmb) {
  require_same_shape(vma, vmb, "resolve_conflicts");
  DecisionMap a(vma.width(), vma.height());
  DecisionMap b(vma.width(), vma.height());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool va = vma.data()[i] != 0;
    // (0,0) is undetermined and goes to B; (1,1) is a double claim and goes to A.
    // Either way the pixel follows A's verified map.
    const bool to_a = va;
    a.data()[i] = to_a ? 1 : 0;
    b.data()[i] = to_a ? 0 : 1;
  }
  return {std::move(a), std::move(b)};
}

Plane to_plane(const DecisionMap& m) {
  Plane p(m.width(), m.height());
  for (std::size_t i = 0; i < p.size(); ++i) p.data()[i] = m.data()[i] ? 1.0 : 0.0;
  return p;
}

DecisionMap binarize(const RealMap& m) {
  DecisionMap out(m.width(), m.height());
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = m.data()[i] >= 0.5;
  return out;
}

RefineTrace refine_maps(const DecisionMap& map_a, const Plane& guide_a, const Plane& guide_b,
                        const FusionParams& params) {
  require_same_shape(map_a, guide_a, "refine_maps");
  require_same_shape(map_a, guide_b, "refine_maps");
  const int w = map_a.width();
  const int h = map_a.height();
  RefineTrace t;

  const DecisionMap map_b = complement(map_a);
  if (params.stages.area_open) {
    const int area = adaptive_area_threshold(params.th, w, h);
    t.opened_a = area_open(map_a, area, params.connectivity);
    t.opened_b = area_open(map_b, area, params.connectivity);
  } else {
    t.opened_a = map_a;
    t.opened_b = map_b;
  }

  if (params.stages.guided) {
    t.guided_a = guided_filter(guide_a, to_plane(t.opened_a), params.r, params.eps);
    t.guided_b = guided_filter(guide_b, to_plane(t.opened_b), params.r, params.eps);
  } else {
    t.guided_a = to_plane(t.opened_a);
    t.guided_b = to_plane(t.opened_b);
  }

  if (params.stages.consistency) {
    const int side = consistency_window(params.q, w, h);
    t.verified_a = consistency_verify(t.guided_a, side);
    t.verified_b = consistency_verify(t.guided_b, side);
  } else {
    t.verified_a = binarize(t.guided_a);
    t.verified_b = binarize(t.guided_b);
  }

  std::tie(t.final_a, t.final_b) = resolve_conflicts(t.verified_a, t.verified_b);
  return t;
}

}  // namespace gradfuse
