#include "metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace gradfuse {

double spatial_frequency(const RealMap& f) {
  const int w = f.width();
  const int h = f.height();
  double rf = 0.0;
  double cf = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (x > 0) {
        const double d = 255.0 * (f(x, y) - f(x - 1, y));
        rf += d * d;
      }
      if (y > 0) {
        const double d = 255.0 * (f(x, y) - f(x, y - 1));
        cf += d * d;
      }
    }
  }
  const double rf_n = static_cast<double>(w - 1) * h;
  const double cf_n = static_cast<double>(h - 1) * w;
  rf = rf_n > 0 ? rf / rf_n : 0.0;
  cf = cf_n > 0 ? cf / cf_n : 0.0;
  return std::sqrt(rf + cf);
}

namespace {

int level(double v) { return static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); }

std::vector<int> quantize(const RealMap& m) {
  std::vector<int> out(m.size());
  std::transform(m.data().begin(), m.data().end(), out.begin(), level);
  return out;
}

double entropy_of(const std::vector<double>& counts, double n) {
  double h = 0.0;
  for (double c : counts) {
    if (c > 0) {
      const double p = c / n;
      h -= p * std::log2(p);
    }
  }
  return h;
}

// Returns I(X;Y) / (H(X) + H(Y)), or 0 when both entropies vanish.
double normalized_term(const std::vector<int>& x, const std::vector<int>& y) {
  std::vector<double> joint(256 * 256, 0.0);
  std::vector<double> px(256, 0.0);
  std::vector<double> py(256, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    joint[static_cast<std::size_t>(x[i]) * 256 + y[i]] += 1.0;
    px[x[i]] += 1.0;
    py[y[i]] += 1.0;
  }
  const double n = static_cast<double>(x.size());
  const double hx = entropy_of(px, n);
  const double hy = entropy_of(py, n);
  if (hx + hy <= 0.0) return 0.0;
  const double hxy = entropy_of(joint, n);
  return (hx + hy - hxy) / (hx + hy);
}

struct EdgeInfo {
  std::vector<double> strength;
  std::vector<double> angle;
};

EdgeInfo edges(const RealMap& p) {
  const int w = p.width();
  const int h = p.height();
  EdgeInfo e{std::vector<double>(p.size()), std::vector<double>(p.size())};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double gx = (p.clamped(x + 1, y - 1) + 2.0 * p.clamped(x + 1, y) +
                         p.clamped(x + 1, y + 1)) -
                        (p.clamped(x - 1, y - 1) + 2.0 * p.clamped(x - 1, y) +
                         p.clamped(x - 1, y + 1));
      const double gy = (p.clamped(x - 1, y + 1) + 2.0 * p.clamped(x, y + 1) +
                         p.clamped(x + 1, y + 1)) -
                        (p.clamped(x - 1, y - 1) + 2.0 * p.clamped(x, y - 1) +
                         p.clamped(x + 1, y - 1));
      const auto i = static_cast<std::size_t>(y) * w + x;
      e.strength[i] = std::sqrt(gx * gx + gy * gy);
      if (gx != 0.0) {
        e.angle[i] = std::atan(gy / gx);
      } else {
        e.angle[i] = gy != 0.0 ? std::numbers::pi / 2.0 : 0.0;
      }
    }
  }
  return e;
}

double preservation(double gs, double as, double gf, double af, const QabfConstants& c) {
  double g = 1.0;
  if (gs > gf) {
    g = gf / gs;
  } else if (gf > gs) {
    g = gs / gf;
  }
  const double a = 1.0 - std::abs(as - af) / (std::numbers::pi / 2.0);
  const double qg = c.gamma_g / (1.0 + std::exp(c.kappa_g * (g - c.sigma_g)));
  const double qa = c.gamma_a / (1.0 + std::exp(c.kappa_a * (a - c.sigma_a)));
  return qg * qa;
}

}  // namespace

double normalized_mutual_information(const RealMap& a, const RealMap& b, const RealMap& f) {
  require_same_shape(a, f, "nmi");
  require_same_shape(b, f, "nmi");
  const auto qa = quantize(a);
  const auto qb = quantize(b);
  const auto qf = quantize(f);
  return 2.0 * (normalized_term(qa, qf) + normalized_term(qb, qf));
}

double qabf(const RealMap& a, const RealMap& b, const RealMap& f, const QabfConstants& c) {
  require_same_shape(a, f, "qabf");
  require_same_shape(b, f, "qabf");
  const EdgeInfo ea = edges(a);
  const EdgeInfo eb = edges(b);
  const EdgeInfo ef = edges(f);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < ea.strength.size(); ++i) {
    const double wa = std::pow(ea.strength[i], c.weight_exponent);
    const double wb = std::pow(eb.strength[i], c.weight_exponent);
    if (wa == 0.0 && wb == 0.0) continue;
    num += preservation(ea.strength[i], ea.angle[i], ef.strength[i], ef.angle[i], c) * wa +
           preservation(eb.strength[i], eb.angle[i], ef.strength[i], ef.angle[i], c) * wb;
    den += wa + wb;
  }
  return den > 0.0 ? num / den : 0.0;
}

double psnr(const RealMap& x, const RealMap& y) {
  require_same_shape(x, y, "psnr");
  double mse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = 255.0 * (x.data()[i] - y.data()[i]);
    mse += d * d;
  }
  mse /= static_cast<double>(x.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

MetricsReport evaluate(const std::string& name, const RealMap& a, const RealMap& b,
                       const RealMap& f) {
  return {name, spatial_frequency(f), normalized_mutual_information(a, b, f), qabf(a, b, f)};
}

}  // namespace gradfuse
