#pragma once

#include <string>

#include "grid.hpp"

namespace gradfuse {

/// Sigmoid constants of the gradient-preservation metric.
struct QabfConstants {
  double gamma_g = 0.9994;
  double kappa_g = -15.0;
  double sigma_g = 0.5;
  double gamma_a = 0.9879;
  double kappa_a = -22.0;
  double sigma_a = 0.8;
  double weight_exponent = 1.0;  // L in w = g^L
};

struct MetricsReport {
  std::string name;
  double sf = 0.0;
  double nmi = 0.0;
  double qabf = 0.0;
};

/// sqrt(RF^2 + CF^2) on the 0-255 scale.
double spatial_frequency(const RealMap& f);

/// 2 * [I(A;F)/(H(A)+H(F)) + I(B;F)/(H(B)+H(F))] on 8-bit quantized samples, log base 2.
/// A term whose entropy sum is zero contributes 0.
double normalized_mutual_information(const RealMap& a, const RealMap& b, const RealMap& f);

/// Edge-strength and orientation preservation of A and B in F, weighted by source
/// gradient strength. Returns 0 when neither source has any gradient.
double qabf(const RealMap& a, const RealMap& b, const RealMap& f,
            const QabfConstants& constants = {});

/// Luma PSNR in dB on the 0-255 scale; +inf for identical inputs.
double psnr(const RealMap& x, const RealMap& y);

MetricsReport evaluate(const std::string& name, const RealMap& a, const RealMap& b,
                       const RealMap& f);

}  // namespace gradfuse
