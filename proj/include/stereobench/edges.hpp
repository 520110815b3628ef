#pragma once

#include "stereobench/image.hpp"

namespace stereobench {

/// Sobel response of a plane. gx uses [-1 0 1; -2 0 2; -1 0 1], gy its
/// transpose; positive gx means intensity increases to the right and
/// positive gy means it increases downward.
struct GradientField {
  Plane gx;
  Plane gy;
  Plane magnitude;

  int width() const noexcept { return gx.width(); }
  int height() const noexcept { return gx.height(); }
};

struct CannyParams {
  double gaussian_sigma = 1.4;
  double low_threshold = 50.0;
  double high_threshold = 150.0;

  /// Throws InvalidParams unless sigma > 0, 0 <= low <= high <= 255.
  void validate() const;
};

/// 3x3 Sobel with replicate border padding. Throws EmptyInput on a 0-sized plane.
GradientField sobel(const Plane& field);

/// Adjoint of the linear map f -> (gx, gy) computed by sobel(): returns
/// S^T [grad_gx; grad_gy], including the scatter induced by replicate padding.
Plane sobel_adjoint(const Plane& grad_gx, const Plane& grad_gy);

/// Half-width of the Gaussian kernel used for a given sigma: round(1.5 sigma), at least 1.
/// sigma = 1.4 gives the classic 5x5 Canny kernel.
int gaussian_radius(double sigma);

/// Separable normalized Gaussian blur with replicate padding.
Plane gaussian_blur(const Plane& field, double sigma);

/// Blur, Sobel, non-maximum suppression over 4 quantized directions, then
/// double-threshold hysteresis with 8-connectivity. Thresholds apply to the
/// unnormalized L2 Sobel magnitude.
BinaryMap canny(const GrayImage& gray, const CannyParams& params = {});

}  // namespace stereobench
