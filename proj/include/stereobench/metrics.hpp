#pragma once

#include <span>

#include "stereobench/edges.hpp"
#include "stereobench/image.hpp"

namespace stereobench {

struct SiouConfig {
  /// Weight of the edge term; the difference-map term gets 1 - alpha.
  double alpha = 0.75;
  /// |a - b| >= diff_threshold marks a pixel in a difference mask.
  double diff_threshold = 5.0;
  CannyParams canny;

  void validate() const;
};

struct SiouScore {
  double siou = 0.0;
  double edge_iou = 0.0;
  double diff_iou = 0.0;
};

/// |a AND b| / |a OR b|. Two empty masks score 1.0, exactly one empty mask 0.0.
double binary_iou(const BinaryMap& a, const BinaryMap& b);

/// Mask of pixels where |a - b| >= threshold.
BinaryMap threshold_difference(const GrayImage& a, const GrayImage& b, double threshold);

/// IoU of the thresholded |gen - left| and |right - left| masks.
double diff_iou(const GrayImage& left, const GrayImage& right, const GrayImage& gen, double threshold);

/// Stereo IoU: alpha * IoU(canny(gen), canny(right)) + (1 - alpha) * diff_iou.
SiouScore siou(const GrayImage& left, const GrayImage& right, const GrayImage& gen, const SiouConfig& cfg = {});

double rmse(std::span<const double> a, std::span<const double> b);
/// Over all pixels and channels on the [0, 255] scale.
double rmse(const Image& a, const Image& b);

/// 20 log10(255 / rmse); +infinity when rmse is zero.
double psnr_from_rmse(double rmse_value);
double psnr(const Image& a, const Image& b);

inline constexpr int kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;

/// Mean SSIM over every fully contained 11x11 Gaussian window (sigma 1.5),
/// C1 = (0.01 * 255)^2, C2 = (0.03 * 255)^2, population statistics.
double ssim(const GrayImage& a, const GrayImage& b);
/// SSIM of the BT.601 luminance of both images.
double ssim(const Image& a, const Image& b);

}  // namespace stereobench
