#pragma once

#include <filesystem>

#include "stereobench/image.hpp"

namespace stereobench {

/// Horizontal shift in pixels from the left view to the right view. Values
/// are finite and >= 0; shifts beyond the image width simply leave the frame.
class DisparityMap {
 public:
  explicit DisparityMap(Plane values);
  DisparityMap(int width, int height, double fill = 0.0);

  int width() const noexcept { return values_.width(); }
  int height() const noexcept { return values_.height(); }
  double operator()(int x, int y) const noexcept { return values_(x, y); }
  const Plane& plane() const noexcept { return values_; }

 private:
  Plane values_;
};

struct WarpResult {
  Image warped;
  /// true where no source pixel landed.
  BinaryMap occlusion;
};

/// disparity = focal_times_baseline / max(depth, min_depth_clamp).
/// Throws NonPositiveParam for non-positive parameters.
DisparityMap depth_to_disparity(const Plane& depth, double focal_times_baseline, double min_depth_clamp);

/// Multiplies every disparity by `factor` (>= 0).
DisparityMap scale_disparity(const DisparityMap& disp, double factor);

/// Target column of source column x: x - d rounded to nearest, ties toward
/// the smaller column, so a uniform shift d moves content left by d rounded half up.
int warp_target_column(int x, double disparity) noexcept;

/// Nearest-pixel forward splat of the left view into the right view
/// (x' = x - d, content moves left). Collisions keep the larger disparity;
/// unhit pixels are black and flagged in the occlusion mask.
WarpResult forward_warp(const Image& left, const DisparityMap& disp);

/// Fills each hole from the first valid pixel to its right, else to its left.
/// Rows without any valid pixel copy the nearest row that had one.
/// Throws AllOccluded when nothing was splatted.
Image fill_occlusions_nearest(const WarpResult& result);

/// Reads a disparity file. `.png`: 16-bit single channel divided by the
/// sidecar's "scale" (1 when the sidecar is absent). Anything else: raw
/// little-endian float32 with a sidecar giving "width" and "height".
DisparityMap load_disparity(const std::filesystem::path& path);
void save_disparity_png16(const std::filesystem::path& path, const DisparityMap& disp, double scale);
void save_disparity_raw(const std::filesystem::path& path, const DisparityMap& disp);

}  // namespace stereobench
