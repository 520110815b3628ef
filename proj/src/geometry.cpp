#include "stereobench/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <vector>

#include "detail.hpp"
#include "json.hpp"
#include "stereobench/error.hpp"
#include "stereobench/image_io.hpp"

namespace stereobench {
namespace {

Plane validated(Plane values) {
  if (values.width() < 1 || values.height() < 1) throw Error(ErrorCode::ZeroDimension, "empty disparity map");
  for (double d : values.values()) {
    if (!std::isfinite(d) || d < 0.0) {
      throw Error(ErrorCode::OutOfRange, "disparity values must be finite and >= 0, got " + std::to_string(d));
    }
  }
  return values;
}

}  // namespace

DisparityMap::DisparityMap(Plane values) : values_(validated(std::move(values))) {}

DisparityMap::DisparityMap(int width, int height, double fill) : DisparityMap(Plane(width, height, fill)) {}

DisparityMap depth_to_disparity(const Plane& depth, double focal_times_baseline, double min_depth_clamp) {
  if (!(focal_times_baseline > 0.0)) throw Error(ErrorCode::NonPositiveParam, "focal_times_baseline must be > 0");
  if (!(min_depth_clamp > 0.0)) throw Error(ErrorCode::NonPositiveParam, "min_depth_clamp must be > 0");
  Plane out(depth.width(), depth.height());
  for (std::size_t i = 0; i < depth.size(); ++i) {
    out.values()[i] = focal_times_baseline / std::max(depth.values()[i], min_depth_clamp);
  }
  return DisparityMap(std::move(out));
}

DisparityMap scale_disparity(const DisparityMap& disp, double factor) {
  if (!(factor >= 0.0)) throw Error(ErrorCode::InvalidParams, "disparity scale must be >= 0");
  Plane out = disp.plane();
  for (double& d : out.values()) d *= factor;
  return DisparityMap(std::move(out));
}

int warp_target_column(int x, double disparity) noexcept {
  // ceil(v - 0.5) commutes with integer shifts: x - d lands on x - round_half_up(d).
  return static_cast<int>(std::ceil(static_cast<double>(x) - disparity - 0.5));
}

WarpResult forward_warp(const Image& left, const DisparityMap& disp) {
  detail::require_same_size(left, disp);
  const int w = left.width();
  const int h = left.height();
  WarpResult result{Image(w, h), BinaryMap(w, h, true)};
  std::vector<double> depth_buffer(static_cast<std::size_t>(w));
  for (int y = 0; y < h; ++y) {
    std::fill(depth_buffer.begin(), depth_buffer.end(), -std::numeric_limits<double>::infinity());
    for (int x = 0; x < w; ++x) {
      const double d = disp(x, y);
      const int xt = warp_target_column(x, d);
      if (xt < 0 || xt >= w) continue;
      auto& best = depth_buffer[static_cast<std::size_t>(xt)];
      if (d <= best) continue;
      best = d;
      for (int c = 0; c < Image::kChannels; ++c) result.warped(xt, y, c) = left(x, y, c);
      result.occlusion.set(xt, y, false);
    }
  }
  return result;
}

Image fill_occlusions_nearest(const WarpResult& result) {
  const Image& src = result.warped;
  const BinaryMap& holes = result.occlusion;
  detail::require_same_size(src, holes);
  const int w = src.width();
  const int h = src.height();
  Image out = src;
  std::vector<bool> row_has_valid(static_cast<std::size_t>(h), false);

  for (int y = 0; y < h; ++y) {
    // next_valid[x]: first non-hole column >= x, or -1.
    std::vector<int> next_valid(static_cast<std::size_t>(w), -1);
    int next = -1;
    for (int x = w - 1; x >= 0; --x) {
      if (!holes(x, y)) next = x;
      next_valid[static_cast<std::size_t>(x)] = next;
    }
    int prev = -1;
    for (int x = 0; x < w; ++x) {
      if (!holes(x, y)) {
        prev = x;
        continue;
      }
      const int from = next_valid[static_cast<std::size_t>(x)] >= 0 ? next_valid[static_cast<std::size_t>(x)] : prev;
      if (from < 0) continue;
      for (int c = 0; c < Image::kChannels; ++c) out(x, y, c) = src(from, y, c);
    }
    row_has_valid[static_cast<std::size_t>(y)] = next_valid[0] >= 0;
  }

  if (std::none_of(row_has_valid.begin(), row_has_valid.end(), [](bool v) { return v; })) {
    throw Error(ErrorCode::AllOccluded, "every pixel of the warped image is occluded");
  }
  for (int y = 0; y < h; ++y) {
    if (row_has_valid[static_cast<std::size_t>(y)]) continue;
    int best = -1;
    for (int dist = 1; best < 0; ++dist) {
      // Prefer the row below on equal distance, mirroring the rightward preference.
      if (y + dist < h && row_has_valid[static_cast<std::size_t>(y + dist)]) {
        best = y + dist;
      } else if (y - dist >= 0 && row_has_valid[static_cast<std::size_t>(y - dist)]) {
        best = y - dist;
      }
    }
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < Image::kChannels; ++c) out(x, y, c) = out(x, best, c);
    }
  }
  return out;
}

namespace {

using nlohmann::json;

json read_sidecar(const std::filesystem::path& path) {
  const auto side = sidecar_path(path);
  if (!std::filesystem::exists(side)) return json::object();
  try {
    return json::parse(detail::read_text(side));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, "malformed sidecar " + side.string() + ": " + e.what());
  }
}

}  // namespace

DisparityMap load_disparity(const std::filesystem::path& path) {
  const json side = read_sidecar(path);
  if (path.extension() == ".png") {
    const cv::Mat m = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
    if (m.empty()) throw Error(ErrorCode::Io, "cannot decode disparity " + path.string());
    if (m.channels() != 1 || (m.depth() != CV_16U && m.depth() != CV_8U)) {
      throw Error(ErrorCode::Parse, path.string() + " is not a single-channel 8/16-bit PNG");
    }
    const double scale = side.value("scale", 1.0);
    if (!(scale > 0.0)) throw Error(ErrorCode::NonPositiveParam, "disparity scale must be > 0");
    Plane p(m.cols, m.rows);
    for (int y = 0; y < m.rows; ++y) {
      for (int x = 0; x < m.cols; ++x) {
        const double raw = m.depth() == CV_16U ? m.at<std::uint16_t>(y, x) : m.at<std::uint8_t>(y, x);
        p(x, y) = raw / scale;
      }
    }
    return DisparityMap(std::move(p));
  }
  if (!side.contains("width") || !side.contains("height")) {
    throw Error(ErrorCode::Parse, "raw disparity " + path.string() + " needs a sidecar with width and height");
  }
  const int w = side.at("width").get<int>();
  const int h = side.at("height").get<int>();
  if (w < 1 || h < 1) throw Error(ErrorCode::ZeroDimension, "raw disparity sidecar has a zero dimension");
  auto values = detail::read_f32_le(path, static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
  return DisparityMap(Plane(w, h, std::move(values)));
}

void save_disparity_png16(const std::filesystem::path& path, const DisparityMap& disp, double scale) {
  if (!(scale > 0.0)) throw Error(ErrorCode::NonPositiveParam, "disparity scale must be > 0");
  cv::Mat m(disp.height(), disp.width(), CV_16UC1);
  for (int y = 0; y < disp.height(); ++y) {
    for (int x = 0; x < disp.width(); ++x) {
      m.at<std::uint16_t>(y, x) = static_cast<std::uint16_t>(std::clamp(std::floor(disp(x, y) * scale + 0.5), 0.0, 65535.0));
    }
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  if (!cv::imwrite(path.string(), m)) throw Error(ErrorCode::Io, "cannot write " + path.string());
  detail::write_text_atomic(sidecar_path(path), json({{"format", "png16"}, {"scale", scale}}).dump() + "\n");
}

void save_disparity_raw(const std::filesystem::path& path, const DisparityMap& disp) {
  const auto v = disp.plane().values();
  detail::write_f32_le(path, std::vector<double>(v.begin(), v.end()));
  detail::write_text_atomic(sidecar_path(path),
                            json({{"format", "f32"}, {"width", disp.width()}, {"height", disp.height()}}).dump() + "\n");
}

}  // namespace stereobench
