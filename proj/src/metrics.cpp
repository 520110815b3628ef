#include "stereobench/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "detail.hpp"
#include "stereobench/error.hpp"

namespace stereobench {

void SiouConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::InvalidParams, "SIoU alpha must lie in [0, 1]");
  if (!(diff_threshold >= 0.0 && diff_threshold <= 255.0)) {
    throw Error(ErrorCode::InvalidParams, "SIoU diff threshold must lie in [0, 255]");
  }
  canny.validate();
}

double binary_iou(const BinaryMap& a, const BinaryMap& b) {
  detail::require_same_size(a, b);
  std::size_t inter = 0;
  std::size_t uni = 0;
  const auto av = a.values();
  const auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) {
    inter += static_cast<std::size_t>(av[i] & bv[i]);
    uni += static_cast<std::size_t>(av[i] | bv[i]);
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

BinaryMap threshold_difference(const GrayImage& a, const GrayImage& b, double threshold) {
  detail::require_same_size(a, b);
  BinaryMap mask(a.width(), a.height());
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) mask.set(x, y, std::abs(a(x, y) - b(x, y)) >= threshold);
  }
  return mask;
}

double diff_iou(const GrayImage& left, const GrayImage& right, const GrayImage& gen, double threshold) {
  detail::require_same_size(left, right);
  detail::require_same_size(left, gen);
  return binary_iou(threshold_difference(gen, left, threshold), threshold_difference(right, left, threshold));
}

SiouScore siou(const GrayImage& left, const GrayImage& right, const GrayImage& gen, const SiouConfig& cfg) {
  cfg.validate();
  detail::require_same_size(left, right);
  detail::require_same_size(left, gen);
  SiouScore s;
  s.edge_iou = binary_iou(canny(gen, cfg.canny), canny(right, cfg.canny));
  s.diff_iou = diff_iou(left, right, gen, cfg.diff_threshold);
  s.siou = cfg.alpha * s.edge_iou + (1.0 - cfg.alpha) * s.diff_iou;
  return s;
}

double rmse(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "rmse inputs differ in length: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  if (a.empty()) throw Error(ErrorCode::EmptyInput, "rmse of empty inputs");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(a.size()));
}

double rmse(const Image& a, const Image& b) {
  detail::require_same_size(a, b);
  return rmse(a.values(), b.values());
}

double psnr_from_rmse(double rmse_value) {
  if (rmse_value == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(255.0 / rmse_value);
}

double psnr(const Image& a, const Image& b) { return psnr_from_rmse(rmse(a, b)); }

namespace {

std::vector<double> ssim_kernel() {
  std::vector<double> k(kSsimWindow);
  const int r = kSsimWindow / 2;
  double total = 0.0;
  for (int i = -r; i <= r; ++i) {
    k[static_cast<std::size_t>(i + r)] = std::exp(-(i * i) / (2.0 * kSsimSigma * kSsimSigma));
    total += k[static_cast<std::size_t>(i + r)];
  }
  for (double& v : k) v /= total;
  return k;
}

// Separable "valid" correlation: output is (w - 10) x (h - 10).
std::vector<double> filter_valid(const std::vector<double>& src, int w, int h, const std::vector<double>& k) {
  const int n = static_cast<int>(k.size());
  const int ow = w - n + 1;
  const int oh = h - n + 1;
  std::vector<double> rows(static_cast<std::size_t>(ow) * static_cast<std::size_t>(h));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += k[static_cast<std::size_t>(i)] * src[static_cast<std::size_t>(y) * w + x + i];
      rows[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(ow) * static_cast<std::size_t>(oh));
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += k[static_cast<std::size_t>(i)] * rows[static_cast<std::size_t>(y + i) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
  return out;
}

}  // namespace

double ssim(const GrayImage& a, const GrayImage& b) {
  detail::require_same_size(a, b);
  const int w = a.width();
  const int h = a.height();
  if (w < kSsimWindow || h < kSsimWindow) {
    throw Error(ErrorCode::TooSmall, "SSIM needs at least 11x11 pixels, got " + std::to_string(w) + "x" +
                                         std::to_string(h));
  }
  const auto k = ssim_kernel();
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  std::vector<double> va(a.values().begin(), a.values().end());
  std::vector<double> vb(b.values().begin(), b.values().end());
  std::vector<double> aa(n), bb(n), ab(n);
  for (std::size_t i = 0; i < n; ++i) {
    aa[i] = va[i] * va[i];
    bb[i] = vb[i] * vb[i];
    ab[i] = va[i] * vb[i];
  }
  const auto mu_a = filter_valid(va, w, h, k);
  const auto mu_b = filter_valid(vb, w, h, k);
  const auto m_aa = filter_valid(aa, w, h, k);
  const auto m_bb = filter_valid(bb, w, h, k);
  const auto m_ab = filter_valid(ab, w, h, k);

  constexpr double c1 = (0.01 * 255.0) * (0.01 * 255.0);
  constexpr double c2 = (0.03 * 255.0) * (0.03 * 255.0);
  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a[i];
    const double mb = mu_b[i];
    const double var_a = m_aa[i] - ma * ma;
    const double var_b = m_bb[i] - mb * mb;
    const double cov = m_ab[i] - ma * mb;
    total += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) / ((ma * ma + mb * mb + c1) * (var_a + var_b + c2));
  }
  return total / static_cast<double>(mu_a.size());
}

double ssim(const Image& a, const Image& b) {
  detail::require_same_size(a, b);
  return ssim(to_grayscale(a), to_grayscale(b));
}

}  // namespace stereobench
