#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "stereobench/image.hpp"

namespace stereobench {

enum class LatentRole {
  Unspecified,
  CleanLatent,
  NoisyLatent,
  Noise,
  Velocity,
  Prediction,
  LeftCondition,
  WarpedCondition,
};

std::string_view to_string(LatentRole role);
LatentRole latent_role_from_string(std::string_view name);

/// Channel-major (C, H, W) tensor of finite reals.
class LatentTensor {
 public:
  LatentTensor(int channels, int height, int width, LatentRole role = LatentRole::Unspecified);
  LatentTensor(int channels, int height, int width, std::vector<double> values,
               LatentRole role = LatentRole::Unspecified);

  int channels() const noexcept { return channels_; }
  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t size() const noexcept { return values_.size(); }
  LatentRole role() const noexcept { return role_; }
  void set_role(LatentRole role) noexcept { role_ = role; }

  double operator()(int c, int y, int x) const noexcept { return values_[index(c, y, x)]; }
  double& operator()(int c, int y, int x) noexcept { return values_[index(c, y, x)]; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  Plane channel(int c) const;
  bool same_shape(const LatentTensor& other) const noexcept {
    return channels_ == other.channels_ && height_ == other.height_ && width_ == other.width_;
  }

 private:
  std::size_t index(int c, int y, int x) const noexcept {
    return (static_cast<std::size_t>(c) * static_cast<std::size_t>(height_) + static_cast<std::size_t>(y)) *
               static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int channels_;
  int height_;
  int width_;
  std::vector<double> values_;
  LatentRole role_;
};

/// Variance schedule beta_1..beta_T with cumulative products
/// alpha_bar_t = prod_{j<=t} (1 - beta_j). Step 0 is the clean end, alpha_bar_0 = 1.
class NoiseSchedule {
 public:
  /// Throws InvalidRange unless 0 < beta_start <= beta_end < 1 and steps >= 1.
  static NoiseSchedule linear(int steps, double beta_start = 1e-4, double beta_end = 0.02);
  /// Throws InvalidRange unless every beta lies in (0, 1).
  static NoiseSchedule from_betas(std::vector<double> betas);

  int steps() const noexcept { return static_cast<int>(betas_.size()); }
  /// t in [1, T].
  double beta(int t) const;
  /// t in [0, T].
  double alpha_bar(int t) const;
  std::span<const double> alpha_bars() const noexcept { return alpha_bars_; }

 private:
  explicit NoiseSchedule(std::vector<double> betas);

  std::vector<double> betas_;
  std::vector<double> alpha_bars_;
};

/// sqrt(ab) z0 + sqrt(1 - ab) eps, for a given alpha_bar ab in [0, 1].
LatentTensor forward_noise(const LatentTensor& z0, const LatentTensor& eps, double alpha_bar);
/// Same at step t in [1, T]. Throws ShapeMismatch or StepOutOfRange.
LatentTensor forward_noise(const LatentTensor& z0, const LatentTensor& eps, int t, const NoiseSchedule& sched);

/// v = sqrt(ab) eps - sqrt(1 - ab) z0.
LatentTensor velocity_target(const LatentTensor& z0, const LatentTensor& eps, double alpha_bar);
LatentTensor velocity_target(const LatentTensor& z0, const LatentTensor& eps, int t, const NoiseSchedule& sched);

/// z0 = sqrt(ab) zt - sqrt(1 - ab) v.
LatentTensor recover_z0(const LatentTensor& zt, const LatentTensor& v, double alpha_bar);
LatentTensor recover_z0(const LatentTensor& zt, const LatentTensor& v, int t, const NoiseSchedule& sched);

/// eps = sqrt(ab) v + sqrt(1 - ab) zt.
LatentTensor recover_noise(const LatentTensor& zt, const LatentTensor& v, double alpha_bar);

struct EcLossConfig {
  /// Weight of the Sobel-edge term.
  double alpha = 1.0;

  void validate() const;
};

struct EcLossResult {
  double loss = 0.0;
  double mse_term = 0.0;
  double edge_term = 0.0;
  LatentTensor grad_wrt_pred;
};

/// Edge-consistency loss over N elements:
///   mean((pred - target)^2) + alpha / N * sum_c ||S(pred_c) - S(target_c)||^2
/// where S stacks the per-channel Sobel gx and gy responses. The gradient is
/// the exact analytic one, 2 (pred - target) / N + 2 alpha / N * S^T (S pred - S target).
EcLossResult ec_loss(const LatentTensor& target, const LatentTensor& pred, const EcLossConfig& cfg = {});

/// Velocity prediction for noisy latent zt at step t. `conditions` carries the
/// conditioning latents (e.g. left view and warped view) to be concatenated by the model.
using Denoiser = std::function<LatentTensor(const LatentTensor& zt, int t, std::span<const LatentTensor> conditions)>;

/// Deterministic (eta = 0) DDIM update from step t to t_prev < t, with t_prev = 0 the clean end.
/// Throws NonMonotoneSteps, StepOutOfRange, or ShapeMismatch if the denoiser output does not match zt.
LatentTensor ddim_step(const LatentTensor& zt, int t, int t_prev, const Denoiser& denoiser,
                       std::span<const LatentTensor> conditions, const NoiseSchedule& sched);

/// Evenly spaced descending steps, e.g. T = 1000, n = 50 gives 1000, 980, ..., 20, 0.
std::vector<int> ddim_timesteps(int total_steps, int sampling_steps);

/// Runs ddim_step over ddim_timesteps() starting from z_T.
LatentTensor ddim_sample(const LatentTensor& z_start, int sampling_steps, const Denoiser& denoiser,
                         std::span<const LatentTensor> conditions, const NoiseSchedule& sched);

/// Raw little-endian float32 payload plus a JSON sidecar {channels, height, width, role}.
void write_latent(const std::filesystem::path& path, const LatentTensor& tensor);
LatentTensor read_latent(const std::filesystem::path& path);

}  // namespace stereobench
