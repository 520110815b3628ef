#include "stereobench/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stereobench/edges.hpp"
#include "stereobench/error.hpp"

namespace stereobench {
namespace {

void require_same_shape(const LatentTensor& a, const LatentTensor& b) {
  if (!a.same_shape(b)) {
    throw Error(ErrorCode::ShapeMismatch,
                std::to_string(a.channels()) + "x" + std::to_string(a.height()) + "x" + std::to_string(a.width()) +
                    " vs " + std::to_string(b.channels()) + "x" + std::to_string(b.height()) + "x" +
                    std::to_string(b.width()));
  }
}

void require_alpha_bar(double alpha_bar) {
  if (!(alpha_bar >= 0.0 && alpha_bar <= 1.0)) {
    throw Error(ErrorCode::InvalidRange, "alpha_bar " + std::to_string(alpha_bar) + " outside [0, 1]");
  }
}

// a * x + b * y, elementwise.
LatentTensor combine(double a, const LatentTensor& x, double b, const LatentTensor& y, LatentRole role) {
  require_same_shape(x, y);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x.values()[i] + b * y.values()[i];
  return LatentTensor(x.channels(), x.height(), x.width(), std::move(out), role);
}

double alpha_bar_at(int t, const NoiseSchedule& sched) {
  if (t < 1 || t > sched.steps()) {
    throw Error(ErrorCode::StepOutOfRange,
                "step " + std::to_string(t) + " outside [1, " + std::to_string(sched.steps()) + "]");
  }
  return sched.alpha_bar(t);
}

}  // namespace

std::string_view to_string(LatentRole role) {
  switch (role) {
    case LatentRole::Unspecified: return "unspecified";
    case LatentRole::CleanLatent: return "clean_latent";
    case LatentRole::NoisyLatent: return "noisy_latent";
    case LatentRole::Noise: return "noise";
    case LatentRole::Velocity: return "velocity";
    case LatentRole::Prediction: return "prediction";
    case LatentRole::LeftCondition: return "left_condition";
    case LatentRole::WarpedCondition: return "warped_condition";
  }
  return "unspecified";
}

LatentRole latent_role_from_string(std::string_view name) {
  for (auto role : {LatentRole::Unspecified, LatentRole::CleanLatent, LatentRole::NoisyLatent, LatentRole::Noise,
                    LatentRole::Velocity, LatentRole::Prediction, LatentRole::LeftCondition,
                    LatentRole::WarpedCondition}) {
    if (to_string(role) == name) return role;
  }
  throw Error(ErrorCode::Parse, "unknown latent role " + std::string(name));
}

LatentTensor::LatentTensor(int channels, int height, int width, LatentRole role)
    : LatentTensor(channels, height, width,
                   std::vector<double>(static_cast<std::size_t>(std::max(channels, 0)) *
                                       static_cast<std::size_t>(std::max(height, 0)) *
                                       static_cast<std::size_t>(std::max(width, 0))),
                   role) {}

LatentTensor::LatentTensor(int channels, int height, int width, std::vector<double> values, LatentRole role)
    : channels_(channels), height_(height), width_(width), values_(std::move(values)), role_(role) {
  if (channels < 1 || height < 1 || width < 1) throw Error(ErrorCode::ZeroDimension, "latent tensor has a zero dimension");
  const std::size_t expected =
      static_cast<std::size_t>(channels) * static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  if (values_.size() != expected) {
    throw Error(ErrorCode::LengthMismatch,
                "latent data length " + std::to_string(values_.size()) + ", expected " + std::to_string(expected));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::OutOfRange, "latent tensor contains a non-finite value");
  }
}

Plane LatentTensor::channel(int c) const {
  const std::size_t plane = static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
  const auto begin = values_.begin() + static_cast<std::ptrdiff_t>(plane * static_cast<std::size_t>(c));
  return Plane(width_, height_, std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(plane)));
}

NoiseSchedule::NoiseSchedule(std::vector<double> betas) : betas_(std::move(betas)) {
  if (betas_.empty()) throw Error(ErrorCode::InvalidRange, "schedule needs at least one step");
  alpha_bars_.reserve(betas_.size() + 1);
  alpha_bars_.push_back(1.0);
  for (double b : betas_) {
    if (!(b > 0.0 && b < 1.0)) throw Error(ErrorCode::InvalidRange, "beta " + std::to_string(b) + " outside (0, 1)");
    alpha_bars_.push_back(alpha_bars_.back() * (1.0 - b));
  }
}

NoiseSchedule NoiseSchedule::linear(int steps, double beta_start, double beta_end) {
  if (steps < 1) throw Error(ErrorCode::InvalidRange, "schedule needs at least one step");
  if (!(beta_start > 0.0 && beta_start <= beta_end && beta_end < 1.0)) {
    throw Error(ErrorCode::InvalidRange, "need 0 < beta_start <= beta_end < 1");
  }
  std::vector<double> betas(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    const double frac = steps == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(steps - 1);
    betas[static_cast<std::size_t>(i)] = beta_start + frac * (beta_end - beta_start);
  }
  return NoiseSchedule(std::move(betas));
}

NoiseSchedule NoiseSchedule::from_betas(std::vector<double> betas) { return NoiseSchedule(std::move(betas)); }

double NoiseSchedule::beta(int t) const {
  if (t < 1 || t > steps()) throw Error(ErrorCode::StepOutOfRange, "step " + std::to_string(t) + " out of range");
  return betas_[static_cast<std::size_t>(t - 1)];
}

double NoiseSchedule::alpha_bar(int t) const {
  if (t < 0 || t > steps()) throw Error(ErrorCode::StepOutOfRange, "step " + std::to_string(t) + " out of range");
  return alpha_bars_[static_cast<std::size_t>(t)];
}

LatentTensor forward_noise(const LatentTensor& z0, const LatentTensor& eps, double alpha_bar) {
  require_alpha_bar(alpha_bar);
  return combine(std::sqrt(alpha_bar), z0, std::sqrt(1.0 - alpha_bar), eps, LatentRole::NoisyLatent);
}

LatentTensor forward_noise(const LatentTensor& z0, const LatentTensor& eps, int t, const NoiseSchedule& sched) {
  require_same_shape(z0, eps);
  return forward_noise(z0, eps, alpha_bar_at(t, sched));
}

LatentTensor velocity_target(const LatentTensor& z0, const LatentTensor& eps, double alpha_bar) {
  require_alpha_bar(alpha_bar);
  return combine(std::sqrt(alpha_bar), eps, -std::sqrt(1.0 - alpha_bar), z0, LatentRole::Velocity);
}

LatentTensor velocity_target(const LatentTensor& z0, const LatentTensor& eps, int t, const NoiseSchedule& sched) {
  require_same_shape(z0, eps);
  return velocity_target(z0, eps, alpha_bar_at(t, sched));
}

LatentTensor recover_z0(const LatentTensor& zt, const LatentTensor& v, double alpha_bar) {
  require_alpha_bar(alpha_bar);
  return combine(std::sqrt(alpha_bar), zt, -std::sqrt(1.0 - alpha_bar), v, LatentRole::CleanLatent);
}

LatentTensor recover_z0(const LatentTensor& zt, const LatentTensor& v, int t, const NoiseSchedule& sched) {
  require_same_shape(zt, v);
  return recover_z0(zt, v, alpha_bar_at(t, sched));
}

LatentTensor recover_noise(const LatentTensor& zt, const LatentTensor& v, double alpha_bar) {
  require_alpha_bar(alpha_bar);
  return combine(std::sqrt(alpha_bar), v, std::sqrt(1.0 - alpha_bar), zt, LatentRole::Noise);
}

void EcLossConfig::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw Error(ErrorCode::InvalidParams, "EC loss alpha must be >= 0");
}

EcLossResult ec_loss(const LatentTensor& target, const LatentTensor& pred, const EcLossConfig& cfg) {
  cfg.validate();
  require_same_shape(target, pred);
  const double n = static_cast<double>(pred.size());
  const int h = pred.height();
  const int w = pred.width();
  const std::size_t plane = static_cast<std::size_t>(h) * static_cast<std::size_t>(w);

  std::vector<double> grad(pred.size());
  double sq = 0.0;
  for (std::size_t i = 0; i < grad.size(); ++i) {
    const double d = pred.values()[i] - target.values()[i];
    sq += d * d;
    grad[i] = 2.0 * d / n;
  }

  double edge_sq = 0.0;
  for (int c = 0; c < pred.channels(); ++c) {
    // Sobel is linear, so S(pred) - S(target) = S(pred - target).
    Plane diff = pred.channel(c);
    const Plane t = target.channel(c);
    for (std::size_t i = 0; i < plane; ++i) diff.values()[i] -= t.values()[i];
    const GradientField g = sobel(diff);
    for (std::size_t i = 0; i < plane; ++i) {
      edge_sq += g.gx.values()[i] * g.gx.values()[i] + g.gy.values()[i] * g.gy.values()[i];
    }
    if (cfg.alpha == 0.0) continue;
    const Plane back = sobel_adjoint(g.gx, g.gy);
    double* out = grad.data() + plane * static_cast<std::size_t>(c);
    for (std::size_t i = 0; i < plane; ++i) out[i] += 2.0 * cfg.alpha / n * back.values()[i];
  }

  EcLossResult r{0.0, sq / n, edge_sq / n,
                 LatentTensor(pred.channels(), h, w, std::move(grad), LatentRole::Prediction)};
  r.loss = r.mse_term + cfg.alpha * r.edge_term;
  return r;
}

LatentTensor ddim_step(const LatentTensor& zt, int t, int t_prev, const Denoiser& denoiser,
                       std::span<const LatentTensor> conditions, const NoiseSchedule& sched) {
  if (t_prev >= t) {
    throw Error(ErrorCode::NonMonotoneSteps,
                "DDIM step must move toward step 0: t=" + std::to_string(t) + ", t_prev=" + std::to_string(t_prev));
  }
  if (t_prev < 0 || t > sched.steps()) {
    throw Error(ErrorCode::StepOutOfRange, "DDIM steps outside [0, " + std::to_string(sched.steps()) + "]");
  }
  const LatentTensor v = denoiser(zt, t, conditions);
  require_same_shape(zt, v);
  const double ab = sched.alpha_bar(t);
  const double ab_prev = sched.alpha_bar(t_prev);
  const LatentTensor z0_hat = recover_z0(zt, v, ab);
  const LatentTensor eps_hat = recover_noise(zt, v, ab);
  return combine(std::sqrt(ab_prev), z0_hat, std::sqrt(1.0 - ab_prev), eps_hat, LatentRole::NoisyLatent);
}

std::vector<int> ddim_timesteps(int total_steps, int sampling_steps) {
  if (total_steps < 1 || sampling_steps < 1 || sampling_steps > total_steps) {
    throw Error(ErrorCode::InvalidRange, "need 1 <= sampling_steps <= total_steps");
  }
  std::vector<int> steps;
  steps.reserve(static_cast<std::size_t>(sampling_steps) + 1);
  for (int i = sampling_steps; i >= 0; --i) {
    steps.push_back(static_cast<int>((static_cast<long long>(i) * total_steps) / sampling_steps));
  }
  return steps;
}

LatentTensor ddim_sample(const LatentTensor& z_start, int sampling_steps, const Denoiser& denoiser,
                         std::span<const LatentTensor> conditions, const NoiseSchedule& sched) {
  const auto steps = ddim_timesteps(sched.steps(), sampling_steps);
  LatentTensor z = z_start;
  for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
    z = ddim_step(z, steps[i], steps[i + 1], denoiser, conditions, sched);
  }
  z.set_role(LatentRole::CleanLatent);
  return z;
}

}  // namespace stereobench
