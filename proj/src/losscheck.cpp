#include "stereobench/losscheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "stereobench/diffusion.hpp"

namespace stereobench {
namespace {

LatentTensor random_tensor(std::mt19937_64& rng, int c, int h, int w) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(c * h * w));
  for (double& e : v) e = normal(rng);
  return LatentTensor(c, h, w, std::move(v));
}

// Values on a 1/1024 grid so that adding a dyadic constant is exact.
LatentTensor dyadic_tensor(std::mt19937_64& rng, int c, int h, int w) {
  std::uniform_int_distribution<int> dist(-2048, 2048);
  std::vector<double> v(static_cast<std::size_t>(c * h * w));
  for (double& e : v) e = dist(rng) / 1024.0;
  return LatentTensor(c, h, w, std::move(v));
}

double max_abs_diff(const LatentTensor& a, const LatentTensor& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

double squared_norm(const LatentTensor& t) {
  double s = 0.0;
  for (double v : t.values()) s += v * v;
  return s;
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(3);
  ss << std::scientific << v;
  return ss.str();
}

CheckResult gradient_check(std::mt19937_64& rng) {
  constexpr double kStep = 1e-5;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const LatentTensor target = random_tensor(rng, 4, 8, 8);
    LatentTensor pred = random_tensor(rng, 4, 8, 8);
    const LatentTensor grad = ec_loss(target, pred).grad_wrt_pred;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const double saved = pred.values()[i];
      pred.values()[i] = saved + kStep;
      const double up = ec_loss(target, pred).loss;
      pred.values()[i] = saved - kStep;
      const double down = ec_loss(target, pred).loss;
      pred.values()[i] = saved;
      const double numeric = (up - down) / (2.0 * kStep);
      const double analytic = grad.values()[i];
      const double scale = std::max(std::abs(numeric), std::abs(analytic));
      if (scale > 1e-8) worst = std::max(worst, std::abs(numeric - analytic) / scale);
    }
  }
  return {"ec_loss gradient vs central differences", worst <= 1e-4, "max relative error " + fmt(worst)};
}

CheckResult constant_offset_check(std::mt19937_64& rng) {
  bool ok = true;
  double worst = 0.0;
  for (double c : {0.5, -1.25, 3.0}) {
    const LatentTensor target = dyadic_tensor(rng, 4, 8, 8);
    LatentTensor pred = target;
    for (double& v : pred.values()) v += c;
    const EcLossResult r = ec_loss(target, pred);
    ok = ok && r.edge_term == 0.0;
    worst = std::max(worst, std::abs(r.loss - c * c));
  }
  ok = ok && worst <= 1e-12;
  return {"ec_loss constant offset gives c^2", ok, "max |loss - c^2| " + fmt(worst)};
}

CheckResult lower_bound_check(std::mt19937_64& rng) {
  bool ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    const EcLossResult r = ec_loss(random_tensor(rng, 2, 6, 5), random_tensor(rng, 2, 6, 5), {0.5 * (trial % 4)});
    ok = ok && r.loss >= r.mse_term;
  }
  return {"ec_loss >= mse term", ok, ok ? "50 random pairs" : "violated"};
}

CheckResult round_trip_check(std::mt19937_64& rng, const NoiseSchedule& sched) {
  std::uniform_int_distribution<int> step(1, sched.steps());
  double worst_z0 = 0.0;
  double worst_rot = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const LatentTensor z0 = random_tensor(rng, 4, 8, 8);
    const LatentTensor eps = random_tensor(rng, 4, 8, 8);
    const int t = step(rng);
    const LatentTensor zt = forward_noise(z0, eps, t, sched);
    const LatentTensor v = velocity_target(z0, eps, t, sched);
    worst_z0 = std::max(worst_z0, max_abs_diff(recover_z0(zt, v, t, sched), z0));
    worst_rot = std::max(worst_rot, std::abs(squared_norm(zt) + squared_norm(v) - squared_norm(z0) - squared_norm(eps)));
  }
  return {"noise/velocity round trip and rotation", worst_z0 <= 1e-12 && worst_rot <= 1e-9,
          "max z0 error " + fmt(worst_z0) + ", max norm drift " + fmt(worst_rot)};
}

CheckResult ddim_check(std::mt19937_64& rng, const NoiseSchedule& sched) {
  const LatentTensor z0 = random_tensor(rng, 4, 8, 8);
  const LatentTensor eps = random_tensor(rng, 4, 8, 8);
  const Denoiser oracle = [&](const LatentTensor&, int t, std::span<const LatentTensor>) {
    return velocity_target(z0, eps, t, sched);
  };
  double worst_step = 0.0;
  for (auto [t, t_prev] : {std::pair{1000, 980}, std::pair{500, 250}, std::pair{20, 1}}) {
    const LatentTensor next = ddim_step(forward_noise(z0, eps, t, sched), t, t_prev, oracle, {}, sched);
    worst_step = std::max(worst_step, max_abs_diff(next, forward_noise(z0, eps, t_prev, sched)));
  }
  const LatentTensor sampled = ddim_sample(forward_noise(z0, eps, sched.steps(), sched), 50, oracle, {}, sched);
  const double sample_err = max_abs_diff(sampled, z0);
  return {"ddim consistency with oracle denoiser", worst_step <= 1e-9 && sample_err <= 1e-6,
          "max single-step error " + fmt(worst_step) + ", 50-step z0 error " + fmt(sample_err)};
}

}  // namespace

std::vector<CheckResult> run_losscheck(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const NoiseSchedule sched = NoiseSchedule::linear(1000);
  std::vector<CheckResult> out;
  out.push_back(gradient_check(rng));
  out.push_back(constant_offset_check(rng));
  out.push_back(lower_bound_check(rng));
  out.push_back(round_trip_check(rng, sched));
  out.push_back(ddim_check(rng, sched));
  return out;
}

}  // namespace stereobench
