#include "stereobench/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "stereobench/error.hpp"
#include "stereobench/image_io.hpp"

namespace stereobench {
namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit(rng); }

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Smoothly interpolated lattice noise summed over octaves, in [0, 1).
class ValueNoise {
 public:
  ValueNoise(std::uint64_t seed, double cell, int octaves) : seed_(seed), cell_(cell), octaves_(octaves) {}

  double operator()(double x, double y) const {
    double total = 0.0;
    double amp = 1.0;
    double norm = 0.0;
    double freq = 1.0 / cell_;
    for (int o = 0; o < octaves_; ++o) {
      total += amp * lattice(x * freq, y * freq, static_cast<std::uint64_t>(o));
      norm += amp;
      amp *= 0.5;
      freq *= 2.0;
    }
    return total / norm;
  }

 private:
  double corner(long long ix, long long iy, std::uint64_t octave) const {
    const std::uint64_t h = mix(seed_ ^ mix(static_cast<std::uint64_t>(ix) * 0x8da6b343ull ^
                                            mix(static_cast<std::uint64_t>(iy) * 0xd8163841ull + octave)));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
  }

  double lattice(double x, double y, std::uint64_t octave) const {
    const double fx = std::floor(x);
    const double fy = std::floor(y);
    const auto ix = static_cast<long long>(fx);
    const auto iy = static_cast<long long>(fy);
    auto smooth = [](double t) { return t * t * (3.0 - 2.0 * t); };
    const double tx = smooth(x - fx);
    const double ty = smooth(y - fy);
    const double top = corner(ix, iy, octave) * (1 - tx) + corner(ix + 1, iy, octave) * tx;
    const double bottom = corner(ix, iy + 1, octave) * (1 - tx) + corner(ix + 1, iy + 1, octave) * tx;
    return top * (1 - ty) + bottom * ty;
  }

  std::uint64_t seed_;
  double cell_;
  int octaves_;
};

struct Rgb {
  double r, g, b;
};

struct Block {
  double x0, y0, x1, y1;
  Rgb color;
};

// One depth layer: a region in left-view coordinates and a texture over it.
struct Layer {
  enum class Shape { Everywhere, Ellipse, Rectangle } shape = Shape::Everywhere;
  double cx = 0, cy = 0, rx = 0, ry = 0;
  int disparity = 0;
  Rgb base{};
  double texture_amp = 0;
  ValueNoise noise{0, 16.0, 3};
  std::vector<Block> blocks;

  bool covers(double x, double y) const {
    switch (shape) {
      case Shape::Everywhere: return true;
      case Shape::Ellipse: {
        const double dx = (x - cx) / rx;
        const double dy = (y - cy) / ry;
        return dx * dx + dy * dy <= 1.0;
      }
      case Shape::Rectangle: return std::abs(x - cx) <= rx && std::abs(y - cy) <= ry;
    }
    return false;
  }

  Rgb color(double x, double y) const {
    for (const Block& b : blocks) {
      if (x >= b.x0 && x < b.x1 && y >= b.y0 && y < b.y1) return b.color;
    }
    const double n = texture_amp * (noise(x, y) - 0.5);
    return {base.r + n, base.g + 0.8 * n, base.b + 0.6 * n};
  }
};

Rgb random_color(std::mt19937_64& rng, double lo, double hi) {
  return {uniform(rng, lo, hi), uniform(rng, lo, hi), uniform(rng, lo, hi)};
}

Image render(const std::vector<Layer>& layers, int w, int h, int view_shift) {
  Image img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (const Layer& layer : layers) {
        // The right view sees left-view point x + d of every layer.
        const double wx = x + 0.5 + view_shift * layer.disparity;
        const double wy = y + 0.5;
        if (!layer.covers(wx, wy)) continue;
        const Rgb c = layer.color(wx, wy);
        img(x, y, 0) = std::round(std::clamp(c.r, 0.0, 255.0));
        img(x, y, 1) = std::round(std::clamp(c.g, 0.0, 255.0));
        img(x, y, 2) = std::round(std::clamp(c.b, 0.0, 255.0));
        break;
      }
    }
  }
  return img;
}

}  // namespace

SyntheticScene make_synthetic_scene(std::uint64_t seed, const SyntheticOptions& o) {
  if (o.width < 16 || o.height < 16) throw Error(ErrorCode::TooSmall, "synthetic scenes need at least 16x16 pixels");
  if (o.min_shapes < 0 || o.max_shapes < o.min_shapes || o.min_disparity < 0 || o.max_disparity < o.min_disparity) {
    throw Error(ErrorCode::InvalidParams, "invalid synthetic scene options");
  }
  std::mt19937_64 rng(mix(seed));
  const double w = o.width;
  const double h = o.height;

  Layer background;
  background.base = random_color(rng, 70, 180);
  background.texture_amp = 50;
  background.noise = ValueNoise(rng(), 0.3 * w, 4);
  const int blocks = uniform_int(rng, 2, 4);
  for (int i = 0; i < blocks; ++i) {
    const double bw = uniform(rng, 0.08, 0.2) * w;
    const double bh = uniform(rng, 0.08, 0.25) * h;
    const double x0 = uniform(rng, 0, w - bw);
    const double y0 = uniform(rng, 0, h - bh);
    background.blocks.push_back({x0, y0, x0 + bw, y0 + bh, random_color(rng, 20, 235)});
  }

  std::vector<Layer> shapes;
  const int count = uniform_int(rng, o.min_shapes, o.max_shapes);
  for (int i = 0; i < count; ++i) {
    Layer s;
    s.shape = (rng() & 1) ? Layer::Shape::Ellipse : Layer::Shape::Rectangle;
    s.rx = uniform(rng, 0.07, 0.16) * w;
    s.ry = uniform(rng, 0.1, 0.22) * h;
    s.cx = uniform(rng, 0.15, 0.85) * w;
    s.cy = uniform(rng, 0.2, 0.8) * h;
    s.disparity = uniform_int(rng, o.min_disparity, o.max_disparity);
    s.base = random_color(rng, 30, 225);
    s.texture_amp = 40;
    s.noise = ValueNoise(rng(), 0.15 * w, 3);
    shapes.push_back(std::move(s));
  }
  // Nearer (larger disparity) layers occlude farther ones.
  std::stable_sort(shapes.begin(), shapes.end(),
                   [](const Layer& a, const Layer& b) { return a.disparity > b.disparity; });
  std::vector<Layer> layers = std::move(shapes);
  layers.push_back(std::move(background));

  Plane disp(o.width, o.height);
  for (int y = 0; y < o.height; ++y) {
    for (int x = 0; x < o.width; ++x) {
      for (const Layer& layer : layers) {
        if (layer.covers(x + 0.5, y + 0.5)) {
          disp(x, y) = layer.disparity;
          break;
        }
      }
    }
  }
  return {render(layers, o.width, o.height, 0), render(layers, o.width, o.height, 1), DisparityMap(std::move(disp))};
}

Image identity_candidate(const SyntheticScene& scene) { return scene.left; }

Image scaled_warp_candidate(const SyntheticScene& scene, double scale) {
  return fill_occlusions_nearest(forward_warp(scene.left, scale_disparity(scene.disparity, scale)));
}

DisparityMap estimated_disparity(const DisparityMap& truth, int boundary_blur, double gain) {
  if (boundary_blur < 0 || !(gain >= 0.0)) throw Error(ErrorCode::InvalidParams, "invalid disparity estimate params");
  const int w = truth.width();
  const int h = truth.height();
  Plane out(w, h);
  const double norm = static_cast<double>((2 * boundary_blur + 1) * (2 * boundary_blur + 1));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int dy = -boundary_blur; dy <= boundary_blur; ++dy) {
        for (int dx = -boundary_blur; dx <= boundary_blur; ++dx) {
          acc += truth(std::clamp(x + dx, 0, w - 1), std::clamp(y + dy, 0, h - 1));
        }
      }
      out(x, y) = gain * acc / norm;
    }
  }
  return DisparityMap(std::move(out));
}

Image two_stage_candidate(const SyntheticScene& scene, const TwoStageBaseline& baseline) {
  return fill_occlusions_nearest(
      forward_warp(scene.left, estimated_disparity(scene.disparity, baseline.boundary_blur, baseline.gain)));
}

SyntheticBenchmark write_synthetic_benchmark(const std::filesystem::path& out_dir, int pairs, std::uint64_t seed,
                                             const SyntheticOptions& options) {
  if (pairs < 1) throw Error(ErrorCode::InvalidParams, "synthetic benchmark needs at least one pair");
  constexpr std::array<Category, 5> kLabeled{Category::Indoor, Category::Outdoor, Category::Animation,
                                             Category::Simple, Category::Complex};
  SyntheticBenchmark bench;
  bench.manifest.created_at = current_timestamp();
  bench.manifest.tool_version = std::string(kToolVersion);
  bench.manifest_path = out_dir / "manifest.jsonl";

  auto ladder_name = [](double scale) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "ladder_%03d", static_cast<int>(std::lround(scale * 100)));
    return std::string(buf);
  };
  bench.candidates["idm"] = out_dir / "candidates" / "idm";
  bench.candidates["two_stage"] = out_dir / "candidates" / "two_stage";
  for (double s : kLadderScales) bench.candidates[ladder_name(s)] = out_dir / "candidates" / ladder_name(s);

  for (int i = 0; i < pairs; ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "synth_%04d", i);
    const SyntheticScene scene = make_synthetic_scene(seed * 1000003ull + static_cast<std::uint64_t>(i), options);
    PairRecord r;
    r.pair_id = id;
    r.source_id = id;
    r.frame_index = 0;
    r.category = kLabeled[static_cast<std::size_t>(i) % kLabeled.size()];
    r.split = Split::Test;
    r.left_path = out_dir / "left" / (r.pair_id + ".png");
    r.right_path = out_dir / "right" / (r.pair_id + ".png");
    save_image(r.left_path, scene.left);
    save_image(r.right_path, scene.right);
    save_disparity_png16(out_dir / "disparity" / (r.pair_id + ".png"), scene.disparity, 256.0);

    save_image(bench.candidates["idm"] / (r.pair_id + ".png"), identity_candidate(scene));
    save_image(bench.candidates["two_stage"] / (r.pair_id + ".png"), two_stage_candidate(scene));
    for (double s : kLadderScales) {
      save_image(bench.candidates[ladder_name(s)] / (r.pair_id + ".png"), scaled_warp_candidate(scene, s));
    }
    bench.manifest.records.push_back(std::move(r));
  }
  write_manifest(bench.manifest_path, bench.manifest);
  return bench;
}

}  // namespace stereobench
