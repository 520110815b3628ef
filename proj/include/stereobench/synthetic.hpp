#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "stereobench/dataset.hpp"
#include "stereobench/geometry.hpp"
#include "stereobench/image.hpp"

namespace stereobench {

/// A rendered stereo pair. Scenes are layered: a far textured background at
/// zero disparity plus a few textured shapes, each at its own constant
/// disparity. Both views are rendered from the layers, so regions hidden in
/// the left view show true background content in the right view.
struct SyntheticScene {
  Image left;
  Image right;
  DisparityMap disparity;
};

struct SyntheticOptions {
  int width = 160;
  int height = 120;
  int min_shapes = 3;
  int max_shapes = 5;
  int min_disparity = 3;
  int max_disparity = 8;
};

SyntheticScene make_synthetic_scene(std::uint64_t seed, const SyntheticOptions& options = {});

/// Identity mapping: the left view returned as the right view.
Image identity_candidate(const SyntheticScene& scene);

/// Forward warp by `scale` times the true disparity, then nearest fill.
Image scaled_warp_candidate(const SyntheticScene& scene, double scale);

/// Disparity as a monocular depth-based pipeline would estimate it: object
/// boundaries smeared by a box filter of radius `boundary_blur`, and the whole
/// map multiplied by `gain` to model a mis-set focal length times baseline.
DisparityMap estimated_disparity(const DisparityMap& truth, int boundary_blur, double gain);

struct TwoStageBaseline {
  int boundary_blur = 0;
  double gain = 2.5;
};

/// Warp by estimated_disparity() followed by nearest fill: the stand-in for a
/// depth-based two-stage converter with an over-scaled disparity.
Image two_stage_candidate(const SyntheticScene& scene, const TwoStageBaseline& baseline = {});

/// Disparity scales of the degradation ladder, best first.
inline constexpr std::array<double, 5> kLadderScales{1.0, 0.75, 0.5, 0.25, 0.0};

struct SyntheticBenchmark {
  DatasetManifest manifest;
  std::filesystem::path manifest_path;
  /// Candidate directories keyed by name: "idm", "two_stage", "ladder_100", "ladder_075", ...
  std::map<std::string, std::filesystem::path> candidates;
};

/// Writes `pairs` scenes under `out_dir` (left/, right/, disparity/, candidates/<name>/)
/// with a manifest whose records are all in the test split and cycle through
/// the five labeled categories.
SyntheticBenchmark write_synthetic_benchmark(const std::filesystem::path& out_dir, int pairs, std::uint64_t seed,
                                             const SyntheticOptions& options = {});

}  // namespace stereobench
