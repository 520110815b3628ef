#include "stereobench/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <thread>

#include "detail.hpp"
#include "stereobench/dataset.hpp"
#include "stereobench/edges.hpp"
#include "stereobench/error.hpp"
#include "stereobench/geometry.hpp"
#include "stereobench/image_io.hpp"
#include "stereobench/losscheck.hpp"
#include "stereobench/report.hpp"
#include "stereobench/synthetic.hpp"

namespace stereobench {
namespace {

namespace fs = std::filesystem;

struct Globals {
  unsigned threads = 0;
  std::uint64_t seed = 42;
  bool verbose = false;
};

void add_canny_flags(CLI::App* cmd, CannyParams& p) {
  cmd->add_option("--canny-sigma", p.gaussian_sigma, "Gaussian sigma before Canny")->capture_default_str();
  cmd->add_option("--canny-low", p.low_threshold, "Canny low threshold")->capture_default_str();
  cmd->add_option("--canny-high", p.high_threshold, "Canny high threshold")->capture_default_str();
}

void add_siou_flags(CLI::App* cmd, SiouConfig& cfg) {
  cmd->add_option("--alpha", cfg.alpha, "weight of the edge term in SIoU")->capture_default_str();
  cmd->add_option("--diff-threshold", cfg.diff_threshold, "difference-map threshold (gray levels)")
      ->capture_default_str();
  add_canny_flags(cmd, cfg.canny);
}

CLI::App* active_subcommand(const CLI::App& app) {
  auto subs = app.get_subcommands();
  return subs.empty() ? nullptr : subs.front();
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stereo conversion benchmark toolkit", "stereobench"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--threads", g.threads, "worker threads, 0 = all available")->capture_default_str();
  app.add_option("--seed", g.seed, "seed for every random choice")->capture_default_str();
  app.add_flag("--verbose", g.verbose, "progress messages on stderr");
  app.set_version_flag("--version", std::string(kToolVersion));

  auto log = [&](const std::string& msg) {
    if (g.verbose) err << msg << '\n';
  };

  // ingest
  IngestOptions ingest_opts;
  fs::path frames_dir, ingest_out, ingest_manifest;
  std::string ingest_category = "unlabeled";
  bool ingest_append = false;
  auto* ingest = app.add_subcommand("ingest", "sample side-by-side frames into left/right pairs");
  ingest->add_option("--frames", frames_dir, "directory of SBS frames")->required();
  ingest->add_option("--out", ingest_out, "output directory for left/ and right/")->required();
  ingest->add_option("--manifest", ingest_manifest, "manifest to write")->required();
  ingest->add_option("--source-id", ingest_opts.source_id, "film or clip identifier")->required();
  ingest->add_option("--category", ingest_category, "indoor|outdoor|animation|simple|complex|unlabeled")
      ->capture_default_str();
  ingest->add_option("--stride", ingest_opts.stride, "keep one frame in every N")->capture_default_str();
  ingest->add_option("--width", ingest_opts.target_width, "width of each view")->capture_default_str();
  ingest->add_option("--height", ingest_opts.target_height, "height of each view")->capture_default_str();
  ingest->add_flag("--append", ingest_append, "add records to an existing manifest");

  // partition
  fs::path part_in, part_out;
  std::size_t per_category = 0;
  auto* part = app.add_subcommand("partition", "seeded source-disjoint train/test split");
  part->add_option("--manifest", part_in, "input manifest")->required();
  part->add_option("--out", part_out, "output manifest")->required();
  part->add_option("--per-category", per_category, "test pairs per labeled category")->required();

  // warp
  fs::path warp_left, warp_disp, warp_out, warp_mask;
  double warp_scale = 1.0;
  bool warp_fill = false;
  auto* warp = app.add_subcommand("warp", "forward-warp a left view by a disparity map");
  warp->add_option("--left", warp_left, "left view image")->required();
  warp->add_option("--disparity", warp_disp, "disparity file (.png with optional sidecar, or raw f32)")->required();
  warp->add_option("--out", warp_out, "warped image")->required();
  warp->add_option("--mask", warp_mask, "occlusion mask output")->required();
  warp->add_option("--scale", warp_scale, "multiply disparities before warping")->capture_default_str();
  warp->add_flag("--fill", warp_fill, "fill holes with the nearest valid pixel in the row");

  // fill
  fs::path fill_image, fill_mask, fill_out;
  auto* fill = app.add_subcommand("fill", "nearest-pixel fill of masked holes");
  fill->add_option("--image", fill_image, "image with holes")->required();
  fill->add_option("--mask", fill_mask, "hole mask, white = hole")->required();
  fill->add_option("--out", fill_out, "filled image")->required();

  // eval
  fs::path eval_manifest, eval_candidates, eval_report;
  SiouConfig siou_cfg;
  auto* eval = app.add_subcommand("eval", "score generated right views against ground truth");
  eval->add_option("--manifest", eval_manifest, "dataset manifest")->required();
  eval->add_option("--candidates", eval_candidates, "directory of <pair_id>.png")->required();
  eval->add_option("--report", eval_report, "report JSON output")->required();
  add_siou_flags(eval, siou_cfg);

  // correlate
  fs::path corr_report, corr_annotations, corr_out;
  auto* corr = app.add_subcommand("correlate", "rank-correlate report metrics with human scores");
  corr->add_option("--report", corr_report, "report from eval")->required();
  corr->add_option("--annotations", corr_annotations, "CSV pair_id,annotator_id,score")->required();
  corr->add_option("--out", corr_out, "JSON output (stdout when omitted)");

  // anaglyph
  fs::path ana_left, ana_right, ana_out;
  auto* ana = app.add_subcommand("anaglyph", "red-cyan composite of a stereo pair");
  ana->add_option("--left", ana_left, "left view")->required();
  ana->add_option("--right", ana_right, "right view")->required();
  ana->add_option("--out", ana_out, "composite output")->required();

  // heatmap
  fs::path heat_a, heat_b, heat_out;
  auto* heat = app.add_subcommand("heatmap", "absolute grayscale difference of two images");
  heat->add_option("--first", heat_a, "first image")->required();
  heat->add_option("--second", heat_b, "second image")->required();
  heat->add_option("--out", heat_out, "grayscale output")->required();

  // edges
  fs::path edges_in, edges_out;
  CannyParams canny_params;
  auto* edges = app.add_subcommand("edges", "Canny edge map of an image");
  edges->add_option("--image", edges_in, "input image")->required();
  edges->add_option("--out", edges_out, "edge map output")->required();
  add_canny_flags(edges, canny_params);

  auto* losscheck = app.add_subcommand("losscheck", "self-check of the diffusion kernels");

  // synth
  fs::path synth_out;
  int synth_pairs = 20;
  auto* synth = app.add_subcommand("synth", "write the synthetic benchmark with its reference candidates");
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--pairs", synth_pairs, "number of scenes")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* sub = active_subcommand(app);
    out << (sub ? sub->help() : app.help());
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    const CLI::App* sub = active_subcommand(app);
    err << "usage error: " << e.what() << "\n\n" << (sub ? sub->help() : app.help());
    return 2;
  }

  try {
    if (ingest->parsed()) {
      ingest_opts.category = category_from_string(ingest_category);
      DatasetManifest manifest;
      if (ingest_append && fs::exists(ingest_manifest)) manifest = read_manifest(ingest_manifest);
      auto records = ingest_frames(frames_dir, ingest_out, ingest_opts);
      log("ingested " + std::to_string(records.size()) + " pairs from " + frames_dir.string());
      manifest.records.insert(manifest.records.end(), records.begin(), records.end());
      manifest.created_at = current_timestamp();
      manifest.tool_version = std::string(kToolVersion);
      validate_manifest(manifest);
      write_manifest(ingest_manifest, manifest);
      out << records.size() << " pairs\n";
    } else if (part->parsed()) {
      const DatasetManifest in = read_manifest(part_in);
      validate_manifest(in);
      PartitionStats stats;
      const DatasetManifest split = partition(in, per_category, g.seed, &stats);
      write_manifest(part_out, split);
      out << "test " << stats.test << ", train " << stats.train << ", dropped " << stats.dropped << '\n';
    } else if (warp->parsed()) {
      const Image left = load_image(warp_left);
      DisparityMap disp = load_disparity(warp_disp);
      if (warp_scale != 1.0) disp = scale_disparity(disp, warp_scale);
      const WarpResult result = forward_warp(left, disp);
      save_image(warp_out, warp_fill ? fill_occlusions_nearest(result) : result.warped);
      save_mask(warp_mask, result.occlusion);
      log("occluded pixels: " + std::to_string(result.occlusion.count()));
    } else if (fill->parsed()) {
      WarpResult holes{load_image(fill_image), load_mask(fill_mask)};
      detail::require_same_size(holes.warped, holes.occlusion);
      save_image(fill_out, fill_occlusions_nearest(holes));
    } else if (eval->parsed()) {
      siou_cfg.validate();
      const DatasetManifest manifest = read_manifest(eval_manifest);
      validate_manifest(manifest);
      const MetricReport report = run_eval(manifest, eval_candidates, siou_cfg, g.threads);
      write_report(eval_report, report);
      const AggregateScores& all = report.aggregates.at("overall");
      out << std::fixed << std::setprecision(4) << "pairs " << all.count << "  siou " << all.siou << "  rmse "
          << all.rmse << "  psnr " << all.psnr << "  ssim " << all.ssim << '\n';
    } else if (corr->parsed()) {
      const CorrelationResult result = correlate_with_humans(read_report(corr_report), read_annotations(corr_annotations));
      const std::string json = correlation_to_json(result);
      if (corr_out.empty()) {
        out << json << '\n';
      } else {
        detail::write_text_atomic(corr_out, json + "\n");
      }
    } else if (ana->parsed()) {
      save_image(ana_out, render_anaglyph(load_image(ana_left), load_image(ana_right)));
    } else if (heat->parsed()) {
      save_gray(heat_out, diff_heatmap(to_grayscale(load_image(heat_a)), to_grayscale(load_image(heat_b))));
    } else if (edges->parsed()) {
      canny_params.validate();
      const BinaryMap map = canny(to_grayscale(load_image(edges_in)), canny_params);
      save_mask(edges_out, map);
      log("edge pixels: " + std::to_string(map.count()));
    } else if (losscheck->parsed()) {
      bool ok = true;
      for (const CheckResult& r : run_losscheck(g.seed)) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name;
        if (!r.detail.empty()) out << "  (" << r.detail << ')';
        out << '\n';
        ok = ok && r.passed;
      }
      return ok ? 0 : 1;
    } else if (synth->parsed()) {
      const SyntheticBenchmark bench = write_synthetic_benchmark(synth_out, synth_pairs, g.seed);
      out << "manifest " << bench.manifest_path.string() << '\n';
      for (const auto& [name, dir] : bench.candidates) out << "candidates " << name << ' ' << dir.string() << '\n';
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"stereobench"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace stereobench
