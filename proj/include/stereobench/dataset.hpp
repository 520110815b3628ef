#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "stereobench/image.hpp"
#include "stereobench/metrics.hpp"
#include "stereobench/report.hpp"

namespace stereobench {

enum class Category { Indoor, Outdoor, Animation, Simple, Complex, Unlabeled };
enum class Split { Train, Test };

std::string_view to_string(Category c);
std::string_view to_string(Split s);
Category category_from_string(std::string_view name);
Split split_from_string(std::string_view name);

inline constexpr int kManifestSchemaVersion = 1;

struct PairRecord {
  std::string pair_id;
  std::filesystem::path left_path;
  std::filesystem::path right_path;
  Category category = Category::Unlabeled;
  Split split = Split::Train;
  std::string source_id;
  int frame_index = 0;

  friend bool operator==(const PairRecord&, const PairRecord&) = default;
};

struct DatasetManifest {
  std::vector<PairRecord> records;
  std::string created_at;
  std::string tool_version;
};

/// UTC ISO-8601 time, taken from SOURCE_DATE_EPOCH when that is set.
std::string current_timestamp();

/// JSON Lines: a header line {"manifest": {schema_version, created_at,
/// tool_version}} then one record per line. Paths inside the manifest's
/// directory are stored relative to it. Written atomically.
void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);
/// Relative record paths are resolved against the manifest's directory.
DatasetManifest read_manifest(const std::filesystem::path& path);

/// Checks unique pair ids, that no source_id is in both splits and,
/// optionally, that every referenced file exists.
void validate_manifest(const DatasetManifest& manifest, bool check_files = true);

struct IngestOptions {
  int stride = 8;
  /// Size of each view; frames are resized to (2 * target_width) x target_height first.
  int target_width = 480;
  int target_height = 540;
  std::string source_id;
  Category category = Category::Unlabeled;
};

/// Keeps side-by-side frames 0, stride, 2 * stride, ... (lexicographic file
/// order), resizes, splits and writes <out_dir>/{left,right}/<pair_id>.png.
/// Throws EmptyDirectory when `frame_dir` has no images.
std::vector<PairRecord> ingest_frames(const std::filesystem::path& frame_dir, const std::filesystem::path& out_dir,
                                      const IngestOptions& options);

struct PartitionStats {
  std::size_t test = 0;
  std::size_t train = 0;
  /// Records of a partially used source that could not go to either split.
  std::size_t dropped = 0;
};

/// Seeded source-level split: exactly `per_category_test` test records for
/// each labeled category present, with no source_id in both splits.
/// Unlabeled records always stay in train. Throws InsufficientRecords.
DatasetManifest partition(const DatasetManifest& manifest, std::size_t per_category_test, std::uint64_t seed,
                          PartitionStats* stats = nullptr);

/// Scores one generated view against the ground truth, after bilinear
/// upsampling of `generated` to the ground-truth size.
PairScores score_pair(const Image& left, const Image& right, const Image& generated, const SiouConfig& cfg);

/// Scores every test record against <candidates_dir>/<pair_id>.png using up to
/// `threads` workers (0 = hardware concurrency). Throws MissingCandidate listing every absent id.
MetricReport run_eval(const DatasetManifest& manifest, const std::filesystem::path& candidates_dir,
                      const SiouConfig& cfg, unsigned threads = 0);

struct Annotation {
  std::string pair_id;
  std::string annotator_id;
  int score = 0;
};

struct AnnotationSet {
  std::vector<Annotation> entries;
};

/// CSV with header pair_id,annotator_id,score; scores are integers in [1, 10].
AnnotationSet parse_annotations_csv(std::string_view text);
AnnotationSet read_annotations(const std::filesystem::path& path);

struct RankAgreement {
  double spearman = 0.0;
  double kendall = 0.0;
};

struct CorrelationResult {
  std::size_t pairs = 0;
  std::map<std::string, RankAgreement> by_metric;
};

/// Averages annotator scores per pair (at least two annotators each), then
/// rank-correlates every report metric with the averages. Error-type metrics
/// keep their natural sign. Throws UnknownPairId, InsufficientAnnotations, DegenerateInput.
CorrelationResult correlate_with_humans(const MetricReport& report, const AnnotationSet& annotations);

std::string correlation_to_json(const CorrelationResult& result);

}  // namespace stereobench
