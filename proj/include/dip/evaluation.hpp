#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dip/geometry.hpp"
#include "dip/pipeline.hpp"

namespace dip {

// Annotator id reserved for the algorithm's own angle in annotation CSVs.
inline constexpr std::string_view kDipAnnotator = "dip";

struct AnnotationSet {
  std::string image_id;
  std::vector<std::string> annotators;
  std::vector<double> angles;  // radians, [0, 2pi)
  std::optional<double> dip_angle;
};

// CSV with header image_id,annotator_id,angle. Rows whose annotator_id is
// "dip" carry the algorithm's angle for that image (at most one per image).
// Images keep first-appearance order. Throws ParseError with a line number.
std::vector<AnnotationSet> parse_annotations(std::istream& in);
std::vector<AnnotationSet> load_annotations(const std::filesystem::path& path);

struct AngleRow {
  std::string image_id;
  std::size_t n = 0;
  double mean = 0.0;
  std::optional<double> dip;
  std::optional<double> difference;
  double variance = 0.0;
};

std::vector<AngleRow> angle_report(std::span<const AnnotationSet> sets);

struct GroundTruth {
  std::int64_t frame_id = 0;
  Rect object_box;
  bool pose_correct = false;
};

// CSV with header frame_id,x_min,y_min,x_max,y_max,pose_correct.
std::vector<GroundTruth> parse_ground_truth(std::istream& in);
std::vector<GroundTruth> load_ground_truth(const std::filesystem::path& path);

struct EvalOptions {
  double detection_tolerance = 10.0;  // px dilation of the truth box
  std::optional<int> frame_width;
  std::optional<int> frame_height;
};

// Counts follow a conditioning chain: contained and vector hits are counted
// over pose-correct frames, detections over contained frames.
struct EvalReport {
  std::size_t n_frames = 0;
  std::size_t n_pose_correct = 0;
  std::size_t n_contained = 0;    // box centre inside the AOI
  std::size_t n_intersecting = 0; // box overlaps the AOI
  std::size_t n_vector_hit = 0;
  std::size_t n_detected = 0;

  double pose_rate = 0.0;
  double containment_rate = 0.0;
  double intersection_rate = 0.0;
  double vector_hit_rate = 0.0;
  double detection_rate = 0.0;

  void finalize_rates();
};

bool triangle_intersects_rect(const Triangle& t, const Rect& r);

// Joins on frame_id; throws JoinMismatch when either side has an id the
// other lacks.
EvalReport containment_stats(std::span<const FrameResult> results,
                             std::span<const GroundTruth> truth, const EvalOptions& opts = {});

void print_angle_table(std::ostream& out, std::span<const AngleRow> rows);
void print_eval_report(std::ostream& out, const EvalReport& report);

}  // namespace dip
