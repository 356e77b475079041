#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dip/detection.hpp"
#include "dip/geometry.hpp"
#include "dip/image.hpp"
#include "dip/tracker.hpp"

namespace dip {

enum class Arm { kRight, kLeft };

struct PoseLandmarks {
  std::int64_t frame_id = 0;
  Arm arm = Arm::kRight;
  Point2 elbow;
  double elbow_conf = 1.0;
  Point2 wrist;
  double wrist_conf = 1.0;

  friend bool operator==(const PoseLandmarks&, const PoseLandmarks&) = default;
};

struct DipConfig {
  double sf = 10.0;
  double c = 100.0;
  double eps = 5.0;
  double min_conf = 0.5;
  double min_forearm = 15.0;
  DetectionMethod method = DetectionMethod::kContourThenKeypoint;
  DetectorConfig detector;
  bool perpendicular_mode = false;

  // Throws InvalidArgument naming the first offending field.
  void validate() const;
};

enum class Gate { kNoPose, kLowConfidence, kNotPointing, kOk };

std::string_view to_string(Gate g);
Gate gate_from_string(std::string_view s);

struct FrameResult {
  std::int64_t frame_id = 0;
  Gate gate = Gate::kNoPose;
  std::optional<PointingRay> ray;
  std::optional<Triangle> aoi;
  std::optional<Detection> detection;
  double elapsed_ms = 0.0;
};

// Stand-in for a learned "is the diver pointing" classifier.
Gate is_pointing_pose(const std::optional<PoseLandmarks>& lm, const DipConfig& cfg);

// gate -> extension -> AOI -> detection, stopping at the first stage that
// yields nothing. Geometric failures never throw.
FrameResult run_frame(const ImageBuffer& frame, const std::optional<PoseLandmarks>& lm,
                      const DipConfig& cfg, std::int64_t frame_id = 0);

enum class SessionPhase { kAwaitingPose, kDetecting, kConfirmed, kTracking };

std::string_view to_string(SessionPhase p);
SessionPhase session_phase_from_string(std::string_view s);

struct SessionConfig {
  DipConfig dip;
  // Consecutive frames with a detection needed to confirm.
  int confirm_frames = 1;
  bool tracking = true;
  TrackerConfig tracker;
  // Start over from kAwaitingPose when the tracker loses the target.
  bool restart_on_lost = false;
};

struct SessionState {
  SessionPhase phase = SessionPhase::kAwaitingPose;
  std::optional<Detection> confirmed_detection;
  std::optional<std::int64_t> confirmed_frame;
  std::int64_t frames_processed = 0;
};

struct SessionStep {
  std::int64_t frame_id = 0;
  SessionPhase phase = SessionPhase::kAwaitingPose;  // after this frame
  std::optional<FrameResult> dip;   // set while not yet confirmed
  std::optional<Rect> track_window;
  bool target_lost = false;
};

class Session {
 public:
  explicit Session(SessionConfig cfg);

  SessionStep step(const ImageBuffer& frame, const std::optional<PoseLandmarks>& lm,
                   std::int64_t frame_id);
  // Same, with run_frame already evaluated for this frame. The result is
  // ignored once the session has confirmed.
  SessionStep step(const ImageBuffer& frame, FrameResult precomputed);

  const SessionState& state() const { return state_; }
  const std::optional<TrackerState>& tracker() const { return tracker_; }

 private:
  void reset();
  bool confirmed() const;
  SessionStep track_step(const ImageBuffer& frame, std::int64_t frame_id);
  SessionStep detect_step(const ImageBuffer& frame, FrameResult r);

  SessionConfig cfg_;
  SessionState state_;
  int streak_ = 0;
  std::optional<TrackerState> tracker_;
  bool lost_ = false;
};

struct SessionInput {
  std::int64_t frame_id = 0;
  const ImageBuffer* frame = nullptr;
  std::optional<PoseLandmarks> landmarks;
};

struct SessionTrace {
  std::vector<SessionStep> steps;
  SessionState final_state;
};

// Inputs must be ordered by frame_id.
SessionTrace run_session(std::span<const SessionInput> inputs, const SessionConfig& cfg);

struct AnnotationStyle {
  std::uint8_t forearm[3] = {0, 255, 0};
  std::uint8_t ray[3] = {255, 0, 255};
  std::uint8_t aoi[3] = {255, 255, 255};
  std::uint8_t marker[3] = {255, 0, 0};
  std::uint8_t bbox[3] = {255, 255, 0};
  int marker_arm = 6;
};

// Render-only overlay on a copy. Gray frames are promoted to RGB when
// something is drawn; a result with nothing to draw returns an exact copy.
ImageBuffer annotate(const ImageBuffer& frame, const FrameResult& r,
                     const AnnotationStyle& style = {});

// Bresenham pixels from round(a) to round(b), unclipped.
std::vector<PixelPoint> raster_line(Point2 a, Point2 b);

}  // namespace dip
