#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "dip/control.hpp"
#include "dip/image.hpp"
#include "dip/keyvalue.hpp"
#include "dip/pipeline.hpp"
#include "dip/tracker.hpp"

namespace dip {

// Planar world in metres, seen from above with y pointing to the right of
// a robot at heading 0; heading grows clockwise. z is depth (down positive).
struct SimScene {
  int width = 640;
  int height = 480;
  double focal = 400.0;  // pixels

  double object_x = 5.0;
  double object_y = 0.0;
  double object_z = 0.0;
  double object_size = 0.5;  // side of a square billboard facing the camera
  std::array<std::uint8_t, 3> object_color{255, 60, 40};

  double robot_x = 0.0;
  double robot_y = 0.0;
  double robot_z = 0.0;
  double robot_heading = 0.0;  // radians

  std::uint64_t seed = 1;
  std::optional<int> teleport_step;
  double teleport_x = 0.0;
  double teleport_y = 0.0;
  int max_steps = 500;
};

SimScene parse_scene(const std::vector<KeyValue>& kvs);
SimScene load_scene(const std::filesystem::path& path);

struct SimConfig {
  ApproachPids pids = default_approach_pids();
  double target_ratio = 0.15;
  double dt = 0.1;
  double v_max = 2.0;      // m/s at surge = 1
  double omega_max = 1.0;  // rad/s at yaw = 1
  double vz_max = 0.5;     // m/s at pitch = 1
  TrackerConfig tracker;
  double converge_tolerance = 0.1;  // relative to target_ratio
  int converge_steps = 10;
  // Seed the tracker from a DIP detection on a synthetic pointing pose
  // instead of the projected object box.
  bool seed_with_dip = true;
  DipConfig dip = [] {
    DipConfig d;
    d.method = DetectionMethod::kContour;
    return d;
  }();
};

struct RobotPose {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double heading = 0.0;
};

// Continuous image-space box of the object, if it is in front of the
// camera and overlaps the frame.
std::optional<Rect> project_object(const SimScene& scene, const RobotPose& pose,
                                   double object_x, double object_y);

ImageBuffer render_frame(const SimScene& scene, const RobotPose& pose, double object_x,
                         double object_y, int step);

enum class SimOutcome { kConverged, kLost, kTimeout };

std::string_view to_string(SimOutcome o);

struct SimStep {
  int step = 0;
  RobotPose pose;
  Rect bbox;  // tracker window, continuous extent
  ApproachErrors errors;
  ApproachCommand command;
  double ratio = 0.0;
  double distance = 0.0;
};

struct SimResult {
  std::vector<SimStep> trajectory;
  SimOutcome outcome = SimOutcome::kTimeout;
  std::optional<int> converged_step;
  std::optional<Detection> seed;
};

// Invoked with each rendered frame (step, frame) when provided.
using FrameSink = std::function<void(int, const ImageBuffer&)>;

SimResult simulate_approach(const SimScene& scene, const SimConfig& cfg, int max_steps,
                            const FrameSink& sink = {});

// step,x,y,heading,bbox_x,bbox_y,bbox_w,bbox_h,yaw,pitch,surge,ratio
void write_trajectory_csv(std::ostream& out, const SimResult& result);

}  // namespace dip
