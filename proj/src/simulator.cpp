#include "dip/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>

namespace dip {

namespace {

std::array<std::uint8_t, 3> parse_color(const std::string& key, const std::string& value) {
  std::array<std::uint8_t, 3> out{};
  std::stringstream ss(value);
  std::string part;
  int i = 0;
  while (std::getline(ss, part, ',')) {
    if (i >= 3) break;
    part.erase(std::remove_if(part.begin(), part.end(), ::isspace), part.end());
    const auto v = kv_int(key, part);
    if (v < 0 || v > 255) throw Error(ErrorCode::kParseError, key + ": channel outside 0..255");
    out[i++] = static_cast<std::uint8_t>(v);
  }
  if (i != 3 || std::getline(ss, part, ',')) {
    throw Error(ErrorCode::kParseError, key + ": expected 'r, g, b'");
  }
  return out;
}

constexpr double kDegToRad = kPi / 180.0;

}  // namespace

SimScene parse_scene(const std::vector<KeyValue>& kvs) {
  SimScene s;
  for (const auto& [key, value, line] : kvs) {
    if (key == "width") s.width = static_cast<int>(kv_int(key, value));
    else if (key == "height") s.height = static_cast<int>(kv_int(key, value));
    else if (key == "focal") s.focal = kv_double(key, value);
    else if (key == "object_x") s.object_x = kv_double(key, value);
    else if (key == "object_y") s.object_y = kv_double(key, value);
    else if (key == "object_z") s.object_z = kv_double(key, value);
    else if (key == "object_size") s.object_size = kv_double(key, value);
    else if (key == "object_color") s.object_color = parse_color(key, value);
    else if (key == "robot_x") s.robot_x = kv_double(key, value);
    else if (key == "robot_y") s.robot_y = kv_double(key, value);
    else if (key == "robot_z") s.robot_z = kv_double(key, value);
    else if (key == "robot_heading_deg") s.robot_heading = kv_double(key, value) * kDegToRad;
    else if (key == "seed") s.seed = static_cast<std::uint64_t>(kv_int(key, value));
    else if (key == "teleport_step") s.teleport_step = static_cast<int>(kv_int(key, value));
    else if (key == "teleport_x") s.teleport_x = kv_double(key, value);
    else if (key == "teleport_y") s.teleport_y = kv_double(key, value);
    else if (key == "max_steps") s.max_steps = static_cast<int>(kv_int(key, value));
    else {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line) + ": unknown scene key '" + key + "'");
    }
  }
  if (s.width < 16 || s.height < 16) throw Error(ErrorCode::kParseError, "frame too small");
  if (!(s.focal > 0.0)) throw Error(ErrorCode::kParseError, "focal must be > 0");
  if (!(s.object_size > 0.0)) throw Error(ErrorCode::kParseError, "object_size must be > 0");
  if (s.max_steps < 1) throw Error(ErrorCode::kParseError, "max_steps must be >= 1");
  return s;
}

SimScene load_scene(const std::filesystem::path& path) {
  return parse_scene(load_key_values(path));
}

std::string_view to_string(SimOutcome o) {
  switch (o) {
    case SimOutcome::kConverged: return "converged";
    case SimOutcome::kLost: return "lost";
    case SimOutcome::kTimeout: return "timeout";
  }
  return "unknown";
}

std::optional<Rect> project_object(const SimScene& scene, const RobotPose& pose,
                                   double object_x, double object_y) {
  const double dx = object_x - pose.x;
  const double dy = object_y - pose.y;
  const double depth = dx * std::cos(pose.heading) + dy * std::sin(pose.heading);
  const double lateral = -dx * std::sin(pose.heading) + dy * std::cos(pose.heading);
  if (depth < 0.05) return std::nullopt;
  const double u = scene.width / 2.0 + scene.focal * lateral / depth;
  const double v = scene.height / 2.0 + scene.focal * (scene.object_z - pose.z) / depth;
  const double half = scene.focal * scene.object_size / depth / 2.0;
  const Rect box{u - half, v - half, u + half, v + half};
  if (box.x_max <= 0.0 || box.y_max <= 0.0 || box.x_min >= scene.width ||
      box.y_min >= scene.height) {
    return std::nullopt;
  }
  return box;
}

ImageBuffer render_frame(const SimScene& scene, const RobotPose& pose, double object_x,
                         double object_y, int step) {
  ImageBuffer img(scene.width, scene.height, 3);
  std::mt19937_64 rng(scene.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(step));
  std::uniform_int_distribution<int> noise(-6, 6);
  for (int y = 0; y < scene.height; ++y) {
    for (int x = 0; x < scene.width; ++x) {
      // Low-saturation wall texture: broad gray bands plus sensor noise.
      const int band = ((x / 80) + (y / 60)) % 2 == 0 ? 50 : 62;
      const auto v = static_cast<std::uint8_t>(std::clamp(band + noise(rng), 0, 255));
      img.at(x, y, 0) = img.at(x, y, 1) = img.at(x, y, 2) = v;
    }
  }
  if (const auto box = project_object(scene, pose, object_x, object_y)) {
    const int x0 = std::max(0, static_cast<int>(std::ceil(box->x_min - 0.5)));
    const int x1 = std::min(scene.width - 1, static_cast<int>(std::ceil(box->x_max - 0.5)) - 1);
    const int y0 = std::max(0, static_cast<int>(std::ceil(box->y_min - 0.5)));
    const int y1 = std::min(scene.height - 1, static_cast<int>(std::ceil(box->y_max - 0.5)) - 1);
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        for (int ch = 0; ch < 3; ++ch) img.at(x, y, ch) = scene.object_color[ch];
      }
    }
  }
  return img;
}

namespace {

std::optional<Detection> seed_detection(const SimScene& scene, const SimConfig& cfg,
                                        const RobotPose& pose, const ImageBuffer& frame) {
  const auto box = project_object(scene, pose, scene.object_x, scene.object_y);
  if (!box) return std::nullopt;
  const Point2 c{box->center().x - 0.5, box->center().y - 0.5};
  if (!cfg.seed_with_dip) {
    const Rect pixels = clamp_to_frame({box->x_min, box->y_min, box->x_max - 1.0, box->y_max - 1.0},
                                       scene.width, scene.height);
    if (!pixels.valid()) return std::nullopt;
    return Detection{c, pixels, DetectionMethod::kContour, 0.0};
  }
  // A diver just left of the object pointing straight at it.
  PoseLandmarks lm;
  lm.wrist = {c.x - 150.0, c.y};
  lm.elbow = {c.x - 180.0, c.y};
  lm.elbow_conf = lm.wrist_conf = 0.9;
  return run_frame(frame, lm, cfg.dip).detection;
}

}  // namespace

SimResult simulate_approach(const SimScene& scene, const SimConfig& cfg, int max_steps,
                            const FrameSink& sink) {
  if (!(cfg.dt > 0.0)) throw Error(ErrorCode::kInvalidArgument, "dt must be > 0");
  SimResult result;
  RobotPose pose{scene.robot_x, scene.robot_y, scene.robot_z, scene.robot_heading};
  double ox = scene.object_x;
  double oy = scene.object_y;
  ApproachPids pids = cfg.pids;

  const ImageBuffer first = render_frame(scene, pose, ox, oy, 0);
  result.seed = seed_detection(scene, cfg, pose, first);
  if (!result.seed) {
    result.outcome = SimOutcome::kLost;
    return result;
  }
  TrackerState tracker;
  try {
    tracker = init_tracker(first, result.seed->bbox, cfg.tracker.bins);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kEmptyWindow) throw;
    result.outcome = SimOutcome::kLost;
    return result;
  }

  const double frame_area = static_cast<double>(scene.width) * scene.height;
  int in_band = 0;
  result.outcome = SimOutcome::kTimeout;
  for (int step = 0; step < max_steps; ++step) {
    if (scene.teleport_step && step == *scene.teleport_step) {
      ox = scene.teleport_x;
      oy = scene.teleport_y;
    }
    const ImageBuffer frame = step == 0 ? first : render_frame(scene, pose, ox, oy, step);
    if (sink) sink(step, frame);
    Rect window;
    try {
      window = track(tracker, frame, cfg.tracker);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kTargetLost) throw;
      result.outcome = SimOutcome::kLost;
      break;
    }
    SimStep s;
    s.step = step;
    s.pose = pose;
    s.bbox = pixel_box_extent(window);
    s.ratio = (s.bbox.x_max - s.bbox.x_min) * (s.bbox.y_max - s.bbox.y_min) / frame_area;
    s.distance = std::hypot(ox - pose.x, oy - pose.y);
    s.errors = approach_errors(s.bbox, scene.width, scene.height, cfg.target_ratio);
    s.command = approach_command(s.bbox, scene.width, scene.height, cfg.target_ratio, pids, cfg.dt);
    result.trajectory.push_back(s);

    pose.heading += s.command.yaw * cfg.dt * cfg.omega_max;
    const double travel = s.command.surge * cfg.dt * cfg.v_max;
    pose.x += travel * std::cos(pose.heading);
    pose.y += travel * std::sin(pose.heading);
    pose.z += s.command.pitch * cfg.dt * cfg.vz_max;

    const bool near = std::abs(s.ratio - cfg.target_ratio) <=
                      cfg.converge_tolerance * cfg.target_ratio;
    in_band = near ? in_band + 1 : 0;
    if (in_band >= cfg.converge_steps) {
      result.outcome = SimOutcome::kConverged;
      result.converged_step = step;
      break;
    }
  }
  return result;
}

void write_trajectory_csv(std::ostream& out, const SimResult& result) {
  out << "step,x,y,heading,bbox_x,bbox_y,bbox_w,bbox_h,yaw,pitch,surge,ratio\n";
  char buf[512];
  for (const auto& s : result.trajectory) {
    std::snprintf(buf, sizeof(buf),
                  "%d,%.6f,%.6f,%.6f,%.1f,%.1f,%.1f,%.1f,%.6f,%.6f,%.6f,%.6f\n", s.step,
                  s.pose.x, s.pose.y, s.pose.heading, s.bbox.x_min, s.bbox.y_min,
                  s.bbox.x_max - s.bbox.x_min, s.bbox.y_max - s.bbox.y_min, s.command.yaw,
                  s.command.pitch, s.command.surge, s.ratio);
    out << buf;
  }
}

}  // namespace dip
