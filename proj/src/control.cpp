#include "dip/control.hpp"

#include <algorithm>
#include <cmath>

namespace dip {

double pid_step(PidState& s, double error, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::kInvalidArgument, "dt must be > 0");
  s.integral += error * dt;
  if (s.ki > 0.0) {
    const double cap = s.output_limit / s.ki;
    s.integral = std::clamp(s.integral, -cap, cap);
  }
  const double derivative = (error - s.prev_error) / dt;
  s.prev_error = error;
  const double out = s.kp * error + s.ki * s.integral + s.kd * derivative;
  return std::clamp(out, -s.output_limit, s.output_limit);
}

ApproachPids default_approach_pids() {
  ApproachPids p;
  p.yaw = {0.6, 0.05, 0.1};
  p.pitch = {0.0, 0.0, 0.0};
  p.surge = {0.6, 0.05, 0.1};
  return p;
}

ApproachErrors approach_errors(const Rect& bbox, int frame_w, int frame_h, double target_ratio) {
  if (!(target_ratio > 0.0 && target_ratio < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "target ratio must be in (0, 1)");
  }
  const double half_w = frame_w / 2.0;
  const double half_h = frame_h / 2.0;
  const Point2 c = bbox.center();
  const double area = (bbox.x_max - bbox.x_min) * (bbox.y_max - bbox.y_min);
  return {(c.x - half_w) / half_w, (c.y - half_h) / half_h,
          target_ratio - area / (static_cast<double>(frame_w) * frame_h)};
}

ApproachCommand approach_command(const Rect& bbox, int frame_w, int frame_h,
                                 double target_ratio, ApproachPids& pids, double dt) {
  const ApproachErrors e = approach_errors(bbox, frame_w, frame_h, target_ratio);
  return {pid_step(pids.yaw, e.yaw, dt), pid_step(pids.pitch, e.pitch, dt),
          pid_step(pids.surge, e.surge, dt)};
}

}  // namespace dip
