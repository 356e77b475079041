#pragma once

#include "dip/geometry.hpp"

namespace dip {

struct PidState {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  double integral = 0.0;
  double prev_error = 0.0;
  double output_limit = 1.0;
};

// out = clamp(kp e + ki I + kd (e - e_prev) / dt), with I += e dt clamped
// to +-output_limit / ki when ki > 0.
double pid_step(PidState& state, double error, double dt);

struct ApproachCommand {
  double yaw = 0.0;    // < 0 turns left
  double pitch = 0.0;  // > 0 descends (target below centre)
  double surge = 0.0;  // > 0 advances

  friend bool operator==(const ApproachCommand&, const ApproachCommand&) = default;
};

struct ApproachPids {
  PidState yaw;
  PidState pitch;
  PidState surge;
};

ApproachPids default_approach_pids();

struct ApproachErrors {
  double yaw = 0.0;
  double pitch = 0.0;
  double surge = 0.0;
};

// bbox in continuous image coordinates.
ApproachErrors approach_errors(const Rect& bbox, int frame_w, int frame_h, double target_ratio);

ApproachCommand approach_command(const Rect& bbox, int frame_w, int frame_h,
                                 double target_ratio, ApproachPids& pids, double dt);

}  // namespace dip
