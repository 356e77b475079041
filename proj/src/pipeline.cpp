#include "dip/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace dip {

namespace {

void require(bool ok, const char* field, const char* rule) {
  if (!ok) {
    throw Error(ErrorCode::kInvalidArgument, std::string(field) + " must be " + rule);
  }
}

}  // namespace

void DipConfig::validate() const {
  require(sf > 0.0 && std::isfinite(sf), "sf", "> 0");
  require(c > 0.0 && std::isfinite(c), "c", "> 0");
  require(eps >= 0.0 && std::isfinite(eps), "eps", ">= 0");
  require(min_conf >= 0.0 && min_conf <= 1.0, "min_conf", "in [0, 1]");
  require(min_forearm > 0.0 && std::isfinite(min_forearm), "min_forearm", "> 0");
  require(detector.canny.sigma > 0.0, "canny_sigma", "> 0");
  require(detector.canny.low > 0.0 && detector.canny.low < detector.canny.high,
          "canny_low/canny_high", "0 < low < high");
  require(detector.keypoints.threshold > 0.0, "keypoint_threshold", "> 0");
  require(detector.keypoints.nms_radius >= 0, "nms_radius", ">= 0");
  require(detector.keypoints.corner.window_sigma > 0.0, "harris_sigma", "> 0");
  require(detector.seed_box > 0.0, "seed_box", "> 0");
}

std::string_view to_string(Gate g) {
  switch (g) {
    case Gate::kNoPose: return "no_pose";
    case Gate::kLowConfidence: return "low_confidence";
    case Gate::kNotPointing: return "not_pointing";
    case Gate::kOk: return "ok";
  }
  return "unknown";
}

Gate gate_from_string(std::string_view s) {
  if (s == "no_pose") return Gate::kNoPose;
  if (s == "low_confidence") return Gate::kLowConfidence;
  if (s == "not_pointing") return Gate::kNotPointing;
  if (s == "ok") return Gate::kOk;
  throw Error(ErrorCode::kParseError, "unknown gate '" + std::string(s) + "'");
}

std::string_view to_string(SessionPhase p) {
  switch (p) {
    case SessionPhase::kAwaitingPose: return "awaiting_pose";
    case SessionPhase::kDetecting: return "detecting";
    case SessionPhase::kConfirmed: return "confirmed";
    case SessionPhase::kTracking: return "tracking";
  }
  return "unknown";
}

SessionPhase session_phase_from_string(std::string_view s) {
  if (s == "awaiting_pose") return SessionPhase::kAwaitingPose;
  if (s == "detecting") return SessionPhase::kDetecting;
  if (s == "confirmed") return SessionPhase::kConfirmed;
  if (s == "tracking") return SessionPhase::kTracking;
  throw Error(ErrorCode::kParseError, "unknown session phase '" + std::string(s) + "'");
}

Gate is_pointing_pose(const std::optional<PoseLandmarks>& lm, const DipConfig& cfg) {
  if (!lm) return Gate::kNoPose;
  if (!std::isfinite(lm->elbow.x) || !std::isfinite(lm->elbow.y) ||
      !std::isfinite(lm->wrist.x) || !std::isfinite(lm->wrist.y)) {
    return Gate::kNoPose;
  }
  if (std::min(lm->elbow_conf, lm->wrist_conf) < cfg.min_conf) return Gate::kLowConfidence;
  if (norm(lm->wrist - lm->elbow) < cfg.min_forearm) return Gate::kNotPointing;
  return Gate::kOk;
}

FrameResult run_frame(const ImageBuffer& frame, const std::optional<PoseLandmarks>& lm,
                      const DipConfig& cfg, std::int64_t frame_id) {
  const auto start = std::chrono::steady_clock::now();
  FrameResult r;
  r.frame_id = frame_id;
  r.gate = is_pointing_pose(lm, cfg);
  auto finish = [&]() {
    r.elapsed_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    return r;
  };
  if (r.gate != Gate::kOk) return finish();

  try {
    r.ray = make_pointing_ray(lm->elbow, lm->wrist, cfg.sf);
    r.aoi = cfg.perpendicular_mode
                ? build_area_of_interest_perpendicular(r.ray->wrist, r.ray->ext, cfg.c, cfg.eps)
                : build_area_of_interest(r.ray->wrist, r.ray->ext, cfg.c, cfg.eps);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegeneratePose && e.code() != ErrorCode::kDegenerateTriangle &&
        e.code() != ErrorCode::kInvalidArgument) {
      throw;
    }
    return finish();
  }

  try {
    r.detection = locate_object(frame, *r.aoi, cfg.method, cfg.detector);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kEmptyRegion) throw;
  }
  return finish();
}

Session::Session(SessionConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.dip.validate();
  if (cfg_.confirm_frames < 1) {
    throw Error(ErrorCode::kInvalidArgument, "confirm_frames must be >= 1");
  }
}

void Session::reset() {
  const auto processed = state_.frames_processed;
  state_ = SessionState{};
  state_.frames_processed = processed;
  streak_ = 0;
  tracker_.reset();
  lost_ = false;
}

bool Session::confirmed() const {
  return state_.phase == SessionPhase::kConfirmed || state_.phase == SessionPhase::kTracking;
}

SessionStep Session::step(const ImageBuffer& frame, const std::optional<PoseLandmarks>& lm,
                          std::int64_t frame_id) {
  if (confirmed()) return track_step(frame, frame_id);
  return detect_step(frame, run_frame(frame, lm, cfg_.dip, frame_id));
}

SessionStep Session::step(const ImageBuffer& frame, FrameResult precomputed) {
  if (confirmed()) return track_step(frame, precomputed.frame_id);
  return detect_step(frame, std::move(precomputed));
}

SessionStep Session::track_step(const ImageBuffer& frame, std::int64_t frame_id) {
  ++state_.frames_processed;
  SessionStep out;
  out.frame_id = frame_id;
  if (tracker_ && !lost_) {
    try {
      out.track_window = track(*tracker_, frame, cfg_.tracker);
      state_.phase = SessionPhase::kTracking;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kTargetLost) throw;
      out.target_lost = true;
      lost_ = true;
      if (cfg_.restart_on_lost) reset();
    }
  }
  out.phase = state_.phase;
  return out;
}

SessionStep Session::detect_step(const ImageBuffer& frame, FrameResult r) {
  ++state_.frames_processed;
  SessionStep out;
  out.frame_id = r.frame_id;
  streak_ = r.detection ? streak_ + 1 : 0;
  if (streak_ >= cfg_.confirm_frames) {
    state_.phase = SessionPhase::kConfirmed;
    state_.confirmed_detection = r.detection;
    state_.confirmed_frame = r.frame_id;
    if (cfg_.tracking && frame.channels() == 3) {
      try {
        tracker_ = init_tracker(frame, r.detection->bbox, cfg_.tracker.bins);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kEmptyWindow) throw;
      }
    }
  } else {
    state_.phase = r.gate == Gate::kOk ? SessionPhase::kDetecting : SessionPhase::kAwaitingPose;
  }
  out.dip = std::move(r);
  out.phase = state_.phase;
  return out;
}

SessionTrace run_session(std::span<const SessionInput> inputs, const SessionConfig& cfg) {
  Session session(cfg);
  SessionTrace trace;
  std::optional<std::int64_t> prev;
  for (const auto& in : inputs) {
    if (prev && in.frame_id <= *prev) {
      throw Error(ErrorCode::kInvalidArgument, "session inputs must be ordered by frame_id");
    }
    prev = in.frame_id;
    if (in.frame == nullptr) throw Error(ErrorCode::kInvalidArgument, "missing frame");
    trace.steps.push_back(session.step(*in.frame, in.landmarks, in.frame_id));
  }
  trace.final_state = session.state();
  return trace;
}

std::vector<PixelPoint> raster_line(Point2 a, Point2 b) {
  int x0 = static_cast<int>(std::lround(a.x)), y0 = static_cast<int>(std::lround(a.y));
  const int x1 = static_cast<int>(std::lround(b.x)), y1 = static_cast<int>(std::lround(b.y));
  const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
  const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  std::vector<PixelPoint> out;
  out.reserve(static_cast<std::size_t>(std::max(dx, -dy)) + 1);
  while (true) {
    out.push_back({x0, y0});
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
  return out;
}

namespace {

ImageBuffer promote_to_rgb(const ImageBuffer& frame) {
  if (frame.channels() == 3) return frame;
  ImageBuffer out(frame.width(), frame.height(), 3);
  for (int y = 0; y < frame.height(); ++y) {
    for (int x = 0; x < frame.width(); ++x) {
      const auto v = frame.at(x, y);
      out.at(x, y, 0) = out.at(x, y, 1) = out.at(x, y, 2) = v;
    }
  }
  return out;
}

void put(ImageBuffer& img, int x, int y, const std::uint8_t (&color)[3]) {
  if (!img.in_bounds(x, y)) return;
  for (int ch = 0; ch < 3; ++ch) img.at(x, y, ch) = color[ch];
}

// Clips to a one-pixel margin around the frame so far-away endpoints do
// not produce huge rasters.
void draw_line(ImageBuffer& img, Point2 a, Point2 b, const std::uint8_t (&color)[3]) {
  const Rect bounds{-1.0, -1.0, static_cast<double>(img.width()),
                    static_cast<double>(img.height())};
  if (!segment_intersects_rect(a, b, bounds)) return;
  const double dx = b.x - a.x, dy = b.y - a.y;
  double t0 = 0.0, t1 = 1.0;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {a.x - bounds.x_min, bounds.x_max - a.x, a.y - bounds.y_min,
                       bounds.y_max - a.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) continue;
    const double t = q[i] / p[i];
    if (p[i] < 0.0) t0 = std::max(t0, t); else t1 = std::min(t1, t);
  }
  const Point2 ca{a.x + t0 * dx, a.y + t0 * dy};
  const Point2 cb{a.x + t1 * dx, a.y + t1 * dy};
  for (const auto& px : raster_line(ca, cb)) put(img, px.x, px.y, color);
}

void draw_rect(ImageBuffer& img, const Rect& r, const std::uint8_t (&color)[3]) {
  draw_line(img, {r.x_min, r.y_min}, {r.x_max, r.y_min}, color);
  draw_line(img, {r.x_max, r.y_min}, {r.x_max, r.y_max}, color);
  draw_line(img, {r.x_max, r.y_max}, {r.x_min, r.y_max}, color);
  draw_line(img, {r.x_min, r.y_max}, {r.x_min, r.y_min}, color);
}

}  // namespace

ImageBuffer annotate(const ImageBuffer& frame, const FrameResult& r,
                     const AnnotationStyle& style) {
  if (r.gate != Gate::kOk || !r.ray) return frame;
  ImageBuffer out = promote_to_rgb(frame);
  if (r.aoi) {
    draw_line(out, r.aoi->apex, r.aoi->base_top, style.aoi);
    draw_line(out, r.aoi->base_top, r.aoi->base_bottom, style.aoi);
    draw_line(out, r.aoi->base_bottom, r.aoi->apex, style.aoi);
  }
  draw_line(out, r.ray->wrist, r.ray->ext, style.ray);
  draw_line(out, r.ray->elbow, r.ray->wrist, style.forearm);
  if (r.detection) {
    draw_rect(out, r.detection->bbox, style.bbox);
    const int cx = static_cast<int>(std::lround(r.detection->point.x));
    const int cy = static_cast<int>(std::lround(r.detection->point.y));
    for (int d = -style.marker_arm; d <= style.marker_arm; ++d) {
      put(out, cx + d, cy, style.marker);
      put(out, cx, cy + d, style.marker);
    }
  }
  return out;
}

}  // namespace dip
