#include "dip/tracker.hpp"

#include <algorithm>
#include <cmath>

namespace dip {
namespace {

struct Moments {
  double m00 = 0.0;
  double m10 = 0.0;
  double m01 = 0.0;
};

Moments moments(const Plane& prob, const Rect& w) {
  Moments m;
  for (int y = static_cast<int>(w.y_min); y <= static_cast<int>(w.y_max); ++y) {
    for (int x = static_cast<int>(w.x_min); x <= static_cast<int>(w.x_max); ++x) {
      const double p = prob.at(x, y);
      m.m00 += p;
      m.m10 += p * x;
      m.m01 += p * y;
    }
  }
  return m;
}

// Inclusive box of the given pixel size centred on c, shifted into the frame.
Rect place(Point2 c, int w, int h, int frame_w, int frame_h) {
  w = std::clamp(w, 1, frame_w);
  h = std::clamp(h, 1, frame_h);
  int x0 = static_cast<int>(std::lround(c.x - (w - 1) / 2.0));
  int y0 = static_cast<int>(std::lround(c.y - (h - 1) / 2.0));
  x0 = std::clamp(x0, 0, frame_w - w);
  y0 = std::clamp(y0, 0, frame_h - h);
  return {static_cast<double>(x0), static_cast<double>(y0), static_cast<double>(x0 + w - 1),
          static_cast<double>(y0 + h - 1)};
}

int box_w(const Rect& r) { return static_cast<int>(r.x_max - r.x_min) + 1; }
int box_h(const Rect& r) { return static_cast<int>(r.y_max - r.y_min) + 1; }

}  // namespace

Rect pixel_box_extent(const Rect& b) { return {b.x_min, b.y_min, b.x_max + 1.0, b.y_max + 1.0}; }

TrackerState init_tracker(const ImageBuffer& frame, const Rect& bbox, int bins) {
  const Rect w = clamp_to_frame(bbox, frame.width(), frame.height());
  if (!bbox.valid() || !w.valid()) {
    throw Error(ErrorCode::kEmptyWindow, "tracker seed box is outside the frame");
  }
  TrackerState s;
  s.histogram = hue_histogram(frame, w, bins);
  if (s.histogram.empty()) {
    throw Error(ErrorCode::kEmptyWindow, "tracker seed box has no chromatic pixels");
  }
  s.window = w;
  if (box_w(w) * box_h(w) < 4) {
    s.window = place(w.center(), std::max(2, box_w(w)), std::max(2, box_h(w)), frame.width(),
                     frame.height());
  }
  s.last_density = moments(back_project(frame, s.histogram), s.window).m00 /
                   (box_w(s.window) * box_h(s.window));
  return s;
}

Rect track(TrackerState& state, const ImageBuffer& frame, const TrackerConfig& cfg) {
  const int W = frame.width();
  const int H = frame.height();
  const Plane prob = back_project(frame, state.histogram);

  Rect window = clamp_to_frame(state.window, W, H);
  if (!window.valid()) window = place(state.window.center(), 8, 8, W, H);
  const int ww = box_w(window);
  const int wh = box_h(window);
  int iterations = 0;
  while (iterations < cfg.max_iterations) {
    const Moments m = moments(prob, window);
    if (m.m00 <= 0.0) break;
    ++iterations;
    const Rect next = place({m.m10 / m.m00, m.m01 / m.m00}, ww, wh, W, H);
    const Point2 a = window.center();
    const Point2 b = next.center();
    window = next;
    if (std::hypot(b.x - a.x, b.y - a.y) < 1.0) break;
  }

  const Moments m = moments(prob, window);
  Rect result = window;
  if (m.m00 > 0.0) {
    const double m00_8bit = 255.0 * m.m00;
    const int max_side = std::min(W, H);
    const int side = std::clamp(static_cast<int>(std::lround(2.0 * std::sqrt(m00_8bit / 256.0))),
                                std::min(cfg.min_side, max_side), max_side);
    result = place({m.m10 / m.m00, m.m01 / m.m00}, side, side, W, H);
  }
  const double density = moments(prob, result).m00 / (box_w(result) * box_h(result));
  if (density < cfg.lost_threshold) {
    throw Error(ErrorCode::kTargetLost, "back projection density " + std::to_string(density));
  }
  state.window = result;
  state.last_density = density;
  state.last_iterations = iterations;
  return result;
}

}  // namespace dip
