#pragma once

#include "dip/color.hpp"
#include "dip/geometry.hpp"
#include "dip/image.hpp"

namespace dip {

struct TrackerConfig {
  int bins = 16;
  double lost_threshold = 0.05;
  int max_iterations = 10;
  int min_side = 8;
};

// Appearance model plus search window (inclusive pixel box).
struct TrackerState {
  HueHistogram histogram;
  Rect window;
  double last_density = 0.0;
  int last_iterations = 0;
};

// Throws EmptyWindow when bbox holds no chromatic pixel.
TrackerState init_tracker(const ImageBuffer& frame, const Rect& bbox, int bins = 16);

// One CAMShift update: mean shift on the back projection until the window
// moves less than 1 px (at most max_iterations), then resize the window to
// a square of side 2 sqrt(M00 / 256) with M00 taken on the 0..255
// probability scale. Throws TargetLost, leaving state untouched, when the
// mean back projection inside the new window is below lost_threshold.
Rect track(TrackerState& state, const ImageBuffer& frame, const TrackerConfig& cfg = {});

// Continuous extent [x_min, x_max + 1) x [y_min, y_max + 1) of a pixel box.
Rect pixel_box_extent(const Rect& pixel_box);

}  // namespace dip
