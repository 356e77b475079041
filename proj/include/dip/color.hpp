#pragma once

#include <vector>

#include "dip/image.hpp"

namespace dip {

struct Hsv {
  double h = 0.0;  // degrees, [0, 360)
  double s = 0.0;  // [0, 1]
  double v = 0.0;  // [0, 1]
};

Hsv rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b);

// Pixels with saturation or value below this fraction carry no usable hue.
inline constexpr double kMinChroma = 0.1;

bool is_chromatic(const Hsv& hsv);

struct HueHistogram {
  std::vector<double> bins;  // sums to 1, or all zero

  bool empty() const;
  int bin_of(double hue_degrees) const;
};

// Histogram of chromatic pixels in window (inclusive pixel box inside the
// frame). Throws EmptyWindow for an empty or out-of-frame window.
HueHistogram hue_histogram(const ImageBuffer& rgb, const Rect& window, int bins = 16);

// Per-pixel histogram weight of the pixel's hue bin; 0 for achromatic pixels.
Plane back_project(const ImageBuffer& rgb, const HueHistogram& hist);

}  // namespace dip
