#include "dip/color.hpp"

#include <algorithm>
#include <cmath>

namespace dip {

Hsv rgb_to_hsv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
  const double r = r8 / 255.0, g = g8 / 255.0, b = b8 / 255.0;
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = mx - mn;
  Hsv out;
  out.v = mx;
  out.s = mx > 0.0 ? delta / mx : 0.0;
  if (delta > 0.0) {
    double h = 0.0;
    if (mx == r) {
      h = 60.0 * std::fmod((g - b) / delta, 6.0);
    } else if (mx == g) {
      h = 60.0 * ((b - r) / delta + 2.0);
    } else {
      h = 60.0 * ((r - g) / delta + 4.0);
    }
    if (h < 0.0) h += 360.0;
    if (h >= 360.0) h -= 360.0;
    out.h = h;
  }
  return out;
}

bool is_chromatic(const Hsv& hsv) { return hsv.s >= kMinChroma && hsv.v >= kMinChroma; }

bool HueHistogram::empty() const {
  return std::all_of(bins.begin(), bins.end(), [](double b) { return b == 0.0; });
}

int HueHistogram::bin_of(double hue_degrees) const {
  const int n = static_cast<int>(bins.size());
  const int b = static_cast<int>(hue_degrees / 360.0 * n);
  return std::clamp(b, 0, n - 1);
}

HueHistogram hue_histogram(const ImageBuffer& rgb, const Rect& window, int bins) {
  if (rgb.channels() != 3) {
    throw Error(ErrorCode::kInvalidArgument, "hue histogram needs an RGB image");
  }
  if (bins < 1) throw Error(ErrorCode::kInvalidArgument, "bin count must be >= 1");
  const Rect w = clamp_to_frame(window, rgb.width(), rgb.height());
  if (!window.valid() || !w.valid()) {
    throw Error(ErrorCode::kEmptyWindow, "window does not overlap the frame");
  }
  HueHistogram hist{std::vector<double>(bins, 0.0)};
  double total = 0.0;
  for (int y = static_cast<int>(w.y_min); y <= static_cast<int>(w.y_max); ++y) {
    for (int x = static_cast<int>(w.x_min); x <= static_cast<int>(w.x_max); ++x) {
      const Hsv hsv = rgb_to_hsv(rgb.at(x, y, 0), rgb.at(x, y, 1), rgb.at(x, y, 2));
      if (!is_chromatic(hsv)) continue;
      hist.bins[hist.bin_of(hsv.h)] += 1.0;
      total += 1.0;
    }
  }
  if (total > 0.0) {
    for (double& b : hist.bins) b /= total;
  }
  return hist;
}

Plane back_project(const ImageBuffer& rgb, const HueHistogram& hist) {
  if (rgb.channels() != 3) {
    throw Error(ErrorCode::kInvalidArgument, "back projection needs an RGB image");
  }
  Plane out(rgb.width(), rgb.height());
  if (hist.bins.empty()) return out;
  for (int y = 0; y < rgb.height(); ++y) {
    for (int x = 0; x < rgb.width(); ++x) {
      const Hsv hsv = rgb_to_hsv(rgb.at(x, y, 0), rgb.at(x, y, 1), rgb.at(x, y, 2));
      if (is_chromatic(hsv)) out.at(x, y) = hist.bins[hist.bin_of(hsv.h)];
    }
  }
  return out;
}

}  // namespace dip
