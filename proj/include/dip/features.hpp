#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dip/filters.hpp"
#include "dip/geometry.hpp"
#include "dip/image.hpp"

namespace dip {

struct PixelPoint {
  int x = 0;
  int y = 0;

  friend bool operator==(const PixelPoint&, const PixelPoint&) = default;
};

struct Contour {
  std::vector<PixelPoint> pixels;
  Point2 centroid;
  std::size_t area = 0;
  Rect bbox;
};

// 8-connected components of edge pixels with at least min_area members,
// sorted by area (descending), then centroid y, then centroid x.
std::vector<Contour> extract_contours(const EdgeMap& edges, std::size_t min_area);

struct CornerParams {
  double k = 0.04;
  double window_sigma = 1.0;
};

// Harris response det(M) - k trace(M)^2. Gradients are Sobel / (8 * 255),
// i.e. per-pixel derivatives of intensity in [0, 1]; M is their outer
// product smoothed by a Gaussian window.
Plane corner_response(const ImageBuffer& gray, const CornerParams& params = {});

// Same values as corner_response, computed only for pixels inside region
// (an inclusive pixel box within the frame). Other entries are 0.
Plane corner_response_in(const ImageBuffer& gray, const CornerParams& params,
                         const Rect& region);

struct Keypoint {
  PixelPoint location;
  double strength = 0.0;

  friend bool operator==(const Keypoint&, const Keypoint&) = default;
};

struct KeypointParams {
  CornerParams corner;
  double threshold = 1e-6;  // response units: Sobel gradients divided by 8 * 255
  int nms_radius = 5;
};

// Pixel membership test restricted to an inclusive bounding box.
struct PixelMask {
  Rect box;
  std::function<bool(int, int)> contains;

  static PixelMask from(const ScanRegion& region);
};

// Local maxima of the corner response above threshold. A pixel survives
// suppression if no pixel within nms_radius (Chebyshev, inside the frame)
// has a larger response or an equal response earlier in raster order.
// Suppression always looks at unmasked neighbours, so a masked result is
// exactly the unmasked result filtered by the mask.
// Sorted by strength descending, ties by (y, x) ascending.
std::vector<Keypoint> detect_keypoints(const ImageBuffer& gray, const KeypointParams& params,
                                       const std::optional<PixelMask>& mask = std::nullopt);

}  // namespace dip
