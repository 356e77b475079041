#include "dip/detection.hpp"

#include <algorithm>
#include <string>

namespace dip {

std::string_view to_string(DetectionMethod m) {
  switch (m) {
    case DetectionMethod::kKeypoint: return "keypoint";
    case DetectionMethod::kContour: return "contour";
    case DetectionMethod::kContourThenKeypoint: return "contour_then_keypoint";
  }
  return "unknown";
}

DetectionMethod detection_method_from_string(std::string_view s) {
  if (s == "keypoint") return DetectionMethod::kKeypoint;
  if (s == "contour") return DetectionMethod::kContour;
  if (s == "contour_then_keypoint") return DetectionMethod::kContourThenKeypoint;
  throw Error(ErrorCode::kInvalidArgument, "unknown detection method '" + std::string(s) + "'");
}

namespace {

std::optional<Detection> by_keypoint(const ImageBuffer& gray, const ScanRegion& region,
                                     const DetectorConfig& cfg) {
  const auto kps = detect_keypoints(gray, cfg.keypoints, PixelMask::from(region));
  if (kps.empty()) return std::nullopt;
  const Keypoint& best = kps.front();
  const Point2 p{static_cast<double>(best.location.x), static_cast<double>(best.location.y)};
  const double half = cfg.seed_box / 2.0;
  const Rect box = clamp_to_frame({p.x - half, p.y - half, p.x + half, p.y + half},
                                  gray.width(), gray.height());
  return Detection{p, box, DetectionMethod::kKeypoint, best.strength};
}

std::optional<Detection> by_contour(const ImageBuffer& gray, const ScanRegion& region,
                                    const DetectorConfig& cfg) {
  // Edges are traced on the whole frame so a contour is never cut at the
  // scan box; only its centroid is tested against the triangle.
  const auto contours = extract_contours(canny(gray, cfg.canny), cfg.min_area);
  for (const auto& c : contours) {
    if (point_in_triangle(c.centroid, region.triangle)) {
      return Detection{c.centroid, c.bbox, DetectionMethod::kContour,
                       static_cast<double>(c.area)};
    }
  }
  return std::nullopt;
}

std::optional<ScanRegion> try_clip(const ImageBuffer& img, const Triangle& aoi) {
  try {
    return clip_triangle_to_image(aoi, img.width(), img.height());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kEmptyRegion) return std::nullopt;
    throw;
  }
}

}  // namespace

std::optional<Detection> locate_by_keypoint(const ImageBuffer& gray, const Triangle& aoi,
                                            const DetectorConfig& cfg) {
  const auto region = try_clip(gray, aoi);
  if (!region) return std::nullopt;
  return by_keypoint(gray, *region, cfg);
}

std::optional<Detection> locate_by_contour(const ImageBuffer& gray, const Triangle& aoi,
                                           const DetectorConfig& cfg) {
  const auto region = try_clip(gray, aoi);
  if (!region) return std::nullopt;
  return by_contour(gray, *region, cfg);
}

std::optional<Detection> locate_object(const ImageBuffer& frame, const Triangle& aoi,
                                       DetectionMethod method, const DetectorConfig& cfg) {
  const ScanRegion region = clip_triangle_to_image(aoi, frame.width(), frame.height());
  const ImageBuffer gray = ensure_gray(frame);
  switch (method) {
    case DetectionMethod::kKeypoint:
      return by_keypoint(gray, region, cfg);
    case DetectionMethod::kContour:
      return by_contour(gray, region, cfg);
    case DetectionMethod::kContourThenKeypoint:
      if (auto d = by_contour(gray, region, cfg)) return d;
      return by_keypoint(gray, region, cfg);
  }
  return std::nullopt;
}

}  // namespace dip
