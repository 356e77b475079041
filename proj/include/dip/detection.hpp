#pragma once

#include <optional>
#include <string_view>

#include "dip/features.hpp"
#include "dip/filters.hpp"
#include "dip/geometry.hpp"
#include "dip/image.hpp"

namespace dip {

enum class DetectionMethod { kKeypoint, kContour, kContourThenKeypoint };

std::string_view to_string(DetectionMethod m);
DetectionMethod detection_method_from_string(std::string_view s);

struct Detection {
  Point2 point;
  Rect bbox;  // seed box handed to the tracker
  DetectionMethod method = DetectionMethod::kKeypoint;  // kKeypoint or kContour
  double score = 0.0;  // keypoint strength or contour area

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct DetectorConfig {
  CannyParams canny;
  std::size_t min_area = 20;
  KeypointParams keypoints;
  double seed_box = 40.0;
};

// Strongest keypoint inside the triangle. The bbox is a seed_box square
// centred on the keypoint and clamped to the frame.
std::optional<Detection> locate_by_keypoint(const ImageBuffer& gray, const Triangle& aoi,
                                            const DetectorConfig& cfg);

// Largest contour whose centroid lies inside the triangle. Ties go to the
// smaller centroid y, then x.
std::optional<Detection> locate_by_contour(const ImageBuffer& gray, const Triangle& aoi,
                                           const DetectorConfig& cfg);

// Dispatch. Accepts gray or RGB frames. Throws EmptyRegion when the AOI
// covers no pixel of the frame.
std::optional<Detection> locate_object(const ImageBuffer& frame, const Triangle& aoi,
                                       DetectionMethod method, const DetectorConfig& cfg);

}  // namespace dip
