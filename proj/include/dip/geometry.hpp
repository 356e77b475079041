#pragma once

#include <span>

#include "dip/error.hpp"

namespace dip {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Image-space point. Origin top-left, y grows downward.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

double cross(Point2 a, Point2 b);
double norm(Point2 v);

// Axis-aligned closed box. When used for pixel regions the bounds are
// integer-valued and inclusive.
struct Rect {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  friend bool operator==(const Rect&, const Rect&) = default;

  bool valid() const { return x_min <= x_max && y_min <= y_max; }
  Point2 center() const { return {(x_min + x_max) / 2.0, (y_min + y_max) / 2.0}; }
  bool contains(Point2 p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
  Rect dilated(double d) const { return {x_min - d, y_min - d, x_max + d, y_max + d}; }
};

// Area of interest. apex is the (offset) wrist vertex; the base is the
// segment through the extended pointing endpoint.
struct Triangle {
  Point2 apex;
  Point2 base_top;
  Point2 base_bottom;

  friend bool operator==(const Triangle&, const Triangle&) = default;

  double signed_area() const;
};

struct PointingRay {
  Point2 elbow;
  Point2 wrist;
  Point2 ext;
  double sf = 0.0;

  friend bool operator==(const PointingRay&, const PointingRay&) = default;
};

// ext = w + sf * (w - e), per coordinate. Throws DegeneratePose when the
// forearm has zero length.
Point2 extend_pointing_segment(Point2 elbow, Point2 wrist, double sf);

PointingRay make_pointing_ray(Point2 elbow, Point2 wrist, double sf);

// Vertices (w.x - eps, w.y + eps), (ext.x, ext.y - c), (ext.x, ext.y + c).
Triangle build_area_of_interest(Point2 wrist, Point2 ext, double c, double eps);

// Variant that offsets the base by +-c perpendicular to the pointing
// direction instead of vertically. Avoids the sliver AOI for near-vertical
// pointing; c keeps its meaning as the base half-length.
Triangle build_area_of_interest_perpendicular(Point2 wrist, Point2 ext, double c,
                                              double eps);

// Boundary-inclusive.
bool point_in_triangle(Point2 p, const Triangle& t);

// Direction of elbow->wrist in [0, 2pi), counterclockwise from +x with the
// image y axis flipped to point up.
double pointing_angle(Point2 elbow, Point2 wrist);

// Minimal circular distance in [0, pi].
double angular_difference(double a, double b);

// Closed segment vs closed rectangle (Liang-Barsky).
bool segment_intersects_rect(Point2 p0, Point2 p1, const Rect& r);

// Pixel scan region for an AOI clipped to a width x height frame: an
// inclusive integer bounding box plus the triangle membership test.
struct ScanRegion {
  Rect box;
  Triangle triangle;

  bool contains(int x, int y) const {
    return x >= box.x_min && x <= box.x_max && y >= box.y_min && y <= box.y_max &&
           point_in_triangle({static_cast<double>(x), static_cast<double>(y)}, triangle);
  }
};

// Throws EmptyRegion when no pixel of the frame lies inside the triangle.
ScanRegion clip_triangle_to_image(const Triangle& t, int width, int height);

// Circular mean of the angles in [0, 2pi). Falls back to the first angle
// when the resultant vector vanishes.
double circular_mean(std::span<const double> angles);

// Angles unwrapped to the branch nearest their circular mean; the result is
// the arithmetic mean of the unwrapped values, wrapped to [0, 2pi).
double unwrapped_mean(std::span<const double> angles);

// Sample variance (n - 1 denominator) after unwrapping to the branch
// nearest the circular mean. A single angle has variance 0.
double circular_variance(std::span<const double> angles);

double wrap_to_two_pi(double a);

}  // namespace dip
