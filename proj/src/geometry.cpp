#include "dip/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace dip {
namespace {

constexpr double kCoincidentTol = 1e-9;

bool finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

void require_finite(Point2 p, const char* what) {
  if (!finite(p)) {
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + " is not finite");
  }
}

}  // namespace

double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }

double norm(Point2 v) { return std::hypot(v.x, v.y); }

double Triangle::signed_area() const {
  return 0.5 * cross(base_top - apex, base_bottom - apex);
}

Point2 extend_pointing_segment(Point2 elbow, Point2 wrist, double sf) {
  require_finite(elbow, "elbow");
  require_finite(wrist, "wrist");
  if (!(sf >= 0.0) || !std::isfinite(sf)) {
    throw Error(ErrorCode::kInvalidArgument, "scale factor must be >= 0");
  }
  if (norm(wrist - elbow) <= kCoincidentTol) {
    throw Error(ErrorCode::kDegeneratePose, "elbow and wrist coincide");
  }
  return {wrist.x + sf * (wrist.x - elbow.x), wrist.y + sf * (wrist.y - elbow.y)};
}

PointingRay make_pointing_ray(Point2 elbow, Point2 wrist, double sf) {
  return {elbow, wrist, extend_pointing_segment(elbow, wrist, sf), sf};
}

namespace {

void check_aoi_args(Point2 wrist, Point2 ext, double c, double eps) {
  require_finite(wrist, "wrist");
  require_finite(ext, "ext");
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorCode::kInvalidArgument, "vertical constant must be > 0");
  }
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw Error(ErrorCode::kInvalidArgument, "wrist offset must be >= 0");
  }
  if (norm(ext - wrist) <= kCoincidentTol) {
    throw Error(ErrorCode::kInvalidArgument, "wrist and extended point coincide");
  }
}

Triangle checked(Triangle t) {
  if (t.signed_area() == 0.0) {
    throw Error(ErrorCode::kDegenerateTriangle, "area of interest has zero area");
  }
  return t;
}

}  // namespace

Triangle build_area_of_interest(Point2 wrist, Point2 ext, double c, double eps) {
  check_aoi_args(wrist, ext, c, eps);
  return checked({{wrist.x - eps, wrist.y + eps}, {ext.x, ext.y - c}, {ext.x, ext.y + c}});
}

Triangle build_area_of_interest_perpendicular(Point2 wrist, Point2 ext, double c,
                                              double eps) {
  check_aoi_args(wrist, ext, c, eps);
  const Point2 dir = ext - wrist;
  const double len = norm(dir);
  Point2 normal{-dir.y / len, dir.x / len};
  // Keep base_top as the vertex with the smaller y (then smaller x).
  if (normal.y > 0.0 || (normal.y == 0.0 && normal.x > 0.0)) normal = -1.0 * normal;
  return checked({{wrist.x - eps, wrist.y + eps}, ext + c * normal, ext - c * normal});
}

bool point_in_triangle(Point2 p, const Triangle& t) {
  const double d1 = cross(t.base_top - t.apex, p - t.apex);
  const double d2 = cross(t.base_bottom - t.base_top, p - t.base_top);
  const double d3 = cross(t.apex - t.base_bottom, p - t.base_bottom);
  const bool has_neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
  const bool has_pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
  return !(has_neg && has_pos);
}

double wrap_to_two_pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative value can round up to exactly 2pi.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double pointing_angle(Point2 elbow, Point2 wrist) {
  const Point2 d = wrist - elbow;
  if (norm(d) <= kCoincidentTol) {
    throw Error(ErrorCode::kDegeneratePose, "elbow and wrist coincide");
  }
  return wrap_to_two_pi(std::atan2(-d.y, d.x));
}

double angular_difference(double a, double b) {
  const double d = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}

bool segment_intersects_rect(Point2 p0, Point2 p1, const Rect& r) {
  double t0 = 0.0;
  double t1 = 1.0;
  const double dx = p1.x - p0.x;
  const double dy = p1.y - p0.y;
  // Each pair (p, q) is one slab boundary: the segment is inside where p*t <= q.
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {p0.x - r.x_min, r.x_max - p0.x, p0.y - r.y_min, r.y_max - p0.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;
      continue;
    }
    const double t = q[i] / p[i];
    if (p[i] < 0.0) {
      t0 = std::max(t0, t);
    } else {
      t1 = std::min(t1, t);
    }
    if (t0 > t1) return false;
  }
  return true;
}

ScanRegion clip_triangle_to_image(const Triangle& t, int width, int height) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "frame dimensions must be positive");
  }
  const double xs[3] = {t.apex.x, t.base_top.x, t.base_bottom.x};
  const double ys[3] = {t.apex.y, t.base_top.y, t.base_bottom.y};
  const double lo_x = std::max(0.0, std::floor(*std::min_element(xs, xs + 3)));
  const double hi_x = std::min(width - 1.0, std::ceil(*std::max_element(xs, xs + 3)));
  const double lo_y = std::max(0.0, std::floor(*std::min_element(ys, ys + 3)));
  const double hi_y = std::min(height - 1.0, std::ceil(*std::max_element(ys, ys + 3)));
  if (lo_x > hi_x || lo_y > hi_y) {
    throw Error(ErrorCode::kEmptyRegion, "area of interest lies outside the frame");
  }

  // Tighten to the pixels actually covered.
  int min_x = std::numeric_limits<int>::max();
  int min_y = std::numeric_limits<int>::max();
  int max_x = -1;
  int max_y = -1;
  for (int y = static_cast<int>(lo_y); y <= static_cast<int>(hi_y); ++y) {
    for (int x = static_cast<int>(lo_x); x <= static_cast<int>(hi_x); ++x) {
      if (point_in_triangle({static_cast<double>(x), static_cast<double>(y)}, t)) {
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
      }
    }
  }
  if (max_x < 0) {
    throw Error(ErrorCode::kEmptyRegion, "area of interest covers no frame pixel");
  }
  return {{static_cast<double>(min_x), static_cast<double>(min_y),
           static_cast<double>(max_x), static_cast<double>(max_y)},
          t};
}

double circular_mean(std::span<const double> angles) {
  if (angles.empty()) throw Error(ErrorCode::kEmptyInput, "no angles");
  double s = 0.0;
  double c = 0.0;
  for (double a : angles) {
    s += std::sin(a);
    c += std::cos(a);
  }
  if (std::hypot(s, c) < 1e-12 * static_cast<double>(angles.size())) {
    return wrap_to_two_pi(angles.front());
  }
  return wrap_to_two_pi(std::atan2(s, c));
}

namespace {

std::vector<double> unwrap_near(std::span<const double> angles, double ref) {
  std::vector<double> out;
  out.reserve(angles.size());
  for (double a : angles) {
    double d = std::remainder(a - ref, kTwoPi);  // in [-pi, pi]
    out.push_back(ref + d);
  }
  return out;
}

}  // namespace

double unwrapped_mean(std::span<const double> angles) {
  const double ref = circular_mean(angles);
  const auto un = unwrap_near(angles, ref);
  double sum = 0.0;
  for (double a : un) sum += a;
  return wrap_to_two_pi(sum / static_cast<double>(un.size()));
}

double circular_variance(std::span<const double> angles) {
  if (angles.empty()) throw Error(ErrorCode::kEmptyInput, "no angles");
  if (angles.size() == 1) return 0.0;
  const auto un = unwrap_near(angles, circular_mean(angles));
  double mean = 0.0;
  for (double a : un) mean += a;
  mean /= static_cast<double>(un.size());
  double ss = 0.0;
  for (double a : un) ss += (a - mean) * (a - mean);
  return ss / static_cast<double>(un.size() - 1);
}

}  // namespace dip
