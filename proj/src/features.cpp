#include "dip/features.hpp"

#include <algorithm>
#include <cmath>

namespace dip {

std::vector<Contour> extract_contours(const EdgeMap& edges, std::size_t min_area) {
  const int w = edges.width;
  const int h = edges.height;
  std::vector<std::uint8_t> seen(edges.data.size(), 0);
  std::vector<Contour> out;
  std::vector<PixelPoint> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * w + x;
      if (!edges.data[idx] || seen[idx]) continue;
      Contour c;
      seen[idx] = 1;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const PixelPoint p = stack.back();
        stack.pop_back();
        c.pixels.push_back(p);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = p.x + dx;
            const int ny = p.y + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            const std::size_t n = static_cast<std::size_t>(ny) * w + nx;
            if (edges.data[n] && !seen[n]) {
              seen[n] = 1;
              stack.push_back({nx, ny});
            }
          }
        }
      }
      if (c.pixels.size() < min_area) continue;
      std::sort(c.pixels.begin(), c.pixels.end(), [](PixelPoint a, PixelPoint b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;
      });
      double sx = 0.0;
      double sy = 0.0;
      c.bbox = {static_cast<double>(c.pixels.front().x), static_cast<double>(c.pixels.front().y),
                static_cast<double>(c.pixels.front().x), static_cast<double>(c.pixels.front().y)};
      for (const auto& p : c.pixels) {
        sx += p.x;
        sy += p.y;
        c.bbox.x_min = std::min(c.bbox.x_min, static_cast<double>(p.x));
        c.bbox.x_max = std::max(c.bbox.x_max, static_cast<double>(p.x));
        c.bbox.y_min = std::min(c.bbox.y_min, static_cast<double>(p.y));
        c.bbox.y_max = std::max(c.bbox.y_max, static_cast<double>(p.y));
      }
      c.area = c.pixels.size();
      c.centroid = {sx / static_cast<double>(c.area), sy / static_cast<double>(c.area)};
      out.push_back(std::move(c));
    }
  }
  std::sort(out.begin(), out.end(), [](const Contour& a, const Contour& b) {
    if (a.area != b.area) return a.area > b.area;
    if (a.centroid.y != b.centroid.y) return a.centroid.y < b.centroid.y;
    return a.centroid.x < b.centroid.x;
  });
  return out;
}

namespace {

// Row-major scratch buffer addressed in frame coordinates over a sub-box.
struct Window {
  int x0, y0, w, h;
  std::vector<double> v;

  Window(int x0_, int y0_, int x1, int y1)
      : x0(x0_), y0(y0_), w(x1 - x0_ + 1), h(y1 - y0_ + 1),
        v(static_cast<std::size_t>(w) * h, 0.0) {}
  double& at(int x, int y) { return v[static_cast<std::size_t>(y - y0) * w + (x - x0)]; }
};

}  // namespace

Plane corner_response_in(const ImageBuffer& gray, const CornerParams& params,
                         const Rect& region) {
  if (gray.channels() != 1) {
    throw Error(ErrorCode::kInvalidArgument, "corner response needs a 1-channel image");
  }
  const int W = gray.width();
  const int H = gray.height();
  const int rx0 = static_cast<int>(region.x_min), ry0 = static_cast<int>(region.y_min);
  const int rx1 = static_cast<int>(region.x_max), ry1 = static_cast<int>(region.y_max);
  if (rx0 < 0 || ry0 < 0 || rx1 >= W || ry1 >= H || rx0 > rx1 || ry0 > ry1) {
    throw Error(ErrorCode::kInvalidArgument, "corner response region outside frame");
  }
  const auto kernel = gaussian_kernel(params.window_sigma);
  const int r = static_cast<int>(kernel.size() / 2);
  const int gx0 = std::max(0, rx0 - r), gy0 = std::max(0, ry0 - r);
  const int gx1 = std::min(W - 1, rx1 + r), gy1 = std::min(H - 1, ry1 + r);

  auto px = [&](int x, int y) {
    x = std::clamp(x, 0, W - 1);
    y = std::clamp(y, 0, H - 1);
    return static_cast<double>(gray.at(x, y));
  };
  constexpr double kScale = 1.0 / (8.0 * 255.0);
  Window ixx(gx0, gy0, gx1, gy1), iyy(gx0, gy0, gx1, gy1), ixy(gx0, gy0, gx1, gy1);
  for (int y = gy0; y <= gy1; ++y) {
    for (int x = gx0; x <= gx1; ++x) {
      const double gx = ((px(x + 1, y - 1) + 2.0 * px(x + 1, y) + px(x + 1, y + 1)) -
                         (px(x - 1, y - 1) + 2.0 * px(x - 1, y) + px(x - 1, y + 1))) *
                        kScale;
      const double gy = ((px(x - 1, y + 1) + 2.0 * px(x, y + 1) + px(x + 1, y + 1)) -
                         (px(x - 1, y - 1) + 2.0 * px(x, y - 1) + px(x + 1, y - 1))) *
                        kScale;
      ixx.at(x, y) = gx * gx;
      iyy.at(x, y) = gy * gy;
      ixy.at(x, y) = gx * gy;
    }
  }

  // Horizontal pass over all rows of the gradient box, region columns only.
  Window hxx(rx0, gy0, rx1, gy1), hyy(rx0, gy0, rx1, gy1), hxy(rx0, gy0, rx1, gy1);
  for (int y = gy0; y <= gy1; ++y) {
    for (int x = rx0; x <= rx1; ++x) {
      double axx = 0.0, ayy = 0.0, axy = 0.0;
      for (int i = -r; i <= r; ++i) {
        const int sx = std::clamp(x + i, 0, W - 1);
        const double wgt = kernel[i + r];
        axx += wgt * ixx.at(sx, y);
        ayy += wgt * iyy.at(sx, y);
        axy += wgt * ixy.at(sx, y);
      }
      hxx.at(x, y) = axx;
      hyy.at(x, y) = ayy;
      hxy.at(x, y) = axy;
    }
  }

  Plane out(W, H);
  for (int y = ry0; y <= ry1; ++y) {
    for (int x = rx0; x <= rx1; ++x) {
      double sxx = 0.0, syy = 0.0, sxy = 0.0;
      for (int i = -r; i <= r; ++i) {
        const int sy = std::clamp(y + i, 0, H - 1);
        const double wgt = kernel[i + r];
        sxx += wgt * hxx.at(x, sy);
        syy += wgt * hyy.at(x, sy);
        sxy += wgt * hxy.at(x, sy);
      }
      const double trace = sxx + syy;
      out.at(x, y) = (sxx * syy - sxy * sxy) - params.k * trace * trace;
    }
  }
  return out;
}

Plane corner_response(const ImageBuffer& gray, const CornerParams& params) {
  return corner_response_in(gray, params, full_frame(gray.width(), gray.height()));
}

PixelMask PixelMask::from(const ScanRegion& region) {
  return {region.box, [region](int x, int y) { return region.contains(x, y); }};
}

std::vector<Keypoint> detect_keypoints(const ImageBuffer& gray, const KeypointParams& params,
                                       const std::optional<PixelMask>& mask) {
  if (!(params.threshold > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "keypoint threshold must be > 0");
  }
  if (params.nms_radius < 0) {
    throw Error(ErrorCode::kInvalidArgument, "nms radius must be >= 0");
  }
  const int W = gray.width();
  const int H = gray.height();
  Rect cand = full_frame(W, H);
  if (mask) {
    cand = clamp_to_frame(mask->box, W, H);
    if (!cand.valid()) return {};
  }
  const int nr = params.nms_radius;
  const Rect support = clamp_to_frame(cand.dilated(nr), W, H);
  const Plane resp = corner_response_in(gray, params.corner, support);

  std::vector<Keypoint> out;
  for (int y = static_cast<int>(cand.y_min); y <= static_cast<int>(cand.y_max); ++y) {
    for (int x = static_cast<int>(cand.x_min); x <= static_cast<int>(cand.x_max); ++x) {
      const double v = resp.at(x, y);
      if (!(v > params.threshold)) continue;
      if (mask && !mask->contains(x, y)) continue;
      bool is_max = true;
      for (int dy = -nr; dy <= nr && is_max; ++dy) {
        const int ny = y + dy;
        if (ny < 0 || ny >= H) continue;
        for (int dx = -nr; dx <= nr; ++dx) {
          const int nx = x + dx;
          if (nx < 0 || nx >= W || (dx == 0 && dy == 0)) continue;
          const double q = resp.at(nx, ny);
          if (q > v || (q == v && (dy < 0 || (dy == 0 && dx < 0)))) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) out.push_back({{x, y}, v});
    }
  }
  std::sort(out.begin(), out.end(), [](const Keypoint& a, const Keypoint& b) {
    if (a.strength != b.strength) return a.strength > b.strength;
    if (a.location.y != b.location.y) return a.location.y < b.location.y;
    return a.location.x < b.location.x;
  });
  return out;
}

}  // namespace dip
