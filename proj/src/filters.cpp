#include "dip/filters.hpp"

#include <algorithm>
#include <cmath>

namespace dip {

ImageBuffer to_grayscale(const ImageBuffer& rgb) {
  if (rgb.channels() == 1) {
    throw Error(ErrorCode::kAlreadyGray, "image is already single-channel");
  }
  ImageBuffer out(rgb.width(), rgb.height(), 1);
  for (int y = 0; y < rgb.height(); ++y) {
    for (int x = 0; x < rgb.width(); ++x) {
      const double v = 0.299 * rgb.at(x, y, 0) + 0.587 * rgb.at(x, y, 1) +
                       0.114 * rgb.at(x, y, 2);
      out.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  }
  return out;
}

ImageBuffer ensure_gray(const ImageBuffer& image) {
  return image.channels() == 1 ? image : to_grayscale(image);
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sigma must be > 0");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    sum += k[i + radius];
  }
  for (double& w : k) w /= sum;
  return k;
}

Plane blur_plane(const Plane& src, double sigma) {
  const auto k = gaussian_kernel(sigma);
  const int r = static_cast<int>(k.size() / 2);
  Plane tmp(src.width, src.height);
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += k[i + r] * src.clamped(x + i, y);
      tmp.at(x, y) = acc;
    }
  }
  Plane out(src.width, src.height);
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += k[i + r] * tmp.clamped(x, y + i);
      out.at(x, y) = acc;
    }
  }
  return out;
}

ImageBuffer gaussian_blur(const ImageBuffer& image, double sigma) {
  ImageBuffer out(image.width(), image.height(), image.channels());
  for (int ch = 0; ch < image.channels(); ++ch) {
    Plane p(image.width(), image.height());
    for (int y = 0; y < image.height(); ++y) {
      for (int x = 0; x < image.width(); ++x) p.at(x, y) = image.at(x, y, ch);
    }
    const Plane b = blur_plane(p, sigma);
    for (int y = 0; y < image.height(); ++y) {
      for (int x = 0; x < image.width(); ++x) {
        out.at(x, y, ch) =
            static_cast<std::uint8_t>(std::clamp(std::lround(b.at(x, y)), 0L, 255L));
      }
    }
  }
  return out;
}

Gradients sobel_gradients(const Plane& src) {
  Gradients g{Plane(src.width, src.height), Plane(src.width, src.height),
              Plane(src.width, src.height), Plane(src.width, src.height)};
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      const double tl = src.clamped(x - 1, y - 1), tc = src.clamped(x, y - 1),
                   tr = src.clamped(x + 1, y - 1);
      const double ml = src.clamped(x - 1, y), mr = src.clamped(x + 1, y);
      const double bl = src.clamped(x - 1, y + 1), bc = src.clamped(x, y + 1),
                   br = src.clamped(x + 1, y + 1);
      const double gx = (tr + 2.0 * mr + br) - (tl + 2.0 * ml + bl);
      const double gy = (bl + 2.0 * bc + br) - (tl + 2.0 * tc + tr);
      g.gx.at(x, y) = gx;
      g.gy.at(x, y) = gy;
      g.magnitude.at(x, y) = std::hypot(gx, gy);
      g.direction.at(x, y) = std::atan2(gy, gx);
    }
  }
  return g;
}

Gradients sobel_gradients(const ImageBuffer& gray) { return sobel_gradients(to_plane(gray)); }

std::size_t EdgeMap::count() const {
  return static_cast<std::size_t>(std::count(data.begin(), data.end(), 1));
}

namespace {

// Offsets for the 8 quantized gradient directions, 45 degrees apart.
constexpr int kDirDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kDirDy[8] = {0, 1, 1, 1, 0, -1, -1, -1};

Plane non_max_suppress(const Gradients& g) {
  const int w = g.magnitude.width;
  const int h = g.magnitude.height;
  Plane out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double m = g.magnitude.at(x, y);
      if (m <= 0.0) continue;
      int bin = static_cast<int>(std::lround(g.direction.at(x, y) / (kPi / 4.0)));
      bin = ((bin % 8) + 8) % 8;
      const double ahead = g.magnitude.clamped(x + kDirDx[bin], y + kDirDy[bin]);
      const double behind = g.magnitude.clamped(x - kDirDx[bin], y - kDirDy[bin]);
      // A symmetric ridge spreads over two pixels with equal magnitude; the
      // tolerance makes the tie resolve to the pixel on the brighter side
      // regardless of summation-order rounding.
      const double tol = 1e-7 * m;
      if (m > ahead + tol && m >= behind - tol) out.at(x, y) = m;
    }
  }
  return out;
}

EdgeMap hysteresis(const Plane& nms, double low, double high) {
  const int w = nms.width;
  const int h = nms.height;
  EdgeMap edges(w, h);
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (nms.at(x, y) >= high && !edges.at(x, y)) {
        edges.set(x, y, true);
        stack.emplace_back(x, y);
        while (!stack.empty()) {
          const auto [cx, cy] = stack.back();
          stack.pop_back();
          for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
              const int nx = cx + dx;
              const int ny = cy + dy;
              if (nx < 0 || ny < 0 || nx >= w || ny >= h || edges.at(nx, ny)) continue;
              if (nms.at(nx, ny) >= low) {
                edges.set(nx, ny, true);
                stack.emplace_back(nx, ny);
              }
            }
          }
        }
      }
    }
  }
  return edges;
}

}  // namespace

CannyStages canny_stages(const ImageBuffer& gray, const CannyParams& params) {
  if (!(params.low > 0.0) || !(params.low < params.high)) {
    throw Error(ErrorCode::kInvalidArgument, "canny thresholds must satisfy 0 < low < high");
  }
  CannyStages s;
  s.gradients = sobel_gradients(blur_plane(to_plane(gray), params.sigma));
  s.suppressed = non_max_suppress(s.gradients);
  s.edges = hysteresis(s.suppressed, params.low, params.high);
  return s;
}

EdgeMap canny(const ImageBuffer& gray, const CannyParams& params) {
  return canny_stages(gray, params).edges;
}

}  // namespace dip
