#pragma once

#include <cstdint>
#include <vector>

#include "dip/image.hpp"

namespace dip {

// gray = round(0.299 R + 0.587 G + 0.114 B). Throws AlreadyGray on a
// 1-channel input.
ImageBuffer to_grayscale(const ImageBuffer& rgb);

// Gray input is returned as-is, RGB is converted.
ImageBuffer ensure_gray(const ImageBuffer& image);

// Normalized 1D Gaussian of radius ceil(3 sigma).
std::vector<double> gaussian_kernel(double sigma);

// Separable blur with edge replication.
Plane blur_plane(const Plane& src, double sigma);
ImageBuffer gaussian_blur(const ImageBuffer& image, double sigma);

struct Gradients {
  Plane gx;
  Plane gy;
  Plane magnitude;
  Plane direction;  // atan2(gy, gx)
};

// Standard (unnormalized) 3x3 Sobel with edge replication.
Gradients sobel_gradients(const Plane& src);
Gradients sobel_gradients(const ImageBuffer& gray);

struct EdgeMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // 1 = edge

  EdgeMap() = default;
  EdgeMap(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h, 0) {}

  bool at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x] != 0; }
  void set(int x, int y, bool v) { data[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
  std::size_t count() const;
};

struct CannyParams {
  double sigma = 1.4;
  double low = 40.0;
  double high = 100.0;
};

struct CannyStages {
  Gradients gradients;
  Plane suppressed;  // magnitude after non-max suppression, 0 elsewhere
  EdgeMap edges;
};

// blur -> Sobel -> non-max suppression -> hysteresis (8-connected).
// Thresholds apply to the unnormalized Sobel magnitude of 0..255 data.
EdgeMap canny(const ImageBuffer& gray, const CannyParams& params = {});
CannyStages canny_stages(const ImageBuffer& gray, const CannyParams& params = {});

}  // namespace dip
