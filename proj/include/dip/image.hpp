#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dip/geometry.hpp"

namespace dip {

// 8-bit raster, row-major, interleaved channels (1 = gray, 3 = RGB).
class ImageBuffer {
 public:
  ImageBuffer() = default;
  ImageBuffer(int width, int height, int channels, std::uint8_t fill = 0);
  ImageBuffer(int width, int height, int channels, std::vector<std::uint8_t> data);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return data_.empty(); }

  std::uint8_t at(int x, int y, int ch = 0) const {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + ch];
  }
  std::uint8_t& at(int x, int y, int ch = 0) {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + ch];
  }

  std::span<const std::uint8_t> data() const { return data_; }
  std::span<std::uint8_t> data() { return data_; }

  bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> data_;
};

// Single-channel floating-point working plane.
struct Plane {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  Plane() = default;
  Plane(int w, int h, double fill = 0.0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  // Edge-replicating read.
  double clamped(int x, int y) const {
    x = x < 0 ? 0 : (x >= width ? width - 1 : x);
    y = y < 0 ? 0 : (y >= height ? height - 1 : y);
    return at(x, y);
  }
};

Plane to_plane(const ImageBuffer& gray);

// Whole-frame inclusive pixel box.
Rect full_frame(int width, int height);

// Intersection of r (rounded outward to whole pixels) with the frame.
// Returns an invalid Rect when they do not overlap.
Rect clamp_to_frame(const Rect& r, int width, int height);

// Binary NetPBM: P5 (gray) and P6 (RGB), maxval 255.
ImageBuffer decode_netpbm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_netpbm(const ImageBuffer& image);
ImageBuffer load_image(const std::filesystem::path& path);
void save_image(const ImageBuffer& image, const std::filesystem::path& path);

}  // namespace dip
