#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dip/cli.hpp"
#include "dip/features.hpp"
#include "dip/image.hpp"
#include "dip/synthetic.hpp"

namespace dip::test {

// Four quadrants meeting between pixels (jx - 1, jx) and (jy - 1, jy):
// top-left and bottom-right at lo, the other two at hi.
inline ImageBuffer quadrant_junction(int w, int h, int jx, int jy, std::uint8_t lo = 40,
                                     std::uint8_t hi = 200) {
  ImageBuffer img(w, h, 1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) img.at(x, y) = ((x < jx) == (y < jy)) ? lo : hi;
  }
  return img;
}

// Intensity flips across x = a, x = b and y = jy: two junctions only.
inline ImageBuffer two_junctions(int w, int h, int a, int b, int jy) {
  ImageBuffer img(w, h, 1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int s = (x < a ? 1 : 0) + (x < b ? 1 : 0) + (y < jy ? 1 : 0);
      img.at(x, y) = s % 2 == 0 ? 40 : 200;
    }
  }
  return img;
}

// Exhaustive reference for the strongest keypoint inside a scan region:
// full-frame response, Chebyshev local-max test against every in-frame
// neighbour, earlier raster position winning equal responses.
inline std::optional<Keypoint> keypoint_oracle(const ImageBuffer& gray, const ScanRegion& region,
                                               const KeypointParams& params) {
  const Plane r = corner_response(gray, params.corner);
  const int nr = params.nms_radius;
  std::optional<Keypoint> best;
  for (int y = 0; y < r.height; ++y) {
    for (int x = 0; x < r.width; ++x) {
      const double v = r.at(x, y);
      if (!region.contains(x, y) || !(v > params.threshold)) continue;
      bool local_max = true;
      for (int ny = std::max(0, y - nr); ny <= std::min(r.height - 1, y + nr); ++ny) {
        for (int nx = std::max(0, x - nr); nx <= std::min(r.width - 1, x + nr); ++nx) {
          const bool earlier = ny < y || (ny == y && nx < x);
          if (r.at(nx, ny) > v || (earlier && r.at(nx, ny) == v)) local_max = false;
        }
      }
      if (local_max && (!best || v > best->strength)) best = Keypoint{{x, y}, v};
    }
  }
  return best;
}

// 160x120 gray scene with a few rectangles and disks plus a random pointing
// pair (wrist, ext) that is never vertical.
struct RandomScene {
  ImageBuffer image;
  Point2 wrist;
  Point2 ext;
};

inline RandomScene random_scene(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ux(0, 160), uy(0, 120), off(-60, 60);
  RandomScene s{textured_background(160, 120, 1, rng), {}, {}};
  std::uniform_int_distribution<int> n_shapes(0, 5), val(0, 255);
  for (int k = n_shapes(rng); k > 0; --k) {
    const double x = std::floor(ux(rng)), y = std::floor(uy(rng));
    const auto v = static_cast<std::uint8_t>(val(rng));
    if (k % 2) {
      fill_rect(s.image, {x, y, x + 4 + k * 3, y + 3 + k * 2}, {v, v, v});
    } else {
      fill_disk(s.image, {x, y}, 3 + k, {v, v, v});
    }
  }
  add_noise(s.image, rng, 3);
  do {
    s.wrist = {ux(rng), uy(rng)};
    s.ext = {s.wrist.x + 3 * off(rng), s.wrist.y + off(rng)};
  } while (s.wrist.x == s.ext.x);
  return s;
}

inline ImageBuffer square_scene(int w, int h, const Rect& box, std::uint8_t value = 255,
                                std::uint8_t background = 0) {
  ImageBuffer img(w, h, 1, background);
  fill_rect(img, box, {value, value, value});
  return img;
}

// Gray RGB frame, pose from frame pose_from, a red square drifting right by
// 3 px per frame from object_from on. The square sits inside the AOI.
struct StreamFrame {
  ImageBuffer image;
  std::optional<PoseLandmarks> pose;
};

inline StreamFrame stream_frame(std::int64_t i, std::int64_t pose_from = 4,
                                std::int64_t object_from = 7) {
  StreamFrame f{ImageBuffer(640, 480, 3, 20), std::nullopt};
  if (i >= pose_from) {
    PoseLandmarks lm;
    lm.frame_id = i;
    lm.elbow = {150, 250};
    lm.wrist = {180, 245};
    lm.elbow_conf = lm.wrist_conf = 0.9;
    f.pose = lm;
  }
  if (i >= object_from) {
    const double x = 400.0 + 3.0 * static_cast<double>(i - object_from);
    fill_rect(f.image, {x, 230, x + 29, 259}, {255, 40, 40});
  }
  return f;
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("dip_test_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

inline CliRun run_cli_args(std::vector<std::string> args) {
  args.insert(args.begin(), "dip");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

inline std::filesystem::path data_dir() { return DIP_DATA_DIR; }

}  // namespace dip::test
