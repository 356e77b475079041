#include "dip/synthetic.hpp"

#include <algorithm>
#include <cmath>

namespace dip {

namespace {

constexpr Color kPalette[] = {
    {230, 80, 60}, {240, 200, 40}, {60, 200, 230}, {200, 90, 220}, {90, 230, 90},
};

void put(ImageBuffer& img, int x, int y, const Color& color) {
  for (int ch = 0; ch < img.channels(); ++ch) img.at(x, y, ch) = color[ch];
}

Rect pixel_square(Point2 center, int side) {
  const double x0 = std::round(center.x - (side - 1) / 2.0);
  const double y0 = std::round(center.y - (side - 1) / 2.0);
  return {x0, y0, x0 + side - 1, y0 + side - 1};
}

bool inside_frame(const Rect& r, int w, int h, double margin) {
  return r.x_min >= margin && r.y_min >= margin && r.x_max <= w - 1 - margin &&
         r.y_max <= h - 1 - margin;
}

bool overlaps(const Rect& a, const Rect& b) {
  return a.x_min <= b.x_max && b.x_min <= a.x_max && a.y_min <= b.y_max && b.y_min <= a.y_max;
}

}  // namespace

void fill_rect(ImageBuffer& img, const Rect& pixel_box, const Color& color) {
  const Rect r = clamp_to_frame(pixel_box, img.width(), img.height());
  if (!r.valid()) return;
  for (int y = static_cast<int>(r.y_min); y <= static_cast<int>(r.y_max); ++y) {
    for (int x = static_cast<int>(r.x_min); x <= static_cast<int>(r.x_max); ++x) {
      put(img, x, y, color);
    }
  }
}

void fill_disk(ImageBuffer& img, Point2 center, double radius, const Color& color) {
  const int x0 = std::max(0, static_cast<int>(std::floor(center.x - radius)));
  const int x1 = std::min(img.width() - 1, static_cast<int>(std::ceil(center.x + radius)));
  const int y0 = std::max(0, static_cast<int>(std::floor(center.y - radius)));
  const int y1 = std::min(img.height() - 1, static_cast<int>(std::ceil(center.y + radius)));
  const double r2 = radius * radius;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double dx = x - center.x;
      const double dy = y - center.y;
      if (dx * dx + dy * dy <= r2) put(img, x, y, color);
    }
  }
}

void add_noise(ImageBuffer& img, std::mt19937_64& rng, int amplitude) {
  std::uniform_int_distribution<int> noise(-amplitude, amplitude);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(std::clamp(v + noise(rng), 0, 255));
}

ImageBuffer textured_background(int width, int height, int channels, std::mt19937_64& rng) {
  ImageBuffer img(width, height, channels);
  std::uniform_int_distribution<int> noise(-6, 6);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const int band = ((x / 80) + (y / 60)) % 2 == 0 ? 50 : 62;
      const auto v = static_cast<std::uint8_t>(std::clamp(band + noise(rng), 0, 255));
      for (int ch = 0; ch < channels; ++ch) img.at(x, y, ch) = v;
    }
  }
  return img;
}

SyntheticFrame make_pointing_frame(std::mt19937_64& rng, const CorpusConfig& cfg,
                                   std::int64_t frame_id) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  SyntheticFrame f;
  f.image = textured_background(cfg.width, cfg.height, 3, rng);
  const bool has_pose = unit(rng) >= cfg.no_pose_fraction;

  PoseLandmarks lm;
  Triangle aoi;
  Rect box;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 10000) throw Error(ErrorCode::kInvalidArgument, "cannot place object");
    const bool leftward = unit(rng) < 0.5;
    const double tilt = uniform(-cfg.max_tilt_deg, cfg.max_tilt_deg) * kPi / 180.0;
    const double phi = (leftward ? kPi : 0.0) + tilt;
    const Point2 u{std::cos(phi), -std::sin(phi)};
    const double len = uniform(cfg.min_forearm, cfg.max_forearm);
    const Point2 wrist{uniform(40.0, cfg.width - 40.0), uniform(40.0, cfg.height - 40.0)};
    const Point2 elbow = wrist - len * u;
    const Point2 ext = wrist + cfg.dip.sf * len * u;
    aoi = build_area_of_interest(wrist, ext, cfg.dip.c, cfg.dip.eps);

    // A point on the AOI base sets the angular offset; d the range.
    const Point2 base{ext.x, ext.y + uniform(-1.0, 1.0) * cfg.dip.c};
    const double d = uniform(0.3, 0.9);
    const Point2 center = wrist + d * (base - wrist);
    const int side = static_cast<int>(std::round(uniform(cfg.min_object, cfg.max_object)));
    box = pixel_square(center, side);
    if (!inside_frame(box, cfg.width, cfg.height, 2.0)) continue;
    if (!point_in_triangle(box.center(), aoi)) continue;

    lm = {frame_id, leftward ? Arm::kLeft : Arm::kRight, elbow, 0.9, wrist, 0.9};
    f.object_is_disk = unit(rng) < 0.5;
    f.object_center = box.center();
    const Color color = kPalette[static_cast<std::size_t>(unit(rng) * std::size(kPalette)) %
                                 std::size(kPalette)];
    if (f.object_is_disk) {
      fill_disk(f.image, f.object_center, side / 2.0, color);
    } else {
      fill_rect(f.image, box, color);
    }
    break;
  }

  std::vector<Rect> placed{box};
  for (int i = 0; i < cfg.distractors; ++i) {
    for (int attempt = 0; attempt < 200; ++attempt) {
      const int side = static_cast<int>(std::round(uniform(cfg.min_object, cfg.max_object)));
      const Rect r = pixel_square({uniform(0.0, cfg.width - 1.0), uniform(0.0, cfg.height - 1.0)},
                                  side);
      if (!inside_frame(r, cfg.width, cfg.height, 2.0)) continue;
      if (triangle_intersects_rect(aoi, r.dilated(8.0))) continue;
      if (std::any_of(placed.begin(), placed.end(),
                      [&](const Rect& p) { return overlaps(p.dilated(8.0), r); })) {
        continue;
      }
      fill_rect(f.image, r, kPalette[(i + 2) % std::size(kPalette)]);
      placed.push_back(r);
      break;
    }
  }

  if (has_pose) f.landmarks = lm;
  f.truth = {frame_id, box, has_pose};
  return f;
}

std::vector<SyntheticFrame> make_pointing_corpus(std::size_t n, const CorpusConfig& cfg,
                                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<SyntheticFrame> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(make_pointing_frame(rng, cfg, static_cast<std::int64_t>(i)));
  }
  return out;
}

}  // namespace dip
