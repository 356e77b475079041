#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "dip/evaluation.hpp"
#include "dip/image.hpp"
#include "dip/pipeline.hpp"

namespace dip {

using Color = std::array<std::uint8_t, 3>;

// Paint helpers work on gray (first value used) and RGB images alike.
// Pixel boxes are inclusive and clipped to the frame.
void fill_rect(ImageBuffer& img, const Rect& pixel_box, const Color& color);
// Pixels whose centre lies within radius of center.
void fill_disk(ImageBuffer& img, Point2 center, double radius, const Color& color);
// Adds uniform integer noise in [-amplitude, amplitude] with saturation.
void add_noise(ImageBuffer& img, std::mt19937_64& rng, int amplitude);

// Low-saturation banded texture that produces no Canny edges on its own.
ImageBuffer textured_background(int width, int height, int channels, std::mt19937_64& rng);

struct CorpusConfig {
  int width = 640;
  int height = 480;
  DipConfig dip;
  double no_pose_fraction = 0.05;
  double min_forearm = 20.0;
  double max_forearm = 40.0;
  double max_tilt_deg = 40.0;  // pointing direction off horizontal
  double min_object = 16.0;
  double max_object = 36.0;
  int distractors = 2;  // planted outside the AOI
};

struct SyntheticFrame {
  ImageBuffer image;
  std::optional<PoseLandmarks> landmarks;
  GroundTruth truth;
  Point2 object_center;
  bool object_is_disk = false;
};

// One RGB frame with a pointing pose and an object planted inside the AOI at
// a random angular offset within the AOI's span and a random range along the
// ray. Without a pose the object is still planted and truth says
// pose_correct = false.
SyntheticFrame make_pointing_frame(std::mt19937_64& rng, const CorpusConfig& cfg,
                                   std::int64_t frame_id);

std::vector<SyntheticFrame> make_pointing_corpus(std::size_t n, const CorpusConfig& cfg,
                                                 std::uint64_t seed);

}  // namespace dip
