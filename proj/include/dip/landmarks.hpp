#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dip/pipeline.hpp"

namespace dip {

// One line of the landmark stream:
//   frame_id arm elbow_x elbow_y elbow_conf wrist_x wrist_y wrist_conf
//   frame_id -        (no pose in this frame)
//   -                 (no pose; frame_id = previous + 1, or 0 first)
// Blank lines and lines starting with '#' are skipped.
struct LandmarkRecord {
  std::int64_t frame_id = 0;
  std::optional<PoseLandmarks> pose;
};

std::vector<LandmarkRecord> parse_landmark_stream(std::istream& in);
std::vector<LandmarkRecord> load_landmarks(const std::filesystem::path& path);
std::string format_landmark_record(const LandmarkRecord& rec);

std::string_view to_string(Arm arm);

// frame_%06d.ppm for RGB, frame_%06d.pgm for gray.
std::string frame_filename(std::int64_t frame_id, int channels);

// Existing frame file for an id (.ppm preferred over .pgm), if any.
std::optional<std::filesystem::path> find_frame(const std::filesystem::path& dir,
                                                std::int64_t frame_id);

}  // namespace dip
