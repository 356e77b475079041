#include "dip/landmarks.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dip {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::kParseError, "line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& tok, std::size_t line, const char* field) {
  double v = 0.0;
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    fail(line, std::string("bad ") + field + " '" + tok + "'");
  }
  return v;
}

std::int64_t parse_id(const std::string& tok, std::size_t line) {
  std::int64_t v = 0;
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end || v < 0) fail(line, "bad frame_id '" + tok + "'");
  return v;
}

double parse_conf(const std::string& tok, std::size_t line, const char* field) {
  const double v = parse_double(tok, line, field);
  if (v < 0.0 || v > 1.0) fail(line, std::string(field) + " outside [0, 1]");
  return v;
}

}  // namespace

std::string_view to_string(Arm arm) { return arm == Arm::kRight ? "right" : "left"; }

std::vector<LandmarkRecord> parse_landmark_stream(std::istream& in) {
  std::vector<LandmarkRecord> out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::istringstream ss(raw);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty() || tok.front().starts_with('#')) continue;

    LandmarkRecord rec;
    if (tok.size() == 1 && tok[0] == "-") {
      rec.frame_id = out.empty() ? 0 : out.back().frame_id + 1;
    } else if (tok.size() == 2 && tok[1] == "-") {
      rec.frame_id = parse_id(tok[0], line_no);
    } else if (tok.size() == 8) {
      rec.frame_id = parse_id(tok[0], line_no);
      PoseLandmarks lm;
      lm.frame_id = rec.frame_id;
      if (tok[1] == "right") {
        lm.arm = Arm::kRight;
      } else if (tok[1] == "left") {
        lm.arm = Arm::kLeft;
      } else {
        fail(line_no, "arm must be 'right' or 'left'");
      }
      lm.elbow = {parse_double(tok[2], line_no, "elbow_x"), parse_double(tok[3], line_no, "elbow_y")};
      lm.elbow_conf = parse_conf(tok[4], line_no, "elbow_conf");
      lm.wrist = {parse_double(tok[5], line_no, "wrist_x"), parse_double(tok[6], line_no, "wrist_y")};
      lm.wrist_conf = parse_conf(tok[7], line_no, "wrist_conf");
      rec.pose = lm;
    } else {
      fail(line_no, "expected 8 fields or a '-' row, got " + std::to_string(tok.size()));
    }
    if (!out.empty() && rec.frame_id <= out.back().frame_id) {
      fail(line_no, "frame ids must be strictly increasing");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<LandmarkRecord> load_landmarks(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return parse_landmark_stream(in);
}

std::string format_landmark_record(const LandmarkRecord& rec) {
  std::ostringstream ss;
  ss.precision(17);
  ss << rec.frame_id;
  if (!rec.pose) {
    ss << " -";
  } else {
    const auto& p = *rec.pose;
    ss << ' ' << to_string(p.arm) << ' ' << p.elbow.x << ' ' << p.elbow.y << ' ' << p.elbow_conf
       << ' ' << p.wrist.x << ' ' << p.wrist.y << ' ' << p.wrist_conf;
  }
  return ss.str();
}

std::string frame_filename(std::int64_t frame_id, int channels) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "frame_%06lld.%s", static_cast<long long>(frame_id),
                channels == 1 ? "pgm" : "ppm");
  return buf;
}

std::optional<std::filesystem::path> find_frame(const std::filesystem::path& dir,
                                                std::int64_t frame_id) {
  for (int ch : {3, 1}) {
    auto p = dir / frame_filename(frame_id, ch);
    if (std::filesystem::exists(p)) return p;
  }
  return std::nullopt;
}

}  // namespace dip
