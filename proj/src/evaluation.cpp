#include "dip/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace dip {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::kParseError, "line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& s, std::size_t line, const char* field) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    fail(line, std::string("bad ") + field + " '" + s + "'");
  }
  return v;
}

template <typename Fn>
void for_each_row(std::istream& in, const std::vector<std::string>& header, Fn&& fn) {
  std::string raw;
  std::size_t line = 0;
  bool saw_header = false;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.find_first_not_of(" \t") == std::string::npos) continue;
    auto cells = split_csv(raw);
    if (!saw_header) {
      if (cells != header) {
        std::string want;
        for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
        fail(line, "expected header '" + want + "'");
      }
      saw_header = true;
      continue;
    }
    if (cells.size() != header.size()) {
      fail(line, "expected " + std::to_string(header.size()) + " columns, got " +
                     std::to_string(cells.size()));
    }
    fn(cells, line);
  }
  if (!saw_header) fail(line, "missing header");
}

}  // namespace

std::vector<AnnotationSet> parse_annotations(std::istream& in) {
  std::vector<AnnotationSet> sets;
  std::unordered_map<std::string, std::size_t> index;
  for_each_row(in, {"image_id", "annotator_id", "angle"},
               [&](const std::vector<std::string>& c, std::size_t line) {
                 if (c[0].empty()) fail(line, "empty image_id");
                 if (c[1].empty()) fail(line, "empty annotator_id");
                 const double angle = to_double(c[2], line, "angle");
                 if (angle < 0.0 || angle >= kTwoPi) fail(line, "angle outside [0, 2pi)");
                 auto [it, fresh] = index.try_emplace(c[0], sets.size());
                 if (fresh) sets.push_back({c[0], {}, {}, std::nullopt});
                 AnnotationSet& set = sets[it->second];
                 if (c[1] == kDipAnnotator) {
                   if (set.dip_angle) fail(line, "second dip angle for image " + c[0]);
                   set.dip_angle = angle;
                 } else {
                   set.annotators.push_back(c[1]);
                   set.angles.push_back(angle);
                 }
               });
  return sets;
}

std::vector<AnnotationSet> load_annotations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return parse_annotations(in);
}

std::vector<AngleRow> angle_report(std::span<const AnnotationSet> sets) {
  std::vector<AngleRow> rows;
  for (const auto& s : sets) {
    if (s.angles.empty()) {
      throw Error(ErrorCode::kEmptyInput, "image " + s.image_id + " has no human annotations");
    }
    AngleRow r;
    r.image_id = s.image_id;
    r.n = s.angles.size();
    r.mean = unwrapped_mean(s.angles);
    r.variance = circular_variance(s.angles);
    r.dip = s.dip_angle;
    if (s.dip_angle) r.difference = angular_difference(r.mean, *s.dip_angle);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<GroundTruth> parse_ground_truth(std::istream& in) {
  std::vector<GroundTruth> out;
  for_each_row(in, {"frame_id", "x_min", "y_min", "x_max", "y_max", "pose_correct"},
               [&](const std::vector<std::string>& c, std::size_t line) {
                 GroundTruth g;
                 std::int64_t id = 0;
                 const auto [ptr, ec] = std::from_chars(c[0].data(), c[0].data() + c[0].size(), id);
                 if (c[0].empty() || ec != std::errc() || ptr != c[0].data() + c[0].size() || id < 0) {
                   fail(line, "bad frame_id '" + c[0] + "'");
                 }
                 g.frame_id = id;
                 g.object_box = {to_double(c[1], line, "x_min"), to_double(c[2], line, "y_min"),
                                 to_double(c[3], line, "x_max"), to_double(c[4], line, "y_max")};
                 if (!g.object_box.valid()) fail(line, "box has min > max");
                 if (g.object_box.x_min < 0.0 || g.object_box.y_min < 0.0) {
                   fail(line, "box outside frame");
                 }
                 const std::string& b = c[5];
                 if (b == "true" || b == "1") {
                   g.pose_correct = true;
                 } else if (b == "false" || b == "0") {
                   g.pose_correct = false;
                 } else {
                   fail(line, "pose_correct must be true/false/1/0, got '" + b + "'");
                 }
                 out.push_back(g);
               });
  return out;
}

std::vector<GroundTruth> load_ground_truth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return parse_ground_truth(in);
}

void EvalReport::finalize_rates() {
  auto ratio = [](std::size_t a, std::size_t b) {
    return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b);
  };
  pose_rate = ratio(n_pose_correct, n_frames);
  containment_rate = ratio(n_contained, n_pose_correct);
  intersection_rate = ratio(n_intersecting, n_pose_correct);
  vector_hit_rate = ratio(n_vector_hit, n_pose_correct);
  detection_rate = ratio(n_detected, n_contained);
}

bool triangle_intersects_rect(const Triangle& t, const Rect& r) {
  const Point2 corners[4] = {{r.x_min, r.y_min}, {r.x_max, r.y_min}, {r.x_max, r.y_max},
                             {r.x_min, r.y_max}};
  for (const auto& p : corners) {
    if (point_in_triangle(p, t)) return true;
  }
  return segment_intersects_rect(t.apex, t.base_top, r) ||
         segment_intersects_rect(t.base_top, t.base_bottom, r) ||
         segment_intersects_rect(t.base_bottom, t.apex, r);
}

EvalReport containment_stats(std::span<const FrameResult> results,
                             std::span<const GroundTruth> truth, const EvalOptions& opts) {
  std::map<std::int64_t, const FrameResult*> by_id;
  for (const auto& r : results) {
    if (!by_id.emplace(r.frame_id, &r).second) {
      throw Error(ErrorCode::kJoinMismatch, "duplicate result frame " + std::to_string(r.frame_id));
    }
  }
  std::map<std::int64_t, const GroundTruth*> truth_by_id;
  for (const auto& g : truth) {
    if (!truth_by_id.emplace(g.frame_id, &g).second) {
      throw Error(ErrorCode::kJoinMismatch, "duplicate truth frame " + std::to_string(g.frame_id));
    }
    if (!by_id.contains(g.frame_id)) {
      throw Error(ErrorCode::kJoinMismatch, "no result for frame " + std::to_string(g.frame_id));
    }
  }
  for (const auto& [id, r] : by_id) {
    if (!truth_by_id.contains(id)) {
      throw Error(ErrorCode::kJoinMismatch, "no truth for frame " + std::to_string(id));
    }
  }

  EvalReport rep;
  for (const auto& [id, g] : truth_by_id) {
    if (opts.frame_width && g->object_box.x_max > *opts.frame_width - 1) {
      throw Error(ErrorCode::kInvalidArgument, "truth box outside frame " + std::to_string(id));
    }
    if (opts.frame_height && g->object_box.y_max > *opts.frame_height - 1) {
      throw Error(ErrorCode::kInvalidArgument, "truth box outside frame " + std::to_string(id));
    }
    ++rep.n_frames;
    if (!g->pose_correct) continue;
    ++rep.n_pose_correct;
    const FrameResult& r = *by_id.at(id);
    if (r.ray && segment_intersects_rect(r.ray->wrist, r.ray->ext, g->object_box)) {
      ++rep.n_vector_hit;
    }
    if (!r.aoi) continue;
    if (triangle_intersects_rect(*r.aoi, g->object_box)) ++rep.n_intersecting;
    if (!point_in_triangle(g->object_box.center(), *r.aoi)) continue;
    ++rep.n_contained;
    if (r.detection &&
        g->object_box.dilated(opts.detection_tolerance).contains(r.detection->point)) {
      ++rep.n_detected;
    }
  }
  rep.finalize_rates();
  return rep;
}

void print_angle_table(std::ostream& out, std::span<const AngleRow> rows) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-10s %4s %12s %12s %12s %10s\n", "image", "n", "mean(rad)",
                "dip(rad)", "diff(rad)", "variance");
  out << buf;
  for (const auto& r : rows) {
    char dip_s[32], diff_s[32];
    std::snprintf(dip_s, sizeof(dip_s), "%s", "---");
    std::snprintf(diff_s, sizeof(diff_s), "%s", "---");
    if (r.dip) std::snprintf(dip_s, sizeof(dip_s), "%.3f", *r.dip);
    if (r.difference) std::snprintf(diff_s, sizeof(diff_s), "%.3f", *r.difference);
    std::snprintf(buf, sizeof(buf), "%-10s %4zu %12.3f %12s %12s %10.3f\n", r.image_id.c_str(),
                  r.n, r.mean, dip_s, diff_s, r.variance);
    out << buf;
  }
}

void print_eval_report(std::ostream& out, const EvalReport& r) {
  char buf[256];
  auto line = [&](const char* name, std::size_t num, std::size_t den, double rate) {
    std::snprintf(buf, sizeof(buf), "%-22s %6zu / %-6zu %7.2f%%\n", name, num, den, 100.0 * rate);
    out << buf;
  };
  line("pose correct", r.n_pose_correct, r.n_frames, r.pose_rate);
  line("object in AOI", r.n_contained, r.n_pose_correct, r.containment_rate);
  line("object touches AOI", r.n_intersecting, r.n_pose_correct, r.intersection_rate);
  line("ray hits object", r.n_vector_hit, r.n_pose_correct, r.vector_hit_rate);
  line("object detected", r.n_detected, r.n_contained, r.detection_rate);
}

}  // namespace dip
