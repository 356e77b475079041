#include "dip/json_io.hpp"

namespace dip {

using nlohmann::json;

namespace {

template <typename T>
json opt_to_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> opt_from_json(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

}  // namespace

void to_json(json& j, const Point2& p) { j = json::array({p.x, p.y}); }

void from_json(const json& j, Point2& p) {
  if (!j.is_array() || j.size() != 2) {
    throw Error(ErrorCode::kParseError, "point must be [x, y]");
  }
  p = {j[0].get<double>(), j[1].get<double>()};
}

void to_json(json& j, const Rect& r) {
  j = json{{"x_min", r.x_min}, {"y_min", r.y_min}, {"x_max", r.x_max}, {"y_max", r.y_max}};
}

void from_json(const json& j, Rect& r) {
  r = {j.at("x_min").get<double>(), j.at("y_min").get<double>(), j.at("x_max").get<double>(),
       j.at("y_max").get<double>()};
}

void to_json(json& j, const Triangle& t) {
  j = json{{"apex", t.apex}, {"base_top", t.base_top}, {"base_bottom", t.base_bottom}};
}

void from_json(const json& j, Triangle& t) {
  t = {j.at("apex").get<Point2>(), j.at("base_top").get<Point2>(),
       j.at("base_bottom").get<Point2>()};
}

void to_json(json& j, const PointingRay& r) {
  j = json{{"elbow", r.elbow}, {"wrist", r.wrist}, {"ext", r.ext}, {"sf", r.sf}};
}

void from_json(const json& j, PointingRay& r) {
  r = {j.at("elbow").get<Point2>(), j.at("wrist").get<Point2>(), j.at("ext").get<Point2>(),
       j.at("sf").get<double>()};
}

void to_json(json& j, const Detection& d) {
  j = json{{"point", d.point},
           {"bbox", d.bbox},
           {"method", std::string(to_string(d.method))},
           {"score", d.score}};
}

void from_json(const json& j, Detection& d) {
  d.point = j.at("point").get<Point2>();
  d.bbox = j.at("bbox").get<Rect>();
  d.method = detection_method_from_string(j.at("method").get<std::string>());
  d.score = j.at("score").get<double>();
}

void to_json(json& j, const FrameResult& r) {
  j = json{{"frame_id", r.frame_id},
           {"gate", std::string(to_string(r.gate))},
           {"ray", opt_to_json(r.ray)},
           {"aoi", opt_to_json(r.aoi)},
           {"detection", opt_to_json(r.detection)},
           {"elapsed_ms", r.elapsed_ms}};
}

void from_json(const json& j, FrameResult& r) {
  r.frame_id = j.at("frame_id").get<std::int64_t>();
  r.gate = gate_from_string(j.at("gate").get<std::string>());
  r.ray = opt_from_json<PointingRay>(j, "ray");
  r.aoi = opt_from_json<Triangle>(j, "aoi");
  r.detection = opt_from_json<Detection>(j, "detection");
  r.elapsed_ms = j.at("elapsed_ms").get<double>();
}

void to_json(json& j, const SessionStep& s) {
  j = json{{"frame_id", s.frame_id},
           {"phase", std::string(to_string(s.phase))},
           {"dip", opt_to_json(s.dip)},
           {"track_window", opt_to_json(s.track_window)},
           {"target_lost", s.target_lost}};
}

void from_json(const json& j, SessionStep& s) {
  s.frame_id = j.at("frame_id").get<std::int64_t>();
  s.phase = session_phase_from_string(j.at("phase").get<std::string>());
  s.dip = opt_from_json<FrameResult>(j, "dip");
  s.track_window = opt_from_json<Rect>(j, "track_window");
  s.target_lost = j.at("target_lost").get<bool>();
}

void to_json(json& j, const SessionState& s) {
  j = json{{"phase", std::string(to_string(s.phase))},
           {"confirmed_detection", opt_to_json(s.confirmed_detection)},
           {"confirmed_frame", opt_to_json(s.confirmed_frame)},
           {"frames_processed", s.frames_processed}};
}

void from_json(const json& j, SessionState& s) {
  s.phase = session_phase_from_string(j.at("phase").get<std::string>());
  s.confirmed_detection = opt_from_json<Detection>(j, "confirmed_detection");
  s.confirmed_frame = opt_from_json<std::int64_t>(j, "confirmed_frame");
  s.frames_processed = j.at("frames_processed").get<std::int64_t>();
}

void to_json(json& j, const SessionTrace& t) {
  j = json{{"steps", t.steps}, {"final_state", t.final_state}};
}

void from_json(const json& j, SessionTrace& t) {
  t.steps = j.at("steps").get<std::vector<SessionStep>>();
  t.final_state = j.at("final_state").get<SessionState>();
}

void to_json(json& j, const EvalReport& r) {
  j = json{{"n_frames", r.n_frames},
           {"n_pose_correct", r.n_pose_correct},
           {"n_contained", r.n_contained},
           {"n_intersecting", r.n_intersecting},
           {"n_vector_hit", r.n_vector_hit},
           {"n_detected", r.n_detected},
           {"pose_rate", r.pose_rate},
           {"containment_rate", r.containment_rate},
           {"intersection_rate", r.intersection_rate},
           {"vector_hit_rate", r.vector_hit_rate},
           {"detection_rate", r.detection_rate}};
}

void from_json(const json& j, EvalReport& r) {
  r.n_frames = j.at("n_frames").get<std::size_t>();
  r.n_pose_correct = j.at("n_pose_correct").get<std::size_t>();
  r.n_contained = j.at("n_contained").get<std::size_t>();
  r.n_intersecting = j.at("n_intersecting").get<std::size_t>();
  r.n_vector_hit = j.at("n_vector_hit").get<std::size_t>();
  r.n_detected = j.at("n_detected").get<std::size_t>();
  r.pose_rate = j.at("pose_rate").get<double>();
  r.containment_rate = j.at("containment_rate").get<double>();
  r.intersection_rate = j.at("intersection_rate").get<double>();
  r.vector_hit_rate = j.at("vector_hit_rate").get<double>();
  r.detection_rate = j.at("detection_rate").get<double>();
}

void to_json(json& j, const AngleRow& r) {
  j = json{{"image_id", r.image_id},     {"n", r.n},
           {"mean", r.mean},             {"dip", opt_to_json(r.dip)},
           {"difference", opt_to_json(r.difference)}, {"variance", r.variance}};
}

void from_json(const json& j, AngleRow& r) {
  r.image_id = j.at("image_id").get<std::string>();
  r.n = j.at("n").get<std::size_t>();
  r.mean = j.at("mean").get<double>();
  r.dip = opt_from_json<double>(j, "dip");
  r.difference = opt_from_json<double>(j, "difference");
  r.variance = j.at("variance").get<double>();
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

}  // namespace dip
