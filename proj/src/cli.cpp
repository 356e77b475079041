#include "dip/cli.hpp"

#include <CLI11/CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <regex>
#include <set>

#include "dip/json_io.hpp"
#include "dip/landmarks.hpp"
#include "dip/synthetic.hpp"

namespace dip {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Setter = std::function<void(CliConfig&, const std::string&, const std::string&)>;

struct KeyEntry {
  ConfigKey key;
  Setter set;
};

template <typename Fn>
Setter as_double(Fn fn) {
  return [fn](CliConfig& c, const std::string& k, const std::string& v) { fn(c) = kv_double(k, v); };
}

template <typename Fn>
Setter as_int(Fn fn) {
  return [fn](CliConfig& c, const std::string& k, const std::string& v) {
    using T = std::remove_reference_t<decltype(fn(c))>;
    const auto n = kv_int(k, v);
    if (std::is_unsigned_v<T> && n < 0) throw Error(ErrorCode::kParseError, k + ": must be >= 0");
    fn(c) = static_cast<T>(n);
  };
}

template <typename Fn>
Setter as_bool(Fn fn) {
  return [fn](CliConfig& c, const std::string& k, const std::string& v) { fn(c) = kv_bool(k, v); };
}

const std::vector<KeyEntry>& key_table() {
  static const std::vector<KeyEntry> table = {
      {{"sf", "pointing extension scale factor"},
       as_double([](CliConfig& c) -> double& { return c.session.dip.sf; })},
      {{"c", "AOI base half-height (px)"},
       as_double([](CliConfig& c) -> double& { return c.session.dip.c; })},
      {{"eps", "wrist vertex offset (px)"},
       as_double([](CliConfig& c) -> double& { return c.session.dip.eps; })},
      {{"min_conf", "minimum elbow/wrist confidence"},
       as_double([](CliConfig& c) -> double& { return c.session.dip.min_conf; })},
      {{"min_forearm", "minimum forearm length (px)"},
       as_double([](CliConfig& c) -> double& { return c.session.dip.min_forearm; })},
      {{"method", "keypoint | contour | contour_then_keypoint"},
       [](CliConfig& c, const std::string&, const std::string& v) {
         try {
           c.session.dip.method = detection_method_from_string(v);
         } catch (const Error& e) {
           throw Error(ErrorCode::kParseError, std::string("method: ") + e.what());
         }
       }},
      {{"perpendicular_mode", "offset the AOI base perpendicular to the ray"},
       as_bool([](CliConfig& c) -> bool& { return c.session.dip.perpendicular_mode; })},
      {{"canny_sigma", "Gaussian blur sigma before Canny"},
       as_double([](CliConfig& c) -> double& { return c.session.dip.detector.canny.sigma; })},
      {{"canny_low", "Canny low threshold (Sobel magnitude)"},
       as_double([](CliConfig& c) -> double& { return c.session.dip.detector.canny.low; })},
      {{"canny_high", "Canny high threshold (Sobel magnitude)"},
       as_double([](CliConfig& c) -> double& { return c.session.dip.detector.canny.high; })},
      {{"min_area", "minimum contour area (px)"},
       as_int([](CliConfig& c) -> std::size_t& { return c.session.dip.detector.min_area; })},
      {{"harris_k", "Harris k"},
       as_double([](CliConfig& c) -> double& { return c.session.dip.detector.keypoints.corner.k; })},
      {{"harris_sigma", "Harris window sigma"},
       as_double([](CliConfig& c) -> double& {
         return c.session.dip.detector.keypoints.corner.window_sigma;
       })},
      {{"keypoint_threshold", "minimum keypoint strength"},
       as_double([](CliConfig& c) -> double& { return c.session.dip.detector.keypoints.threshold; })},
      {{"nms_radius", "keypoint suppression radius (px)"},
       as_int([](CliConfig& c) -> int& { return c.session.dip.detector.keypoints.nms_radius; })},
      {{"seed_box", "tracker seed box side for keypoint detections (px)"},
       as_double([](CliConfig& c) -> double& { return c.session.dip.detector.seed_box; })},
      {{"confirm_frames", "consecutive detections needed to confirm"},
       as_int([](CliConfig& c) -> int& { return c.session.confirm_frames; })},
      {{"tracking", "track the confirmed object"},
       as_bool([](CliConfig& c) -> bool& { return c.session.tracking; })},
      {{"restart_on_lost", "re-enter detection when the target is lost"},
       as_bool([](CliConfig& c) -> bool& { return c.session.restart_on_lost; })},
      {{"tracker_bins", "hue histogram bins"},
       as_int([](CliConfig& c) -> int& { return c.session.tracker.bins; })},
      {{"lost_threshold", "mean back projection below which the target is lost"},
       as_double([](CliConfig& c) -> double& { return c.session.tracker.lost_threshold; })},
      {{"tracker_max_iterations", "mean-shift iterations per frame"},
       as_int([](CliConfig& c) -> int& { return c.session.tracker.max_iterations; })},
      {{"tracker_min_side", "minimum tracker window side (px)"},
       as_int([](CliConfig& c) -> int& { return c.session.tracker.min_side; })},
      {{"yaw_kp", "yaw proportional gain"},
       as_double([](CliConfig& c) -> double& { return c.sim.pids.yaw.kp; })},
      {{"yaw_ki", "yaw integral gain"},
       as_double([](CliConfig& c) -> double& { return c.sim.pids.yaw.ki; })},
      {{"yaw_kd", "yaw derivative gain"},
       as_double([](CliConfig& c) -> double& { return c.sim.pids.yaw.kd; })},
      {{"pitch_kp", "pitch proportional gain"},
       as_double([](CliConfig& c) -> double& { return c.sim.pids.pitch.kp; })},
      {{"pitch_ki", "pitch integral gain"},
       as_double([](CliConfig& c) -> double& { return c.sim.pids.pitch.ki; })},
      {{"pitch_kd", "pitch derivative gain"},
       as_double([](CliConfig& c) -> double& { return c.sim.pids.pitch.kd; })},
      {{"surge_kp", "surge proportional gain"},
       as_double([](CliConfig& c) -> double& { return c.sim.pids.surge.kp; })},
      {{"surge_ki", "surge integral gain"},
       as_double([](CliConfig& c) -> double& { return c.sim.pids.surge.ki; })},
      {{"surge_kd", "surge derivative gain"},
       as_double([](CliConfig& c) -> double& { return c.sim.pids.surge.kd; })},
      {{"output_limit", "PID output saturation"},
       [](CliConfig& c, const std::string& k, const std::string& v) {
         const double lim = kv_double(k, v);
         c.sim.pids.yaw.output_limit = c.sim.pids.pitch.output_limit =
             c.sim.pids.surge.output_limit = lim;
       }},
      {{"target_ratio", "target bbox area / frame area"},
       as_double([](CliConfig& c) -> double& { return c.sim.target_ratio; })},
      {{"dt", "control period (s)"},
       as_double([](CliConfig& c) -> double& { return c.sim.dt; })},
      {{"v_max", "surge speed at full command (m/s)"},
       as_double([](CliConfig& c) -> double& { return c.sim.v_max; })},
      {{"omega_max", "yaw rate at full command (rad/s)"},
       as_double([](CliConfig& c) -> double& { return c.sim.omega_max; })},
      {{"vz_max", "heave speed at full command (m/s)"},
       as_double([](CliConfig& c) -> double& { return c.sim.vz_max; })},
      {{"converge_tolerance", "relative ratio band counted as converged"},
       as_double([](CliConfig& c) -> double& { return c.sim.converge_tolerance; })},
      {{"converge_steps", "consecutive in-band steps for convergence"},
       as_int([](CliConfig& c) -> int& { return c.sim.converge_steps; })},
      {{"detection_tolerance", "truth box dilation for detection hits (px)"},
       as_double([](CliConfig& c) -> double& { return c.eval.detection_tolerance; })},
  };
  return table;
}

void require(bool ok, const std::string& key, const char* rule) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, key + " must be " + rule);
}

void validate_pid(const PidState& p, const std::string& axis) {
  require(p.kp >= 0.0 && std::isfinite(p.kp), axis + "_kp", ">= 0");
  require(p.ki >= 0.0 && std::isfinite(p.ki), axis + "_ki", ">= 0");
  require(p.kd >= 0.0 && std::isfinite(p.kd), axis + "_kd", ">= 0");
}

}  // namespace

void CliConfig::validate() const {
  session.dip.validate();
  require(session.confirm_frames >= 1, "confirm_frames", ">= 1");
  require(session.tracker.bins >= 1 && session.tracker.bins <= 360, "tracker_bins", "in [1, 360]");
  require(session.tracker.lost_threshold >= 0.0 && session.tracker.lost_threshold <= 1.0,
          "lost_threshold", "in [0, 1]");
  require(session.tracker.max_iterations >= 1, "tracker_max_iterations", ">= 1");
  require(session.tracker.min_side >= 1, "tracker_min_side", ">= 1");
  validate_pid(sim.pids.yaw, "yaw");
  validate_pid(sim.pids.pitch, "pitch");
  validate_pid(sim.pids.surge, "surge");
  require(sim.pids.yaw.output_limit > 0.0, "output_limit", "> 0");
  require(sim.target_ratio > 0.0 && sim.target_ratio < 1.0, "target_ratio", "in (0, 1)");
  require(sim.dt > 0.0, "dt", "> 0");
  require(sim.v_max > 0.0, "v_max", "> 0");
  require(sim.omega_max > 0.0, "omega_max", "> 0");
  require(sim.vz_max >= 0.0, "vz_max", ">= 0");
  require(sim.converge_tolerance > 0.0, "converge_tolerance", "> 0");
  require(sim.converge_steps >= 1, "converge_steps", ">= 1");
  require(eval.detection_tolerance >= 0.0, "detection_tolerance", ">= 0");
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const auto& e : key_table()) out.push_back(e.key);
    return out;
  }();
  return keys;
}

void apply_config_value(CliConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& e : key_table()) {
    if (key == e.key.name) {
      e.set(cfg, key, value);
      return;
    }
  }
  throw Error(ErrorCode::kParseError, "unknown config key '" + key + "'");
}

CliConfig resolve_config(const std::optional<fs::path>& file,
                         const std::vector<std::pair<std::string, std::string>>& overrides) {
  CliConfig cfg;
  if (file) {
    for (const auto& kv : load_key_values(*file)) {
      try {
        apply_config_value(cfg, kv.key, kv.value);
      } catch (const Error& e) {
        throw Error(e.code(), file->string() + " line " + std::to_string(kv.line) + ": " + e.what());
      }
    }
  }
  for (const auto& [k, v] : overrides) apply_config_value(cfg, k, v);
  cfg.validate();
  cfg.sim.dip = cfg.session.dip;
  cfg.sim.tracker = cfg.session.tracker;
  return cfg;
}

namespace {

struct ConfigFlags {
  std::string config_path;
  std::map<std::string, std::string> values;
  CLI::App* app = nullptr;

  void attach(CLI::App* sub) {
    app = sub;
    sub->add_option("--config", config_path, "key = value config file (default: $DIP_CONFIG)");
    for (const auto& k : config_keys()) {
      sub->add_option(std::string("--") + k.name, values[k.name], k.help);
    }
  }

  CliConfig resolve() const {
    std::optional<fs::path> file;
    if (!config_path.empty()) {
      file = config_path;
    } else if (const char* env = std::getenv("DIP_CONFIG"); env != nullptr && *env != '\0') {
      file = env;
    }
    if (file && !fs::exists(*file)) {
      throw Error(ErrorCode::kIoError, "config file not found: " + file->string());
    }
    std::vector<std::pair<std::string, std::string>> overrides;
    for (const auto& k : config_keys()) {
      if (app->count(std::string("--") + k.name) > 0) overrides.emplace_back(k.name, values.at(k.name));
    }
    return resolve_config(file, overrides);
  }
};

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "write failed " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void print_frame_summary(std::ostream& out, const FrameResult& r) {
  char buf[256];
  out << "frame " << r.frame_id << ": gate " << to_string(r.gate) << "\n";
  if (r.ray) {
    std::snprintf(buf, sizeof(buf), "  ray   wrist (%.1f, %.1f) -> ext (%.1f, %.1f)\n",
                  r.ray->wrist.x, r.ray->wrist.y, r.ray->ext.x, r.ray->ext.y);
    out << buf;
  }
  if (r.aoi) {
    std::snprintf(buf, sizeof(buf), "  aoi   (%.1f, %.1f) (%.1f, %.1f) (%.1f, %.1f)\n",
                  r.aoi->apex.x, r.aoi->apex.y, r.aoi->base_top.x, r.aoi->base_top.y,
                  r.aoi->base_bottom.x, r.aoi->base_bottom.y);
    out << buf;
  }
  if (r.detection) {
    std::snprintf(buf, sizeof(buf), "  found (%.2f, %.2f) by %s, score %.4g\n",
                  r.detection->point.x, r.detection->point.y,
                  std::string(to_string(r.detection->method)).c_str(), r.detection->score);
    out << buf;
  } else if (r.gate == Gate::kOk) {
    out << "  no object found in the area of interest\n";
  }
  std::snprintf(buf, sizeof(buf), "  %.2f ms\n", r.elapsed_ms);
  out << buf;
}

int cmd_detect(const ConfigFlags& flags, const std::string& frame_path,
               const std::string& landmarks_path, const std::string& out_path, bool as_json,
               std::ostream& out) {
  const CliConfig cfg = flags.resolve();
  const ImageBuffer frame = load_image(frame_path);
  const auto records = load_landmarks(landmarks_path);
  if (records.empty()) throw Error(ErrorCode::kEmptyInput, "landmark file has no records");
  const LandmarkRecord& rec = records.front();
  const FrameResult r = run_frame(frame, rec.pose, cfg.session.dip, rec.frame_id);
  if (!out_path.empty()) {
    const fs::path p(out_path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    save_image(annotate(frame, r), p);
  }
  if (as_json) {
    out << json(r).dump(2) << "\n";
  } else {
    print_frame_summary(out, r);
  }
  return r.detection ? kExitSuccess : kExitNoResult;
}

std::set<std::int64_t> frame_ids_in(const fs::path& dir) {
  static const std::regex pattern(R"(frame_(\d{6,})\.(ppm|pgm))");
  std::set<std::int64_t> ids;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && std::regex_match(name, m, pattern)) {
      ids.insert(std::stoll(m[1].str()));
    }
  }
  return ids;
}

FrameResult overlay_for(const SessionStep& step, const SessionState& state) {
  if (step.dip) return *step.dip;
  FrameResult r;
  r.frame_id = step.frame_id;
  if (step.track_window) {
    r.gate = Gate::kOk;
    r.detection = Detection{step.track_window->center(), *step.track_window,
                            DetectionMethod::kContour, 0.0};
    if (state.confirmed_detection) r.detection->method = state.confirmed_detection->method;
  } else if (state.confirmed_detection && !step.target_lost) {
    r.gate = Gate::kOk;
    r.detection = state.confirmed_detection;
  }
  return r;
}

int cmd_run(const ConfigFlags& flags, const std::string& frames_dir,
            const std::string& landmarks_path, const std::string& report_path,
            const std::string& annotate_dir, std::ostream& out) {
  const CliConfig cfg = flags.resolve();
  if (!fs::is_directory(frames_dir)) {
    throw Error(ErrorCode::kIoError, "not a directory: " + frames_dir);
  }
  const auto records = load_landmarks(landmarks_path);
  if (records.empty()) throw Error(ErrorCode::kEmptyInput, "landmark file has no records");

  std::set<std::int64_t> on_disk = frame_ids_in(frames_dir);
  std::vector<fs::path> paths;
  for (const auto& rec : records) {
    const auto p = find_frame(frames_dir, rec.frame_id);
    if (!p) {
      throw Error(ErrorCode::kJoinMismatch, "no frame file for frame " + std::to_string(rec.frame_id));
    }
    paths.push_back(*p);
    on_disk.erase(rec.frame_id);
  }
  if (!on_disk.empty()) {
    throw Error(ErrorCode::kJoinMismatch,
                "frame " + std::to_string(*on_disk.begin()) + " has no landmark record");
  }
  if (!annotate_dir.empty()) fs::create_directories(annotate_dir);

  Session session(cfg.session);
  SessionTrace trace;
  std::vector<FrameResult> results;
  double total_ms = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const ImageBuffer frame = load_image(paths[i]);
    FrameResult r = run_frame(frame, records[i].pose, cfg.session.dip, records[i].frame_id);
    total_ms += r.elapsed_ms;
    results.push_back(r);
    trace.steps.push_back(session.step(frame, std::move(r)));
    if (!annotate_dir.empty()) {
      const ImageBuffer drawn = annotate(frame, overlay_for(trace.steps.back(), session.state()));
      save_image(drawn, fs::path(annotate_dir) /
                            frame_filename(records[i].frame_id, drawn.channels()));
    }
  }
  trace.final_state = session.state();

  const double mean_ms = total_ms / static_cast<double>(records.size());
  const bool confirmed = trace.final_state.confirmed_frame.has_value();
  json report{{"outcome", confirmed ? "confirmed" : "unconfirmed"},
              {"confirmed_frame", trace.final_state.confirmed_frame
                                      ? json(*trace.final_state.confirmed_frame)
                                      : json(nullptr)},
              {"mean_elapsed_ms", mean_ms},
              {"frames", results},
              {"trace", trace}};
  if (!report_path.empty()) write_text(report_path, report.dump(2) + "\n");

  char buf[128];
  std::snprintf(buf, sizeof(buf), "%zu frames, mean run_frame %.2f ms (%.1f fps)\n",
                records.size(), mean_ms, mean_ms > 0.0 ? 1000.0 / mean_ms : 0.0);
  out << buf;
  if (confirmed) {
    const auto& d = *trace.final_state.confirmed_detection;
    std::snprintf(buf, sizeof(buf), "confirmed at frame %lld: (%.2f, %.2f) by %s\n",
                  static_cast<long long>(*trace.final_state.confirmed_frame), d.point.x, d.point.y,
                  std::string(to_string(d.method)).c_str());
    out << buf;
  } else {
    out << "no object confirmed\n";
  }
  return confirmed ? kExitSuccess : kExitNoResult;
}

std::vector<FrameResult> load_results(const fs::path& path) {
  const json j = parse_json(read_text(path));
  try {
    if (j.is_array()) return j.get<std::vector<FrameResult>>();
    return j.at("frames").get<std::vector<FrameResult>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
}

int cmd_eval(const ConfigFlags& flags, const std::string& results_path,
             const std::string& truth_path, const std::string& out_path, std::ostream& out) {
  const CliConfig cfg = flags.resolve();
  const auto results = load_results(results_path);
  const auto truth = load_ground_truth(truth_path);
  const EvalReport report = containment_stats(results, truth, cfg.eval);
  print_eval_report(out, report);
  if (!out_path.empty()) write_text(out_path, json(report).dump(2) + "\n");
  return kExitSuccess;
}

int cmd_eval_angles(const std::string& annotations_path, const std::string& out_path,
                    std::ostream& out) {
  const auto sets = load_annotations(annotations_path);
  const auto rows = angle_report(sets);
  print_angle_table(out, rows);
  if (!out_path.empty()) write_text(out_path, json{{"rows", rows}}.dump(2) + "\n");
  return kExitSuccess;
}

int cmd_simulate(const ConfigFlags& flags, const std::string& scene_path,
                 const std::string& log_path, const std::string& render_dir,
                 std::optional<int> max_steps, std::ostream& out) {
  const CliConfig cfg = flags.resolve();
  const SimScene scene = load_scene(scene_path);
  const int steps = max_steps.value_or(scene.max_steps);
  if (steps < 1) throw Error(ErrorCode::kInvalidArgument, "max_steps must be >= 1");
  FrameSink sink;
  if (!render_dir.empty()) {
    fs::create_directories(render_dir);
    sink = [&](int step, const ImageBuffer& frame) {
      save_image(frame, fs::path(render_dir) / frame_filename(step, frame.channels()));
    };
  }
  const SimResult result = simulate_approach(scene, cfg.sim, steps, sink);
  if (!log_path.empty()) {
    const fs::path p(log_path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream log(p, std::ios::binary);
    if (!log) throw Error(ErrorCode::kIoError, "cannot write " + p.string());
    write_trajectory_csv(log, result);
  }
  out << "outcome " << to_string(result.outcome);
  if (result.converged_step) out << " at step " << *result.converged_step;
  out << " (" << result.trajectory.size() << " steps)\n";
  if (!result.trajectory.empty()) {
    char buf[128];
    const SimStep& last = result.trajectory.back();
    std::snprintf(buf, sizeof(buf), "final distance %.3f m, size ratio %.4f\n", last.distance,
                  last.ratio);
    out << buf;
  }
  return result.outcome == SimOutcome::kConverged ? kExitSuccess : kExitNoResult;
}

int cmd_generate(const std::string& out_dir, std::size_t n, std::uint64_t seed,
                 double no_pose_fraction, std::ostream& out) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "--frames must be >= 1");
  if (no_pose_fraction < 0.0 || no_pose_fraction > 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "--no-pose-fraction must be in [0, 1]");
  }
  const fs::path dir(out_dir);
  fs::create_directories(dir / "frames");
  CorpusConfig cc;
  cc.no_pose_fraction = no_pose_fraction;
  std::mt19937_64 rng(seed);
  std::ofstream lm(dir / "landmarks.txt");
  std::ofstream truth(dir / "truth.csv");
  if (!lm || !truth) throw Error(ErrorCode::kIoError, "cannot write into " + dir.string());
  truth << "frame_id,x_min,y_min,x_max,y_max,pose_correct\n";
  for (std::size_t i = 0; i < n; ++i) {
    const auto id = static_cast<std::int64_t>(i);
    const SyntheticFrame f = make_pointing_frame(rng, cc, id);
    save_image(f.image, dir / "frames" / frame_filename(id, 3));
    lm << format_landmark_record({id, f.landmarks}) << "\n";
    const Rect& b = f.truth.object_box;
    truth << id << "," << b.x_min << "," << b.y_min << "," << b.x_max << "," << b.y_max << ","
          << (f.truth.pose_correct ? "true" : "false") << "\n";
  }
  out << "wrote " << n << " frames to " << dir.string() << "\n";
  return kExitSuccess;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Locate the object a diver points at, then approach it."};
  app.name("dip");
  app.require_subcommand(1);

  ConfigFlags detect_flags, run_flags, eval_flags, sim_flags;

  std::string frame_path, landmarks_path, out_path;
  bool as_json = false;
  auto* detect = app.add_subcommand("detect", "Run the pipeline on one frame");
  detect->add_option("--frame", frame_path, "PPM/PGM frame")->required();
  detect->add_option("--landmarks", landmarks_path, "landmark stream (first record is used)")
      ->required();
  detect->add_option("--out", out_path, "write the annotated frame here");
  detect->add_flag("--json", as_json, "print the frame result as JSON");
  detect_flags.attach(detect);

  std::string frames_dir, report_path, annotate_dir;
  auto* run = app.add_subcommand("run", "Run a detection session over a frame sequence");
  run->add_option("--frames", frames_dir, "directory of frame_NNNNNN.ppm/pgm")->required();
  run->add_option("--landmarks", landmarks_path, "landmark stream")->required();
  run->add_option("--report", report_path, "JSON report path")->required();
  run->add_option("--annotate", annotate_dir, "write one annotated image per frame here");
  run_flags.attach(run);

  std::string results_path, truth_path, eval_out, annotations_path;
  auto* eval = app.add_subcommand("eval", "Score results against ground truth");
  eval->add_option("--results", results_path, "run report or JSON array of frame results");
  eval->add_option("--truth", truth_path, "ground-truth CSV");
  eval->add_option("--out", eval_out, "JSON output path");
  eval_flags.attach(eval);
  auto* angles = eval->add_subcommand("angles", "Per-image pointing angle agreement table");
  angles->add_option("--annotations", annotations_path, "annotation CSV")->required();
  angles->add_option("--out", eval_out, "JSON output path");

  std::string scene_path, log_path, render_dir;
  std::optional<int> max_steps;
  auto* sim = app.add_subcommand("simulate", "Closed-loop approach in a synthetic scene");
  sim->add_option("--scene", scene_path, "scene file")->required();
  sim->add_option("--log", log_path, "trajectory CSV path");
  sim->add_option("--render", render_dir, "write every rendered frame here");
  sim->add_option("--max-steps", max_steps, "override the scene's step budget");
  sim_flags.attach(sim);

  std::string gen_dir;
  std::size_t gen_frames = 100;
  std::uint64_t gen_seed = 1;
  double gen_no_pose = 0.05;
  auto* gen = app.add_subcommand("generate", "Write a synthetic pointing corpus");
  gen->add_option("--out", gen_dir, "output directory")->required();
  gen->add_option("--frames", gen_frames, "number of frames");
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("--no-pose-fraction", gen_no_pose, "fraction of frames without a pose");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitInputError;
  }

  try {
    if (*detect) return cmd_detect(detect_flags, frame_path, landmarks_path, out_path, as_json, out);
    if (*run) return cmd_run(run_flags, frames_dir, landmarks_path, report_path, annotate_dir, out);
    if (*angles) return cmd_eval_angles(annotations_path, eval_out, out);
    if (*eval) {
      if (results_path.empty() || truth_path.empty()) {
        err << "dip eval: --results and --truth are required\n";
        return kExitInputError;
      }
      return cmd_eval(eval_flags, results_path, truth_path, eval_out, out);
    }
    if (*sim) return cmd_simulate(sim_flags, scene_path, log_path, render_dir, max_steps, out);
    if (*gen) return cmd_generate(gen_dir, gen_frames, gen_seed, gen_no_pose, out);
  } catch (const Error& e) {
    err << "dip: " << e.what() << "\n";
    return kExitInputError;
  } catch (const fs::filesystem_error& e) {
    err << "dip: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace dip
