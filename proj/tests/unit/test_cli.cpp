#include <gtest/gtest.h>

#include <cstdlib>
#include <random>

#include "dip/json_io.hpp"
#include "dip/landmarks.hpp"
#include "support.hpp"

namespace dip {
namespace {

using nlohmann::json;
using test::run_cli_args;

std::string pose_line(std::int64_t id) {
  return std::to_string(id) + " right 150 250 0.9 180 245 0.9";
}

// Writes frames 0..n-1 of the constructed stream plus their landmark file.
void write_stream(const test::TempDir& dir, int n, std::int64_t object_from = 7) {
  std::filesystem::create_directories(dir / "frames");
  std::string lm;
  for (int i = 0; i < n; ++i) {
    const auto f = test::stream_frame(i, 4, object_from);
    save_image(f.image, dir / "frames" / frame_filename(i, 3));
    lm += f.pose ? pose_line(i) + "\n" : std::to_string(i) + " -\n";
  }
  test::write_file(dir / "landmarks.txt", lm);
}

class EnvGuard {
 public:
  explicit EnvGuard(const char* value) {
    if (const char* old = std::getenv("DIP_CONFIG")) saved_ = old;
    if (value) {
      setenv("DIP_CONFIG", value, 1);
    } else {
      unsetenv("DIP_CONFIG");
    }
  }
  ~EnvGuard() {
    if (saved_) {
      setenv("DIP_CONFIG", saved_->c_str(), 1);
    } else {
      unsetenv("DIP_CONFIG");
    }
  }

 private:
  std::optional<std::string> saved_;
};

TEST(CliDetect, PlantedTargetExitsZeroWithJson) {
  EnvGuard env(nullptr);
  test::TempDir dir;
  save_image(test::stream_frame(7).image, dir / "f.ppm");
  test::write_file(dir / "lm.txt", pose_line(7) + "\n");
  const auto r = run_cli_args({"detect", "--frame", (dir / "f.ppm").string(), "--landmarks",
                               (dir / "lm.txt").string(), "--json", "--out",
                               (dir / "out" / "a.ppm").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("gate"), "ok");
  EXPECT_EQ(j.at("frame_id"), 7);
  ASSERT_FALSE(j.at("detection").is_null());
  EXPECT_EQ(j.at("aoi").at("apex"), json::array({175.0, 250.0}));
  const ImageBuffer annotated = load_image(dir / "out" / "a.ppm");
  EXPECT_EQ(annotated.width(), 640);
  EXPECT_NE(annotated, test::stream_frame(7).image);
}

TEST(CliDetect, NoPoseRowExitsOne) {
  EnvGuard env(nullptr);
  test::TempDir dir;
  save_image(test::stream_frame(7).image, dir / "f.ppm");
  test::write_file(dir / "lm.txt", "7 -\n");
  const auto r = run_cli_args({"detect", "--frame", (dir / "f.ppm").string(), "--landmarks",
                               (dir / "lm.txt").string(), "--json"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(json::parse(r.out).at("gate"), "no_pose");
}

TEST(CliDetect, InputErrorsExitTwo) {
  EnvGuard env(nullptr);
  test::TempDir dir;
  save_image(test::stream_frame(7).image, dir / "f.ppm");
  test::write_file(dir / "lm.txt", pose_line(7) + "\n");
  test::write_file(dir / "bad.txt", "7 right 1 2\n");
  test::write_file(dir / "bad.ppm", "P6\n4 4\n255\nxx");
  const std::string f = (dir / "f.ppm").string(), lm = (dir / "lm.txt").string();
  auto r = run_cli_args({"detect", "--frame", (dir / "missing.ppm").string(), "--landmarks", lm});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
  EXPECT_EQ(run_cli_args({"detect", "--frame", f, "--landmarks", (dir / "bad.txt").string()}).code, 2);
  EXPECT_EQ(run_cli_args({"detect", "--frame", (dir / "bad.ppm").string(), "--landmarks", lm}).code, 2);
  EXPECT_EQ(run_cli_args({"detect", "--frame", f}).code, 2);
  EXPECT_EQ(run_cli_args({"detect", "--frame", f, "--landmarks", lm, "--sf", "-1"}).code, 2);
  EXPECT_EQ(run_cli_args({"detect", "--frame", f, "--landmarks", lm, "--bogus", "1"}).code, 2);
  EXPECT_EQ(run_cli_args({}).code, 2);
  EXPECT_EQ(run_cli_args({"--help"}).code, 0);
}

TEST(CliRun, ConfirmsAtSevenAndAnnotatesEveryFrame) {
  EnvGuard env(nullptr);
  test::TempDir dir;
  write_stream(dir, 20);
  const auto r = run_cli_args({"run", "--frames", (dir / "frames").string(), "--landmarks",
                               (dir / "landmarks.txt").string(), "--report",
                               (dir / "report.json").string(), "--annotate",
                               (dir / "ann").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("fps"), std::string::npos);
  const json rep = parse_json(test::read_file(dir / "report.json"));
  EXPECT_EQ(rep.at("outcome"), "confirmed");
  EXPECT_EQ(rep.at("confirmed_frame"), 7);
  EXPECT_EQ(rep.at("frames").size(), 20u);
  const auto trace = rep.at("trace").get<SessionTrace>();
  EXPECT_EQ(trace.final_state.confirmed_frame, 7);
  EXPECT_EQ(trace.steps[12].phase, SessionPhase::kTracking);
  std::size_t images = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir / "ann")) images += e.is_regular_file();
  EXPECT_EQ(images, 20u);
}

TEST(CliRun, EmptyStreamIsUnconfirmed) {
  EnvGuard env(nullptr);
  test::TempDir dir;
  write_stream(dir, 10, 1000);
  const auto r = run_cli_args({"run", "--frames", (dir / "frames").string(), "--landmarks",
                               (dir / "landmarks.txt").string(), "--report",
                               (dir / "report.json").string()});
  EXPECT_EQ(r.code, 1);
  const json rep = parse_json(test::read_file(dir / "report.json"));
  EXPECT_EQ(rep.at("outcome"), "unconfirmed");
  EXPECT_TRUE(rep.at("confirmed_frame").is_null());
}

TEST(CliRun, MismatchedStreamExitsTwo) {
  EnvGuard env(nullptr);
  test::TempDir dir;
  write_stream(dir, 5);
  test::write_file(dir / "short.txt", "0 -\n1 -\n2 -\n3 -\n");
  test::write_file(dir / "long.txt", "0 -\n1 -\n2 -\n3 -\n4 -\n5 -\n");
  for (const char* lm : {"short.txt", "long.txt"}) {
    const auto r = run_cli_args({"run", "--frames", (dir / "frames").string(), "--landmarks",
                                 (dir / lm).string(), "--report", (dir / "r.json").string()});
    EXPECT_EQ(r.code, 2) << lm;
    EXPECT_NE(r.err.find("JoinMismatch"), std::string::npos) << r.err;
  }
}

TEST(CliEval, GeneratedCorpusScoresAndRoundTrips) {
  EnvGuard env(nullptr);
  test::TempDir dir;
  ASSERT_EQ(run_cli_args({"generate", "--out", dir.path().string(), "--frames", "12", "--seed",
                          "5", "--no-pose-fraction", "0"})
                .code,
            0);
  ASSERT_EQ(run_cli_args({"run", "--frames", (dir / "frames").string(), "--landmarks",
                          (dir / "landmarks.txt").string(), "--report",
                          (dir / "report.json").string(), "--tracking", "false"})
                .code,
            0);
  const auto r = run_cli_args({"eval", "--results", (dir / "report.json").string(), "--truth",
                               (dir / "truth.csv").string(), "--out",
                               (dir / "eval.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = parse_json(test::read_file(dir / "eval.json")).get<EvalReport>();
  EXPECT_EQ(rep.n_frames, 12u);
  EXPECT_EQ(rep.n_pose_correct, 12u);
  EXPECT_EQ(rep.containment_rate, 1.0);
  EXPECT_EQ(rep.detection_rate, 1.0);
  EXPECT_NE(r.out.find("object in AOI"), std::string::npos);
}

TEST(CliEval, DisjointIdsExitTwo) {
  EnvGuard env(nullptr);
  test::TempDir dir;
  FrameResult fr;
  fr.frame_id = 3;
  test::write_file(dir / "results.json", json(std::vector<FrameResult>{fr}).dump());
  test::write_file(dir / "truth.csv",
                   "frame_id,x_min,y_min,x_max,y_max,pose_correct\n4,1,1,2,2,true\n");
  const auto r = run_cli_args({"eval", "--results", (dir / "results.json").string(), "--truth",
                               (dir / "truth.csv").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("JoinMismatch"), std::string::npos);
  test::write_file(dir / "broken.json", "{not json");
  EXPECT_EQ(run_cli_args({"eval", "--results", (dir / "broken.json").string(), "--truth",
                          (dir / "truth.csv").string()})
                .code,
            2);
  EXPECT_EQ(run_cli_args({"eval"}).code, 2);
}

TEST(CliEval, AnglesTableFromFixture) {
  test::TempDir dir;
  const auto r = run_cli_args({"eval", "angles", "--annotations",
                               (test::data_dir() / "angle_study.csv").string(), "--out",
                               (dir / "angles.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = parse_json(test::read_file(dir / "angles.json"));
  ASSERT_EQ(j.at("rows").size(), 8u);
  const auto rows = j.at("rows").get<std::vector<AngleRow>>();
  EXPECT_EQ(rows[0].image_id, "image1");
  EXPECT_NEAR(*rows[0].difference, 0.147, 0.0005);
  EXPECT_FALSE(rows[1].difference);
  EXPECT_TRUE(j.at("rows")[1].at("difference").is_null());
}

TEST(CliSimulate, ConvergesWithByteIdenticalLogs) {
  EnvGuard env(nullptr);
  test::TempDir dir;
  const std::string scene = (test::data_dir() / "scenes" / "ahead.scene").string();
  const auto a = run_cli_args({"simulate", "--scene", scene, "--log", (dir / "a.csv").string()});
  const auto b = run_cli_args({"simulate", "--scene", scene, "--log", (dir / "b.csv").string()});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(b.code, 0);
  EXPECT_NE(a.out.find("converged"), std::string::npos);
  EXPECT_EQ(test::read_file(dir / "a.csv"), test::read_file(dir / "b.csv"));
}

TEST(CliSimulate, BehindIsLostAndBadSceneIsInputError) {
  EnvGuard env(nullptr);
  test::TempDir dir;
  const auto r = run_cli_args(
      {"simulate", "--scene", (test::data_dir() / "scenes" / "behind.scene").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("lost"), std::string::npos);
  test::write_file(dir / "bad.scene", "object_x = 5\nwarp = 2\n");
  EXPECT_EQ(run_cli_args({"simulate", "--scene", (dir / "bad.scene").string()}).code, 2);
}

TEST(CliSimulate, RenderWritesFrames) {
  EnvGuard env(nullptr);
  test::TempDir dir;
  const auto r = run_cli_args({"simulate", "--scene",
                               (test::data_dir() / "scenes" / "ahead.scene").string(),
                               "--max-steps", "3", "--render", (dir / "r").string()});
  EXPECT_EQ(r.code, 1);
  for (int k = 0; k < 3; ++k) EXPECT_TRUE(std::filesystem::exists(dir / "r" / frame_filename(k, 3)));
}

double detect_ext_x(const std::vector<std::string>& extra) {
  test::TempDir dir;
  save_image(test::stream_frame(7).image, dir / "f.ppm");
  test::write_file(dir / "lm.txt", pose_line(7) + "\n");
  std::vector<std::string> args{"detect", "--frame", (dir / "f.ppm").string(), "--landmarks",
                                (dir / "lm.txt").string(), "--json"};
  args.insert(args.end(), extra.begin(), extra.end());
  const auto r = run_cli_args(args);
  EXPECT_LE(r.code, 1) << r.err;
  return json::parse(r.out).at("ray").at("ext")[0].get<double>();
}

TEST(CliConfig, FlagBeatsFileBeatsDefault) {
  test::TempDir dir;
  test::write_file(dir / "a.cfg", "# pointing\nsf = 5\nc = 80\n");
  test::write_file(dir / "b.cfg", "sf = 3\n");
  const std::string a = (dir / "a.cfg").string(), b = (dir / "b.cfg").string();
  {
    EnvGuard env(nullptr);
    EXPECT_EQ(detect_ext_x({}), 180 + 10 * 30);
    EXPECT_EQ(detect_ext_x({"--config", a}), 180 + 5 * 30);
    EXPECT_EQ(detect_ext_x({"--config", a, "--sf", "7"}), 180 + 7 * 30);
  }
  {
    EnvGuard env(b.c_str());
    EXPECT_EQ(detect_ext_x({}), 180 + 3 * 30);
    EXPECT_EQ(detect_ext_x({"--config", a}), 180 + 5 * 30);
    EXPECT_EQ(detect_ext_x({"--sf", "2"}), 180 + 2 * 30);
  }
}

TEST(CliConfig, ResolveLayersAndValidation) {
  test::TempDir dir;
  test::write_file(dir / "c.cfg", "c = 80\neps = 2\nmethod = keypoint\nyaw_kp = 0.9\n");
  const CliConfig cfg = resolve_config(dir / "c.cfg", {{"eps", "4"}, {"tracking", "false"}});
  EXPECT_EQ(cfg.session.dip.sf, 10.0);
  EXPECT_EQ(cfg.session.dip.c, 80.0);
  EXPECT_EQ(cfg.session.dip.eps, 4.0);
  EXPECT_EQ(cfg.session.dip.method, DetectionMethod::kKeypoint);
  EXPECT_FALSE(cfg.session.tracking);
  EXPECT_EQ(cfg.sim.pids.yaw.kp, 0.9);
  EXPECT_EQ(cfg.sim.dip.c, 80.0);

  test::write_file(dir / "unknown.cfg", "sf = 5\nshininess = 3\n");
  try {
    resolve_config(dir / "unknown.cfg", {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_NE(std::string(e.what()).find("shininess"), std::string::npos);
  }
  EXPECT_THROW(resolve_config(std::nullopt, {{"c", "-3"}}), Error);
  EXPECT_THROW(resolve_config(std::nullopt, {{"confirm_frames", "-1"}}), Error);
  EXPECT_THROW(resolve_config(std::nullopt, {{"method", "sift"}}), Error);
  EXPECT_THROW(resolve_config(std::nullopt, {{"target_ratio", "1.5"}}), Error);

  {
    EnvGuard env(nullptr);
    test::TempDir d2;
    save_image(test::stream_frame(7).image, d2 / "f.ppm");
    test::write_file(d2 / "lm.txt", pose_line(7) + "\n");
    const auto r = run_cli_args({"detect", "--frame", (d2 / "f.ppm").string(), "--landmarks",
                                 (d2 / "lm.txt").string(), "--config",
                                 (dir / "unknown.cfg").string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(run_cli_args({"detect", "--frame", (d2 / "f.ppm").string(), "--landmarks",
                            (d2 / "lm.txt").string(), "--config", (dir / "none.cfg").string()})
                  .code,
              2);
  }
  EXPECT_FALSE(config_keys().empty());
}

TEST(JsonIo, FrameResultsRoundTripExactly) {
  std::mt19937_64 rng(70);
  CorpusConfig cc;
  cc.no_pose_fraction = 0.3;
  for (int i = 0; i < 10; ++i) {
    const SyntheticFrame f = make_pointing_frame(rng, cc, i);
    const FrameResult r = run_frame(f.image, f.landmarks, cc.dip, i);
    const std::string text = json(r).dump();
    const FrameResult back = parse_json(text).get<FrameResult>();
    EXPECT_EQ(back.frame_id, r.frame_id);
    EXPECT_EQ(back.gate, r.gate);
    EXPECT_EQ(back.ray, r.ray);
    EXPECT_EQ(back.aoi, r.aoi);
    EXPECT_EQ(back.detection, r.detection);
    EXPECT_EQ(back.elapsed_ms, r.elapsed_ms);
    EXPECT_EQ(json(back).dump(), text);
  }
}

TEST(JsonIo, SessionTraceAndReportsRoundTrip) {
  std::vector<test::StreamFrame> frames;
  for (int i = 0; i < 12; ++i) frames.push_back(test::stream_frame(i));
  std::vector<SessionInput> inputs;
  for (int i = 0; i < 12; ++i) inputs.push_back({i, &frames[i].image, frames[i].pose});
  const SessionTrace trace = run_session(inputs, {});
  const std::string text = json(trace).dump();
  EXPECT_EQ(json(parse_json(text).get<SessionTrace>()).dump(), text);

  EvalReport rep;
  rep.n_frames = 9;
  rep.n_pose_correct = 7;
  rep.n_contained = 3;
  rep.finalize_rates();
  EXPECT_EQ(json(json(rep).get<EvalReport>()).dump(), json(rep).dump());

  const AngleRow row{"im", 3, 1.0 / 3.0, std::nullopt, std::nullopt, 0.1};
  EXPECT_EQ(json(json(row).get<AngleRow>()).dump(), json(row).dump());
}

TEST(JsonIo, MalformedInputIsParseError) {
  for (const char* text : {"{", "[1,", "nul"}) {
    try {
      parse_json(text);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParseError);
    }
  }
  EXPECT_ANY_THROW(parse_json(R"({"frame_id": 1, "gate": "sideways"})").get<FrameResult>());
}

}  // namespace
}  // namespace dip
