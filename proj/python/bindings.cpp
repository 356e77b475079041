#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <sstream>

#include "dip/evaluation.hpp"
#include "dip/json_io.hpp"
#include "dip/pipeline.hpp"
#include "dip/simulator.hpp"

namespace py = pybind11;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

dip::ImageBuffer to_image(const U8Array& a) {
  if (a.ndim() == 2) {
    const auto h = static_cast<int>(a.shape(0)), w = static_cast<int>(a.shape(1));
    std::vector<std::uint8_t> data(a.data(), a.data() + a.size());
    return dip::ImageBuffer(w, h, 1, std::move(data));
  }
  if (a.ndim() == 3 && a.shape(2) == 3) {
    const auto h = static_cast<int>(a.shape(0)), w = static_cast<int>(a.shape(1));
    std::vector<std::uint8_t> data(a.data(), a.data() + a.size());
    return dip::ImageBuffer(w, h, 3, std::move(data));
  }
  throw py::value_error("frame must be HxW or HxWx3 uint8");
}

U8Array to_array(const dip::ImageBuffer& img) {
  std::vector<py::ssize_t> shape{img.height(), img.width()};
  if (img.channels() == 3) shape.push_back(3);
  U8Array out(shape);
  std::memcpy(out.mutable_data(), img.data().data(), img.data().size());
  return out;
}

py::object frame_result_to_dict(const dip::FrameResult& r) {
  return py::module_::import("json").attr("loads")(nlohmann::json(r).dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Pointing-gesture area of interest and object localization";

  py::register_exception<dip::Error>(m, "DipError", PyExc_RuntimeError);

  py::class_<dip::Point2>(m, "Point2")
      .def(py::init<double, double>(), py::arg("x"), py::arg("y"))
      .def(py::init([](std::pair<double, double> p) { return dip::Point2{p.first, p.second}; }))
      .def_readwrite("x", &dip::Point2::x)
      .def_readwrite("y", &dip::Point2::y)
      .def("__iter__", [](const dip::Point2& p) { return py::iter(py::make_tuple(p.x, p.y)); })
      .def("__eq__", [](const dip::Point2& a, const dip::Point2& b) { return a == b; })
      .def("__repr__", [](const dip::Point2& p) {
        std::ostringstream os;
        os << "Point2(" << p.x << ", " << p.y << ")";
        return os.str();
      });
  py::implicitly_convertible<py::tuple, dip::Point2>();

  py::class_<dip::Rect>(m, "Rect")
      .def(py::init<double, double, double, double>(), py::arg("x_min"), py::arg("y_min"),
           py::arg("x_max"), py::arg("y_max"))
      .def_readwrite("x_min", &dip::Rect::x_min)
      .def_readwrite("y_min", &dip::Rect::y_min)
      .def_readwrite("x_max", &dip::Rect::x_max)
      .def_readwrite("y_max", &dip::Rect::y_max)
      .def("center", &dip::Rect::center);

  py::class_<dip::Triangle>(m, "Triangle")
      .def(py::init<dip::Point2, dip::Point2, dip::Point2>(), py::arg("apex"),
           py::arg("base_top"), py::arg("base_bottom"))
      .def_readwrite("apex", &dip::Triangle::apex)
      .def_readwrite("base_top", &dip::Triangle::base_top)
      .def_readwrite("base_bottom", &dip::Triangle::base_bottom)
      .def("vertices", [](const dip::Triangle& t) {
        return std::vector<dip::Point2>{t.apex, t.base_top, t.base_bottom};
      });

  m.def("extend_pointing_segment", &dip::extend_pointing_segment, py::arg("elbow"),
        py::arg("wrist"), py::arg("sf") = 10.0);
  m.def("build_area_of_interest", &dip::build_area_of_interest, py::arg("wrist"),
        py::arg("ext"), py::arg("c") = 100.0, py::arg("eps") = 5.0);
  m.def("point_in_triangle", &dip::point_in_triangle, py::arg("p"), py::arg("triangle"));
  m.def("pointing_angle", &dip::pointing_angle, py::arg("elbow"), py::arg("wrist"));
  m.def("angular_difference", &dip::angular_difference, py::arg("a"), py::arg("b"));
  m.def("circular_variance",
        [](const std::vector<double>& a) { return dip::circular_variance(a); },
        py::arg("angles"));
  m.def("mean_angle", [](const std::vector<double>& a) { return dip::unwrapped_mean(a); },
        py::arg("angles"));

  m.def(
      "run_frame",
      [](const U8Array& frame, std::optional<std::pair<dip::Point2, dip::Point2>> pose,
         double sf, double c, double eps, const std::string& method) {
        dip::DipConfig cfg;
        cfg.sf = sf;
        cfg.c = c;
        cfg.eps = eps;
        cfg.method = dip::detection_method_from_string(method);
        cfg.validate();
        std::optional<dip::PoseLandmarks> lm;
        if (pose) {
          lm = dip::PoseLandmarks{};
          lm->elbow = pose->first;
          lm->wrist = pose->second;
        }
        const dip::ImageBuffer img = to_image(frame);
        dip::FrameResult r;
        {
          py::gil_scoped_release release;
          r = dip::run_frame(img, lm, cfg);
        }
        return frame_result_to_dict(r);
      },
      py::arg("frame"), py::arg("pose"), py::arg("sf") = 10.0, py::arg("c") = 100.0,
      py::arg("eps") = 5.0, py::arg("method") = "contour_then_keypoint",
      "Runs the pipeline on one frame. pose is (elbow, wrist) or None; returns a dict.");

  m.def(
      "render_scene_frame",
      [](const std::string& scene_text, double x, double y, double heading_rad) {
        std::istringstream in(scene_text);
        const dip::SimScene scene = dip::parse_scene(dip::parse_key_values(in));
        const dip::RobotPose pose{x, y, scene.robot_z, heading_rad};
        return to_array(dip::render_frame(scene, pose, scene.object_x, scene.object_y, 0));
      },
      py::arg("scene_text"), py::arg("x") = 0.0, py::arg("y") = 0.0, py::arg("heading") = 0.0);

  m.def(
      "simulate",
      [](const std::string& scene_text, int max_steps) {
        std::istringstream in(scene_text);
        const dip::SimScene scene = dip::parse_scene(dip::parse_key_values(in));
        dip::SimResult r;
        {
          py::gil_scoped_release release;
          r = dip::simulate_approach(scene, dip::SimConfig{}, max_steps > 0 ? max_steps : scene.max_steps);
        }
        py::dict out;
        out["outcome"] = std::string(dip::to_string(r.outcome));
        out["converged_step"] = r.converged_step ? py::cast(*r.converged_step) : py::none();
        out["steps"] = r.trajectory.size();
        std::vector<double> ratio;
        for (const auto& s : r.trajectory) ratio.push_back(s.ratio);
        out["ratio"] = ratio;
        return out;
      },
      py::arg("scene_text"), py::arg("max_steps") = 0);
}
