#pragma once

#include <nlohmann/json.hpp>

#include "dip/evaluation.hpp"
#include "dip/pipeline.hpp"
#include "dip/simulator.hpp"

namespace dip {

void to_json(nlohmann::json& j, const Point2& p);
void from_json(const nlohmann::json& j, Point2& p);
void to_json(nlohmann::json& j, const Rect& r);
void from_json(const nlohmann::json& j, Rect& r);
void to_json(nlohmann::json& j, const Triangle& t);
void from_json(const nlohmann::json& j, Triangle& t);
void to_json(nlohmann::json& j, const PointingRay& r);
void from_json(const nlohmann::json& j, PointingRay& r);
void to_json(nlohmann::json& j, const Detection& d);
void from_json(const nlohmann::json& j, Detection& d);
void to_json(nlohmann::json& j, const FrameResult& r);
void from_json(const nlohmann::json& j, FrameResult& r);
void to_json(nlohmann::json& j, const SessionStep& s);
void from_json(const nlohmann::json& j, SessionStep& s);
void to_json(nlohmann::json& j, const SessionState& s);
void from_json(const nlohmann::json& j, SessionState& s);
void to_json(nlohmann::json& j, const SessionTrace& t);
void from_json(const nlohmann::json& j, SessionTrace& t);
void to_json(nlohmann::json& j, const EvalReport& r);
void from_json(const nlohmann::json& j, EvalReport& r);
void to_json(nlohmann::json& j, const AngleRow& r);
void from_json(const nlohmann::json& j, AngleRow& r);

// Parses JSON text, mapping any nlohmann error to ParseError.
nlohmann::json parse_json(const std::string& text);

}  // namespace dip
