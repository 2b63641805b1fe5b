#include "arena/core/action.hpp"

#include <array>
#include <sstream>
#include <utility>

#include "arena/core/error.hpp"

namespace arena {

namespace {

constexpr std::array<std::pair<ActionType, std::string_view>, 27> kNames = {{
    {ActionType::MoveForward, "MoveForward"},
    {ActionType::MoveBackward, "MoveBackward"},
    {ActionType::RotateLeft, "RotateLeft"},
    {ActionType::RotateRight, "RotateRight"},
    {ActionType::LookUp, "LookUp"},
    {ActionType::LookDown, "LookDown"},
    {ActionType::GotoViewpoint, "GotoViewpoint"},
    {ActionType::GotoRoom, "GotoRoom"},
    {ActionType::Pickup, "Pickup"},
    {ActionType::Place, "Place"},
    {ActionType::Open, "Open"},
    {ActionType::Close, "Close"},
    {ActionType::ToggleOn, "ToggleOn"},
    {ActionType::ToggleOff, "ToggleOff"},
    {ActionType::Slice, "Slice"},
    {ActionType::Pour, "Pour"},
    {ActionType::Break, "Break"},
    {ActionType::Heat, "Heat"},
    {ActionType::Chill, "Chill"},
    {ActionType::Fill, "Fill"},
    {ActionType::Clean, "Clean"},
    {ActionType::Cook, "Cook"},
    {ActionType::Eat, "Eat"},
    {ActionType::Power, "Power"},
    {ActionType::Dialog, "Dialog"},
    {ActionType::Highlight, "Highlight"},
    {ActionType::Stop, "Stop"},
}};

}  // namespace

std::string_view to_string(ActionType t) {
  for (const auto& [type, name] : kNames) {
    if (type == t) return name;
  }
  return "?";
}

std::optional<ActionType> parse_action_type(std::string_view s) {
  for (const auto& [type, name] : kNames) {
    if (name == s) return type;
  }
  return std::nullopt;
}

bool is_navigation(ActionType t) {
  return t >= ActionType::MoveForward && t <= ActionType::GotoRoom;
}

bool is_interaction(ActionType t) { return t >= ActionType::Pickup && t <= ActionType::Power; }

bool is_user_interaction(ActionType t) { return t == ActionType::Dialog || t == ActionType::Highlight; }

bool in_edh_subset(ActionType t) {
  return is_navigation(t) || t == ActionType::Stop || (t >= ActionType::Pickup && t <= ActionType::Pour);
}

void validate(const Action& a) {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::SchemaError, std::string(to_string(a.type)) + ": " + why);
  };
  if (is_interaction(a.type) || a.type == ActionType::Highlight) {
    if (!a.target) fail("missing target");
  } else if (a.type == ActionType::GotoViewpoint) {
    if (a.node.empty() == !a.target.has_value()) fail("exactly one of viewpoint or target required");
  } else if (a.type == ActionType::GotoRoom) {
    if (a.node.empty()) fail("missing room");
  } else if (a.type == ActionType::Dialog) {
    if (a.text.empty()) fail("missing text");
  }
  if (a.target && a.target->is_instance() && a.target->instance_id().empty()) fail("empty instance id");
}

void to_json(nlohmann::json& j, const TargetSelector& s) {
  if (s.is_instance()) {
    j = nlohmann::json{{"id", s.instance_id()}};
  } else {
    j = nlohmann::json{{"x", s.coord().x}, {"y", s.coord().y}};
  }
}

void from_json(const nlohmann::json& j, TargetSelector& s) {
  if (!j.is_object()) throw Error(ErrorCode::SchemaError, "target selector must be an object");
  if (j.contains("id")) {
    if (!j["id"].is_string()) throw Error(ErrorCode::SchemaError, "target id must be a string");
    s = TargetSelector::instance(j["id"].get<std::string>());
  } else if (j.contains("x") && j.contains("y")) {
    if (!j["x"].is_number_integer() || !j["y"].is_number_integer()) {
      throw Error(ErrorCode::SchemaError, "target coordinates must be integers");
    }
    s = TargetSelector::at(j["x"].get<int>(), j["y"].get<int>());
  } else {
    throw Error(ErrorCode::SchemaError, "target selector needs id or x/y");
  }
}

void to_json(nlohmann::json& j, const Action& a) {
  j = nlohmann::json{{"type", std::string(to_string(a.type))}};
  if (a.target) j["target"] = *a.target;
  if (!a.node.empty()) j[a.type == ActionType::GotoRoom ? "room" : "viewpoint"] = a.node;
  if (!a.text.empty()) j["text"] = a.text;
  if (a.heading) j["heading"] = std::string(to_string(*a.heading));
  if (a.pitch) j["pitch"] = std::string(to_string(*a.pitch));
}

void from_json(const nlohmann::json& j, Action& a) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    throw Error(ErrorCode::SchemaError, "action needs a string type");
  }
  auto type = parse_action_type(j["type"].get_ref<const std::string&>());
  if (!type) throw Error(ErrorCode::SchemaError, "unknown action type " + j["type"].get<std::string>());
  a = Action::simple(*type);
  if (j.contains("target")) a.target = j["target"].get<TargetSelector>();
  auto str = [&](const char* key) -> std::string {
    if (!j.contains(key)) return {};
    if (!j[key].is_string()) throw Error(ErrorCode::SchemaError, std::string(key) + " must be a string");
    return j[key].get<std::string>();
  };
  a.node = *type == ActionType::GotoRoom ? str("room") : str("viewpoint");
  a.text = str("text");
  if (auto h = str("heading"); !h.empty()) {
    a.heading = parse_heading(h);
    if (!a.heading) throw Error(ErrorCode::SchemaError, "bad heading " + h);
  }
  if (auto p = str("pitch"); !p.empty()) {
    a.pitch = parse_pitch(p);
    if (!a.pitch) throw Error(ErrorCode::SchemaError, "bad pitch " + p);
  }
  validate(a);
}

std::string describe(const Action& a) {
  std::ostringstream os;
  os << to_string(a.type);
  if (a.target) {
    if (a.target->is_instance()) {
      os << "(" << a.target->instance_id() << ")";
    } else {
      os << "(@" << a.target->coord().x << "," << a.target->coord().y << ")";
    }
  } else if (!a.node.empty()) {
    os << "(" << a.node << ")";
  } else if (!a.text.empty()) {
    os << "(\"" << a.text << "\")";
  }
  return os.str();
}

}  // namespace arena
