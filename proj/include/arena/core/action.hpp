#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "arena/core/pose.hpp"

namespace arena {

enum class ActionType {
  // navigation
  MoveForward,
  MoveBackward,
  RotateLeft,
  RotateRight,
  LookUp,
  LookDown,
  GotoViewpoint,
  GotoRoom,
  // object interaction
  Pickup,
  Place,
  Open,
  Close,
  ToggleOn,
  ToggleOff,
  Slice,
  Pour,
  Break,
  Heat,
  Chill,
  Fill,
  Clean,
  Cook,
  Eat,
  Power,
  // user interaction
  Dialog,
  Highlight,
  Stop,
};

std::string_view to_string(ActionType t);
std::optional<ActionType> parse_action_type(std::string_view s);

bool is_navigation(ActionType t);
bool is_interaction(ActionType t);
bool is_user_interaction(ActionType t);
// Pickup, Place, Open, Close, ToggleOn, ToggleOff, Slice, Pour plus
// navigation and Stop.
bool in_edh_subset(ActionType t);

struct PixelCoord {
  int x = 0;
  int y = 0;
  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

// An interaction target: an instance id, or a cell of the current observation.
struct TargetSelector {
  std::variant<std::string, PixelCoord> value;

  static TargetSelector instance(std::string id) { return {std::move(id)}; }
  static TargetSelector at(int x, int y) { return {PixelCoord{x, y}}; }

  bool is_instance() const { return std::holds_alternative<std::string>(value); }
  const std::string& instance_id() const { return std::get<std::string>(value); }
  const PixelCoord& coord() const { return std::get<PixelCoord>(value); }

  friend bool operator==(const TargetSelector&, const TargetSelector&) = default;
};

// Tagged action. Which payload fields are meaningful depends on `type`:
//   interaction verbs, Highlight  -> target
//   GotoViewpoint                 -> node, or target (go to the viewpoint
//                                    serving that object); heading/pitch
//                                    optionally fix the final orientation
//   GotoRoom                      -> node (room id)
//   Dialog                        -> text
struct Action {
  ActionType type = ActionType::Stop;
  std::optional<TargetSelector> target;
  std::string node;
  std::string text;
  std::optional<Heading> heading;
  std::optional<Pitch> pitch;

  static Action simple(ActionType t) { return Action{t, std::nullopt, {}, {}, {}, {}}; }
  static Action on(ActionType t, TargetSelector sel) { return Action{t, std::move(sel), {}, {}, {}, {}}; }
  static Action on(ActionType t, std::string instance_id) {
    return on(t, TargetSelector::instance(std::move(instance_id)));
  }
  static Action goto_viewpoint(std::string node) {
    return Action{ActionType::GotoViewpoint, std::nullopt, std::move(node), {}, {}, {}};
  }
  static Action goto_object(std::string instance_id) {
    return on(ActionType::GotoViewpoint, std::move(instance_id));
  }
  static Action goto_room(std::string room) {
    return Action{ActionType::GotoRoom, std::nullopt, std::move(room), {}, {}, {}};
  }
  static Action dialog(std::string text) { return Action{ActionType::Dialog, std::nullopt, {}, std::move(text), {}, {}}; }

  friend bool operator==(const Action&, const Action&) = default;
};

// Throws Error{SchemaError} when the payload does not fit the type.
void validate(const Action& a);

void to_json(nlohmann::json& j, const Action& a);
void from_json(const nlohmann::json& j, Action& a);
void to_json(nlohmann::json& j, const TargetSelector& s);
void from_json(const nlohmann::json& j, TargetSelector& s);

std::string describe(const Action& a);

}  // namespace arena
