#include "arena/core/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "arena/core/digest.hpp"
#include "arena/core/error.hpp"
#include "arena/core/observation.hpp"
#include "arena/core/placement.hpp"

namespace arena {

std::string_view to_string(FailureCode c) {
  switch (c) {
    case FailureCode::ActionNotApplicable: return "ActionNotApplicable";
    case FailureCode::TargetNotVisible: return "TargetNotVisible";
    case FailureCode::TargetNotResolvable: return "TargetNotResolvable";
    case FailureCode::HandOccupied: return "HandOccupied";
    case FailureCode::HandEmpty: return "HandEmpty";
    case FailureCode::ReceptacleClosed: return "ReceptacleClosed";
    case FailureCode::NavigationBlocked: return "NavigationBlocked";
    case FailureCode::DecorTarget: return "DecorTarget";
  }
  return "?";
}

std::optional<FailureCode> parse_failure_code(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(FailureCode::DecorTarget); ++i) {
    auto c = static_cast<FailureCode>(i);
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

void to_json(nlohmann::json& j, const ActionResult& r) {
  j = nlohmann::json{{"ok", r.ok},
                     {"failure", r.failure ? nlohmann::json(std::string(to_string(*r.failure))) : nlohmann::json()},
                     {"delta", r.delta},
                     {"frames", r.frames}};
  if (r.highlighted) j["highlighted"] = *r.highlighted;
}

void from_json(const nlohmann::json& j, ActionResult& r) {
  try {
    r.ok = j.at("ok").get<bool>();
    r.failure.reset();
    if (j.contains("failure") && !j["failure"].is_null()) {
      r.failure = parse_failure_code(j["failure"].get<std::string>());
      if (!r.failure) throw Error(ErrorCode::SchemaError, "unknown failure code");
    }
    if (r.ok == r.failure.has_value()) throw Error(ErrorCode::SchemaError, "ok XOR failure violated");
    r.delta = j.value("delta", StateDelta{});
    r.frames = j.value("frames", std::vector<AgentPose>{});
    r.highlighted.reset();
    if (j.contains("highlighted")) r.highlighted = j["highlighted"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("action result: ") + e.what());
  }
}

std::string result_digest(const ActionResult& r) { return sha256_hex(nlohmann::json(r).dump()); }

namespace {

using P = AffordanceProperty;

struct Failure {
  FailureCode code;
};

Heading cardinal_towards(double dx, double dz, Heading fallback) {
  if (dx == 0 && dz == 0) return fallback;
  if (std::abs(dz) >= std::abs(dx)) return dz > 0 ? Heading::N : Heading::S;
  return dx > 0 ? Heading::E : Heading::W;
}

// Mutable scratch state for one action application.
class Step {
 public:
  Step(const WorldState& before, const Action& action) : before_(before), action_(action), next_(before) {
    ++next_.tick;
  }

  std::pair<WorldState, ActionResult> run() {
    try {
      validate(action_);
    } catch (const Error&) {
      return fail(FailureCode::ActionNotApplicable);
    }
    try {
      dispatch();
    } catch (const Failure& f) {
      return fail(f.code);
    }
    if (result_.frames.empty()) result_.frames.push_back(next_.agent);
    return {std::move(next_), std::move(result_)};
  }

 private:
  std::pair<WorldState, ActionResult> fail(FailureCode code) {
    WorldState s = before_;
    ++s.tick;
    return {std::move(s), ActionResult::failed(code, before_.agent)};
  }

  [[noreturn]] static void reject(FailureCode code) { throw Failure{code}; }

  void dispatch() {
    switch (action_.type) {
      case ActionType::Stop:
      case ActionType::Dialog: return;
      case ActionType::Highlight: {
        result_.highlighted = resolve_visible(/*require_range=*/false);
        return;
      }
      case ActionType::MoveForward: return move(false);
      case ActionType::MoveBackward: return move(true);
      case ActionType::RotateLeft: next_.agent.heading = rotate_left(next_.agent.heading); return;
      case ActionType::RotateRight: next_.agent.heading = rotate_right(next_.agent.heading); return;
      case ActionType::LookUp:
        if (next_.agent.pitch == Pitch::Up) reject(FailureCode::NavigationBlocked);
        next_.agent.pitch = next_.agent.pitch == Pitch::Down ? Pitch::Level : Pitch::Up;
        return;
      case ActionType::LookDown:
        if (next_.agent.pitch == Pitch::Down) reject(FailureCode::NavigationBlocked);
        next_.agent.pitch = next_.agent.pitch == Pitch::Up ? Pitch::Level : Pitch::Down;
        return;
      case ActionType::GotoRoom: return goto_room();
      case ActionType::GotoViewpoint: return goto_viewpoint();
      default: break;
    }
    interact();
  }

  // ------------------------------------------------------------ targeting

  const Observation& observation() {
    if (!obs_) obs_ = render_observation(before_);
    return *obs_;
  }

  // Instance id named by the action's selector, resolved via the current
  // observation for coordinates; not checked for visibility.
  std::string resolve_any() {
    const auto& sel = *action_.target;
    if (sel.is_instance()) {
      if (!before_.find(sel.instance_id())) reject(FailureCode::TargetNotResolvable);
      return sel.instance_id();
    }
    const auto& obs = observation();
    auto id = obs.id_at(sel.coord().x, sel.coord().y);
    if (!id) reject(FailureCode::TargetNotResolvable);
    return *id;
  }

  std::string resolve_visible(bool require_range) {
    std::string id = resolve_any();
    const auto* vis = observation().find_visible(id);
    if (!vis) reject(FailureCode::TargetNotVisible);
    if (require_range && vis->depth > kInteractionRange) reject(FailureCode::TargetNotVisible);
    return id;
  }

  // ------------------------------------------------------------ navigation

  AgentPose pose_at(const std::string& vp, Heading h, Pitch p) const {
    return AgentPose{before_.layout->viewpoints.at(vp).room, vp, h, p};
  }

  void move(bool backward) {
    const auto& layout = *before_.layout;
    const auto& cur = layout.viewpoints.at(before_.agent.viewpoint);
    double fx = 0, fz = 0;
    switch (before_.agent.heading) {
      case Heading::N: fz = 1; break;
      case Heading::E: fx = 1; break;
      case Heading::S: fz = -1; break;
      case Heading::W: fx = -1; break;
    }
    if (backward) fx = -fx, fz = -fz;
    const std::string* best = nullptr;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const auto& nid : layout.adjacency.at(cur.id)) {
      const auto& n = layout.viewpoints.at(nid);
      if (n.room != cur.room) continue;
      const double dx = n.x - cur.x, dz = n.z - cur.z;
      const double along = dx * fx + dz * fz;
      const double across = std::abs(dx * fz - dz * fx);
      if (along <= 0 || across > along) continue;
      const double dist = std::hypot(dx, dz);
      if (dist < best_dist) {
        best_dist = dist;
        best = &nid;
      }
    }
    if (!best) reject(FailureCode::NavigationBlocked);
    next_.agent = pose_at(*best, before_.agent.heading, before_.agent.pitch);
  }

  // Walks `path` emitting one frame per hop; the last frame takes the final
  // orientation.
  void walk(const std::vector<std::string>& path, Heading final_heading, Pitch final_pitch) {
    const auto& layout = *before_.layout;
    Heading h = before_.agent.heading;
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
      const auto& a = layout.viewpoints.at(path[i - 1]);
      const auto& b = layout.viewpoints.at(path[i]);
      if (a.room == b.room) h = cardinal_towards(b.x - a.x, b.z - a.z, h);
      result_.frames.push_back(pose_at(path[i], h, before_.agent.pitch));
    }
    next_.agent = pose_at(path.back(), final_heading, final_pitch);
    result_.frames.push_back(next_.agent);
  }

  Heading travel_heading(const std::vector<std::string>& path) const {
    if (path.size() < 2) return before_.agent.heading;
    const auto& a = before_.layout->viewpoints.at(path[path.size() - 2]);
    const auto& b = before_.layout->viewpoints.at(path.back());
    if (a.room != b.room) return before_.agent.heading;
    return cardinal_towards(b.x - a.x, b.z - a.z, before_.agent.heading);
  }

  void goto_room() {
    const Room* room = before_.layout->room_by_name(action_.node);
    if (!room) reject(FailureCode::TargetNotResolvable);
    auto path = before_.layout->shortest_path(before_.agent.viewpoint, room->entry);
    if (path.empty()) reject(FailureCode::NavigationBlocked);
    walk(path, action_.heading.value_or(room->entry_heading), action_.pitch.value_or(Pitch::Level));
  }

  void goto_viewpoint() {
    const auto& layout = *before_.layout;
    if (!action_.target) {
      if (!layout.find_viewpoint(action_.node)) reject(FailureCode::TargetNotResolvable);
      auto path = layout.shortest_path(before_.agent.viewpoint, action_.node);
      if (path.empty()) reject(FailureCode::NavigationBlocked);
      walk(path, action_.heading.value_or(travel_heading(path)), action_.pitch.value_or(before_.agent.pitch));
      return;
    }
    const std::string id = resolve_any();
    const ObjectInstance& obj = before_.objects.at(id);
    if (obj.held) reject(FailureCode::ActionNotApplicable);
    const Room& room = layout.rooms.at(before_.effective_room(obj));
    const std::string* best = nullptr;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const auto& vid : room.viewpoints) {
      const auto& v = layout.viewpoints.at(vid);
      const double d = std::hypot(v.x - obj.box.center.x, v.z - obj.box.center.z);
      if (d < best_dist) {
        best_dist = d;
        best = &vid;
      }
    }
    auto path = layout.shortest_path(before_.agent.viewpoint, *best);
    if (path.empty()) reject(FailureCode::NavigationBlocked);
    const auto& vp = layout.viewpoints.at(*best);
    const Heading heading = action_.heading.value_or(
        cardinal_towards(obj.box.center.x - vp.x, obj.box.center.z - vp.z, travel_heading(path)));
    const Pitch pitch = action_.pitch ? *action_.pitch : best_pitch(obj, *best, heading);
    walk(path, heading, pitch);
  }

  // The pitch that shows the most of `obj` (or of the receptacle hiding it)
  // from the given viewpoint; ties prefer level, then down.
  Pitch best_pitch(const ObjectInstance& obj, const std::string& vp, Heading heading) const {
    WorldState probe = before_;
    probe.agent = pose_at(vp, heading, Pitch::Level);
    const ObjectInstance* focus = &obj;
    if (!probe.renderable(obj)) {
      for (const auto* a : probe.ancestors(obj)) {
        focus = a;
        if (probe.renderable(*a)) break;
      }
    }
    Pitch best = Pitch::Level;
    int best_cells = 0;
    for (Pitch p : {Pitch::Level, Pitch::Down, Pitch::Up}) {
      probe.agent = pose_at(vp, heading, p);
      const Observation o = render_observation(probe);
      const auto* v = o.find_visible(focus->id);
      const int cells = v ? v->cells : 0;
      if (cells > best_cells) {
        best_cells = cells;
        best = p;
      }
    }
    return best;
  }

  // ------------------------------------------------------------ interaction

  ObjectInstance& mut(const std::string& id) { return next_.objects.at(id); }

  void set_state(const std::string& id, std::string_view key, bool value) {
    auto& o = mut(id);
    auto it = o.states.find(key);
    const bool old = it != o.states.end() && it->second;
    o.states[std::string(key)] = value;
    record_change(result_.delta, id, std::string(key), old, value);
  }

  // Requires `key` to flip from !value to value.
  void transition(const std::string& id, std::string_view key, bool value) {
    if (before_.objects.at(id).state(key) == value) reject(FailureCode::ActionNotApplicable);
    set_state(id, key, value);
  }

  void interact() {
    const std::string id = resolve_visible(/*require_range=*/true);
    const ObjectInstance& target = before_.objects.at(id);
    if (target.cls->is_decor()) reject(FailureCode::DecorTarget);

    const auto verb = action_.type;
    if (verb == ActionType::Slice) {
      if (!target.cls->sliceable) reject(FailureCode::ActionNotApplicable);
    } else {
      const auto props = licensing_properties(verb);
      if (std::none_of(props.begin(), props.end(), [&](P p) { return target.cls->has(p); }) &&
          verb != ActionType::Pour) {
        reject(FailureCode::ActionNotApplicable);
      }
    }

    const ObjectInstance* held = before_.held_object();
    using namespace state_key;
    switch (verb) {
      case ActionType::Pickup: return pickup(target, held);
      case ActionType::Place: return place(target, held);
      case ActionType::Open: return transition(id, kIsOpen, true);
      case ActionType::Close: return transition(id, kIsOpen, false);
      case ActionType::ToggleOn:
        if (target.cls->has(P::Powerable) && !target.state(kIsPowered)) reject(FailureCode::ActionNotApplicable);
        return transition(id, kIsToggledOn, true);
      case ActionType::ToggleOff: return transition(id, kIsToggledOn, false);
      case ActionType::Slice:
        if (!held) reject(FailureCode::HandEmpty);
        if (!held->cls->has_marker("tool:knife")) reject(FailureCode::ActionNotApplicable);
        return transition(id, kIsSliced, true);
      case ActionType::Pour: return pour(target, held);
      case ActionType::Break: return transition(id, kIsBroken, true);
      case ActionType::Heat:
        transition(id, kIsHeated, true);
        if (target.cls->has(P::Chillable)) set_state(id, kIsChilled, false);
        return;
      case ActionType::Chill:
        transition(id, kIsChilled, true);
        if (target.cls->has(P::Heatable)) set_state(id, kIsHeated, false);
        return;
      case ActionType::Fill: return transition(id, kIsFilled, true);
      case ActionType::Clean: {
        if (!target.state(kIsDirty) && !target.state(kIsInfected)) reject(FailureCode::ActionNotApplicable);
        if (target.cls->has(P::Dirtyable)) set_state(id, kIsDirty, false);
        if (target.cls->has(P::Infectable)) set_state(id, kIsInfected, false);
        return;
      }
      case ActionType::Cook: return transition(id, kIsCooked, true);
      case ActionType::Eat: return transition(id, kIsEaten, true);
      case ActionType::Power: {
        const bool on = !target.state(kIsPowered);
        set_state(id, kIsPowered, on);
        if (!on && target.cls->has(P::Toggleable)) set_state(id, kIsToggledOn, false);
        return;
      }
      default: reject(FailureCode::ActionNotApplicable);
    }
  }

  void pickup(const ObjectInstance& target, const ObjectInstance* held) {
    if (held) reject(FailureCode::HandOccupied);
    auto& o = mut(target.id);
    record_change(result_.delta, o.id, std::string(state_key::kHeld), false, true);
    if (o.contained_in) {
      record_change(result_.delta, o.id, std::string(state_key::kContainedIn), *o.contained_in, StateValue{});
    }
    o.held = true;
    o.contained_in.reset();
    o.room = before_.agent.room;
  }

  void place(const ObjectInstance& target, const ObjectInstance* held) {
    if (!held) reject(FailureCode::HandEmpty);
    if (held->id == target.id) reject(FailureCode::ActionNotApplicable);
    for (const auto* a : before_.ancestors(target)) {
      if (a->id == held->id) reject(FailureCode::ActionNotApplicable);
    }
    if (target.cls->has(P::Openable) && !target.state(state_key::kIsOpen)) reject(FailureCode::ReceptacleClosed);

    auto& o = mut(held->id);
    const Box moved = placement_box(target, o.box.size);
    const Vec3 offset = moved.center - o.box.center;
    const std::string room = before_.effective_room(target);
    record_change(result_.delta, o.id, std::string(state_key::kHeld), true, false);
    record_change(result_.delta, o.id, std::string(state_key::kContainedIn), StateValue{}, target.id);
    o.held = false;
    o.contained_in = target.id;
    o.box = moved;
    o.room = room;
    // Contents travel with their receptacle.
    for (auto& [cid, c] : next_.objects) {
      if (cid == o.id) continue;
      for (const auto* a : before_.ancestors(before_.objects.at(cid))) {
        if (a->id == held->id) {
          c.box.center = c.box.center + offset;
          c.room = room;
          break;
        }
      }
    }
  }

  void pour(const ObjectInstance& target, const ObjectInstance* held) {
    using namespace state_key;
    if (!held) reject(FailureCode::HandEmpty);
    if (!held->cls->has(P::Fillable) || !held->state(kIsFilled)) reject(FailureCode::ActionNotApplicable);
    set_state(held->id, kIsFilled, false);
    if (target.cls->has(P::Fillable) && target.id != held->id) set_state(target.id, kIsFilled, true);
  }

  const WorldState& before_;
  const Action& action_;
  WorldState next_;
  ActionResult result_;
  std::optional<Observation> obs_;
};

}  // namespace

std::pair<WorldState, ActionResult> apply_action(const WorldState& state, const Action& action) {
  return Step(state, action).run();
}

}  // namespace arena
