#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "arena/core/geometry.hpp"
#include "arena/core/pose.hpp"
#include "arena/core/registry.hpp"

namespace arena {

inline constexpr std::string_view kSceneSchema = "arena-scene/1";

struct Viewpoint {
  std::string id;
  std::string room;
  double x = 0;  // room-local meters
  double z = 0;
};

struct Room {
  std::string id;
  std::string name;
  Vec3 size;  // width (x), height (y), depth (z)
  std::string entry;  // viewpoint GotoRoom lands on
  Heading entry_heading = Heading::N;
  std::vector<std::string> viewpoints;
};

// Static part of a scene: rooms and the viewpoint graph. Shared between all
// states derived from one scene.
struct SceneLayout {
  std::map<std::string, Room, std::less<>> rooms;
  std::map<std::string, Viewpoint, std::less<>> viewpoints;
  // Undirected; neighbour lists sorted by id.
  std::map<std::string, std::vector<std::string>, std::less<>> adjacency;

  const Room* find_room(std::string_view id) const;
  const Viewpoint* find_viewpoint(std::string_view id) const;
  // Resolves a room by id or display name.
  const Room* room_by_name(std::string_view name) const;
  // Fewest-hop path from `from` to `to` inclusive of both ends; empty when
  // unreachable. Ties resolve towards lexicographically smaller ids.
  std::vector<std::string> shortest_path(std::string_view from, std::string_view to) const;
};

struct Camera {
  int width = 96;
  int height = 54;
  friend bool operator==(const Camera&, const Camera&) = default;
};

inline constexpr double kHorizontalFovDeg = 60.0;
inline constexpr double kFarPlane = 10.0;
inline constexpr double kNearPlane = 0.05;
inline constexpr double kEyeHeight = 1.5;
inline constexpr double kInteractionRange = 1.5;

struct ObjectInstance {
  std::string id;
  const ObjectClass* cls = nullptr;  // owned by the state's registry
  std::string room;
  Box box;
  std::map<std::string, bool, std::less<>> states;
  std::optional<std::string> contained_in;
  bool held = false;

  bool state(std::string_view key) const {
    auto it = states.find(key);
    return it != states.end() && it->second;
  }
};

// A complete simulator snapshot. Treated as an immutable value: operations
// return modified copies.
struct WorldState {
  std::string scene_id;
  RegistryPtr registry;
  std::shared_ptr<const SceneLayout> layout;
  Camera camera;
  std::map<std::string, ObjectInstance, std::less<>> objects;
  AgentPose agent;
  std::uint64_t tick = 0;

  const ObjectInstance* find(std::string_view id) const;
  const ObjectInstance* held_object() const;
  // Held objects travel with the agent; contained objects with their root.
  std::string effective_room(const ObjectInstance& obj) const;
  // Chain of receptacles enclosing `obj`, innermost first.
  std::vector<const ObjectInstance*> ancestors(const ObjectInstance& obj) const;
  // In the agent's room, not held (directly or via an ancestor) and not
  // shut inside a closed openable receptacle.
  bool renderable(const ObjectInstance& obj) const;
};

// Checks every structural invariant; throws Error{SchemaError or
// DanglingReference} describing the first violation.
void validate_world(const WorldState& state);

WorldState load_scene(const nlohmann::json& doc, RegistryPtr registry);
WorldState load_scene_file(const std::filesystem::path& path, RegistryPtr registry);

// Full state serialization (scene layout included) that load_scene accepts.
nlohmann::json scene_to_json(const WorldState& state);
// Dynamic part only: tick, agent and objects.
nlohmann::json dynamic_state_to_json(const WorldState& state);
// Restores a dynamic snapshot on top of a state of the same scene.
WorldState with_dynamic_state(const WorldState& base, const nlohmann::json& dynamic);

// Hex SHA-256 over the canonical dynamic serialization (sorted ids and keys).
std::string state_hash(const WorldState& state);

// Scene files found in a directory, keyed by scene_id.
class SceneLibrary {
 public:
  SceneLibrary(RegistryPtr registry) : registry_(std::move(registry)) {}

  void add(WorldState scene);
  void load_directory(const std::filesystem::path& dir);
  const WorldState& get(std::string_view scene_id) const;  // throws SceneNotFound
  bool contains(std::string_view scene_id) const { return scenes_.find(scene_id) != scenes_.end(); }
  const RegistryPtr& registry() const { return registry_; }
  const std::map<std::string, WorldState, std::less<>>& scenes() const { return scenes_; }

 private:
  RegistryPtr registry_;
  std::map<std::string, WorldState, std::less<>> scenes_;
};

}  // namespace arena
