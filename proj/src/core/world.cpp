#include "arena/core/world.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <fstream>
#include <set>

#include "arena/core/digest.hpp"
#include "arena/core/error.hpp"
#include "arena/core/placement.hpp"

namespace arena {

using nlohmann::json;

// ---------------------------------------------------------------- layout

const Room* SceneLayout::find_room(std::string_view id) const {
  auto it = rooms.find(id);
  return it == rooms.end() ? nullptr : &it->second;
}

const Viewpoint* SceneLayout::find_viewpoint(std::string_view id) const {
  auto it = viewpoints.find(id);
  return it == viewpoints.end() ? nullptr : &it->second;
}

const Room* SceneLayout::room_by_name(std::string_view name) const {
  if (auto* r = find_room(name)) return r;
  auto lower = [](std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
  };
  const std::string want = lower(name);
  for (const auto& [id, room] : rooms) {
    if (lower(room.name) == want) return &room;
  }
  return nullptr;
}

std::vector<std::string> SceneLayout::shortest_path(std::string_view from, std::string_view to) const {
  if (!find_viewpoint(from) || !find_viewpoint(to)) return {};
  if (from == to) return {std::string(from)};
  std::map<std::string, std::string, std::less<>> parent;
  std::deque<std::string> frontier{std::string(from)};
  parent.emplace(std::string(from), std::string{});
  while (!frontier.empty()) {
    std::string cur = std::move(frontier.front());
    frontier.pop_front();
    auto adj = adjacency.find(cur);
    if (adj == adjacency.end()) continue;
    for (const auto& next : adj->second) {
      if (parent.count(next)) continue;
      parent.emplace(next, cur);
      if (next == to) {
        std::vector<std::string> path{next};
        for (std::string p = cur; !p.empty(); p = parent.at(p)) path.push_back(p);
        std::reverse(path.begin(), path.end());
        return path;
      }
      frontier.push_back(next);
    }
  }
  return {};
}

// ---------------------------------------------------------------- state

const ObjectInstance* WorldState::find(std::string_view id) const {
  auto it = objects.find(id);
  return it == objects.end() ? nullptr : &it->second;
}

const ObjectInstance* WorldState::held_object() const {
  for (const auto& [id, obj] : objects) {
    if (obj.held) return &obj;
  }
  return nullptr;
}

std::vector<const ObjectInstance*> WorldState::ancestors(const ObjectInstance& obj) const {
  std::vector<const ObjectInstance*> chain;
  const ObjectInstance* cur = &obj;
  while (cur->contained_in && chain.size() <= objects.size()) {
    cur = find(*cur->contained_in);
    if (!cur) break;
    chain.push_back(cur);
  }
  return chain;
}

std::string WorldState::effective_room(const ObjectInstance& obj) const {
  if (obj.held) return agent.room;
  auto chain = ancestors(obj);
  for (const auto* a : chain) {
    if (a->held) return agent.room;
  }
  return chain.empty() ? obj.room : chain.back()->room;
}

bool WorldState::renderable(const ObjectInstance& obj) const {
  if (obj.held) return false;
  for (const auto* a : ancestors(obj)) {
    if (a->held) return false;
    if (a->cls->has(AffordanceProperty::Openable) && !a->state(state_key::kIsOpen)) return false;
  }
  return effective_room(obj) == agent.room;
}

void validate_world(const WorldState& s) {
  auto dangling = [](const std::string& what) { throw Error(ErrorCode::DanglingReference, what); };
  auto schema = [](const std::string& what) { throw Error(ErrorCode::SchemaError, what); };
  if (!s.layout || !s.registry) schema("state without layout or registry");
  const auto& layout = *s.layout;
  const auto* vp = layout.find_viewpoint(s.agent.viewpoint);
  if (!vp) dangling("agent viewpoint " + s.agent.viewpoint);
  if (vp->room != s.agent.room) schema("agent viewpoint " + vp->id + " is not in room " + s.agent.room);
  int held = 0;
  for (const auto& [id, obj] : s.objects) {
    if (id != obj.id) schema("object key mismatch " + id);
    if (!obj.cls) dangling("object " + id + " has no class");
    if (!layout.find_room(obj.room)) dangling("object " + id + " room " + obj.room);
    for (const auto& [k, v] : obj.states) {
      if (!obj.cls->licenses_state(k)) schema("object " + id + " state " + k + " not licensed by " + obj.cls->name);
    }
    if (obj.held) {
      ++held;
      if (obj.contained_in) schema("held object " + id + " is also contained");
      if (!obj.cls->has(AffordanceProperty::Pickupable)) schema("held object " + id + " is not pickupable");
    }
    if (obj.contained_in) {
      const auto* r = s.find(*obj.contained_in);
      if (!r) dangling("object " + id + " contained in " + *obj.contained_in);
      if (!r->cls->has(AffordanceProperty::Receptacle)) schema("object " + id + " contained in non-receptacle " + r->id);
      std::set<std::string> seen{id};
      for (const ObjectInstance* cur = r; cur; cur = cur->contained_in ? s.find(*cur->contained_in) : nullptr) {
        if (!seen.insert(cur->id).second) schema("containment cycle through " + id);
      }
    }
  }
  if (held > 1) schema("more than one held object");
}

// ---------------------------------------------------------------- json

namespace {

Vec3 vec_from(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::SchemaError, std::string(what) + " must be [x,y,z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json vec_to(Vec3 v) { return json::array({v.x, v.y, v.z}); }

json object_to_json(const ObjectInstance& o) {
  json states = json::object();
  for (const auto& [k, v] : o.states) states[k] = v;
  return json{{"id", o.id},
              {"class", o.cls->name},
              {"room", o.room},
              {"position", vec_to(o.box.center)},
              {"size", vec_to(o.box.size)},
              {"states", states},
              {"contained_in", o.contained_in ? json(*o.contained_in) : json(nullptr)},
              {"held", o.held}};
}

// Objects without an explicit position are placed into their receptacle,
// which therefore must be resolved first.
std::map<std::string, ObjectInstance, std::less<>> objects_from_json(const json& arr, const ClassRegistry& reg) {
  if (!arr.is_array()) throw Error(ErrorCode::SchemaError, "objects must be an array");
  std::map<std::string, ObjectInstance, std::less<>> objects;
  std::map<std::string, const json*> pending_position;
  for (const auto& o : arr) {
    ObjectInstance inst;
    inst.id = o.at("id").get<std::string>();
    if (inst.id.empty()) throw Error(ErrorCode::SchemaError, "empty object id");
    const std::string cls = o.at("class").get<std::string>();
    inst.cls = reg.find(cls);
    if (!inst.cls) throw Error(ErrorCode::DanglingReference, "object " + inst.id + " class " + cls);
    inst.room = o.value("room", std::string{});
    inst.states = {inst.cls->default_states.begin(), inst.cls->default_states.end()};
    if (o.contains("states")) {
      for (const auto& [k, v] : o["states"].items()) {
        if (!inst.cls->licenses_state(k)) {
          throw Error(ErrorCode::SchemaError, "object " + inst.id + " state " + k + " not licensed by " + cls);
        }
        inst.states[k] = v.get<bool>();
      }
    }
    if (o.contains("contained_in") && !o["contained_in"].is_null()) inst.contained_in = o["contained_in"].get<std::string>();
    inst.held = o.value("held", false);
    inst.box.size = vec_from(o.at("size"), "size");
    if (o.contains("position")) {
      inst.box.center = vec_from(o["position"], "position");
    } else if (!inst.contained_in) {
      throw Error(ErrorCode::SchemaError, "object " + inst.id + " needs a position");
    } else {
      pending_position.emplace(inst.id, &o);
    }
    if (objects.count(inst.id)) throw Error(ErrorCode::DuplicateId, "object " + inst.id);
    objects.emplace(inst.id, std::move(inst));
  }
  // Resolve implicit positions outermost first.
  for (std::size_t guard = 0; !pending_position.empty() && guard <= objects.size(); ++guard) {
    for (auto it = pending_position.begin(); it != pending_position.end();) {
      auto& inst = objects.at(it->first);
      auto rec = objects.find(*inst.contained_in);
      if (rec == objects.end()) throw Error(ErrorCode::DanglingReference, "object " + inst.id + " contained in " + *inst.contained_in);
      if (pending_position.count(rec->first)) {
        ++it;
        continue;
      }
      inst.box = placement_box(rec->second, inst.box.size);
      if (inst.room.empty()) inst.room = rec->second.room;
      it = pending_position.erase(it);
    }
  }
  if (!pending_position.empty()) throw Error(ErrorCode::SchemaError, "containment cycle among unplaced objects");
  for (auto& [id, inst] : objects) {
    if (inst.room.empty() && inst.contained_in) {
      if (auto rec = objects.find(*inst.contained_in); rec != objects.end()) inst.room = rec->second.room;
    }
  }
  return objects;
}

std::shared_ptr<const SceneLayout> layout_from_json(const json& doc) {
  auto layout = std::make_shared<SceneLayout>();
  for (const auto& r : doc.at("rooms")) {
    Room room;
    room.id = r.at("id").get<std::string>();
    room.name = r.value("name", room.id);
    room.size = vec_from(r.at("size"), "room size");
    auto heading = parse_heading(r.value("entry_heading", std::string{"N"}));
    if (!heading) throw Error(ErrorCode::SchemaError, "room " + room.id + " entry_heading");
    room.entry_heading = *heading;
    for (const auto& v : r.at("viewpoints")) {
      Viewpoint vp{v.at("id").get<std::string>(), room.id, v.at("x").get<double>(), v.at("z").get<double>()};
      if (layout->viewpoints.count(vp.id)) throw Error(ErrorCode::DuplicateId, "viewpoint " + vp.id);
      room.viewpoints.push_back(vp.id);
      layout->adjacency[vp.id];
      layout->viewpoints.emplace(vp.id, std::move(vp));
    }
    if (room.viewpoints.empty()) throw Error(ErrorCode::SchemaError, "room " + room.id + " has no viewpoints");
    room.entry = r.value("entry", room.viewpoints.front());
    if (std::find(room.viewpoints.begin(), room.viewpoints.end(), room.entry) == room.viewpoints.end()) {
      throw Error(ErrorCode::DanglingReference, "room " + room.id + " entry " + room.entry);
    }
    if (layout->rooms.count(room.id)) throw Error(ErrorCode::DuplicateId, "room " + room.id);
    layout->rooms.emplace(room.id, std::move(room));
  }
  if (layout->rooms.empty()) throw Error(ErrorCode::SchemaError, "scene has no rooms");
  for (const auto& e : doc.value("edges", json::array())) {
    if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::SchemaError, "edge must be a pair");
    const auto a = e[0].get<std::string>(), b = e[1].get<std::string>();
    if (!layout->viewpoints.count(a) || !layout->viewpoints.count(b)) {
      throw Error(ErrorCode::DanglingReference, "edge " + a + "-" + b);
    }
    if (a == b) throw Error(ErrorCode::SchemaError, "self edge " + a);
    layout->adjacency[a].push_back(b);
    layout->adjacency[b].push_back(a);
  }
  for (auto& [id, adj] : layout->adjacency) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
  return layout;
}

AgentPose pose_from_json(const json& j, const SceneLayout& layout) {
  AgentPose pose = j.get<AgentPose>();
  const auto* vp = layout.find_viewpoint(pose.viewpoint);
  if (!vp) throw Error(ErrorCode::DanglingReference, "agent viewpoint " + pose.viewpoint);
  if (pose.room.empty()) pose.room = vp->room;
  return pose;
}

json layout_to_json(const SceneLayout& layout) {
  json rooms = json::array();
  for (const auto& [id, r] : layout.rooms) {
    json vps = json::array();
    for (const auto& v : r.viewpoints) {
      const auto& vp = layout.viewpoints.at(v);
      vps.push_back({{"id", vp.id}, {"x", vp.x}, {"z", vp.z}});
    }
    rooms.push_back({{"id", r.id},
                     {"name", r.name},
                     {"size", vec_to(r.size)},
                     {"entry", r.entry},
                     {"entry_heading", std::string(to_string(r.entry_heading))},
                     {"viewpoints", vps}});
  }
  json edges = json::array();
  for (const auto& [a, adj] : layout.adjacency) {
    for (const auto& b : adj) {
      if (a < b) edges.push_back(json::array({a, b}));
    }
  }
  return {{"rooms", rooms}, {"edges", edges}};
}

}  // namespace

WorldState load_scene(const json& doc, RegistryPtr registry) {
  if (!doc.is_object()) throw Error(ErrorCode::SchemaError, "scene must be an object");
  if (doc.value("schema", std::string{}) != kSceneSchema) {
    throw Error(ErrorCode::SchemaError, "scene schema must be " + std::string(kSceneSchema));
  }
  WorldState s;
  try {
    s.scene_id = doc.at("scene_id").get<std::string>();
    s.registry = std::move(registry);
    s.layout = layout_from_json(doc);
    if (doc.contains("camera")) {
      s.camera.width = doc["camera"].at("width").get<int>();
      s.camera.height = doc["camera"].at("height").get<int>();
      if (s.camera.width < 16 || s.camera.height < 16) throw Error(ErrorCode::SchemaError, "camera below 16x16");
    }
    s.agent = pose_from_json(doc.at("agent"), *s.layout);
    s.objects = objects_from_json(doc.value("objects", json::array()), *s.registry);
    s.tick = doc.value("tick", std::uint64_t{0});
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("scene: ") + e.what());
  }
  validate_world(s);
  return s;
}

WorldState load_scene_file(const std::filesystem::path& path, RegistryPtr registry) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, path.string() + ": " + e.what());
  }
  return load_scene(doc, std::move(registry));
}

json dynamic_state_to_json(const WorldState& s) {
  json objects = json::array();
  for (const auto& [id, o] : s.objects) objects.push_back(object_to_json(o));
  return json{{"scene_id", s.scene_id},
              {"tick", s.tick},
              {"camera", {{"width", s.camera.width}, {"height", s.camera.height}}},
              {"agent", s.agent},
              {"objects", objects}};
}

json scene_to_json(const WorldState& s) {
  json doc = dynamic_state_to_json(s);
  doc["schema"] = std::string(kSceneSchema);
  json layout = layout_to_json(*s.layout);
  doc["rooms"] = std::move(layout["rooms"]);
  doc["edges"] = std::move(layout["edges"]);
  return doc;
}

WorldState with_dynamic_state(const WorldState& base, const json& dynamic) {
  WorldState s = base;
  try {
    if (dynamic.value("scene_id", s.scene_id) != base.scene_id) {
      throw Error(ErrorCode::SceneMismatch, "snapshot of scene " + dynamic.value("scene_id", std::string{}));
    }
    s.tick = dynamic.at("tick").get<std::uint64_t>();
    s.agent = pose_from_json(dynamic.at("agent"), *s.layout);
    s.objects = objects_from_json(dynamic.at("objects"), *s.registry);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("state snapshot: ") + e.what());
  }
  validate_world(s);
  return s;
}

std::string state_hash(const WorldState& s) { return sha256_hex(dynamic_state_to_json(s).dump()); }

// ---------------------------------------------------------------- library

void SceneLibrary::add(WorldState scene) {
  if (scenes_.count(scene.scene_id)) throw Error(ErrorCode::DuplicateId, "scene " + scene.scene_id);
  std::string id = scene.scene_id;
  scenes_.emplace(std::move(id), std::move(scene));
}

void SceneLibrary::load_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error(ErrorCode::IoError, "not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) add(load_scene_file(f, registry_));
}

const WorldState& SceneLibrary::get(std::string_view scene_id) const {
  auto it = scenes_.find(scene_id);
  if (it == scenes_.end()) throw Error(ErrorCode::SceneNotFound, std::string(scene_id));
  return it->second;
}

}  // namespace arena
