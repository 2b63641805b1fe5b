#include "arena/core/observation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <tuple>

#include "arena/core/error.hpp"
#include "arena/core/world.hpp"

namespace arena {

namespace {

struct CameraFrame {
  Vec3 eye;
  Vec3 right;
  Vec3 up;
  Vec3 forward;
  double focal;  // pixels
};

Vec3 heading_vector(Heading h) {
  switch (h) {
    case Heading::N: return {0, 0, 1};
    case Heading::E: return {1, 0, 0};
    case Heading::S: return {0, 0, -1};
    case Heading::W: return {-1, 0, 0};
  }
  return {0, 0, 1};
}

CameraFrame camera_frame(const WorldState& s, int width) {
  const auto& vp = s.layout->viewpoints.at(s.agent.viewpoint);
  const Vec3 f = heading_vector(s.agent.heading);
  const Vec3 world_up{0, 1, 0};
  const double th = pitch_degrees(s.agent.pitch) * std::numbers::pi / 180.0;
  CameraFrame c;
  c.eye = {vp.x, kEyeHeight, vp.z};
  c.right = {f.z, 0, -f.x};
  c.forward = std::cos(th) * f + std::sin(th) * world_up;
  c.up = (-std::sin(th)) * f + std::cos(th) * world_up;
  c.focal = (width / 2.0) / std::tan(kHorizontalFovDeg / 2.0 * std::numbers::pi / 180.0);
  return c;
}

struct Projected {
  const ObjectInstance* obj;
  double umin, umax, vmin, vmax;
  double depth;
  // Front-most wins: smaller key is nearer. Contents of a receptacle draw over
  // the receptacle itself.
  std::tuple<double, int, double, std::string_view> key;
};

std::optional<Projected> project(const WorldState& s, const ObjectInstance& obj, const CameraFrame& cam, int width,
                                 int height) {
  const double depth = obj.box.distance_to(cam.eye);
  if (depth > kFarPlane) return std::nullopt;
  const Vec3 lo = obj.box.min(), hi = obj.box.max();
  Projected p{&obj, 1e300, -1e300, 1e300, -1e300, depth, {}};
  bool any_in_front = false;
  for (int i = 0; i < 8; ++i) {
    const Vec3 corner{(i & 1) ? hi.x : lo.x, (i & 2) ? hi.y : lo.y, (i & 4) ? hi.z : lo.z};
    const Vec3 d = corner - cam.eye;
    const double cz = dot(d, cam.forward);
    if (cz >= kNearPlane) any_in_front = true;
    const double z = std::max(cz, kNearPlane);
    const double u = width / 2.0 + cam.focal * dot(d, cam.right) / z;
    const double v = height / 2.0 - cam.focal * dot(d, cam.up) / z;
    p.umin = std::min(p.umin, u);
    p.umax = std::max(p.umax, u);
    p.vmin = std::min(p.vmin, v);
    p.vmax = std::max(p.vmax, v);
  }
  if (!any_in_front) return std::nullopt;
  const auto chain = s.ancestors(obj);
  const double root_depth = chain.empty() ? depth : chain.back()->box.distance_to(cam.eye);
  p.key = {root_depth, -static_cast<int>(chain.size()), depth, obj.id};
  return p;
}

}  // namespace

Observation render_observation(const WorldState& s) { return render_observation(s, s.camera.width, s.camera.height); }

Observation render_observation(const WorldState& s, int width, int height) {
  width = std::max(width, 16);
  height = std::max(height, 16);
  const CameraFrame cam = camera_frame(s, width);

  std::vector<Projected> drawn;
  for (const auto& [id, obj] : s.objects) {
    if (!s.renderable(obj)) continue;
    if (auto p = project(s, obj, cam, width, height)) drawn.push_back(*p);
  }
  // Painter's order: farthest first so nearer objects overwrite.
  std::sort(drawn.begin(), drawn.end(), [](const Projected& a, const Projected& b) { return a.key > b.key; });

  std::vector<std::int32_t> owner(static_cast<std::size_t>(width) * height, -1);
  for (std::size_t i = 0; i < drawn.size(); ++i) {
    const auto& p = drawn[i];
    const int x0 = std::max(0, static_cast<int>(std::floor(std::max(p.umin, -1.0))) - 1);
    const int x1 = std::min(width - 1, static_cast<int>(std::ceil(std::min(p.umax, width + 1.0))) + 1);
    const int y0 = std::max(0, static_cast<int>(std::floor(std::max(p.vmin, -1.0))) - 1);
    const int y1 = std::min(height - 1, static_cast<int>(std::ceil(std::min(p.vmax, height + 1.0))) + 1);
    for (int y = y0; y <= y1; ++y) {
      const double cy = y + 0.5;
      if (cy < p.vmin || cy > p.vmax) continue;
      for (int x = x0; x <= x1; ++x) {
        const double cx = x + 0.5;
        if (cx < p.umin || cx > p.umax) continue;
        owner[static_cast<std::size_t>(y) * width + x] = static_cast<std::int32_t>(i);
      }
    }
  }

  Observation obs;
  obs.width = width;
  obs.height = height;
  obs.pose = s.agent;
  obs.tick = s.tick;
  obs.cells.assign(owner.size(), -1);
  obs.depth.assign(owner.size(), kFarPlane);

  // Visible list sorted by id; remap drawn index -> visible index.
  std::vector<int> counts(drawn.size(), 0);
  for (auto o : owner) {
    if (o >= 0) ++counts[o];
  }
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < drawn.size(); ++i) {
    if (counts[i] > 0) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return drawn[a].obj->id < drawn[b].obj->id; });
  std::vector<std::int32_t> remap(drawn.size(), -1);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& p = drawn[order[k]];
    remap[order[k]] = static_cast<std::int32_t>(k);
    obs.visible.push_back(VisibleObject{p.obj->id, p.obj->cls->name, 0, width, height, -1, -1, p.depth});
  }
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * width + x;
      if (owner[idx] < 0) continue;
      const auto v = remap[owner[idx]];
      auto& vis = obs.visible[v];
      obs.cells[idx] = v;
      obs.depth[idx] = vis.depth;
      ++vis.cells;
      vis.x0 = std::min(vis.x0, x);
      vis.y0 = std::min(vis.y0, y);
      vis.x1 = std::max(vis.x1, x);
      vis.y1 = std::max(vis.y1, y);
    }
  }
  return obs;
}

std::optional<std::string> Observation::id_at(int x, int y) const {
  if (x < 0 || y < 0 || x >= width || y >= height) return std::nullopt;
  const auto v = cells[static_cast<std::size_t>(y) * width + x];
  if (v < 0) return std::nullopt;
  return visible[v].id;
}

const VisibleObject* Observation::find_visible(std::string_view id) const {
  auto it = std::lower_bound(visible.begin(), visible.end(), id,
                             [](const VisibleObject& v, std::string_view k) { return v.id < k; });
  return it != visible.end() && it->id == id ? &*it : nullptr;
}

std::optional<std::string> object_at(const Observation& obs, int x, int y) {
  if (x < 0 || y < 0 || x >= obs.width || y >= obs.height) {
    throw Error(ErrorCode::CoordinateOutOfBounds,
                "(" + std::to_string(x) + "," + std::to_string(y) + ") outside " + std::to_string(obs.width) + "x" +
                    std::to_string(obs.height));
  }
  return obs.id_at(x, y);
}

void to_json(nlohmann::json& j, const Observation& o) {
  nlohmann::json visible = nlohmann::json::array();
  for (const auto& v : o.visible) {
    visible.push_back({{"id", v.id},
                       {"class", v.class_name},
                       {"cells", v.cells},
                       {"bbox", {v.x0, v.y0, v.x1, v.y1}},
                       {"depth", v.depth}});
  }
  nlohmann::json rle = nlohmann::json::array();
  for (std::size_t i = 0; i < o.cells.size();) {
    std::size_t k = i;
    while (k < o.cells.size() && o.cells[k] == o.cells[i]) ++k;
    rle.push_back(o.cells[i]);
    rle.push_back(k - i);
    i = k;
  }
  j = nlohmann::json{{"width", o.width}, {"height", o.height}, {"tick", o.tick},
                     {"pose", o.pose},   {"visible", visible},  {"rle", rle}};
}

void from_json(const nlohmann::json& j, Observation& o) {
  try {
    o.width = j.at("width").get<int>();
    o.height = j.at("height").get<int>();
    if (o.width <= 0 || o.height <= 0) throw Error(ErrorCode::SchemaError, "observation dims");
    o.tick = j.value("tick", std::uint64_t{0});
    o.pose = j.at("pose").get<AgentPose>();
    o.visible.clear();
    for (const auto& v : j.at("visible")) {
      const auto& b = v.at("bbox");
      o.visible.push_back(VisibleObject{v.at("id").get<std::string>(), v.value("class", std::string{}),
                                        v.at("cells").get<int>(), b.at(0).get<int>(), b.at(1).get<int>(),
                                        b.at(2).get<int>(), b.at(3).get<int>(), v.at("depth").get<double>()});
    }
    const auto total = static_cast<std::size_t>(o.width) * o.height;
    o.cells.clear();
    o.cells.reserve(total);
    const auto& rle = j.at("rle");
    if (rle.size() % 2 != 0) throw Error(ErrorCode::SchemaError, "observation rle must have even length");
    for (std::size_t i = 0; i < rle.size(); i += 2) {
      const auto value = rle[i].get<std::int32_t>();
      const auto count = rle[i + 1].get<std::size_t>();
      if (value < -1 || value >= static_cast<std::int32_t>(o.visible.size())) {
        throw Error(ErrorCode::SchemaError, "observation rle index out of range");
      }
      if (o.cells.size() + count > total) throw Error(ErrorCode::SchemaError, "observation rle overflow");
      o.cells.insert(o.cells.end(), count, value);
    }
    if (o.cells.size() != total) throw Error(ErrorCode::SchemaError, "observation rle length mismatch");
    o.depth.assign(total, kFarPlane);
    for (std::size_t i = 0; i < total; ++i) {
      if (o.cells[i] >= 0) o.depth[i] = o.visible[o.cells[i]].depth;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("observation: ") + e.what());
  }
}

}  // namespace arena
