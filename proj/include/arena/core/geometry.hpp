#pragma once

#include <algorithm>
#include <cmath>

namespace arena {

struct Vec3 {
  double x = 0, y = 0, z = 0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

// Axis-aligned box in room-local meters; `center` is the box centroid and
// `size` the full extents.
struct Box {
  Vec3 center;
  Vec3 size;

  Vec3 min() const { return {center.x - size.x / 2, center.y - size.y / 2, center.z - size.z / 2}; }
  Vec3 max() const { return {center.x + size.x / 2, center.y + size.y / 2, center.z + size.z / 2}; }

  // Euclidean distance from p to the closest point of the box (0 inside).
  double distance_to(Vec3 p) const {
    const Vec3 lo = min(), hi = max();
    const Vec3 q{std::clamp(p.x, lo.x, hi.x), std::clamp(p.y, lo.y, hi.y), std::clamp(p.z, lo.z, hi.z)};
    return norm(p - q);
  }

  friend bool operator==(const Box&, const Box&) = default;
};

}  // namespace arena
