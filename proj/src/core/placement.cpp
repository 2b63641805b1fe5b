#include "arena/core/placement.hpp"

namespace arena {

Box placement_box(const ObjectInstance& receptacle, Vec3 size) {
  const Box& r = receptacle.box;
  Box b{r.center, size};
  if (receptacle.cls->has(AffordanceProperty::Openable)) {
    b.center.y = r.center.y;
  } else {
    b.center.y = r.max().y + size.y / 2;
  }
  return b;
}

}  // namespace arena
