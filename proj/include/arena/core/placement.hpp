#pragma once

#include "arena/core/world.hpp"

namespace arena {

// Where an object of `size` rests when put into `receptacle`: inside (on the
// floor of the cavity) for openable receptacles, on top otherwise.
Box placement_box(const ObjectInstance& receptacle, Vec3 size);

}  // namespace arena
