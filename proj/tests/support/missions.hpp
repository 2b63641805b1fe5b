#pragma once

#include "arena/missions/mission.hpp"
#include "support/fixtures.hpp"

namespace arena::testing {

inline const MissionCatalog& fixture_catalog() {
  static MissionCatalog catalog = MissionCatalog::load(data_dir() / "missions", fixture_scenes());
  return catalog;
}

}  // namespace arena::testing
