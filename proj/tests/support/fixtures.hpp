#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "arena/core/error.hpp"
#include "arena/core/world.hpp"

namespace arena::testing {

inline std::filesystem::path data_dir() { return ARENA_FIXTURES_DIR; }
inline std::filesystem::path golden_dir() { return ARENA_GOLDEN_DIR; }

inline RegistryPtr fixture_registry() {
  static RegistryPtr reg = std::make_shared<const ClassRegistry>(ClassRegistry::load(data_dir() / "classes.json"));
  return reg;
}

inline const SceneLibrary& fixture_scenes() {
  static SceneLibrary lib = [] {
    SceneLibrary l(fixture_registry());
    l.load_directory(data_dir() / "scenes");
    return l;
  }();
  return lib;
}

inline const WorldState& lab() { return fixture_scenes().get("lab"); }
inline const WorldState& office() { return fixture_scenes().get("office"); }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string read_golden(const std::string& name) {
  const auto p = golden_dir() / name;
  if (!std::filesystem::exists(p)) {
    ADD_FAILURE() << "missing golden file " << p;
    return {};
  }
  return read_file(p);
}

// Trims trailing whitespace; golden text files end with a newline.
inline std::string trimmed(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

}  // namespace arena::testing

#define EXPECT_ARENA_ERROR(stmt, expected_code)                                        \
  do {                                                                                 \
    try {                                                                              \
      stmt;                                                                            \
      ADD_FAILURE() << "expected " << ::arena::to_string(expected_code);               \
    } catch (const ::arena::Error& e) {                                                \
      EXPECT_EQ(::arena::to_string(e.code()), ::arena::to_string(expected_code)) << e.what(); \
    }                                                                                  \
  } while (0)
