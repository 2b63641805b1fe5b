#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "arena/core/affordance.hpp"

namespace arena {

struct ObjectClass {
  std::string name;
  std::vector<std::string> synonyms;
  std::set<AffordanceProperty> properties;
  std::map<std::string, bool, std::less<>> default_states;
  bool sliceable = false;
  // Free-form tags, e.g. "tool:knife".
  std::set<std::string> markers;

  bool has(AffordanceProperty p) const { return properties.count(p) != 0; }
  bool has_marker(std::string_view m) const { return markers.count(std::string(m)) != 0; }
  bool is_decor() const { return has(AffordanceProperty::Decor); }
  // True when the class's properties (or sliceable flag) induce `key`.
  bool licenses_state(std::string_view key) const;
};

// Set of boolean state keys induced by a property set.
std::set<std::string, std::less<>> induced_state_keys(const std::set<AffordanceProperty>& props, bool sliceable);

class ClassRegistry {
 public:
  ClassRegistry() = default;

  // Throws DuplicateId / SchemaError on invalid classes.
  void add(ObjectClass cls);

  const ObjectClass* find(std::string_view name) const;
  const ObjectClass& at(std::string_view name) const;
  const std::map<std::string, ObjectClass, std::less<>>& classes() const { return classes_; }
  std::size_t size() const { return classes_.size(); }

  static ClassRegistry from_json(const nlohmann::json& doc);
  static ClassRegistry load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

 private:
  std::map<std::string, ObjectClass, std::less<>> classes_;
};

using RegistryPtr = std::shared_ptr<const ClassRegistry>;

}  // namespace arena
