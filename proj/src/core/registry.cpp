#include "arena/core/registry.hpp"

#include <cctype>
#include <fstream>

#include "arena/core/error.hpp"

namespace arena {

namespace {
constexpr std::string_view kRegistrySchema = "arena-classes/1";
}

std::set<std::string, std::less<>> induced_state_keys(const std::set<AffordanceProperty>& props, bool sliceable) {
  std::set<std::string, std::less<>> keys;
  for (auto p : props) {
    if (auto k = induced_state_key(p)) keys.emplace(*k);
  }
  if (sliceable) keys.emplace(state_key::kIsSliced);
  return keys;
}

bool ObjectClass::licenses_state(std::string_view key) const {
  if (key == state_key::kIsSliced) return sliceable;
  for (auto p : properties) {
    if (induced_state_key(p) == key) return true;
  }
  return false;
}

void ClassRegistry::add(ObjectClass cls) {
  if (cls.name.empty()) throw Error(ErrorCode::SchemaError, "class without a name");
  if (cls.synonyms.empty()) throw Error(ErrorCode::SchemaError, "class " + cls.name + " has no synonyms");
  if (classes_.count(cls.name)) throw Error(ErrorCode::DuplicateId, "class " + cls.name);
  for (auto& s : cls.synonyms) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  auto keys = induced_state_keys(cls.properties, cls.sliceable);
  for (const auto& [k, v] : cls.default_states) {
    if (!keys.count(k)) throw Error(ErrorCode::SchemaError, "class " + cls.name + " default state " + k + " unlicensed");
  }
  for (const auto& k : keys) cls.default_states.try_emplace(k, false);
  classes_.emplace(cls.name, std::move(cls));
}

const ObjectClass* ClassRegistry::find(std::string_view name) const {
  auto it = classes_.find(name);
  return it == classes_.end() ? nullptr : &it->second;
}

const ObjectClass& ClassRegistry::at(std::string_view name) const {
  if (auto* c = find(name)) return *c;
  throw Error(ErrorCode::DanglingReference, "unknown class " + std::string(name));
}

ClassRegistry ClassRegistry::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || doc.value("schema", std::string{}) != kRegistrySchema) {
    throw Error(ErrorCode::SchemaError, "registry schema must be arena-classes/1");
  }
  ClassRegistry reg;
  try {
    for (const auto& c : doc.at("classes")) {
      ObjectClass cls;
      cls.name = c.at("name").get<std::string>();
      cls.synonyms = c.at("synonyms").get<std::vector<std::string>>();
      for (const auto& p : c.value("properties", std::vector<std::string>{})) {
        auto prop = parse_property(p);
        if (!prop) throw Error(ErrorCode::SchemaError, "class " + cls.name + ": unknown property " + p);
        cls.properties.insert(*prop);
      }
      cls.sliceable = c.value("sliceable", false);
      for (const auto& m : c.value("markers", std::vector<std::string>{})) cls.markers.insert(m);
      if (c.contains("default_states")) {
        for (const auto& [k, v] : c["default_states"].items()) cls.default_states[k] = v.get<bool>();
      }
      reg.add(std::move(cls));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("registry: ") + e.what());
  }
  return reg;
}

ClassRegistry ClassRegistry::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, path.string() + ": " + e.what());
  }
  return from_json(doc);
}

nlohmann::json ClassRegistry::to_json() const {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& [name, c] : classes_) {
    std::vector<std::string> props;
    for (auto p : c.properties) props.emplace_back(to_string(p));
    nlohmann::json defaults = nlohmann::json::object();
    for (const auto& [k, v] : c.default_states) defaults[k] = v;
    classes.push_back({{"name", c.name},
                       {"synonyms", c.synonyms},
                       {"properties", props},
                       {"sliceable", c.sliceable},
                       {"markers", std::vector<std::string>(c.markers.begin(), c.markers.end())},
                       {"default_states", defaults}});
  }
  return {{"schema", std::string(kRegistrySchema)}, {"classes", classes}};
}

}  // namespace arena
