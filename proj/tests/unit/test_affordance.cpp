#include <set>

#include <gtest/gtest.h>

#include "arena/core/affordance.hpp"
#include "arena/core/registry.hpp"
#include "support/fixtures.hpp"

namespace arena {
namespace {

TEST(Affordance, FourteenPropertiesRoundTripNames) {
  EXPECT_EQ(kAllProperties.size(), 14u);
  std::set<std::string_view> names;
  for (auto p : kAllProperties) {
    names.insert(to_string(p));
    EXPECT_EQ(parse_property(to_string(p)), p);
  }
  EXPECT_EQ(names.size(), 14u);
  EXPECT_FALSE(parse_property("sliceable"));
}

TEST(Affordance, BreakableBreaks) {
  EXPECT_EQ(transition_for(AffordanceProperty::Breakable),
            (Transition{ActionType::Break, state_key::kIsBroken, true}));
}

TEST(Affordance, ToggleableTogglesOn) {
  EXPECT_EQ(transition_for(AffordanceProperty::Toggleable),
            (Transition{ActionType::ToggleOn, state_key::kIsToggledOn, true}));
}

TEST(Affordance, DecorHasNoAction) {
  EXPECT_ARENA_ERROR(transition_for(AffordanceProperty::Decor), ErrorCode::DecorHasNoAction);
}

TEST(Affordance, TotalAndInjectiveOverActionableProperties) {
  std::set<std::pair<ActionType, std::string_view>> seen;
  int actionable = 0;
  for (auto p : kAllProperties) {
    if (p == AffordanceProperty::Decor) continue;
    ++actionable;
    const auto t = transition_for(p);
    EXPECT_TRUE(is_interaction(t.verb)) << to_string(p);
    EXPECT_TRUE(seen.emplace(t.verb, t.state_key).second) << "duplicate transition for " << to_string(p);
    // The verb is licensed by the property it came from.
    const auto lic = licensing_properties(t.verb);
    EXPECT_NE(std::find(lic.begin(), lic.end(), p), lic.end()) << to_string(p);
    // Boolean results land on the property's own state key.
    if (auto key = induced_state_key(p)) EXPECT_EQ(*key, t.state_key);
  }
  EXPECT_EQ(actionable, 13);
}

TEST(Registry, FixtureCoversEveryProperty) {
  const auto& reg = *testing::fixture_registry();
  EXPECT_GE(reg.size(), 40u);
  for (auto p : kAllProperties) {
    bool found = false;
    for (const auto& [name, cls] : reg.classes()) found = found || cls.has(p);
    EXPECT_TRUE(found) << to_string(p);
  }
}

TEST(Registry, DefaultStatesAreExactlyInducedKeys) {
  for (const auto& [name, cls] : testing::fixture_registry()->classes()) {
    auto keys = induced_state_keys(cls.properties, cls.sliceable);
    std::set<std::string, std::less<>> have;
    for (const auto& [k, v] : cls.default_states) have.insert(k);
    EXPECT_EQ(have, keys) << name;
    EXPECT_FALSE(cls.synonyms.empty()) << name;
  }
}

TEST(Registry, RejectsDuplicatesAndUnlicensedDefaults) {
  ClassRegistry reg;
  reg.add(ObjectClass{"Mug", {"mug"}, {AffordanceProperty::Pickupable}, {}, false, {}});
  EXPECT_ARENA_ERROR(reg.add(ObjectClass{"Mug", {"cup"}, {}, {}, false, {}}), ErrorCode::DuplicateId);
  EXPECT_ARENA_ERROR(reg.add(ObjectClass{"Lamp", {"lamp"}, {}, {{"isOpen", true}}, false, {}}), ErrorCode::SchemaError);
  EXPECT_ARENA_ERROR(reg.add(ObjectClass{"Nameless", {}, {}, {}, false, {}}), ErrorCode::SchemaError);
}

TEST(Registry, JsonRoundTrip) {
  const auto& reg = *testing::fixture_registry();
  const auto again = ClassRegistry::from_json(reg.to_json());
  EXPECT_EQ(again.to_json(), reg.to_json());
}

}  // namespace
}  // namespace arena
