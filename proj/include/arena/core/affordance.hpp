#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arena/core/action.hpp"

namespace arena {

// Closed set of per-class capability flags.
enum class AffordanceProperty {
  Pickupable,
  Openable,
  Breakable,
  Receptacle,
  Toggleable,
  Powerable,
  Dirtyable,
  Heatable,
  Eatable,
  Chillable,
  Fillable,
  Cookable,
  Infectable,
  Decor,
};

inline constexpr std::array<AffordanceProperty, 14> kAllProperties = {
    AffordanceProperty::Pickupable, AffordanceProperty::Openable,  AffordanceProperty::Breakable,
    AffordanceProperty::Receptacle, AffordanceProperty::Toggleable, AffordanceProperty::Powerable,
    AffordanceProperty::Dirtyable,  AffordanceProperty::Heatable,  AffordanceProperty::Eatable,
    AffordanceProperty::Chillable,  AffordanceProperty::Fillable,  AffordanceProperty::Cookable,
    AffordanceProperty::Infectable, AffordanceProperty::Decor,
};

std::string_view to_string(AffordanceProperty p);
std::optional<AffordanceProperty> parse_property(std::string_view name);

// Object state keys. `held` and `contained_in` are structural and live on
// ObjectInstance directly; the rest are boolean entries in its state map.
namespace state_key {
inline constexpr std::string_view kHeld = "held";
inline constexpr std::string_view kContainedIn = "contained_in";
inline constexpr std::string_view kIsOpen = "isOpen";
inline constexpr std::string_view kIsBroken = "isBroken";
inline constexpr std::string_view kIsToggledOn = "isToggledOn";
inline constexpr std::string_view kIsPowered = "isPowered";
inline constexpr std::string_view kIsDirty = "isDirty";
inline constexpr std::string_view kIsHeated = "isHeated";
inline constexpr std::string_view kIsEaten = "isEaten";
inline constexpr std::string_view kIsChilled = "isChilled";
inline constexpr std::string_view kIsFilled = "isFilled";
inline constexpr std::string_view kIsCooked = "isCooked";
inline constexpr std::string_view kIsInfected = "isInfected";
inline constexpr std::string_view kIsSliced = "isSliced";
}  // namespace state_key

// Boolean state key induced by a property, if any. Pickupable, Receptacle and
// Decor induce none.
std::optional<std::string_view> induced_state_key(AffordanceProperty p);

// The primary verb a property licenses and the state its target lands in.
// For Pickupable and Receptacle the "state" is the structural relation
// (`held`, `contained_in`) becoming established.
struct Transition {
  ActionType verb;
  std::string_view state_key;
  bool value;

  friend bool operator==(const Transition&, const Transition&) = default;
};

// Throws Error{DecorHasNoAction} for Decor.
Transition transition_for(AffordanceProperty p);

// Properties any one of which licenses `verb` on a target. Empty for verbs
// that are not object interactions. Slice is licensed by the class-level
// `sliceable` flag rather than a property and also returns empty here.
std::vector<AffordanceProperty> licensing_properties(ActionType verb);

}  // namespace arena
