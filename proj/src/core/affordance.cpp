#include "arena/core/affordance.hpp"

#include "arena/core/error.hpp"

namespace arena {

std::string_view to_string(AffordanceProperty p) {
  switch (p) {
    case AffordanceProperty::Pickupable: return "pickupable";
    case AffordanceProperty::Openable: return "openable";
    case AffordanceProperty::Breakable: return "breakable";
    case AffordanceProperty::Receptacle: return "receptacle";
    case AffordanceProperty::Toggleable: return "toggleable";
    case AffordanceProperty::Powerable: return "powerable";
    case AffordanceProperty::Dirtyable: return "dirtyable";
    case AffordanceProperty::Heatable: return "heatable";
    case AffordanceProperty::Eatable: return "eatable";
    case AffordanceProperty::Chillable: return "chillable";
    case AffordanceProperty::Fillable: return "fillable";
    case AffordanceProperty::Cookable: return "cookable";
    case AffordanceProperty::Infectable: return "infectable";
    case AffordanceProperty::Decor: return "decor";
  }
  return "?";
}

std::optional<AffordanceProperty> parse_property(std::string_view name) {
  for (auto p : kAllProperties) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

std::optional<std::string_view> induced_state_key(AffordanceProperty p) {
  using namespace state_key;
  switch (p) {
    case AffordanceProperty::Openable: return kIsOpen;
    case AffordanceProperty::Breakable: return kIsBroken;
    case AffordanceProperty::Toggleable: return kIsToggledOn;
    case AffordanceProperty::Powerable: return kIsPowered;
    case AffordanceProperty::Dirtyable: return kIsDirty;
    case AffordanceProperty::Heatable: return kIsHeated;
    case AffordanceProperty::Eatable: return kIsEaten;
    case AffordanceProperty::Chillable: return kIsChilled;
    case AffordanceProperty::Fillable: return kIsFilled;
    case AffordanceProperty::Cookable: return kIsCooked;
    case AffordanceProperty::Infectable: return kIsInfected;
    case AffordanceProperty::Pickupable:
    case AffordanceProperty::Receptacle:
    case AffordanceProperty::Decor: return std::nullopt;
  }
  return std::nullopt;
}

Transition transition_for(AffordanceProperty p) {
  using namespace state_key;
  switch (p) {
    case AffordanceProperty::Pickupable: return {ActionType::Pickup, kHeld, true};
    case AffordanceProperty::Openable: return {ActionType::Open, kIsOpen, true};
    case AffordanceProperty::Breakable: return {ActionType::Break, kIsBroken, true};
    case AffordanceProperty::Receptacle: return {ActionType::Place, kContainedIn, true};
    case AffordanceProperty::Toggleable: return {ActionType::ToggleOn, kIsToggledOn, true};
    case AffordanceProperty::Powerable: return {ActionType::Power, kIsPowered, true};
    case AffordanceProperty::Dirtyable: return {ActionType::Clean, kIsDirty, false};
    case AffordanceProperty::Heatable: return {ActionType::Heat, kIsHeated, true};
    case AffordanceProperty::Eatable: return {ActionType::Eat, kIsEaten, true};
    case AffordanceProperty::Chillable: return {ActionType::Chill, kIsChilled, true};
    case AffordanceProperty::Fillable: return {ActionType::Fill, kIsFilled, true};
    case AffordanceProperty::Cookable: return {ActionType::Cook, kIsCooked, true};
    case AffordanceProperty::Infectable: return {ActionType::Clean, kIsInfected, false};
    case AffordanceProperty::Decor: break;
  }
  throw Error(ErrorCode::DecorHasNoAction, "decor licenses no action");
}

std::vector<AffordanceProperty> licensing_properties(ActionType verb) {
  using P = AffordanceProperty;
  switch (verb) {
    case ActionType::Pickup: return {P::Pickupable};
    case ActionType::Place: return {P::Receptacle};
    case ActionType::Open:
    case ActionType::Close: return {P::Openable};
    case ActionType::ToggleOn:
    case ActionType::ToggleOff: return {P::Toggleable};
    case ActionType::Pour: return {P::Fillable};
    case ActionType::Break: return {P::Breakable};
    case ActionType::Heat: return {P::Heatable};
    case ActionType::Chill: return {P::Chillable};
    case ActionType::Fill: return {P::Fillable};
    case ActionType::Clean: return {P::Dirtyable, P::Infectable};
    case ActionType::Cook: return {P::Cookable};
    case ActionType::Eat: return {P::Eatable};
    case ActionType::Power: return {P::Powerable};
    default: return {};
  }
}

}  // namespace arena
