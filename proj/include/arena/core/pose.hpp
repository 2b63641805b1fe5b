#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace arena {

enum class Heading { N, E, S, W };
enum class Pitch { Up, Level, Down };

std::string_view to_string(Heading h);
std::string_view to_string(Pitch p);
std::optional<Heading> parse_heading(std::string_view s);
std::optional<Pitch> parse_pitch(std::string_view s);

Heading rotate_left(Heading h);
Heading rotate_right(Heading h);

// Pitch angle in degrees, positive looking up.
double pitch_degrees(Pitch p);

struct AgentPose {
  std::string room;
  std::string viewpoint;
  Heading heading = Heading::N;
  Pitch pitch = Pitch::Level;

  friend bool operator==(const AgentPose&, const AgentPose&) = default;
};

void to_json(nlohmann::json& j, const AgentPose& p);
void from_json(const nlohmann::json& j, AgentPose& p);

}  // namespace arena
