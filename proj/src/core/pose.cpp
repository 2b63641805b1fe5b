#include "arena/core/pose.hpp"

#include "arena/core/error.hpp"

namespace arena {

std::string_view to_string(Heading h) {
  switch (h) {
    case Heading::N: return "N";
    case Heading::E: return "E";
    case Heading::S: return "S";
    case Heading::W: return "W";
  }
  return "?";
}

std::string_view to_string(Pitch p) {
  switch (p) {
    case Pitch::Up: return "up";
    case Pitch::Level: return "level";
    case Pitch::Down: return "down";
  }
  return "?";
}

std::optional<Heading> parse_heading(std::string_view s) {
  if (s == "N") return Heading::N;
  if (s == "E") return Heading::E;
  if (s == "S") return Heading::S;
  if (s == "W") return Heading::W;
  return std::nullopt;
}

std::optional<Pitch> parse_pitch(std::string_view s) {
  if (s == "up") return Pitch::Up;
  if (s == "level") return Pitch::Level;
  if (s == "down") return Pitch::Down;
  return std::nullopt;
}

Heading rotate_left(Heading h) { return static_cast<Heading>((static_cast<int>(h) + 3) % 4); }
Heading rotate_right(Heading h) { return static_cast<Heading>((static_cast<int>(h) + 1) % 4); }

double pitch_degrees(Pitch p) {
  switch (p) {
    case Pitch::Up: return 35.0;
    case Pitch::Level: return 0.0;
    case Pitch::Down: return -35.0;
  }
  return 0.0;
}

void to_json(nlohmann::json& j, const AgentPose& p) {
  j = nlohmann::json{{"room", p.room},
                     {"viewpoint", p.viewpoint},
                     {"heading", std::string(to_string(p.heading))},
                     {"pitch", std::string(to_string(p.pitch))}};
}

void from_json(const nlohmann::json& j, AgentPose& p) {
  try {
    p.room = j.value("room", std::string{});
    p.viewpoint = j.at("viewpoint").get<std::string>();
    auto h = parse_heading(j.value("heading", std::string{"N"}));
    auto pi = parse_pitch(j.value("pitch", std::string{"level"}));
    if (!h || !pi) throw Error(ErrorCode::SchemaError, "bad heading/pitch in pose");
    p.heading = *h;
    p.pitch = *pi;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("pose: ") + e.what());
  }
}

}  // namespace arena
