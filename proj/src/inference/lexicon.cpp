#include "arena/inference/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace arena {

namespace {

std::string camel_to_words(std::string_view name) {
  std::string out;
  for (std::size_t i = 0; i < name.size(); ++i) {
    const char c = name[i];
    if (i > 0 && std::isupper(static_cast<unsigned char>(c)) && std::islower(static_cast<unsigned char>(name[i - 1])))
      out += ' ';
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

template <typename T>
void sort_longest_first(std::vector<std::pair<std::vector<std::string>, T>>& v) {
  std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
}

bool matches_at(const std::vector<std::string>& tokens, std::size_t i, const std::vector<std::string>& phrase) {
  if (phrase.empty() || i + phrase.size() > tokens.size()) return false;
  return std::equal(phrase.begin(), phrase.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i));
}

const std::set<std::string> kPronouns = {"it", "that", "this", "them"};

std::optional<Command> parse_clause(const std::vector<std::string>& tokens, const GroundingLexicon& lex) {
  Command cmd;
  bool have_verb = false;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t consumed = 0;
    if (!have_verb) {
      for (const auto& [phrase, entry] : lex.verbs()) {
        if (matches_at(tokens, i, phrase)) {
          cmd.verb = entry;
          have_verb = true;
          consumed = phrase.size();
          break;
        }
      }
      // "turn the lamp on", "switch it off", "pick it up"
      if (!consumed && (tokens[i] == "turn" || tokens[i] == "switch" || tokens[i] == "pick")) {
        const bool toggle = tokens[i] != "pick";
        for (std::size_t k = i + 1; k < tokens.size(); ++k) {
          if (toggle && (tokens[k] == "on" || tokens[k] == "off")) {
            cmd.verb = {VerbKind::Act, tokens[k] == "on" ? ActionType::ToggleOn : ActionType::ToggleOff};
            have_verb = true;
            break;
          }
          if (!toggle && tokens[k] == "up") {
            cmd.verb = {VerbKind::Act, ActionType::Pickup};
            have_verb = true;
            break;
          }
        }
        consumed = 1;
      }
    }
    if (!consumed) {
      for (const auto& [phrase, room] : lex.rooms()) {
        if (matches_at(tokens, i, phrase)) {
          cmd.room = room;
          consumed = phrase.size();
          break;
        }
      }
    }
    if (!consumed) {
      for (const auto& [phrase, cls] : lex.nouns()) {
        if (matches_at(tokens, i, phrase)) {
          std::string surface;
          for (const auto& t : phrase) surface += (surface.empty() ? "" : " ") + t;
          cmd.nouns.push_back({cls, surface});
          consumed = phrase.size();
          break;
        }
      }
    }
    if (!consumed && have_verb && tokens[i] == "up" && cmd.verb.action == ActionType::Pickup) consumed = 1;
    if (!consumed && have_verb && kPronouns.count(tokens[i])) {
      cmd.nouns.push_back({std::nullopt, tokens[i]});
      consumed = 1;
    }
    i += consumed ? consumed : 1;
  }
  if (!have_verb) return std::nullopt;
  if (cmd.verb.kind == VerbKind::Act && cmd.nouns.empty()) return std::nullopt;
  if (cmd.verb.kind == VerbKind::Goto && cmd.nouns.empty() && !cmd.room) return std::nullopt;
  return cmd;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      cur += static_cast<char>(std::tolower(c));
    } else if (ch == '\'') {
      continue;  // "don't" -> "dont"
    } else {
      flush();
      if (ch == ',' || ch == ';' || ch == '.') out.emplace_back(",");
    }
  }
  flush();
  return out;
}

GroundingLexicon GroundingLexicon::build(const SceneLibrary& scenes) {
  GroundingLexicon lex;
  lex.registry_ = scenes.registry();
  std::set<std::pair<std::vector<std::string>, std::string>> nouns;
  for (const auto& [name, cls] : lex.registry_->classes()) {
    nouns.insert({tokenize(camel_to_words(name)), name});
    for (const auto& syn : cls.synonyms) nouns.insert({tokenize(syn), name});
  }
  lex.nouns_.assign(nouns.begin(), nouns.end());
  sort_longest_first(lex.nouns_);

  std::set<std::pair<std::vector<std::string>, std::string>> rooms;
  for (const auto& [scene_id, state] : scenes.scenes()) {
    for (const auto& [id, room] : state.layout->rooms) {
      std::string spaced = id;
      std::replace(spaced.begin(), spaced.end(), '_', ' ');
      rooms.insert({tokenize(spaced), id});
      rooms.insert({tokenize(room.name), id});
    }
  }
  lex.rooms_.assign(rooms.begin(), rooms.end());
  sort_longest_first(lex.rooms_);

  using A = ActionType;
  const std::vector<std::pair<std::string, VerbEntry>> verbs = {
      {"pick up", {VerbKind::Act, A::Pickup}},   {"pickup", {VerbKind::Act, A::Pickup}},
      {"grab", {VerbKind::Act, A::Pickup}},      {"take", {VerbKind::Act, A::Pickup}},
      {"get", {VerbKind::Act, A::Pickup}},       {"fetch", {VerbKind::Act, A::Pickup}},
      {"bring me", {VerbKind::Act, A::Pickup}},  {"hold", {VerbKind::Act, A::Pickup}},
      {"put", {VerbKind::Act, A::Place}},        {"place", {VerbKind::Act, A::Place}},
      {"drop", {VerbKind::Act, A::Place}},       {"set", {VerbKind::Act, A::Place}},
      {"open", {VerbKind::Act, A::Open}},        {"close", {VerbKind::Act, A::Close}},
      {"shut", {VerbKind::Act, A::Close}},       {"turn on", {VerbKind::Act, A::ToggleOn}},
      {"switch on", {VerbKind::Act, A::ToggleOn}}, {"start", {VerbKind::Act, A::ToggleOn}},
      {"turn off", {VerbKind::Act, A::ToggleOff}}, {"switch off", {VerbKind::Act, A::ToggleOff}},
      {"slice", {VerbKind::Act, A::Slice}},      {"cut", {VerbKind::Act, A::Slice}},
      {"pour", {VerbKind::Act, A::Pour}},        {"break", {VerbKind::Act, A::Break}},
      {"smash", {VerbKind::Act, A::Break}},      {"heat", {VerbKind::Act, A::Heat}},
      {"warm", {VerbKind::Act, A::Heat}},        {"chill", {VerbKind::Act, A::Chill}},
      {"cool", {VerbKind::Act, A::Chill}},       {"fill", {VerbKind::Act, A::Fill}},
      {"clean", {VerbKind::Act, A::Clean}},      {"wash", {VerbKind::Act, A::Clean}},
      {"disinfect", {VerbKind::Act, A::Clean}},  {"cook", {VerbKind::Act, A::Cook}},
      {"fry", {VerbKind::Act, A::Cook}},         {"eat", {VerbKind::Act, A::Eat}},
      {"power", {VerbKind::Act, A::Power}},      {"plug in", {VerbKind::Act, A::Power}},
      {"highlight", {VerbKind::Act, A::Highlight}}, {"show me", {VerbKind::Act, A::Highlight}},
      {"point at", {VerbKind::Act, A::Highlight}}, {"go to", {VerbKind::Goto, A::GotoViewpoint}},
      {"walk to", {VerbKind::Goto, A::GotoViewpoint}}, {"move to", {VerbKind::Goto, A::GotoViewpoint}},
      {"head to", {VerbKind::Goto, A::GotoViewpoint}}, {"find", {VerbKind::Goto, A::GotoViewpoint}},
      {"look for", {VerbKind::Goto, A::GotoViewpoint}}, {"come to", {VerbKind::Goto, A::GotoViewpoint}},
      {"turn left", {VerbKind::Move, A::RotateLeft}}, {"rotate left", {VerbKind::Move, A::RotateLeft}},
      {"turn right", {VerbKind::Move, A::RotateRight}}, {"rotate right", {VerbKind::Move, A::RotateRight}},
      {"look up", {VerbKind::Move, A::LookUp}},  {"look down", {VerbKind::Move, A::LookDown}},
      {"move forward", {VerbKind::Move, A::MoveForward}}, {"go forward", {VerbKind::Move, A::MoveForward}},
      {"step forward", {VerbKind::Move, A::MoveForward}}, {"move back", {VerbKind::Move, A::MoveBackward}},
      {"step back", {VerbKind::Move, A::MoveBackward}}, {"back up", {VerbKind::Move, A::MoveBackward}},
      {"stop", {VerbKind::Stop, A::Stop}},
  };
  for (const auto& [phrase, entry] : verbs) lex.verbs_.push_back({tokenize(phrase), entry});
  sort_longest_first(lex.verbs_);
  return lex;
}

std::vector<std::string> GroundingLexicon::unreachable_classes() const {
  std::vector<std::string> out;
  for (const auto& [name, cls] : registry_->classes()) {
    const bool found = std::any_of(nouns_.begin(), nouns_.end(), [&](const auto& n) { return n.second == name; });
    if (!found) out.push_back(name);
  }
  return out;
}

std::vector<Command> parse_utterance(std::string_view text, const GroundingLexicon& lexicon) {
  const auto tokens = tokenize(text);
  std::vector<Command> out;
  std::vector<std::string> clause;
  auto flush = [&] {
    if (auto c = parse_clause(clause, lexicon)) out.push_back(std::move(*c));
    clause.clear();
  };
  for (const auto& t : tokens) {
    if (t == "and" || t == "then" || t == ",") {
      flush();
    } else {
      clause.push_back(t);
    }
  }
  flush();
  return out;
}

}  // namespace arena
