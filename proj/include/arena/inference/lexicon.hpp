#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arena/core/action.hpp"
#include "arena/core/registry.hpp"
#include "arena/core/world.hpp"

namespace arena {

// Lowercase alphanumeric word tokens; commas survive as their own token.
std::vector<std::string> tokenize(std::string_view text);

enum class VerbKind { Act, Goto, Move, Stop };

struct VerbEntry {
  VerbKind kind = VerbKind::Act;
  ActionType action = ActionType::Stop;  // for Act and Move
};

// Surface forms for classes, verbs and rooms used by the baseline grammar.
class GroundingLexicon {
 public:
  // Nouns come from class names and synonyms, rooms from every scene in the
  // library (id with spaces for underscores, and display name).
  static GroundingLexicon build(const SceneLibrary& scenes);

  const ClassRegistry& registry() const { return *registry_; }
  // Token sequences, longest first.
  const std::vector<std::pair<std::vector<std::string>, std::string>>& nouns() const { return nouns_; }
  const std::vector<std::pair<std::vector<std::string>, std::string>>& rooms() const { return rooms_; }
  const std::vector<std::pair<std::vector<std::string>, VerbEntry>>& verbs() const { return verbs_; }

  // Classes with no surface form (should be empty).
  std::vector<std::string> unreachable_classes() const;

 private:
  RegistryPtr registry_;
  std::vector<std::pair<std::vector<std::string>, std::string>> nouns_;
  std::vector<std::pair<std::vector<std::string>, std::string>> rooms_;
  std::vector<std::pair<std::vector<std::string>, VerbEntry>> verbs_;
};

// One clause of an utterance after grounding.
struct NounRef {
  std::optional<std::string> class_name;  // absent for a pronoun ("it")
  std::string surface;
};

struct Command {
  VerbEntry verb;
  std::vector<NounRef> nouns;  // in utterance order
  std::optional<std::string> room;
};

// Splits on "and", "then" and commas; clauses without a recognized verb are
// skipped. Empty result means the utterance is out of grammar.
std::vector<Command> parse_utterance(std::string_view text, const GroundingLexicon& lexicon);

}  // namespace arena
