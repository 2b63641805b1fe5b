#include "arena/inference/baseline.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "arena/core/affordance.hpp"
#include "arena/core/world.hpp"

namespace arena {

namespace {

constexpr int kMaxScanSteps = 3;

std::string verb_phrase(ActionType t) {
  switch (t) {
    case ActionType::Pickup: return "pick up";
    case ActionType::Place: return "put that on";
    case ActionType::ToggleOn: return "turn on";
    case ActionType::ToggleOff: return "turn off";
    case ActionType::GotoViewpoint: return "go to";
    default: {
      std::string s(to_string(t));
      for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      return s;
    }
  }
}

// What the session's own history says about the world.
struct HistoryBeliefs {
  std::optional<std::string> held;
  std::set<std::string> open;
};

HistoryBeliefs beliefs_from(const std::vector<ActionRecord>& history) {
  HistoryBeliefs h;
  for (const auto& rec : history) {
    if (!rec.ok || !rec.action.target || !rec.action.target->is_instance()) continue;
    const auto& id = rec.action.target->instance_id();
    switch (rec.action.type) {
      case ActionType::Pickup: h.held = id; break;
      case ActionType::Place: h.held.reset(); break;
      case ActionType::Open: h.open.insert(id); break;
      case ActionType::Close: h.open.erase(id); break;
      default: break;
    }
  }
  return h;
}

std::vector<Intent> intents_from(const std::vector<Command>& cmds) {
  std::vector<Intent> out;
  auto noun_intent = [](Intent::Kind kind, ActionType verb, const NounRef& n, std::optional<std::string> room) {
    Intent it;
    it.kind = kind;
    it.verb = verb;
    it.class_name = n.class_name;
    it.surface = n.surface;
    it.room = std::move(room);
    return it;
  };
  for (const auto& c : cmds) {
    switch (c.verb.kind) {
      case VerbKind::Stop: out.push_back(Intent{Intent::Kind::Stop, ActionType::Stop, {}, {}, {}, {}}); break;
      case VerbKind::Move: out.push_back(Intent{Intent::Kind::Move, c.verb.action, {}, {}, {}, {}}); break;
      case VerbKind::Goto:
        if (c.nouns.empty()) {
          out.push_back(Intent{Intent::Kind::GotoRoom, ActionType::GotoRoom, {}, {}, c.room, {}});
        } else {
          out.push_back(noun_intent(Intent::Kind::Goto, ActionType::GotoViewpoint, c.nouns.front(), c.room));
        }
        break;
      case VerbKind::Act:
        if (c.verb.action == ActionType::Place && c.nouns.size() >= 2) {
          // "put the bowl on the printer": fetch the bowl unless it is "it".
          if (c.nouns[0].class_name)
            out.push_back(noun_intent(Intent::Kind::Act, ActionType::Pickup, c.nouns[0], std::nullopt));
          out.push_back(noun_intent(Intent::Kind::Act, ActionType::Place, c.nouns[1], c.room));
        } else if (c.verb.action == ActionType::Pour && c.nouns.size() >= 2) {
          out.push_back(noun_intent(Intent::Kind::Act, ActionType::Pour, c.nouns.back(), c.room));
        } else {
          out.push_back(noun_intent(Intent::Kind::Act, c.verb.action, c.nouns.front(), c.room));
        }
        break;
    }
  }
  return out;
}

class Planner {
 public:
  Planner(const InferenceRequest& req, const GroundingLexicon& lex, BaselineBelief& b)
      : req_(req), lex_(lex), b_(b), obs_(req.observation), hist_(beliefs_from(req.action_history)) {}

  InferenceResponse run() {
    b_.memory.update(obs_);
    if (!b_.turn || *b_.turn != req_.turn_index) return new_turn();
    if (auto r = recover()) return *r;
    return step();
  }

 private:
  std::string next_id() {
    return req_.session_id + "-" + std::to_string(req_.turn_index) + "-" + std::to_string(b_.rounds++);
  }

  InferenceResponse act(std::vector<Action> actions) {
    b_.last_batch = actions.size();
    InferenceResponse r = InferenceResponse::act(next_id(), std::move(actions));
    if (b_.rounds >= kMaxResponsesPerTurn) {
      r.turn_complete = true;
      b_.plan.clear();
    }
    return r;
  }

  bool last_response() const { return b_.rounds + 1 >= kMaxResponsesPerTurn; }

  InferenceResponse end(std::optional<std::string> dialog) {
    b_.last_batch = 0;
    b_.plan.clear();
    return InferenceResponse::end(next_id(), std::move(dialog));
  }

  InferenceResponse new_turn() {
    b_.turn = req_.turn_index;
    b_.rounds = 0;
    b_.last_batch = 0;
    reset_intent_state();
    if (b_.awaiting) {
      if (auto r = confirmation()) return *r;
    }
    const auto cmds = parse_utterance(req_.utterance, lex_);
    if (cmds.empty()) return end(std::string(kFallbackDialog));
    const auto intents = intents_from(cmds);
    b_.plan.assign(intents.begin(), intents.end());
    return step();
  }

  std::optional<InferenceResponse> confirmation() {
    const auto tokens = tokenize(req_.utterance);
    static const std::set<std::string> yes = {"yes", "yeah", "yep", "sure", "correct", "right", "ok", "okay"};
    static const std::set<std::string> no = {"no", "nope", "other", "not", "wrong"};
    const std::string first = tokens.empty() ? "" : tokens.front();
    if (yes.count(first)) {
      Intent it = *b_.awaiting;
      it.instance = b_.candidates.front();
      b_.awaiting.reset();
      b_.candidates.clear();
      b_.plan.push_front(std::move(it));
      return step();
    }
    if (no.count(first)) {
      b_.candidates.erase(b_.candidates.begin());
      if (b_.candidates.empty()) {
        b_.awaiting.reset();
        return end("Sorry, I couldn't tell which one you meant.");
      }
      return ask_about(b_.candidates.front(), b_.awaiting->surface);
    }
    b_.awaiting.reset();
    b_.candidates.clear();
    return std::nullopt;
  }

  InferenceResponse ask_about(const std::string& candidate, const std::string& surface) {
    std::vector<Action> actions{Action::on(ActionType::Highlight, candidate),
                                Action::dialog("Do you mean this " + surface + "?")};
    b_.last_batch = actions.size();
    b_.plan.clear();
    return InferenceResponse{next_id(), std::move(actions), std::nullopt, true};
  }

  // Looks at the results of the previous batch.
  std::optional<InferenceResponse> recover() {
    const auto& h = req_.action_history;
    const std::size_t n = std::min(b_.last_batch, h.size());
    for (std::size_t i = h.size() - n; i < h.size(); ++i) {
      if (h[i].ok) continue;
      const Action& a = h[i].action;
      const std::string id = a.target && a.target->is_instance() ? a.target->instance_id() : "";
      if (a.type == ActionType::Place && !b_.reopened && is_openable(id) && !hist_.open.count(id)) {
        b_.reopened = true;
        return act({Action::on(ActionType::Open, id), Action::on(ActionType::Place, id)});
      }
      const auto* seen = b_.memory.find(id);
      const std::string what = seen ? surface_of(seen->class_name) : std::string("that");
      return end("Sorry, I couldn't " + verb_phrase(a.type) + " the " + what + ".");
    }
    return std::nullopt;
  }

  void reset_intent_state() {
    b_.scan_steps = 0;
    b_.reopened = false;
    b_.room_visited = false;
  }

  void finish_intent(const std::string& focus) {
    b_.focus = focus;
    b_.plan.pop_front();
    reset_intent_state();
  }

  std::optional<std::string> held_class() const {
    if (!hist_.held) return std::nullopt;
    const auto* s = b_.memory.find(*hist_.held);
    return s ? std::optional<std::string>(s->class_name) : std::nullopt;
  }

  bool is_openable(std::string_view id) const {
    const auto* s = b_.memory.find(id);
    if (!s) return false;
    const auto* cls = lex_.registry().find(s->class_name);
    return cls && cls->has(AffordanceProperty::Openable);
  }

  std::string surface_of(const std::string& class_name) const {
    for (const auto& [phrase, cls] : lex_.nouns()) {
      if (cls == class_name) {
        std::string s;
        for (const auto& t : phrase) s += (s.empty() ? "" : " ") + t;
        return s;
      }
    }
    return class_name;
  }

  struct Grounding {
    std::vector<std::string> visible;  // candidates in view, nearest first
    const Sighting* remembered = nullptr;
  };

  Grounding ground(const Intent& it) const {
    Grounding g;
    auto excluded = [&](const std::string& id) { return hist_.held && *hist_.held == id; };
    if (it.instance || !it.class_name) {
      const std::optional<std::string> id = it.instance ? it.instance : b_.focus;
      if (!id) return g;
      if (obs_.find_visible(*id)) {
        g.visible.push_back(*id);
      } else {
        g.remembered = b_.memory.find(*id);
      }
      return g;
    }
    std::vector<const VisibleObject*> vis;
    for (const auto& v : obs_.visible) {
      if (v.class_name == *it.class_name && !excluded(v.id)) vis.push_back(&v);
    }
    std::sort(vis.begin(), vis.end(), [](auto* a, auto* b) { return std::tie(a->depth, a->id) < std::tie(b->depth, b->id); });
    for (auto* v : vis) g.visible.push_back(v->id);
    if (g.visible.empty()) {
      for (const auto* s : b_.memory.of_class(*it.class_name, it.room)) {
        if (!excluded(s->instance)) {
          g.remembered = s;
          break;
        }
      }
    }
    return g;
  }

  // Actions that perform the intent's verb on `id`, which is in view.
  std::vector<Action> perform(const Intent& it, const std::string& id, bool in_reach) {
    std::vector<Action> out;
    if (!in_reach) out.push_back(Action::goto_object(id));
    if (it.kind == Intent::Kind::Goto) {
      if (in_reach) out.push_back(Action::goto_object(id));
      return out;
    }
    if (it.verb == ActionType::Place && is_openable(id) && !hist_.open.count(id)) {
      out.push_back(Action::on(ActionType::Open, id));
    }
    out.push_back(Action::on(it.verb, id));
    return out;
  }

  InferenceResponse step() {
    while (!b_.plan.empty()) {
      const Intent it = b_.plan.front();
      switch (it.kind) {
        case Intent::Kind::Stop: {
          b_.plan.clear();
          b_.last_batch = 1;
          return InferenceResponse{next_id(), {Action::simple(ActionType::Stop)}, std::nullopt, true};
        }
        case Intent::Kind::GotoRoom:
          b_.plan.pop_front();
          reset_intent_state();
          if (it.room && obs_.pose.room != *it.room) return act({Action::goto_room(*it.room)});
          continue;
        case Intent::Kind::Move: {
          std::vector<Action> moves;
          while (!b_.plan.empty() && b_.plan.front().kind == Intent::Kind::Move) {
            moves.push_back(Action::simple(b_.plan.front().verb));
            b_.plan.pop_front();
          }
          reset_intent_state();
          return act(std::move(moves));
        }
        case Intent::Kind::Goto:
        case Intent::Kind::Act:
          break;
      }
      if (it.verb == ActionType::Place && !hist_.held) return end("I'm not holding anything.");
      if (it.verb == ActionType::Pickup && it.class_name && held_class() == it.class_name) {
        finish_intent(*hist_.held);
        continue;
      }

      const Grounding g = ground(it);
      const bool elsewhere = it.room && obs_.pose.room != *it.room;
      if (!g.visible.empty() && !elsewhere) {
        if (g.visible.size() > 1 && !it.instance && it.class_name) {
          b_.awaiting = it;
          b_.candidates = g.visible;
          return ask_about(g.visible.front(), it.surface);
        }
        const auto& id = g.visible.front();
        const auto* v = obs_.find_visible(id);
        auto actions = perform(it, id, v->depth <= kInteractionRange);
        finish_intent(id);
        return act(std::move(actions));
      }
      if (g.remembered) {
        const Sighting& s = *g.remembered;
        Action go = Action::goto_viewpoint(s.pose.viewpoint);
        go.heading = s.pose.heading;
        go.pitch = s.pose.pitch;
        std::vector<Action> actions{go};
        for (auto& a : perform(it, s.instance, s.depth <= kInteractionRange)) actions.push_back(std::move(a));
        finish_intent(s.instance);
        return act(std::move(actions));
      }
      if (elsewhere && !b_.room_visited) {
        b_.room_visited = true;
        return act({Action::goto_room(*it.room)});
      }
      // Something hidden inside the receptacle we just went to.
      if (it.kind == Intent::Kind::Act && b_.focus && is_openable(*b_.focus) && !hist_.open.count(*b_.focus) &&
          obs_.find_visible(*b_.focus)) {
        return act({Action::on(ActionType::Open, *b_.focus)});
      }
      if (b_.scan_steps < kMaxScanSteps && !last_response()) {
        ++b_.scan_steps;
        return act({Action::simple(ActionType::RotateRight)});
      }
      return end("I couldn't find the " + (it.surface.empty() ? std::string("object") : it.surface) + ".");
    }
    if (req_.edh) {
      b_.last_batch = 1;
      return InferenceResponse{next_id(), {Action::simple(ActionType::Stop)}, std::nullopt, true};
    }
    return end("Done.");
  }

  const InferenceRequest& req_;
  const GroundingLexicon& lex_;
  BaselineBelief& b_;
  const Observation& obs_;
  HistoryBeliefs hist_;
};

}  // namespace

InferenceResponse baseline_infer(const InferenceRequest& req, const GroundingLexicon& lexicon, BaselineBelief& belief) {
  return Planner(req, lexicon, belief).run();
}

InferenceResponse BaselineService::infer(const InferenceRequest& req) {
  std::shared_ptr<Slot> slot;
  {
    std::lock_guard lock(mu_);
    auto& p = sessions_[req.session_id];
    if (!p) p = std::make_shared<Slot>();
    slot = p;
  }
  std::lock_guard lock(slot->mu);
  return baseline_infer(req, lexicon_, slot->belief);
}

void BaselineService::forget(const std::string& session_id) {
  std::lock_guard lock(mu_);
  sessions_.erase(session_id);
}

InferenceResponse LocalInferenceClient::infer(const InferenceRequest& request, std::chrono::milliseconds) {
  return service_.infer(request);
}

}  // namespace arena
