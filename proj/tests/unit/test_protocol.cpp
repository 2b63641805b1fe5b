#include <gtest/gtest.h>

#include "arena/core/simulator.hpp"
#include "arena/inference/protocol.hpp"
#include "support/fixtures.hpp"

namespace arena {
namespace {

using nlohmann::json;
using testing::data_dir;
using testing::read_file;

std::string fixture(const std::string& name) { return read_file(data_dir() / "inference" / name); }

json response_json() { return json::parse(fixture("response.json")); }

TEST(WireFormat, RequestFixtureRoundTrips) {
  const std::string bytes = fixture("request.json");
  const InferenceRequest req = parse_request(bytes);
  EXPECT_EQ(req.session_id, "s000042");
  EXPECT_EQ(req.turn_index, 1u);
  ASSERT_EQ(req.dialog_history.size(), 3u);
  EXPECT_EQ(req.dialog_history[1].speaker, Speaker::Robot);
  ASSERT_EQ(req.action_history.size(), 2u);
  EXPECT_EQ(req.action_history[1].action.type, ActionType::Pickup);
  EXPECT_EQ(req.observation.visible.at(0).id, "coffee_maker_1");
  EXPECT_EQ(req.observation.id_at(1, 0), "coffee_maker_1");
  EXPECT_EQ(req.alternatives.size(), 2u);
  EXPECT_EQ(to_wire(req), json::parse(bytes));
  EXPECT_EQ(parse_request(serialize(req)), req);
}

TEST(WireFormat, ResponseFixtureRoundTrips) {
  const std::string bytes = fixture("response.json");
  const InferenceResponse resp = parse_response(bytes);
  EXPECT_EQ(resp.actions.size(), 2u);
  EXPECT_FALSE(resp.turn_complete);
  EXPECT_EQ(to_wire(resp), json::parse(bytes));
  EXPECT_EQ(parse_response(serialize(resp)), resp);
}

TEST(WireFormat, ParseWireDispatchesOnKind) {
  EXPECT_TRUE(std::holds_alternative<InferenceRequest>(parse_wire(fixture("request.json"))));
  EXPECT_TRUE(std::holds_alternative<InferenceResponse>(parse_wire(fixture("response.json"))));
  json j = response_json();
  j["kind"] = "gossip";
  EXPECT_ARENA_ERROR(parse_wire(j.dump()), ErrorCode::MalformedPayload);
}

TEST(WireFormat, RealObservationSurvivesTheWire) {
  InferenceRequest req;
  req.session_id = "s1";
  req.utterance = "pick up the mug";
  req.observation = render_observation(testing::lab());
  const InferenceRequest back = parse_request(serialize(req));
  EXPECT_EQ(back.observation.cells, req.observation.cells);
  EXPECT_EQ(back.observation.visible, req.observation.visible);
  EXPECT_EQ(back.observation.pose, req.observation.pose);
}

TEST(WireFormat, UnknownFieldsAreIgnored) {
  json j = response_json();
  j["confidence"] = 0.93;
  j["actions"][0]["note"] = "extra";
  EXPECT_EQ(parse_response(j.dump()), parse_response(fixture("response.json")));
}

TEST(WireFormat, ActionsDialogAndTurnCompleteTogetherAreMalformed) {
  json j = response_json();
  j["turn_complete"] = true;
  j["dialog"] = "On it.";
  EXPECT_ARENA_ERROR(parse_response(j.dump()), ErrorCode::MalformedPayload);
}

TEST(WireFormat, OpenTurnNeedsActionsAndNoDialog) {
  json empty = response_json();
  empty["actions"] = json::array();
  EXPECT_ARENA_ERROR(parse_response(empty.dump()), ErrorCode::MalformedPayload);
  json chatty = response_json();
  chatty["dialog"] = "hello";
  EXPECT_ARENA_ERROR(parse_response(chatty.dump()), ErrorCode::MalformedPayload);
}

TEST(WireFormat, TurnEndingShapesAreAccepted) {
  EXPECT_NO_THROW(validate(InferenceResponse::end("r", std::string("Done."))));
  EXPECT_NO_THROW(validate(InferenceResponse::end("r", std::nullopt)));
  InferenceResponse final_actions{"r", {Action::simple(ActionType::RotateLeft)}, std::nullopt, true};
  EXPECT_NO_THROW(validate(final_actions));
}

TEST(WireFormat, StopMustEndTheTurn) {
  InferenceResponse open{"r", {Action::simple(ActionType::Stop)}, std::nullopt, false};
  EXPECT_ARENA_ERROR(validate(open), ErrorCode::MalformedPayload);
  InferenceResponse middle{"r", {Action::simple(ActionType::Stop), Action::simple(ActionType::RotateLeft)}, std::nullopt, true};
  EXPECT_ARENA_ERROR(validate(middle), ErrorCode::MalformedPayload);
  InferenceResponse last{"r", {Action::simple(ActionType::RotateLeft), Action::simple(ActionType::Stop)}, std::nullopt, true};
  EXPECT_NO_THROW(validate(last));
}

TEST(WireFormat, AtMostTenActionsPerResponse) {
  InferenceResponse r{"r", std::vector<Action>(10, Action::simple(ActionType::RotateLeft)), std::nullopt, false};
  EXPECT_NO_THROW(validate(r));
  r.actions.push_back(Action::simple(ActionType::RotateLeft));
  EXPECT_ARENA_ERROR(validate(r), ErrorCode::MalformedPayload);
}

TEST(WireFormat, TruncatedPayloadIsMalformed) {
  const std::string bytes = fixture("request.json");
  for (std::size_t cut : {std::size_t{0}, std::size_t{1}, bytes.size() / 3, bytes.size() / 2, bytes.size() - 3}) {
    EXPECT_ARENA_ERROR(parse_request(bytes.substr(0, cut)), ErrorCode::MalformedPayload);
  }
}

TEST(WireFormat, StructuralErrorsAreMalformed) {
  EXPECT_ARENA_ERROR(parse_response("[]"), ErrorCode::MalformedPayload);
  json missing = response_json();
  missing.erase("turn_complete");
  EXPECT_ARENA_ERROR(parse_response(missing.dump()), ErrorCode::MalformedPayload);
  json bad_action = response_json();
  bad_action["actions"][0]["type"] = "Teleport";
  EXPECT_ARENA_ERROR(parse_response(bad_action.dump()), ErrorCode::MalformedPayload);
  json req = json::parse(fixture("request.json"));
  req["utterance"] = "";
  EXPECT_ARENA_ERROR(parse_request(req.dump()), ErrorCode::MalformedPayload);
  req = json::parse(fixture("request.json"));
  req["dialog_history"][0]["speaker"] = "narrator";
  EXPECT_ARENA_ERROR(parse_request(req.dump()), ErrorCode::MalformedPayload);
}

TEST(WireFormat, OtherSchemaVersionIsUnsupported) {
  json j = response_json();
  j["schema"] = "simbot-infer/2";
  EXPECT_ARENA_ERROR(parse_response(j.dump()), ErrorCode::SchemaVersionUnsupported);
}

}  // namespace
}  // namespace arena
