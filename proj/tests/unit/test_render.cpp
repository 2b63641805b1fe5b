#include <gtest/gtest.h>

#include "arena/core/observation.hpp"
#include "arena/core/simulator.hpp"
#include "support/fixtures.hpp"
#include "support/random_actions.hpp"
#include "support/render_oracle.hpp"

namespace arena {
namespace {

using nlohmann::json;

WorldState two_boxes(double near_z, double far_z) {
  auto doc = json::parse(R"({
    "schema": "arena-scene/1",
    "scene_id": "boxes",
    "rooms": [{"id": "r", "name": "room", "size": [6, 3, 6],
               "viewpoints": [{"id": "v0", "x": 3, "z": 1}]}],
    "agent": {"viewpoint": "v0", "heading": "N", "pitch": "level"},
    "objects": []
  })");
  doc["objects"] = json::array({
      {{"id", "front"}, {"class", "Box"}, {"room", "r"}, {"position", {3, 1.5, near_z}}, {"size", {0.4, 0.4, 0.4}}},
      {{"id", "back"}, {"class", "Box"}, {"room", "r"}, {"position", {3, 1.5, far_z}}, {"size", {1.6, 1.6, 0.4}}},
  });
  return load_scene(doc, testing::fixture_registry());
}

TEST(Render, NearBoxOccludesFarBox) {
  const auto s = two_boxes(2.0, 4.0);
  const auto obs = render_observation(s);
  EXPECT_EQ(obs.id_at(obs.width / 2, obs.height / 2), "front");
  const auto* back = obs.find_visible("back");
  const auto* front = obs.find_visible("front");
  ASSERT_NE(back, nullptr);
  ASSERT_NE(front, nullptr);
  // the back box surrounds the front one on screen
  EXPECT_LT(back->x0, front->x0);
  EXPECT_GT(back->x1, front->x1);
  EXPECT_LT(front->depth, back->depth);
  EXPECT_EQ(testing::oracle_mismatches(s), 0);
}

TEST(Render, ObjectBehindCameraOrBeyondFarPlaneIsInvisible) {
  auto s = two_boxes(0.2, 4.0);  // front box straddles the eye plane
  s.objects.at("front").box.center.z = -0.5;
  EXPECT_EQ(render_observation(s).find_visible("front"), nullptr);
  s.objects.at("back").box.center.z = 20;
  EXPECT_TRUE(render_observation(s).visible.empty());
}

TEST(Render, EmptyRoomRendersNothing) {
  auto s = two_boxes(2.0, 4.0);
  s.agent.heading = Heading::S;
  const auto obs = render_observation(s);
  EXPECT_TRUE(obs.visible.empty());
  for (auto c : obs.cells) EXPECT_EQ(c, -1);
  for (auto d : obs.depth) EXPECT_EQ(d, kFarPlane);
}

TEST(Render, IsPure) {
  const auto& lab = testing::lab();
  EXPECT_EQ(render_observation(lab), render_observation(lab));
  const auto hash = state_hash(lab);
  (void)render_observation(lab, 200, 120);
  EXPECT_EQ(state_hash(lab), hash);
}

TEST(Render, ContentsOfClosedReceptacleAreHidden) {
  const auto s = testing::lab();
  auto [at_fridge, r] = apply_action(s, Action::goto_object("fridge_1"));
  ASSERT_TRUE(r.ok);
  EXPECT_EQ(render_observation(at_fridge).find_visible("soda_can_1"), nullptr);
  auto [open, r2] = apply_action(at_fridge, Action::on(ActionType::Open, "fridge_1"));
  ASSERT_TRUE(r2.ok);
  EXPECT_NE(render_observation(open).find_visible("soda_can_1"), nullptr);
}

TEST(Render, ObjectAtBounds) {
  const auto obs = render_observation(testing::lab());
  EXPECT_NO_THROW(object_at(obs, 0, 0));
  EXPECT_NO_THROW(object_at(obs, obs.width - 1, obs.height - 1));
  EXPECT_ARENA_ERROR(object_at(obs, obs.width, 0), ErrorCode::CoordinateOutOfBounds);
  EXPECT_ARENA_ERROR(object_at(obs, 0, -1), ErrorCode::CoordinateOutOfBounds);
}

TEST(Render, MaskStatisticsAgreeWithCells) {
  const auto obs = render_observation(testing::lab());
  int covered = 0;
  for (const auto& v : obs.visible) {
    covered += v.cells;
    EXPECT_GT(v.cells, 0);
    EXPECT_LE(v.cells, (v.x1 - v.x0 + 1) * (v.y1 - v.y0 + 1));
  }
  int nonempty = 0;
  for (auto c : obs.cells) nonempty += c >= 0;
  EXPECT_EQ(covered, nonempty);
}

TEST(Render, WireRoundTrip) {
  testing::RandomActions gen(7);
  WorldState s = testing::lab();
  for (int i = 0; i < 40; ++i) {
    s = apply_action(s, gen.next(s)).first;
    const auto obs = render_observation(s);
    const json j = obs;
    EXPECT_EQ(j.get<Observation>(), obs);
    EXPECT_EQ(json::parse(j.dump()).get<Observation>(), obs);
  }
}

TEST(Render, MatchesOracleOnRandomStates) {
  int states = 0;
  for (std::uint64_t seed = 1; states < 500; ++seed) {
    testing::RandomActions gen(seed);
    WorldState s = seed % 2 ? testing::lab() : testing::office();
    for (int k = 0; k < 25; ++k) {
      s = apply_action(s, gen.next(s)).first;
      ASSERT_EQ(testing::oracle_mismatches(s), 0) << "seed " << seed << " step " << k;
      ++states;
    }
  }
}

}  // namespace
}  // namespace arena
