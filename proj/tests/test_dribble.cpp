#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "ss2d/dribble.hpp"
#include "ss2d/harness.hpp"

using namespace ss2d;
using namespace ss2d::dribble;

namespace {

const PlayerId kActor{Side::Ours, 10};
const auto kFallback = predictor::OpponentPredictor::fallback();

// Actor at `pos` facing 0 deg with the ball just in front; everyone else far away.
DribbleState open_state(Vec2 pos = {0.0, 0.0}) {
  WorldSnapshot w = make_empty_world();
  int i = 0;
  for (auto& p : w.players) {
    const double y = -30.0 + 3.0 * (i++ % 21);
    p.pos = p.side == Side::Ours ? Vec2{-50.0, y} : Vec2{50.0, y};
  }
  PlayerState* me = w.find(kActor);
  me->pos = pos;
  me->body = 0.0;
  w.ball.pos = pos + Vec2{0.5, 0.0};
  w.holder = kActor;
  return belief_from(full_state_view(w, kActor));
}

DribbleState without_opponents(DribbleState s) {
  std::erase_if(s.world.players, [](const PlayerState& p) { return p.side == Side::Theirs; });
  return s;
}

DribbleState random_state(std::mt19937_64& rng) {
  harness::ScenarioParams params;
  params.kind = harness::ScenarioKind::Dribble;
  params.placement = harness::Placement::Random;
  params.n_scenarios = 1000;
  params.seed = rng();
  const WorldSnapshot w = harness::gen_scenario(params, static_cast<int>(rng() % 1000));
  DribbleState s = belief_from(full_state_view(w, kActor));
  std::uniform_int_distribution<int> pc(0, 3);
  for (int u = 1; u <= 11; ++u) s.pos_counts[static_cast<std::size_t>(u)] = pc(rng);
  return s;
}

}  // namespace

TEST(Dribble, OpenFieldEnumeratesFullGrid) {
  const DribbleState s = without_opponents(open_state());
  const auto all = basic_dribble_candidates(s, kActor);
  // Reference count: targets inside the pitch whose first kick stays under 3 m/cycle.
  int expected = 0;
  for (int dir = 0; dir < 12; ++dir) {
    for (int d = 2; d <= 10; ++d) {
      const double heading = -180.0 + 30.0 * dir;
      const Vec2 target = Vec2::polar(d, heading);
      const int turn = std::fabs(normalize_angle(heading)) <= 20.0 ? 0 : static_cast<int>(std::ceil(std::fabs(normalize_angle(heading)) / 120.0 - 1e-9));
      const int n = turn + d + 1;
      const double speed = target.dist({0.5, 0.0}) * (1.0 - 0.94) / (1.0 - std::pow(0.94, n));
      if (speed <= 3.0) ++expected;
    }
  }
  EXPECT_EQ(expected, 108);
  EXPECT_EQ(static_cast<int>(all.size()), expected);
  for (const auto& c : all) EXPECT_TRUE(c.safe);
}

TEST(Dribble, TargetsStayInsidePitch) {
  const DribbleState s = without_opponents(open_state({50.0, 30.0}));
  const auto all = enumerate_dribbles(s, kActor);
  EXPECT_LT(all.size(), 108u);
  for (const auto& c : all) {
    EXPECT_LE(c.target.x, 52.5 + 1e-9);
    EXPECT_LE(c.target.y, 34.0 + 1e-9);
  }
}

TEST(Dribble, OpponentOnForwardTargetBlocksThatDirection) {
  DribbleState s = open_state();
  s.world.find({Side::Theirs, 5})->pos = {6.0, 0.0};
  for (const auto& c : enumerate_dribbles(s, kActor)) {
    if (c.dir_index == 6 && c.dash_count >= 6) {
      EXPECT_FALSE(c.safe) << c.dash_count;
    }
  }
}

TEST(Dribble, NotKickableThrows) {
  DribbleState s = open_state();
  s.world.ball.pos = {5.0, 0.0};
  EXPECT_THROW(basic_dribble_candidates(s, kActor), std::domain_error);
  EXPECT_THROW(one_step_actions(s, kActor, kFallback), std::domain_error);
}

TEST(Blocks, WorkedArithmetic) {
  const BallState ball{{0.0, 0.0}, {}};
  DribbleCandidate c;
  c.target = {5.0, 0.0};
  c.dribble_cycles = 5;
  c.first_kick_speed = 5.0 * (1.0 - 0.94) / (1.0 - std::pow(0.94, 5));
  EXPECT_NEAR(dribble_ball_path(c, ball, 5).x, 5.0, 1e-12);

  ObservedPlayer far{};
  far.base.pos = {35.0, 0.0};
  EXPECT_FALSE(opponent_blocks(far, c, ball));

  ObservedPlayer on_target{};
  on_target.base.pos = c.target;
  EXPECT_TRUE(opponent_blocks(on_target, c, ball));

  // 6 m from the t = 5 point, pos_count 3: reach 1 + 3 = 4 <= 5.
  ObservedPlayer stale{};
  stale.base.pos = {5.0, 6.0};
  stale.pos_count = 3;
  EXPECT_TRUE(opponent_blocks(stale, c, ball));
  stale.pos_count = 0;
  EXPECT_FALSE(opponent_blocks(stale, c, ball));
}

TEST(Dribble, CycleBudgetOnEveryCandidate) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 100; ++i) {
    const DribbleState s = random_state(rng);
    for (const auto& c : enumerate_dribbles(s, kActor)) {
      EXPECT_EQ(c.dribble_cycles, c.turn_cycles + c.dash_cycles + 1);
      EXPECT_LE(c.first_kick_speed, 3.0);
      const BallState kicked{s.world.ball.pos, (c.target - s.world.ball.pos).normalized() * c.first_kick_speed};
      EXPECT_NEAR(ball_travel(kicked, c.dribble_cycles).dist(c.target), 0.0, 1e-9);
    }
  }
}

TEST(Dribble, PosCountNeverAddsSafeCandidates) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 30; ++i) {
    const DribbleState s = random_state(rng);
    const std::size_t base = basic_dribble_candidates(s, kActor).size();
    for (int u = 1; u <= 11; ++u) {
      DribbleState raised = s;
      std::size_t previous = base;
      for (int pc = s.pos_counts[static_cast<std::size_t>(u)] + 1; pc <= 10; ++pc) {
        raised.pos_counts[static_cast<std::size_t>(u)] = pc;
        const std::size_t n = basic_dribble_candidates(raised, kActor).size();
        EXPECT_LE(n, previous);
        previous = n;
      }
    }
  }
}

TEST(OneStep, OpenFieldActionsAreLegal) {
  const DribbleState s = open_state();
  const auto actions = one_step_actions(s, kActor, kFallback);
  EXPECT_FALSE(actions.empty());
  for (const auto& o : actions) {
    const PlayerState& me = o.next.world.at(kActor);
    EXPECT_LE(me.pos.dist(o.next.world.ball.pos), me.type.kickable_area);
    EXPECT_EQ(o.next.world.cycle, s.world.cycle + 1);
  }
  // Every turn direction is legal with a resting ball at 0.5 m.
  int turns = 0;
  for (const auto& o : actions) turns += o.action.kind == OneStepKind::TurnBeforeKick;
  EXPECT_EQ(turns, kTurnDirections);
}

TEST(OneStep, KickThatLosesTheBallIsFiltered) {
  const DribbleState s = open_state();
  for (const auto& o : one_step_actions(s, kActor, kFallback)) {
    if (o.action.kind != OneStepKind::TwoStepKick) continue;
    // The ball sits 0.5 m ahead; a 0.6 kick forward would leave it 1.1 m away.
    EXPECT_FALSE(o.action.direction == 0.0 && o.action.kick_vel.length() > 0.5);
  }
}

TEST(OneStep, FallbackAgesOpponentsAndNetworkKeepsCounts) {
  DribbleState s = open_state();
  s.world.find({Side::Theirs, 4})->pos = {3.0, 1.0};
  s.pos_counts[4] = 2;
  const auto fb = one_step_actions(s, kActor, kFallback);
  ASSERT_FALSE(fb.empty());
  EXPECT_EQ(fb.front().next.pos_counts[4], 3);
  EXPECT_EQ(fb.front().next.pos_counts[9], 1);
}

TEST(Mad, NoOpponentsChainCountIsSumOfDepthTwo) {
  const DribbleState s = open_state();
  std::size_t expected = 0;
  for (const auto& o : one_step_actions(s, kActor, kFallback)) expected += basic_dribble_candidates(o.next, kActor).size();
  EXPECT_EQ(mad_candidates(s, kActor, kFallback).size(), expected);
}

TEST(Mad, RootSetInvariantAndScoreNotWorse) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 40; ++i) {
    const DribbleState s = random_state(rng);
    const auto basic = chain_search_detailed(s, kActor, false, kFallback);
    const auto mad = chain_search_detailed(s, kActor, true, kFallback);
    EXPECT_EQ(basic.root_chains, mad.root_chains);
    EXPECT_EQ(basic.mad_chains, 0u);
    EXPECT_GE(mad.best.score, basic.best.score);
  }
}

TEST(Mad, BlockedForwardIsRescuedByTurning) {
  // Stationary blocker 2 m straight ahead; everybody else far away.
  DribbleState s = open_state();
  s.world.ball.pos = {0.4, 0.0};
  PlayerState* blocker = s.world.find({Side::Theirs, 6});
  blocker->pos = {2.0, 0.0};
  blocker->body = -180.0;

  std::set<std::pair<int, int>> unsafe_at_root;
  for (const auto& c : enumerate_dribbles(s, kActor)) {
    if (c.dir_index == 6) {
      EXPECT_FALSE(c.safe);
    }
    if (!c.safe) unsafe_at_root.insert({c.dir_index, c.dash_count});
  }

  // After a turn, some dribble straight along the new body direction
  // (no turn needed any more) is safe although it was not at the root.
  bool rescued_forward = false;
  for (const auto& chain : mad_candidates(s, kActor, kFallback)) {
    const auto& first = std::get<OneStepAction>(chain.steps.front());
    const DribbleCandidate* d = chain.final_dribble();
    ASSERT_NE(d, nullptr);
    if (first.kind != OneStepKind::TurnBeforeKick) continue;
    if (d->turn_cycles == 0 && unsafe_at_root.contains({d->dir_index, d->dash_count})) rescued_forward = true;
  }
  EXPECT_TRUE(rescued_forward);
}

TEST(Search, OpenFieldPrefersLongestForwardDribble) {
  const DribbleState s = open_state({-20.0, 0.0});
  const ActionChain best = chain_search(s, kActor, false, kFallback);
  const DribbleCandidate* d = best.final_dribble();
  ASSERT_NE(d, nullptr);
  EXPECT_EQ(d->dir_index, 6);
  EXPECT_EQ(d->dash_count, 10);
  EXPECT_DOUBLE_EQ(best.score, field_evaluate(best.predicted_state));
}

TEST(Search, SurroundedActorHolds) {
  DribbleState s = open_state();
  for (int u = 1; u <= 11; ++u) s.world.find({Side::Theirs, u})->pos = Vec2::polar(1.2, 33.0 * u);
  const auto result = chain_search_detailed(s, kActor, true, kFallback);
  EXPECT_EQ(result.root_chains, 0u);
  EXPECT_EQ(result.mad_chains, 0u);
  EXPECT_TRUE(result.best.is_hold());
  EXPECT_DOUBLE_EQ(result.best.score, field_evaluate(s.world));
}

TEST(Search, PredictedStatesRespectWorldInvariants) {
  std::mt19937_64 rng(24);
  for (int i = 0; i < 10; ++i) {
    const DribbleState s = random_state(rng);
    for (const auto& chain : mad_candidates(s, kActor, kFallback)) {
      EXPECT_LE(chain.predicted_state.ball.vel.length(), 3.0);
      EXPECT_NO_THROW(validate(chain.predicted_state));
    }
  }
}

TEST(Evaluator, Examples) {
  WorldSnapshot w = make_empty_world();
  w.ball.pos = {52.5, 0.0};
  EXPECT_DOUBLE_EQ(field_evaluate(w), 92.5);
  w.ball.pos = {0.0, 0.0};
  EXPECT_DOUBLE_EQ(field_evaluate(w), 0.0);
  const double low = field_evaluate(w);
  w.ball.pos = {1.0, 0.0};
  EXPECT_GT(field_evaluate(w), low);
}

TEST(Evaluator, CustomEvaluatorIsUsed) {
  const DribbleState s = without_opponents(open_state());
  // Prefer going backwards.
  const FieldEvaluator back = [](const WorldSnapshot& w) { return -w.ball.pos.x; };
  const ActionChain best = chain_search(s, kActor, false, kFallback, back);
  ASSERT_NE(best.final_dribble(), nullptr);
  EXPECT_EQ(best.final_dribble()->dir_index, 0);
}

TEST(Json, ChainSerialization) {
  const DribbleState s = open_state();
  const auto j = to_json(chain_search(s, kActor, true, kFallback));
  EXPECT_FALSE(j["hold"].get<bool>());
  EXPECT_TRUE(j["steps"].is_array());
  EXPECT_EQ(j["steps"].back()["action"], "dribble");
}
