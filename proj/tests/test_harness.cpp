#include <gtest/gtest.h>

#include <memory>

#include "ss2d/harness.hpp"

using namespace ss2d;
using namespace ss2d::harness;

namespace {

const std::string kFixtures = SS2D_FIXTURES;

}  // namespace

TEST(Scenario, Deterministic) {
  ScenarioParams p;
  p.seed = 77;
  EXPECT_EQ(gen_scenario(p, 5), gen_scenario(p, 5));
  EXPECT_NE(gen_scenario(p, 5), gen_scenario(p, 6));
  ScenarioParams q = p;
  q.n_scenarios = 1000;
  EXPECT_EQ(gen_scenario(p, 5), gen_scenario(q, 5));
}

TEST(Scenario, IndexOutOfRangeThrows) {
  ScenarioParams p;
  p.n_scenarios = 3;
  EXPECT_THROW(gen_scenario(p, 3), std::domain_error);
}

TEST(Scenario, DefensiveThirdBound) {
  ScenarioParams p;
  for (int i = 0; i < 100; ++i) {
    const WorldSnapshot w = gen_scenario(p, i);
    for (const auto* o : w.team(Side::Theirs)) EXPECT_LE(o->pos.x, -17.5);
  }
}

TEST(Scenario, ThousandValidSnapshots) {
  for (Placement placement : {Placement::DefensiveThird, Placement::Midfield, Placement::Random}) {
    for (ScenarioKind kind : {ScenarioKind::Marking, ScenarioKind::Dribble}) {
      ScenarioParams p;
      p.n_scenarios = 1000;
      p.placement = placement;
      p.kind = kind;
      for (int i = 0; i < p.n_scenarios; ++i) {
        const WorldSnapshot w = gen_scenario(p, i);
        ASSERT_NO_THROW(validate(w));
        ASSERT_TRUE(w.holder.has_value());
        EXPECT_EQ(w.holder->side, kind == ScenarioKind::Marking ? Side::Theirs : Side::Ours);
      }
    }
  }
}

TEST(Scenario, PlacementParsing) {
  EXPECT_EQ(parse_placement("midfield"), Placement::Midfield);
  EXPECT_EQ(to_string(Placement::DefensiveThird), "defensive_third");
  EXPECT_THROW(parse_placement("attack"), std::domain_error);
}

TEST(Scenario, ObserverSeedLaw) {
  EXPECT_EQ(observer_seed(12, 7), 12007u);
  EXPECT_EQ(scenario_seed(3, 4), scenario_seed(3, 4));
  EXPECT_NE(scenario_seed(3, 4), scenario_seed(3, 5));
}

TEST(MarkBench, ZeroNoiseIsSynchronized) {
  ScenarioParams p;
  p.n_scenarios = 100;
  const auto report = run_mark_bench(p);
  ASSERT_EQ(report.algorithms.size(), 4u);
  for (const auto& [algo, st] : report.algorithms) EXPECT_EQ(st.sync_rate, 1.0) << marking::to_string(algo);
  EXPECT_EQ(report.algorithms.at(marking::Algorithm::Omam).duplicate_mark_rate, 0.0);
  EXPECT_EQ(report.algorithms.at(marking::Algorithm::Hungarian).duplicate_mark_rate, 0.0);
}

TEST(MarkBench, RatesAreFractions) {
  ScenarioParams p;
  p.n_scenarios = 60;
  p.noise = {0.05, 0.3};
  p.placement = Placement::Random;
  const auto report = run_mark_bench(p);
  EXPECT_EQ(report.n_scenarios, 60);
  for (const auto& [algo, st] : report.algorithms) {
    for (double r : {st.duplicate_mark_rate, st.unmarked_attacker_rate, st.sync_rate}) {
      EXPECT_GE(r, 0.0);
      EXPECT_LE(r, 1.0);
    }
    EXPECT_GT(st.mean_total_cost, 0.0);
  }
}

TEST(MarkBench, CentralizedMatchingHasNoDuplicates) {
  ScenarioParams p;
  p.n_scenarios = 80;
  p.noise = {0.05, 0.3};
  const auto report = run_mark_bench(p, true);
  EXPECT_EQ(report.algorithms.at(marking::Algorithm::Hungarian).duplicate_mark_rate, 0.0);
  EXPECT_EQ(report.algorithms.at(marking::Algorithm::Omam).duplicate_mark_rate, 0.0);
  for (const auto& [algo, st] : report.algorithms) EXPECT_EQ(st.sync_rate, 1.0);
}

TEST(MarkBench, CrowdedGeometry) {
  const auto report = run_mark_bench({crowded_marking_scenario()}, {}, 1);
  EXPECT_EQ(report.algorithms.at(marking::Algorithm::Proximity).duplicate_mark_rate, 1.0);
  EXPECT_EQ(report.algorithms.at(marking::Algorithm::Omam).duplicate_mark_rate, 0.0);
  EXPECT_EQ(report.algorithms.at(marking::Algorithm::Omam).unmarked_attacker_rate, 0.0);
  EXPECT_GT(report.algorithms.at(marking::Algorithm::Proximity).unmarked_attacker_rate, 0.0);
}

TEST(MarkBench, ReportsAreDeterministic) {
  ScenarioParams p;
  p.n_scenarios = 30;
  p.noise = {0.02, 0.1};
  EXPECT_EQ(to_json(run_mark_bench(p)).dump(), to_json(run_mark_bench(p)).dump());
  const std::string table = to_table(run_mark_bench(p));
  EXPECT_NE(table.find("omam"), std::string::npos);
}

TEST(DribbleBench, OpenFieldGainNeverNegative) {
  ScenarioParams p;
  p.n_scenarios = 20;
  p.placement = Placement::Random;
  p.noise = {0.02, 0.3};
  const auto r = run_dribble_bench(p, true, std::nullopt);
  EXPECT_GE(r.min_mad_gain, 0.0);
  EXPECT_GE(r.mad_gain, 0.0);
  EXPECT_GT(r.mean_candidates, r.mean_root_candidates);
}

TEST(DribbleBench, BlockedFamilyIsRescued) {
  ScenarioParams p;
  p.n_scenarios = 20;
  const auto r = run_dribble_bench(p, true, std::nullopt, DribbleFamily::BlockedForward);
  EXPECT_EQ(r.basic_none, 20);
  EXPECT_GT(r.rescue_rate(), 0.5);
}

TEST(DribbleBench, PredictorNotWorseThanFallback) {
  ScenarioParams p;
  p.n_scenarios = 20;
  p.noise = {0.0, 0.3};
  const auto r = run_dribble_bench(p, true, kFixtures + "/constant_velocity.txt", DribbleFamily::BlockedForward);
  EXPECT_TRUE(r.with_network);
  EXPECT_EQ(r.predictor_not_worse, 20);
  EXPECT_GE(r.mean_mad_chains_network, r.mean_mad_chains_fallback);
}

TEST(DribbleBench, BadWeightsSurfaceParseError) {
  ScenarioParams p;
  p.n_scenarios = 1;
  EXPECT_THROW(run_dribble_bench(p, true, kFixtures + "/make_fixtures.py"), predictor::ParseError);
}

TEST(PassLog, LinesCarryPassEvents) {
  ScenarioParams p;
  p.n_scenarios = 25;
  const auto lines = gen_pass_log(p);
  ASSERT_EQ(lines.size(), 25u);
  for (const auto& j : lines) {
    const int k = j["pass"]["kicker"];
    const int r = j["pass"]["receiver"];
    EXPECT_NE(k, r);
    EXPECT_GE(k, 2);
    EXPECT_LE(r, 11);
  }
}
