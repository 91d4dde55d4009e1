#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ss2d/marking.hpp"
#include "ss2d/predictor.hpp"
#include "ss2d/world.hpp"

namespace ss2d::harness {

enum class Placement { DefensiveThird, Midfield, Random };
enum class ScenarioKind { Marking, Dribble };

Placement parse_placement(std::string_view text);
std::string_view to_string(Placement p);

struct ScenarioParams {
  std::uint64_t seed = 1;
  int n_scenarios = 100;
  NoiseModel noise;
  Placement placement = Placement::DefensiveThird;
  ScenarioKind kind = ScenarioKind::Marking;
};

/// The dribbling actor in Dribble scenarios.
inline constexpr PlayerId kDribbler{Side::Ours, 10};

/// Per-scenario seed derived from (seed, index) only.
std::uint64_t scenario_seed(std::uint64_t seed, int index);
/// base * 1000 + unum.
std::uint64_t observer_seed(std::uint64_t base, int unum);

/// Deterministic in (params.seed, index). Marking scenarios hand the ball
/// to an opposing outfield player; Dribble scenarios to kDribbler.
WorldSnapshot gen_scenario(const ScenarioParams& params, int index, const SimConfig& cfg = {});

/// Two defenders nearest to the same attacker while a second attacker
/// stands free; every other pair is isolated.
WorldSnapshot crowded_marking_scenario(const SimConfig& cfg = {});

/// Dribbler facing a blocker 2 m straight ahead with the flanks pressed.
/// Small seeded perturbations of the geometry.
WorldSnapshot blocked_forward_scenario(std::uint64_t seed, int index, const SimConfig& cfg = {});

struct AlgorithmStats {
  double duplicate_mark_rate = 0.0;     // scenarios with any opponent marked twice
  double unmarked_attacker_rate = 0.0;  // attacker slots left unmarked
  double mean_total_cost = 0.0;         // true metres to executed marks
  double sync_rate = 0.0;               // scenarios where all observers agree
  double mean_duplicated_opponents = 0.0;
};

struct MarkBenchReport {
  int n_scenarios = 0;
  NoiseModel noise;
  bool centralized = false;
  std::map<marking::Algorithm, AlgorithmStats> algorithms;
};

/// Each of our 11 players observes the scenario with its own seed, computes a
/// plan and executes only its own mark. Centralized mode shares observer 1's
/// view among everyone.
MarkBenchReport run_mark_bench(const std::vector<WorldSnapshot>& worlds, const NoiseModel& noise, std::uint64_t seed,
                               bool centralized = false, const SimConfig& cfg = {});
MarkBenchReport run_mark_bench(const ScenarioParams& params, bool centralized = false, const SimConfig& cfg = {});

nlohmann::json to_json(const MarkBenchReport& report);
std::string to_table(const MarkBenchReport& report);

enum class DribbleFamily { Open, BlockedForward };

struct DribbleBenchReport {
  int n_scenarios = 0;
  bool use_mad = false;
  bool with_network = false;
  double mean_candidates = 0.0;   // chains considered in the configured mode
  double mean_best_score = 0.0;   // configured mode
  double mad_gain = 0.0;          // mean(score with MAD - score without)
  double min_mad_gain = 0.0;
  double mean_root_candidates = 0.0;
  double mean_mad_chains_fallback = 0.0;
  double mean_mad_chains_network = 0.0;
  int predictor_not_worse = 0;    // scenarios with network chains >= fallback chains
  int basic_none = 0;             // scenarios with no safe root dribble
  int rescued = 0;                // ...of which MAD found at least one chain
  double rescue_rate() const { return basic_none ? static_cast<double>(rescued) / basic_none : 0.0; }
};

DribbleBenchReport run_dribble_bench(const ScenarioParams& params, bool use_mad,
                                     const std::optional<std::string>& weights_path,
                                     DribbleFamily family = DribbleFamily::Open, const SimConfig& cfg = {});
DribbleBenchReport run_dribble_bench(const ScenarioParams& params, bool use_mad,
                                     const predictor::OpponentPredictor& predictor,
                                     DribbleFamily family = DribbleFamily::Open, const SimConfig& cfg = {});

nlohmann::json to_json(const DribbleBenchReport& report);
std::string to_table(const DribbleBenchReport& report);

/// Snapshot lines with a "pass" object: the holder passes to a random mate.
std::vector<nlohmann::json> gen_pass_log(const ScenarioParams& params, const SimConfig& cfg = {});

}  // namespace ss2d::harness
