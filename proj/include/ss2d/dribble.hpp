#pragma once

#include <array>
#include <functional>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ss2d/predictor.hpp"
#include "ss2d/world.hpp"

namespace ss2d::dribble {

/// Opponent pos-counts indexed by uniform number; slot 0 unused.
using PosCounts = std::array<int, 12>;

/// What the dribbling agent believes: positions plus opponent staleness.
struct DribbleState {
  WorldSnapshot world;
  PosCounts pos_counts{};
};

/// Opponent entries of an observation become the state's pos-counts.
DribbleState belief_from(const AgentObservation& obs);

inline constexpr int kDirections = 12;  // -180 .. +150 step 30
inline constexpr int kMinDash = 2;
inline constexpr int kMaxDash = 10;

/// Heading of direction index i in degrees.
inline double direction_of(int index) { return -180.0 + 30.0 * index; }

struct DribbleCandidate {
  Vec2 target;
  int dir_index = 0;
  int dash_count = 0;
  int turn_cycles = 0;
  int dash_cycles = 0;
  int dribble_cycles = 0;  // turn + dash + 1 kick
  double first_kick_speed = 0.0;
  bool safe = false;
};

/// Every kinematically feasible candidate (ball-speed cap and pitch bounds
/// respected), each with its safety flag set.
std::vector<DribbleCandidate> enumerate_dribbles(const DribbleState& state, const PlayerId& actor,
                                                 const SimConfig& cfg = {});

/// Safe candidates only. Throws std::domain_error if the actor cannot kick.
std::vector<DribbleCandidate> basic_dribble_candidates(const DribbleState& state, const PlayerId& actor,
                                                       const SimConfig& cfg = {});

/// True iff the opponent, shrunk by pos_count * max_speed of positional
/// uncertainty and paying one reaction cycle, reaches the ball path at or
/// before the ball does at some cycle 1..dribble_cycles.
bool opponent_blocks(const ObservedPlayer& opp, const DribbleCandidate& candidate, const BallState& ball,
                     const SimConfig& cfg = {});

/// Ball position t cycles into the dribble's first kick.
Vec2 dribble_ball_path(const DribbleCandidate& candidate, const BallState& ball, int t, const SimConfig& cfg = {});

enum class OneStepKind { TwoStepKick, MoveBeforeKick, TurnBeforeKick };

struct OneStepAction {
  OneStepKind kind = OneStepKind::TurnBeforeKick;
  int index = 0;       // position in the enumeration grid of its kind
  Vec2 kick_vel;       // TwoStepKick
  double direction = 0.0;  // dash direction or new body direction, degrees
};

struct OneStepOutcome {
  OneStepAction action;
  DribbleState next;
};

inline constexpr double kTwoStepKickSpeeds[] = {0.3, 0.6};
inline constexpr int kKickDirections = 8;
inline constexpr int kMoveDirections = 8;
inline constexpr int kTurnDirections = 12;

/// Legal one-step pre-actions with the predicted state one cycle later.
/// Opponents within 10 m of the ball are moved by a network predictor (at
/// most max_speed, pos-count kept); otherwise their pos-count grows by one.
std::vector<OneStepOutcome> one_step_actions(const DribbleState& state, const PlayerId& actor,
                                             const predictor::OpponentPredictor& predictor,
                                             const SimConfig& cfg = {});

using Step = std::variant<OneStepAction, DribbleCandidate>;

struct ActionChain {
  std::vector<Step> steps;  // empty for Hold
  WorldSnapshot predicted_state;
  double score = 0.0;
  int total_cycles = 0;

  bool is_hold() const { return steps.empty(); }
  const DribbleCandidate* final_dribble() const;
};

/// Depth-2 chains: one safe basic dribble after each legal one-step action.
std::vector<ActionChain> mad_candidates(const DribbleState& state, const PlayerId& actor,
                                        const predictor::OpponentPredictor& predictor, const SimConfig& cfg = {});

/// ball.x + max(0, 40 - distance to the opponent goal).
double field_evaluate(const WorldSnapshot& state, const SimConfig& cfg = {});

using FieldEvaluator = std::function<double(const WorldSnapshot&)>;

struct SearchResult {
  ActionChain best;
  std::size_t root_chains = 0;
  std::size_t mad_chains = 0;
};

/// Best chain by evaluator score; ties by fewer cycles, then smaller
/// direction index. A Hold chain is always a candidate and is returned when
/// nothing is safe.
SearchResult chain_search_detailed(const DribbleState& state, const PlayerId& actor, bool use_mad,
                                   const predictor::OpponentPredictor& predictor,
                                   const FieldEvaluator& evaluator = {}, const SimConfig& cfg = {});

ActionChain chain_search(const DribbleState& state, const PlayerId& actor, bool use_mad,
                         const predictor::OpponentPredictor& predictor, const FieldEvaluator& evaluator = {},
                         const SimConfig& cfg = {});

nlohmann::json to_json(const DribbleCandidate& c);
nlohmann::json to_json(const ActionChain& chain);

}  // namespace ss2d::dribble
