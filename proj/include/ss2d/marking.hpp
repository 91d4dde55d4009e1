#pragma once

#include <map>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ss2d/world.hpp"

namespace ss2d::marking {

enum class Algorithm { Proximity, DangerGreedy, Hungarian, Omam };

std::string_view to_string(Algorithm algo);
/// Accepts proximity, danger, hungarian, omam. Throws std::domain_error.
Algorithm parse_algorithm(std::string_view text);

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::Proximity, Algorithm::DangerGreedy,
                                               Algorithm::Hungarian, Algorithm::Omam};

struct DangerScore {
  PlayerId opponent;
  double score = 0.0;
};

/// 2*max(0, 1 - dGoal/60) + max(0, 1 - dBall/40), in [0, 3].
double danger_score(const Vec2& opponent, const Vec2& ball, const SimConfig& cfg = {});

/// Opponents by descending danger, ties by ascending unum.
std::vector<DangerScore> danger_rank(const AgentObservation& obs, const SimConfig& cfg = {});

enum class OurRole { Back, Middle, Forward };
enum class TheirRole { Attacker, Normal };

inline constexpr int kAttackerCount = 4;

struct PlayerGroups {
  std::map<int, OurRole> ours;     // unums 2..11
  std::map<int, TheirRole> theirs; // all observed opponents
};

OurRole our_role(int unum);
PlayerGroups group_players(const AgentObservation& obs, const SimConfig& cfg = {});

struct MarkPlan {
  Algorithm algorithm = Algorithm::Proximity;
  std::map<int, int> marks;  // our unum -> their unum
  bool operator==(const MarkPlan&) const = default;
};

/// One OMAM stage as solved: agent and task unums.
struct OmamStage {
  std::vector<int> agents;
  std::vector<int> tasks;
};

/// Optional trace of the staged OMAM solve (stage sizes are bounded).
struct OmamTrace {
  std::vector<OmamStage> stages;
};

inline constexpr int kOmamTopK = 3;
inline constexpr double kHungarianDummyCost = 1e6;

MarkPlan mark_assign(const AgentObservation& obs, Algorithm algorithm, const SimConfig& cfg = {},
                     OmamTrace* trace = nullptr);

nlohmann::json to_json(const MarkPlan& plan);

}  // namespace ss2d::marking
