#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ss2d/geometry.hpp"

namespace ss2d {

/// Server-level constants. Defaults follow the standard 2D simulator.
struct SimConfig {
  double half_length = 52.5;
  double half_width = 34.0;
  double out_of_play_margin = 5.0;
  double penalty_area_length = 16.5;
  double penalty_area_half_width = 20.16;

  double ball_decay = 0.94;
  double ball_speed_max = 3.0;

  double player_max_speed = 1.0;
  double kickable_area = 1.085;
  double player_size = 0.3;

  double turn_dead_zone = 20.0;   // degrees, no turn needed inside
  double turn_per_cycle = 120.0;  // degrees per turn cycle

  int max_staleness = 30;

  Vec2 our_goal() const { return {-half_length, 0.0}; }
  Vec2 their_goal() const { return {half_length, 0.0}; }
  bool in_pitch(const Vec2& p) const {
    return std::fabs(p.x) <= half_length + 1e-9 && std::fabs(p.y) <= half_width + 1e-9;
  }
  bool in_margin(const Vec2& p) const {
    return std::fabs(p.x) <= half_length + out_of_play_margin &&
           std::fabs(p.y) <= half_width + out_of_play_margin;
  }
  Vec2 clamp_to_margin(const Vec2& p) const;
};

enum class Side { Ours, Theirs };

std::string_view to_string(Side side);
Side parse_side(std::string_view text);

struct PlayerId {
  Side side = Side::Ours;
  int unum = 0;
  auto operator<=>(const PlayerId&) const = default;
};

/// Parses "ours:9" / "theirs:3".
PlayerId parse_player_id(std::string_view text);
std::string to_string(const PlayerId& id);

struct PlayerType {
  double max_speed = 1.0;
  double kickable_area = 1.085;
  double size = 0.3;
  bool operator==(const PlayerType&) const = default;
};

struct PlayerState {
  Side side = Side::Ours;
  int unum = 0;
  Vec2 pos;
  Vec2 vel;
  double body = 0.0;
  PlayerType type;

  PlayerId id() const { return {side, unum}; }
  bool operator==(const PlayerState&) const = default;
};

struct BallState {
  Vec2 pos;
  Vec2 vel;
  bool operator==(const BallState&) const = default;
};

struct WorldSnapshot {
  int cycle = 0;
  BallState ball;
  std::vector<PlayerState> players;
  std::optional<PlayerId> holder;

  const PlayerState* find(const PlayerId& id) const;
  PlayerState* find(const PlayerId& id);
  /// Throws std::domain_error when the player is absent.
  const PlayerState& at(const PlayerId& id) const;
  std::vector<const PlayerState*> team(Side side) const;

  bool operator==(const WorldSnapshot&) const = default;
};

/// Throws std::domain_error naming the first violated invariant.
void validate(const WorldSnapshot& world, const SimConfig& cfg = {});

struct ObservedPlayer {
  PlayerState base;
  int pos_count = 0;
  int vel_count = 0;
  int body_count = 0;
  bool operator==(const ObservedPlayer&) const = default;
};

struct AgentObservation {
  PlayerId observer;
  int cycle = 0;
  BallState ball;
  std::vector<ObservedPlayer> players;

  const ObservedPlayer* find(const PlayerId& id) const;
  bool operator==(const AgentObservation&) const = default;
};

struct NoiseModel {
  double factor = 0.0;      // position std per meter of distance
  double stale_prob = 0.0;  // geometric parameter for pos_count
};

/// One agent's noisy and possibly stale view of `world`. Each coordinate of
/// another player's position gets N(0, factor * distance) noise; pos_count is
/// geometric(stale_prob) capped at cfg.max_staleness and rewinds the position
/// by pos_count * vel. Deterministic in `seed`.
AgentObservation observe(const WorldSnapshot& world, const PlayerId& observer,
                         const NoiseModel& noise, std::uint64_t seed,
                         const SimConfig& cfg = {});

/// Noise-free view with all counts zero (full-state mode).
AgentObservation full_state_view(const WorldSnapshot& world, const PlayerId& observer);

/// Ball position after n cycles of free travel with decay.
Vec2 ball_travel(const BallState& ball, int n, const SimConfig& cfg = {});

struct CycleCount {
  int turn_cycles = 0;
  int dash_cycles = 0;
  bool operator==(const CycleCount&) const = default;
};

CycleCount cycles_to_point(const PlayerState& player, const Vec2& target,
                           const SimConfig& cfg = {});

/// A full 22-player roster with default types, everyone at the origin.
WorldSnapshot make_empty_world(const SimConfig& cfg = {});

}  // namespace ss2d
