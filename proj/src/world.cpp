#include "ss2d/world.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

namespace ss2d {

Vec2 SimConfig::clamp_to_margin(const Vec2& p) const {
  const double lx = half_length + out_of_play_margin;
  const double ly = half_width + out_of_play_margin;
  return {std::clamp(p.x, -lx, lx), std::clamp(p.y, -ly, ly)};
}

std::string_view to_string(Side side) { return side == Side::Ours ? "ours" : "theirs"; }

Side parse_side(std::string_view text) {
  if (text == "ours") return Side::Ours;
  if (text == "theirs") return Side::Theirs;
  throw std::domain_error("unknown side '" + std::string(text) + "'");
}

PlayerId parse_player_id(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw std::domain_error("player id must look like side:unum, got '" + std::string(text) + "'");
  }
  const Side side = parse_side(text.substr(0, colon));
  const std::string num(text.substr(colon + 1));
  std::size_t used = 0;
  int unum = 0;
  try {
    unum = std::stoi(num, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != num.size() || num.empty() || unum < 1 || unum > 11) {
    throw std::domain_error("bad uniform number in '" + std::string(text) + "'");
  }
  return {side, unum};
}

std::string to_string(const PlayerId& id) {
  return std::string(to_string(id.side)) + ":" + std::to_string(id.unum);
}

const PlayerState* WorldSnapshot::find(const PlayerId& id) const {
  for (const auto& p : players) {
    if (p.side == id.side && p.unum == id.unum) return &p;
  }
  return nullptr;
}

PlayerState* WorldSnapshot::find(const PlayerId& id) {
  for (auto& p : players) {
    if (p.side == id.side && p.unum == id.unum) return &p;
  }
  return nullptr;
}

const PlayerState& WorldSnapshot::at(const PlayerId& id) const {
  const PlayerState* p = find(id);
  if (p == nullptr) throw std::domain_error("no player " + to_string(id) + " in snapshot");
  return *p;
}

std::vector<const PlayerState*> WorldSnapshot::team(Side side) const {
  std::vector<const PlayerState*> out;
  for (const auto& p : players) {
    if (p.side == side) out.push_back(&p);
  }
  std::sort(out.begin(), out.end(), [](auto* a, auto* b) { return a->unum < b->unum; });
  return out;
}

void validate(const WorldSnapshot& world, const SimConfig& cfg) {
  auto fail = [](const std::string& what) { throw std::domain_error("invalid snapshot: " + what); };
  if (world.cycle < 0) fail("negative cycle");
  if (!world.ball.pos.finite() || !world.ball.vel.finite()) fail("non-finite ball");
  if (!cfg.in_margin(world.ball.pos)) fail("ball outside field margin");
  if (world.ball.vel.length() > cfg.ball_speed_max + 1e-9) fail("ball faster than max speed");
  if (world.players.size() != 22) fail("expected 22 players, got " + std::to_string(world.players.size()));
  std::set<PlayerId> seen;
  for (const auto& p : world.players) {
    const std::string who = to_string(p.id());
    if (p.unum < 1 || p.unum > 11) fail("uniform number out of range for " + who);
    if (!seen.insert(p.id()).second) fail("duplicate player " + who);
    if (!p.pos.finite() || !p.vel.finite() || !std::isfinite(p.body)) fail("non-finite state for " + who);
    if (!cfg.in_margin(p.pos)) fail(who + " outside field margin");
    if (p.type.max_speed <= 0.0 || p.type.kickable_area <= 0.0 || p.type.size <= 0.0) {
      fail("non-positive player type parameter for " + who);
    }
    if (p.vel.length() > p.type.max_speed + 1e-9) fail(who + " faster than max speed");
    if (p.body < -180.0 || p.body >= 180.0) fail(who + " body direction not normalized");
  }
  if (world.holder) {
    const PlayerState* h = world.find(*world.holder);
    if (h == nullptr) fail("holder not on the roster");
    if (h->pos.dist(world.ball.pos) > h->type.kickable_area + 1e-9) fail("holder cannot kick the ball");
  }
}

const ObservedPlayer* AgentObservation::find(const PlayerId& id) const {
  for (const auto& p : players) {
    if (p.base.side == id.side && p.base.unum == id.unum) return &p;
  }
  return nullptr;
}

AgentObservation observe(const WorldSnapshot& world, const PlayerId& observer,
                         const NoiseModel& noise, std::uint64_t seed, const SimConfig& cfg) {
  const PlayerState* self = world.find(observer);
  if (self == nullptr) throw std::domain_error("unknown observer " + to_string(observer));
  if (!(noise.factor >= 0.0)) throw std::domain_error("noise factor must be non-negative");
  if (!(noise.stale_prob >= 0.0 && noise.stale_prob < 1.0)) {
    throw std::domain_error("stale probability must lie in [0, 1)");
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::geometric_distribution<int> staleness(1.0 - noise.stale_prob);

  AgentObservation obs;
  obs.observer = observer;
  obs.cycle = world.cycle;

  const double ball_sigma = noise.factor * self->pos.dist(world.ball.pos);
  const double bx = gauss(rng);
  const double by = gauss(rng);
  obs.ball = world.ball;
  obs.ball.pos = cfg.clamp_to_margin(world.ball.pos + Vec2{bx, by} * ball_sigma);

  obs.players.reserve(world.players.size());
  for (const auto& p : world.players) {
    ObservedPlayer o;
    o.base = p;
    if (p.id() == observer) {
      obs.players.push_back(o);
      continue;
    }
    // Fixed draw order per player: staleness, then x and y noise.
    const int count = std::min(staleness(rng), cfg.max_staleness);
    const double nx = gauss(rng);
    const double ny = gauss(rng);
    const double sigma = noise.factor * self->pos.dist(p.pos);
    o.pos_count = o.vel_count = o.body_count = count;
    o.base.pos = cfg.clamp_to_margin(p.pos - p.vel * count + Vec2{nx, ny} * sigma);
    obs.players.push_back(o);
  }
  return obs;
}

AgentObservation full_state_view(const WorldSnapshot& world, const PlayerId& observer) {
  if (world.find(observer) == nullptr) throw std::domain_error("unknown observer " + to_string(observer));
  AgentObservation obs;
  obs.observer = observer;
  obs.cycle = world.cycle;
  obs.ball = world.ball;
  obs.players.reserve(world.players.size());
  for (const auto& p : world.players) obs.players.push_back({p, 0, 0, 0});
  return obs;
}

Vec2 ball_travel(const BallState& ball, int n, const SimConfig& cfg) {
  if (n < 0) throw std::domain_error("ball_travel needs n >= 0");
  const double decay = cfg.ball_decay;
  const double sum = (1.0 - std::pow(decay, n)) / (1.0 - decay);
  return ball.pos + ball.vel * sum;
}

CycleCount cycles_to_point(const PlayerState& player, const Vec2& target, const SimConfig& cfg) {
  const Vec2 delta = target - player.pos;
  const double dist = delta.length();
  if (dist <= 1e-9) return {0, 0};
  const double turn = angle_diff(delta.dir(), player.body);
  CycleCount c;
  c.turn_cycles = turn <= cfg.turn_dead_zone + 1e-9 ? 0 : ceil_tol(turn / cfg.turn_per_cycle);
  c.dash_cycles = std::max(0, ceil_tol(dist / player.type.max_speed));
  return c;
}

WorldSnapshot make_empty_world(const SimConfig& cfg) {
  WorldSnapshot w;
  w.players.reserve(22);
  for (Side side : {Side::Ours, Side::Theirs}) {
    for (int unum = 1; unum <= 11; ++unum) {
      PlayerState p;
      p.side = side;
      p.unum = unum;
      p.type = {cfg.player_max_speed, cfg.kickable_area, cfg.player_size};
      w.players.push_back(p);
    }
  }
  return w;
}

}  // namespace ss2d
