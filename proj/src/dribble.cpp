#include "ss2d/dribble.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace ss2d::dribble {

DribbleState belief_from(const AgentObservation& obs) {
  DribbleState s;
  s.world.cycle = obs.cycle;
  s.world.ball = obs.ball;
  for (const auto& p : obs.players) {
    s.world.players.push_back(p.base);
    if (p.base.side != obs.observer.side && p.base.unum >= 1 && p.base.unum <= 11) {
      s.pos_counts[static_cast<std::size_t>(p.base.unum)] = p.pos_count;
    }
  }
  s.world.holder = obs.observer;
  return s;
}

namespace {

const PlayerState& kickable_actor(const DribbleState& state, const PlayerId& actor) {
  const PlayerState& me = state.world.at(actor);
  if (me.pos.dist(state.world.ball.pos) > me.type.kickable_area + 1e-9) {
    throw std::domain_error("actor " + to_string(actor) + " cannot kick the ball");
  }
  return me;
}

std::vector<ObservedPlayer> opponents_of(const DribbleState& state, Side actor_side) {
  std::vector<ObservedPlayer> out;
  for (const auto& p : state.world.players) {
    if (p.side == actor_side) continue;
    const int pc = (p.unum >= 1 && p.unum <= 11) ? state.pos_counts[static_cast<std::size_t>(p.unum)] : 0;
    out.push_back({p, pc, pc, pc});
  }
  return out;
}

Vec2 kick_direction(const DribbleCandidate& c, const BallState& ball) { return (c.target - ball.pos).normalized(); }

WorldSnapshot after_dribble(const WorldSnapshot& world, const PlayerId& actor, const DribbleCandidate& c,
                            const SimConfig& cfg) {
  WorldSnapshot w = world;
  PlayerState* me = w.find(actor);
  const Vec2 dir = kick_direction(c, world.ball);
  me->pos = c.target;
  me->vel = {};
  me->body = direction_of(c.dir_index);
  w.ball.vel = dir * (c.first_kick_speed * std::pow(cfg.ball_decay, c.dribble_cycles));
  w.ball.pos = c.target;
  w.cycle += c.dribble_cycles;
  w.holder = actor;
  return w;
}

}  // namespace

Vec2 dribble_ball_path(const DribbleCandidate& candidate, const BallState& ball, int t, const SimConfig& cfg) {
  const BallState kicked{ball.pos, kick_direction(candidate, ball) * candidate.first_kick_speed};
  return ball_travel(kicked, t, cfg);
}

bool opponent_blocks(const ObservedPlayer& opp, const DribbleCandidate& candidate, const BallState& ball,
                     const SimConfig& cfg) {
  const double speed = opp.base.type.max_speed;
  const double slack = opp.pos_count * speed;
  for (int t = 1; t <= candidate.dribble_cycles; ++t) {
    const Vec2 p = dribble_ball_path(candidate, ball, t, cfg);
    const double effective = std::max(0.0, opp.base.pos.dist(p) - slack);
    const int reach = 1 + ceil_tol(effective / speed);
    if (reach <= t) return true;
  }
  return false;
}

std::vector<DribbleCandidate> enumerate_dribbles(const DribbleState& state, const PlayerId& actor,
                                                 const SimConfig& cfg) {
  const PlayerState& me = kickable_actor(state, actor);
  const auto opponents = opponents_of(state, actor.side);
  const BallState& ball = state.world.ball;
  const double decay = cfg.ball_decay;

  std::vector<DribbleCandidate> out;
  for (int dir = 0; dir < kDirections; ++dir) {
    for (int dash = kMinDash; dash <= kMaxDash; ++dash) {
      DribbleCandidate c;
      c.dir_index = dir;
      c.dash_count = dash;
      c.target = me.pos + Vec2::polar(dash * me.type.max_speed, direction_of(dir));
      if (!cfg.in_pitch(c.target)) continue;
      const CycleCount cycles = cycles_to_point(me, c.target, cfg);
      c.turn_cycles = cycles.turn_cycles;
      c.dash_cycles = cycles.dash_cycles;
      c.dribble_cycles = c.turn_cycles + c.dash_cycles + 1;
      const double travel = (1.0 - std::pow(decay, c.dribble_cycles)) / (1.0 - decay);
      c.first_kick_speed = ball.pos.dist(c.target) / travel;
      if (c.first_kick_speed > cfg.ball_speed_max) continue;
      c.safe = std::none_of(opponents.begin(), opponents.end(),
                            [&](const ObservedPlayer& o) { return opponent_blocks(o, c, ball, cfg); });
      out.push_back(c);
    }
  }
  return out;
}

std::vector<DribbleCandidate> basic_dribble_candidates(const DribbleState& state, const PlayerId& actor,
                                                       const SimConfig& cfg) {
  auto all = enumerate_dribbles(state, actor, cfg);
  std::erase_if(all, [](const DribbleCandidate& c) { return !c.safe; });
  return all;
}

std::vector<OneStepOutcome> one_step_actions(const DribbleState& state, const PlayerId& actor,
                                             const predictor::OpponentPredictor& predictor,
                                             const SimConfig& cfg) {
  const PlayerState& me = kickable_actor(state, actor);
  const BallState& ball = state.world.ball;

  // Opponent side of the predicted state is shared by every action.
  DribbleState base = state;
  base.world.cycle += 1;
  base.world.holder = actor;
  for (auto& p : base.world.players) {
    if (p.side == actor.side) continue;
    auto& count = base.pos_counts[static_cast<std::size_t>(p.unum)];
    const bool near = p.pos.dist(ball.pos) <= predictor::kBlockerRadius;
    if (predictor.uses_network() && near) {
      const ObservedPlayer observed{p, count, count, count};
      Vec2 step = predictor::predict_opponent(predictor, me, ball, observed) - p.pos;
      if (step.length() > p.type.max_speed) step = step.normalized() * p.type.max_speed;
      p.pos = cfg.clamp_to_margin(p.pos + step);
      p.vel = step;
    } else {
      count = std::min(count + 1, cfg.max_staleness);
    }
  }

  const BallState rolled{ball.pos + ball.vel, ball.vel * cfg.ball_decay};
  auto kickable_from = [&](const Vec2& actor_pos, const Vec2& ball_pos) {
    return actor_pos.dist(ball_pos) <= me.type.kickable_area && cfg.in_pitch(ball_pos);
  };
  auto emit = [&](std::vector<OneStepOutcome>& out, const OneStepAction& action, const PlayerState& actor_next,
                  const BallState& ball_next) {
    OneStepOutcome o{action, base};
    *o.next.world.find(actor) = actor_next;
    o.next.world.ball = ball_next;
    out.push_back(std::move(o));
  };

  std::vector<OneStepOutcome> out;
  PlayerState still = me;
  still.vel = {};

  int index = 0;
  for (double speed : kTwoStepKickSpeeds) {
    for (int d = 0; d < kKickDirections; ++d, ++index) {
      const double dir = -180.0 + 45.0 * d;
      const Vec2 v = Vec2::polar(speed, dir);
      const Vec2 next_ball = ball.pos + v;
      if (!kickable_from(me.pos, next_ball)) continue;
      emit(out, {OneStepKind::TwoStepKick, index, v, dir}, still, {next_ball, v * cfg.ball_decay});
    }
  }
  for (int d = 0; d < kMoveDirections; ++d) {
    const double dir = -180.0 + 45.0 * d;
    PlayerState moved = still;
    moved.pos = me.pos + Vec2::polar(me.type.max_speed, dir);
    if (!cfg.in_pitch(moved.pos) || !kickable_from(moved.pos, rolled.pos)) continue;
    emit(out, {OneStepKind::MoveBeforeKick, d, {}, dir}, moved, rolled);
  }
  for (int d = 0; d < kTurnDirections; ++d) {
    const double dir = -180.0 + 30.0 * d;
    PlayerState turned = still;
    turned.body = dir;
    if (!kickable_from(me.pos, rolled.pos)) continue;
    emit(out, {OneStepKind::TurnBeforeKick, d, {}, dir}, turned, rolled);
  }
  return out;
}

const DribbleCandidate* ActionChain::final_dribble() const {
  if (steps.empty()) return nullptr;
  return std::get_if<DribbleCandidate>(&steps.back());
}

namespace {

double evaluate(const FieldEvaluator& evaluator, const WorldSnapshot& w, const SimConfig& cfg) {
  return evaluator ? evaluator(w) : field_evaluate(w, cfg);
}

std::vector<ActionChain> root_chains(const DribbleState& state, const PlayerId& actor, const FieldEvaluator& evaluator,
                                     const SimConfig& cfg) {
  std::vector<ActionChain> out;
  for (const DribbleCandidate& c : basic_dribble_candidates(state, actor, cfg)) {
    ActionChain chain;
    chain.steps.push_back(c);
    chain.predicted_state = after_dribble(state.world, actor, c, cfg);
    chain.score = evaluate(evaluator, chain.predicted_state, cfg);
    chain.total_cycles = c.dribble_cycles;
    out.push_back(std::move(chain));
  }
  return out;
}

std::vector<ActionChain> depth_two_chains(const DribbleState& state, const PlayerId& actor,
                                          const predictor::OpponentPredictor& predictor,
                                          const FieldEvaluator& evaluator, const SimConfig& cfg) {
  std::vector<ActionChain> out;
  for (const OneStepOutcome& step : one_step_actions(state, actor, predictor, cfg)) {
    for (const DribbleCandidate& c : basic_dribble_candidates(step.next, actor, cfg)) {
      ActionChain chain;
      chain.steps.push_back(step.action);
      chain.steps.push_back(c);
      chain.predicted_state = after_dribble(step.next.world, actor, c, cfg);
      chain.score = evaluate(evaluator, chain.predicted_state, cfg);
      chain.total_cycles = 1 + c.dribble_cycles;
      out.push_back(std::move(chain));
    }
  }
  return out;
}

auto tie_key(const ActionChain& c) {
  const DribbleCandidate* d = c.final_dribble();
  int kind = -1;
  int index = -1;
  if (c.steps.size() == 2) {
    const auto& first = std::get<OneStepAction>(c.steps.front());
    kind = static_cast<int>(first.kind);
    index = first.index;
  }
  return std::make_tuple(c.total_cycles, d ? d->dir_index : -1, d ? d->dash_count : -1, c.steps.size(), kind, index);
}

bool better(const ActionChain& a, const ActionChain& b) {
  if (a.score != b.score) return a.score > b.score;
  return tie_key(a) < tie_key(b);
}

}  // namespace

std::vector<ActionChain> mad_candidates(const DribbleState& state, const PlayerId& actor,
                                        const predictor::OpponentPredictor& predictor, const SimConfig& cfg) {
  return depth_two_chains(state, actor, predictor, {}, cfg);
}

double field_evaluate(const WorldSnapshot& state, const SimConfig& cfg) {
  const Vec2 ball = state.ball.pos;
  return ball.x + std::max(0.0, 40.0 - ball.dist(cfg.their_goal()));
}

SearchResult chain_search_detailed(const DribbleState& state, const PlayerId& actor, bool use_mad,
                                   const predictor::OpponentPredictor& predictor, const FieldEvaluator& evaluator,
                                   const SimConfig& cfg) {
  SearchResult result;
  std::vector<ActionChain> chains = root_chains(state, actor, evaluator, cfg);
  result.root_chains = chains.size();
  if (use_mad) {
    auto extra = depth_two_chains(state, actor, predictor, evaluator, cfg);
    result.mad_chains = extra.size();
    std::move(extra.begin(), extra.end(), std::back_inserter(chains));
  }
  // Holding the ball stays on the table so extra chains never lower the score.
  ActionChain hold;
  hold.predicted_state = state.world;
  hold.score = evaluate(evaluator, state.world, cfg);
  chains.push_back(std::move(hold));
  result.best = *std::min_element(chains.begin(), chains.end(),
                                  [](const ActionChain& a, const ActionChain& b) { return better(a, b); });
  return result;
}

ActionChain chain_search(const DribbleState& state, const PlayerId& actor, bool use_mad,
                         const predictor::OpponentPredictor& predictor, const FieldEvaluator& evaluator,
                         const SimConfig& cfg) {
  return chain_search_detailed(state, actor, use_mad, predictor, evaluator, cfg).best;
}

nlohmann::json to_json(const DribbleCandidate& c) {
  return {{"target", {c.target.x, c.target.y}},
          {"dir_index", c.dir_index},
          {"direction", direction_of(c.dir_index)},
          {"dash_count", c.dash_count},
          {"turn_cycles", c.turn_cycles},
          {"dash_cycles", c.dash_cycles},
          {"dribble_cycles", c.dribble_cycles},
          {"first_kick_speed", c.first_kick_speed},
          {"safe", c.safe}};
}

namespace {

const char* kind_name(OneStepKind k) {
  switch (k) {
    case OneStepKind::TwoStepKick: return "two_step_kick";
    case OneStepKind::MoveBeforeKick: return "move_before_kick";
    case OneStepKind::TurnBeforeKick: return "turn_before_kick";
  }
  return "?";
}

}  // namespace

nlohmann::json to_json(const ActionChain& chain) {
  nlohmann::json steps = nlohmann::json::array();
  for (const Step& s : chain.steps) {
    if (const auto* a = std::get_if<OneStepAction>(&s)) {
      nlohmann::json j = {{"action", kind_name(a->kind)}, {"index", a->index}, {"direction", a->direction}};
      if (a->kind == OneStepKind::TwoStepKick) j["kick_vel"] = {a->kick_vel.x, a->kick_vel.y};
      steps.push_back(std::move(j));
    } else {
      nlohmann::json j = to_json(std::get<DribbleCandidate>(s));
      j["action"] = "dribble";
      steps.push_back(std::move(j));
    }
  }
  const Vec2 ball = chain.predicted_state.ball.pos;
  return {{"hold", chain.is_hold()},
          {"steps", steps},
          {"score", chain.score},
          {"total_cycles", chain.total_cycles},
          {"predicted_ball", {ball.x, ball.y}}};
}

}  // namespace ss2d::dribble
