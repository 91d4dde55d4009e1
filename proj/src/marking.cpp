#include "ss2d/marking.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

#include "ss2d/assign.hpp"

namespace ss2d::marking {

std::string_view to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::Proximity: return "proximity";
    case Algorithm::DangerGreedy: return "danger";
    case Algorithm::Hungarian: return "hungarian";
    case Algorithm::Omam: return "omam";
  }
  throw std::domain_error("unknown marking algorithm");
}

Algorithm parse_algorithm(std::string_view text) {
  for (Algorithm a : kAllAlgorithms) {
    if (to_string(a) == text) return a;
  }
  throw std::domain_error("unknown marking algorithm '" + std::string(text) + "'");
}

double danger_score(const Vec2& opponent, const Vec2& ball, const SimConfig& cfg) {
  const double d_goal = opponent.dist(cfg.our_goal());
  const double d_ball = opponent.dist(ball);
  return 2.0 * std::max(0.0, 1.0 - d_goal / 60.0) + std::max(0.0, 1.0 - d_ball / 40.0);
}

namespace {

Side opposite(Side s) { return s == Side::Ours ? Side::Theirs : Side::Ours; }

std::vector<const ObservedPlayer*> side_of(const AgentObservation& obs, Side side) {
  std::vector<const ObservedPlayer*> out;
  for (const auto& p : obs.players) {
    if (p.base.side == side) out.push_back(&p);
  }
  std::sort(out.begin(), out.end(), [](auto* a, auto* b) { return a->base.unum < b->base.unum; });
  return out;
}

/// Everyone on our side except the goalkeeper.
std::vector<const ObservedPlayer*> markers(const AgentObservation& obs) {
  auto ours = side_of(obs, obs.observer.side);
  std::erase_if(ours, [](auto* p) { return p->base.unum == 1; });
  return ours;
}

/// Opposing outfield players; their keeper is never a marking target.
std::vector<const ObservedPlayer*> targets(const AgentObservation& obs) {
  auto theirs = side_of(obs, opposite(obs.observer.side));
  std::erase_if(theirs, [](auto* p) { return p->base.unum == 1; });
  return theirs;
}

const ObservedPlayer* nearest(const ObservedPlayer& from, const std::vector<const ObservedPlayer*>& pool) {
  const ObservedPlayer* best = nullptr;
  double best_d = 0.0;
  for (auto* p : pool) {
    const double d = from.base.pos.dist(p->base.pos);
    if (best == nullptr || d < best_d) {
      best = p;
      best_d = d;
    }
  }
  return best;
}

MarkPlan proximity(const AgentObservation& obs) {
  MarkPlan plan{Algorithm::Proximity, {}};
  const auto pool = targets(obs);
  for (auto* me : markers(obs)) {
    if (auto* opp = nearest(*me, pool)) plan.marks[me->base.unum] = opp->base.unum;
  }
  return plan;
}

MarkPlan danger_greedy(const AgentObservation& obs, const SimConfig& cfg) {
  MarkPlan plan{Algorithm::DangerGreedy, {}};
  auto free_markers = markers(obs);
  for (const DangerScore& d : danger_rank(obs, cfg)) {
    if (d.opponent.unum == 1) continue;
    if (free_markers.empty()) break;
    const ObservedPlayer* opp = obs.find(d.opponent);
    const ObservedPlayer* me = nearest(*opp, free_markers);
    plan.marks[me->base.unum] = d.opponent.unum;
    std::erase(free_markers, me);
  }
  return plan;
}

MarkPlan hungarian_plan(const AgentObservation& obs) {
  MarkPlan plan{Algorithm::Hungarian, {}};
  const auto agents = markers(obs);
  const auto tasks = targets(obs);
  if (agents.empty() || tasks.empty()) return plan;
  const std::size_t n = std::max(agents.size(), tasks.size());
  std::vector<double> cost(n * n, kHungarianDummyCost);
  for (std::size_t a = 0; a < agents.size(); ++a) {
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      cost[a * n + t] = agents[a]->base.pos.dist(tasks[t]->base.pos);
    }
  }
  const int dim = static_cast<int>(n);
  const assign::Solution sol = assign::hungarian(assign::MatchingProblem(dim, dim, std::move(cost), {}));
  for (const assign::Pair& p : sol.pairs) {
    if (p.agent >= static_cast<int>(agents.size()) || p.task >= static_cast<int>(tasks.size())) continue;
    plan.marks[agents[p.agent]->base.unum] = tasks[p.task]->base.unum;
  }
  return plan;
}

/// Solves one OMAM stage and records the marks it produced.
void omam_stage(const AgentObservation& obs, const std::vector<int>& agent_unums,
                const std::vector<int>& task_unums, const std::map<int, double>& danger, MarkPlan& plan,
                OmamTrace* trace) {
  if (trace) trace->stages.push_back({agent_unums, task_unums});
  if (agent_unums.empty() || task_unums.empty()) return;
  const Side ours = obs.observer.side;
  const Side theirs = opposite(ours);
  const int na = static_cast<int>(agent_unums.size());
  const int nt = static_cast<int>(task_unums.size());
  std::vector<double> cost;
  cost.reserve(static_cast<std::size_t>(na * nt));
  for (int a : agent_unums) {
    const Vec2 from = obs.find({ours, a})->base.pos;
    for (int t : task_unums) cost.push_back(from.dist(obs.find({theirs, t})->base.pos));
  }
  std::vector<double> importance;
  for (int t : task_unums) importance.push_back(danger.at(t));
  const assign::Solution sol = assign::omam(assign::MatchingProblem(na, nt, std::move(cost), std::move(importance)),
                                            kOmamTopK);
  for (const assign::Pair& p : sol.pairs) plan.marks[agent_unums[p.agent]] = task_unums[p.task];
}

MarkPlan omam_plan(const AgentObservation& obs, const SimConfig& cfg, OmamTrace* trace) {
  MarkPlan plan{Algorithm::Omam, {}};
  const PlayerGroups groups = group_players(obs, cfg);
  const auto ranked = danger_rank(obs, cfg);
  std::map<int, double> danger;
  for (const auto& d : ranked) danger[d.opponent.unum] = d.score;

  std::vector<int> backs, middles, forwards;
  for (auto* p : markers(obs)) {
    switch (our_role(p->base.unum)) {
      case OurRole::Back: backs.push_back(p->base.unum); break;
      case OurRole::Middle: middles.push_back(p->base.unum); break;
      case OurRole::Forward: forwards.push_back(p->base.unum); break;
    }
  }

  std::set<int> marked;
  auto refresh_marked = [&] {
    marked.clear();
    for (const auto& [ours, theirs] : plan.marks) marked.insert(theirs);
  };
  // Opponents of a group in danger order, skipping those already marked.
  auto unmarked = [&](TheirRole role) {
    std::vector<int> out;
    for (const auto& d : ranked) {
      const int u = d.opponent.unum;
      if (groups.theirs.at(u) != role || marked.contains(u)) continue;
      if (role == TheirRole::Normal && u == 1) continue;
      out.push_back(u);
    }
    return out;
  };

  omam_stage(obs, backs, unmarked(TheirRole::Attacker), danger, plan, trace);
  refresh_marked();
  omam_stage(obs, middles, unmarked(TheirRole::Attacker), danger, plan, trace);
  refresh_marked();

  std::vector<int> free_players;
  for (int u : middles) {
    if (!plan.marks.contains(u)) free_players.push_back(u);
  }
  for (int u : forwards) free_players.push_back(u);
  // The least dangerous normals are the opposing defenders; they stay free
  // and the stage keeps at most kAttackerCount tasks.
  std::vector<int> normals = unmarked(TheirRole::Normal);
  if (normals.size() > static_cast<std::size_t>(kAttackerCount)) normals.resize(kAttackerCount);
  omam_stage(obs, free_players, normals, danger, plan, trace);
  return plan;
}

}  // namespace

std::vector<DangerScore> danger_rank(const AgentObservation& obs, const SimConfig& cfg) {
  std::vector<DangerScore> out;
  for (auto* p : side_of(obs, opposite(obs.observer.side))) {
    out.push_back({p->base.id(), danger_score(p->base.pos, obs.ball.pos, cfg)});
  }
  std::stable_sort(out.begin(), out.end(), [](const DangerScore& a, const DangerScore& b) {
    return a.score > b.score;
  });
  return out;
}

OurRole our_role(int unum) {
  if (unum >= 2 && unum <= 5) return OurRole::Back;
  if (unum >= 6 && unum <= 8) return OurRole::Middle;
  if (unum >= 9 && unum <= 11) return OurRole::Forward;
  throw std::domain_error("no marking role for unum " + std::to_string(unum));
}

PlayerGroups group_players(const AgentObservation& obs, const SimConfig& cfg) {
  PlayerGroups g;
  for (auto* p : side_of(obs, obs.observer.side)) {
    if (p->base.unum != 1) g.ours[p->base.unum] = our_role(p->base.unum);
  }
  const auto ranked = danger_rank(obs, cfg);
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    g.theirs[ranked[i].opponent.unum] = i < static_cast<std::size_t>(kAttackerCount) ? TheirRole::Attacker
                                                                                      : TheirRole::Normal;
  }
  return g;
}

MarkPlan mark_assign(const AgentObservation& obs, Algorithm algorithm, const SimConfig& cfg, OmamTrace* trace) {
  switch (algorithm) {
    case Algorithm::Proximity: return proximity(obs);
    case Algorithm::DangerGreedy: return danger_greedy(obs, cfg);
    case Algorithm::Hungarian: return hungarian_plan(obs);
    case Algorithm::Omam: return omam_plan(obs, cfg, trace);
  }
  throw std::domain_error("unknown marking algorithm");
}

nlohmann::json to_json(const MarkPlan& plan) {
  nlohmann::json marks = nlohmann::json::object();
  for (const auto& [ours, theirs] : plan.marks) marks[std::to_string(ours)] = theirs;
  return {{"algorithm", to_string(plan.algorithm)}, {"marks", marks}};
}

}  // namespace ss2d::marking
