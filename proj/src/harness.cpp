#include "ss2d/harness.hpp"

#include <algorithm>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

#include "ss2d/dribble.hpp"
#include "ss2d/world_json.hpp"

namespace ss2d::harness {

Placement parse_placement(std::string_view text) {
  if (text == "defensive_third") return Placement::DefensiveThird;
  if (text == "midfield") return Placement::Midfield;
  if (text == "random") return Placement::Random;
  throw std::domain_error("unknown placement '" + std::string(text) + "'");
}

std::string_view to_string(Placement p) {
  switch (p) {
    case Placement::DefensiveThird: return "defensive_third";
    case Placement::Midfield: return "midfield";
    case Placement::Random: return "random";
  }
  return "?";
}

std::uint64_t scenario_seed(std::uint64_t seed, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  // Kept below 2^40 so base * 1000 + unum stays collision free.
  return ((static_cast<std::uint64_t>(out[0]) << 32) | out[1]) >> 24;
}

std::uint64_t observer_seed(std::uint64_t base, int unum) { return base * 1000 + static_cast<std::uint64_t>(unum); }

namespace {

struct Region {
  double x_min, x_max, y_min, y_max;
};

Region region_of(Placement p, const SimConfig& cfg) {
  const double third = cfg.half_length / 3.0;
  const double y = cfg.half_width - 4.0;
  switch (p) {
    case Placement::DefensiveThird: return {-cfg.half_length + 2.5, -third, -y, y};
    case Placement::Midfield: return {-third, third, -y, y};
    case Placement::Random: return {-cfg.half_length + 2.5, cfg.half_length - 2.5, -y, y};
  }
  throw std::domain_error("unknown placement");
}

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double angle() { return normalize_angle(uniform(-180.0, 180.0)); }
  Vec2 point(const Region& r) { return {uniform(r.x_min, r.x_max), uniform(r.y_min, r.y_max)}; }
  Vec2 velocity(double max_speed) { return Vec2::polar(uniform(0.0, 0.5 * max_speed), uniform(-180.0, 180.0)); }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

WorldSnapshot gen_scenario(const ScenarioParams& params, int index, const SimConfig& cfg) {
  if (index < 0 || index >= params.n_scenarios) throw std::domain_error("scenario index out of range");
  Sampler s(scenario_seed(params.seed, index));
  const Region region = region_of(params.placement, cfg);
  WorldSnapshot w = make_empty_world(cfg);
  w.cycle = index;
  for (auto& p : w.players) {
    if (p.side == Side::Ours && p.unum == 1) {
      p.pos = {-cfg.half_length + s.uniform(0.5, 3.0), s.uniform(-5.0, 5.0)};
    } else {
      p.pos = s.point(region);
    }
    p.vel = s.velocity(p.type.max_speed);
    p.body = s.angle();
  }

  PlayerId holder = kDribbler;
  if (params.kind == ScenarioKind::Marking) holder = {Side::Theirs, s.integer(2, 11)};
  PlayerState* h = w.find(holder);
  h->vel = {};
  const double offset = s.uniform(0.3, 0.8) * h->type.kickable_area;
  w.ball.pos = h->pos + Vec2::polar(offset, h->body + s.uniform(-45.0, 45.0));
  w.ball.vel = {};
  w.holder = holder;
  return w;
}

WorldSnapshot crowded_marking_scenario(const SimConfig& cfg) {
  WorldSnapshot w = make_empty_world(cfg);
  auto place = [&](Side side, int unum, Vec2 pos) { w.find({side, unum})->pos = pos; };
  place(Side::Ours, 1, {-51.0, 0.0});
  place(Side::Ours, 2, {-30.0, 0.0});  // the two crowding defenders
  place(Side::Ours, 3, {-30.0, 2.0});
  place(Side::Theirs, 9, {-35.0, 8.0});  // left free by proximity marking
  place(Side::Theirs, 10, {-29.0, 1.0});

  // Isolated pairs, each defender 0.5 m from its own opponent.
  const std::pair<int, Vec2> ours[] = {{4, {-40.0, -15.0}}, {5, {-45.0, 20.0}}, {6, {-10.0, -25.0}},
                                       {7, {-5.0, 0.0}},    {8, {-10.0, 25.0}}, {9, {10.0, -20.0}},
                                       {10, {15.0, 5.0}},   {11, {10.0, 25.0}}};
  const int partner[] = {11, 7, 2, 3, 4, 5, 6, 8};
  for (std::size_t i = 0; i < std::size(ours); ++i) {
    place(Side::Ours, ours[i].first, ours[i].second);
    place(Side::Theirs, partner[i], ours[i].second - Vec2{0.5, 0.0});
  }
  place(Side::Theirs, 1, {50.0, 0.0});
  w.ball.pos = {-29.0, 0.5};
  w.holder = PlayerId{Side::Theirs, 10};
  return w;
}

WorldSnapshot blocked_forward_scenario(std::uint64_t seed, int index, const SimConfig& cfg) {
  Sampler s(scenario_seed(seed ^ 0xb10c4ed, index));
  WorldSnapshot w = make_empty_world(cfg);
  w.cycle = index;
  PlayerState* me = w.find(kDribbler);
  me->pos = {s.uniform(-10.0, 10.0), s.uniform(-10.0, 10.0)};
  me->body = 0.0;
  w.ball.pos = me->pos + Vec2{0.4, 0.0};
  w.holder = kDribbler;

  PlayerState* blocker = w.find({Side::Theirs, 6});
  blocker->pos = me->pos + Vec2{2.0, 0.0};
  blocker->body = -180.0;
  for (int sign : {-1, 1}) {
    PlayerState* flank = w.find({Side::Theirs, sign < 0 ? 7 : 8});
    flank->pos = me->pos + Vec2::polar(s.uniform(3.0, 4.0), sign * s.uniform(90.0, 110.0));
    flank->body = normalize_angle((me->pos - flank->pos).dir());
  }

  // Everybody else far from the play.
  const Region far{25.0, 45.0, -25.0, 25.0};
  for (auto& p : w.players) {
    if (p.id() == kDribbler || (p.side == Side::Theirs && p.unum >= 6 && p.unum <= 8)) continue;
    p.pos = p.side == Side::Ours ? Vec2{-s.uniform(25.0, 45.0), s.uniform(-25.0, 25.0)} : s.point(far);
    p.body = s.angle();
  }
  return w;
}

MarkBenchReport run_mark_bench(const std::vector<WorldSnapshot>& worlds, const NoiseModel& noise, std::uint64_t seed,
                               bool centralized, const SimConfig& cfg) {
  using marking::Algorithm;
  MarkBenchReport report;
  report.n_scenarios = static_cast<int>(worlds.size());
  report.noise = noise;
  report.centralized = centralized;
  for (Algorithm a : marking::kAllAlgorithms) report.algorithms[a] = {};
  if (worlds.empty()) return report;

  for (std::size_t index = 0; index < worlds.size(); ++index) {
    const WorldSnapshot& world = worlds[index];
    const std::uint64_t base = scenario_seed(seed, static_cast<int>(index));

    std::vector<AgentObservation> views;
    for (int unum = 1; unum <= 11; ++unum) {
      const int viewer = centralized ? 1 : unum;
      views.push_back(observe(world, {Side::Ours, viewer}, noise, observer_seed(base, viewer), cfg));
    }
    const marking::PlayerGroups truth = marking::group_players(full_state_view(world, {Side::Ours, 1}), cfg);

    for (Algorithm algo : marking::kAllAlgorithms) {
      std::vector<marking::MarkPlan> plans;
      for (const auto& v : views) plans.push_back(marking::mark_assign(v, algo, cfg));
      AlgorithmStats& st = report.algorithms[algo];
      if (std::all_of(plans.begin(), plans.end(), [&](const auto& p) { return p == plans.front(); })) {
        st.sync_rate += 1.0;
      }
      std::map<int, int> markers_of;
      double cost = 0.0;
      for (int unum = 1; unum <= 11; ++unum) {
        const auto& marks = plans[static_cast<std::size_t>(unum - 1)].marks;
        auto it = marks.find(unum);
        if (it == marks.end()) continue;
        ++markers_of[it->second];
        cost += world.at({Side::Ours, unum}).pos.dist(world.at({Side::Theirs, it->second}).pos);
      }
      int duplicated = 0;
      for (const auto& [opp, count] : markers_of) duplicated += count > 1 ? 1 : 0;
      int unmarked_attackers = 0;
      for (const auto& [opp, role] : truth.theirs) {
        if (role == marking::TheirRole::Attacker && !markers_of.contains(opp)) ++unmarked_attackers;
      }
      st.duplicate_mark_rate += duplicated > 0 ? 1.0 : 0.0;
      st.mean_duplicated_opponents += duplicated;
      st.unmarked_attacker_rate += static_cast<double>(unmarked_attackers) / marking::kAttackerCount;
      st.mean_total_cost += cost;
    }
  }
  const double n = static_cast<double>(worlds.size());
  for (auto& [algo, st] : report.algorithms) {
    st.duplicate_mark_rate /= n;
    st.unmarked_attacker_rate /= n;
    st.mean_total_cost /= n;
    st.sync_rate /= n;
    st.mean_duplicated_opponents /= n;
  }
  return report;
}

MarkBenchReport run_mark_bench(const ScenarioParams& params, bool centralized, const SimConfig& cfg) {
  if (params.n_scenarios < 1) throw std::domain_error("need at least one scenario");
  ScenarioParams marking_params = params;
  marking_params.kind = ScenarioKind::Marking;
  std::vector<WorldSnapshot> worlds;
  worlds.reserve(static_cast<std::size_t>(params.n_scenarios));
  for (int i = 0; i < params.n_scenarios; ++i) worlds.push_back(gen_scenario(marking_params, i, cfg));
  return run_mark_bench(worlds, params.noise, params.seed, centralized, cfg);
}

nlohmann::json to_json(const MarkBenchReport& report) {
  nlohmann::json algos = nlohmann::json::object();
  for (const auto& [algo, st] : report.algorithms) {
    algos[std::string(marking::to_string(algo))] = {{"duplicate_mark_rate", st.duplicate_mark_rate},
                                                    {"unmarked_attacker_rate", st.unmarked_attacker_rate},
                                                    {"mean_total_cost", st.mean_total_cost},
                                                    {"sync_rate", st.sync_rate},
                                                    {"mean_duplicated_opponents", st.mean_duplicated_opponents}};
  }
  return {{"n_scenarios", report.n_scenarios},
          {"noise", {{"factor", report.noise.factor}, {"stale_prob", report.noise.stale_prob}}},
          {"centralized", report.centralized},
          {"algorithms", algos}};
}

std::string to_table(const MarkBenchReport& report) {
  std::ostringstream os;
  os << "mark-bench: " << report.n_scenarios << " scenarios, noise factor " << report.noise.factor
     << ", stale prob " << report.noise.stale_prob << (report.centralized ? ", centralized" : "") << '\n';
  os << std::left << std::setw(12) << "algorithm" << std::right << std::setw(12) << "duplicate" << std::setw(12)
     << "unmarked_att" << std::setw(12) << "cost_m" << std::setw(12) << "sync" << '\n';
  os << std::fixed << std::setprecision(4);
  for (const auto& [algo, st] : report.algorithms) {
    os << std::left << std::setw(12) << marking::to_string(algo) << std::right << std::setw(12)
       << st.duplicate_mark_rate << std::setw(14) << st.unmarked_attacker_rate << std::setw(12)
       << st.mean_total_cost << std::setw(12) << st.sync_rate << '\n';
  }
  return os.str();
}

DribbleBenchReport run_dribble_bench(const ScenarioParams& params, bool use_mad,
                                     const std::optional<std::string>& weights_path, DribbleFamily family,
                                     const SimConfig& cfg) {
  if (!weights_path) return run_dribble_bench(params, use_mad, predictor::OpponentPredictor::fallback(), family, cfg);
  auto net = std::make_shared<const predictor::Network>(predictor::load_network_file(*weights_path));
  return run_dribble_bench(params, use_mad, predictor::OpponentPredictor::with_network(std::move(net)), family, cfg);
}

DribbleBenchReport run_dribble_bench(const ScenarioParams& params, bool use_mad,
                                     const predictor::OpponentPredictor& predictor, DribbleFamily family,
                                     const SimConfig& cfg) {
  if (params.n_scenarios < 1) throw std::domain_error("need at least one scenario");
  ScenarioParams dribble_params = params;
  dribble_params.kind = ScenarioKind::Dribble;
  const auto fallback = predictor::OpponentPredictor::fallback();

  DribbleBenchReport r;
  r.n_scenarios = params.n_scenarios;
  r.use_mad = use_mad;
  r.with_network = predictor.uses_network();
  bool first = true;
  for (int i = 0; i < params.n_scenarios; ++i) {
    const WorldSnapshot world = family == DribbleFamily::BlockedForward
                                    ? blocked_forward_scenario(params.seed, i, cfg)
                                    : gen_scenario(dribble_params, i, cfg);
    const AgentObservation view =
        observe(world, kDribbler, params.noise, observer_seed(scenario_seed(params.seed, i), kDribbler.unum), cfg);
    const dribble::DribbleState state = dribble::belief_from(view);

    const auto basic = dribble::chain_search_detailed(state, kDribbler, false, predictor, {}, cfg);
    const auto mad = dribble::chain_search_detailed(state, kDribbler, true, predictor, {}, cfg);
    const auto mad_fb = predictor.uses_network() ? dribble::chain_search_detailed(state, kDribbler, true, fallback, {}, cfg)
                                                 : mad;

    const auto& chosen = use_mad ? mad : basic;
    r.mean_candidates += static_cast<double>(chosen.root_chains + chosen.mad_chains);
    r.mean_best_score += chosen.best.score;
    const double gain = mad.best.score - basic.best.score;
    r.mad_gain += gain;
    r.min_mad_gain = first ? gain : std::min(r.min_mad_gain, gain);
    first = false;
    r.mean_root_candidates += static_cast<double>(basic.root_chains);
    r.mean_mad_chains_fallback += static_cast<double>(mad_fb.mad_chains);
    r.mean_mad_chains_network += static_cast<double>(mad.mad_chains);
    if (mad.mad_chains >= mad_fb.mad_chains) ++r.predictor_not_worse;
    if (basic.root_chains == 0) {
      ++r.basic_none;
      if (mad.mad_chains > 0) ++r.rescued;
    }
  }
  const double n = params.n_scenarios;
  r.mean_candidates /= n;
  r.mean_best_score /= n;
  r.mad_gain /= n;
  r.mean_root_candidates /= n;
  r.mean_mad_chains_fallback /= n;
  r.mean_mad_chains_network /= n;
  if (!predictor.uses_network()) r.mean_mad_chains_network = 0.0;
  return r;
}

nlohmann::json to_json(const DribbleBenchReport& r) {
  return {{"n_scenarios", r.n_scenarios},
          {"use_mad", r.use_mad},
          {"with_network", r.with_network},
          {"mean_candidates", r.mean_candidates},
          {"mean_best_score", r.mean_best_score},
          {"mad_gain", r.mad_gain},
          {"min_mad_gain", r.min_mad_gain},
          {"mean_root_candidates", r.mean_root_candidates},
          {"mean_mad_chains_fallback", r.mean_mad_chains_fallback},
          {"mean_mad_chains_network", r.mean_mad_chains_network},
          {"predictor_not_worse", r.predictor_not_worse},
          {"basic_none", r.basic_none},
          {"rescued", r.rescued},
          {"rescue_rate", r.rescue_rate()}};
}

std::string to_table(const DribbleBenchReport& r) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4);
  os << "dribble-bench: " << r.n_scenarios << " scenarios, mad " << (r.use_mad ? "on" : "off") << ", predictor "
     << (r.with_network ? "network" : "pos-count fallback") << '\n';
  os << "  mean candidates        " << r.mean_candidates << '\n';
  os << "  mean best score        " << r.mean_best_score << '\n';
  os << "  mad gain (mean / min)  " << r.mad_gain << " / " << r.min_mad_gain << '\n';
  os << "  root candidates        " << r.mean_root_candidates << '\n';
  os << "  mad chains fallback    " << r.mean_mad_chains_fallback << '\n';
  if (r.with_network) os << "  mad chains network     " << r.mean_mad_chains_network << '\n';
  os << "  basic none / rescued   " << r.basic_none << " / " << r.rescued << '\n';
  return os.str();
}

std::vector<nlohmann::json> gen_pass_log(const ScenarioParams& params, const SimConfig& cfg) {
  std::vector<nlohmann::json> lines;
  ScenarioParams p = params;
  p.kind = ScenarioKind::Dribble;
  for (int i = 0; i < params.n_scenarios; ++i) {
    WorldSnapshot w = gen_scenario(p, i, cfg);
    Sampler s(scenario_seed(params.seed ^ 0x9a55, i));
    const int kicker = s.integer(2, 11);
    int receiver = s.integer(2, 10);
    if (receiver >= kicker) ++receiver;
    // Hand the ball to the kicker.
    const PlayerState& k = w.at({Side::Ours, kicker});
    w.ball.pos = k.pos + Vec2::polar(0.5 * k.type.kickable_area, k.body);
    w.ball.pos = cfg.clamp_to_margin(w.ball.pos);
    w.holder = PlayerId{Side::Ours, kicker};
    nlohmann::json j = ss2d::to_json(w);
    j["pass"] = {{"kicker", kicker}, {"receiver", receiver}};
    lines.push_back(std::move(j));
  }
  return lines;
}

}  // namespace ss2d::harness
