#include "ss2d/passdata.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ss2d/errors.hpp"
#include "ss2d/marking.hpp"
#include "ss2d/world_json.hpp"

namespace ss2d::passdata {

std::vector<int> sort_players(const std::vector<PlayerState>& players, const SortingConfig& config, int kicker_unum) {
  if (players.size() != 11) throw std::domain_error("sorting needs exactly 11 players");
  std::set<int> unums;
  for (const auto& p : players) {
    if (!unums.insert(p.unum).second) throw std::domain_error("duplicate unum " + std::to_string(p.unum));
  }
  std::vector<int> order(players.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const PlayerState& pa = players[static_cast<std::size_t>(a)];
    const PlayerState& pb = players[static_cast<std::size_t>(b)];
    if (config.mode == SortMode::XSort && pa.pos.x != pb.pos.x) return pa.pos.x < pb.pos.x;
    return pa.unum < pb.unum;
  });
  if (config.kicker_first && kicker_unum != 0) {
    auto it = std::find_if(order.begin(), order.end(),
                           [&](int i) { return players[static_cast<std::size_t>(i)].unum == kicker_unum; });
    if (it == order.end()) throw std::domain_error("kicker not among the sorted players");
    std::rotate(order.begin(), it, it + 1);
  }
  return order;
}

const std::array<const char*, kBallFeatures>& ball_feature_names() {
  static const std::array<const char*, kBallFeatures> names = {
      "x", "y", "vx", "vy", "speed", "vel_dir", "dist_our_goal", "ang_our_goal",
      "dist_opp_goal", "ang_opp_goal", "dist_to_kicker", "ang_from_kicker"};
  return names;
}

const std::array<const char*, kOurFeatures>& our_feature_names() {
  static const std::array<const char*, kOurFeatures> names = {
      "x", "y", "dist_ball", "ang_from_ball", "vx", "vy", "speed", "vel_dir", "body_dir",
      "pos_count", "vel_count", "body_count", "is_kicker", "dist_kicker", "ang_from_kicker",
      "dist_our_goal", "ang_our_goal", "dist_opp_goal", "ang_opp_goal",
      "type_max_speed", "type_kickable_area", "type_size",
      "near_opp1_dist", "near_opp1_ang_diff", "near_opp1_dist_pass_line",
      "near_opp2_dist", "near_opp2_ang_diff", "near_opp2_dist_pass_line",
      "risk_opp1_dist_pass_line", "risk_opp1_dist_receiver", "risk_opp1_reach_cycles",
      "risk_opp2_dist_pass_line", "risk_opp2_dist_receiver", "risk_opp2_reach_cycles",
      "unum", "x_sort_index", "offside_flag", "dist_offside_line", "in_opp_penalty_flag",
      "reach_cycles_ball", "nearest_teammate_dist", "team_flag"};
  return names;
}

const std::array<const char*, kTheirFeatures>& their_feature_names() {
  static const std::array<const char*, kTheirFeatures> names = {
      "x", "y", "dist_ball", "ang_from_ball", "vx", "vy", "speed", "vel_dir", "body_dir", "pos_count",
      "dist_kicker", "ang_from_kicker", "dist_our_goal", "ang_our_goal", "type_max_speed",
      "type_kickable_area", "unum", "x_sort_index", "reach_cycles_ball", "nearest_our_dist",
      "dist_to_kicker_goal_segment", "in_our_penalty_flag", "danger_score", "team_flag"};
  return names;
}

namespace {

struct Team {
  std::vector<PlayerState> players;
  std::vector<int> counts[3];  // pos, vel, body, parallel to players
};

Team team_of(const AgentObservation& view, Side side) {
  Team t;
  std::vector<const ObservedPlayer*> members;
  for (const auto& p : view.players) {
    if (p.base.side == side) members.push_back(&p);
  }
  std::sort(members.begin(), members.end(), [](auto* a, auto* b) { return a->base.unum < b->base.unum; });
  for (auto* p : members) {
    t.players.push_back(p->base);
    t.counts[0].push_back(p->pos_count);
    t.counts[1].push_back(p->vel_count);
    t.counts[2].push_back(p->body_count);
  }
  return t;
}

std::vector<int> x_rank(const std::vector<PlayerState>& players) {
  const auto order = sort_players(players, {SortMode::XSort, false}, 0);
  std::vector<int> rank(players.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
  return rank;
}

/// Opponent indices ordered by `key` ascending, ties by unum.
template <typename Key>
std::vector<int> ranked_by(const std::vector<PlayerState>& opps, Key key) {
  std::vector<int> idx(opps.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    const double ka = key(opps[static_cast<std::size_t>(a)]);
    const double kb = key(opps[static_cast<std::size_t>(b)]);
    if (ka != kb) return ka < kb;
    return opps[static_cast<std::size_t>(a)].unum < opps[static_cast<std::size_t>(b)].unum;
  });
  return idx;
}

double offside_line(const std::vector<PlayerState>& opps, const Vec2& ball) {
  std::vector<double> xs;
  for (const auto& o : opps) xs.push_back(o.pos.x);
  std::sort(xs.begin(), xs.end(), std::greater<>());
  const double second_last = xs.size() >= 2 ? xs[1] : 0.0;
  return std::max({0.0, ball.x, second_last});
}

}  // namespace

FeatureRow extract_row(const WorldSnapshot& snapshot, const PassEvent& event, const SortingConfig& config,
                       const SimConfig& cfg) {
  return extract_row(full_state_view(snapshot, {Side::Ours, event.kicker_unum}), event, config, cfg);
}

FeatureRow extract_row(const AgentObservation& view, const PassEvent& event, const SortingConfig& config,
                       const SimConfig& cfg) {
  if (event.kicker_unum == event.receiver_unum) throw std::domain_error("kicker and receiver coincide");
  const Team ours = team_of(view, Side::Ours);
  const Team theirs = team_of(view, Side::Theirs);
  auto find_unum = [&](int unum) {
    for (std::size_t i = 0; i < ours.players.size(); ++i) {
      if (ours.players[i].unum == unum) return static_cast<int>(i);
    }
    return -1;
  };
  const int kicker_i = find_unum(event.kicker_unum);
  const int receiver_i = find_unum(event.receiver_unum);
  if (kicker_i < 0) throw std::domain_error("kicker " + std::to_string(event.kicker_unum) + " not found");
  if (receiver_i < 0) throw std::domain_error("receiver " + std::to_string(event.receiver_unum) + " not found");

  const std::vector<int> our_order = sort_players(ours.players, config, event.kicker_unum);
  const std::vector<int> their_order = sort_players(theirs.players, {config.mode, false}, 0);
  const std::vector<int> our_xrank = x_rank(ours.players);
  const std::vector<int> their_xrank = x_rank(theirs.players);

  const Vec2 ball = view.ball.pos;
  const Vec2 bvel = view.ball.vel;
  const Vec2 kicker = ours.players[static_cast<std::size_t>(kicker_i)].pos;
  const Vec2 our_goal = cfg.our_goal();
  const Vec2 opp_goal = cfg.their_goal();
  const double offside = offside_line(theirs.players, ball);
  const double box_x = cfg.half_length - cfg.penalty_area_length;

  FeatureRow row;
  row.values.reserve(kRowLength);
  auto push = [&row](std::initializer_list<double> vs) { row.values.insert(row.values.end(), vs); };

  push({ball.x, ball.y, bvel.x, bvel.y, bvel.length(), bvel.dir(), ball.dist(our_goal), (our_goal - ball).dir(),
        ball.dist(opp_goal), (opp_goal - ball).dir(), ball.dist(kicker), (ball - kicker).dir()});

  for (int idx : our_order) {
    const std::size_t i = static_cast<std::size_t>(idx);
    const PlayerState& p = ours.players[i];
    const double pass_dir = (p.pos - kicker).dir();
    push({p.pos.x, p.pos.y, p.pos.dist(ball), (p.pos - ball).dir(), p.vel.x, p.vel.y, p.vel.length(),
          p.vel.dir(), p.body, static_cast<double>(ours.counts[0][i]), static_cast<double>(ours.counts[1][i]),
          static_cast<double>(ours.counts[2][i]), idx == kicker_i ? 1.0 : 0.0, p.pos.dist(kicker), pass_dir,
          p.pos.dist(our_goal), (our_goal - p.pos).dir(), p.pos.dist(opp_goal), (opp_goal - p.pos).dir(),
          p.type.max_speed, p.type.kickable_area, p.type.size});

    const auto nearest = ranked_by(theirs.players, [&](const PlayerState& o) { return o.pos.dist(p.pos); });
    for (int k = 0; k < kTopK; ++k) {
      const PlayerState& o = theirs.players[static_cast<std::size_t>(nearest[static_cast<std::size_t>(k)])];
      push({o.pos.dist(p.pos), angle_diff(pass_dir, (o.pos - kicker).dir()), dist_to_segment(o.pos, kicker, p.pos)});
    }
    const auto risky =
        ranked_by(theirs.players, [&](const PlayerState& o) { return dist_to_segment(o.pos, kicker, p.pos); });
    for (int k = 0; k < kTopK; ++k) {
      const PlayerState& o = theirs.players[static_cast<std::size_t>(risky[static_cast<std::size_t>(k)])];
      const double to_receiver = o.pos.dist(p.pos);
      push({dist_to_segment(o.pos, kicker, p.pos), to_receiver,
            static_cast<double>(ceil_tol(to_receiver / o.type.max_speed))});
    }

    double nearest_mate = 0.0;
    bool first = true;
    for (std::size_t j = 0; j < ours.players.size(); ++j) {
      if (j == i) continue;
      const double d = ours.players[j].pos.dist(p.pos);
      if (first || d < nearest_mate) nearest_mate = d;
      first = false;
    }
    const bool in_box = p.pos.x > box_x && std::fabs(p.pos.y) < cfg.penalty_area_half_width;
    push({p.unum / 11.0, our_xrank[i] / 11.0, p.pos.x > offside ? 1.0 : 0.0, offside - p.pos.x, in_box ? 1.0 : 0.0,
          static_cast<double>(ceil_tol(p.pos.dist(ball) / p.type.max_speed)), nearest_mate, 1.0});
  }

  for (int idx : their_order) {
    const std::size_t i = static_cast<std::size_t>(idx);
    const PlayerState& o = theirs.players[i];
    double nearest_our = 0.0;
    for (std::size_t j = 0; j < ours.players.size(); ++j) {
      const double d = ours.players[j].pos.dist(o.pos);
      if (j == 0 || d < nearest_our) nearest_our = d;
    }
    const bool in_box = o.pos.x < -box_x && std::fabs(o.pos.y) < cfg.penalty_area_half_width;
    push({o.pos.x, o.pos.y, o.pos.dist(ball), (o.pos - ball).dir(), o.vel.x, o.vel.y, o.vel.length(), o.vel.dir(),
          o.body, static_cast<double>(theirs.counts[0][i]), o.pos.dist(kicker), (o.pos - kicker).dir(),
          o.pos.dist(our_goal), (our_goal - o.pos).dir(), o.type.max_speed, o.type.kickable_area, o.unum / 11.0,
          their_xrank[i] / 11.0, static_cast<double>(ceil_tol(o.pos.dist(ball) / o.type.max_speed)), nearest_our,
          dist_to_segment(o.pos, kicker, opp_goal), in_box ? 1.0 : 0.0, marking::danger_score(o.pos, ball, cfg), 0.0});
  }

  if (row.values.size() != static_cast<std::size_t>(kRowLength)) {
    throw std::logic_error("feature row has " + std::to_string(row.values.size()) + " values");
  }
  row.label_unum = event.receiver_unum;
  row.label_index = static_cast<int>(std::find(our_order.begin(), our_order.end(), receiver_i) - our_order.begin());
  return row;
}

LogContents read_log(std::istream& in, const SimConfig& cfg) {
  if (!in) throw IoError("cannot read game log");
  LogContents out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++out.lines;
    try {
      const nlohmann::json j = nlohmann::json::parse(line);
      WorldSnapshot w = snapshot_from_json(j);
      validate(w, cfg);
      auto pass = j.find("pass");
      if (pass == j.end() || pass->is_null()) continue;
      PassEvent ev;
      ev.cycle = w.cycle;
      ev.kicker_unum = pass->at("kicker").get<int>();
      ev.receiver_unum = pass->at("receiver").get<int>();
      if (ev.kicker_unum == ev.receiver_unum) throw FormatError("receiver equals kicker");
      const PlayerState* k = w.find({Side::Ours, ev.kicker_unum});
      if (k == nullptr || w.find({Side::Ours, ev.receiver_unum}) == nullptr) throw FormatError("unknown pass player");
      if (k->pos.dist(w.ball.pos) > k->type.kickable_area + 1e-9) throw FormatError("kicker does not hold the ball");
      out.events.emplace_back(std::move(w), ev);
    } catch (const std::exception&) {
      ++out.malformed;
    }
  }
  if (in.bad()) throw IoError("error while reading game log");
  if (out.malformed * 2 > out.lines) {
    throw FormatError(std::to_string(out.malformed) + " of " + std::to_string(out.lines) + " log lines are malformed");
  }
  return out;
}

std::string csv_header() {
  std::string h;
  auto add = [&h](const std::string& name) {
    if (!h.empty()) h += ',';
    h += name;
  };
  for (const char* n : ball_feature_names()) add(std::string("ball_") + n);
  for (int i = 0; i < 11; ++i) {
    for (const char* n : our_feature_names()) add("our" + std::to_string(i) + "_" + n);
  }
  for (int i = 0; i < 11; ++i) {
    for (const char* n : their_feature_names()) add("opp" + std::to_string(i) + "_" + n);
  }
  add("label_unum");
  add("label_index");
  return h;
}

void write_csv_row(std::ostream& out, const FeatureRow& row) {
  char buf[32];
  for (double v : row.values) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf << ',';
  }
  out << row.label_unum << ',' << row.label_index << '\n';
}

std::vector<FeatureRow> read_csv(std::istream& in) {
  std::vector<FeatureRow> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.rfind("ball_x", 0) == 0) continue;
    std::vector<double> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw FormatError("line " + std::to_string(line_no) + ": bad CSV cell '" + cell + "'");
      }
      cells.push_back(v);
    }
    if (cells.size() != static_cast<std::size_t>(kRowLength) + 2) {
      throw FormatError("line " + std::to_string(line_no) + ": expected " + std::to_string(kRowLength + 2) + " cells");
    }
    FeatureRow r;
    r.label_index = static_cast<int>(cells.back());
    cells.pop_back();
    r.label_unum = static_cast<int>(cells.back());
    cells.pop_back();
    r.values = std::move(cells);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace ss2d::passdata
