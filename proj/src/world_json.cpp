#include "ss2d/world_json.hpp"

#include <istream>
#include <ostream>
#include <string>

#include "ss2d/errors.hpp"

namespace ss2d {

using nlohmann::json;

json to_json(const WorldSnapshot& world) {
  json j;
  j["cycle"] = world.cycle;
  j["ball"] = {{"x", world.ball.pos.x}, {"y", world.ball.pos.y},
               {"vx", world.ball.vel.x}, {"vy", world.ball.vel.y}};
  json players = json::array();
  for (const auto& p : world.players) {
    players.push_back({{"side", to_string(p.side)},
                       {"unum", p.unum},
                       {"x", p.pos.x},
                       {"y", p.pos.y},
                       {"vx", p.vel.x},
                       {"vy", p.vel.y},
                       {"body", p.body},
                       {"max_speed", p.type.max_speed},
                       {"kickable_area", p.type.kickable_area},
                       {"size", p.type.size}});
  }
  j["players"] = std::move(players);
  if (world.holder) j["holder"] = {{"side", to_string(world.holder->side)}, {"unum", world.holder->unum}};
  return j;
}

namespace {

double number(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) throw FormatError(std::string("missing numeric field '") + key + "'");
  return it->get<double>();
}

int integer(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_integer()) {
    throw FormatError(std::string("missing integer field '") + key + "'");
  }
  return it->get<int>();
}

Side side_field(const json& obj) {
  auto it = obj.find("side");
  if (it == obj.end() || !it->is_string()) throw FormatError("missing string field 'side'");
  try {
    return parse_side(it->get<std::string>());
  } catch (const std::domain_error& e) {
    throw FormatError(e.what());
  }
}

}  // namespace

WorldSnapshot snapshot_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("snapshot must be a JSON object");
  WorldSnapshot w;
  w.cycle = integer(j, "cycle");
  auto ball = j.find("ball");
  if (ball == j.end() || !ball->is_object()) throw FormatError("missing 'ball' object");
  w.ball.pos = {number(*ball, "x"), number(*ball, "y")};
  w.ball.vel = {number(*ball, "vx"), number(*ball, "vy")};
  auto players = j.find("players");
  if (players == j.end() || !players->is_array()) throw FormatError("missing 'players' array");
  for (const auto& pj : *players) {
    if (!pj.is_object()) throw FormatError("player entry must be an object");
    PlayerState p;
    p.side = side_field(pj);
    p.unum = integer(pj, "unum");
    p.pos = {number(pj, "x"), number(pj, "y")};
    p.vel = {number(pj, "vx"), number(pj, "vy")};
    p.body = number(pj, "body");
    p.type.max_speed = number(pj, "max_speed");
    p.type.kickable_area = number(pj, "kickable_area");
    p.type.size = number(pj, "size");
    w.players.push_back(p);
  }
  if (auto h = j.find("holder"); h != j.end() && !h->is_null()) {
    if (!h->is_object()) throw FormatError("'holder' must be an object");
    w.holder = PlayerId{side_field(*h), integer(*h, "unum")};
  }
  return w;
}

std::vector<WorldSnapshot> read_scenarios(std::istream& in) {
  if (!in) throw IoError("cannot read scenario stream");
  std::vector<WorldSnapshot> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      WorldSnapshot w = snapshot_from_json(json::parse(line));
      validate(w);
      out.push_back(std::move(w));
    } catch (const json::exception& e) {
      throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const FormatError& e) {
      throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const std::domain_error& e) {
      throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (in.bad()) throw IoError("error while reading scenario stream");
  return out;
}

void write_scenarios(std::ostream& out, const std::vector<WorldSnapshot>& worlds) {
  for (const auto& w : worlds) out << to_json(w).dump() << '\n';
}

}  // namespace ss2d
