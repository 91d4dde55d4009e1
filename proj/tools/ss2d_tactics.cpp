// Command line front end for the tactics library.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "ss2d/assign.hpp"
#include "ss2d/dribble.hpp"
#include "ss2d/errors.hpp"
#include "ss2d/harness.hpp"
#include "ss2d/marking.hpp"
#include "ss2d/passdata.hpp"
#include "ss2d/predictor.hpp"
#include "ss2d/world_json.hpp"

namespace {

using namespace ss2d;

constexpr int kExitInput = 2;

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw IoError("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return in;
}

WorldSnapshot read_state(const std::string& path) {
  std::ifstream in = open_input(path);
  const auto worlds = read_scenarios(in);
  if (worlds.size() != 1) throw FormatError(path + ": expected exactly one snapshot line");
  return worlds.front();
}

predictor::OpponentPredictor load_predictor(const std::string& weights) {
  if (weights.empty()) return predictor::OpponentPredictor::fallback();
  return predictor::OpponentPredictor::with_network(
      std::make_shared<const predictor::Network>(predictor::load_network_file(weights)));
}

// Table to stdout unless the JSON report goes there instead.
void emit_report(const std::string& table, const nlohmann::json& report, const std::string& json_path) {
  if (json_path != "-") std::cout << table;
  if (json_path.empty()) return;
  Output out(json_path);
  out.stream() << report.dump(2) << '\n';
}

struct Common {
  std::uint64_t seed = 1;
  int n = 100;
  double noise_factor = 0.0;
  double stale_prob = 0.0;
  std::string placement = "defensive_third";
  std::string json;
  std::string out;

  harness::ScenarioParams params() const {
    harness::ScenarioParams p;
    p.seed = seed;
    p.n_scenarios = n;
    p.noise = {noise_factor, stale_prob};
    p.placement = harness::parse_placement(placement);
    return p;
  }
};

void add_scenario_flags(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Base seed");
  app->add_option("--n", c.n, "Number of scenarios")->check(CLI::PositiveNumber);
  app->add_option("--noise-factor", c.noise_factor, "Positional noise per metre of distance")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--stale-prob", c.stale_prob, "Per-cycle staleness probability")->check(CLI::Range(0.0, 0.999));
  app->add_option("--placement", c.placement, "defensive_third | midfield | random");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D soccer tactics: marking, dribbling and pass data tools"};
  app.require_subcommand(1);
  Common c;

  auto* gen = app.add_subcommand("gen-scenarios", "Write random snapshots as JSON lines");
  add_scenario_flags(gen, c);
  std::string kind = "marking";
  gen->add_option("--kind", kind, "marking | dribble | pass");
  gen->add_option("--out", c.out, "Output file (default stdout)");

  auto* mark_bench = app.add_subcommand("mark-bench", "Compare marking algorithms under observation noise");
  add_scenario_flags(mark_bench, c);
  bool centralized = false;
  mark_bench->add_flag("--centralized", centralized, "Share one observer's view among all players");
  std::string bench_algo;
  mark_bench->add_option("--algo", bench_algo, "Report only this algorithm");
  mark_bench->add_option("--json", c.json, "Also write the JSON report to this file ('-' for stdout)");

  auto* dribble_bench = app.add_subcommand("dribble-bench", "Dribble search with and without pre-actions");
  add_scenario_flags(dribble_bench, c);
  bool mad = false;
  std::string weights;
  std::string family = "open";
  dribble_bench->add_flag("--mad", mad, "Report the search with one-step pre-actions");
  dribble_bench->add_option("--weights", weights, "Opponent predictor weights file");
  dribble_bench->add_option("--family", family, "open | blocked");
  dribble_bench->add_option("--json", c.json, "Also write the JSON report to this file ('-' for stdout)");

  auto* mark = app.add_subcommand("mark", "Marking plan for one snapshot");
  std::string state_path;
  std::string algo = "omam";
  std::string actor_text = "ours:1";
  mark->add_option("--state", state_path, "Snapshot JSON line file")->required();
  mark->add_option("--algo", algo, "proximity | danger | hungarian | omam");
  mark->add_option("--actor", actor_text, "Observer, e.g. ours:2");
  mark->add_option("--noise-factor", c.noise_factor)->check(CLI::NonNegativeNumber);
  mark->add_option("--stale-prob", c.stale_prob)->check(CLI::Range(0.0, 0.999));
  mark->add_option("--seed", c.seed);

  auto* dribble_gen = app.add_subcommand("dribble-gen", "Dribble candidates and best chain for one snapshot");
  dribble_gen->add_option("--state", state_path, "Snapshot JSON line file")->required();
  dribble_gen->add_option("--actor", actor_text, "Dribbling player, e.g. ours:10");
  dribble_gen->add_flag("--mad", mad, "Search with one-step pre-actions");
  dribble_gen->add_option("--weights", weights, "Opponent predictor weights file");

  auto* predict = app.add_subcommand("predict", "Predict nearby opponents one cycle ahead");
  predict->add_option("--weights", weights, "Weights file (fallback predictor if omitted)");
  predict->add_option("--state", state_path, "Snapshot JSON line file")->required();
  predict->add_option("--actor", actor_text, "Ball-holding player, e.g. ours:10");

  auto* extract = app.add_subcommand("extract-pass", "Pass events to feature CSV");
  std::string log_path;
  std::string sort = "unum";
  bool kicker_first = false;
  extract->add_option("--log", log_path, "Snapshot log (.jsonl)")->required();
  extract->add_option("--sort", sort, "unum | x")->check(CLI::IsMember({"unum", "x"}));
  extract->add_flag("--kicker-first", kicker_first, "Put the kicker in the first slot");
  extract->add_option("--noise-factor", c.noise_factor)->check(CLI::NonNegativeNumber);
  extract->add_option("--stale-prob", c.stale_prob)->check(CLI::Range(0.0, 0.999));
  extract->add_option("--seed", c.seed);
  extract->add_option("--out", c.out, "CSV output (default stdout)");

  auto* assign_cmd = app.add_subcommand("assign", "Solve a cost-matrix file");
  std::string problem_path;
  assign_cmd->add_option("--problem", problem_path, "Problem file")->required();
  assign_cmd->add_option("--algo", algo, "hungarian | omam | brute");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      harness::ScenarioParams p = c.params();
      Output out(c.out);
      if (kind == "pass") {
        for (const auto& line : harness::gen_pass_log(p)) out.stream() << line.dump() << '\n';
        return 0;
      }
      if (kind == "marking") {
        p.kind = harness::ScenarioKind::Marking;
      } else if (kind == "dribble") {
        p.kind = harness::ScenarioKind::Dribble;
      } else {
        throw std::domain_error("unknown kind '" + kind + "'");
      }
      for (int i = 0; i < p.n_scenarios; ++i) out.stream() << to_json(harness::gen_scenario(p, i)).dump() << '\n';
    } else if (mark_bench->parsed()) {
      auto report = harness::run_mark_bench(c.params(), centralized);
      if (!bench_algo.empty()) {
        const auto keep = marking::parse_algorithm(bench_algo);
        std::erase_if(report.algorithms, [&](const auto& entry) { return entry.first != keep; });
      }
      emit_report(harness::to_table(report), harness::to_json(report), c.json);
    } else if (dribble_bench->parsed()) {
      harness::DribbleFamily fam;
      if (family == "open") {
        fam = harness::DribbleFamily::Open;
      } else if (family == "blocked") {
        fam = harness::DribbleFamily::BlockedForward;
      } else {
        throw std::domain_error("unknown family '" + family + "'");
      }
      const auto report = harness::run_dribble_bench(c.params(), mad, load_predictor(weights), fam);
      emit_report(harness::to_table(report), harness::to_json(report), c.json);
    } else if (mark->parsed()) {
      const WorldSnapshot world = read_state(state_path);
      const PlayerId observer = parse_player_id(actor_text);
      const auto view = observe(world, observer, {c.noise_factor, c.stale_prob}, c.seed);
      std::cout << marking::to_json(marking::mark_assign(view, marking::parse_algorithm(algo))).dump(2) << '\n';
    } else if (dribble_gen->parsed()) {
      if (actor_text == "ours:1") actor_text = "ours:10";
      const WorldSnapshot world = read_state(state_path);
      const PlayerId actor = parse_player_id(actor_text);
      const dribble::DribbleState state = dribble::belief_from(full_state_view(world, actor));
      const auto pred = load_predictor(weights);
      nlohmann::json out;
      out["candidates"] = nlohmann::json::array();
      for (const auto& cand : dribble::enumerate_dribbles(state, actor)) {
        out["candidates"].push_back(dribble::to_json(cand));
      }
      const auto result = dribble::chain_search_detailed(state, actor, mad, pred);
      out["best"] = dribble::to_json(result.best);
      out["root_chains"] = result.root_chains;
      out["mad_chains"] = result.mad_chains;
      std::cout << out.dump(2) << '\n';
    } else if (predict->parsed()) {
      if (actor_text == "ours:1") actor_text = "ours:10";
      const WorldSnapshot world = read_state(state_path);
      const PlayerId actor_id = parse_player_id(actor_text);
      const auto pred = load_predictor(weights);
      const auto view = full_state_view(world, actor_id);
      const PlayerState& actor = world.at(actor_id);
      nlohmann::json out = nlohmann::json::array();
      for (const auto& opp : view.players) {
        if (opp.base.side == actor.side) continue;
        if (opp.base.pos.dist(world.ball.pos) > predictor::kBlockerRadius) continue;
        const Vec2 next = predictor::predict_opponent(pred, actor, world.ball, opp);
        out.push_back({{"unum", opp.base.unum}, {"x", next.x}, {"y", next.y}});
      }
      std::cout << out.dump(2) << '\n';
    } else if (extract->parsed()) {
      std::ifstream in = open_input(log_path);
      const auto log = passdata::read_log(in);
      if (log.malformed > 0) std::cerr << "skipped " << log.malformed << " malformed line(s)\n";
      const passdata::SortingConfig config{sort == "x" ? passdata::SortMode::XSort : passdata::SortMode::Unum,
                                           kicker_first};
      Output out(c.out);
      out.stream() << passdata::csv_header() << '\n';
      const NoiseModel noise{c.noise_factor, c.stale_prob};
      for (const auto& [world, event] : log.events) {
        const PlayerId kicker{Side::Ours, event.kicker_unum};
        const auto view = observe(world, kicker, noise, harness::observer_seed(c.seed + world.cycle, kicker.unum));
        passdata::write_csv_row(out.stream(), passdata::extract_row(view, event, config));
      }
    } else if (assign_cmd->parsed()) {
      std::ifstream in = open_input(problem_path);
      const auto file = assign::read_problem(in);
      assign::Solution s;
      if (algo == "hungarian") {
        s = assign::hungarian(file.problem);
      } else if (algo == "omam") {
        s = assign::omam(file.problem, file.k);
      } else if (algo == "brute") {
        s = assign::brute_force_lex(file.problem, file.k);
      } else {
        throw std::domain_error("unknown algorithm '" + algo + "'");
      }
      nlohmann::json pairs = nlohmann::json::array();
      for (const auto& p : s.pairs) pairs.push_back({p.agent, p.task});
      std::cout << nlohmann::json{{"pairs", pairs}, {"total_cost", s.total_cost}, {"coverage", s.coverage}}.dump(2)
                << '\n';
    }
  } catch (const predictor::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
