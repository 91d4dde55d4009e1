#include "ss2d/assign.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "ss2d/errors.hpp"

namespace ss2d::assign {

MatchingProblem::MatchingProblem(int n_agents, int n_tasks, std::vector<double> cost,
                                 std::vector<double> importance)
    : n_agents_(n_agents), n_tasks_(n_tasks), cost_(std::move(cost)), importance_(std::move(importance)) {
  if (n_agents < 1 || n_tasks < 1) throw std::domain_error("matching problem needs >= 1 agent and task");
  if (cost_.size() != static_cast<std::size_t>(n_agents) * n_tasks) {
    throw std::domain_error("cost matrix size does not match dimensions");
  }
  if (importance_.empty()) importance_.assign(n_tasks, 0.0);
  if (importance_.size() != static_cast<std::size_t>(n_tasks)) {
    throw std::domain_error("importance vector size does not match task count");
  }
  for (double c : cost_) {
    if (!std::isfinite(c) || c < 0.0) throw std::domain_error("costs must be finite and non-negative");
  }
  for (double w : importance_) {
    if (!std::isfinite(w) || w < 0.0) throw std::domain_error("importances must be finite and non-negative");
  }
  rank_.resize(n_tasks);
  std::iota(rank_.begin(), rank_.end(), 0);
  std::stable_sort(rank_.begin(), rank_.end(), [this](int a, int b) {
    return importance_[a] > importance_[b];
  });
}

MatchingProblem MatchingProblem::from_rows(const std::vector<std::vector<double>>& rows,
                                           std::vector<double> importance) {
  if (rows.empty() || rows.front().empty()) throw std::domain_error("empty cost matrix");
  const std::size_t cols = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw std::domain_error("ragged cost matrix");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return MatchingProblem(static_cast<int>(rows.size()), static_cast<int>(cols), std::move(flat),
                         std::move(importance));
}

Solution make_solution(const MatchingProblem& problem, std::vector<Pair> pairs) {
  std::sort(pairs.begin(), pairs.end());
  std::vector<bool> agent_used(problem.agents(), false);
  std::vector<bool> task_used(problem.tasks(), false);
  Solution s;
  for (const Pair& p : pairs) {
    if (p.agent < 0 || p.agent >= problem.agents() || p.task < 0 || p.task >= problem.tasks()) {
      throw std::domain_error("pair index out of range");
    }
    if (agent_used[p.agent] || task_used[p.task]) {
      throw std::domain_error("pairs are not injective");
    }
    agent_used[p.agent] = true;
    task_used[p.task] = true;
    s.total_cost += problem.cost(p.agent, p.task);
  }
  s.coverage.reserve(problem.tasks());
  for (int t : problem.task_rank()) s.coverage.push_back(task_used[t] ? '1' : '0');
  s.pairs = std::move(pairs);
  return s;
}

Ordering compare_solutions(const Solution& a, const Solution& b) {
  if (a.coverage.size() != b.coverage.size()) throw std::domain_error("coverage strings differ in length");
  if (a.coverage != b.coverage) return a.coverage > b.coverage ? Ordering::ABetter : Ordering::BBetter;
  if (a.total_cost != b.total_cost) return a.total_cost < b.total_cost ? Ordering::ABetter : Ordering::BBetter;
  if (a.pairs != b.pairs) return a.pairs < b.pairs ? Ordering::ABetter : Ordering::BBetter;
  return Ordering::Equal;
}

std::vector<std::vector<bool>> k_best_tasks(const MatchingProblem& problem, int k) {
  if (k < 1) throw std::domain_error("k must be >= 1");
  std::vector<std::vector<bool>> allowed(problem.agents(),
                                         std::vector<bool>(problem.tasks(), false));
  std::vector<int> order(problem.tasks());
  for (int a = 0; a < problem.agents(); ++a) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return problem.cost(a, x) < problem.cost(a, y); });
    const int keep = std::min(k, problem.tasks());
    for (int i = 0; i < keep; ++i) allowed[a][order[i]] = true;
  }
  return allowed;
}

namespace {

using Allowed = std::vector<std::vector<bool>>;

/// Square min-cost assignment, potentials formulation. Returns row -> column.
std::vector<int> solve_square(const std::vector<std::vector<double>>& m) {
  const int n = static_cast<int>(m.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = m[i0 - 1][j - 1] -
                           u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

/// Cheapest way to give every task in `tasks` a distinct agent from `agents`
/// using allowed edges only; nullopt when no such matching exists.
std::optional<double> min_cost_cover(const MatchingProblem& problem, const Allowed& allowed,
                                     const std::vector<int>& agents, const std::vector<int>& tasks) {
  const std::size_t r = tasks.size();
  const std::size_t m = agents.size();
  if (r == 0) return 0.0;
  if (r > m) return std::nullopt;

  double big = 1.0;
  for (int a : agents) {
    for (int t : tasks) big += problem.cost(a, t);
  }
  big *= 2.0;

  std::vector<std::vector<double>> mat(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const int t = tasks[i];
      const int a = agents[j];
      mat[i][j] = allowed[a][t] ? problem.cost(a, t) : big;
    }
  }
  const std::vector<int> col = solve_square(mat);
  double total = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    const int a = agents[col[i]];
    const int t = tasks[i];
    if (!allowed[a][t]) return std::nullopt;
    total += problem.cost(a, t);
  }
  return total;
}

/// Walks agents in index order and fixes, for each, the smallest task that
/// still admits a completion of cost <= `optimum`. Agents with no such task
/// stay free. Yields the lexicographically smallest optimal pair list.
Solution lex_smallest_optimum(const MatchingProblem& problem, const Allowed& allowed,
                              std::vector<int> tasks, double optimum) {
  std::sort(tasks.begin(), tasks.end());
  const double tol = 1e-9 * std::max(1.0, std::fabs(optimum));
  std::vector<int> free_tasks = tasks;
  std::vector<Pair> pairs;
  double fixed = 0.0;
  for (int a = 0; a < problem.agents(); ++a) {
    std::vector<int> later(problem.agents() - a - 1);
    std::iota(later.begin(), later.end(), a + 1);
    for (std::size_t i = 0; i < free_tasks.size(); ++i) {
      const int t = free_tasks[i];
      if (!allowed[a][t]) continue;
      std::vector<int> rest = free_tasks;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      const auto tail = min_cost_cover(problem, allowed, later, rest);
      if (tail && fixed + problem.cost(a, t) + *tail <= optimum + tol) {
        pairs.push_back({a, t});
        fixed += problem.cost(a, t);
        free_tasks = std::move(rest);
        break;
      }
    }
  }
  if (!free_tasks.empty()) throw std::logic_error("assignment refinement lost feasibility");
  return make_solution(problem, std::move(pairs));
}

std::vector<int> all_agents(const MatchingProblem& problem) {
  std::vector<int> agents(problem.agents());
  std::iota(agents.begin(), agents.end(), 0);
  return agents;
}

/// Augmenting-path step of Kuhn's algorithm over allowed edges.
bool augment(int task, const Allowed& allowed, std::vector<int>& agent_of_task,
             std::vector<int>& task_of_agent, std::vector<char>& seen) {
  const int n_agents = static_cast<int>(task_of_agent.size());
  for (int a = 0; a < n_agents; ++a) {
    if (!allowed[a][task] || seen[a]) continue;
    seen[a] = 1;
    const int held = task_of_agent[a];
    if (held < 0 || augment(held, allowed, agent_of_task, task_of_agent, seen)) {
      task_of_agent[a] = task;
      agent_of_task[task] = a;
      return true;
    }
  }
  return false;
}

}  // namespace

Solution hungarian(const MatchingProblem& problem) {
  if (problem.agents() != problem.tasks()) {
    throw std::domain_error("hungarian requires a square problem; pad it first");
  }
  const Allowed allowed(problem.agents(),
                        std::vector<bool>(problem.tasks(), true));
  std::vector<int> tasks(problem.tasks());
  std::iota(tasks.begin(), tasks.end(), 0);
  const auto optimum = min_cost_cover(problem, allowed, all_agents(problem), tasks);
  return lex_smallest_optimum(problem, allowed, tasks, *optimum);
}

Solution omam(const MatchingProblem& problem, int k) {
  const Allowed allowed = k_best_tasks(problem, k);

  // Greedy over the importance ranking: a task joins the covered set iff a
  // matching covering it together with every task already chosen exists.
  // That is exactly the lexicographically greatest coverage string.
  std::vector<int> agent_of_task(problem.tasks(), -1);
  std::vector<int> task_of_agent(problem.agents(), -1);
  std::vector<int> covered;
  for (int t : problem.task_rank()) {
    if (static_cast<int>(covered.size()) == problem.agents()) break;
    std::vector<char> seen(problem.agents(), 0);
    if (augment(t, allowed, agent_of_task, task_of_agent, seen)) covered.push_back(t);
  }

  const auto optimum = min_cost_cover(problem, allowed, all_agents(problem), covered);
  return lex_smallest_optimum(problem, allowed, covered, *optimum);
}

Solution brute_force_lex(const MatchingProblem& problem, int k) {
  if (problem.agents() > kBruteForceLimit || problem.tasks() > kBruteForceLimit) {
    throw std::domain_error("brute_force_lex is limited to 7 agents and 7 tasks");
  }
  const Allowed allowed = k_best_tasks(problem, k);
  Solution best = make_solution(problem, {});
  std::vector<Pair> current;
  std::vector<bool> used(problem.tasks(), false);

  std::function<void(int)> visit = [&](int agent) {
    if (agent == problem.agents()) {
      Solution s = make_solution(problem, current);
      if (compare_solutions(s, best) == Ordering::ABetter) best = std::move(s);
      return;
    }
    visit(agent + 1);  // agent stays free
    for (int t = 0; t < problem.tasks(); ++t) {
      if (used[t] || !allowed[agent][t]) continue;
      used[t] = true;
      current.push_back({agent, t});
      visit(agent + 1);
      current.pop_back();
      used[t] = false;
    }
  };
  visit(0);
  return best;
}

ProblemFile read_problem(std::istream& in) {
  if (!in) throw IoError("cannot read cost-matrix stream");
  int n_agents = 0;
  int n_tasks = 0;
  int k = 0;
  if (!(in >> n_agents >> n_tasks >> k)) throw FormatError("header must be 'n_agents n_tasks k'");
  if (n_agents < 1 || n_tasks < 1 || k < 1) throw FormatError("dimensions and k must be >= 1");
  auto read_values = [&](std::size_t count, const char* what) {
    std::vector<double> values(count);
    for (auto& v : values) {
      if (!(in >> v)) throw FormatError(std::string("truncated or non-numeric ") + what);
    }
    return values;
  };
  std::vector<double> importance = read_values(n_tasks, "importance row");
  std::vector<double> cost =
      read_values(n_agents * n_tasks, "cost matrix");
  std::string extra;
  if (in >> extra) throw FormatError("unexpected trailing token '" + extra + "'");
  try {
    return {MatchingProblem(n_agents, n_tasks, std::move(cost), std::move(importance)), k};
  } catch (const std::domain_error& e) {
    throw FormatError(e.what());
  }
}

}  // namespace ss2d::assign
