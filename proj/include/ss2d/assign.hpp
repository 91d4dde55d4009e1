#pragma once

#include <compare>
#include <iosfwd>
#include <string>
#include <vector>

namespace ss2d::assign {

/// Agents x tasks cost matrix plus per-task importance.
///
/// Tasks are ranked by descending importance with ties broken by ascending
/// task index; that ranking fixes the bit order of every coverage string.
class MatchingProblem {
 public:
  /// `cost` is row-major (agent-major). Throws std::domain_error on empty
  /// dimensions, size mismatch, negative or non-finite values.
  MatchingProblem(int n_agents, int n_tasks, std::vector<double> cost, std::vector<double> importance);

  /// Convenience for tests: one row per agent.
  static MatchingProblem from_rows(const std::vector<std::vector<double>>& rows,
                                   std::vector<double> importance = {});

  int agents() const { return n_agents_; }
  int tasks() const { return n_tasks_; }
  double cost(int agent, int task) const { return cost_[static_cast<std::size_t>(agent * n_tasks_ + task)]; }
  double importance(int task) const { return importance_[static_cast<std::size_t>(task)]; }
  /// Task indices, most important first.
  const std::vector<int>& task_rank() const { return rank_; }

 private:
  int n_agents_;
  int n_tasks_;
  std::vector<double> cost_;
  std::vector<double> importance_;
  std::vector<int> rank_;
};

struct Pair {
  int agent = 0;
  int task = 0;
  auto operator<=>(const Pair&) const = default;
};

struct Solution {
  std::vector<Pair> pairs;  // sorted by agent index
  double total_cost = 0.0;
  std::string coverage;     // '1'/'0' per task in importance rank order

  bool operator==(const Solution&) const = default;
};

/// Canonical solution from a pair list: sorts pairs, checks injectivity and
/// bounds (std::domain_error), sums cost in agent order, builds coverage.
Solution make_solution(const MatchingProblem& problem, std::vector<Pair> pairs);

enum class Ordering { ABetter, BBetter, Equal };

/// Coverage string first (greater wins), then lower total cost, then the
/// lexicographically smaller pair list. Mismatched coverage lengths throw.
Ordering compare_solutions(const Solution& a, const Solution& b);

/// allowed[a][t] is true iff t is among agent a's k cheapest tasks
/// (ties by ascending task index).
std::vector<std::vector<bool>> k_best_tasks(const MatchingProblem& problem, int k);

/// Minimum-cost perfect matching on a square problem (O(n^3) potentials
/// method). Among optimal matchings the lexicographically smallest pair list
/// is returned. Non-square problems throw std::domain_error.
Solution hungarian(const MatchingProblem& problem);

/// Lexicographic coverage-then-cost optimum with each agent restricted to
/// its k cheapest tasks.
Solution omam(const MatchingProblem& problem, int k);

/// Exhaustive reference for omam(); both dimensions must be <= 7.
Solution brute_force_lex(const MatchingProblem& problem, int k);

inline constexpr int kBruteForceLimit = 7;

/// Text format: `n_agents n_tasks k`, then n_tasks importances, then
/// n_agents rows of n_tasks costs. Throws FormatError.
struct ProblemFile {
  MatchingProblem problem;
  int k;
};
ProblemFile read_problem(std::istream& in);

}  // namespace ss2d::assign
