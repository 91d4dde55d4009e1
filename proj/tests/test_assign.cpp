#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "ss2d/assign.hpp"
#include "ss2d/errors.hpp"

using namespace ss2d::assign;

namespace {

MatchingProblem random_problem(std::mt19937_64& rng, int agents, int tasks, bool integer_costs) {
  std::uniform_real_distribution<double> cost(0.0, 100.0);
  std::uniform_int_distribution<int> small(0, 6);
  std::uniform_int_distribution<int> imp(0, 3);
  std::vector<double> c, w;
  for (int i = 0; i < agents * tasks; ++i) c.push_back(integer_costs ? small(rng) : cost(rng));
  for (int t = 0; t < tasks; ++t) w.push_back(imp(rng));
  return MatchingProblem(agents, tasks, c, w);
}

double min_permutation_cost(const MatchingProblem& p) {
  std::vector<int> perm(static_cast<std::size_t>(p.agents()));
  std::iota(perm.begin(), perm.end(), 0);
  double best = 1e300;
  do {
    double c = 0.0;
    for (int a = 0; a < p.agents(); ++a) c += p.cost(a, perm[static_cast<std::size_t>(a)]);
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Independent reference: enumerate every injective partial map agent -> allowed task.
struct Enumerator {
  const MatchingProblem& p;
  std::vector<std::vector<bool>> allowed;
  std::vector<Pair> current;
  std::vector<bool> used;
  Solution best;
  bool have = false;

  void run(int agent) {
    if (agent == p.agents()) {
      Solution s = make_solution(p, current);
      if (!have || compare_solutions(s, best) == Ordering::ABetter) {
        best = s;
        have = true;
      }
      return;
    }
    run(agent + 1);
    for (int t = 0; t < p.tasks(); ++t) {
      if (!allowed[static_cast<std::size_t>(agent)][static_cast<std::size_t>(t)] || used[static_cast<std::size_t>(t)]) continue;
      used[static_cast<std::size_t>(t)] = true;
      current.push_back({agent, t});
      run(agent + 1);
      current.pop_back();
      used[static_cast<std::size_t>(t)] = false;
    }
  }
};

Solution reference_lex(const MatchingProblem& p, int k) {
  Enumerator e{p, k_best_tasks(p, k), {}, std::vector<bool>(static_cast<std::size_t>(p.tasks()), false), {}};
  e.run(0);
  return e.best;
}

}  // namespace

TEST(Hungarian, WorkedExamples) {
  const auto s = hungarian(MatchingProblem::from_rows({{1, 2}, {2, 4}}));
  EXPECT_EQ(s.pairs, (std::vector<Pair>{{0, 1}, {1, 0}}));
  EXPECT_DOUBLE_EQ(s.total_cost, 4.0);
  EXPECT_EQ(s.coverage, "11");

  const auto d = hungarian(MatchingProblem::from_rows({{0, 9}, {9, 0}}));
  EXPECT_EQ(d.pairs, (std::vector<Pair>{{0, 0}, {1, 1}}));
  EXPECT_DOUBLE_EQ(d.total_cost, 0.0);
}

TEST(Hungarian, RejectsNonSquare) {
  EXPECT_THROW(hungarian(MatchingProblem::from_rows({{1, 2, 3}, {4, 5, 6}})), std::domain_error);
}

TEST(Hungarian, MatchesPermutationMinimum) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const auto p = random_problem(rng, 5, 5, false);
    const auto s = hungarian(p);
    EXPECT_EQ(s.total_cost, min_permutation_cost(p));
    EXPECT_EQ(s.pairs.size(), 5u);
  }
}

TEST(Hungarian, LexSmallestAmongTies) {
  // All-zero matrix: every permutation is optimal; identity is lex-smallest.
  const auto s = hungarian(MatchingProblem::from_rows({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}));
  EXPECT_EQ(s.pairs, (std::vector<Pair>{{0, 0}, {1, 1}, {2, 2}}));
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const auto p = random_problem(rng, 4, 4, true);
    const auto ref = reference_lex(p, 4);
    const auto s2 = hungarian(p);
    EXPECT_EQ(s2.total_cost, ref.total_cost);
    EXPECT_EQ(s2.pairs, ref.pairs);
  }
}

TEST(Compare, WorkedExamples) {
  Solution a{{}, 100.0, "10"}, b{{}, 1.0, "01"};
  EXPECT_EQ(compare_solutions(a, b), Ordering::ABetter);
  EXPECT_EQ(compare_solutions(b, a), Ordering::BBetter);
  Solution c{{{0, 0}, {1, 1}}, 6.0, "11"}, d{{{0, 1}, {1, 0}}, 7.0, "11"};
  EXPECT_EQ(compare_solutions(c, d), Ordering::ABetter);
  EXPECT_EQ(compare_solutions(c, c), Ordering::Equal);
  Solution e{{{0, 1}}, 6.0, "11"};
  EXPECT_EQ(compare_solutions(c, e), Ordering::ABetter);
  Solution f{{}, 0.0, "1"};
  EXPECT_THROW(compare_solutions(a, f), std::domain_error);
}

TEST(KBest, TiesByTaskIndex) {
  const auto p = MatchingProblem::from_rows({{3, 1, 1, 0}});
  const auto allowed = k_best_tasks(p, 2);
  EXPECT_EQ(allowed[0], (std::vector<bool>{false, true, false, true}));
}

TEST(Omam, WorkedExamples) {
  const auto p = MatchingProblem::from_rows({{5, 1}, {6, 1}}, {0.9, 0.5});
  const auto s = omam(p, 2);
  EXPECT_EQ(s.pairs, (std::vector<Pair>{{0, 0}, {1, 1}}));
  EXPECT_EQ(s.coverage, "11");
  EXPECT_DOUBLE_EQ(s.total_cost, 6.0);

  const auto single = omam(MatchingProblem::from_rows({{100, 1}}, {0.9, 0.5}), 2);
  EXPECT_EQ(single.pairs, (std::vector<Pair>{{0, 0}}));
  EXPECT_EQ(single.coverage, "10");

  const auto one = omam(MatchingProblem::from_rows({{4}}), 1);
  EXPECT_EQ(one.pairs, (std::vector<Pair>{{0, 0}}));
}

TEST(Omam, KRestrictionCanLeaveTasksOpen) {
  // Both agents' single cheapest task is task 0; task 1 stays uncovered.
  const auto s = omam(MatchingProblem::from_rows({{1, 5}, {2, 6}}, {0.5, 0.9}), 1);
  EXPECT_EQ(s.coverage, "01");
  EXPECT_EQ(s.pairs, (std::vector<Pair>{{0, 0}}));
}

TEST(Omam, MatchesIndependentEnumeration) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> dim(1, 6), kk(1, 3);
  for (int i = 0; i < 300; ++i) {
    const bool ints = i % 2 == 0;
    const auto p = random_problem(rng, dim(rng), dim(rng), ints);
    const int k = kk(rng);
    const auto ref = reference_lex(p, k);
    EXPECT_EQ(compare_solutions(omam(p, k), ref), Ordering::Equal);
    EXPECT_EQ(compare_solutions(brute_force_lex(p, k), ref), Ordering::Equal);
  }
}

TEST(Omam, AgreesWithHungarianOnFullSquare) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> dim(1, 6);
  for (int i = 0; i < 100; ++i) {
    const int n = dim(rng);
    auto p = random_problem(rng, n, n, i % 2 == 0);
    std::vector<double> costs;
    for (int a = 0; a < n; ++a)
      for (int t = 0; t < n; ++t) costs.push_back(p.cost(a, t));
    const MatchingProblem eq(n, n, costs, std::vector<double>(static_cast<std::size_t>(n), 1.0));
    EXPECT_EQ(omam(eq, n).total_cost, hungarian(eq).total_cost);
  }
}

TEST(Omam, CoverageMonotoneInK) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> dim(1, 6);
  for (int i = 0; i < 200; ++i) {
    const auto p = random_problem(rng, dim(rng), dim(rng), false);
    for (int k = 1; k < p.tasks(); ++k) EXPECT_GE(omam(p, k + 1).coverage, omam(p, k).coverage);
  }
}

TEST(Omam, DeterministicAndScaleInvariant) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 100; ++i) {
    const auto p = random_problem(rng, 5, 4, false);
    std::vector<double> scaled, imp;
    for (int a = 0; a < p.agents(); ++a)
      for (int t = 0; t < p.tasks(); ++t) scaled.push_back(p.cost(a, t) * 4.0);
    for (int t = 0; t < p.tasks(); ++t) imp.push_back(p.importance(t));
    const MatchingProblem q(p.agents(), p.tasks(), scaled, imp);
    EXPECT_EQ(omam(p, 3), omam(p, 3));
    EXPECT_EQ(omam(q, 3).pairs, omam(p, 3).pairs);
  }
}

TEST(Omam, SolutionInvariants) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dim(1, 8);
  for (int i = 0; i < 200; ++i) {
    const auto p = random_problem(rng, dim(rng), dim(rng), false);
    const auto s = omam(p, 3);
    EXPECT_LE(s.pairs.size(), static_cast<std::size_t>(std::min(p.agents(), p.tasks())));
    std::vector<bool> agent_used(static_cast<std::size_t>(p.agents())), task_used(static_cast<std::size_t>(p.tasks()));
    double sum = 0.0;
    for (const auto& pr : s.pairs) {
      EXPECT_FALSE(agent_used[static_cast<std::size_t>(pr.agent)]);
      EXPECT_FALSE(task_used[static_cast<std::size_t>(pr.task)]);
      agent_used[static_cast<std::size_t>(pr.agent)] = task_used[static_cast<std::size_t>(pr.task)] = true;
      sum += p.cost(pr.agent, pr.task);
    }
    EXPECT_DOUBLE_EQ(s.total_cost, sum);
    for (std::size_t r = 0; r < p.task_rank().size(); ++r) {
      EXPECT_EQ(s.coverage[r] == '1', task_used[static_cast<std::size_t>(p.task_rank()[r])]);
    }
  }
}

TEST(BruteForce, LimitsAndTrivialCase) {
  EXPECT_THROW(brute_force_lex(MatchingProblem(8, 2, std::vector<double>(16, 1.0), {}), 1), std::domain_error);
  EXPECT_EQ(brute_force_lex(MatchingProblem::from_rows({{2}}), 1).pairs, (std::vector<Pair>{{0, 0}}));
}

TEST(Problem, ValidatesInput) {
  EXPECT_THROW(MatchingProblem(0, 1, {}, {}), std::domain_error);
  EXPECT_THROW(MatchingProblem(1, 2, {1.0}, {}), std::domain_error);
  EXPECT_THROW(MatchingProblem(1, 1, {-1.0}, {}), std::domain_error);
  EXPECT_THROW(MatchingProblem(1, 1, {1.0}, {0.1, 0.2}), std::domain_error);
  EXPECT_THROW(MatchingProblem(1, 1, {std::nan("")}, {}), std::domain_error);
}

TEST(Problem, ReadsTextFormat) {
  std::istringstream in("2 2 1\n0.9 0.5\n5 1\n6 1\n");
  const auto f = read_problem(in);
  EXPECT_EQ(f.k, 1);
  EXPECT_EQ(f.problem.agents(), 2);
  EXPECT_DOUBLE_EQ(f.problem.cost(1, 0), 6.0);
  std::istringstream bad("2 2 1\n0.9 0.5\n5 1\n6\n");
  EXPECT_THROW(read_problem(bad), ss2d::FormatError);
  std::istringstream text("2 2 1\n0.9 x\n5 1\n6 1\n");
  EXPECT_THROW(read_problem(text), ss2d::FormatError);
}
