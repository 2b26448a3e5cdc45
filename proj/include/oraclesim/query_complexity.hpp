// Classical query-counting oracles: exact adaptive decision-tree minimax,
// Monte-Carlo random-order averages, and the closed-form iteration count of
// the quadratic search algorithm, composed into the predicted-vs-actual
// comparison table.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "oraclesim/problems.hpp"

namespace oraclesim {

// k(n) = π / (4 arcsin 2^{-n/2}) - 1/2
double grover_k(int n);

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SearchBudget {
    std::uint64_t max_nodes = 10'000'000;
    // Guard on |scope| * 2^arg_width before the search starts.
    std::uint64_t max_scope_cost = 1u << 20;
};

struct DecisionTreeResult {
    int depth = 0;                      // minimal worst-case query count
    std::optional<std::uint64_t> best_first_arg;
    std::uint64_t explored = 0;         // node count
};

// Exact minimax over adaptive strategies that never reuse an argument.
// A scope is determined once all its settings share one solution label;
// otherwise the depth is the best over fresh arguments of the worst over
// observed values. Memoized on canonical (scope, used-arguments) keys.
DecisionTreeResult min_queries(const OracleProblem& problem,
                               const std::vector<int>& scope,
                               const SearchBudget& budget = {});

struct PredictedN {
    int instances = 0;
    std::vector<int> per_instance;  // one depth per advanced-knowledge instance
    std::optional<int> n_max, n_min, n_mode;
};

// Decision-tree depth over every advanced-knowledge instance for b_c. The
// headline count is the maximum (worst instance).
PredictedN predicted_n(const OracleProblem& problem, const BitString& b_c,
                       const SearchBudget& budget = {});

struct AvgQueries {
    double mean = 0.0;
    double stderr_of_mean = 0.0;
    std::uint64_t trials = 0;
};

// Exhaustive randomly ordered search: the setting is drawn uniformly from
// the scope, the arguments are visited in a uniformly random order skipping
// those whose value is already implied, and queries are counted until the
// solution is determined.
AvgQueries avg_queries_random_order(const OracleProblem& problem,
                                    const std::vector<int>& scope,
                                    std::uint64_t trials, std::uint64_t rng_seed);

// Completely random search: arguments are drawn i.i.d. with replacement and
// every evaluation counts.
AvgQueries avg_queries_fully_random(const OracleProblem& problem,
                                    const std::vector<int>& scope,
                                    std::uint64_t trials, std::uint64_t rng_seed);

struct ComplexityRecord {
    std::string problem;
    BitString b_c;
    int instances = 0;
    std::optional<int> n_max, n_min, n_mode;
    std::optional<double> k_n;
    int baseline = 0;       // decision-tree depth over all of σ
    double avg_ii = 0.0;    // random-order mean over the instances
    double avg_ii_err = 0.0;
    double avg_iii = 0.0;   // fully-random mean over the instances
    double avg_iii_err = 0.0;
    std::uint64_t seed = 0;
};

struct ComplexityReport {
    std::string problem_name;
    std::uint64_t seed = 0;
    int baseline = 0;
    std::optional<double> k_n;
    std::vector<ComplexityRecord> records;  // one per b_c, σ order
};

ComplexityReport build_report(const OracleProblem& problem, std::uint64_t trials,
                              std::uint64_t seed, const SearchBudget& budget = {});

}  // namespace oraclesim
