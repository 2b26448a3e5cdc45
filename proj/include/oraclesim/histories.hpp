// The sum-over-classical-histories view: basis-component trajectories
// through the labeled steps, connecting each input branch to the output
// components it feeds. Each history carries the argument it evaluated the
// function for, and is annotated with the advanced-knowledge subset that
// makes its single evaluation sufficient.
#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "oraclesim/circuits.hpp"

namespace oraclesim {

struct HistoryHop {
    std::string step_label;  // "input" for the starting component
    BitString a;
    BitString v;             // value register content (basis component)
    Complex amplitude;       // transition factor into this component
};

struct ClassicalHistory {
    BitString setting;
    std::vector<HistoryHop> path;
    Complex amplitude;                // product along the path
    std::optional<BitString> queried_argument;

    enum class AkKind { none, rule, pair };
    AkKind ak_kind = AkKind::none;
    std::vector<int> ak_subset;       // setting indices
    bool direct_determination = false;
};

struct HistoryBudget {
    std::size_t max_paths = 500'000;
};

// All basis-component paths with a nonzero amplitude product, ending on a
// component the run's output actually populates. The setting is constant
// along each path.
std::vector<ClassicalHistory> enumerate_histories(const AlgorithmRun& run,
                                                  const HistoryBudget& budget = {});

// Assigns the advanced-knowledge subset consistent with the history: the
// first rule instance (deterministic order) in which the history's one
// query settles the solution. Runs with several evaluations are left
// unannotated. When no rule instance fits, the subset falls back to the
// two-element {setting, queried argument} reading, which exists for the
// drawer-search family.
ClassicalHistory annotate_advanced_knowledge(const OracleProblem& problem,
                                             ClassicalHistory history);

// True when, inside `subset`, evaluating the function at `arg` pins the
// solution for the given setting, and no zero-query determination existed.
bool one_query_completes(const OracleProblem& problem, const std::vector<int>& subset,
                         const BitString& setting, const BitString& arg);

// Sum of amplitude products by output component, one vector per branch in
// the run's branch order; equals the direct simulation when complete.
std::vector<Vec> recombine_histories(const AlgorithmRun& run,
                                     const std::vector<ClassicalHistory>& histories);

// One line per path: step labels, component kets, amplitude.
std::string format_history(const ClassicalHistory& h);

}  // namespace oraclesim
