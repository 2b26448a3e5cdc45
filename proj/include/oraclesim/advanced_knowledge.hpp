// The advanced knowledge rule: split the setting-register measurement into
// two partial measurements that (I) together select the chosen setting
// without redundancies and (II) evenly contribute to the selection of the
// solution. Each accepted side projects σ onto a subset — an instance of
// the solver's advanced knowledge — and for table problems those subsets
// are in one-to-one correspondence with the good half tables.
#pragma once

#include <string>
#include <vector>

#include "oraclesim/problems.hpp"

namespace oraclesim {

struct SplitCandidate {
    std::vector<int> cells_i, cells_j;  // disjoint, covering, both nonempty
    std::vector<int> sigma_i, sigma_j;  // setting indices, ascending
    double h_i = 0.0, h_j = 0.0;        // remaining solution entropy (rule view)
    double h_string_i = 0.0, h_string_j = 0.0;  // same over the stored strings
    bool accepted = false;
    std::string reject_reason;  // "", "uneven", "redundant"
};

struct SplitEnumeration {
    std::vector<SplitCandidate> candidates;  // ascending by cells_i mask
    double total_rule_entropy = 0.0;         // solution entropy over all of σ
    double total_string_entropy = 0.0;

    std::vector<const SplitCandidate*> accepted() const;
};

// Iterates every bipartition of the cell set (each unordered pair once).
// Condition (I) holds for every bipartition by construction; a candidate is
// accepted iff the two sides leave equal and nonzero solution entropy.
// An empty acceptance list is a valid, reportable outcome.
SplitEnumeration enumerate_splits(const OracleProblem& problem, const BitString& b_c);

struct AkInstance {
    std::vector<int> subset;                 // setting indices, ascending
    std::vector<std::vector<int>> origins;   // cell sets it came from
    bool has_half_origin = false;            // some origin has half the cells
};

// Both sides of every accepted split, deduplicated by subset, in a
// deterministic order (lexicographic by the smallest origin cell mask).
std::vector<AkInstance> advanced_knowledge_instances(const OracleProblem& problem,
                                                     const BitString& b_c);

// Half-size cell subsets from which the solution cannot yet be inferred:
// the settings agreeing with b_c on the subset carry at least two distinct
// solution labels. Only meaningful for table-structured problems.
std::vector<std::vector<int>> good_half_tables(const OracleProblem& problem,
                                               const BitString& b_c);

// The family's textbook test of a half table (all values equal for
// constant/balanced tables, all distinct for periodic ones). Necessary for
// goodness; at some sizes not sufficient, since a half with the right value
// pattern can still pin the solution.
bool half_table_value_criterion(const OracleProblem& problem, const BitString& b_c,
                                const std::vector<int>& cells);

struct CrosscheckReport {
    bool applicable = false;
    std::string note;
    int good_halves = 0;
    int half_origin_instances = 0;
    int value_criterion_halves = 0;  // halves passing the value test alone
    bool one_to_one = false;         // distinct halves give distinct subsets
    bool exact_match = false;        // subsets from halves == rule instances
    std::vector<std::string> mismatches;
};

// Verifies that good half tables and rule-derived subsets (of half-cell
// origin) induce the same family of σ-subsets.
CrosscheckReport crosscheck_shortcut(const OracleProblem& problem, const BitString& b_c);

// Shannon entropy (bits) of the rule-solution values over the given
// settings, uniform weights.
double subset_solution_entropy(const OracleProblem& problem,
                               const std::vector<int>& subset);

// Settings agreeing with b_c on every listed cell, ascending indices.
std::vector<int> agreement_subset(const OracleProblem& problem, const BitString& b_c,
                                  const std::vector<int>& cells);

}  // namespace oraclesim
