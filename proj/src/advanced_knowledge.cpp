#include "oraclesim/advanced_knowledge.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "oraclesim/ensemble.hpp"

namespace oraclesim {

namespace {

constexpr double kEntropyTol = 1e-9;

std::vector<int> mask_to_cells(std::uint32_t mask, int cell_count) {
    std::vector<int> out;
    for (int c = 0; c < cell_count; ++c) {
        if (mask & (std::uint32_t{1} << c)) out.push_back(c);
    }
    return out;
}

double entropy_over(const OracleProblem& p, const std::vector<int>& subset,
                    bool rule_view) {
    std::map<std::uint64_t, int> counts;
    for (int idx : subset) {
        BitString s = rule_view ? p.rule_solution(idx) : p.solution(idx);
        ++counts[s.value()];
    }
    std::vector<double> probs;
    probs.reserve(counts.size());
    for (auto& [value, count] : counts) {
        probs.push_back(static_cast<double>(count) /
                        static_cast<double>(subset.size()));
    }
    return shannon_bits(probs);
}

}  // namespace

double subset_solution_entropy(const OracleProblem& problem,
                               const std::vector<int>& subset) {
    return entropy_over(problem, subset, true);
}

std::vector<int> agreement_subset(const OracleProblem& problem, const BitString& b_c,
                                  const std::vector<int>& cells) {
    std::vector<int> out;
    for (int i = 0; i < problem.setting_count(); ++i) {
        if (agrees_on_cells(problem.settings()[static_cast<size_t>(i)], b_c,
                            problem.cells(), cells)) {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<const SplitCandidate*> SplitEnumeration::accepted() const {
    std::vector<const SplitCandidate*> out;
    for (const SplitCandidate& c : candidates) {
        if (c.accepted) out.push_back(&c);
    }
    return out;
}

SplitEnumeration enumerate_splits(const OracleProblem& problem, const BitString& b_c) {
    if (!problem.setting_index(b_c)) {
        throw std::invalid_argument(fmt::format("setting {} not in σ", b_c.str()));
    }
    const int cc = problem.cells().cell_count;
    if (cc > 20) {
        throw std::invalid_argument("cell set too large to enumerate bipartitions");
    }
    SplitEnumeration result;
    std::vector<int> everything(static_cast<size_t>(problem.setting_count()));
    for (int i = 0; i < problem.setting_count(); ++i) everything[static_cast<size_t>(i)] = i;
    result.total_rule_entropy = entropy_over(problem, everything, true);
    result.total_string_entropy = entropy_over(problem, everything, false);

    if (cc < 2) return result;  // no bipartition exists
    const std::uint32_t full = (std::uint32_t{1} << cc) - 1;
    // Fixing cell 0 on the i-side walks each unordered bipartition once.
    for (std::uint32_t mask = 1; mask < full; mask += 2) {
        SplitCandidate cand;
        cand.cells_i = mask_to_cells(mask, cc);
        cand.cells_j = mask_to_cells(full & ~mask, cc);
        cand.sigma_i = agreement_subset(problem, b_c, cand.cells_i);
        cand.sigma_j = agreement_subset(problem, b_c, cand.cells_j);
        cand.h_i = entropy_over(problem, cand.sigma_i, true);
        cand.h_j = entropy_over(problem, cand.sigma_j, true);
        cand.h_string_i = entropy_over(problem, cand.sigma_i, false);
        cand.h_string_j = entropy_over(problem, cand.sigma_j, false);
        if (std::abs(cand.h_i - cand.h_j) >= kEntropyTol) {
            cand.accepted = false;
            cand.reject_reason = "uneven";
        } else if (cand.h_i <= kEntropyTol) {
            // Either partial measurement alone already pins the solution;
            // the two selections are redundant with one another.
            cand.accepted = false;
            cand.reject_reason = "redundant";
        } else {
            cand.accepted = true;
        }
        result.candidates.push_back(std::move(cand));
    }
    return result;
}

std::vector<AkInstance> advanced_knowledge_instances(const OracleProblem& problem,
                                                     const BitString& b_c) {
    SplitEnumeration splits = enumerate_splits(problem, b_c);
    const int half = problem.cells().cell_count / 2;
    std::map<std::vector<int>, AkInstance> by_subset;
    for (const SplitCandidate& c : splits.candidates) {
        if (!c.accepted) continue;
        for (const auto* side : {&c.cells_i, &c.cells_j}) {
            const std::vector<int>& sigma = side == &c.cells_i ? c.sigma_i : c.sigma_j;
            auto [it, fresh] = by_subset.try_emplace(sigma);
            if (fresh) it->second.subset = sigma;
            it->second.origins.push_back(*side);
            if (static_cast<int>(side->size()) == half &&
                problem.cells().cell_count % 2 == 0) {
                it->second.has_half_origin = true;
            }
        }
    }
    std::vector<AkInstance> out;
    out.reserve(by_subset.size());
    for (auto& [subset, inst] : by_subset) {
        std::sort(inst.origins.begin(), inst.origins.end());
        out.push_back(std::move(inst));
    }
    // Deterministic order: by smallest origin cell set, then by subset.
    std::sort(out.begin(), out.end(), [](const AkInstance& a, const AkInstance& b) {
        if (a.origins.front() != b.origins.front()) {
            return a.origins.front() < b.origins.front();
        }
        return a.subset < b.subset;
    });
    return out;
}

std::vector<std::vector<int>> good_half_tables(const OracleProblem& problem,
                                               const BitString& b_c) {
    if (!problem.table_structured()) {
        throw std::invalid_argument(
            "half-table analysis needs a problem whose settings are function tables");
    }
    if (!problem.setting_index(b_c)) {
        throw std::invalid_argument(fmt::format("setting {} not in σ", b_c.str()));
    }
    const int cc = problem.cells().cell_count;
    if (cc % 2 != 0) {
        throw std::invalid_argument("odd cell count has no half tables");
    }
    std::vector<std::vector<int>> out;
    const std::uint32_t full = (std::uint32_t{1} << cc) - 1;
    for (std::uint32_t mask = 1; mask < full; ++mask) {
        if (std::popcount(mask) != cc / 2) continue;
        std::vector<int> cells = mask_to_cells(mask, cc);
        std::vector<int> sigma = agreement_subset(problem, b_c, cells);
        if (entropy_over(problem, sigma, true) > kEntropyTol) {
            out.push_back(std::move(cells));
        }
    }
    return out;
}

bool half_table_value_criterion(const OracleProblem& problem, const BitString& b_c,
                                const std::vector<int>& cells) {
    std::set<std::uint64_t> values;
    for (int c : cells) {
        values.insert(cell_value(b_c, problem.cells(), c).value());
    }
    switch (problem.family()) {
        case Family::deutsch_jozsa:
            return values.size() == 1;  // all values the same
        case Family::simon:
            return values.size() == cells.size();  // all values distinct
        default:
            // No textbook criterion; fall back to non-inferability.
            return entropy_over(problem, agreement_subset(problem, b_c, cells), true) >
                   kEntropyTol;
    }
}

CrosscheckReport crosscheck_shortcut(const OracleProblem& problem,
                                     const BitString& b_c) {
    CrosscheckReport report;
    if (!problem.table_structured()) {
        report.applicable = false;
        report.note = "shortcut not applicable: settings are not function tables";
        return report;
    }
    report.applicable = true;

    std::vector<std::vector<int>> halves = good_half_tables(problem, b_c);
    report.good_halves = static_cast<int>(halves.size());

    const int cc = problem.cells().cell_count;
    const std::uint32_t full = (std::uint32_t{1} << cc) - 1;
    for (std::uint32_t mask = 1; mask < full; ++mask) {
        if (std::popcount(mask) != cc / 2) continue;
        std::vector<int> cells = mask_to_cells(mask, cc);
        if (half_table_value_criterion(problem, b_c, cells)) {
            ++report.value_criterion_halves;
        }
    }

    std::set<std::vector<int>> from_halves;
    for (const auto& cells : halves) {
        from_halves.insert(agreement_subset(problem, b_c, cells));
    }
    report.one_to_one = from_halves.size() == halves.size();

    std::set<std::vector<int>> from_rule;
    for (const AkInstance& inst : advanced_knowledge_instances(problem, b_c)) {
        if (inst.has_half_origin) from_rule.insert(inst.subset);
    }
    report.half_origin_instances = static_cast<int>(from_rule.size());
    report.exact_match = from_halves == from_rule;
    if (!report.exact_match) {
        for (const auto& s : from_halves) {
            if (!from_rule.contains(s)) {
                report.mismatches.push_back(
                    fmt::format("half-table subset of size {} missing from the rule", s.size()));
            }
        }
        for (const auto& s : from_rule) {
            if (!from_halves.contains(s)) {
                report.mismatches.push_back(
                    fmt::format("rule subset of size {} has no good half table", s.size()));
            }
        }
    }
    return report;
}

}  // namespace oraclesim
