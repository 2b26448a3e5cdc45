#include "oraclesim/histories.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "oraclesim/advanced_knowledge.hpp"

namespace oraclesim {

namespace {

constexpr double kAmpTol = 1e-12;

struct Component {
    int a;
    int v;  // -1 when V rides along as the fixed kickback state
};

int a_bits_of_dim(int dim_a) {
    int bits = 0;
    while ((1 << bits) < dim_a) ++bits;
    return bits;
}

int dot_bits(int x, int y) { return std::popcount(static_cast<unsigned>(x & y)) & 1; }

struct Enumerator {
    const AlgorithmRun& run;
    const HistoryBudget& budget;
    bool kickback;  // V is a one-bit register held in (|0⟩−|1⟩)/√2
    std::vector<ClassicalHistory> out;

    void walk(const Branch& branch, size_t step_idx, Component comp, Complex amp,
              int query_count, int first_query_a, ClassicalHistory& partial) {
        if (std::abs(amp) < kAmpTol) return;
        if (step_idx == run.steps.size()) {
            // Post-select on components the output actually populates.
            const Branch* final_branch = run.output().find(branch.setting);
            if (final_branch == nullptr) return;
            const int dv = run.output().dim_v();
            double weight =
                kickback
                    ? final_branch->av.segment(comp.a * dv, dv).squaredNorm()
                    : std::norm(final_branch->av[comp.a * dv + comp.v]);
            if (weight < kAmpTol) return;
            if (out.size() >= budget.max_paths) {
                throw std::runtime_error(
                    fmt::format("history enumeration exceeded {} paths",
                                budget.max_paths));
            }
            ClassicalHistory h = partial;
            h.amplitude = amp;
            if (query_count == 1) {
                h.queried_argument = BitString(
                    static_cast<std::uint64_t>(first_query_a),
                    a_bits_of_dim(run.output().dim_a()));
            }
            out.push_back(std::move(h));
            return;
        }
        const UnitaryStep& step = run.steps[step_idx];
        if (step.kind == UnitaryStep::Kind::setting_permutation) {
            throw std::invalid_argument(
                "histories are defined over the solver's steps, not setting relabelings");
        }
        const int dim_a = run.output().dim_a();
        const int a_bits = a_bits_of_dim(dim_a);
        auto push = [&](Component next, Complex factor, int q_count, int q_first) {
            if (std::abs(factor) < kAmpTol) return;
            partial.path.push_back(
                {step.label, BitString(static_cast<std::uint64_t>(next.a), a_bits),
                 next.v < 0 ? BitString()
                            : BitString(static_cast<std::uint64_t>(next.v),
                                        run.problem.value_width()),
                 factor});
            walk(branch, step_idx + 1, next, amp * factor, q_count, q_first, partial);
            partial.path.pop_back();
        };
        if (step.label == "H_A") {
            const double scale = std::pow(2.0, -a_bits / 2.0);
            for (int a2 = 0; a2 < dim_a; ++a2) {
                double sign = dot_bits(comp.a, a2) ? -1.0 : 1.0;
                push({a2, comp.v}, scale * sign, query_count, first_query_a);
            }
        } else if (step.label == "U_f") {
            auto idx = run.problem.setting_index(branch.setting);
            const std::uint32_t f =
                run.problem.value(*idx, static_cast<std::uint64_t>(comp.a));
            int q_first = query_count == 0 ? comp.a : first_query_a;
            if (kickback) {
                push({comp.a, comp.v}, f ? -1.0 : 1.0, query_count + 1, q_first);
            } else {
                push({comp.a, comp.v ^ static_cast<int>(f)}, 1.0, query_count + 1,
                     q_first);
            }
        } else if (step.label == "Im_A") {
            for (int a2 = 0; a2 < dim_a; ++a2) {
                double factor = 2.0 / static_cast<double>(dim_a) - (a2 == comp.a ? 1.0 : 0.0);
                push({a2, comp.v}, factor, query_count, first_query_a);
            }
        } else if (step.label == "U_s") {
            auto idx = run.problem.setting_index(branch.setting);
            int s = static_cast<int>(run.problem.solution(*idx).value());
            push({comp.a ^ s, comp.v}, 1.0, query_count, first_query_a);
        } else {
            throw std::invalid_argument(
                fmt::format("history enumeration does not know step '{}'", step.label));
        }
    }
};

}  // namespace

std::vector<ClassicalHistory> enumerate_histories(const AlgorithmRun& run,
                                                  const HistoryBudget& budget) {
    const DephasedEnsemble& input = run.trace.front().state;
    bool kickback = run.problem.family() == Family::grover ||
                    run.problem.family() == Family::deutsch_jozsa;
    Enumerator en{run, budget, kickback, {}};
    const int a_bits = a_bits_of_dim(input.dim_a());
    for (const Branch& b : input.branches()) {
        ClassicalHistory partial;
        partial.setting = b.setting;
        Component start{0, kickback ? -1 : 0};
        partial.path.push_back({"input", BitString::zeros(a_bits),
                                kickback ? BitString()
                                         : BitString::zeros(run.problem.value_width()),
                                1.0});
        en.walk(b, 0, start, 1.0, 0, -1, partial);
    }
    return std::move(en.out);
}

bool one_query_completes(const OracleProblem& problem, const std::vector<int>& subset,
                         const BitString& setting, const BitString& arg) {
    auto sidx = problem.setting_index(setting);
    if (!sidx) return false;
    BitString first = problem.rule_solution(subset.front());
    bool undetermined = false;
    for (int i : subset) {
        if (problem.rule_solution(i) != first) {
            undetermined = true;
            break;
        }
    }
    if (!undetermined) return false;  // nothing left to determine
    const std::uint32_t observed = problem.value(*sidx, arg.value());
    std::optional<BitString> sol;
    for (int i : subset) {
        if (problem.value(i, arg.value()) != observed) continue;
        BitString s = problem.rule_solution(i);
        if (!sol) {
            sol = s;
        } else if (*sol != s) {
            return false;
        }
    }
    return sol.has_value();
}

ClassicalHistory annotate_advanced_knowledge(const OracleProblem& problem,
                                             ClassicalHistory history) {
    history.ak_kind = ClassicalHistory::AkKind::none;
    history.ak_subset.clear();
    history.direct_determination = false;
    if (!history.queried_argument) return history;
    const BitString& arg = *history.queried_argument;
    history.direct_determination =
        arg.width() == history.setting.width() && arg == history.setting;
    for (const AkInstance& inst :
         advanced_knowledge_instances(problem, history.setting)) {
        if (one_query_completes(problem, inst.subset, history.setting, arg)) {
            history.ak_kind = ClassicalHistory::AkKind::rule;
            history.ak_subset = inst.subset;
            return history;
        }
    }
    // No cell-aligned instance fits; fall back to the two-element subset
    // {setting, queried argument} when the argument names a setting.
    if (arg.width() == history.setting.width()) {
        auto a_idx = problem.setting_index(arg);
        auto s_idx = problem.setting_index(history.setting);
        if (a_idx && s_idx && *a_idx != *s_idx) {
            std::vector<int> pair{*s_idx, *a_idx};
            std::sort(pair.begin(), pair.end());
            if (one_query_completes(problem, pair, history.setting, arg)) {
                history.ak_kind = ClassicalHistory::AkKind::pair;
                history.ak_subset = std::move(pair);
            }
        }
    }
    return history;
}

std::vector<Vec> recombine_histories(const AlgorithmRun& run,
                                     const std::vector<ClassicalHistory>& histories) {
    const DephasedEnsemble& out = run.output();
    bool kickback = run.problem.family() == Family::grover ||
                    run.problem.family() == Family::deutsch_jozsa;
    std::vector<Vec> sums;
    sums.reserve(out.branches().size());
    for (size_t i = 0; i < out.branches().size(); ++i) {
        sums.emplace_back(Vec::Zero(out.dim_av()));
    }
    Vec v_part = kickback_v();
    for (const ClassicalHistory& h : histories) {
        const HistoryHop& last = h.path.back();
        size_t bi = 0;
        for (; bi < out.branches().size(); ++bi) {
            if (out.branches()[bi].setting == h.setting) break;
        }
        if (bi == out.branches().size()) continue;
        int a = static_cast<int>(last.a.value());
        if (kickback) {
            sums[bi].segment(a * out.dim_v(), out.dim_v()) += h.amplitude * v_part;
        } else {
            sums[bi][a * out.dim_v() + static_cast<int>(last.v.value())] += h.amplitude;
        }
    }
    return sums;
}

std::string format_history(const ClassicalHistory& h) {
    std::string out = fmt::format("b={}", h.setting.str());
    for (const HistoryHop& hop : h.path) {
        if (hop.step_label == "input") {
            out += fmt::format("  |{}>_B|{}>_A", h.setting.str(), hop.a.str());
        } else {
            out += fmt::format(" --{}--> |{}>_B|{}>_A", hop.step_label, h.setting.str(),
                               hop.a.str());
        }
        if (!hop.v.empty()) out += fmt::format("|{}>_V", hop.v.str());
    }
    out += fmt::format("  amp={:+.6f}{:+.6f}i", h.amplitude.real(), h.amplitude.imag());
    if (h.queried_argument) {
        out += fmt::format("  a={}", h.queried_argument->str());
    }
    return out;
}

}  // namespace oraclesim
