#include "oraclesim/query_complexity.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <map>
#include <numbers>
#include <unordered_map>

#include <fmt/format.h>

#include "oraclesim/advanced_knowledge.hpp"
#include "oraclesim/rng.hpp"

namespace oraclesim {

double grover_k(int n) {
    if (n < 1) {
        throw std::invalid_argument("bit count must be positive");
    }
    return std::numbers::pi / (4.0 * std::asin(std::pow(2.0, -n / 2.0))) - 0.5;
}

namespace {

bool determined(const OracleProblem& p, const std::vector<int>& scope) {
    if (scope.empty()) {
        throw std::logic_error("empty scope");
    }
    BitString first = p.rule_solution(scope.front());
    for (int idx : scope) {
        if (p.rule_solution(idx) != first) return false;
    }
    return true;
}

struct MinimaxSearch {
    const OracleProblem& p;
    const SearchBudget& budget;
    std::uint64_t nodes = 0;
    std::unordered_map<std::string, int> memo;

    static std::string key(const std::vector<int>& scope,
                           const std::vector<std::uint64_t>& used) {
        std::string k;
        k.reserve(scope.size() * 4 + used.size() * 8 + 1);
        for (int s : scope) {
            k.push_back(static_cast<char>(s & 0xff));
            k.push_back(static_cast<char>((s >> 8) & 0xff));
            k.push_back(static_cast<char>((s >> 16) & 0xff));
        }
        k.push_back('|');
        for (std::uint64_t a : used) {
            for (int i = 0; i < 8; ++i) {
                k.push_back(static_cast<char>((a >> (8 * i)) & 0xff));
            }
        }
        return k;
    }

    int depth(const std::vector<int>& scope, std::vector<std::uint64_t>& used,
              int* best_arg_out) {
        if (determined(p, scope)) return 0;
        if (++nodes > budget.max_nodes) {
            throw BudgetExceeded(
                fmt::format("decision-tree search exceeded {} nodes", budget.max_nodes));
        }
        std::string k = key(scope, used);
        if (best_arg_out == nullptr) {
            auto it = memo.find(k);
            if (it != memo.end()) return it->second;
        }
        int best = std::numeric_limits<int>::max();
        int best_arg = -1;
        const std::uint64_t args = std::uint64_t{1} << p.arg_width();
        for (std::uint64_t a = 0; a < args; ++a) {
            if (std::binary_search(used.begin(), used.end(), a)) continue;
            // Partition the scope by the observed value.
            std::map<std::uint32_t, std::vector<int>> groups;
            for (int idx : scope) groups[p.value(idx, a)].push_back(idx);
            if (groups.size() < 2) continue;  // uninformative, never optimal
            auto pos = std::lower_bound(used.begin(), used.end(), a);
            used.insert(pos, a);
            int worst = 0;
            for (auto& [value, group] : groups) {
                worst = std::max(worst, 1 + depth(group, used, nullptr));
                if (worst >= best) break;  // cannot improve this argument
            }
            used.erase(std::find(used.begin(), used.end(), a));
            if (worst < best) {
                best = worst;
                best_arg = static_cast<int>(a);
            }
        }
        if (best == std::numeric_limits<int>::max()) {
            throw std::domain_error(
                "scope contains settings with identical tables but distinct solutions");
        }
        memo.emplace(std::move(k), best);
        if (best_arg_out != nullptr) *best_arg_out = best_arg;
        return best;
    }
};

}  // namespace

DecisionTreeResult min_queries(const OracleProblem& problem,
                               const std::vector<int>& scope,
                               const SearchBudget& budget) {
    if (scope.empty()) {
        throw std::invalid_argument("scope must be nonempty");
    }
    for (int idx : scope) {
        if (idx < 0 || idx >= problem.setting_count()) {
            throw std::invalid_argument(fmt::format("setting index {} out of range", idx));
        }
    }
    std::uint64_t cost = static_cast<std::uint64_t>(scope.size())
                         << problem.arg_width();
    if (cost > budget.max_scope_cost) {
        throw BudgetExceeded(
            fmt::format("scope cost {} exceeds the budget {}", cost,
                        budget.max_scope_cost));
    }
    std::vector<int> sorted = scope;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    MinimaxSearch search{problem, budget};
    std::vector<std::uint64_t> used;
    int best_arg = -1;
    int d = search.depth(sorted, used, &best_arg);
    DecisionTreeResult result;
    result.depth = d;
    if (best_arg >= 0) result.best_first_arg = static_cast<std::uint64_t>(best_arg);
    result.explored = search.nodes;
    return result;
}

PredictedN predicted_n(const OracleProblem& problem, const BitString& b_c,
                       const SearchBudget& budget) {
    PredictedN out;
    for (const AkInstance& inst : advanced_knowledge_instances(problem, b_c)) {
        out.per_instance.push_back(min_queries(problem, inst.subset, budget).depth);
    }
    out.instances = static_cast<int>(out.per_instance.size());
    if (!out.per_instance.empty()) {
        out.n_max = *std::max_element(out.per_instance.begin(), out.per_instance.end());
        out.n_min = *std::min_element(out.per_instance.begin(), out.per_instance.end());
        std::map<int, int> freq;
        for (int d : out.per_instance) ++freq[d];
        int best_count = -1, mode = 0;
        for (auto& [d, c] : freq) {
            if (c > best_count) {
                best_count = c;
                mode = d;
            }
        }
        out.n_mode = mode;
    }
    return out;
}

namespace {

AvgQueries summarize(const std::vector<double>& xs) {
    AvgQueries out;
    out.trials = xs.size();
    if (xs.empty()) return out;
    double sum = 0.0;
    for (double x : xs) sum += x;
    out.mean = sum / static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - out.mean) * (x - out.mean);
    if (xs.size() > 1) {
        var /= static_cast<double>(xs.size() - 1);
        out.stderr_of_mean = std::sqrt(var / static_cast<double>(xs.size()));
    }
    return out;
}

bool informative(const OracleProblem& p, const std::vector<int>& candidates,
                 std::uint64_t a) {
    std::uint32_t first = p.value(candidates.front(), a);
    for (int idx : candidates) {
        if (p.value(idx, a) != first) return true;
    }
    return false;
}

std::vector<int> filter_by(const OracleProblem& p, const std::vector<int>& candidates,
                           std::uint64_t a, std::uint32_t v) {
    std::vector<int> out;
    for (int idx : candidates) {
        if (p.value(idx, a) == v) out.push_back(idx);
    }
    return out;
}

}  // namespace

AvgQueries avg_queries_random_order(const OracleProblem& problem,
                                    const std::vector<int>& scope,
                                    std::uint64_t trials, std::uint64_t rng_seed) {
    if (scope.empty()) {
        throw std::invalid_argument("scope must be nonempty");
    }
    std::vector<double> counts;
    counts.reserve(trials);
    std::vector<std::uint64_t> order(static_cast<size_t>(problem.arg_count()));
    for (std::uint64_t t = 0; t < trials; ++t) {
        Rng rng(split_seed(rng_seed, "random-order", t));
        int truth = scope[rng() % scope.size()];
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<int> candidates = scope;
        int queries = 0;
        for (std::uint64_t a : order) {
            if (determined(problem, candidates)) break;
            if (!informative(problem, candidates, a)) continue;
            ++queries;
            candidates = filter_by(problem, candidates, a, problem.value(truth, a));
        }
        counts.push_back(static_cast<double>(queries));
    }
    return summarize(counts);
}

AvgQueries avg_queries_fully_random(const OracleProblem& problem,
                                    const std::vector<int>& scope,
                                    std::uint64_t trials, std::uint64_t rng_seed) {
    if (scope.empty()) {
        throw std::invalid_argument("scope must be nonempty");
    }
    std::vector<double> counts;
    counts.reserve(trials);
    for (std::uint64_t t = 0; t < trials; ++t) {
        Rng rng(split_seed(rng_seed, "fully-random", t));
        int truth = scope[rng() % scope.size()];
        std::vector<int> candidates = scope;
        int queries = 0;
        while (!determined(problem, candidates)) {
            std::uint64_t a = rng() % static_cast<std::uint64_t>(problem.arg_count());
            ++queries;  // every evaluation counts, repeats included
            candidates = filter_by(problem, candidates, a, problem.value(truth, a));
        }
        counts.push_back(static_cast<double>(queries));
    }
    return summarize(counts);
}

ComplexityReport build_report(const OracleProblem& problem, std::uint64_t trials,
                              std::uint64_t seed, const SearchBudget& budget) {
    ComplexityReport report;
    report.problem_name = problem.name();
    report.seed = seed;
    std::vector<int> everything(static_cast<size_t>(problem.setting_count()));
    for (int i = 0; i < problem.setting_count(); ++i) everything[static_cast<size_t>(i)] = i;
    report.baseline = min_queries(problem, everything, budget).depth;
    if (problem.family() == Family::grover) {
        report.k_n = grover_k(problem.arg_width());
    }
    for (int i = 0; i < problem.setting_count(); ++i) {
        const BitString& b_c = problem.settings()[static_cast<size_t>(i)];
        ComplexityRecord rec;
        rec.problem = problem.name();
        rec.b_c = b_c;
        rec.baseline = report.baseline;
        rec.k_n = report.k_n;
        rec.seed = split_seed(seed, "complexity-bc", static_cast<std::uint64_t>(i));
        PredictedN pn = predicted_n(problem, b_c, budget);
        rec.instances = pn.instances;
        rec.n_max = pn.n_max;
        rec.n_min = pn.n_min;
        rec.n_mode = pn.n_mode;
        // Pool the Monte-Carlo averages across the instances.
        auto instances = advanced_knowledge_instances(problem, b_c);
        std::vector<double> pooled_ii, pooled_iii;
        if (!instances.empty() && trials > 0) {
            std::uint64_t per = std::max<std::uint64_t>(1, trials / instances.size());
            for (size_t k = 0; k < instances.size(); ++k) {
                auto ii = avg_queries_random_order(
                    problem, instances[k].subset, per,
                    split_seed(rec.seed, "avg-ii", k));
                auto iii = avg_queries_fully_random(
                    problem, instances[k].subset, per,
                    split_seed(rec.seed, "avg-iii", k));
                pooled_ii.push_back(ii.mean);
                pooled_iii.push_back(iii.mean);
            }
            AvgQueries ii = summarize(pooled_ii);
            AvgQueries iii = summarize(pooled_iii);
            rec.avg_ii = ii.mean;
            rec.avg_ii_err = ii.stderr_of_mean;
            rec.avg_iii = iii.mean;
            rec.avg_iii_err = iii.stderr_of_mean;
        }
        report.records.push_back(std::move(rec));
    }
    return report;
}

}  // namespace oraclesim
