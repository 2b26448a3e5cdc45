#include "oraclesim/circuits.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "oraclesim/query_complexity.hpp"
#include "oraclesim/rng.hpp"

namespace oraclesim {

Mat UnitaryStep::dense(const BitString& setting, int dim_av) const {
    if (kind != Kind::branch_unitary) {
        throw std::logic_error("setting permutations have no A⊗V matrix");
    }
    Mat m(dim_av, dim_av);
    for (int j = 0; j < dim_av; ++j) {
        Vec e = Vec::Zero(dim_av);
        e[j] = 1.0;
        fwd(setting, e);
        m.col(j) = e;
    }
    return m;
}

DephasedEnsemble apply_step(const DephasedEnsemble& state, const UnitaryStep& step) {
    std::vector<Branch> out;
    out.reserve(state.branches().size());
    if (step.kind == UnitaryStep::Kind::setting_permutation) {
        for (const Branch& b : state.branches()) {
            out.push_back({step.perm(b.setting), b.av, b.weight});
        }
    } else {
        for (const Branch& b : state.branches()) {
            Vec av = b.av;
            step.fwd(b.setting, av);
            out.push_back({b.setting, std::move(av), b.weight});
        }
    }
    return DephasedEnsemble(std::move(out), state.dim_a(), state.dim_v());
}

DephasedEnsemble apply_step_inverse(const DephasedEnsemble& state,
                                    const UnitaryStep& step) {
    std::vector<Branch> out;
    out.reserve(state.branches().size());
    if (step.kind == UnitaryStep::Kind::setting_permutation) {
        for (const Branch& b : state.branches()) {
            out.push_back({step.perm_inv(b.setting), b.av, b.weight});
        }
    } else {
        for (const Branch& b : state.branches()) {
            Vec av = b.av;
            step.inv(b.setting, av);
            out.push_back({b.setting, std::move(av), b.weight});
        }
    }
    return DephasedEnsemble(std::move(out), state.dim_a(), state.dim_v());
}

UnitaryStep hadamard_a(int a_bits, int dim_v) {
    const int dim_a = 1 << a_bits;
    auto apply = [a_bits, dim_a, dim_v](const BitString&, Vec& av) {
        const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
        for (int bit = 0; bit < a_bits; ++bit) {
            const int stride = 1 << bit;
            for (int a = 0; a < dim_a; ++a) {
                if ((a & stride) != 0) continue;
                for (int v = 0; v < dim_v; ++v) {
                    Complex lo = av[a * dim_v + v];
                    Complex hi = av[(a | stride) * dim_v + v];
                    av[a * dim_v + v] = inv_sqrt2 * (lo + hi);
                    av[(a | stride) * dim_v + v] = inv_sqrt2 * (lo - hi);
                }
            }
        }
    };
    UnitaryStep s;
    s.label = "H_A";
    s.fwd = apply;
    s.inv = apply;  // H is an involution
    return s;
}

UnitaryStep u_f(const OracleProblem& problem, OracleMode mode) {
    if (mode == OracleMode::phase_kickback && problem.value_width() != 1) {
        throw std::invalid_argument("phase kickback needs one-bit function values");
    }
    const int dim_a = problem.arg_count();
    const int dim_v = 1 << problem.value_width();
    // Copy what the closure needs; problems are immutable values.
    OracleProblem p = problem;
    auto apply = [p, dim_a, dim_v](const BitString& setting, Vec& av) {
        auto idx = p.setting_index(setting);
        if (!idx) {
            throw std::invalid_argument(
                fmt::format("function evaluation for setting {} outside σ",
                            setting.str()));
        }
        for (int a = 0; a < dim_a; ++a) {
            const std::uint32_t f = p.value(*idx, static_cast<std::uint64_t>(a));
            if (f == 0) continue;
            // |v⟩ → |v ⊕ f⟩ within the a-block: a permutation of V entries.
            Vec block = av.segment(a * dim_v, dim_v);
            for (int v = 0; v < dim_v; ++v) {
                av[a * dim_v + (v ^ static_cast<int>(f))] = block[v];
            }
        }
    };
    UnitaryStep s;
    s.label = "U_f";
    s.fwd = apply;
    s.inv = apply;  // xor with f is an involution
    return s;
}

UnitaryStep inversion_about_mean(int a_bits, int dim_v) {
    const int dim_a = 1 << a_bits;
    auto apply = [dim_a, dim_v](const BitString&, Vec& av) {
        for (int v = 0; v < dim_v; ++v) {
            Complex sum = 0.0;
            for (int a = 0; a < dim_a; ++a) sum += av[a * dim_v + v];
            const Complex twice_mean = 2.0 * sum / static_cast<double>(dim_a);
            for (int a = 0; a < dim_a; ++a) {
                av[a * dim_v + v] = twice_mean - av[a * dim_v + v];
            }
        }
    };
    UnitaryStep s;
    s.label = "Im_A";
    s.fwd = apply;
    s.inv = apply;  // reflection
    return s;
}

UnitaryStep u_b(std::string label, std::function<BitString(const BitString&)> perm,
                std::function<BitString(const BitString&)> perm_inv) {
    UnitaryStep s;
    s.label = std::move(label);
    s.kind = UnitaryStep::Kind::setting_permutation;
    s.perm = std::move(perm);
    s.perm_inv = std::move(perm_inv);
    return s;
}

UnitaryStep u_b_xor_mask(const BitString& mask) {
    auto f = [mask](const BitString& b) { return b ^ mask; };
    return u_b(fmt::format("U_B[xor {}]", mask.str()), f, f);
}

UnitaryStep u_b_transposition(const BitString& x, const BitString& y) {
    auto f = [x, y](const BitString& b) { return b == x ? y : (b == y ? x : b); };
    return u_b(fmt::format("U_B[{}<->{}]", x.str(), y.str()), f, f);
}

UnitaryStep u_b_identity() {
    auto f = [](const BitString& b) { return b; };
    return u_b("U_B[id]", f, f);
}

UnitaryStep canonical_solution_step(const OracleProblem& problem) {
    OracleProblem p = problem;
    const int dim_v = 1;
    const int dim_a = 1 << p.solution_width();
    auto apply = [p, dim_a, dim_v](const BitString& setting, Vec& av) {
        auto idx = p.setting_index(setting);
        if (!idx) {
            throw std::invalid_argument("solution oracle for a setting outside σ");
        }
        const int s = static_cast<int>(p.solution(*idx).value());
        Vec moved = Vec::Zero(av.size());
        for (int a = 0; a < dim_a; ++a) {
            moved[((a ^ s) * dim_v)] = av[a * dim_v];
        }
        av = std::move(moved);
    };
    UnitaryStep s;
    s.label = "U_s";
    s.fwd = apply;
    s.inv = apply;
    return s;
}

Vec kickback_v() {
    Vec v(2);
    v[0] = 1.0 / std::numbers::sqrt2;
    v[1] = -1.0 / std::numbers::sqrt2;
    return v;
}

Vec basis_av(int dim_a, int dim_v, int a, int v) {
    Vec out = Vec::Zero(static_cast<Eigen::Index>(dim_a) * dim_v);
    out[a * dim_v + v] = 1.0;
    return out;
}

namespace {

struct Regs {
    int a_bits;
    int dim_a;
    int dim_v;
    Vec av0;  // initial A⊗V state, A all zeros
};

Regs registers_for(const OracleProblem& problem) {
    switch (problem.family()) {
        case Family::grover:
        case Family::deutsch_jozsa: {
            int a_bits = problem.arg_width();
            int dim_a = 1 << a_bits;
            Vec v = kickback_v();
            Vec av = Vec::Zero(static_cast<Eigen::Index>(dim_a) * 2);
            av.segment(0, 2) = v;
            return {a_bits, dim_a, 2, std::move(av)};
        }
        case Family::simon: {
            int a_bits = problem.arg_width();
            int dim_a = 1 << a_bits;
            int dim_v = 1 << problem.value_width();
            return {a_bits, dim_a, dim_v, basis_av(dim_a, dim_v, 0, 0)};
        }
        case Family::custom: {
            int a_bits = problem.solution_width();
            int dim_a = 1 << a_bits;
            return {a_bits, dim_a, 1, basis_av(dim_a, 1, 0, 0)};
        }
    }
    throw std::logic_error("unknown family");
}

}  // namespace

DephasedEnsemble input_state(const OracleProblem& problem) {
    Regs r = registers_for(problem);
    return DephasedEnsemble::uniform(problem.settings(), r.av0, r.dim_a, r.dim_v);
}

DephasedEnsemble canonical_input_state(const OracleProblem& problem) {
    const int dim_a = 1 << problem.solution_width();
    return DephasedEnsemble::uniform(problem.settings(), basis_av(dim_a, 1, 0, 0),
                                     dim_a, 1);
}

std::vector<UnitaryStep> solver_steps(const OracleProblem& problem, int iterations) {
    Regs r = registers_for(problem);
    std::vector<UnitaryStep> steps;
    switch (problem.family()) {
        case Family::grover: {
            if (iterations < 0) {
                iterations = static_cast<int>(
                    std::lround(grover_k(problem.arg_width())));
            }
            steps.push_back(hadamard_a(r.a_bits, r.dim_v));
            for (int k = 0; k < iterations; ++k) {
                steps.push_back(u_f(problem, OracleMode::phase_kickback));
                steps.push_back(inversion_about_mean(r.a_bits, r.dim_v));
            }
            break;
        }
        case Family::deutsch_jozsa:
            steps.push_back(hadamard_a(r.a_bits, r.dim_v));
            steps.push_back(u_f(problem, OracleMode::phase_kickback));
            steps.push_back(hadamard_a(r.a_bits, r.dim_v));
            break;
        case Family::simon:
            steps.push_back(hadamard_a(r.a_bits, r.dim_v));
            steps.push_back(u_f(problem, OracleMode::xor_accumulate));
            steps.push_back(hadamard_a(r.a_bits, r.dim_v));
            break;
        case Family::custom:
            steps.push_back(canonical_solution_step(problem));
            break;
    }
    return steps;
}

DephasedEnsemble canonical_output_state(const OracleProblem& problem) {
    const int dim_a = 1 << problem.solution_width();
    std::vector<Branch> branches;
    const double w = 1.0 / static_cast<double>(problem.setting_count());
    for (int i = 0; i < problem.setting_count(); ++i) {
        branches.push_back({problem.settings()[static_cast<size_t>(i)],
                            basis_av(dim_a, 1, static_cast<int>(problem.solution(i).value()), 0),
                            w});
    }
    return DephasedEnsemble(std::move(branches), dim_a, 1);
}

DephasedEnsemble canonical_rule_output_state(const OracleProblem& problem) {
    const int dim_a = 1 << problem.rule_solution_width();
    std::vector<Branch> branches;
    const double w = 1.0 / static_cast<double>(problem.setting_count());
    for (int i = 0; i < problem.setting_count(); ++i) {
        branches.push_back(
            {problem.settings()[static_cast<size_t>(i)],
             basis_av(dim_a, 1, static_cast<int>(problem.rule_solution(i).value()), 0),
             w});
    }
    return DephasedEnsemble(std::move(branches), dim_a, 1);
}

namespace {

AlgorithmRun run_steps(const OracleProblem& problem, const BitString& b_c,
                       DephasedEnsemble start, std::vector<UnitaryStep> steps) {
    AlgorithmRun run{problem, b_c, std::move(steps), {}};
    run.trace.push_back({"input", std::move(start)});
    for (const UnitaryStep& s : run.steps) {
        run.trace.push_back({"after " + s.label,
                             apply_step(run.trace.back().state, s)});
    }
    return run;
}

}  // namespace

AlgorithmRun run_collapsed(const OracleProblem& problem, const BitString& b_c,
                           int iterations) {
    if (!problem.setting_index(b_c)) {
        throw std::invalid_argument(fmt::format("setting {} not in σ", b_c.str()));
    }
    Regs r = registers_for(problem);
    DephasedEnsemble start(std::vector<Branch>{{b_c, r.av0, 1.0}}, r.dim_a, r.dim_v);
    return run_steps(problem, b_c, std::move(start), solver_steps(problem, iterations));
}

AlgorithmRun run_postponed(const OracleProblem& problem, const BitString& b_c,
                           int iterations) {
    if (!problem.setting_index(b_c)) {
        throw std::invalid_argument(fmt::format("setting {} not in σ", b_c.str()));
    }
    return run_steps(problem, b_c, input_state(problem),
                     solver_steps(problem, iterations));
}

GroverRun run_grover(int n, int iterations, const BitString& b_c) {
    OracleProblem p = OracleProblem::make_grover(n);
    AlgorithmRun run = run_collapsed(p, b_c, iterations);
    const DephasedEnsemble& out = run.output();
    double prob = 0.0;
    for (const Branch& b : out.branches()) {
        prob += b.weight *
                b.av.segment(static_cast<int>(b_c.value()) * out.dim_v(), out.dim_v())
                    .squaredNorm();
    }
    return {std::move(run), prob};
}

double grover_success_closed_form(int n, int iterations) {
    double theta = std::asin(std::pow(2.0, -n / 2.0));
    double s = std::sin((2.0 * iterations + 1.0) * theta);
    return s * s;
}

DeutschJozsaRun run_deutsch_jozsa(int n, const BitString& b_c) {
    OracleProblem p = OracleProblem::make_deutsch_jozsa(n);
    AlgorithmRun run = run_collapsed(p, b_c);
    const DephasedEnsemble& out = run.output();
    const Branch& br = out.branches().front();
    int best = 0;
    double best_p = -1.0;
    for (int a = 0; a < out.dim_a(); ++a) {
        double pa = br.av.segment(a * out.dim_v(), out.dim_v()).squaredNorm();
        if (pa > best_p + kStateTol) {
            best_p = pa;
            best = a;
        }
    }
    BitString outcome(static_cast<std::uint64_t>(best), n);
    return {std::move(run), outcome, best_p, best_p >= 1.0 - 1e-9, !outcome.all_zero()};
}

std::map<BitString, int> run_simon_quantum_part(int n, const BitString& b_c,
                                                int shots, std::uint64_t rng_seed) {
    OracleProblem p = OracleProblem::make_simon(n);
    AlgorithmRun run = run_collapsed(p, b_c);
    std::map<BitString, int> counts;
    for (int s = 0; s < shots; ++s) {
        auto [outcome, rest] = measure_a(
            run.output(), split_seed(rng_seed, "simon-shot", static_cast<std::uint64_t>(s)));
        (void)rest;
        ++counts[outcome];
    }
    return counts;
}

}  // namespace oraclesim
