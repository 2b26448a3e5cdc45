#include "oraclesim/two_time.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

namespace oraclesim {

namespace {

std::vector<int> all_cells(const CellSpec& spec) {
    std::vector<int> out(static_cast<size_t>(spec.cell_count));
    for (int i = 0; i < spec.cell_count; ++i) out[static_cast<size_t>(i)] = i;
    return out;
}

std::vector<int> all_a_bits(int width) {
    std::vector<int> out(static_cast<size_t>(width));
    for (int i = 0; i < width; ++i) out[static_cast<size_t>(i)] = i;
    return out;
}

// U_B mapping the random outcome to the chosen setting: the xor mask when
// it is a permutation of σ, otherwise the transposition.
UnitaryStep choose_u_b(const OracleProblem& problem, const BitString& from,
                       const BitString& to) {
    if (from == to) return u_b_identity();
    BitString mask = from ^ to;
    bool mask_ok = true;
    for (const BitString& s : problem.settings()) {
        if (!problem.setting_index(s ^ mask)) {
            mask_ok = false;
            break;
        }
    }
    if (mask_ok) return u_b_xor_mask(mask);
    return u_b_transposition(from, to);
}

}  // namespace

TwoRepRun build_two_reps(const OracleProblem& problem, const BitString& b_c,
                         const BitString& initial_random_outcome) {
    if (!problem.setting_index(b_c)) {
        throw std::invalid_argument(fmt::format("setting {} not in σ", b_c.str()));
    }
    if (!problem.setting_index(initial_random_outcome)) {
        throw std::invalid_argument(
            fmt::format("initial outcome {} not in σ", initial_random_outcome.str()));
    }
    TwoRepRun run{problem, b_c, initial_random_outcome, {}, {}, {}};
    run.steps.push_back(choose_u_b(problem, initial_random_outcome, b_c));
    // The drawer search carries the quantitative walkthrough, so it runs its
    // literal steps. The other families go through the canonical solution
    // oracle, whose output pairs every setting with its solution word —
    // their literal circuits put something else in A (the periodic quantum
    // part yields strings orthogonal to the period, never the period).
    const bool literal = problem.family() == Family::grover;
    for (UnitaryStep& s : literal ? solver_steps(problem)
                                  : std::vector<UnitaryStep>{
                                        canonical_solution_step(problem)}) {
        run.steps.push_back(std::move(s));
    }

    DephasedEnsemble ini =
        literal ? input_state(problem) : canonical_input_state(problem);

    // Setter: collapse at t0, relabel, solver unitaries, final measurement.
    run.bob_trace.push_back({"t0", ini});
    auto [p0, collapsed] = measure_b_cells(ini, problem.cells(),
                                           all_cells(problem.cells()),
                                           initial_random_outcome);
    (void)p0;
    run.bob_trace.push_back({"t0+", std::move(collapsed)});

    // Solver: the projection of the initial measurement is postponed.
    run.alice_trace.push_back({"t0", ini});
    run.alice_trace.push_back({"t0+", ini});

    for (size_t i = 0; i < run.steps.size(); ++i) {
        std::string label =
            i == 0 ? "t1"
                   : (i + 1 == run.steps.size()
                          ? "t2"
                          : fmt::format("t1+:{}", run.steps[i].label));
        run.bob_trace.push_back(
            {label, apply_step(run.bob_trace.back().state, run.steps[i])});
        run.alice_trace.push_back(
            {label, apply_step(run.alice_trace.back().state, run.steps[i])});
    }

    // Final measurement of A selects the solution of b_c in both traces.
    const BitString& s = problem.solution_of(b_c);
    auto a_bits = all_a_bits(s.width());
    auto [pb, bob_final] =
        measure_a_cells(run.bob_trace.back().state, a_bits, s);
    (void)pb;
    auto [pa, alice_final] =
        measure_a_cells(run.alice_trace.back().state, a_bits, s);
    (void)pa;
    run.bob_trace.push_back({"t2+", std::move(bob_final)});
    run.alice_trace.push_back({"t2+", std::move(alice_final)});
    return run;
}

DephasedEnsemble project(const DephasedEnsemble& state, const OracleProblem& problem,
                         const Projection& proj) {
    if (proj.target == Projection::Target::b_cells) {
        return measure_b_cells(state, problem.cells(), proj.cells, proj.outcome).second;
    }
    return measure_a_cells(state, proj.cells, proj.outcome).second;
}

AdvancedProjection advance_projection(const TwoRepRun& run, Rep rep,
                                      const Projection& proj, int steps_back) {
    const auto& trace = run.trace(rep);
    if (proj.time_index < run.t2() || proj.time_index >= static_cast<int>(trace.size())) {
        throw std::invalid_argument(
            "projection must be anchored at or after the last unitary");
    }
    // Unitary step k maps trace index 1+k to 2+k; the earliest reachable
    // pre-step state is t0+ (index 1).
    int anchor = std::min(proj.time_index, run.t2());
    if (steps_back < 0 || steps_back > static_cast<int>(run.steps.size())) {
        throw std::invalid_argument(
            fmt::format("cannot step back {} of {} steps", steps_back, run.steps.size()));
    }
    DephasedEnsemble before = trace[static_cast<size_t>(anchor)].state;
    DephasedEnsemble after = project(before, run.problem, proj);
    for (int k = 0; k < steps_back; ++k) {
        const UnitaryStep& step =
            run.steps[static_cast<size_t>(run.steps.size() - 1 - static_cast<size_t>(k))];
        before = apply_step_inverse(before, step);
        after = apply_step_inverse(after, step);
    }
    Projection moved = proj;
    moved.time_index = anchor - steps_back;
    return {std::move(moved), std::move(before), std::move(after)};
}

PartialMeasurementRecord partial_measurement_pair(const TwoRepRun& run,
                                                  const std::vector<int>& b_cells,
                                                  const std::vector<int>& a_cells) {
    const OracleProblem& p = run.problem;
    const BitString s = p.solution_of(run.b_c);

    // Setter side: B cells carry the random outcome's values at t0.
    BitString b_outcome = extract_cells(run.initial_outcome, p.cells(), b_cells);
    auto [pb, bob_after_b] = measure_b_cells(run.bob_trace[0].state, p.cells(),
                                             b_cells, b_outcome);
    (void)pb;
    DephasedEnsemble bob_evolved = bob_after_b;
    for (const UnitaryStep& step : run.steps) {
        bob_evolved = apply_step(bob_evolved, step);
    }
    DephasedEnsemble bob_final = bob_evolved;
    if (!a_cells.empty()) {
        BitString a_outcome;
        for (int c : a_cells) a_outcome = a_outcome.concat(s.slice(c, 1));
        bob_final = measure_a_cells(bob_evolved, a_cells, a_outcome).second;
    }

    // Solver side: the B-cell measurement is relocated to t1 and selects
    // the corresponding cells of the setting chosen by the setter.
    BitString b_outcome_alice = extract_cells(run.b_c, p.cells(), b_cells);
    auto [pa, alice_after_b] = measure_b_cells(run.alice_trace[static_cast<size_t>(run.t1())].state,
                                               p.cells(), b_cells, b_outcome_alice);
    (void)pa;
    const DephasedEnsemble& out = run.alice_trace[static_cast<size_t>(run.t2())].state;
    DephasedEnsemble alice_after_a = out;
    Projection a_proj;
    DephasedEnsemble alice_advanced = out;
    if (!a_cells.empty()) {
        BitString a_outcome;
        for (int c : a_cells) a_outcome = a_outcome.concat(s.slice(c, 1));
        a_proj = Projection{Projection::Target::a_cells, a_cells, a_outcome, run.t2()};
        alice_after_a = project(out, p, a_proj);
        // Advance back to t1: through the solver steps only, not U_B.
        alice_advanced =
            advance_projection(run, Rep::alice, a_proj,
                               static_cast<int>(run.steps.size()) - 1)
                .after;
    }

    // Composing both selections must reproduce the collapsed run's end.
    DephasedEnsemble composed = alice_after_b;
    for (size_t i = 1; i < run.steps.size(); ++i) {  // solver steps follow U_B
        composed = apply_step(composed, run.steps[i]);
    }
    if (!a_cells.empty()) {
        BitString a_outcome;
        for (int c : a_cells) a_outcome = a_outcome.concat(s.slice(c, 1));
        composed = measure_a_cells(composed, a_cells, a_outcome).second;
    }

    const DephasedEnsemble& unsplit = run.bob_trace[static_cast<size_t>(run.t2_plus())].state;
    PartialMeasurementRecord rec{std::move(bob_after_b), std::move(bob_evolved),
                                 std::move(bob_final),   std::move(alice_after_b),
                                 std::move(alice_after_a), std::move(alice_advanced),
                                 std::move(composed),     0.0,
                                 0.0,                      false};
    rec.fidelity_bob_final = fidelity(rec.bob_final, unsplit);
    rec.fidelity_composed = fidelity(rec.composed_final, unsplit);
    rec.consistent = rec.fidelity_bob_final >= 1.0 - kStateTol &&
                     rec.fidelity_composed >= 1.0 - kStateTol;
    return rec;
}

namespace {

// Equal-weight branches given as (setting, A content); V is the kickback state.
DephasedEnsemble grover2_expected(
    const std::vector<std::pair<std::string, std::string>>& list) {
    std::vector<Branch> branches;
    const double w = 1.0 / static_cast<double>(list.size());
    Vec v = kickback_v();
    for (auto& [b, a] : list) {
        BitString setting = BitString::parse(b);
        int av = static_cast<int>(BitString::parse(a).value());
        Vec vec = Vec::Zero(8);
        vec.segment(av * 2, 2) = v;
        branches.push_back({setting, std::move(vec), w});
    }
    return DephasedEnsemble(std::move(branches), 4, 2);
}

std::vector<LabeledStateCheck> labeled_states_impl(const std::vector<int>& b_cells,
                                                   const std::vector<int>& a_cells,
                                                   const std::string& corrupt_step) {
    OracleProblem p = OracleProblem::make_grover(2);
    BitString outcome = BitString::parse("10");
    BitString b_c = BitString::parse("01");
    TwoRepRun run = build_two_reps(p, b_c, outcome);
    if (!corrupt_step.empty()) {
        // Negative control: drop the named solver step and rebuild traces.
        std::erase_if(run.steps, [&](const UnitaryStep& s) {
            return s.label == corrupt_step;
        });
        TwoRepRun clean = run;
        clean.bob_trace.assign(run.bob_trace.begin(), run.bob_trace.begin() + 2);
        clean.alice_trace.assign(run.alice_trace.begin(), run.alice_trace.begin() + 2);
        for (size_t i = 0; i < clean.steps.size(); ++i) {
            clean.bob_trace.push_back(
                {"", apply_step(clean.bob_trace.back().state, clean.steps[i])});
            clean.alice_trace.push_back(
                {"", apply_step(clean.alice_trace.back().state, clean.steps[i])});
        }
        // Final A projection may fail on a corrupted run; keep the last state.
        clean.bob_trace.push_back({"t2+", clean.bob_trace.back().state});
        clean.alice_trace.push_back({"t2+", clean.alice_trace.back().state});
        run = std::move(clean);
    }
    PartialMeasurementRecord rec = partial_measurement_pair(run, b_cells, a_cells);

    // Closed forms of the labeled states, mirrored automatically: the
    // expected sub-ensembles are recomputed from the outcome/choice data.
    auto agree_b = [&](const BitString& ref) {
        std::vector<std::pair<std::string, std::string>> list;
        for (const BitString& s : p.settings()) {
            if (agrees_on_cells(s, ref, p.cells(), b_cells)) {
                list.emplace_back(s.str(), "00");
            }
        }
        return list;
    };
    DephasedEnsemble ini = grover2_expected(
        {{"00", "00"}, {"01", "00"}, {"10", "00"}, {"11", "00"}});
    DephasedEnsemble am = grover2_expected({{"10", "00"}});
    DephasedEnsemble se = grover2_expected({{"01", "00"}});
    DephasedEnsemble fi = grover2_expected({{"01", "01"}});
    DephasedEnsemble out = grover2_expected(
        {{"00", "00"}, {"01", "01"}, {"10", "10"}, {"11", "11"}});
    DephasedEnsemble inbs = grover2_expected(agree_b(run.initial_outcome));
    // (outb): the evolved sub-ensemble pairs each surviving relabeled
    // setting with itself in A.
    std::vector<std::pair<std::string, std::string>> outb_list;
    for (auto& [b, a] : agree_b(run.initial_outcome)) {
        BitString moved = run.steps.front().perm(BitString::parse(b));
        outb_list.emplace_back(moved.str(), moved.str());
    }
    DephasedEnsemble outb = grover2_expected(outb_list);
    // (altro): output branches whose solution matches b_c's on the A cells.
    std::vector<std::pair<std::string, std::string>> altro_list;
    for (const BitString& s : p.settings()) {
        bool match = true;
        for (int c : a_cells) {
            if (s.bit(c) != b_c.bit(c)) match = false;
        }
        if (match) altro_list.emplace_back(s.str(), s.str());
    }
    DephasedEnsemble altro = grover2_expected(altro_list);
    // (adv): the same settings with A back at zero.
    std::vector<std::pair<std::string, std::string>> adv_list;
    for (auto& [b, a] : altro_list) adv_list.emplace_back(b, "00");
    DephasedEnsemble adv = grover2_expected(adv_list);

    std::vector<LabeledStateCheck> checks;
    auto add = [&](const char* name, const DephasedEnsemble& actual,
                   const DephasedEnsemble& expected) {
        double f = fidelity(actual, expected);
        checks.push_back({name, f, f >= 1.0 - 1e-9});
    };
    add("ini", run.bob_trace[static_cast<size_t>(run.t0())].state, ini);
    add("am", run.bob_trace[static_cast<size_t>(run.t0_plus())].state, am);
    add("se", run.bob_trace[static_cast<size_t>(run.t1())].state, se);
    add("fi", run.bob_trace[static_cast<size_t>(run.t2())].state, fi);
    add("out", run.alice_trace[static_cast<size_t>(run.t2())].state, out);
    add("inbs", rec.bob_after_b, inbs);
    add("outb", rec.bob_evolved, outb);
    add("altro", rec.alice_after_a, altro);
    add("adv", rec.alice_advanced, adv);
    return checks;
}

}  // namespace

std::vector<LabeledStateCheck> grover_labeled_states(const std::string& corrupt_step) {
    return labeled_states_impl({0}, {1}, corrupt_step);
}

std::vector<LabeledStateCheck> grover_labeled_states_mirrored() {
    return labeled_states_impl({1}, {0}, "");
}

std::string format_trace(const std::vector<TracePoint>& trace) {
    std::string out;
    for (const TracePoint& tp : trace) {
        out += fmt::format("{:<10}", tp.label);
        for (const Branch& b : tp.state.branches()) {
            int best = 0;
            double best_p = -1.0;
            for (int a = 0; a < tp.state.dim_a(); ++a) {
                double pa =
                    b.av.segment(a * tp.state.dim_v(), tp.state.dim_v()).squaredNorm();
                if (pa > best_p) {
                    best_p = pa;
                    best = a;
                }
            }
            int a_bits = 0;
            while ((1 << a_bits) < tp.state.dim_a()) ++a_bits;
            out += fmt::format(" | {} w={:.6f} A~{}", b.setting.str(), b.weight,
                               BitString(static_cast<std::uint64_t>(best), a_bits).str());
        }
        out += "\n";
    }
    return out;
}

}  // namespace oraclesim
