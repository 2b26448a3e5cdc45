// The two relational representations of a run and the projection calculus.
//
// To the problem setter and any external observer the initial measurement
// collapses the setting register at t0; to the solver that projection is
// postponed past the unitary part of her action. Measurement projections
// are represented by their (before, after) state pair and can be advanced —
// propagated backward through the inverse unitaries — or retarded.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oraclesim/circuits.hpp"

namespace oraclesim {

enum class Rep { bob, alice };

struct Projection {
    enum class Target { b_cells, a_cells };
    Target target = Target::a_cells;
    std::vector<int> cells;
    BitString outcome;
    int time_index = 0;  // index into the trace the projection is anchored at
};

struct TwoRepRun {
    OracleProblem problem;
    BitString b_c;
    BitString initial_outcome;
    std::vector<UnitaryStep> steps;       // U_B followed by the solver steps
    std::vector<TracePoint> bob_trace;    // collapse at t0
    std::vector<TracePoint> alice_trace;  // collapse postponed to t2

    const std::vector<TracePoint>& trace(Rep r) const {
        return r == Rep::bob ? bob_trace : alice_trace;
    }
    // Indices of the distinguished time labels within either trace.
    int t0() const { return 0; }
    int t0_plus() const { return 1; }
    int t1() const { return 2; }
    int t2() const { return static_cast<int>(bob_trace.size()) - 2; }
    int t2_plus() const { return static_cast<int>(bob_trace.size()) - 1; }
};

// Builds both representations. The setter's trace collapses at t0 onto the
// random outcome, relabels it to b_c (xor mask when that preserves σ, a
// transposition otherwise), then runs the solver steps; the solver's trace
// keeps the full mixture until the final measurement of A.
TwoRepRun build_two_reps(const OracleProblem& problem, const BitString& b_c,
                         const BitString& initial_random_outcome);

DephasedEnsemble project(const DephasedEnsemble& state, const OracleProblem& problem,
                         const Projection& proj);

struct AdvancedProjection {
    Projection projection;     // re-anchored at the earlier time
    DephasedEnsemble before;   // pre-projection state pulled back
    DephasedEnsemble after;    // post-projection state pulled back
};

// Propagates both end states of the projection backward in time through the
// inverses of the unitary steps. Advancing by zero steps is the identity.
AdvancedProjection advance_projection(const TwoRepRun& run, Rep rep,
                                      const Projection& proj, int steps_back);

struct PartialMeasurementRecord {
    // Setter representation: B-cells measured at t0 with the random
    // outcome's values, evolved, then A-cells measured at t2.
    DephasedEnsemble bob_after_b;       // state (inbs)-like
    DephasedEnsemble bob_evolved;       // state (outb)-like
    DephasedEnsemble bob_final;         // after the A-cell selection
    // Solver representation: the B-cell measurement relocated to t1 with
    // the values of b_c, and the A-cell measurement applied to the output.
    DephasedEnsemble alice_after_b;     // σ_i sub-mixture at t1
    DephasedEnsemble alice_after_a;     // state (altro)-like
    DephasedEnsemble alice_advanced;    // the A projection advanced to t1
    DephasedEnsemble composed_final;    // both selections composed
    double fidelity_bob_final;          // against the unsplit collapsed output
    double fidelity_composed;           // composed selections vs the same
    bool consistent;
};

// The synthetic sharing of the selections between two partial measurements;
// confirms the composed selections reproduce the unsplit run's final state.
PartialMeasurementRecord partial_measurement_pair(const TwoRepRun& run,
                                                  const std::vector<int>& b_cells,
                                                  const std::vector<int>& a_cells);

struct LabeledStateCheck {
    std::string name;
    double fidelity;
    bool pass;
};

// Reconstructs the nine labeled states of the four-drawer walkthrough
// (random outcome 10, chosen setting 01, left B cell / right A cell) and
// scores each against its closed form. `corrupt_step` drops the named
// solver step first — a negative control used by tests.
std::vector<LabeledStateCheck> grover_labeled_states(const std::string& corrupt_step = "");

// Same with the mirrored split (right B cell at t0, left A cell at t2).
std::vector<LabeledStateCheck> grover_labeled_states_mirrored();

// One line per time label: branch list with setting, weight and dominant A
// component. Consumed by the command-line `verify` output.
std::string format_trace(const std::vector<TracePoint>& trace);

}  // namespace oraclesim
