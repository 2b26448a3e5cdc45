// The unitary parts of the built-in algorithms as branch-wise steps on A⊗V,
// plus end-to-end runs on the collapsed (problem-setter) state.
//
// Register B is always the control: a step either transforms every branch's
// A⊗V state (possibly depending on the branch setting, as function
// evaluation does) or relabels the branch settings by a permutation of σ.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "oraclesim/ensemble.hpp"
#include "oraclesim/problems.hpp"

namespace oraclesim {

struct UnitaryStep {
    enum class Kind { branch_unitary, setting_permutation };

    std::string label;
    Kind kind = Kind::branch_unitary;

    // branch_unitary: in-place action on an A⊗V vector, per setting.
    std::function<void(const BitString&, Vec&)> fwd;
    std::function<void(const BitString&, Vec&)> inv;

    // setting_permutation: relabeling of σ.
    std::function<BitString(const BitString&)> perm;
    std::function<BitString(const BitString&)> perm_inv;

    // Dense matrix of the branch action for one setting (materialized by
    // applying to basis vectors; small dimensions only).
    Mat dense(const BitString& setting, int dim_av) const;
};

DephasedEnsemble apply_step(const DephasedEnsemble& state, const UnitaryStep& step);
DephasedEnsemble apply_step_inverse(const DephasedEnsemble& state,
                                    const UnitaryStep& step);

// --- gates -------------------------------------------------------------------

UnitaryStep hadamard_a(int a_bits, int dim_v);

enum class OracleMode { phase_kickback, xor_accumulate };

// Function evaluation |a⟩_A |v⟩_V → |a⟩_A |v ⊕ f_b(a)⟩_V. In kickback mode V
// is one bit and is meant to be prepared in (|0⟩−|1⟩)/√2, turning the same
// action into the sign flip (−1)^{f_b(a)}.
UnitaryStep u_f(const OracleProblem& problem, OracleMode mode);

// The diffusion operator 2|u⟩⟨u| − I on A, identity on V.
UnitaryStep inversion_about_mean(int a_bits, int dim_v);

// Relabels branch settings; weights and A⊗V parts untouched.
UnitaryStep u_b(std::string label, std::function<BitString(const BitString&)> perm,
                std::function<BitString(const BitString&)> perm_inv);

UnitaryStep u_b_xor_mask(const BitString& mask);
UnitaryStep u_b_transposition(const BitString& x, const BitString& y);
UnitaryStep u_b_identity();

// Canonical solution oracle |a⟩_A → |a ⊕ s(b)⟩_A: a unitary taking the
// all-zero input to the solution, available for any problem.
UnitaryStep canonical_solution_step(const OracleProblem& problem);

// (|0⟩−|1⟩)/√2
Vec kickback_v();
Vec basis_av(int dim_a, int dim_v, int a, int v);

// Input state of the extended representation: the full dephased mixture of
// σ with A all zeros and V prepared per family.
DephasedEnsemble input_state(const OracleProblem& problem);

// Same mixture over the registers of the canonical solution oracle
// (A sized for the solution word, V trivial).
DephasedEnsemble canonical_input_state(const OracleProblem& problem);

// The per-family unitary sequence of the solver's action. Drawer search
// gets `iterations` rounds of (U_f, inversion about the mean); a negative
// count means the rounded closed-form default.
std::vector<UnitaryStep> solver_steps(const OracleProblem& problem,
                                      int iterations = -1);

// Idealized output state over σ: each setting paired with the A basis state
// of its solution label (rule view applied), V trivial.
DephasedEnsemble canonical_rule_output_state(const OracleProblem& problem);
// Same with the stored solution strings.
DephasedEnsemble canonical_output_state(const OracleProblem& problem);

// --- runs --------------------------------------------------------------------

struct TracePoint {
    std::string label;
    DephasedEnsemble state;
};

struct AlgorithmRun {
    OracleProblem problem;
    BitString b_c;
    std::vector<UnitaryStep> steps;
    std::vector<TracePoint> trace;  // trace[0] is the input, one point per step

    const DephasedEnsemble& output() const { return trace.back().state; }
};

// Collapsed-setting run: single branch b_c through the solver steps.
AlgorithmRun run_collapsed(const OracleProblem& problem, const BitString& b_c,
                           int iterations = -1);
// Full-mixture run (projection of the initial measurement postponed).
AlgorithmRun run_postponed(const OracleProblem& problem, const BitString& b_c,
                           int iterations = -1);

struct GroverRun {
    AlgorithmRun run;
    double success_probability;  // P(A = b_c) in the output state
};

GroverRun run_grover(int n, int iterations, const BitString& b_c);

double grover_success_closed_form(int n, int iterations);

struct DeutschJozsaRun {
    AlgorithmRun run;
    BitString outcome;     // most probable A word
    double outcome_probability;
    bool deterministic;    // outcome carries all the amplitude
    bool balanced;         // verdict: outcome is not the all-zero word
};

DeutschJozsaRun run_deutsch_jozsa(int n, const BitString& b_c);

// Measurement histogram of the quantum part: H_A, U_f (xor), H_A, measure A.
std::map<BitString, int> run_simon_quantum_part(int n, const BitString& b_c,
                                                int shots, std::uint64_t rng_seed);

}  // namespace oraclesim
