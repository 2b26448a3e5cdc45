// Complex-amplitude state algebra for the three-register system B (problem
// setting), A (argument/solution) and V (accumulated function value).
//
// A maximally mixed setting register written as a superposition with
// independent uniformly random phases is, operationally, a B-diagonal
// mixture. DephasedEnsemble is that mixture, kept exact: one branch per
// setting, each branch carrying a pure A⊗V state and a weight. Sampled
// phases exist only for the Monte-Carlo cross-check (sample_pure /
// monte_carlo_density).
#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "oraclesim/bitstring.hpp"

namespace oraclesim {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

constexpr double kNormTol = 1e-12;
constexpr double kStateTol = 1e-10;
constexpr double kUnitaryTol = 1e-9;

struct Branch {
    BitString setting;
    Vec av;         // unit-norm state over the A⊗V basis, index a*dim_v + v
    double weight;  // nonnegative, weights sum to 1 across the ensemble
};

class DephasedEnsemble {
  public:
    DephasedEnsemble(std::vector<Branch> branches, int dim_a, int dim_v);

    static DephasedEnsemble uniform(const std::vector<BitString>& settings,
                                    const Vec& av, int dim_a, int dim_v);

    int dim_a() const { return dim_a_; }
    int dim_v() const { return dim_v_; }
    int dim_av() const { return dim_a_ * dim_v_; }
    const std::vector<Branch>& branches() const { return branches_; }
    const Branch* find(const BitString& setting) const;
    std::vector<BitString> settings() const;
    int setting_width() const;

  private:
    std::vector<Branch> branches_;
    int dim_a_;
    int dim_v_;
};

struct PureState {
    std::vector<BitString> setting_order;
    Vec amplitudes;  // over B⊗A⊗V, index (b_index*dim_a + a)*dim_v + v
    std::vector<std::pair<BitString, double>> sampled_phases;
    int dim_a;
    int dim_v;
};

struct DensityOperator {
    Mat matrix;

    int dim() const { return static_cast<int>(matrix.rows()); }
};

// Violations of the density-operator invariants (Hermiticity within 1e-10,
// unit trace within 1e-10, eigenvalues above -1e-9); empty when valid.
std::vector<std::string> density_violations(const DensityOperator& rho);

// --- operations -------------------------------------------------------------

// Per-setting unitary on A⊗V. The provider is called once per distinct
// setting; every returned matrix is checked against U†U = I before use.
using BranchMatrixFn = std::function<Mat(const BitString&)>;

DephasedEnsemble apply_branch_unitary(const DephasedEnsemble& state,
                                      const BranchMatrixFn& u);

// Projective measurement of a subset of B's cells. Returns the Born
// probability and the renormalized sub-ensemble. A zero-probability outcome
// is an inconsistent projection request and throws.
std::pair<double, DephasedEnsemble> measure_b_cells(const DephasedEnsemble& state,
                                                    const CellSpec& spec,
                                                    const std::vector<int>& cells,
                                                    const BitString& outcome);

// Same for bit-cells of register A (cells are bit positions of the A word).
std::pair<double, DephasedEnsemble> measure_a_cells(const DephasedEnsemble& state,
                                                    const std::vector<int>& cells,
                                                    const BitString& outcome);

// Born-samples a full A outcome and projects onto it.
std::pair<BitString, DephasedEnsemble> measure_a(const DephasedEnsemble& state,
                                                 std::uint64_t rng_seed);

// Trace over B and V.
DensityOperator reduced_density_a(const DephasedEnsemble& state);

// Trace over A and V, written in the given setting basis (all branch
// settings must appear in `basis`). Off-diagonal blocks vanish by dephasing.
DensityOperator reduced_density_b(const DephasedEnsemble& state,
                                  const std::vector<BitString>& basis);

// Shannon entropy of the branch weights, in bits. Equals the von Neumann
// entropy of the B marginal when the branch A⊗V parts are pure.
double ensemble_entropy(const DephasedEnsemble& state);

// One phase sample per setting, uniform in [0, 2π).
PureState sample_pure(const DephasedEnsemble& state, std::uint64_t rng_seed);

// Mean of |ψ⟩⟨ψ| over sampled pure states; converges to density_operator().
DensityOperator monte_carlo_density(const DephasedEnsemble& state, int samples,
                                    std::uint64_t rng_seed);

// Exact joint density operator of the ensemble (B in branch order).
DensityOperator density_operator(const DephasedEnsemble& state);

double trace_distance(const DensityOperator& a, const DensityOperator& b);
double vn_entropy_bits(const DensityOperator& rho);
double shannon_bits(const std::vector<double>& probabilities);

// Uhlmann fidelity between two B-diagonal mixtures with pure branch states:
// Σ_b sqrt(w_b v_b) |⟨ψ_b|φ_b⟩|. Insensitive to per-branch global phase.
double fidelity(const DephasedEnsemble& a, const DephasedEnsemble& b);

}  // namespace oraclesim
