#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oraclesim/circuits.hpp"
#include "oraclesim/ensemble.hpp"
#include "oraclesim/problems.hpp"
#include "oraclesim/rng.hpp"

using namespace oraclesim;

namespace {

DephasedEnsemble grover2_input() {
    return input_state(OracleProblem::make_grover(2));
}

// Random unitary on dim x dim from a seeded QR factorization.
Mat random_unitary(int dim, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> normal;
    Mat g(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            g(i, j) = Complex{normal(rng), normal(rng)};
        }
    }
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    return q;
}

DephasedEnsemble random_ensemble(int branches, int dim_a, int dim_v,
                                 std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> unit(0.1, 1.0);
    std::normal_distribution<double> normal;
    std::vector<Branch> out;
    std::vector<double> weights;
    double total = 0.0;
    for (int i = 0; i < branches; ++i) {
        weights.push_back(unit(rng));
        total += weights.back();
    }
    for (int i = 0; i < branches; ++i) {
        Vec av(dim_a * dim_v);
        for (int k = 0; k < av.size(); ++k) av[k] = Complex{normal(rng), normal(rng)};
        av.normalize();
        out.push_back({BitString(static_cast<std::uint64_t>(i), 4), std::move(av),
                       weights[static_cast<size_t>(i)] / total});
    }
    return DephasedEnsemble(std::move(out), dim_a, dim_v);
}

}  // namespace

TEST_CASE("constructor enforces the ensemble invariants") {
    Vec av = basis_av(2, 1, 0, 0);
    std::vector<Branch> dup = {{BitString::parse("0"), av, 0.5},
                               {BitString::parse("0"), av, 0.5}};
    CHECK_THROWS(DephasedEnsemble(dup, 2, 1));
    std::vector<Branch> bad_weight = {{BitString::parse("0"), av, 0.7},
                                      {BitString::parse("1"), av, 0.5}};
    CHECK_THROWS(DephasedEnsemble(bad_weight, 2, 1));
    std::vector<Branch> bad_norm = {{BitString::parse("0"), 2.0 * av, 1.0}};
    CHECK_THROWS(DephasedEnsemble(bad_norm, 2, 1));
}

TEST_CASE("identity branch unitary returns the same ensemble") {
    DephasedEnsemble ini = grover2_input();
    DephasedEnsemble same = apply_branch_unitary(
        ini, [&](const BitString&) { return Mat::Identity(8, 8); });
    CHECK(fidelity(ini, same) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Hadamard on the input spreads A uniformly") {
    DephasedEnsemble ini = grover2_input();
    UnitaryStep h = hadamard_a(2, 2);
    DephasedEnsemble spread = apply_branch_unitary(
        ini, [&](const BitString& b) { return h.dense(b, 8); });
    for (const Branch& b : spread.branches()) {
        for (int a = 0; a < 4; ++a) {
            CHECK(b.av.segment(a * 2, 2).norm() == doctest::Approx(0.5).epsilon(1e-12));
        }
    }
}

TEST_CASE("Im_A U_f H_A pairs every setting with its own drawer") {
    // "each possible problem setting is multiplied by the corresponding
    // solution"
    OracleProblem p = OracleProblem::make_grover(2);
    DephasedEnsemble state = input_state(p);
    for (const UnitaryStep& s : solver_steps(p, 1)) {
        state = apply_step(state, s);
    }
    for (const Branch& b : state.branches()) {
        int a = static_cast<int>(b.setting.value());
        CHECK(b.av.segment(a * 2, 2).norm() == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("non-unitary branch operators are rejected") {
    DephasedEnsemble ini = grover2_input();
    CHECK_THROWS(apply_branch_unitary(
        ini, [&](const BitString&) { return Mat(0.5 * Mat::Identity(8, 8)); }));
    Mat proj = Mat::Zero(8, 8);
    proj(0, 0) = 1.0;
    CHECK_THROWS(apply_branch_unitary(ini, [&](const BitString&) { return proj; }));
}

TEST_CASE("measuring the left B cell of the four-drawer input") {
    DephasedEnsemble ini = grover2_input();
    CellSpec spec{2, 1};
    auto [prob, rest] = measure_b_cells(ini, spec, {0}, BitString::parse("1"));
    CHECK(prob == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rest.branches().size() == 2);
    CHECK(rest.find(BitString::parse("10")) != nullptr);
    CHECK(rest.find(BitString::parse("11")) != nullptr);
}

TEST_CASE("full projection keeps a single branch") {
    DephasedEnsemble ini = grover2_input();
    CellSpec spec{2, 1};
    auto [prob, rest] = measure_b_cells(ini, spec, {0, 1}, BitString::parse("01"));
    CHECK(prob == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(rest.branches().size() == 1);
    CHECK(rest.branches().front().setting == BitString::parse("01"));
}

TEST_CASE("projecting the dj input on a half table filters the table set") {
    // Settings agreeing with 00 on rows {00,01}: the zero table and 0011.
    OracleProblem p = OracleProblem::make_deutsch_jozsa(2);
    DephasedEnsemble ini = input_state(p);
    auto [prob, rest] = measure_b_cells(ini, p.cells(), {0, 1}, BitString::parse("00"));
    CHECK(prob == doctest::Approx(2.0 / 8.0).epsilon(1e-12));
    CHECK(rest.branches().size() == 2);
    CHECK(rest.find(BitString::parse("0000")) != nullptr);
    CHECK(rest.find(BitString::parse("0011")) != nullptr);
}

TEST_CASE("zero-probability projection is an error, not an empty ensemble") {
    OracleProblem p = OracleProblem::make_simon(2);
    DephasedEnsemble ini = input_state(p);
    // No periodic table starts with rows 0,0 and ends 0,0.
    CHECK_THROWS_AS(
        measure_b_cells(ini, p.cells(), {0, 1, 2, 3}, BitString::parse("0000")),
        std::domain_error);
}

TEST_CASE("projection algebra: two disjoint cell sets compose") {
    for (std::uint64_t seed : {11ull, 22ull, 33ull, 44ull}) {
        DephasedEnsemble e = random_ensemble(8, 2, 2, seed);
        CellSpec spec{4, 1};
        // C1 = {0}, C2 = {2}: measure together or in sequence.
        Rng rng(seed);
        const Branch& pick = e.branches()[rng() % e.branches().size()];
        BitString o1 = extract_cells(pick.setting, spec, {0});
        BitString o2 = extract_cells(pick.setting, spec, {2});
        BitString o12 = extract_cells(pick.setting, spec, {0, 2});
        auto [p1, e1] = measure_b_cells(e, spec, {0}, o1);
        auto [p2, e2] = measure_b_cells(e1, spec, {2}, o2);
        auto [p12, e12] = measure_b_cells(e, spec, {0, 2}, o12);
        CHECK(p1 * p2 == doctest::Approx(p12).epsilon(1e-10));
        CHECK(fidelity(e2, e12) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("measure_a on the four-drawer output always finds the ball") {
    OracleProblem p = OracleProblem::make_grover(2);
    for (const BitString& bc : p.settings()) {
        AlgorithmRun run = run_collapsed(p, bc, 1);
        auto [outcome, rest] = measure_a(run.output(), 99);
        CHECK(outcome == bc);
        CHECK(rest.branches().size() == 1);
    }
}

TEST_CASE("measure_a on a single-branch ensemble is deterministic") {
    Vec av = basis_av(4, 1, 1, 0);  // A = |01⟩
    DephasedEnsemble e(std::vector<Branch>{{BitString::parse("00"), av, 1.0}}, 4, 1);
    auto [outcome, rest] = measure_a(e, 123);
    CHECK(outcome.str() == "01");
    (void)rest;
}

TEST_CASE("reduced density of A: product ensemble gives a rank-1 projector") {
    Vec av = basis_av(4, 1, 0, 0);
    std::vector<Branch> branches;
    for (int i = 0; i < 4; ++i) {
        branches.push_back({BitString(static_cast<std::uint64_t>(i), 2), av, 0.25});
    }
    DensityOperator rho = reduced_density_a(DephasedEnsemble(branches, 4, 1));
    CHECK(std::abs(rho.matrix(0, 0) - 1.0) < 1e-12);
    CHECK(rho.matrix.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(density_violations(rho).empty());
}

TEST_CASE("reduced density of A on the four-drawer output is maximally mixed") {
    OracleProblem p = OracleProblem::make_grover(2);
    DephasedEnsemble out = run_postponed(p, p.settings().front(), 1).output();
    DensityOperator rho = reduced_density_a(out);
    // Independent route: direct 4x4 sum of the four projectors.
    Mat expect = 0.25 * Mat::Identity(4, 4);
    CHECK((rho.matrix - expect).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(density_violations(rho).empty());
}

TEST_CASE("reduced density of A restricted to a two-table subset") {
    // Two equal-weight orthogonal pre-solutions give two 1/2 eigenvalues.
    OracleProblem p = OracleProblem::make_deutsch_jozsa(2);
    DephasedEnsemble out = run_postponed(p, BitString::parse("0011")).output();
    auto [prob, sub] = measure_b_cells(out, p.cells(), {0, 1}, BitString::parse("00"));
    (void)prob;
    DensityOperator rho = reduced_density_a(sub);
    Eigen::SelfAdjointEigenSolver<Mat> es(rho.matrix);
    Vec ev = es.eigenvalues().cast<Complex>();
    int halves = 0;
    for (int i = 0; i < ev.size(); ++i) {
        if (std::abs(ev[i].real() - 0.5) < 1e-10) ++halves;
    }
    CHECK(halves == 2);
    CHECK(density_violations(rho).empty());
}

TEST_CASE("ensemble entropy is lg of the setting count for uniform mixtures") {
    CHECK(ensemble_entropy(grover2_input()) == doctest::Approx(2.0).epsilon(1e-12));
    OracleProblem simon = OracleProblem::make_simon(2);
    CHECK(ensemble_entropy(input_state(simon)) ==
          doctest::Approx(2.584962500721156).epsilon(1e-12));
    Vec av = basis_av(2, 1, 0, 0);
    DephasedEnsemble single(std::vector<Branch>{{BitString::parse("0"), av, 1.0}}, 2, 1);
    CHECK(ensemble_entropy(single) == 0.0);
    for (int k : {1, 2, 4, 6, 8}) {
        std::vector<BitString> settings;
        for (int i = 0; i < k; ++i) {
            settings.push_back(BitString(static_cast<std::uint64_t>(i), 4));
        }
        DephasedEnsemble e = DephasedEnsemble::uniform(settings, av, 2, 1);
        CHECK(ensemble_entropy(e) ==
              doctest::Approx(std::log2(static_cast<double>(k))).epsilon(1e-12));
    }
}

TEST_CASE("norm preservation under random branch unitaries") {
    for (std::uint64_t seed : {5ull, 6ull, 7ull}) {
        DephasedEnsemble e = random_ensemble(6, 2, 2, seed);
        DephasedEnsemble moved = apply_branch_unitary(e, [&](const BitString& b) {
            return random_unitary(4, split_seed(seed, b.str()));
        });
        double total = 0.0;
        for (const Branch& b : moved.branches()) {
            total += b.weight * b.av.squaredNorm();
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("sampled pure states carry one phase per setting") {
    DephasedEnsemble ini = grover2_input();
    PureState psi = sample_pure(ini, 7);
    CHECK(psi.sampled_phases.size() == 4);
    CHECK(psi.amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-12));
    for (auto& [setting, phase] : psi.sampled_phases) {
        CHECK(phase >= 0.0);
        CHECK(phase < 2.0 * std::numbers::pi);
    }
    PureState again = sample_pure(ini, 7);
    CHECK((psi.amplitudes - again.amplitudes).norm() == 0.0);  // same seed
}

TEST_CASE("monte carlo density: single branch is exact after one sample") {
    Vec av = basis_av(2, 1, 1, 0);
    DephasedEnsemble e(std::vector<Branch>{{BitString::parse("0"), av, 1.0}}, 2, 1);
    DensityOperator mc = monte_carlo_density(e, 1, 3);
    DensityOperator exact = density_operator(e);
    CHECK(trace_distance(mc, exact) < 1e-12);
}

TEST_CASE("monte carlo density converges to the dephased mixture") {
    DephasedEnsemble ini = grover2_input();
    DensityOperator exact = density_operator(ini);
    DensityOperator mc = monte_carlo_density(ini, 10000, 2024);
    CHECK(trace_distance(mc, exact) < 0.05);
    CHECK(density_violations(mc).empty());
}

TEST_CASE("monte carlo convergence improves at the square-root rate") {
    DephasedEnsemble ini = grover2_input();
    DensityOperator exact = density_operator(ini);
    double coarse = trace_distance(monte_carlo_density(ini, 100, 555), exact);
    double fine = trace_distance(monte_carlo_density(ini, 10000, 555), exact);
    // 100x the samples: roughly 10x the accuracy.
    CHECK(fine < coarse);
    CHECK(coarse / fine > 3.0);
    CHECK(coarse / fine < 33.0);
}

TEST_CASE("off-diagonal B blocks of the sampled density average out") {
    DephasedEnsemble ini = grover2_input();
    DensityOperator mc = monte_carlo_density(ini, 20000, 81);
    double offdiag = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (i == j) continue;
            offdiag = std::max(offdiag,
                               mc.matrix.block(i * 8, j * 8, 8, 8).cwiseAbs().maxCoeff());
        }
    }
    CHECK(offdiag < 0.02);
}

TEST_CASE("ensemble fidelity ignores per-branch global phase") {
    DephasedEnsemble ini = grover2_input();
    std::vector<Branch> rotated;
    for (const Branch& b : ini.branches()) {
        rotated.push_back({b.setting, std::exp(Complex{0.0, 1.1}) * b.av, b.weight});
    }
    DephasedEnsemble other(rotated, ini.dim_a(), ini.dim_v());
    CHECK(fidelity(ini, other) == doctest::Approx(1.0).epsilon(1e-12));
}
