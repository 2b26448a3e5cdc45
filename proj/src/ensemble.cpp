#include "oraclesim/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "oraclesim/rng.hpp"

namespace oraclesim {

DephasedEnsemble::DephasedEnsemble(std::vector<Branch> branches, int dim_a, int dim_v)
    : branches_(std::move(branches)), dim_a_(dim_a), dim_v_(dim_v) {
    if (dim_a_ < 1 || dim_v_ < 1) {
        throw std::invalid_argument("register dimensions must be positive");
    }
    if (branches_.empty()) {
        throw std::invalid_argument("ensemble needs at least one branch");
    }
    std::erase_if(branches_, [](const Branch& b) { return b.weight == 0.0; });
    if (branches_.empty()) {
        throw std::invalid_argument("ensemble has no branch with positive weight");
    }
    std::set<BitString> seen;
    double total = 0.0;
    const int width = branches_.front().setting.width();
    for (const Branch& b : branches_) {
        if (b.setting.width() != width) {
            throw std::invalid_argument("branch settings differ in width");
        }
        if (!seen.insert(b.setting).second) {
            throw std::invalid_argument(
                fmt::format("duplicate branch setting {}", b.setting.str()));
        }
        if (b.av.size() != dim_a_ * dim_v_) {
            throw std::invalid_argument(
                fmt::format("branch A⊗V vector has dimension {}, expected {}",
                            b.av.size(), dim_a_ * dim_v_));
        }
        if (b.weight < 0.0) {
            throw std::invalid_argument("negative branch weight");
        }
        if (std::abs(b.av.norm() - 1.0) > kNormTol) {
            throw std::invalid_argument(
                fmt::format("branch {} state norm {} is not 1", b.setting.str(),
                            b.av.norm()));
        }
        total += b.weight;
    }
    if (std::abs(total - 1.0) > kNormTol) {
        throw std::invalid_argument(fmt::format("branch weights sum to {}", total));
    }
}

DephasedEnsemble DephasedEnsemble::uniform(const std::vector<BitString>& settings,
                                           const Vec& av, int dim_a, int dim_v) {
    if (settings.empty()) {
        throw std::invalid_argument("uniform ensemble over an empty setting list");
    }
    std::vector<Branch> branches;
    branches.reserve(settings.size());
    const double w = 1.0 / static_cast<double>(settings.size());
    for (const BitString& s : settings) {
        branches.push_back({s, av, w});
    }
    return DephasedEnsemble(std::move(branches), dim_a, dim_v);
}

const Branch* DephasedEnsemble::find(const BitString& setting) const {
    for (const Branch& b : branches_) {
        if (b.setting == setting) return &b;
    }
    return nullptr;
}

std::vector<BitString> DephasedEnsemble::settings() const {
    std::vector<BitString> out;
    out.reserve(branches_.size());
    for (const Branch& b : branches_) out.push_back(b.setting);
    return out;
}

int DephasedEnsemble::setting_width() const { return branches_.front().setting.width(); }

std::vector<std::string> density_violations(const DensityOperator& rho) {
    std::vector<std::string> out;
    const Mat& m = rho.matrix;
    if (m.rows() != m.cols()) {
        out.push_back("matrix is not square");
        return out;
    }
    double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-10) {
        out.push_back(fmt::format("not Hermitian (deviation {})", herm));
    }
    double tr = std::abs(m.trace() - Complex{1.0, 0.0});
    if (tr > 1e-10) {
        out.push_back(fmt::format("trace differs from 1 by {}", tr));
    }
    Eigen::SelfAdjointEigenSolver<Mat> es((m + m.adjoint()) / 2.0);
    double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -1e-9) {
        out.push_back(fmt::format("negative eigenvalue {}", min_eig));
    }
    return out;
}

DephasedEnsemble apply_branch_unitary(const DephasedEnsemble& state,
                                      const BranchMatrixFn& u) {
    std::vector<Branch> out;
    out.reserve(state.branches().size());
    const int d = state.dim_av();
    for (const Branch& b : state.branches()) {
        Mat m = u(b.setting);
        if (m.rows() != d || m.cols() != d) {
            throw std::invalid_argument(
                fmt::format("unitary for setting {} has shape {}x{}, expected {}x{}",
                            b.setting.str(), m.rows(), m.cols(), d, d));
        }
        double dev = (m.adjoint() * m - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
        if (dev > kUnitaryTol) {
            throw std::invalid_argument(fmt::format(
                "operator for setting {} is not unitary (U†U deviates by {})",
                b.setting.str(), dev));
        }
        out.push_back({b.setting, m * b.av, b.weight});
    }
    return DephasedEnsemble(std::move(out), state.dim_a(), state.dim_v());
}

std::pair<double, DephasedEnsemble> measure_b_cells(const DephasedEnsemble& state,
                                                    const CellSpec& spec,
                                                    const std::vector<int>& cells,
                                                    const BitString& outcome) {
    if (cells.empty()) {
        throw std::invalid_argument("measurement of an empty cell set");
    }
    if (spec.total_width() != state.setting_width()) {
        throw std::invalid_argument("cell spec does not match setting width");
    }
    if (outcome.width() != static_cast<int>(cells.size()) * spec.cell_width) {
        throw std::invalid_argument(
            fmt::format("outcome width {} does not match {} cells of width {}",
                        outcome.width(), cells.size(), spec.cell_width));
    }
    double prob = 0.0;
    std::vector<Branch> kept;
    for (const Branch& b : state.branches()) {
        if (extract_cells(b.setting, spec, cells) == outcome) {
            prob += b.weight;
            kept.push_back(b);
        }
    }
    if (prob <= 0.0) {
        throw std::domain_error(
            fmt::format("projection on zero-probability B outcome {}", outcome.str()));
    }
    for (Branch& b : kept) b.weight /= prob;
    return {prob, DephasedEnsemble(std::move(kept), state.dim_a(), state.dim_v())};
}

namespace {
int a_bits_of(const DephasedEnsemble& state) {
    int bits = 0;
    while ((1 << bits) < state.dim_a()) ++bits;
    if ((1 << bits) != state.dim_a()) {
        throw std::logic_error("A dimension is not a power of two");
    }
    return bits;
}
}  // namespace

std::pair<double, DephasedEnsemble> measure_a_cells(const DephasedEnsemble& state,
                                                    const std::vector<int>& cells,
                                                    const BitString& outcome) {
    if (cells.empty()) {
        throw std::invalid_argument("measurement of an empty cell set");
    }
    const int a_bits = a_bits_of(state);
    if (outcome.width() != static_cast<int>(cells.size())) {
        throw std::invalid_argument("outcome width does not match the cell count");
    }
    double prob = 0.0;
    std::vector<Branch> kept;
    for (const Branch& b : state.branches()) {
        Vec projected = b.av;
        for (int a = 0; a < state.dim_a(); ++a) {
            BitString word(static_cast<std::uint64_t>(a), a_bits);
            bool match = true;
            for (size_t i = 0; i < cells.size(); ++i) {
                if (word.bit(cells[i]) != outcome.bit(static_cast<int>(i))) {
                    match = false;
                    break;
                }
            }
            if (!match) {
                projected.segment(a * state.dim_v(), state.dim_v()).setZero();
            }
        }
        double keep = projected.squaredNorm();
        prob += b.weight * keep;
        // Branches only populated by floating-point dust are dropped.
        if (keep > 1e-24) {
            projected /= std::sqrt(keep);
            kept.push_back({b.setting, std::move(projected), b.weight * keep});
        }
    }
    if (prob <= 0.0) {
        throw std::domain_error(
            fmt::format("projection on zero-probability A outcome {}", outcome.str()));
    }
    for (Branch& b : kept) b.weight /= prob;
    return {prob, DephasedEnsemble(std::move(kept), state.dim_a(), state.dim_v())};
}

std::pair<BitString, DephasedEnsemble> measure_a(const DephasedEnsemble& state,
                                                 std::uint64_t rng_seed) {
    const int a_bits = a_bits_of(state);
    std::vector<double> probs(static_cast<size_t>(state.dim_a()), 0.0);
    for (const Branch& b : state.branches()) {
        for (int a = 0; a < state.dim_a(); ++a) {
            probs[static_cast<size_t>(a)] +=
                b.weight * b.av.segment(a * state.dim_v(), state.dim_v()).squaredNorm();
        }
    }
    Rng rng(rng_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double r = unit(rng);
    int picked = state.dim_a() - 1;
    double acc = 0.0;
    for (int a = 0; a < state.dim_a(); ++a) {
        acc += probs[static_cast<size_t>(a)];
        if (r < acc) {
            picked = a;
            break;
        }
    }
    while (probs[static_cast<size_t>(picked)] <= 0.0) --picked;  // guard fp edge
    BitString outcome(static_cast<std::uint64_t>(picked), a_bits);
    std::vector<int> all_bits(static_cast<size_t>(a_bits));
    for (int i = 0; i < a_bits; ++i) all_bits[static_cast<size_t>(i)] = i;
    auto [prob, projected] = measure_a_cells(state, all_bits, outcome);
    (void)prob;
    return {outcome, std::move(projected)};
}

DensityOperator reduced_density_a(const DephasedEnsemble& state) {
    Mat rho = Mat::Zero(state.dim_a(), state.dim_a());
    for (const Branch& b : state.branches()) {
        for (int a1 = 0; a1 < state.dim_a(); ++a1) {
            for (int a2 = 0; a2 < state.dim_a(); ++a2) {
                Complex sum = 0.0;
                for (int v = 0; v < state.dim_v(); ++v) {
                    sum += b.av[a1 * state.dim_v() + v] *
                           std::conj(b.av[a2 * state.dim_v() + v]);
                }
                rho(a1, a2) += b.weight * sum;
            }
        }
    }
    return {std::move(rho)};
}

DensityOperator reduced_density_b(const DephasedEnsemble& state,
                                  const std::vector<BitString>& basis) {
    const int n = static_cast<int>(basis.size());
    Mat rho = Mat::Zero(n, n);
    for (const Branch& b : state.branches()) {
        auto it = std::find(basis.begin(), basis.end(), b.setting);
        if (it == basis.end()) {
            throw std::invalid_argument(
                fmt::format("setting {} missing from the B basis", b.setting.str()));
        }
        int i = static_cast<int>(it - basis.begin());
        rho(i, i) += b.weight;
    }
    return {std::move(rho)};
}

double shannon_bits(const std::vector<double>& probabilities) {
    double h = 0.0;
    for (double p : probabilities) {
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

double ensemble_entropy(const DephasedEnsemble& state) {
    std::vector<double> w;
    w.reserve(state.branches().size());
    for (const Branch& b : state.branches()) w.push_back(b.weight);
    return shannon_bits(w);
}

PureState sample_pure(const DephasedEnsemble& state, std::uint64_t rng_seed) {
    Rng rng(rng_seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    const int n = static_cast<int>(state.branches().size());
    Vec amp = Vec::Zero(static_cast<Eigen::Index>(n) * state.dim_av());
    PureState out;
    out.dim_a = state.dim_a();
    out.dim_v = state.dim_v();
    for (int i = 0; i < n; ++i) {
        const Branch& b = state.branches()[static_cast<size_t>(i)];
        double phi = angle(rng);
        out.setting_order.push_back(b.setting);
        out.sampled_phases.emplace_back(b.setting, phi);
        amp.segment(static_cast<Eigen::Index>(i) * state.dim_av(), state.dim_av()) =
            std::sqrt(b.weight) * std::exp(Complex{0.0, phi}) * b.av;
    }
    out.amplitudes = std::move(amp);
    return out;
}

DensityOperator monte_carlo_density(const DephasedEnsemble& state, int samples,
                                    std::uint64_t rng_seed) {
    if (samples < 1) {
        throw std::invalid_argument("sample count must be positive");
    }
    const Eigen::Index d =
        static_cast<Eigen::Index>(state.branches().size()) * state.dim_av();
    Mat acc = Mat::Zero(d, d);
    for (int s = 0; s < samples; ++s) {
        PureState psi = sample_pure(state, split_seed(rng_seed, "mc-sample",
                                                      static_cast<std::uint64_t>(s)));
        acc.noalias() += psi.amplitudes * psi.amplitudes.adjoint();
    }
    acc /= static_cast<double>(samples);
    return {std::move(acc)};
}

DensityOperator density_operator(const DephasedEnsemble& state) {
    const int dav = state.dim_av();
    const Eigen::Index d =
        static_cast<Eigen::Index>(state.branches().size()) * dav;
    Mat rho = Mat::Zero(d, d);
    for (size_t i = 0; i < state.branches().size(); ++i) {
        const Branch& b = state.branches()[i];
        rho.block(static_cast<Eigen::Index>(i) * dav,
                  static_cast<Eigen::Index>(i) * dav, dav, dav) =
            b.weight * (b.av * b.av.adjoint());
    }
    return {std::move(rho)};
}

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
    if (a.matrix.rows() != b.matrix.rows()) {
        throw std::invalid_argument("trace distance of operators with different dims");
    }
    Mat diff = a.matrix - b.matrix;
    Eigen::SelfAdjointEigenSolver<Mat> es((diff + diff.adjoint()) / 2.0);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double vn_entropy_bits(const DensityOperator& rho) {
    Eigen::SelfAdjointEigenSolver<Mat> es((rho.matrix + rho.matrix.adjoint()) / 2.0);
    double h = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        double p = es.eigenvalues()[i];
        if (p > 1e-12) h -= p * std::log2(p);
    }
    return h;
}

double fidelity(const DephasedEnsemble& a, const DephasedEnsemble& b) {
    if (a.dim_av() != b.dim_av()) {
        throw std::invalid_argument("fidelity of ensembles with different dimensions");
    }
    double f = 0.0;
    for (const Branch& ba : a.branches()) {
        const Branch* bb = b.find(ba.setting);
        if (bb == nullptr) continue;
        f += std::sqrt(ba.weight * bb->weight) * std::abs(ba.av.dot(bb->av));
    }
    return f;
}

}  // namespace oraclesim
