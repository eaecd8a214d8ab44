#include "hjrsp/qsim.hpp"

#include <cmath>
#include <unordered_set>

namespace hjrsp {

namespace {

bool all_finite(const Vec& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
    }
    return true;
}

bool all_finite(const Mat& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag())) return false;
        }
    }
    return true;
}

void check_targets(const std::vector<int>& targets, int n_qubits, bool allow_empty = false) {
    if (targets.empty() && !allow_empty) throw BadTargets("empty target list");
    std::unordered_set<int> seen;
    for (int t : targets) {
        if (t < 0 || t >= n_qubits) throw BadTargets("qubit index out of range");
        if (!seen.insert(t).second) throw BadTargets("repeated qubit index");
    }
}

}  // namespace

PureState::PureState(int n, Vec a) : n_qubits(n), amps(std::move(a)) {
    if (amps.size() != (Eigen::Index(1) << n_qubits)) throw DimensionMismatch("amplitude count != 2^n");
    validate();
}

void PureState::validate() const {
    if (!all_finite(amps)) throw NonUnitInput("non-finite amplitude");
    if (std::abs(norm_sq() - 1.0) > kExactTol) throw NonUnitInput("state norm != 1");
}

DensityMatrix::DensityMatrix(int n, Mat m) : n_qubits(n), rho(std::move(m)) {
    const Eigen::Index d = Eigen::Index(1) << n_qubits;
    if (rho.rows() != d || rho.cols() != d) throw DimensionMismatch("density matrix is not 2^n x 2^n");
    validate();
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
    return DensityMatrix(psi.n_qubits, psi.amps * psi.amps.adjoint());
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Mat> es((rho + rho.adjoint()) / 2.0);
    return es.eigenvalues().minCoeff();
}

void DensityMatrix::validate() const {
    if (!all_finite(rho)) throw NonUnitInput("non-finite entry");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kExactTol) throw NonUnitInput("not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > kExactTol || std::abs(rho.trace().imag()) > kExactTol)
        throw NonUnitInput("trace != 1");
    if (min_eigenvalue() < -kUnitaryTol) throw NonUnitInput("negative eigenvalue");
}

SingleQubitBasis::SingleQubitBasis(Eigen::Vector2cd e0, Eigen::Vector2cd e1, std::string lbl)
    : b0(std::move(e0)), b1(std::move(e1)), label(std::move(lbl)) {
    if (std::abs(b0.squaredNorm() - 1.0) > kExactTol || std::abs(b1.squaredNorm() - 1.0) > kExactTol)
        throw NonUnitInput("basis vector norm != 1 (" + label + ")");
    if (std::abs(b0.dot(b1)) > kExactTol)
        throw NonUnitInput("basis vectors not orthogonal (" + label + ")");
}

PureState make_target_state(double theta, double phi) {
    Vec v(2);
    v[0] = std::cos(theta);
    v[1] = std::polar(std::sin(theta), phi);
    return PureState(1, std::move(v));
}

SingleQubitBasis u_basis(double a, double b) {
    if (std::abs(a * a + b * b - 1.0) > kExactTol) throw NonUnitInput("u basis needs a^2+b^2 = 1");
    return SingleQubitBasis({cplx(a, 0), cplx(b, 0)}, {cplx(b, 0), cplx(-a, 0)}, "u");
}

SingleQubitBasis v_basis(double phi) {
    const double s = 1.0 / std::sqrt(2.0);
    const cplx e_plus = std::polar(1.0, phi);
    const cplx e_minus = std::polar(1.0, -phi);
    return SingleQubitBasis({cplx(s, 0), s * e_plus}, {s * e_minus, cplx(-s, 0)}, "v");
}

SingleQubitBasis computational_basis() {
    return SingleQubitBasis({1.0, 0.0}, {0.0, 1.0}, "comp");
}

SingleQubitBasis plus_minus_basis() {
    const double s = 1.0 / std::sqrt(2.0);
    return SingleQubitBasis({cplx(s, 0), cplx(s, 0)}, {cplx(s, 0), cplx(-s, 0)}, "pm");
}

bool is_unitary(const Mat& U, double tol) {
    if (U.rows() != U.cols()) return false;
    return (U.adjoint() * U - Mat::Identity(U.rows(), U.cols())).cwiseAbs().maxCoeff() <= tol;
}

Mat embed_operator(const Mat& op, const std::vector<int>& targets, int n_qubits) {
    check_targets(targets, n_qubits);
    const int k = int(targets.size());
    if (op.rows() != (Eigen::Index(1) << k) || op.cols() != op.rows())
        throw DimensionMismatch("operator dimension does not match target count");

    const Eigen::Index dim = Eigen::Index(1) << n_qubits;
    Mat out = Mat::Zero(dim, dim);

    std::vector<int> rest;
    std::vector<char> is_target(n_qubits, 0);
    for (int t : targets) is_target[t] = 1;
    for (int q = 0; q < n_qubits; ++q)
        if (!is_target[q]) rest.push_back(q);

    const int m = n_qubits - k;
    // qubit q occupies bit (n-1-q) of a full index
    auto full_index = [&](Eigen::Index sub, Eigen::Index restbits) {
        Eigen::Index idx = 0;
        for (int j = 0; j < k; ++j) {
            const Eigen::Index bit = (sub >> (k - 1 - j)) & 1;
            idx |= bit << (n_qubits - 1 - targets[j]);
        }
        for (int j = 0; j < m; ++j) {
            const Eigen::Index bit = (restbits >> (m - 1 - j)) & 1;
            idx |= bit << (n_qubits - 1 - rest[j]);
        }
        return idx;
    };

    for (Eigen::Index restbits = 0; restbits < (Eigen::Index(1) << m); ++restbits) {
        for (Eigen::Index r = 0; r < op.rows(); ++r) {
            for (Eigen::Index c = 0; c < op.cols(); ++c) {
                if (op(r, c) == cplx(0, 0)) continue;
                out(full_index(r, restbits), full_index(c, restbits)) = op(r, c);
            }
        }
    }
    return out;
}

PureState apply_unitary(const PureState& psi, const Mat& U, const std::vector<int>& targets) {
    if (!is_unitary(U)) throw NonUnitary("operator fails unitarity check");
    const Mat M = embed_operator(U, targets, psi.n_qubits);
    PureState out;
    out.n_qubits = psi.n_qubits;
    out.amps = M * psi.amps;
    return out;
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const Mat& U, const std::vector<int>& targets) {
    if (!is_unitary(U)) throw NonUnitary("operator fails unitarity check");
    const Mat M = embed_operator(U, targets, rho.n_qubits);
    DensityMatrix out;
    out.n_qubits = rho.n_qubits;
    out.rho = M * rho.rho * M.adjoint();
    return out;
}

DensityMatrix apply_kraus(const DensityMatrix& rho, const std::vector<Mat>& ops, const std::vector<int>& targets) {
    DensityMatrix out;
    out.n_qubits = rho.n_qubits;
    out.rho = Mat::Zero(rho.dim(), rho.dim());
    for (const Mat& E : ops) {
        const Mat M = embed_operator(E, targets, rho.n_qubits);
        out.rho += M * rho.rho * M.adjoint();
    }
    return out;
}

namespace {

int pick_outcome(double p0, double p1, std::optional<int> forced, std::mt19937_64* rng) {
    if (forced) {
        if (*forced != 0 && *forced != 1) throw BadParameter("forced outcome must be 0 or 1");
        const double p = (*forced == 0) ? p0 : p1;
        if (p <= kZeroProbTol) throw ZeroProbabilityBranch("forced branch has zero probability");
        return *forced;
    }
    if (!rng) throw BadParameter("sampling measurement needs an RNG");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    return (unif(*rng) * (p0 + p1) < p0) ? 0 : 1;
}

}  // namespace

MeasureResult<PureState> measure(const PureState& psi, int q, const SingleQubitBasis& basis,
                                 std::optional<int> forced, std::mt19937_64* rng) {
    check_targets({q}, psi.n_qubits);
    Mat P0(2, 2), P1(2, 2);
    P0 = basis.b0 * basis.b0.adjoint();
    P1 = basis.b1 * basis.b1.adjoint();
    const Mat M0 = embed_operator(P0, {q}, psi.n_qubits);
    const Mat M1 = embed_operator(P1, {q}, psi.n_qubits);
    const Vec a0 = M0 * psi.amps;
    const Vec a1 = M1 * psi.amps;
    const double p0 = a0.squaredNorm();
    const double p1 = a1.squaredNorm();

    const int outcome = pick_outcome(p0, p1, forced, rng);
    const double p = outcome == 0 ? p0 : p1;
    PureState post;
    post.n_qubits = psi.n_qubits;
    post.amps = (outcome == 0 ? a0 : a1) / std::sqrt(p);
    return {outcome, p, std::move(post)};
}

MeasureResult<DensityMatrix> measure(const DensityMatrix& rho, int q, const SingleQubitBasis& basis,
                                     std::optional<int> forced, std::mt19937_64* rng) {
    check_targets({q}, rho.n_qubits);
    Mat P0 = basis.b0 * basis.b0.adjoint();
    Mat P1 = basis.b1 * basis.b1.adjoint();
    const Mat M0 = embed_operator(P0, {q}, rho.n_qubits);
    const Mat M1 = embed_operator(P1, {q}, rho.n_qubits);
    const double p0 = (M0 * rho.rho).trace().real();
    const double p1 = (M1 * rho.rho).trace().real();

    const int outcome = pick_outcome(p0, p1, forced, rng);
    const double p = outcome == 0 ? p0 : p1;
    const Mat& M = outcome == 0 ? M0 : M1;
    DensityMatrix post;
    post.n_qubits = rho.n_qubits;
    post.rho = (M * rho.rho * M.adjoint()) / p;
    return {outcome, p, std::move(post)};
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    check_targets(keep, rho.n_qubits);
    const int n = rho.n_qubits;
    const int k = int(keep.size());
    const int m = n - k;

    std::vector<int> traced;
    std::vector<char> kept(n, 0);
    for (int q : keep) kept[q] = 1;
    for (int q = 0; q < n; ++q)
        if (!kept[q]) traced.push_back(q);

    auto full_index = [&](Eigen::Index keepbits, Eigen::Index tracebits) {
        Eigen::Index idx = 0;
        for (int j = 0; j < k; ++j) {
            const Eigen::Index bit = (keepbits >> (k - 1 - j)) & 1;
            idx |= bit << (n - 1 - keep[j]);
        }
        for (int j = 0; j < m; ++j) {
            const Eigen::Index bit = (tracebits >> (m - 1 - j)) & 1;
            idx |= bit << (n - 1 - traced[j]);
        }
        return idx;
    };

    const Eigen::Index dk = Eigen::Index(1) << k;
    const Eigen::Index dm = Eigen::Index(1) << m;
    Mat out = Mat::Zero(dk, dk);
    for (Eigen::Index a = 0; a < dk; ++a) {
        for (Eigen::Index b = 0; b < dk; ++b) {
            cplx sum = 0;
            for (Eigen::Index t = 0; t < dm; ++t) sum += rho.rho(full_index(a, t), full_index(b, t));
            out(a, b) = sum;
        }
    }
    DensityMatrix r;
    r.n_qubits = k;
    r.rho = std::move(out);
    return r;
}

double fidelity_against(const DensityMatrix& rho, const PureState& target) {
    if (rho.dim() != target.dim()) throw DimensionMismatch("state dimensions differ");
    return (target.amps.adjoint() * rho.rho * target.amps)(0, 0).real();
}

}  // namespace hjrsp
