#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "hjrsp/qsim.hpp"

using namespace hjrsp;

namespace {

const cplx kI(0.0, 1.0);

PureState random_state(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Vec a(1 << n);
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = cplx(g(rng), g(rng));
    a /= a.norm();
    return PureState(n, a);
}

Mat pauli_x() {
    Mat x = Mat::Zero(2, 2);
    x(0, 1) = 1;
    x(1, 0) = 1;
    return x;
}

}  // namespace

TEST_CASE("pure state validation") {
    Vec ok(2);
    ok << 1.0, 0.0;
    CHECK_NOTHROW(PureState(1, ok).validate());

    Vec unnorm(2);
    unnorm << 1.0, 1.0;
    CHECK_THROWS_AS(PureState(1, unnorm).validate(), NonUnitInput);

    Vec odd(3);
    odd << 1.0, 0.0, 0.0;
    CHECK_THROWS_AS(PureState(1, odd).validate(), DimensionMismatch);
}

TEST_CASE("density matrix validation") {
    std::mt19937_64 rng(7);
    DensityMatrix rho = DensityMatrix::from_pure(random_state(2, rng));
    CHECK_NOTHROW(rho.validate());
    CHECK(rho.purity() == doctest::Approx(1.0).epsilon(1e-12));

    DensityMatrix bad_trace = rho;
    bad_trace.rho *= 2.0;
    CHECK_THROWS_AS(bad_trace.validate(), NonUnitInput);

    CHECK_THROWS_AS(DensityMatrix(2, Mat::Identity(3, 3) / 3.0), DimensionMismatch);
}

TEST_CASE("target state amplitudes") {
    const double th = 0.7, ph = 2.1;
    PureState t = make_target_state(th, ph);
    REQUIRE(t.n_qubits == 1);
    CHECK(std::abs(t.amps(0) - std::cos(th)) < kExactTol);
    CHECK(std::abs(t.amps(1) - std::sin(th) * std::exp(kI * ph)) < kExactTol);
}

TEST_CASE("measurement bases are orthonormal") {
    const double a = std::cos(0.9), b = std::sin(0.9);
    for (const SingleQubitBasis& basis :
         {u_basis(a, b), v_basis(1.3), computational_basis(), plus_minus_basis()}) {
        CAPTURE(basis.label);
        CHECK(std::abs(basis.b0.squaredNorm() - 1.0) < kExactTol);
        CHECK(std::abs(basis.b1.squaredNorm() - 1.0) < kExactTol);
        CHECK(std::abs(basis.b0.dot(basis.b1)) < kExactTol);
    }
    CHECK_THROWS_AS(u_basis(0.9, 0.9), NonUnitInput);
}

TEST_CASE("basis vectors match their definitions") {
    const double a = std::cos(0.4), b = std::sin(0.4), ph = 1.9;
    SingleQubitBasis u = u_basis(a, b);
    CHECK(std::abs(u.b0(0) - a) < kExactTol);
    CHECK(std::abs(u.b0(1) - b) < kExactTol);
    CHECK(std::abs(u.b1(0) - b) < kExactTol);
    CHECK(std::abs(u.b1(1) + a) < kExactTol);

    SingleQubitBasis v = v_basis(ph);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(v.b0(0) - r) < kExactTol);
    CHECK(std::abs(v.b0(1) - r * std::exp(kI * ph)) < kExactTol);
    CHECK(std::abs(v.b1(0) - r * std::exp(-kI * ph)) < kExactTol);
    CHECK(std::abs(v.b1(1) + r) < kExactTol);
}

TEST_CASE("unitarity check") {
    CHECK(is_unitary(pauli_x()));
    Mat notu = Mat::Identity(2, 2);
    notu(0, 0) = 1.5;
    CHECK_FALSE(is_unitary(notu));
}

TEST_CASE("apply_unitary flips the addressed qubit") {
    Vec a = Vec::Zero(8);
    a(0) = 1;  // |000>
    PureState psi(3, a);
    for (int q = 0; q < 3; ++q) {
        PureState out = apply_unitary(psi, pauli_x(), {q});
        CHECK(std::abs(out.amps(1 << (2 - q)) - 1.0) < kExactTol);
    }
}

TEST_CASE("first target is the most significant bit of the operator index") {
    // X (x) I on qubits {0,1} of |00> lands on |10>.
    Mat xi = Mat::Zero(4, 4);
    xi(0, 2) = 1;
    xi(1, 3) = 1;
    xi(2, 0) = 1;
    xi(3, 1) = 1;
    Vec a = Vec::Zero(4);
    a(0) = 1;
    PureState out = apply_unitary(PureState(2, a), xi, {0, 1});
    CHECK(std::abs(out.amps(2) - 1.0) < kExactTol);
    // Reversed target order addresses qubit 1 with the X factor instead.
    out = apply_unitary(PureState(2, a), xi, {1, 0});
    CHECK(std::abs(out.amps(1) - 1.0) < kExactTol);
}

TEST_CASE("apply_unitary rejects bad input") {
    Vec a = Vec::Zero(4);
    a(0) = 1;
    PureState psi(2, a);
    Mat notu = Mat::Identity(2, 2);
    notu(1, 1) = 2.0;
    CHECK_THROWS_AS(apply_unitary(psi, notu, {0}), NonUnitary);
    CHECK_THROWS_AS(apply_unitary(psi, pauli_x(), {2}), BadTargets);
    CHECK_THROWS_AS(apply_unitary(psi, pauli_x(), {-1}), BadTargets);
    Mat xi = Mat::Identity(4, 4);
    CHECK_THROWS_AS(apply_unitary(psi, xi, {0, 0}), BadTargets);
    CHECK_THROWS_AS(apply_unitary(psi, xi, {0}), DimensionMismatch);
}

TEST_CASE("embed_operator agrees with apply_unitary") {
    std::mt19937_64 rng(11);
    PureState psi = random_state(3, rng);
    Mat big = embed_operator(pauli_x(), {1}, 3);
    Vec direct = big * psi.amps;
    PureState via = apply_unitary(psi, pauli_x(), {1});
    CHECK((direct - via.amps).norm() < kExactTol);
}

TEST_CASE("measurement outcomes are exhaustive and normalized") {
    std::mt19937_64 rng(23);
    PureState psi = random_state(3, rng);
    SingleQubitBasis basis = u_basis(std::cos(1.2), std::sin(1.2));
    double total = 0.0;
    for (int out = 0; out < 2; ++out) {
        auto m = measure(psi, 1, basis, out);
        CHECK(m.outcome == out);
        CHECK(std::abs(m.post.norm_sq() - 1.0) < kExactTol);
        // Born rule against the explicit projector.
        Mat proj = embed_operator(
            (out == 0 ? basis.b0 : basis.b1) * (out == 0 ? basis.b0 : basis.b1).adjoint(), {1}, 3);
        double born = psi.amps.dot(proj * psi.amps).real();
        CHECK(m.prob == doctest::Approx(born).epsilon(1e-12));
        total += m.prob;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("density matrix measurement matches pure state measurement") {
    std::mt19937_64 rng(31);
    PureState psi = random_state(3, rng);
    DensityMatrix rho = DensityMatrix::from_pure(psi);
    SingleQubitBasis basis = v_basis(0.8);
    for (int out = 0; out < 2; ++out) {
        auto mp = measure(psi, 2, basis, out);
        auto md = measure(rho, 2, basis, out);
        CHECK(md.prob == doctest::Approx(mp.prob).epsilon(1e-12));
        CHECK((md.post.rho - DensityMatrix::from_pure(mp.post).rho).norm() < 1e-10);
    }
}

TEST_CASE("forced zero probability branch is rejected") {
    Vec a = Vec::Zero(2);
    a(0) = 1;  // |0>
    PureState psi(1, a);
    CHECK_THROWS_AS(measure(psi, 0, computational_basis(), 1), ZeroProbabilityBranch);
}

TEST_CASE("measurement without forced outcome needs an rng") {
    Vec a = Vec::Zero(2);
    a(0) = 1;
    PureState psi(1, a);
    CHECK_THROWS_AS(measure(psi, 0, computational_basis()), BadParameter);
    std::mt19937_64 rng(1);
    auto m = measure(psi, 0, computational_basis(), std::nullopt, &rng);
    CHECK(m.outcome == 0);
    CHECK(m.prob == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sampled measurement is seed deterministic") {
    std::mt19937_64 r1(99);
    PureState psi = random_state(4, r1);
    std::mt19937_64 s1(5), s2(5);
    auto a = measure(psi, 2, plus_minus_basis(), std::nullopt, &s1);
    auto b = measure(psi, 2, plus_minus_basis(), std::nullopt, &s2);
    CHECK(a.outcome == b.outcome);
    CHECK(a.prob == b.prob);
}

TEST_CASE("measure validates the qubit index") {
    std::mt19937_64 rng(3);
    PureState psi = random_state(2, rng);
    CHECK_THROWS_AS(measure(psi, 2, computational_basis(), 0), BadTargets);
}

TEST_CASE("partial trace separates a product state") {
    std::mt19937_64 rng(17);
    PureState a = random_state(1, rng);
    PureState b = random_state(1, rng);
    Vec joint(4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) joint(i * 2 + j) = a.amps(i) * b.amps(j);
    DensityMatrix rho = DensityMatrix::from_pure(PureState(2, joint));
    DensityMatrix ra = partial_trace(rho, {0});
    DensityMatrix rb = partial_trace(rho, {1});
    CHECK((ra.rho - DensityMatrix::from_pure(a).rho).norm() < 1e-10);
    CHECK((rb.rho - DensityMatrix::from_pure(b).rho).norm() < 1e-10);
}

TEST_CASE("partial trace output follows the keep order") {
    Vec a = Vec::Zero(4);
    a(1) = 1;  // |01>
    DensityMatrix rho = DensityMatrix::from_pure(PureState(2, a));
    DensityMatrix keep01 = partial_trace(rho, {0, 1});
    DensityMatrix keep10 = partial_trace(rho, {1, 0});
    CHECK(std::abs(keep01.rho(1, 1) - 1.0) < kExactTol);  // |01><01|
    CHECK(std::abs(keep10.rho(2, 2) - 1.0) < kExactTol);  // |10><10|
    CHECK_THROWS_AS(partial_trace(rho, {0, 0}), BadTargets);
    CHECK_THROWS_AS(partial_trace(rho, {2}), BadTargets);
}

TEST_CASE("entangled pair traces to a maximally mixed qubit") {
    Vec a = Vec::Zero(4);
    a(0) = a(3) = 1.0 / std::sqrt(2.0);
    DensityMatrix rho = DensityMatrix::from_pure(PureState(2, a));
    DensityMatrix one = partial_trace(rho, {0});
    CHECK((one.rho - Mat::Identity(2, 2) * 0.5).norm() < 1e-12);
    CHECK(one.purity() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("fidelity against a target state") {
    PureState t = make_target_state(0.6, 1.1);
    CHECK(fidelity_against(DensityMatrix::from_pure(t), t) ==
          doctest::Approx(1.0).epsilon(1e-12));

    Vec orth(2);
    orth << -std::conj(t.amps(1)), std::conj(t.amps(0));
    CHECK(fidelity_against(DensityMatrix::from_pure(PureState(1, orth)), t) ==
          doctest::Approx(0.0).epsilon(1e-12));

    DensityMatrix mixed(1, Mat::Identity(2, 2) * 0.5);
    CHECK(fidelity_against(mixed, t) == doctest::Approx(0.5).epsilon(1e-12));

    DensityMatrix big(2, Mat::Identity(4, 4) * 0.25);
    CHECK_THROWS_AS(fidelity_against(big, t), DimensionMismatch);
}

TEST_CASE("apply_kraus reproduces a unitary channel") {
    std::mt19937_64 rng(41);
    PureState psi = random_state(2, rng);
    DensityMatrix rho = DensityMatrix::from_pure(psi);
    DensityMatrix via_kraus = apply_kraus(rho, {pauli_x()}, {1});
    DensityMatrix via_unitary = apply_unitary(rho, pauli_x(), {1});
    CHECK((via_kraus.rho - via_unitary.rho).norm() < 1e-12);
}

TEST_CASE("apply_kraus keeps trace for a complete set") {
    const double eta = 0.37;
    Mat e0 = Mat::Zero(2, 2), e1 = Mat::Zero(2, 2);
    e0(0, 0) = 1;
    e0(1, 1) = std::sqrt(1.0 - eta);
    e1(0, 1) = std::sqrt(eta);
    std::mt19937_64 rng(43);
    DensityMatrix rho = DensityMatrix::from_pure(random_state(3, rng));
    DensityMatrix out = apply_kraus(rho, {e0, e1}, {2});
    CHECK(std::abs(out.rho.trace().real() - 1.0) < 1e-12);
    CHECK_NOTHROW(out.validate());
}
