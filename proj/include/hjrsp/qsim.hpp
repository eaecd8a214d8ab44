#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hjrsp/errors.hpp"

namespace hjrsp {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline constexpr double kExactTol = 1e-12;    // linear-algebra identities
inline constexpr double kUnitaryTol = 1e-10;  // unitarity / PSD checks
inline constexpr double kZeroProbTol = 1e-15; // forced-branch cutoff

// Amplitude index bit i (most significant first) is qubit i, so a basis
// label reads left to right in register order.
struct PureState {
    int n_qubits = 0;
    Vec amps;

    PureState() = default;
    PureState(int n, Vec a);

    std::size_t dim() const { return amps.size(); }
    double norm_sq() const { return amps.squaredNorm(); }
    void validate() const;
};

struct DensityMatrix {
    int n_qubits = 0;
    Mat rho;

    DensityMatrix() = default;
    DensityMatrix(int n, Mat m);
    static DensityMatrix from_pure(const PureState& psi);

    std::size_t dim() const { return rho.rows(); }
    double purity() const { return (rho * rho).trace().real(); }
    double min_eigenvalue() const;
    void validate() const;
};

struct SingleQubitBasis {
    Eigen::Vector2cd b0;
    Eigen::Vector2cd b1;
    std::string label;

    SingleQubitBasis(Eigen::Vector2cd e0, Eigen::Vector2cd e1, std::string lbl);
};

PureState make_target_state(double theta, double phi);

// {a|0>+b|1>, b|0>-a|1>}; requires a^2+b^2 = 1.
SingleQubitBasis u_basis(double a, double b);

// {(|0>+e^{i phi}|1>)/sqrt2, (e^{-i phi}|0>-|1>)/sqrt2}
SingleQubitBasis v_basis(double phi);

SingleQubitBasis computational_basis();
SingleQubitBasis plus_minus_basis();

bool is_unitary(const Mat& U, double tol = kUnitaryTol);

// U acts on `targets` (first target = most significant bit of U's index),
// identity elsewhere.
PureState apply_unitary(const PureState& psi, const Mat& U, const std::vector<int>& targets);
DensityMatrix apply_unitary(const DensityMatrix& rho, const Mat& U, const std::vector<int>& targets);

DensityMatrix apply_kraus(const DensityMatrix& rho, const std::vector<Mat>& ops, const std::vector<int>& targets);

template <typename StateT>
struct MeasureResult {
    int outcome;
    double prob;
    StateT post;
};

MeasureResult<PureState> measure(const PureState& psi, int q, const SingleQubitBasis& basis,
                                 std::optional<int> forced = std::nullopt,
                                 std::mt19937_64* rng = nullptr);
MeasureResult<DensityMatrix> measure(const DensityMatrix& rho, int q, const SingleQubitBasis& basis,
                                     std::optional<int> forced = std::nullopt,
                                     std::mt19937_64* rng = nullptr);

// Output qubit order follows `keep`.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

// <T| rho |T>
double fidelity_against(const DensityMatrix& rho, const PureState& target);

Mat embed_operator(const Mat& op, const std::vector<int>& targets, int n_qubits);

}  // namespace hjrsp
