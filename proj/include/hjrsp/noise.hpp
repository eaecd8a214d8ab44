#pragma once

#include <array>
#include <string>
#include <vector>

#include "hjrsp/qsim.hpp"

namespace hjrsp {

// Ideal | AD(eta_A) | PD(eta_P) | CD(Phi) | CR(Theta) | Pauli(p1,p2,p3,p4)
struct ChannelSpec {
    enum class Kind { Ideal, AD, PD, CD, CR, Pauli };

    Kind kind = Kind::Ideal;
    std::array<double, 4> p{0, 0, 0, 0};  // scalar channels use p[0]; Pauli uses all four

    static ChannelSpec ideal();
    static ChannelSpec ad(double eta_a);
    static ChannelSpec pd(double eta_p);
    static ChannelSpec cd(double big_phi);
    static ChannelSpec cr(double big_theta);
    static ChannelSpec pauli(double p1, double p2, double p3, double p4);

    void validate() const;
    std::string kind_name() const;   // ideal | ad | pd | cd | cr | pauli
    std::string param_name() const;  // eta_A | eta_P | Phi | Theta | "" (ideal, pauli)
    bool has_scalar_param() const;
    double scalar_param() const;

    bool operator==(const ChannelSpec&) const = default;
};

struct KrausSet {
    std::vector<Mat> operators;
    bool collective = false;  // single unitary applied to every travel qubit

    // sum E^dag E = I within 1e-10
    bool complete(double tol = kUnitaryTol) const;
};

KrausSet kraus_for(const ChannelSpec& spec);

// Channel action on the freshly shared 5-qubit state: identity on qubit 0,
// the channel on travel qubits 1..4 (independently for Kraus channels, the
// same unitary for collective ones).
DensityMatrix apply_noise(const DensityMatrix& rho, const ChannelSpec& spec);

}  // namespace hjrsp
