#include "hjrsp/noise.hpp"

#include <cmath>

namespace hjrsp {

ChannelSpec ChannelSpec::ideal() { return {}; }

ChannelSpec ChannelSpec::ad(double eta_a) {
    ChannelSpec s;
    s.kind = Kind::AD;
    s.p[0] = eta_a;
    s.validate();
    return s;
}

ChannelSpec ChannelSpec::pd(double eta_p) {
    ChannelSpec s;
    s.kind = Kind::PD;
    s.p[0] = eta_p;
    s.validate();
    return s;
}

ChannelSpec ChannelSpec::cd(double big_phi) {
    ChannelSpec s;
    s.kind = Kind::CD;
    s.p[0] = big_phi;
    s.validate();
    return s;
}

ChannelSpec ChannelSpec::cr(double big_theta) {
    ChannelSpec s;
    s.kind = Kind::CR;
    s.p[0] = big_theta;
    s.validate();
    return s;
}

ChannelSpec ChannelSpec::pauli(double p1, double p2, double p3, double p4) {
    ChannelSpec s;
    s.kind = Kind::Pauli;
    s.p = {p1, p2, p3, p4};
    s.validate();
    return s;
}

void ChannelSpec::validate() const {
    switch (kind) {
        case Kind::Ideal:
            return;
        case Kind::AD:
        case Kind::PD:
            if (!(p[0] >= 0.0 && p[0] <= 1.0)) throw BadParameter("damping rate outside [0,1]");
            return;
        case Kind::CD:
        case Kind::CR:
            if (!std::isfinite(p[0])) throw BadParameter("noise angle must be finite");
            return;
        case Kind::Pauli: {
            double sum = 0;
            for (double pi : p) {
                if (!(pi >= 0.0)) throw BadParameter("Pauli probability < 0");
                sum += pi;
            }
            if (std::abs(sum - 1.0) > kExactTol) throw BadParameter("Pauli probabilities must sum to 1");
            return;
        }
    }
    throw BadParameter("unknown channel kind");
}

std::string ChannelSpec::kind_name() const {
    switch (kind) {
        case Kind::Ideal: return "ideal";
        case Kind::AD: return "ad";
        case Kind::PD: return "pd";
        case Kind::CD: return "cd";
        case Kind::CR: return "cr";
        case Kind::Pauli: return "pauli";
    }
    return "?";
}

std::string ChannelSpec::param_name() const {
    switch (kind) {
        case Kind::AD: return "eta_A";
        case Kind::PD: return "eta_P";
        case Kind::CD: return "Phi";
        case Kind::CR: return "Theta";
        default: return "";
    }
}

bool ChannelSpec::has_scalar_param() const {
    return kind == Kind::AD || kind == Kind::PD || kind == Kind::CD || kind == Kind::CR;
}

double ChannelSpec::scalar_param() const {
    if (!has_scalar_param()) throw BadParameter("channel has no scalar parameter");
    return p[0];
}

bool KrausSet::complete(double tol) const {
    if (operators.empty()) return false;
    Mat sum = Mat::Zero(operators[0].rows(), operators[0].cols());
    for (const Mat& E : operators) sum += E.adjoint() * E;
    return (sum - Mat::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff() <= tol;
}

KrausSet kraus_for(const ChannelSpec& spec) {
    spec.validate();
    KrausSet ks;
    Mat E(2, 2);
    switch (spec.kind) {
        case ChannelSpec::Kind::Ideal:
            E << 1, 0, 0, 1;
            ks.operators.push_back(E);
            return ks;
        case ChannelSpec::Kind::AD: {
            const double eta = spec.p[0];
            E << 1, 0, 0, std::sqrt(1.0 - eta);
            ks.operators.push_back(E);
            E << 0, std::sqrt(eta), 0, 0;
            ks.operators.push_back(E);
            return ks;
        }
        case ChannelSpec::Kind::PD: {
            const double eta = spec.p[0];
            E << std::sqrt(1.0 - eta), 0, 0, std::sqrt(1.0 - eta);
            ks.operators.push_back(E);
            E << std::sqrt(eta), 0, 0, 0;
            ks.operators.push_back(E);
            E << 0, 0, 0, std::sqrt(eta);
            ks.operators.push_back(E);
            return ks;
        }
        case ChannelSpec::Kind::CD: {
            E << 1, 0, 0, std::polar(1.0, spec.p[0]);
            ks.operators.push_back(E);
            ks.collective = true;
            return ks;
        }
        case ChannelSpec::Kind::CR: {
            const double c = std::cos(spec.p[0]);
            const double s = std::sin(spec.p[0]);
            E << c, -s, s, c;
            ks.operators.push_back(E);
            ks.collective = true;
            return ks;
        }
        case ChannelSpec::Kind::Pauli: {
            const cplx i(0, 1);
            Mat X(2, 2), Y(2, 2), Z(2, 2), I(2, 2);
            X << 0, 1, 1, 0;
            Y << 0, -i, i, 0;
            Z << 1, 0, 0, -1;
            I << 1, 0, 0, 1;
            ks.operators.push_back(std::sqrt(spec.p[0]) * X);
            ks.operators.push_back(std::sqrt(spec.p[1]) * Y);
            ks.operators.push_back(std::sqrt(spec.p[2]) * Z);
            ks.operators.push_back(std::sqrt(spec.p[3]) * I);
            return ks;
        }
    }
    throw BadParameter("unknown channel kind");
}

DensityMatrix apply_noise(const DensityMatrix& rho, const ChannelSpec& spec) {
    if (rho.n_qubits != 5) throw DimensionMismatch("noise acts on the 5-qubit shared state");
    if (spec.kind == ChannelSpec::Kind::Ideal) return rho;

    const KrausSet ks = kraus_for(spec);
    DensityMatrix out = rho;
    if (ks.collective) {
        for (int q = 1; q <= 4; ++q) out = apply_unitary(out, ks.operators[0], {q});
        return out;
    }
    for (int q = 1; q <= 4; ++q) out = apply_kraus(out, ks.operators, {q});
    return out;
}

}  // namespace hjrsp
