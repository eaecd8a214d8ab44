#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hjrsp/closed_form.hpp"
#include "hjrsp/protocol.hpp"

namespace hjrsp {

enum class Averaging { Weighted, Uniform };

const char* averaging_name(Averaging a);

// Process-wide default convention. Starts as Uniform; calibrate_averaging()
// overwrites it with the empirically selected convention.
Averaging default_averaging();
void set_default_averaging(Averaging a);

// Deterministic variant only. `Weighted` is the plain probability-weighted sum
// over enumerated branches; `Uniform` is the arithmetic mean over branches of
// nonzero probability.
double average_fidelity_sim(const ProtocolConfig& config, Averaging averaging);

struct FidelityPoint {
    ChannelSpec channel;
    std::string label;                    // overrides the derived channel cell when set
    std::string param_name;               // empty when the channel has no scalar parameter
    std::optional<double> param_value;
    double theta = 0.0;
    double phi = 0.0;
    Reconstructor reconstructor = Reconstructor::Bob2;
    Averaging averaging = Averaging::Uniform;
    double f_sim = 0.0;
    std::optional<double> f_closed;       // absent where the reference expression is singular
    std::optional<double> abs_diff;
};

// Families: ideal | ad | pd | cd | cr | pauli | pauli-bitflip |
// pauli-bitphaseflip | pauli-phaseflip | pauli-depolarizing.
// `params` is ignored for ideal and generic pauli (those carry no scalar axis).
struct SweepRequest {
    std::string family;
    std::vector<double> params;
    std::vector<double> thetas;
    std::vector<double> phis;
    std::vector<Reconstructor> reconstructors;
    std::array<double, 4> pauli_probs{0.0, 0.0, 0.0, 1.0};
    Averaging averaging = Averaging::Uniform;
    int threads = 1;
};

bool family_has_param(const std::string& family);
std::string family_param_name(const std::string& family);
ChannelSpec family_channel(const std::string& family, double param,
                           const std::array<double, 4>& pauli_probs);
std::vector<double> default_param_axis(const std::string& family, int steps);

std::vector<double> linspace(double lo, double hi, int steps, bool include_hi = true);
std::vector<double> default_theta_axis();
std::vector<double> default_phi_axis();

// Ordered by grid index (param, theta, phi, reconstructor) regardless of the
// number of worker threads.
std::vector<FidelityPoint> sweep(const SweepRequest& request);

void write_points_csv(std::ostream& os, const std::vector<FidelityPoint>& points);

struct CalibrationEntry {
    std::string channel;
    Averaging averaging;
    double worst_abs_diff = 0.0;
    bool votes = true;                    // cr rows are informational only
};

struct CalibrationReport {
    std::vector<CalibrationEntry> entries;
    Averaging chosen = Averaging::Uniform;
    std::vector<std::string> notes;
};

// Fixed 3x3x3 grids per channel, both conventions, both reconstructors.
// Chooses the convention with the smaller worst-case |f_sim - f_closed| over
// the voting channels, installs it as the process default, and reports both
// error tables. Throws CalibrationAmbiguous when neither convention reaches
// worst-case error < 1e-4.
CalibrationReport calibrate_averaging();

struct CrReport {
    int cells_total = 0;
    int cells_evaluated = 0;
    int cells_singular = 0;
    double max_abs_diff_bob2 = 0.0;
    double max_abs_diff_bob3 = 0.0;
    // Full four-outcome helper enumeration with the correction keyed on the
    // consulted helper: largest |avg(consulted=Bob1) - avg(consulted=Bob3)|.
    double max_helper_asymmetry = 0.0;
    std::vector<std::string> notes;
};

// 7x7x7 grid in (Theta, theta, phi) chosen away from the singular set of the
// reference expressions; cells that still hit a singularity are skipped and
// counted. Deterministic.
CrReport cr_deviation_report(Averaging averaging);

}  // namespace hjrsp
