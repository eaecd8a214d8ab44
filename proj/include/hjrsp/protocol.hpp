#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hjrsp/noise.hpp"
#include "hjrsp/qsim.hpp"

namespace hjrsp {

enum class Reconstructor { Bob1, Bob2, Bob3 };
enum class Helper { Bob1, Bob3 };

std::string reconstructor_name(Reconstructor r);

struct ProtocolConfig {
    double theta = 0.0;
    double phi = 0.0;
    Reconstructor reconstructor = Reconstructor::Bob2;
    bool probabilistic = false;
    double alpha = 0.0;  // probabilistic only
    double beta = 0.0;
    ChannelSpec channel = ChannelSpec::ideal();
    // Which agent the reconstructor asks for the computational-basis result.
    // Identical outcome sets on the enumerated ideal state; meaningful when
    // sampling a noisy trajectory.
    Helper consulted_helper = Helper::Bob1;

    void validate() const;
};

// One protocol branch. Helper outcome encoding: computational-basis
// measurements record 0/1, plus/minus measurements record 0 for |+>, 1 for |->.
struct OutcomeRecord {
    int alice1 = 0;  // 0 = u0, 1 = u1
    int alice2 = 0;  // 0 = v0, 1 = v1
    std::map<std::string, int> helper_outcomes;
    std::optional<int> ancilla;
    std::string correction;            // I | X | Z | iY | none
    std::optional<int> unitary_used;   // 0 = U0, 1 = U1
    double branch_probability = 0.0;
    DensityMatrix receiver_state;  // 1 qubit, after correction
    double fidelity = 0.0;
    bool success = true;
};

struct ProtocolRun {
    std::vector<OutcomeRecord> records;
    // Joint-outcome mass outside the tabulated domain: helper qubits
    // disagreeing where the correction table requires a shared bit.
    // Zero on the ideal state; conservation holds as
    //   sum(branch_probability) + excluded_probability = 1.
    double excluded_probability = 0.0;
    std::string note;
};

struct RunMode {
    enum class Kind { Enumerate, Sample };
    Kind kind = Kind::Enumerate;
    std::uint64_t seed = 0;

    static RunMode enumerate() { return {}; }
    static RunMode sample(std::uint64_t seed) { return {Kind::Sample, seed}; }
};

PureState build_cluster_state();
PureState build_nonmax_cluster(double alpha, double beta);

// diag(1, e^{2 i phi})
Mat phase_gate(double phi);

// I, X, Z, or iY as a 2x2 matrix; iY = [[0,1],[-1,0]]
Mat pauli_matrix(const std::string& label);

std::string det_correction_bob2(int u, int v, int helper_bit);
std::string det_correction_bob3(int u, int v, int pm, int comp);

struct ProbCorrection {
    int unitary;  // 0 = U0, 1 = U1
    std::string pauli;
};
ProbCorrection prob_correction_bob2(int u, int v, int helper_bit);
ProbCorrection prob_correction_bob3(int u, int v, int pm, int comp);

std::pair<Mat, Mat> u0_u1_unitaries(double alpha, double beta);

// Row dump of one of the eight correction tables (index 1..8).
struct TableDump {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};
TableDump correction_table(int index);

ProtocolRun run_deterministic(const ProtocolConfig& cfg, const RunMode& mode = RunMode::enumerate());
ProtocolRun run_probabilistic(const ProtocolConfig& cfg, const RunMode& mode = RunMode::enumerate());

}  // namespace hjrsp
