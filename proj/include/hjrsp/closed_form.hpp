#pragma once

#include <string>
#include <vector>

#include "hjrsp/noise.hpp"
#include "hjrsp/protocol.hpp"

namespace hjrsp {

// Reference average-fidelity expression for the channel/reconstructor pair,
// evaluated at (theta, phi). Bob1 uses the Bob3 expression; the ideal channel
// returns 1. The CR evaluators throw CRFormulaSingularity when a denominator
// magnitude drops below 1e-12.
double closed_form(const ChannelSpec& spec, Reconstructor r, double theta, double phi);

enum class PauliSpecial { BitFlip, BitPhaseFlip, PhaseFlip, Depolarizing };

std::string pauli_special_name(PauliSpecial kind);  // pauli-bitflip, ...
ChannelSpec pauli_special_channel(PauliSpecial kind, double p_prime);
double pauli_special(PauliSpecial kind, double p_prime, Reconstructor r, double theta, double phi);

// The Bob3 Pauli expression is printed without an overall normalization; the
// default evaluator uses it as printed (the reading that matches simulation).
// Both readings stay available so the calibration report can quantify them.
double pauli_bob3_raw(const ChannelSpec& pauli, double theta, double phi);
double pauli_bob3_normalized(const ChannelSpec& pauli, double theta, double phi);

// Bracket repairs applied while transcribing the CR reference expressions;
// surfaced verbatim in the calibration and CR reports.
const std::vector<std::string>& cr_transcription_notes();

}  // namespace hjrsp
