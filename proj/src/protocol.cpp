#include "hjrsp/protocol.hpp"

#include <cmath>

namespace hjrsp {

namespace {

constexpr int kS1 = 0, kS2 = 1, kR1 = 2, kR2 = 3, kR3 = 4;
constexpr int kAncilla = 5;

// [u][v][helper bit]
const char* const kDetBob2[2][2][2] = {
    {{"I", "X"}, {"Z", "iY"}},
    {{"iY", "Z"}, {"X", "I"}},
};

// [u][v][pm][comp]; pm 0 = |+>, 1 = |->
const char* const kDetBob3[2][2][2][2] = {
    {{{"I", "X"}, {"Z", "iY"}}, {{"Z", "iY"}, {"I", "X"}}},
    {{{"iY", "Z"}, {"X", "I"}}, {{"X", "I"}, {"iY", "Z"}}},
};

// [u][v]; the two-qubit unitary index equals the helper bit
const char* const kProbBob2[2][2] = {{"I", "Z"}, {"iY", "X"}};

// [u][v][pm]; the two-qubit unitary index equals Bob2's computational bit
const char* const kProbBob3[2][2][2] = {
    {{"I", "Z"}, {"Z", "I"}},
    {{"iY", "X"}, {"X", "iY"}},
};

void check_bit(int b, const char* what) {
    if (b != 0 && b != 1) throw KeyNotInTable(std::string(what) + " must be 0 or 1");
}

std::optional<MeasureResult<DensityMatrix>> try_measure(const DensityMatrix& rho, int q,
                                                        const SingleQubitBasis& basis, int forced) {
    try {
        return measure(rho, q, basis, forced);
    } catch (const ZeroProbabilityBranch&) {
        return std::nullopt;
    }
}

DensityMatrix apply_correction(const DensityMatrix& one_qubit, const std::string& label) {
    if (label == "none") return one_qubit;
    const Mat P = pauli_matrix(label);
    DensityMatrix out;
    out.n_qubits = 1;
    out.rho = P * one_qubit.rho * P.adjoint();
    return out;
}

Mat kron(const Mat& A, const Mat& B) {
    Mat out(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index r = 0; r < A.rows(); ++r)
        for (Eigen::Index c = 0; c < A.cols(); ++c)
            out.block(r * B.rows(), c * B.cols(), B.rows(), B.cols()) = A(r, c) * B;
    return out;
}

}  // namespace

std::string reconstructor_name(Reconstructor r) {
    switch (r) {
        case Reconstructor::Bob1: return "bob1";
        case Reconstructor::Bob2: return "bob2";
        case Reconstructor::Bob3: return "bob3";
    }
    return "?";
}

void ProtocolConfig::validate() const {
    if (!std::isfinite(theta) || !std::isfinite(phi)) throw BadParameter("angles must be finite");
    channel.validate();
    if (probabilistic) {
        if (std::abs(alpha * alpha + beta * beta - 1.0) > kExactTol)
            throw BadParameter("alpha^2 + beta^2 must be 1");
        if (!(alpha > 0.0)) throw BadParameter("alpha must be positive");
        if (!(beta > 0.0) || beta > alpha + kExactTol)
            throw BadParameter("beta must satisfy 0 < beta <= alpha");
    }
}

PureState build_cluster_state() {
    Vec v = Vec::Zero(32);
    v[0b00000] = 0.5;
    v[0b00111] = 0.5;
    v[0b11010] = 0.5;
    v[0b11101] = 0.5;
    return PureState(5, std::move(v));
}

PureState build_nonmax_cluster(double alpha, double beta) {
    if (std::abs(alpha * alpha + beta * beta - 1.0) > kExactTol)
        throw NonUnitInput("alpha^2 + beta^2 must be 1");
    const double s = 1.0 / std::sqrt(2.0);
    Vec v = Vec::Zero(32);
    v[0b00000] = alpha * s;
    v[0b00111] = alpha * s;
    v[0b11010] = beta * s;
    v[0b11101] = beta * s;
    return PureState(5, std::move(v));
}

Mat phase_gate(double phi) {
    Mat P(2, 2);
    P << 1, 0, 0, std::polar(1.0, 2.0 * phi);
    return P;
}

Mat pauli_matrix(const std::string& label) {
    Mat M(2, 2);
    if (label == "I") {
        M << 1, 0, 0, 1;
    } else if (label == "X") {
        M << 0, 1, 1, 0;
    } else if (label == "Z") {
        M << 1, 0, 0, -1;
    } else if (label == "iY") {
        M << 0, 1, -1, 0;
    } else {
        throw KeyNotInTable("unknown correction label: " + label);
    }
    return M;
}

std::string det_correction_bob2(int u, int v, int helper_bit) {
    check_bit(u, "alice1 outcome");
    check_bit(v, "alice2 outcome");
    check_bit(helper_bit, "helper outcome");
    return kDetBob2[u][v][helper_bit];
}

std::string det_correction_bob3(int u, int v, int pm, int comp) {
    check_bit(u, "alice1 outcome");
    check_bit(v, "alice2 outcome");
    check_bit(pm, "plus/minus outcome");
    check_bit(comp, "computational outcome");
    return kDetBob3[u][v][pm][comp];
}

ProbCorrection prob_correction_bob2(int u, int v, int helper_bit) {
    check_bit(u, "alice1 outcome");
    check_bit(v, "alice2 outcome");
    check_bit(helper_bit, "helper outcome");
    return {helper_bit, kProbBob2[u][v]};
}

ProbCorrection prob_correction_bob3(int u, int v, int pm, int comp) {
    check_bit(u, "alice1 outcome");
    check_bit(v, "alice2 outcome");
    check_bit(pm, "plus/minus outcome");
    check_bit(comp, "computational outcome");
    return {comp, kProbBob3[u][v][pm]};
}

std::pair<Mat, Mat> u0_u1_unitaries(double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0)) throw BadParameter("alpha and beta must be positive");
    if (std::abs(alpha * alpha + beta * beta - 1.0) > kExactTol)
        throw BadParameter("alpha^2 + beta^2 must be 1");
    if (beta > alpha + kExactTol) throw BadParameter("beta > alpha makes U0 non-unitary");
    const double r = beta / alpha;
    const double s = std::sqrt(std::max(0.0, 1.0 - r * r));
    Mat U0(4, 4);
    U0 << r, s, 0, 0,
          0, 0, 0, -1,
          0, 0, 1, 0,
          s, -r, 0, 0;
    Mat XI = Mat::Zero(4, 4);
    XI(0, 2) = 1;
    XI(2, 0) = 1;
    XI(1, 3) = 1;
    XI(3, 1) = 1;
    return {U0, U0 * XI};
}

TableDump correction_table(int index) {
    const auto ul = [](int u) { return std::string(u == 0 ? "u0" : "u1"); };
    const auto vl = [](int v) { return std::string(v == 0 ? "v0" : "v1"); };
    const auto bl = [](int b) { return std::string(b == 0 ? "0" : "1"); };
    const auto pl = [](int p) { return std::string(p == 0 ? "+" : "-"); };
    const auto Ul = [](int k) { return std::string(k == 0 ? "U0" : "U1"); };

    TableDump t;
    switch (index) {
        case 1:
        case 3: {
            const int u = (index == 1) ? 0 : 1;
            t.header = {"alice1", "alice2", "helper", "correction"};
            for (int v = 0; v < 2; ++v)
                for (int h = 0; h < 2; ++h)
                    t.rows.push_back({ul(u), vl(v), bl(h), det_correction_bob2(u, v, h)});
            return t;
        }
        case 2:
        case 4: {
            const int u = (index == 2) ? 0 : 1;
            t.header = {"alice1", "alice2", "bob1", "bob2", "correction"};
            for (int v = 0; v < 2; ++v)
                for (int c = 0; c < 2; ++c)
                    for (int p = 0; p < 2; ++p)
                        t.rows.push_back({ul(u), vl(v), pl(p), bl(c), det_correction_bob3(u, v, p, c)});
            return t;
        }
        case 5:
        case 7: {
            const int u = (index == 5) ? 0 : 1;
            t.header = {"alice1", "alice2", "helper", "unitary", "correction"};
            for (int v = 0; v < 2; ++v)
                for (int h = 0; h < 2; ++h) {
                    const ProbCorrection pc = prob_correction_bob2(u, v, h);
                    t.rows.push_back({ul(u), vl(v), bl(h), Ul(pc.unitary), pc.pauli});
                }
            return t;
        }
        case 6:
        case 8: {
            const int u = (index == 6) ? 0 : 1;
            t.header = {"alice1", "alice2", "bob1", "bob2", "unitary", "correction"};
            for (int v = 0; v < 2; ++v)
                for (int c = 0; c < 2; ++c)
                    for (int p = 0; p < 2; ++p) {
                        const ProbCorrection pc = prob_correction_bob3(u, v, p, c);
                        t.rows.push_back({ul(u), vl(v), pl(p), bl(c), Ul(pc.unitary), pc.pauli});
                    }
            return t;
        }
        default:
            throw KeyNotInTable("table index must be 1..8");
    }
}

namespace {

// Shared Alice stage: force u on S1, phase gate on S2 when u = u0, force v on S2.
struct AliceBranch {
    int u, v;
    double prob;
    DensityMatrix state;
};

std::vector<AliceBranch> alice_branches(const DensityMatrix& rho, double theta, double phi) {
    const SingleQubitBasis ub = u_basis(std::cos(theta), std::sin(theta));
    const SingleQubitBasis vb = v_basis(phi);
    std::vector<AliceBranch> out;
    for (int u = 0; u < 2; ++u) {
        auto m1 = try_measure(rho, kS1, ub, u);
        if (!m1) continue;
        DensityMatrix s = std::move(m1->post);
        if (u == 0) s = apply_unitary(s, phase_gate(phi), {kS2});
        for (int v = 0; v < 2; ++v) {
            auto m2 = try_measure(s, kS2, vb, v);
            if (!m2) continue;
            out.push_back({u, v, m1->prob * m2->prob, std::move(m2->post)});
        }
    }
    return out;
}

OutcomeRecord finish_deterministic(const DensityMatrix& projected, int receiver_q, int u, int v,
                                   std::map<std::string, int> helpers, const std::string& correction,
                                   double prob, const PureState& target) {
    OutcomeRecord rec;
    rec.alice1 = u;
    rec.alice2 = v;
    rec.helper_outcomes = std::move(helpers);
    rec.correction = correction;
    rec.branch_probability = prob;
    rec.receiver_state = apply_correction(partial_trace(projected, {receiver_q}), correction);
    rec.fidelity = fidelity_against(rec.receiver_state, target);
    rec.success = true;
    return rec;
}

}  // namespace

ProtocolRun run_deterministic(const ProtocolConfig& cfg, const RunMode& mode) {
    cfg.validate();
    if (cfg.probabilistic) throw BadParameter("config is probabilistic");

    const PureState target = make_target_state(cfg.theta, cfg.phi);
    const SingleQubitBasis comp = computational_basis();
    const SingleQubitBasis pm = plus_minus_basis();

    DensityMatrix rho = apply_noise(DensityMatrix::from_pure(build_cluster_state()), cfg.channel);

    ProtocolRun run;

    if (mode.kind == RunMode::Kind::Sample) {
        std::mt19937_64 rng(mode.seed);
        const SingleQubitBasis ub = u_basis(std::cos(cfg.theta), std::sin(cfg.theta));
        const SingleQubitBasis vb = v_basis(cfg.phi);
        auto m1 = measure(rho, kS1, ub, std::nullopt, &rng);
        DensityMatrix s = std::move(m1.post);
        if (m1.outcome == 0) s = apply_unitary(s, phase_gate(cfg.phi), {kS2});
        auto m2 = measure(s, kS2, vb, std::nullopt, &rng);
        double prob = m1.prob * m2.prob;

        if (cfg.reconstructor == Reconstructor::Bob2) {
            auto h1 = measure(m2.post, kR1, comp, std::nullopt, &rng);
            auto h3 = measure(h1.post, kR3, comp, std::nullopt, &rng);
            prob *= h1.prob * h3.prob;
            const int consulted = cfg.consulted_helper == Helper::Bob1 ? h1.outcome : h3.outcome;
            run.records.push_back(finish_deterministic(
                h3.post, kR2, m1.outcome, m2.outcome,
                {{"bob1", h1.outcome}, {"bob3", h3.outcome}},
                det_correction_bob2(m1.outcome, m2.outcome, consulted), prob, target));
        } else {
            const bool bob3 = cfg.reconstructor == Reconstructor::Bob3;
            const int pm_q = bob3 ? kR1 : kR3;
            const int receiver_q = bob3 ? kR3 : kR1;
            auto ma = measure(m2.post, pm_q, pm, std::nullopt, &rng);
            auto mb = measure(ma.post, kR2, comp, std::nullopt, &rng);
            prob *= ma.prob * mb.prob;
            run.records.push_back(finish_deterministic(
                mb.post, receiver_q, m1.outcome, m2.outcome,
                {{bob3 ? "bob1" : "bob3", ma.outcome}, {"bob2", mb.outcome}},
                det_correction_bob3(m1.outcome, m2.outcome, ma.outcome, mb.outcome), prob, target));
        }
        return run;
    }

    for (const AliceBranch& ab : alice_branches(rho, cfg.theta, cfg.phi)) {
        if (cfg.reconstructor == Reconstructor::Bob2) {
            for (int h = 0; h < 2; ++h) {
                auto mr1 = try_measure(ab.state, kR1, comp, h);
                if (!mr1) continue;
                if (auto anti = try_measure(mr1->post, kR3, comp, 1 - h))
                    run.excluded_probability += ab.prob * mr1->prob * anti->prob;
                auto mr3 = try_measure(mr1->post, kR3, comp, h);
                if (!mr3) continue;
                run.records.push_back(finish_deterministic(
                    mr3->post, kR2, ab.u, ab.v, {{"bob1", h}, {"bob3", h}},
                    det_correction_bob2(ab.u, ab.v, h), ab.prob * mr1->prob * mr3->prob, target));
            }
        } else {
            const bool bob3 = cfg.reconstructor == Reconstructor::Bob3;
            const int pm_q = bob3 ? kR1 : kR3;
            const int receiver_q = bob3 ? kR3 : kR1;
            const std::string pm_key = bob3 ? "bob1" : "bob3";
            for (int p = 0; p < 2; ++p) {
                auto ma = try_measure(ab.state, pm_q, pm, p);
                if (!ma) continue;
                for (int c = 0; c < 2; ++c) {
                    auto mb = try_measure(ma->post, kR2, comp, c);
                    if (!mb) continue;
                    run.records.push_back(finish_deterministic(
                        mb->post, receiver_q, ab.u, ab.v, {{pm_key, p}, {"bob2", c}},
                        det_correction_bob3(ab.u, ab.v, p, c), ab.prob * ma->prob * mb->prob, target));
                }
            }
        }
    }
    return run;
}

namespace {

// Ancilla in |0> joins as qubit 5, then the 4x4 unitary acts on
// (receiver, ancilla) with the receiver as the more significant bit.
void finish_probabilistic(ProtocolRun& run, const DensityMatrix& projected, int receiver_q, int u, int v,
                          const std::map<std::string, int>& helpers, const ProbCorrection& pc,
                          double prob, const Mat& U0, const Mat& U1, const PureState& target) {
    const SingleQubitBasis comp = computational_basis();
    Mat anc = Mat::Zero(2, 2);
    anc(0, 0) = 1;
    DensityMatrix six;
    six.n_qubits = 6;
    six.rho = kron(projected.rho, anc);
    six = apply_unitary(six, pc.unitary == 0 ? U0 : U1, {receiver_q, kAncilla});

    for (int out = 0; out < 2; ++out) {
        auto m = try_measure(six, kAncilla, comp, out);
        if (!m) continue;
        OutcomeRecord rec;
        rec.alice1 = u;
        rec.alice2 = v;
        rec.helper_outcomes = helpers;
        rec.ancilla = out;
        rec.unitary_used = pc.unitary;
        rec.success = (out == 0);
        rec.correction = rec.success ? pc.pauli : "none";
        rec.branch_probability = prob * m->prob;
        rec.receiver_state = apply_correction(partial_trace(m->post, {receiver_q}), rec.correction);
        rec.fidelity = fidelity_against(rec.receiver_state, target);
        run.records.push_back(std::move(rec));
    }
}

}  // namespace

ProtocolRun run_probabilistic(const ProtocolConfig& cfg, const RunMode& mode) {
    cfg.validate();
    if (!cfg.probabilistic) throw BadParameter("config is deterministic");
    if (cfg.channel.kind != ChannelSpec::Kind::Ideal)
        throw UnsupportedNoisyProbabilistic("probabilistic variant supports the ideal channel only");

    const PureState target = make_target_state(cfg.theta, cfg.phi);
    const SingleQubitBasis comp = computational_basis();
    const SingleQubitBasis pm = plus_minus_basis();
    const auto [U0, U1] = u0_u1_unitaries(cfg.alpha, cfg.beta);

    DensityMatrix rho = DensityMatrix::from_pure(build_nonmax_cluster(cfg.alpha, cfg.beta));

    ProtocolRun run;
    if (std::abs(cfg.alpha - cfg.beta) <= kExactTol)
        run.note = "alpha = beta: resource is maximally entangled, every branch succeeds";

    if (mode.kind == RunMode::Kind::Sample) {
        std::mt19937_64 rng(mode.seed);
        const SingleQubitBasis ub = u_basis(std::cos(cfg.theta), std::sin(cfg.theta));
        const SingleQubitBasis vb = v_basis(cfg.phi);
        auto m1 = measure(rho, kS1, ub, std::nullopt, &rng);
        DensityMatrix s = std::move(m1.post);
        if (m1.outcome == 0) s = apply_unitary(s, phase_gate(cfg.phi), {kS2});
        auto m2 = measure(s, kS2, vb, std::nullopt, &rng);
        double prob = m1.prob * m2.prob;

        int receiver_q;
        std::map<std::string, int> helpers;
        ProbCorrection pc{0, "I"};
        DensityMatrix projected;
        if (cfg.reconstructor == Reconstructor::Bob2) {
            auto h1 = measure(m2.post, kR1, comp, std::nullopt, &rng);
            auto h3 = measure(h1.post, kR3, comp, std::nullopt, &rng);
            prob *= h1.prob * h3.prob;
            const int consulted = cfg.consulted_helper == Helper::Bob1 ? h1.outcome : h3.outcome;
            receiver_q = kR2;
            helpers = {{"bob1", h1.outcome}, {"bob3", h3.outcome}};
            pc = prob_correction_bob2(m1.outcome, m2.outcome, consulted);
            projected = std::move(h3.post);
        } else {
            const bool bob3 = cfg.reconstructor == Reconstructor::Bob3;
            const int pm_q = bob3 ? kR1 : kR3;
            receiver_q = bob3 ? kR3 : kR1;
            auto ma = measure(m2.post, pm_q, pm, std::nullopt, &rng);
            auto mb = measure(ma.post, kR2, comp, std::nullopt, &rng);
            prob *= ma.prob * mb.prob;
            helpers = {{bob3 ? "bob1" : "bob3", ma.outcome}, {"bob2", mb.outcome}};
            pc = prob_correction_bob3(m1.outcome, m2.outcome, ma.outcome, mb.outcome);
            projected = std::move(mb.post);
        }

        Mat anc = Mat::Zero(2, 2);
        anc(0, 0) = 1;
        DensityMatrix six;
        six.n_qubits = 6;
        six.rho = kron(projected.rho, anc);
        six = apply_unitary(six, pc.unitary == 0 ? U0 : U1, {receiver_q, kAncilla});
        auto manc = measure(six, kAncilla, comp, std::nullopt, &rng);

        OutcomeRecord rec;
        rec.alice1 = m1.outcome;
        rec.alice2 = m2.outcome;
        rec.helper_outcomes = std::move(helpers);
        rec.ancilla = manc.outcome;
        rec.unitary_used = pc.unitary;
        rec.success = (manc.outcome == 0);
        rec.correction = rec.success ? pc.pauli : "none";
        rec.branch_probability = prob * manc.prob;
        rec.receiver_state = apply_correction(partial_trace(manc.post, {receiver_q}), rec.correction);
        rec.fidelity = fidelity_against(rec.receiver_state, target);
        run.records.push_back(std::move(rec));
        return run;
    }

    for (const AliceBranch& ab : alice_branches(rho, cfg.theta, cfg.phi)) {
        if (cfg.reconstructor == Reconstructor::Bob2) {
            for (int h = 0; h < 2; ++h) {
                auto mr1 = try_measure(ab.state, kR1, comp, h);
                if (!mr1) continue;
                if (auto anti = try_measure(mr1->post, kR3, comp, 1 - h))
                    run.excluded_probability += ab.prob * mr1->prob * anti->prob;
                auto mr3 = try_measure(mr1->post, kR3, comp, h);
                if (!mr3) continue;
                finish_probabilistic(run, mr3->post, kR2, ab.u, ab.v, {{"bob1", h}, {"bob3", h}},
                                     prob_correction_bob2(ab.u, ab.v, h),
                                     ab.prob * mr1->prob * mr3->prob, U0, U1, target);
            }
        } else {
            const bool bob3 = cfg.reconstructor == Reconstructor::Bob3;
            const int pm_q = bob3 ? kR1 : kR3;
            const int receiver_q = bob3 ? kR3 : kR1;
            const std::string pm_key = bob3 ? "bob1" : "bob3";
            for (int p = 0; p < 2; ++p) {
                auto ma = try_measure(ab.state, pm_q, pm, p);
                if (!ma) continue;
                for (int c = 0; c < 2; ++c) {
                    auto mb = try_measure(ma->post, kR2, comp, c);
                    if (!mb) continue;
                    finish_probabilistic(run, mb->post, receiver_q, ab.u, ab.v,
                                         {{pm_key, p}, {"bob2", c}},
                                         prob_correction_bob3(ab.u, ab.v, p, c),
                                         ab.prob * ma->prob * mb->prob, U0, U1, target);
                }
            }
        }
    }
    return run;
}

}  // namespace hjrsp
