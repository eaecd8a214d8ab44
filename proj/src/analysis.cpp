#include "hjrsp/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "hjrsp/csvio.hpp"
#include "hjrsp/qsim.hpp"

namespace hjrsp {

namespace {

constexpr double kPi = 3.14159265358979323846;

Averaging g_default_averaging = Averaging::Uniform;

std::optional<PauliSpecial> special_of(const std::string& family) {
    if (family == "pauli-bitflip") return PauliSpecial::BitFlip;
    if (family == "pauli-bitphaseflip") return PauliSpecial::BitPhaseFlip;
    if (family == "pauli-phaseflip") return PauliSpecial::PhaseFlip;
    if (family == "pauli-depolarizing") return PauliSpecial::Depolarizing;
    return std::nullopt;
}

std::string channel_cell(const FidelityPoint& p) {
    if (!p.label.empty()) return p.label;
    if (p.channel.kind == ChannelSpec::Kind::Pauli) {
        std::string cell = "pauli(";
        for (int i = 0; i < 4; ++i) {
            if (i) cell += ';';
            cell += format_g12(p.channel.p[i]);
        }
        cell += ')';
        return cell;
    }
    return p.channel.kind_name();
}

}  // namespace

const char* averaging_name(Averaging a) {
    return a == Averaging::Weighted ? "weighted" : "uniform";
}

Averaging default_averaging() { return g_default_averaging; }

void set_default_averaging(Averaging a) { g_default_averaging = a; }

double average_fidelity_sim(const ProtocolConfig& config, Averaging averaging) {
    if (config.probabilistic)
        throw BadParameter("average fidelity is defined for the deterministic variant");
    const ProtocolRun run = run_deterministic(config);
    if (averaging == Averaging::Weighted) {
        double acc = 0.0;
        for (const auto& r : run.records) acc += r.branch_probability * r.fidelity;
        return acc;
    }
    double acc = 0.0;
    int n = 0;
    for (const auto& r : run.records) {
        if (r.branch_probability > kZeroProbTol) {
            acc += r.fidelity;
            ++n;
        }
    }
    if (n == 0) throw SimError("no branch has nonzero probability");
    return acc / n;
}

bool family_has_param(const std::string& family) {
    if (family == "ideal" || family == "pauli") return false;
    if (family == "ad" || family == "pd" || family == "cd" || family == "cr") return true;
    if (special_of(family)) return true;
    throw BadParameter("unknown channel family: " + family);
}

std::string family_param_name(const std::string& family) {
    if (special_of(family)) return "p_prime";
    if (family == "ad") return "eta_A";
    if (family == "pd") return "eta_P";
    if (family == "cd") return "Phi";
    if (family == "cr") return "Theta";
    return "";
}

ChannelSpec family_channel(const std::string& family, double param,
                           const std::array<double, 4>& pauli_probs) {
    if (family == "ideal") return ChannelSpec::ideal();
    if (family == "ad") return ChannelSpec::ad(param);
    if (family == "pd") return ChannelSpec::pd(param);
    if (family == "cd") return ChannelSpec::cd(param);
    if (family == "cr") return ChannelSpec::cr(param);
    if (family == "pauli")
        return ChannelSpec::pauli(pauli_probs[0], pauli_probs[1], pauli_probs[2], pauli_probs[3]);
    if (auto sp = special_of(family)) return pauli_special_channel(*sp, param);
    throw BadParameter("unknown channel family: " + family);
}

std::vector<double> default_param_axis(const std::string& family, int steps) {
    if (!family_has_param(family)) return {};
    if (family == "cd") return linspace(0.0, 2.0 * kPi, steps);
    if (family == "cr") return linspace(0.0, kPi, steps);
    return linspace(0.0, 1.0, steps);
}

std::vector<double> linspace(double lo, double hi, int steps, bool include_hi) {
    if (steps < 1) throw BadParameter("axis needs at least one point");
    std::vector<double> v(static_cast<size_t>(steps));
    if (steps == 1) {
        v[0] = lo;
        return v;
    }
    const double denom = include_hi ? steps - 1 : steps;
    for (int i = 0; i < steps; ++i) v[static_cast<size_t>(i)] = lo + (hi - lo) * i / denom;
    return v;
}

std::vector<double> default_theta_axis() { return linspace(0.0, kPi, 25, true); }

std::vector<double> default_phi_axis() { return linspace(0.0, 2.0 * kPi, 48, false); }

std::vector<FidelityPoint> sweep(const SweepRequest& request) {
    const bool has_param = family_has_param(request.family);
    const auto special = special_of(request.family);

    std::vector<double> params = request.params;
    if (has_param && params.empty()) params = default_param_axis(request.family, 11);
    if (!has_param) params = {0.0};  // single pass, no parameter column
    if (request.thetas.empty() || request.phis.empty())
        throw BadParameter("sweep grid axes must be non-empty");
    if (request.reconstructors.empty()) throw BadParameter("sweep needs at least one reconstructor");
    for (double x : params)
        if (!std::isfinite(x)) throw BadParameter("non-finite grid value");

    std::vector<FidelityPoint> points;
    points.reserve(params.size() * request.thetas.size() * request.phis.size()
                   * request.reconstructors.size());
    for (double param : params) {
        const ChannelSpec spec = family_channel(request.family, param, request.pauli_probs);
        for (double theta : request.thetas) {
            for (double phi : request.phis) {
                for (Reconstructor rec : request.reconstructors) {
                    FidelityPoint p;
                    p.channel = spec;
                    if (special) p.label = request.family;
                    p.param_name = family_param_name(request.family);
                    if (has_param) p.param_value = param;
                    p.theta = theta;
                    p.phi = phi;
                    p.reconstructor = rec;
                    p.averaging = request.averaging;
                    points.push_back(std::move(p));
                }
            }
        }
    }

    auto evaluate = [&](FidelityPoint& p) {
        ProtocolConfig cfg;
        cfg.theta = p.theta;
        cfg.phi = p.phi;
        cfg.reconstructor = p.reconstructor;
        cfg.channel = p.channel;
        p.f_sim = average_fidelity_sim(cfg, p.averaging);
        try {
            p.f_closed = closed_form(p.channel, p.reconstructor, p.theta, p.phi);
            p.abs_diff = std::abs(p.f_sim - *p.f_closed);
        } catch (const CRFormulaSingularity&) {
            p.f_closed.reset();
            p.abs_diff.reset();
        }
    };

    const int threads = std::max(1, request.threads);
    if (threads == 1 || points.size() < 2) {
        for (auto& p : points) evaluate(p);
        return points;
    }

    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            try {
                evaluate(points[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const size_t n_workers = std::min<size_t>(static_cast<size_t>(threads), points.size());
    pool.reserve(n_workers);
    for (size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return points;
}

void write_points_csv(std::ostream& os, const std::vector<FidelityPoint>& points) {
    os << kSweepHeader << '\n';
    for (const auto& p : points) {
        std::vector<std::string> cells;
        cells.reserve(10);
        cells.push_back(channel_cell(p));
        cells.push_back(p.param_name);
        cells.push_back(p.param_value ? format_g12(*p.param_value) : std::string());
        cells.push_back(format_g12(p.theta));
        cells.push_back(format_g12(p.phi));
        cells.push_back(reconstructor_name(p.reconstructor));
        cells.push_back(averaging_name(p.averaging));
        cells.push_back(format_g12(p.f_sim));
        cells.push_back(p.f_closed ? format_g12(*p.f_closed) : std::string());
        cells.push_back(p.abs_diff ? format_g12(*p.abs_diff) : std::string());
        write_csv_row(os, cells);
    }
}

namespace {

struct CalibrationFamily {
    std::string name;
    std::vector<ChannelSpec> specs;
    bool votes = true;
};

std::vector<CalibrationFamily> calibration_families() {
    std::vector<CalibrationFamily> fams;
    fams.push_back({"ad", {ChannelSpec::ad(0.2), ChannelSpec::ad(0.5), ChannelSpec::ad(0.8)}, true});
    fams.push_back({"pd", {ChannelSpec::pd(0.2), ChannelSpec::pd(0.5), ChannelSpec::pd(0.8)}, true});
    fams.push_back({"cd", {ChannelSpec::cd(0.5), ChannelSpec::cd(1.7), ChannelSpec::cd(2.9)}, true});
    fams.push_back({"pauli",
                    {ChannelSpec::pauli(0.1, 0.2, 0.3, 0.4), ChannelSpec::pauli(0.4, 0.3, 0.2, 0.1),
                     ChannelSpec::pauli(0.15, 0.35, 0.25, 0.25)},
                    true});
    fams.push_back({"cr", {ChannelSpec::cr(0.4), ChannelSpec::cr(1.0), ChannelSpec::cr(2.0)}, false});
    return fams;
}

const std::vector<double>& calibration_thetas() {
    static const std::vector<double> v = {0.4, kPi / 4.0, 1.1};
    return v;
}

const std::vector<double>& calibration_phis() {
    static const std::vector<double> v = {0.6, kPi / 3.0, 2.2};
    return v;
}

double sim_at(const ChannelSpec& spec, Reconstructor rec, double theta, double phi, Averaging av) {
    ProtocolConfig cfg;
    cfg.theta = theta;
    cfg.phi = phi;
    cfg.reconstructor = rec;
    cfg.channel = spec;
    return average_fidelity_sim(cfg, av);
}

}  // namespace

CalibrationReport calibrate_averaging() {
    CalibrationReport report;
    const auto fams = calibration_families();
    const auto& thetas = calibration_thetas();
    const auto& phis = calibration_phis();
    const Reconstructor recs[2] = {Reconstructor::Bob2, Reconstructor::Bob3};
    const Averaging convs[2] = {Averaging::Weighted, Averaging::Uniform};

    double overall[2] = {0.0, 0.0};  // indexed like convs, voting families only
    for (const auto& fam : fams) {
        for (int ci = 0; ci < 2; ++ci) {
            double worst = 0.0;
            for (const auto& spec : fam.specs) {
                for (double th : thetas) {
                    for (double ph : phis) {
                        for (Reconstructor rec : recs) {
                            double closed;
                            try {
                                closed = closed_form(spec, rec, th, ph);
                            } catch (const CRFormulaSingularity&) {
                                continue;
                            }
                            const double sim = sim_at(spec, rec, th, ph, convs[ci]);
                            worst = std::max(worst, std::abs(sim - closed));
                        }
                    }
                }
            }
            report.entries.push_back({fam.name, convs[ci], worst, fam.votes});
            if (fam.votes) overall[ci] = std::max(overall[ci], worst);
        }
    }

    report.chosen = overall[1] <= overall[0] ? Averaging::Uniform : Averaging::Weighted;
    const double best = std::min(overall[0], overall[1]);
    if (!(best < 1e-4)) {
        throw CalibrationAmbiguous("neither averaging convention reaches worst-case error < 1e-4"
                                   " (weighted " + format_g12(overall[0]) + ", uniform "
                                   + format_g12(overall[1]) + ")");
    }
    set_default_averaging(report.chosen);

    report.notes.push_back(std::string("chosen convention: ") + averaging_name(report.chosen)
                           + " (worst voting-channel error " + format_g12(best) + " vs "
                           + format_g12(std::max(overall[0], overall[1])) + " for "
                           + averaging_name(report.chosen == Averaging::Uniform ? Averaging::Weighted
                                                                                : Averaging::Uniform)
                           + ")");

    // Lower-power Pauli expression: the printed form carries no overall
    // normalization; test both readings against simulation.
    {
        double worst_raw = 0.0, worst_norm = 0.0;
        const auto& pauli_fam = fams[3];
        for (const auto& spec : pauli_fam.specs) {
            for (double th : thetas) {
                for (double ph : phis) {
                    const double sim = sim_at(spec, Reconstructor::Bob3, th, ph, report.chosen);
                    worst_raw = std::max(worst_raw, std::abs(sim - pauli_bob3_raw(spec, th, ph)));
                    worst_norm =
                        std::max(worst_norm, std::abs(sim - pauli_bob3_normalized(spec, th, ph)));
                }
            }
        }
        report.notes.push_back("lower-power pauli reference: raw printed form worst error "
                               + format_g12(worst_raw) + "; normalized reading worst error "
                               + format_g12(worst_norm) + "; the raw form is used");
    }

    report.notes.push_back("cr rows are informational (no vote); the transcribed expressions carry"
                           " documented repairs, see the cr report");
    return report;
}

namespace {

// All sixteen helper-outcome combinations, correction keyed on the consulted
// helper, probability-weighted. Exercises the anticorrelated combinations the
// enumerated protocol excludes, so the helper-choice symmetry check is not
// vacuous.
double bob2_all_combo_avg(double theta, double phi, const ChannelSpec& channel, Helper consulted) {
    const PureState target = make_target_state(theta, phi);
    const double a = std::cos(theta), b = std::sin(theta);
    DensityMatrix rho = apply_noise(DensityMatrix::from_pure(build_cluster_state()), channel);

    double acc = 0.0;
    for (int u = 0; u < 2; ++u) {
        MeasureResult<DensityMatrix> mu;
        try {
            mu = measure(rho, 0, u_basis(a, b), u);
        } catch (const ZeroProbabilityBranch&) {
            continue;
        }
        DensityMatrix after_u = mu.post;
        if (u == 0) after_u = apply_unitary(after_u, phase_gate(phi), {1});
        for (int v = 0; v < 2; ++v) {
            MeasureResult<DensityMatrix> mv;
            try {
                mv = measure(after_u, 1, v_basis(phi), v);
            } catch (const ZeroProbabilityBranch&) {
                continue;
            }
            for (int r1 = 0; r1 < 2; ++r1) {
                MeasureResult<DensityMatrix> m1;
                try {
                    m1 = measure(mv.post, 2, computational_basis(), r1);
                } catch (const ZeroProbabilityBranch&) {
                    continue;
                }
                for (int r3 = 0; r3 < 2; ++r3) {
                    MeasureResult<DensityMatrix> m3;
                    try {
                        m3 = measure(m1.post, 4, computational_basis(), r3);
                    } catch (const ZeroProbabilityBranch&) {
                        continue;
                    }
                    const double p = mu.prob * mv.prob * m1.prob * m3.prob;
                    const int h = consulted == Helper::Bob1 ? r1 : r3;
                    DensityMatrix out = partial_trace(m3.post, {3});
                    out = apply_unitary(out, pauli_matrix(det_correction_bob2(u, v, h)), {0});
                    acc += p * fidelity_against(out, target);
                }
            }
        }
    }
    return acc;
}

}  // namespace

CrReport cr_deviation_report(Averaging averaging) {
    CrReport report;
    std::vector<double> Ts, ths, phs;
    for (int k = 0; k < 7; ++k) {
        Ts.push_back(0.35 + 0.33 * k);
        ths.push_back(0.25 + 0.42 * k);
        phs.push_back(0.3 + 0.83 * k);
    }

    for (double T : Ts) {
        const ChannelSpec spec = ChannelSpec::cr(T);
        for (double th : ths) {
            for (double ph : phs) {
                ++report.cells_total;
                const double asym = std::abs(bob2_all_combo_avg(th, ph, spec, Helper::Bob1)
                                             - bob2_all_combo_avg(th, ph, spec, Helper::Bob3));
                report.max_helper_asymmetry = std::max(report.max_helper_asymmetry, asym);

                double c2, c3;
                try {
                    c2 = closed_form(spec, Reconstructor::Bob2, th, ph);
                    c3 = closed_form(spec, Reconstructor::Bob3, th, ph);
                } catch (const CRFormulaSingularity&) {
                    ++report.cells_singular;
                    continue;
                }
                ++report.cells_evaluated;
                const double s2 = sim_at(spec, Reconstructor::Bob2, th, ph, averaging);
                const double s3 = sim_at(spec, Reconstructor::Bob3, th, ph, averaging);
                report.max_abs_diff_bob2 = std::max(report.max_abs_diff_bob2, std::abs(s2 - c2));
                report.max_abs_diff_bob3 = std::max(report.max_abs_diff_bob3, std::abs(s3 - c3));
            }
        }
    }

    report.notes.push_back("max |f_sim - reference|: higher-power "
                           + format_g12(report.max_abs_diff_bob2) + ", lower-power "
                           + format_g12(report.max_abs_diff_bob3));
    report.notes.push_back("max helper-choice asymmetry (probability-weighted, all sixteen"
                           " combinations): " + format_g12(report.max_helper_asymmetry));
    report.notes.push_back("cells: " + std::to_string(report.cells_total) + " total, "
                           + std::to_string(report.cells_evaluated) + " evaluated, "
                           + std::to_string(report.cells_singular) + " singular");
    report.notes.push_back("simulation is ground truth; deviations flag transcription defects in"
                           " the reference expressions, not simulator faults");
    for (const auto& n : cr_transcription_notes()) report.notes.push_back("transcription: " + n);
    return report;
}

}  // namespace hjrsp
