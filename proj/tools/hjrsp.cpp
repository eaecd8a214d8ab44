#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "hjrsp/analysis.hpp"
#include "hjrsp/csvio.hpp"

namespace {

using namespace hjrsp;

constexpr double kPi = 3.14159265358979323846;

// Radians, with an optional trailing 'pi' multiplier: "0.25pi", "pi", "-0.5pi".
double parse_angle(const std::string& text, const char* flag) {
    std::string body = text;
    double mult = 1.0;
    if (body.size() >= 2 && body.compare(body.size() - 2, 2, "pi") == 0) {
        mult = kPi;
        body.erase(body.size() - 2);
        if (body.empty() || body == "+" || body == "-") body += "1";
    }
    try {
        std::size_t pos = 0;
        const double value = std::stod(body, &pos);
        if (pos != body.size()) throw std::invalid_argument("trailing characters");
        return value * mult;
    } catch (const std::exception&) {
        throw UsageError(std::string(flag) + ": expected a number with optional pi suffix, got '"
                         + text + "'");
    }
}

Reconstructor parse_reconstructor(const std::string& s, const char* flag) {
    if (s == "bob1") return Reconstructor::Bob1;
    if (s == "bob2") return Reconstructor::Bob2;
    if (s == "bob3") return Reconstructor::Bob3;
    throw UsageError(std::string(flag) + ": unknown reconstructor '" + s + "'");
}

std::vector<Reconstructor> parse_reconstructor_set(const std::string& s, const char* flag) {
    if (s == "both") return {Reconstructor::Bob2, Reconstructor::Bob3};
    if (s == "all") return {Reconstructor::Bob1, Reconstructor::Bob2, Reconstructor::Bob3};
    return {parse_reconstructor(s, flag)};
}

Averaging parse_averaging(const std::string& s, const char* flag) {
    if (s == "uniform") return Averaging::Uniform;
    if (s == "weighted") return Averaging::Weighted;
    throw UsageError(std::string(flag) + ": expected uniform or weighted, got '" + s + "'");
}

std::string fmt6(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", x);
    return buf;
}

void print_aligned(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& row : rows) {
        if (width.size() < row.size()) width.resize(row.size(), 0);
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    }
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            line += row[i];
            if (i + 1 < row.size()) line.append(width[i] - row[i].size() + 2, ' ');
        }
        std::printf("%s\n", line.c_str());
    }
}

void print_run(const ProtocolConfig& cfg, const ProtocolRun& run, bool sampled, uint64_t seed) {
    std::vector<std::string> keys;
    if (!run.records.empty())
        for (const auto& kv : run.records.front().helper_outcomes) keys.push_back(kv.first);

    std::string pm_key;  // outcomes in the {+,-} basis
    if (cfg.reconstructor == Reconstructor::Bob3) pm_key = "bob1";
    if (cfg.reconstructor == Reconstructor::Bob1) pm_key = "bob3";

    std::vector<std::string> header = {"alice1", "alice2"};
    for (const auto& k : keys) header.push_back(k);
    if (cfg.probabilistic) {
        header.push_back("ancilla");
        header.push_back("unitary");
    }
    header.push_back("correction");
    header.push_back("probability");
    header.push_back("fidelity");
    if (cfg.probabilistic) header.push_back("success");

    std::vector<std::vector<std::string>> rows{header};
    for (const auto& r : run.records) {
        std::vector<std::string> row;
        row.push_back(r.alice1 == 0 ? "u0" : "u1");
        row.push_back(r.alice2 == 0 ? "v0" : "v1");
        for (const auto& k : keys) {
            const int o = r.helper_outcomes.at(k);
            row.push_back(k == pm_key ? (o == 0 ? std::string("+") : std::string("-"))
                                      : std::to_string(o));
        }
        if (cfg.probabilistic) {
            row.push_back(r.ancilla ? std::to_string(*r.ancilla) : std::string("-"));
            row.push_back(r.unitary_used ? (*r.unitary_used == 0 ? std::string("U0") : std::string("U1"))
                                         : std::string("-"));
        }
        row.push_back(r.correction);
        row.push_back(fmt6(r.branch_probability));
        row.push_back(fmt6(r.fidelity));
        if (cfg.probabilistic) row.push_back(r.success ? "yes" : "no");
        rows.push_back(std::move(row));
    }
    print_aligned(rows);

    std::printf("\n");
    if (sampled)
        std::printf("sampled trajectory, seed %llu\n", static_cast<unsigned long long>(seed));
    std::printf("branches: %zu\n", run.records.size());
    if (!cfg.probabilistic) {
        std::printf("excluded probability: %s\n", fmt6(run.excluded_probability).c_str());
        if (!sampled) {
            double weighted = 0.0, uniform = 0.0;
            int n = 0;
            for (const auto& r : run.records) {
                weighted += r.branch_probability * r.fidelity;
                if (r.branch_probability > kZeroProbTol) {
                    uniform += r.fidelity;
                    ++n;
                }
            }
            if (n) uniform /= n;
            std::printf("average fidelity: uniform %s, weighted %s\n", fmt6(uniform).c_str(),
                        fmt6(weighted).c_str());
        }
    } else if (!sampled) {
        double p_success = 0.0;
        for (const auto& r : run.records)
            if (r.success) p_success += r.branch_probability;
        std::printf("success probability: %s (2 beta^2 = %s)\n", fmt6(p_success).c_str(),
                    fmt6(2.0 * cfg.beta * cfg.beta).c_str());
    }
    if (!run.note.empty()) std::printf("note: %s\n", run.note.c_str());
}

void emit_csv(const std::vector<FidelityPoint>& points, const std::string& out_path) {
    if (out_path.empty()) {
        write_points_csv(std::cout, points);
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw SimError("cannot open output file: " + out_path);
    write_points_csv(f, points);
    f.flush();
    if (!f) throw SimError("failed writing output file: " + out_path);
}

const std::vector<std::string> kChannelNames = {
    "ideal", "ad", "pd", "cd", "cr", "pauli",
    "pauli-bitflip", "pauli-bitphaseflip", "pauli-phaseflip", "pauli-depolarizing"};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hierarchical joint remote state preparation: exact protocol simulator"};
    app.require_subcommand(1);

    // ideal
    auto* ideal = app.add_subcommand("ideal", "enumerate the deterministic protocol, noiseless resource");
    std::string id_theta, id_phi, id_rec = "bob2", id_helper = "bob1";
    bool id_sample = false;
    uint64_t id_seed = 0;
    ideal->add_option("--theta", id_theta, "amplitude angle, radians, pi suffix allowed (default 0.25pi)");
    ideal->add_option("--phi", id_phi, "phase angle (default pi/3)");
    ideal->add_option("--reconstructor", id_rec, "bob1|bob2|bob3 (default bob2)")
        ->check(CLI::IsMember({"bob1", "bob2", "bob3"}));
    ideal->add_option("--helper", id_helper, "helper the higher-power agent consults (default bob1)")
        ->check(CLI::IsMember({"bob1", "bob3"}));
    ideal->add_flag("--sample", id_sample, "sample one trajectory instead of enumerating");
    ideal->add_option("--seed", id_seed, "rng seed for --sample (default 0)");

    // prob
    auto* prob = app.add_subcommand("prob", "enumerate the probabilistic protocol on the non-maximal resource");
    double pr_alpha = 0.0, pr_beta = 0.0;
    std::string pr_theta, pr_phi, pr_rec = "bob2", pr_helper = "bob1";
    bool pr_sample = false;
    uint64_t pr_seed = 0;
    prob->add_option("--alpha", pr_alpha, "resource amplitude alpha")->required();
    prob->add_option("--beta", pr_beta, "resource amplitude beta")->required();
    prob->add_option("--theta", pr_theta, "amplitude angle (default 0.25pi)");
    prob->add_option("--phi", pr_phi, "phase angle (default pi/3)");
    prob->add_option("--reconstructor", pr_rec, "bob1|bob2|bob3 (default bob2)")
        ->check(CLI::IsMember({"bob1", "bob2", "bob3"}));
    prob->add_option("--helper", pr_helper, "helper the higher-power agent consults (default bob1)")
        ->check(CLI::IsMember({"bob1", "bob3"}));
    prob->add_flag("--sample", pr_sample, "sample one trajectory instead of enumerating");
    prob->add_option("--seed", pr_seed, "rng seed for --sample (default 0)");

    // noise
    auto* noise = app.add_subcommand("noise", "single-point noisy fidelity, csv output");
    std::string no_channel, no_param, no_theta, no_phi, no_rec = "both", no_avg = "uniform", no_out;
    double no_p[4] = {NAN, NAN, NAN, NAN};
    noise->add_option("--channel", no_channel, "channel family")->required()
        ->check(CLI::IsMember(kChannelNames));
    noise->add_option("--param", no_param, "channel parameter (pi suffix allowed)");
    noise->add_option("--p1", no_p[0], "pauli probability p1");
    noise->add_option("--p2", no_p[1], "pauli probability p2");
    noise->add_option("--p3", no_p[2], "pauli probability p3");
    noise->add_option("--p4", no_p[3], "pauli probability p4");
    noise->add_option("--theta", no_theta, "amplitude angle (default 0.25pi)");
    noise->add_option("--phi", no_phi, "phase angle (default pi/3)");
    noise->add_option("--reconstructor", no_rec, "bob1|bob2|bob3|both|all (default both)")
        ->check(CLI::IsMember({"bob1", "bob2", "bob3", "both", "all"}));
    noise->add_option("--averaging", no_avg, "uniform|weighted (default uniform)")
        ->check(CLI::IsMember({"uniform", "weighted"}));
    noise->add_option("--out", no_out, "output file (default stdout)");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "grid sweep, csv output");
    std::string sw_channel, sw_theta, sw_phi, sw_pmin, sw_pmax, sw_rec = "both", sw_avg = "uniform", sw_out;
    int sw_steps = 11, sw_threads = 1;
    double sw_p[4] = {NAN, NAN, NAN, NAN};
    sweep_cmd->add_option("--channel", sw_channel, "channel family")->required()
        ->check(CLI::IsMember(kChannelNames));
    sweep_cmd->add_option("--param-steps", sw_steps, "points along the channel-parameter axis (default 11)")
        ->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--param-min", sw_pmin, "override parameter axis start (pi suffix allowed)");
    sweep_cmd->add_option("--param-max", sw_pmax, "override parameter axis end");
    sweep_cmd->add_option("--theta", sw_theta, "pin theta (default: grid over [0,pi], step pi/24)");
    sweep_cmd->add_option("--phi", sw_phi, "pin phi (default: grid over [0,2pi), step pi/24)");
    sweep_cmd->add_option("--p1", sw_p[0], "pauli probability p1");
    sweep_cmd->add_option("--p2", sw_p[1], "pauli probability p2");
    sweep_cmd->add_option("--p3", sw_p[2], "pauli probability p3");
    sweep_cmd->add_option("--p4", sw_p[3], "pauli probability p4");
    sweep_cmd->add_option("--reconstructor", sw_rec, "bob1|bob2|bob3|both|all (default both)")
        ->check(CLI::IsMember({"bob1", "bob2", "bob3", "both", "all"}));
    sweep_cmd->add_option("--averaging", sw_avg, "uniform|weighted (default uniform)")
        ->check(CLI::IsMember({"uniform", "weighted"}));
    sweep_cmd->add_option("--threads", sw_threads, "worker threads (default 1)")
        ->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--out", sw_out, "output file (default stdout)");

    // tables
    auto* tables = app.add_subcommand("tables", "dump the eight correction tables as csv");
    std::string tb_dir = ".";
    tables->add_option("--out-dir", tb_dir, "destination directory (default .)");

    // calibrate
    auto* calibrate = app.add_subcommand("calibrate", "select the averaging convention against the references");
    bool cb_cr = false;
    calibrate->add_flag("--cr-report", cb_cr, "also print the collective-rotation deviation report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*ideal) {
            ProtocolConfig cfg;
            cfg.theta = id_theta.empty() ? kPi / 4.0 : parse_angle(id_theta, "--theta");
            cfg.phi = id_phi.empty() ? kPi / 3.0 : parse_angle(id_phi, "--phi");
            cfg.reconstructor = parse_reconstructor(id_rec, "--reconstructor");
            cfg.consulted_helper = id_helper == "bob3" ? Helper::Bob3 : Helper::Bob1;
            const auto run =
                run_deterministic(cfg, id_sample ? RunMode::sample(id_seed) : RunMode::enumerate());
            print_run(cfg, run, id_sample, id_seed);
            return 0;
        }

        if (*prob) {
            if (std::abs(pr_alpha * pr_alpha + pr_beta * pr_beta - 1.0) > kExactTol)
                throw UsageError("--alpha/--beta: alpha^2 + beta^2 must equal 1");
            ProtocolConfig cfg;
            cfg.probabilistic = true;
            cfg.alpha = pr_alpha;
            cfg.beta = pr_beta;
            cfg.theta = pr_theta.empty() ? kPi / 4.0 : parse_angle(pr_theta, "--theta");
            cfg.phi = pr_phi.empty() ? kPi / 3.0 : parse_angle(pr_phi, "--phi");
            cfg.reconstructor = parse_reconstructor(pr_rec, "--reconstructor");
            cfg.consulted_helper = pr_helper == "bob3" ? Helper::Bob3 : Helper::Bob1;
            const auto run =
                run_probabilistic(cfg, pr_sample ? RunMode::sample(pr_seed) : RunMode::enumerate());
            print_run(cfg, run, pr_sample, pr_seed);
            return 0;
        }

        if (*noise) {
            SweepRequest req;
            req.family = no_channel;
            if (no_channel == "pauli") {
                for (double p : no_p)
                    if (std::isnan(p))
                        throw UsageError("--p1 --p2 --p3 --p4 are required for the generic pauli channel");
                req.pauli_probs = {no_p[0], no_p[1], no_p[2], no_p[3]};
            } else {
                for (double p : no_p)
                    if (!std::isnan(p))
                        throw UsageError("--p1..--p4 apply only to the generic pauli channel");
            }
            if (family_has_param(no_channel)) {
                if (no_param.empty())
                    throw UsageError("--param is required for channel '" + no_channel + "'");
                req.params = {parse_angle(no_param, "--param")};
            } else if (!no_param.empty()) {
                throw UsageError("--param does not apply to channel '" + no_channel + "'");
            }
            req.thetas = {no_theta.empty() ? kPi / 4.0 : parse_angle(no_theta, "--theta")};
            req.phis = {no_phi.empty() ? kPi / 3.0 : parse_angle(no_phi, "--phi")};
            req.reconstructors = parse_reconstructor_set(no_rec, "--reconstructor");
            req.averaging = parse_averaging(no_avg, "--averaging");
            emit_csv(sweep(req), no_out);
            return 0;
        }

        if (*sweep_cmd) {
            SweepRequest req;
            req.family = sw_channel;
            if (sw_channel == "pauli") {
                for (double p : sw_p)
                    if (std::isnan(p))
                        throw UsageError("--p1 --p2 --p3 --p4 are required for the generic pauli channel");
                req.pauli_probs = {sw_p[0], sw_p[1], sw_p[2], sw_p[3]};
            } else {
                for (double p : sw_p)
                    if (!std::isnan(p))
                        throw UsageError("--p1..--p4 apply only to the generic pauli channel");
            }
            if (family_has_param(sw_channel)) {
                if (sw_pmin.empty() != sw_pmax.empty())
                    throw UsageError("--param-min and --param-max must be given together");
                req.params = sw_pmin.empty()
                                 ? default_param_axis(sw_channel, sw_steps)
                                 : linspace(parse_angle(sw_pmin, "--param-min"),
                                            parse_angle(sw_pmax, "--param-max"), sw_steps);
            } else if (!sw_pmin.empty() || !sw_pmax.empty()) {
                throw UsageError("--param-min/--param-max do not apply to channel '" + sw_channel + "'");
            }
            req.thetas = sw_theta.empty() ? default_theta_axis()
                                          : std::vector<double>{parse_angle(sw_theta, "--theta")};
            req.phis = sw_phi.empty() ? default_phi_axis()
                                      : std::vector<double>{parse_angle(sw_phi, "--phi")};
            req.reconstructors = parse_reconstructor_set(sw_rec, "--reconstructor");
            req.averaging = parse_averaging(sw_avg, "--averaging");
            req.threads = sw_threads;
            emit_csv(sweep(req), sw_out);
            return 0;
        }

        if (*tables) {
            for (int i = 1; i <= 8; ++i) {
                const TableDump dump = correction_table(i);
                const std::string path = tb_dir + "/table" + std::to_string(i) + ".csv";
                std::ofstream f(path, std::ios::binary);
                if (!f) throw SimError("cannot open output file: " + path);
                write_csv_row(f, dump.header);
                for (const auto& row : dump.rows) write_csv_row(f, row);
                f.flush();
                if (!f) throw SimError("failed writing output file: " + path);
                std::printf("wrote %s (%zu rows)\n", path.c_str(), dump.rows.size());
            }
            return 0;
        }

        if (*calibrate) {
            const CalibrationReport rep = calibrate_averaging();
            std::vector<std::vector<std::string>> rows{
                {"channel", "convention", "worst_abs_diff", "votes"}};
            for (const auto& e : rep.entries)
                rows.push_back({e.channel, averaging_name(e.averaging), format_g12(e.worst_abs_diff),
                                e.votes ? "yes" : "no (informational)"});
            print_aligned(rows);
            std::printf("chosen: %s\n", averaging_name(rep.chosen));
            for (const auto& n : rep.notes) std::printf("note: %s\n", n.c_str());
            if (cb_cr) {
                const CrReport cr = cr_deviation_report(rep.chosen);
                std::printf("\ncollective-rotation deviation report\n");
                for (const auto& n : cr.notes) std::printf("note: %s\n", n.c_str());
            }
            return 0;
        }
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const CalibrationAmbiguous& e) {
        std::fprintf(stderr, "calibration failed: %s\n", e.what());
        return 4;
    } catch (const SimError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
