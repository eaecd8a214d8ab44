#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "hjrsp/analysis.hpp"
#include "hjrsp/csvio.hpp"

using namespace hjrsp;

namespace {

constexpr double kPi = 3.14159265358979323846;

ProtocolConfig cfg_for(const ChannelSpec& ch, Reconstructor r, double theta, double phi) {
    ProtocolConfig cfg;
    cfg.theta = theta;
    cfg.phi = phi;
    cfg.reconstructor = r;
    cfg.channel = ch;
    return cfg;
}

}  // namespace

TEST_CASE("ideal average fidelity is one under both conventions") {
    for (Reconstructor r : {Reconstructor::Bob1, Reconstructor::Bob2, Reconstructor::Bob3}) {
        ProtocolConfig cfg = cfg_for(ChannelSpec::ideal(), r, 0.8, 2.0);
        CHECK(average_fidelity_sim(cfg, Averaging::Uniform) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(average_fidelity_sim(cfg, Averaging::Weighted) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("average fidelity rejects the conversion variant") {
    ProtocolConfig cfg = cfg_for(ChannelSpec::ideal(), Reconstructor::Bob2, 0.8, 2.0);
    cfg.probabilistic = true;
    cfg.alpha = 0.8;
    cfg.beta = 0.6;
    CHECK_THROWS_AS(average_fidelity_sim(cfg, Averaging::Uniform), BadParameter);
}

TEST_CASE("damping fidelity hand value") {
    // Spot value worked out by hand with 2x2 arithmetic.
    ProtocolConfig cfg = cfg_for(ChannelSpec::ad(0.5), Reconstructor::Bob2, kPi / 4, kPi / 3);
    double f = average_fidelity_sim(cfg, Averaging::Uniform);
    CHECK(f == doctest::Approx(0.7125).epsilon(1e-10));
    CHECK(std::abs(f - closed_form(cfg.channel, Reconstructor::Bob2, cfg.theta, cfg.phi)) < 1e-9);
}

TEST_CASE("simulation matches the reference expressions") {
    const double theta = 0.95, phi = 1.7;
    for (const ChannelSpec& ch : {ChannelSpec::ad(0.35), ChannelSpec::pd(0.6),
                                  ChannelSpec::cd(2.3), ChannelSpec::pauli(0.15, 0.25, 0.2, 0.4)}) {
        CAPTURE(ch.kind_name());
        for (Reconstructor r : {Reconstructor::Bob2, Reconstructor::Bob3}) {
            ProtocolConfig cfg = cfg_for(ch, r, theta, phi);
            double sim = average_fidelity_sim(cfg, Averaging::Uniform);
            CHECK(std::abs(sim - closed_form(ch, r, theta, phi)) < 1e-9);
        }
    }
}

TEST_CASE("zero strength closed forms are one") {
    for (const ChannelSpec& ch : {ChannelSpec::ad(0.0), ChannelSpec::pd(0.0), ChannelSpec::cd(0.0),
                                  ChannelSpec::pauli(0, 0, 0, 1)}) {
        CHECK(closed_form(ch, Reconstructor::Bob2, 0.7, 1.1) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(closed_form(ch, Reconstructor::Bob3, 0.7, 1.1) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(closed_form(ChannelSpec::cr(0.0), Reconstructor::Bob2, 0.7, 1.1) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(closed_form(ChannelSpec::ideal(), Reconstructor::Bob1, 0.1, 0.2) == 1.0);
}

TEST_CASE("full phase damping halves the equatorial fidelity") {
    CHECK(closed_form(ChannelSpec::pd(1.0), Reconstructor::Bob2, kPi / 4, 0.3) ==
          doctest::Approx(0.5).epsilon(1e-12));
    ProtocolConfig cfg = cfg_for(ChannelSpec::pd(1.0), Reconstructor::Bob2, kPi / 4, 0.3);
    CHECK(average_fidelity_sim(cfg, Averaging::Uniform) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("collective dephasing separates the two receiver classes") {
    // At Phi = pi the higher power receiver is immune, the lower power one
    // loses everything at theta = pi/4.
    ProtocolConfig b2 = cfg_for(ChannelSpec::cd(kPi), Reconstructor::Bob2, kPi / 4, kPi / 3);
    ProtocolConfig b3 = cfg_for(ChannelSpec::cd(kPi), Reconstructor::Bob3, kPi / 4, kPi / 3);
    CHECK(average_fidelity_sim(b2, Averaging::Uniform) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(average_fidelity_sim(b3, Averaging::Uniform) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(closed_form(b2.channel, Reconstructor::Bob2, b2.theta, b2.phi) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(closed_form(b3.channel, Reconstructor::Bob3, b3.theta, b3.phi) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("phase damping is phase insensitive") {
    double first = 0.0;
    for (int i = 0; i < 10; ++i) {
        double phi = 2.0 * kPi * i / 10.0;
        ProtocolConfig cfg = cfg_for(ChannelSpec::pd(0.45), Reconstructor::Bob3, 0.8, phi);
        double f = average_fidelity_sim(cfg, Averaging::Uniform);
        if (i == 0)
            first = f;
        else
            CHECK(std::abs(f - first) < 1e-9);
    }
}

TEST_CASE("named mixture channels") {
    CHECK(pauli_special_name(PauliSpecial::BitFlip) == "pauli-bitflip");
    CHECK(pauli_special_name(PauliSpecial::BitPhaseFlip) == "pauli-bitphaseflip");
    CHECK(pauli_special_name(PauliSpecial::PhaseFlip) == "pauli-phaseflip");
    CHECK(pauli_special_name(PauliSpecial::Depolarizing) == "pauli-depolarizing");

    CHECK(pauli_special_channel(PauliSpecial::BitFlip, 0.3) == ChannelSpec::pauli(0.3, 0, 0, 0.7));
    CHECK(pauli_special_channel(PauliSpecial::BitPhaseFlip, 0.3) ==
          ChannelSpec::pauli(0, 0.3, 0, 0.7));
    CHECK(pauli_special_channel(PauliSpecial::PhaseFlip, 0.3) == ChannelSpec::pauli(0, 0, 0.3, 0.7));
    ChannelSpec dep = pauli_special_channel(PauliSpecial::Depolarizing, 0.3);
    CHECK(dep.p[0] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(dep.p[3] == doctest::Approx(0.7).epsilon(1e-12));

    CHECK_THROWS_AS(pauli_special_channel(PauliSpecial::BitFlip, 1.2), BadParameter);
    CHECK_THROWS_AS(pauli_special_channel(PauliSpecial::BitFlip, -0.1), BadParameter);
}

TEST_CASE("named mixture fidelity landmarks") {
    CHECK(pauli_special(PauliSpecial::Depolarizing, 0.0, Reconstructor::Bob2, 0.9, 1.4) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // A pure phase flip commutes with the higher power correction path.
    CHECK(pauli_special(PauliSpecial::PhaseFlip, 1.0, Reconstructor::Bob2, kPi / 4, kPi / 3) ==
          doctest::Approx(1.0).epsilon(1e-9));
    double b2 = pauli_special(PauliSpecial::BitPhaseFlip, 0.75, Reconstructor::Bob2, kPi / 4, kPi / 3);
    double b3 = pauli_special(PauliSpecial::BitPhaseFlip, 0.75, Reconstructor::Bob3, kPi / 4, kPi / 3);
    CHECK(b3 > b2 + 1e-6);
    // The named forms agree with the generic four probability expression.
    ProtocolConfig cfg = cfg_for(pauli_special_channel(PauliSpecial::BitPhaseFlip, 0.75),
                                 Reconstructor::Bob3, kPi / 4, kPi / 3);
    CHECK(average_fidelity_sim(cfg, Averaging::Uniform) == doctest::Approx(b3).epsilon(1e-9));
}

TEST_CASE("the unnormalized mixture reading matches simulation") {
    ChannelSpec ch = ChannelSpec::pauli(0.1, 0.2, 0.3, 0.4);
    ProtocolConfig cfg = cfg_for(ch, Reconstructor::Bob3, kPi / 4, kPi / 3);
    double sim = average_fidelity_sim(cfg, Averaging::Uniform);
    CHECK(std::abs(pauli_bob3_raw(ch, kPi / 4, kPi / 3) - sim) < 1e-9);
    CHECK(std::abs(pauli_bob3_normalized(ch, kPi / 4, kPi / 3) - sim) > 1e-3);
}

TEST_CASE("rotation expression repairs are documented") {
    const auto& notes = cr_transcription_notes();
    CHECK(notes.size() >= 5);
    bool mentions_bracket = false;
    for (const auto& n : notes) mentions_bracket |= n.find("bracket") != std::string::npos;
    CHECK(mentions_bracket);
}

TEST_CASE("rotation reference expression for the higher power receiver") {
    for (double big_theta : {0.3, 0.9, 1.4}) {
        ProtocolConfig cfg = cfg_for(ChannelSpec::cr(big_theta), Reconstructor::Bob2, 0.7, 1.1);
        double sim = average_fidelity_sim(cfg, Averaging::Uniform);
        CHECK(std::abs(sim - closed_form(cfg.channel, Reconstructor::Bob2, 0.7, 1.1)) < 1e-9);
    }
}

TEST_CASE("rotation expression singularities are reported") {
    CHECK_THROWS_AS(closed_form(ChannelSpec::cr(kPi / 4), Reconstructor::Bob2, 0.0, 0.0),
                    CRFormulaSingularity);
    CHECK_THROWS_AS(closed_form(ChannelSpec::cr(kPi / 4), Reconstructor::Bob3, 0.0, 0.0),
                    CRFormulaSingularity);
}

TEST_CASE("weighted averaging disagrees with the damping reference expression") {
    ChannelSpec ch = ChannelSpec::ad(0.5);
    double closed = closed_form(ch, Reconstructor::Bob2, kPi / 4, kPi / 3);
    ProtocolConfig cfg = cfg_for(ch, Reconstructor::Bob2, kPi / 4, kPi / 3);
    CHECK(std::abs(average_fidelity_sim(cfg, Averaging::Uniform) - closed) < 1e-9);
    CHECK(std::abs(average_fidelity_sim(cfg, Averaging::Weighted) - closed) > 1e-2);
}

TEST_CASE("calibration selects the uniform convention") {
    CalibrationReport rep = calibrate_averaging();
    CHECK(rep.chosen == Averaging::Uniform);
    CHECK(default_averaging() == Averaging::Uniform);
    CHECK(rep.entries.size() == 10);
    int voting_uniform = 0;
    for (const auto& e : rep.entries) {
        if (e.channel == "cr") {
            CHECK_FALSE(e.votes);
            continue;
        }
        CHECK(e.votes);
        if (e.averaging == Averaging::Uniform) {
            ++voting_uniform;
            CHECK(e.worst_abs_diff < 1e-9);
        }
    }
    CHECK(voting_uniform == 4);
    bool mentions_raw = false;
    for (const auto& n : rep.notes) mentions_raw |= n.find("raw") != std::string::npos;
    CHECK(mentions_raw);
}

TEST_CASE("channel family helpers") {
    CHECK_FALSE(family_has_param("ideal"));
    CHECK_FALSE(family_has_param("pauli"));
    CHECK(family_has_param("ad"));
    CHECK(family_has_param("pauli-depolarizing"));
    CHECK_THROWS_AS(family_has_param("foo"), BadParameter);

    CHECK(family_param_name("ad") == "eta_A");
    CHECK(family_param_name("pd") == "eta_P");
    CHECK(family_param_name("cd") == "Phi");
    CHECK(family_param_name("cr") == "Theta");
    CHECK(family_param_name("pauli-bitflip") == "p_prime");

    CHECK(family_channel("cd", 1.1, {0, 0, 0, 1}) == ChannelSpec::cd(1.1));
    CHECK(family_channel("pauli-phaseflip", 0.3, {0, 0, 0, 1}) ==
          ChannelSpec::pauli(0, 0, 0.3, 0.7));
    CHECK(family_channel("pauli", 0.0, {0.1, 0.2, 0.3, 0.4}) ==
          ChannelSpec::pauli(0.1, 0.2, 0.3, 0.4));
    CHECK_THROWS_AS(family_channel("foo", 0.0, {0, 0, 0, 1}), BadParameter);
}

TEST_CASE("grid helpers") {
    std::vector<double> axis = linspace(0.0, 1.0, 5);
    REQUIRE(axis.size() == 5);
    CHECK(axis.front() == 0.0);
    CHECK(axis.back() == 1.0);
    CHECK(axis[1] == doctest::Approx(0.25).epsilon(1e-15));

    std::vector<double> open = linspace(0.0, 1.0, 4, false);
    REQUIRE(open.size() == 4);
    CHECK(open.back() == doctest::Approx(0.75).epsilon(1e-15));

    CHECK(default_theta_axis().size() == 25);
    CHECK(default_theta_axis().front() == 0.0);
    CHECK(default_theta_axis().back() == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(default_phi_axis().size() == 48);
    CHECK(default_phi_axis().back() < 2.0 * kPi - 1e-9);

    CHECK(default_param_axis("cd", 3).back() == doctest::Approx(2.0 * kPi).epsilon(1e-15));
    CHECK(default_param_axis("cr", 3).back() == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(default_param_axis("ad", 3).back() == 1.0);
    CHECK(default_param_axis("ideal", 3).empty());
    CHECK_THROWS_AS(linspace(0.0, 1.0, 0), BadParameter);
}

TEST_CASE("sweep evaluates the full ordered grid") {
    SweepRequest req;
    req.family = "ad";
    req.params = {0.2, 0.5};
    req.thetas = {0.4, 1.0};
    req.phis = {0.9};
    req.reconstructors = {Reconstructor::Bob2, Reconstructor::Bob3};
    std::vector<FidelityPoint> pts = sweep(req);
    REQUIRE(pts.size() == 8);
    CHECK(pts[0].param_value == 0.2);
    CHECK(pts[0].theta == 0.4);
    CHECK(pts[0].reconstructor == Reconstructor::Bob2);
    CHECK(pts[1].reconstructor == Reconstructor::Bob3);
    CHECK(pts[2].theta == 1.0);
    CHECK(pts[4].param_value == 0.5);
    for (const auto& p : pts) {
        CHECK(p.f_sim >= -1e-9);
        CHECK(p.f_sim <= 1.0 + 1e-9);
        REQUIRE(p.f_closed.has_value());
        REQUIRE(p.abs_diff.has_value());
        CHECK(*p.abs_diff < 1e-9);
        CHECK(p.param_name == "eta_A");
    }
}

TEST_CASE("sweep output is independent of the worker count") {
    SweepRequest req;
    req.family = "pd";
    req.params = {0.1, 0.4, 0.7};
    req.thetas = {0.3, 0.8, 1.3};
    req.phis = {0.5, 1.5};
    req.reconstructors = {Reconstructor::Bob2, Reconstructor::Bob3};

    SweepRequest par = req;
    par.threads = 4;

    std::ostringstream a, b;
    write_points_csv(a, sweep(req));
    write_points_csv(b, sweep(par));
    CHECK(a.str() == b.str());
}

TEST_CASE("sweep validation") {
    SweepRequest req;
    req.family = "ad";
    req.reconstructors = {};
    req.thetas = {0.4};
    req.phis = {0.9};
    CHECK_THROWS_AS(sweep(req), BadParameter);
}

TEST_CASE("numeric cells use shortest round trip formatting") {
    CHECK(format_g12(0.5) == "0.5");
    CHECK(format_g12(1.0) == "1");
    CHECK(format_g12(kPi / 4) == "0.785398163397");
    CHECK(format_g12(1e-16) == "1e-16");
}

TEST_CASE("points serialize to the documented schema") {
    SweepRequest req;
    req.family = "cd";
    req.params = {kPi};
    req.thetas = {kPi / 4};
    req.phis = {kPi / 3};
    req.reconstructors = {Reconstructor::Bob2};
    std::ostringstream os;
    write_points_csv(os, sweep(req));
    std::istringstream is(os.str());
    std::string header, row;
    std::getline(is, header);
    std::getline(is, row);
    CHECK(header ==
          "channel,param_name,param_value,theta,phi,reconstructor,averaging,f_sim,f_closed,abs_diff");
    CHECK(row.substr(0, 3) == "cd,");
    CHECK(row.find(",Phi,") != std::string::npos);
    CHECK(row.find(",bob2,uniform,") != std::string::npos);
}

TEST_CASE("singular reference cells serialize as empty fields") {
    SweepRequest req;
    req.family = "cr";
    req.params = {kPi / 4};
    req.thetas = {0.0};
    req.phis = {0.0};
    req.reconstructors = {Reconstructor::Bob2};
    std::vector<FidelityPoint> pts = sweep(req);
    REQUIRE(pts.size() == 1);
    CHECK_FALSE(pts[0].f_closed.has_value());
    CHECK_FALSE(pts[0].abs_diff.has_value());
    std::ostringstream os;
    write_points_csv(os, pts);
    CHECK(os.str().find(",,") != std::string::npos);
}
