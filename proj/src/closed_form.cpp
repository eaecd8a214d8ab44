#include "hjrsp/closed_form.hpp"

#include <array>
#include <cmath>

namespace hjrsp {

namespace {

constexpr double kCrSingularTol = 1e-12;

double sq(double x) { return x * x; }

double f_ad_bob2(double eta, double th, double ph) {
    const double c = std::cos(th), s = std::sin(th);
    const double c2 = c * c, s2 = s * s;
    const double quart = c2 * c2 + s2 * s2;
    const double num = (eta * eta - eta + 2.0) * quart
        - 2.0 * s2 * c2 *
              (eta * eta * eta + (eta - 1.0) * eta * eta * std::cos(2.0 * ph) - 2.0 * eta * eta + eta - 2.0);
    return num / (2.0 * (eta * eta + 1.0));
}

double f_ad_bob3(double eta, double th, double ph) {
    const double c = std::cos(th), s = std::sin(th);
    const double c2 = c * c, s2 = s * s;
    const double root = std::sqrt(1.0 - eta);
    const double inner = -root * eta * eta + root * (1.0 - eta) * eta * std::cos(2.0 * ph)
        - root * eta + 2.0 * eta + 2.0 * root;
    return (s2 * c2 * inner + s2 * s2 + c2 * c2) / (eta + 1.0);
}

double f_pd_bob2(double eta, double th) {
    return 0.25 * (eta * eta - (eta - 2.0) * eta * std::cos(4.0 * th) - 2.0 * eta + 4.0);
}

double f_pd_bob3(double eta, double th) {
    return 0.25 * (-eta * eta * eta + (eta * eta - 3.0 * eta + 3.0) * eta * std::cos(4.0 * th)
                   + 3.0 * eta * eta - 3.0 * eta + 4.0);
}

double f_cd_bob2(double Phi, double th) {
    return (-std::cos(4.0 * th - 2.0 * Phi) - std::cos(4.0 * th + 2.0 * Phi) + 2.0 * std::cos(4.0 * th)
            + 2.0 * std::cos(2.0 * Phi) + 14.0) / 16.0;
}

double f_cd_bob3(double Phi, double th) {
    const double c = std::cos(th), s = std::sin(th);
    const double c2 = c * c, s2 = s * s;
    return s2 * c2 * (std::cos(Phi) + std::cos(3.0 * Phi)) + s2 * s2 + c2 * c2;
}

double pauli_denom(const std::array<double, 4>& p) {
    return sq(p[0] + p[1]) + sq(p[2] + p[3]);
}

double f_pauli_bob2(const std::array<double, 4>& pr, double th, double ph) {
    const double p1 = pr[0], p2 = pr[1], p3 = pr[2], p4 = pr[3];
    const double c = std::cos(th), s = std::sin(th);
    const double c2 = c * c, s2 = s * s;
    const double quart = c2 * c2 + s2 * s2;
    const double D = pauli_denom(pr);

    const double Q = p1 * p1 + p2 * p2 + p1 * (2.0 * p2 - p3 - p4) - p2 * (p3 + p4) + sq(p3 + p4);
    const double T1 = std::pow(p3, 4) - std::pow(p1, 3) * (p3 - 3.0 * p4) + std::pow(p2, 3) * (3.0 * p3 - p4)
        + std::pow(p4, 4) + p2 * std::pow(p3 + p4, 3) + 3.0 * p2 * p2 * (p3 * p3 + p4 * p4)
        + p1 * (p2 * p2 * p4 + std::pow(p3 + p4, 3)) + p1 * p1 * (p2 * p3 + 3.0 * (p3 * p3 + p4 * p4));
    const double T2 = std::pow(p1, 4) + p1 * p1 * (-2.0 * p2 * p2 + sq(p3 - p4))
        - 2.0 * p1 * (p3 - p4) * (p2 * (p4 - p3) + sq(p3 + p4))
        + p2 * (std::pow(p2, 3) + p2 * sq(p3 - p4) + 2.0 * (p3 - p4) * sq(p3 + p4));
    const double S = p1 * p1 * (5.0 * p2 + 6.0 * p3) * p4 - 2.0 * p3 * p4 * (-3.0 * p2 * p2 + p3 * p4)
        + p1 * p2 * (5.0 * p2 * p3 + 2.0 * sq(p3 + p4));

    return (Q * quart + 2.0 * c2 * s2 * (T1 + T2 * std::cos(2.0 * ph))
            + 0.5 * S * sq(std::sin(2.0 * th))) / D;
}

double f_pauli_bob3_core(const std::array<double, 4>& pr, double th, double ph) {
    const double p1 = pr[0], p2 = pr[1], p3 = pr[2], p4 = pr[3];
    const double c = std::cos(th), s = std::sin(th);
    const double c2 = c * c, s2 = s * s;
    const double quart = c2 * c2 + s2 * s2;
    const double D = pauli_denom(pr);

    const double T1 = p3 * (std::pow(p1, 3) - sq(p2 - p3) * (p2 + p3) + p1 * (11.0 * p2 * p2 + 3.0 * p3 * p3))
        + p2 * (p1 * p1 + 3.0 * p2 * p2) * p4 + 3.0 * p2 * p2 * p4 * p4
        + (3.0 * p1 + p2) * std::pow(p4, 3) + std::pow(p4, 4);
    const double T2 = (p1 - p2 - p3 + p4)
        * (std::pow(p1, 3) - p1 * p1 * p2 + p2 * (p2 * p2 + (p3 - p4) * (3.0 * p3 + p4))
           - p1 * (p2 * p2 + (p3 - p4) * (p3 + 3.0 * p4)));
    const double S = 5.0 * std::pow(p1, 3) * p4
        + p1 * p1 * (5.0 * p3 * (p2 + p3) + 4.0 * p3 * p4 + 7.0 * p4 * p4)
        + p3 * p4 * (12.0 * p2 * p2 + 7.0 * p2 * (p3 + p4) + 2.0 * (p3 - p4) * (p3 + p4))
        + p1 * (7.0 * p2 * p2 * p4 + 5.0 * p3 * p4 * (p3 + p4) + 2.0 * p2 * (p3 + p4) * (5.0 * p3 + 3.0 * p4));

    return D * quart + 2.0 * c2 * s2 * (T1 + T2 * std::cos(2.0 * ph)) + 0.5 * S * sq(std::sin(2.0 * th));
}

// CR reference expressions. Trig aliases: capital T = noise angle.
struct CrVars {
    double CT, ST;
    double CT2, CT3, CT4, CT5, CT6, CT7, CT8;
    double ST2, ST3, ST4, ST5, ST6, ST7, ST8;
    double S2T4;  // sin^4(2T)
    double c, s, c2, c3, c4, s2, s3, s4;
    double C2th, C4th, S2th, S4th;
    double Cph, C2ph, Sph2;      // Sph2 = sin^2(phi)
    double Chalf2, Shalf2;       // cos^2(phi/2), sin^2(phi/2)
    double C4tmp, C4tpp, S4tmp, S4tpp;  // cos/sin(4 theta -+ phi)
    double common;

    CrVars(double T, double th, double ph) {
        CT = std::cos(T);
        ST = std::sin(T);
        CT2 = CT * CT; CT3 = CT2 * CT; CT4 = CT3 * CT; CT5 = CT4 * CT;
        CT6 = CT5 * CT; CT7 = CT6 * CT; CT8 = CT7 * CT;
        ST2 = ST * ST; ST3 = ST2 * ST; ST4 = ST3 * ST; ST5 = ST4 * ST;
        ST6 = ST5 * ST; ST7 = ST6 * ST; ST8 = ST7 * ST;
        S2T4 = std::pow(std::sin(2.0 * T), 4);
        c = std::cos(th);
        s = std::sin(th);
        c2 = c * c; c3 = c2 * c; c4 = c3 * c;
        s2 = s * s; s3 = s2 * s; s4 = s3 * s;
        C2th = std::cos(2.0 * th);
        C4th = std::cos(4.0 * th);
        S2th = std::sin(2.0 * th);
        S4th = std::sin(4.0 * th);
        Cph = std::cos(ph);
        C2ph = std::cos(2.0 * ph);
        Sph2 = sq(std::sin(ph));
        Chalf2 = sq(std::cos(ph / 2.0));
        Shalf2 = sq(std::sin(ph / 2.0));
        C4tmp = std::cos(4.0 * th - ph);
        C4tpp = std::cos(4.0 * th + ph);
        S4tmp = std::sin(4.0 * th - ph);
        S4tpp = std::sin(4.0 * th + ph);
        common = CT8 + c4 * ST8 - 2.0 * c2 * C2ph * ST8 * s2 + ST8 * s4;
    }
};

double cr_term_den(double T, double th, double ph, double k0, const std::array<double, 14>& w) {
    const double b[14] = {
        std::cos(2.0 * T - ph), std::cos(6.0 * T - ph),
        std::cos(4.0 * T - 2.0 * th - ph), std::cos(4.0 * T + 2.0 * th - ph),
        std::cos(2.0 * T + ph), std::cos(6.0 * T + ph),
        std::cos(4.0 * T - 2.0 * th + ph), std::cos(4.0 * T + 2.0 * th + ph),
        std::sin(4.0 * T - 2.0 * th), std::sin(4.0 * T + 2.0 * th),
        std::sin(2.0 * T - 2.0 * th - ph), std::sin(2.0 * T + 2.0 * th - ph),
        std::sin(2.0 * T - 2.0 * th + ph), std::sin(2.0 * T + 2.0 * th + ph)};
    double d = k0;
    for (int i = 0; i < 14; ++i) d += w[i] * b[i];
    return d;
}

double guarded_ratio(double num, double den, const char* term) {
    if (std::abs(den) < kCrSingularTol)
        throw CRFormulaSingularity(std::string("vanishing denominator in CR term ") + term);
    return num / den;
}

double cr_term_a(const CrVars& v, double T, double th, double ph) {
    const double den = cr_term_den(T, th, ph, 8.0,
        {-1, 1, 1, -1, -1, 1, 1, -1, 2, 2, -2, -2, -2, -2});
    const double num = v.common
        + 2.0 * v.CT4 * v.ST4 * (v.c4 + 2.0 * v.c3 * (1.0 - 4.0 * v.Cph + v.C2ph) * v.s
                                 + v.c2 * v.C2ph * v.s2 - 4.0 * v.c * sq(v.Cph) * v.s3 + v.s4)
        + 2.0 * v.CT2 * v.ST6 * (2.0 * v.c4 * v.Cph - 4.0 * v.c3 * sq(v.Cph) * v.s
                                 + v.c2 * (3.0 + v.C2ph) * v.s2 - 4.0 * v.c * v.Cph * v.s3
                                 + 4.0 * v.Chalf2 * v.s4)
        + v.CT * v.C2th * v.ST7 * (-2.0 + 2.0 * v.Cph * (-1.0 + v.S2th))
        + (3.0 / 32.0) * v.S2T4 * sq(v.S2th)
        + 2.0 * v.CT7 * v.ST * (-v.c2 * (-1.0 + v.Cph) + (-1.0 + v.Cph) * v.s2 + v.Cph * v.S2th)
        - 4.0 * v.CT6 * v.ST2 * (v.c4 * (-1.0 + v.Cph) + v.Cph * v.s4
                                 + 4.0 * v.c * v.Cph * v.s3 * v.Shalf2 - v.c2 * v.s2 * v.Sph2)
        + v.CT3 * v.ST5 * (-2.0 * v.C2th * (1.0 + v.Cph)
                           + v.Cph * (2.0 + 2.0 * v.C4th - v.C4tmp + 2.0 * v.Cph - v.C4tpp
                                      - 2.0 * v.S2th + v.S4tmp + v.S4tpp))
        + v.CT5 * v.ST3 * (-2.0 * v.C2th * (-1.0 + v.Cph)
                           + v.Cph * (-2.0 - 2.0 * v.C4th + v.C4tmp - 2.0 * v.Cph + v.C4tpp
                                      - v.S4th + v.S4tmp + v.S4tpp));
    return guarded_ratio(num, den, "A");
}

double cr_term_b(const CrVars& v, double T, double th, double ph) {
    const double den = cr_term_den(T, th, ph, 8.0,
        {1, -1, -1, 1, 1, -1, -1, 1, 2, 2, 2, 2, 2, 2});
    const double num = v.common
        + 2.0 * v.CT7 * v.ST * (v.c2 * (1.0 + v.Cph) - 2.0 * v.c * v.Cph * v.s - (1.0 + v.Cph) * v.s2)
        + 2.0 * v.CT4 * v.ST4 * (v.c4 + 2.0 * v.c3 * (1.0 + 4.0 * v.Cph + v.C2ph) * v.s
                                 + v.c2 * v.C2ph * v.s2 - 4.0 * v.c * sq(v.Cph) * v.s3 + v.s4)
        + 2.0 * v.CT2 * v.ST6 * (-2.0 * v.c4 * v.Cph - 4.0 * v.c3 * sq(v.Cph) * v.s
                                 + v.c2 * (3.0 + v.C2ph) * v.s2 + 4.0 * v.c * v.Cph * v.s3
                                 - 2.0 * (-1.0 + v.Cph) * v.s4)
        - v.CT * v.C2th * v.ST7 * (2.0 + 2.0 * v.Cph * (-1.0 + v.S2th))
        + (3.0 / 32.0) * v.S2T4 * sq(v.S2th)
        + 4.0 * v.CT6 * v.ST2 * (v.c4 * (1.0 + v.Cph) + 4.0 * v.c * v.Chalf2 * v.Cph * v.s3
                                 + v.Cph * v.s4 + v.c2 * v.s2 * v.Sph2)
        + v.CT3 * v.ST5 * (2.0 * v.C2th * (-1.0 + v.Cph)
                           + v.Cph * (-2.0 - 2.0 * v.C4th - v.C4tmp + 2.0 * v.Cph - v.C4tpp
                                      + 2.0 * v.S2th + v.S4tmp + v.S4tpp))
        + v.CT5 * v.ST3 * (2.0 * v.C2th * (1.0 + v.Cph)
                           + v.Cph * (2.0 + 2.0 * v.C4th + v.C4tmp - 2.0 * v.Cph + v.C4tpp
                                      + v.S4th + v.S4tmp + v.S4tpp));
    return guarded_ratio(num, den, "B");
}

double cr_term_c(const CrVars& v, double T, double th, double ph) {
    const double den = cr_term_den(T, th, ph, -8.0,
        {-1, 1, -1, 1, -1, -1, 1, 1, 2, 2, 2, 2, 2, 2});
    const double num = v.common
        - 2.0 * v.CT7 * v.ST * (v.c2 * (1.0 + v.Cph) - 2.0 * v.c * v.Cph * v.s - (1.0 + v.Cph) * v.s2)
        + 2.0 * v.CT4 * v.ST4 * (v.c4 + 4.0 * v.c3 * sq(v.Cph) * v.s + v.c2 * v.C2ph * v.s2
                                 - 2.0 * v.c * (1.0 + 4.0 * v.Cph + v.C2ph) * v.s3 + v.s4)
        + 2.0 * v.CT2 * v.ST6 * (-2.0 * v.c4 * (-1.0 + v.Cph) - 4.0 * v.c3 * v.Cph * v.s
                                 + v.c2 * (3.0 + v.C2ph) * v.s2 + 4.0 * v.c * sq(v.Cph) * v.s3
                                 - 2.0 * v.Cph * v.s4)
        + (3.0 / 32.0) * v.S2T4 * sq(v.S2th)
        - 2.0 * v.CT * v.C2th * v.ST7 * (-1.0 + v.Cph * (1.0 + v.S2th))
        + 4.0 * v.CT6 * v.ST2 * (v.c4 * v.Cph - 4.0 * v.c3 * v.Chalf2 * v.Cph * v.s
                                 + 2.0 * v.Chalf2 * v.s4 + v.c2 * v.s2 * v.Sph2)
        - v.CT3 * v.ST5 * (2.0 * v.C2th * (-1.0 + v.Cph)
                           + v.Cph * (2.0 + 2.0 * v.C4th + v.C4tmp - 2.0 * v.Cph + v.C4tpp
                                      + 2.0 * v.S2th - v.S4tmp - v.S4tpp))
        + v.CT5 * v.ST3 * (-2.0 * v.C2th * (1.0 + v.Cph)
                           + v.Cph * (2.0 + 2.0 * v.C4th + v.C4tmp - 2.0 * v.Cph + v.C4tpp
                                      + v.S4th + v.S4tmp + v.S4tpp));
    return guarded_ratio(num, den, "C");
}

double cr_term_d(const CrVars& v, double T, double th, double ph) {
    const double den = cr_term_den(T, th, ph, 8.0,
        {-1, 1, -1, 1, -1, 1, -1, 1, -2, -2, 2, 2, 2, 2});
    const double num = v.common
        + 2.0 * v.CT7 * v.ST * (v.c2 * (-1.0 + v.Cph) - 2.0 * v.c * v.Cph * v.s - (-1.0 + v.Cph) * v.s2)
        + 2.0 * v.CT4 * v.ST4 * (v.c4 + 4.0 * v.c3 * sq(v.Cph) * v.s + v.c2 * v.C2ph * v.s2
                                 - 2.0 * v.c * (1.0 - 4.0 * v.Cph + v.C2ph) * v.s3 + v.s4)
        + 2.0 * v.CT2 * v.ST6 * (2.0 * v.c4 * (1.0 + v.Cph) + 4.0 * v.c3 * v.Cph * v.s
                                 + v.c2 * (3.0 + v.C2ph) * v.s2 + 4.0 * v.c * sq(v.Cph) * v.s3
                                 + 2.0 * v.Cph * v.s4)
        + (3.0 / 32.0) * v.S2T4 * sq(v.S2th)
        + 2.0 * v.CT * v.C2th * v.ST7 * (1.0 + v.Cph * (1.0 + v.S2th))
        - 4.0 * v.CT6 * v.ST2 * (v.c4 * v.Cph + (-1.0 + v.Cph) * v.s4
                                 - 4.0 * v.c3 * v.Cph * v.s * v.Shalf2 - v.c2 * v.s2 * v.Sph2)
        + v.CT3 * v.ST5 * (2.0 * v.C2th * (1.0 + v.Cph)
                           + v.Cph * (2.0 + 2.0 * v.C4th - v.C4tmp + 2.0 * v.Cph - v.C4tpp
                                      + 2.0 * v.S2th + v.S4tmp + v.S4tpp))
        + v.CT5 * v.ST3 * (2.0 * v.C2th * (-1.0 + v.Cph)
                           + v.Cph * (-2.0 - 2.0 * v.C4th + v.C4tmp - 2.0 * v.Cph + v.C4tpp
                                      - v.S4th + v.S4tmp + v.S4tpp));
    return guarded_ratio(num, den, "D");
}

double cr_term_e(const CrVars& v, double T, double th, double ph) {
    const double den = cr_term_den(T, th, ph, -8.0,
        {-1, 1, 1, -1, -1, 1, 1, -1, 2, 2, 2, 2, 2, 2});
    const double num = v.common
        + 2.0 * v.CT2 * v.ST6 * (-2.0 * v.c4 * v.Cph + 4.0 * v.c3 * sq(v.Cph) * v.s
                                 + v.c2 * (3.0 + v.C2ph) * v.s2 - 4.0 * v.c * v.Cph * v.s3
                                 - 2.0 * (-1.0 + v.Cph) * v.s4)
        + (3.0 / 32.0) * v.S2T4 * sq(v.S2th)
        - 2.0 * v.CT7 * v.ST * (v.C2th * (1.0 + v.Cph) + v.Cph * v.S2th)
        - 2.0 * v.CT * v.C2th * v.ST7 * (-1.0 + v.Cph * (1.0 + v.S2th))
        + 4.0 * v.CT6 * v.ST2 * (v.c4 * (1.0 + v.Cph) - 4.0 * v.c * v.Chalf2 * v.Cph * v.s3
                                 + v.Cph * v.s4 + v.c2 * v.s2 * v.Sph2)
        - (1.0 / 8.0) * v.CT4 * v.ST4
              * (-12.0 - 4.0 * v.C4th + std::cos(4.0 * th - 2.0 * ph) - 2.0 * v.C2ph
                 + std::cos(2.0 * (2.0 * th + ph)) + 8.0 * v.S4th + 4.0 * std::sin(4.0 * th - 2.0 * ph)
                 + 16.0 * std::sin(2.0 * th - ph) + 8.0 * v.S4tmp + 16.0 * std::sin(2.0 * th + ph)
                 + 4.0 * std::sin(2.0 * (2.0 * th + ph)) + 8.0 * v.S4tpp)
        + v.CT3 * v.ST5 * (-2.0 * v.C2th * (-1.0 + v.Cph)
                           + v.Cph * (2.0 + 2.0 * v.C4th + v.C4tmp - 2.0 * v.Cph + v.C4tpp
                                      + 2.0 * v.S2th + v.S4tmp + v.S4tpp))
        + v.CT5 * v.ST3 * (-2.0 * v.C2th * (1.0 + v.Cph)
                           + v.Cph * (-2.0 - 2.0 * v.C4th - v.C4tmp + 2.0 * v.Cph - v.C4tpp
                                      + v.S4th + v.S4tmp + v.S4tpp));
    return guarded_ratio(num, den, "E");
}

double cr_term_f(const CrVars& v, double T, double th, double ph) {
    const double den = cr_term_den(T, th, ph, 8.0,
        {-1, 1, 1, -1, -1, 1, 1, -1, -2, -2, 2, 2, 2, 2});
    const double num = v.common
        + 2.0 * v.CT4 * v.ST4 * (v.c4 - 2.0 * v.c3 * (1.0 - 4.0 * v.Cph + v.C2ph) * v.s
                                 + v.c2 * v.C2ph * v.s2 + 4.0 * v.c * sq(v.Cph) * v.s3 + v.s4)
        + 2.0 * v.CT2 * v.ST6 * (2.0 * v.c4 * v.Cph + 4.0 * v.c3 * sq(v.Cph) * v.s
                                 + v.c2 * (3.0 + v.C2ph) * v.s2 + 4.0 * v.c * v.Cph * v.s3
                                 + 4.0 * v.Chalf2 * v.s4)
        + (3.0 / 32.0) * v.S2T4 * v.s2
        + 2.0 * v.CT7 * v.ST * (v.C2th * (-1.0 + v.Cph) + v.Cph * v.S2th)
        + 2.0 * v.CT * v.C2th * v.ST7 * (1.0 + v.Cph * (1.0 + v.S2th))
        - 4.0 * v.CT6 * v.ST2 * (v.c4 * (-1.0 + v.Cph) + v.Cph * v.s4
                                 - 4.0 * v.c * v.Cph * v.s3 * v.Shalf2 - v.c2 * v.s2 * v.Sph2)
        + v.CT3 * v.ST5 * (2.0 * v.C2th * (1.0 + v.Cph)
                           + v.Cph * (-2.0 - 2.0 * v.C4th + v.C4tmp - 2.0 * v.Cph + v.C4tpp
                                      - 2.0 * v.S2th + v.S4tmp + v.S4tpp))
        + v.CT5 * v.ST3 * (2.0 * v.C2th * (-1.0 + v.Cph)
                           + v.Cph * (2.0 + 2.0 * v.C4th - v.C4tmp + 2.0 * v.Cph - v.C4tpp
                                      - v.S4th + v.S4tmp + v.S4tpp));
    return guarded_ratio(num, den, "F");
}

double cr_term_g(const CrVars& v, double T, double th, double ph) {
    const double den = cr_term_den(T, th, ph, 8.0,
        {-1, 1, -1, 1, -1, 1, -1, 1, 2, 2, -2, -2, -2, -2});
    const double num = v.common
        + 2.0 * v.CT4 * v.ST4 * (v.c4 - 4.0 * v.c3 * sq(v.Cph) * v.s + v.c2 * v.C2ph * v.s2
                                 + 2.0 * v.c * (1.0 - 4.0 * v.Cph + v.C2ph) * v.s3 + v.s4)
        + 2.0 * v.CT2 * v.ST6 * (2.0 * v.c4 * (1.0 + v.Cph) - 4.0 * v.c3 * v.Cph * v.s
                                 + v.c2 * (3.0 + v.C2ph) * v.s2 - 4.0 * v.c * sq(v.Cph) * v.s3
                                 + 2.0 * v.Cph * v.s4)
        + v.CT * v.C2th * v.ST7 * (-2.0 + 2.0 * v.Cph * (-1.0 + v.S2th))
        + (3.0 / 32.0) * v.S2T4 * sq(v.S2th)
        - 2.0 * v.CT7 * v.ST * (v.c2 * (-1.0 + v.Cph) + v.Cph * v.S2th)
        - 4.0 * v.CT6 * v.ST2 * (v.c4 * v.Cph + (-1.0 + v.Cph) * v.s4
                                 + 4.0 * v.c3 * v.Cph * v.s * v.Shalf2 - v.c2 * v.s2 * v.Sph2)
        + v.CT3 * v.ST5 * (-2.0 * v.C2th * (1.0 + v.Cph)
                           + v.Cph * (-2.0 - 2.0 * v.C4th + v.C4tmp - 2.0 * v.Cph + v.C4tpp
                                      + 2.0 * v.S2th + v.S4tmp + v.S4tpp))
        + v.CT5 * v.ST3 * (-2.0 * v.C2th * (-1.0 + v.Cph)
                           + v.Cph * (2.0 + 2.0 * v.C4th - v.C4tmp + 2.0 * v.Cph - v.C4tpp
                                      - v.S4th + v.S4tmp + v.S4tpp));
    return guarded_ratio(num, den, "G");
}

double cr_term_h(const CrVars& v, double T, double th, double ph) {
    const double den = cr_term_den(T, th, ph, 8.0,
        {1, -1, 1, -1, 1, -1, 1, -1, 2, 2, 2, 2, 2, 2});
    const double num = v.common
        + 2.0 * v.CT4 * v.ST4 * (v.c4 - 4.0 * v.c3 * sq(v.Cph) * v.s + v.c2 * v.C2ph * v.s2
                                 + 2.0 * v.c * (1.0 + 4.0 * v.Cph + v.C2ph) * v.s3 + v.s4)
        + 2.0 * v.CT2 * v.ST6 * (-2.0 * v.c4 * (-1.0 + v.Cph) + 4.0 * v.c3 * v.Cph * v.s
                                 + v.c2 * (3.0 + v.C2ph) * v.s2 - 4.0 * v.c * sq(v.Cph) * v.s3
                                 - 2.0 * v.Cph * v.s4)
        - v.CT * v.C2th * v.ST7 * (2.0 + 2.0 * v.Cph * (-1.0 + v.S2th))
        + (3.0 / 32.0) * v.S2T4 * sq(v.S2th)
        + 2.0 * v.CT7 * v.ST * (v.c2 * (1.0 + v.Cph) + v.Cph * v.S2th)
        - 4.0 * v.CT6 * v.ST2 * (v.c4 * v.Cph + 4.0 * v.c3 * v.Chalf2 * v.Cph * v.s
                                 + 2.0 * v.Chalf2 * v.s4 + v.c2 * v.s2 * v.Sph2)
        + v.CT3 * v.ST5 * (2.0 * v.C2th * (-1.0 + v.Cph)
                           + v.Cph * (2.0 + 2.0 * v.C4th + v.C4tmp - 2.0 * v.Cph + v.C4tpp
                                      - 2.0 * v.S2th + v.S4tmp + v.S4tpp))
        + v.CT5 * v.ST3 * (2.0 * v.C2th * (1.0 + v.Cph)
                           + v.Cph * (-2.0 - 2.0 * v.C4th - v.C4tmp + 2.0 * v.Cph - v.C4tpp
                                      + v.S4th + v.S4tmp + v.S4tpp));
    return guarded_ratio(num, den, "H");
}

double f_cr_bob2(double T, double th, double ph) {
    const double den = 8.0 * (sq(3.0 + std::cos(4.0 * T))
        - 4.0 * sq(std::cos(T)) * sq(std::cos(4.0 * T - 2.0 * th) + 3.0 * std::cos(2.0 * th))
              * sq(std::cos(ph)) * sq(std::sin(T)));
    if (std::abs(den) < kCrSingularTol)
        throw CRFormulaSingularity("vanishing denominator in the higher-power CR expression");

    const double c = std::cos(th), s = std::sin(th);
    const double c2 = c * c, c3 = c2 * c, c4 = c3 * c;
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s;
    const double C2T = std::cos(2.0 * T), C4T = std::cos(4.0 * T), C6T = std::cos(6.0 * T);
    const double C8T = std::cos(8.0 * T), C10T = std::cos(10.0 * T);
    const double S2T3 = std::pow(std::sin(2.0 * T), 3);
    // sq(3+cos4T), not 3+sq(cos4T): see cr_transcription_notes().
    const double head = sq(3.0 + C4T) * (5.0 + 3.0 * C4T);

    const double num = head * c4
        - (42.0 + 88.0 * C2T + 36.0 * C4T + 23.0 * C6T + 2.0 * C8T + C10T
           + 9.0 * std::cos(6.0 * T - 4.0 * th) + 4.0 * std::cos(8.0 * T - 4.0 * th)
           + 2.0 * std::cos(10.0 * T - 4.0 * th) + 7.0 * std::cos(2.0 * (T - 2.0 * th))
           + 18.0 * std::cos(4.0 * (T - th)) + 24.0 * std::cos(4.0 * th)
           + 2.0 * std::cos(4.0 * (T + th)) - std::cos(2.0 * (T + 2.0 * th))
           - std::cos(6.0 * T + 4.0 * th)) * std::cos(2.0 * ph) * sq(std::sin(T))
        - 16.0 * (5.0 * C2T + C6T) * c3 * S2T3 * s
        + 2.0 * sq(std::cos(T)) * (78.0 + 14.0 * C2T + 40.0 * C4T - 9.0 * C6T + 10.0 * C8T - 5.0 * C10T)
              * c2 * s2
        + 16.0 * (5.0 * C2T + C6T) * c * S2T3 * s3
        + head * s4;
    return num / den;
}

double f_cr_bob3(double T, double th, double ph) {
    const CrVars v(T, th, ph);
    return cr_term_a(v, T, th, ph) + cr_term_b(v, T, th, ph) + cr_term_c(v, T, th, ph)
        + cr_term_d(v, T, th, ph) + cr_term_e(v, T, th, ph) + cr_term_f(v, T, th, ph)
        + cr_term_g(v, T, th, ph) + cr_term_h(v, T, th, ph);
}

}  // namespace

double pauli_bob3_raw(const ChannelSpec& pauli, double theta, double phi) {
    if (pauli.kind != ChannelSpec::Kind::Pauli) throw BadParameter("expects a Pauli channel");
    return f_pauli_bob3_core(pauli.p, theta, phi);
}

double pauli_bob3_normalized(const ChannelSpec& pauli, double theta, double phi) {
    if (pauli.kind != ChannelSpec::Kind::Pauli) throw BadParameter("expects a Pauli channel");
    return f_pauli_bob3_core(pauli.p, theta, phi) / pauli_denom(pauli.p);
}

double closed_form(const ChannelSpec& spec, Reconstructor r, double theta, double phi) {
    spec.validate();
    if (r == Reconstructor::Bob1) r = Reconstructor::Bob3;  // shared expression
    const bool b2 = (r == Reconstructor::Bob2);
    switch (spec.kind) {
        case ChannelSpec::Kind::Ideal:
            return 1.0;
        case ChannelSpec::Kind::AD:
            return b2 ? f_ad_bob2(spec.p[0], theta, phi) : f_ad_bob3(spec.p[0], theta, phi);
        case ChannelSpec::Kind::PD:
            return b2 ? f_pd_bob2(spec.p[0], theta) : f_pd_bob3(spec.p[0], theta);
        case ChannelSpec::Kind::CD:
            return b2 ? f_cd_bob2(spec.p[0], theta) : f_cd_bob3(spec.p[0], theta);
        case ChannelSpec::Kind::CR:
            return b2 ? f_cr_bob2(spec.p[0], theta, phi) : f_cr_bob3(spec.p[0], theta, phi);
        case ChannelSpec::Kind::Pauli:
            return b2 ? f_pauli_bob2(spec.p, theta, phi) : f_pauli_bob3_core(spec.p, theta, phi);
    }
    throw BadParameter("unknown channel kind");
}

std::string pauli_special_name(PauliSpecial kind) {
    switch (kind) {
        case PauliSpecial::BitFlip: return "pauli-bitflip";
        case PauliSpecial::BitPhaseFlip: return "pauli-bitphaseflip";
        case PauliSpecial::PhaseFlip: return "pauli-phaseflip";
        case PauliSpecial::Depolarizing: return "pauli-depolarizing";
    }
    return "?";
}

ChannelSpec pauli_special_channel(PauliSpecial kind, double p_prime) {
    if (!(p_prime >= 0.0 && p_prime <= 1.0)) throw BadParameter("p_prime outside [0,1]");
    switch (kind) {
        case PauliSpecial::BitFlip:
            return ChannelSpec::pauli(p_prime, 0.0, 0.0, 1.0 - p_prime);
        case PauliSpecial::BitPhaseFlip:
            return ChannelSpec::pauli(0.0, p_prime, 0.0, 1.0 - p_prime);
        case PauliSpecial::PhaseFlip:
            return ChannelSpec::pauli(0.0, 0.0, p_prime, 1.0 - p_prime);
        case PauliSpecial::Depolarizing:
            return ChannelSpec::pauli(p_prime / 3.0, p_prime / 3.0, p_prime / 3.0, 1.0 - p_prime);
    }
    throw BadParameter("unknown special channel");
}

double pauli_special(PauliSpecial kind, double p_prime, Reconstructor r, double theta, double phi) {
    return closed_form(pauli_special_channel(kind, p_prime), r, theta, phi);
}

const std::vector<std::string>& cr_transcription_notes() {
    static const std::vector<std::string> notes = {
        "higher-power expression: the unbalanced first factor '(3+cos^2(4T)(5+3cos(4T))cos^4(T)' is "
        "read as '(3+cos(4T))^2 (5+3cos(4T)) cos^4(theta)', and the same '(3+cos(4T))^2' reading is "
        "applied to the final sin^4(theta) term; the literal 'cos^2(4T)' reading violates F = 1 at "
        "T = 0 (identity channel) for every theta, while this reading restores it exactly and "
        "mirrors the '(3+cos(4T))^2' factor of the denominator",
        "term C: two missing closing brackets restored before the cos^5 factor",
        "term D: two missing closing brackets restored before the cos^5 factor",
        "term E: bracket closed after the '8 sin(4theta+phi)' series and after '(-1+cos(phi)'",
        "term F: trailing 'sin(4theta)+phi' read as 'sin(4theta+phi)'",
        "term F: the 3/32 factor multiplies sin^2(theta) as printed (every other term carries "
        "sin^2(2theta)); kept literal",
        "term G denominator: extra closing bracket after '2sin(4T+2theta)' dropped",
        "term H denominator: doubled minus before 'cos(6T+phi)' read as a single minus",
        "term H: extra closing bracket after '4cos^3(theta)' dropped",
    };
    return notes;
}

}  // namespace hjrsp
