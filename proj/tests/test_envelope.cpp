#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <sstream>

#include "floatbody/envelope.hpp"
#include "helpers.hpp"

using namespace floatbody;

namespace {

// Quadrature oracle for the envelope definitions in Theta space:
//   a(phi) = int_{arcsin phi}^{pi/2} rho cos,  b(phi) = -int_0^{arcsin phi} rho sin.
double a_oracle(const CurvatureProfile& p, double phi) {
    return fbtest::gk_integrate([&](double t) { return p.rho(t) * std::cos(t); },
                                std::asin(phi), 0.5 * kPi);
}
double b_oracle(const CurvatureProfile& p, double phi) {
    return -fbtest::gk_integrate([&](double t) { return p.rho(t) * std::sin(t); }, 0.0,
                                 std::asin(phi));
}

}  // namespace

TEST_CASE("zero profile gives the identically-zero envelope") {
    const auto env = Envelope::build(CurvatureProfile::zero());
    for (double phi : {0.0, 0.3, 0.99, 1.0}) {
        const auto j = env.jet(phi);
        CHECK(j.a == 0.0);
        CHECK(j.at == 0.0);
        CHECK(j.b == 0.0);
        CHECK(j.b2 == 0.0);
    }
    CHECK(env.alpha1() == 1.0);
    CHECK(env.delta() == 0.0);
}

TEST_CASE("closed forms match the quadrature oracle") {
    for (auto p : {CurvatureProfile::cosine_odd(1, 0.5), CurvatureProfile::cosine_odd(3, 0.4),
                   CurvatureProfile::piecewise_quartic(0.5)}) {
        const auto env = Envelope::build(p);
        for (double phi : {0.05, 0.3, 0.71, 0.85, 0.97, 0.9999}) {
            const auto j = env.jet(phi);
            CHECK(j.a == Catch::Approx(a_oracle(p, phi)).margin(1e-11));
            CHECK(j.b == Catch::Approx(b_oracle(p, phi)).margin(1e-11));
            const double C = std::sqrt(1 - phi * phi);
            CHECK(j.at == Catch::Approx(j.a / C).margin(1e-10));
        }
        // boundary normalization: a(0) = 0 (observation C), b(0) = 0 (translation)
        CHECK(std::abs(env.jet(0.0).a) < 1e-12);
        CHECK(std::abs(env.jet(0.0).b) < 1e-12);
        CHECK(std::abs(env.jet(1.0).a) < 1e-12);
        CHECK(std::abs(env.jet(1.0).at) < 1e-12);
    }
}

TEST_CASE("derivative identities a' = -rho(arcsin phi), b' = -rho phi/C") {
    for (auto p : {CurvatureProfile::cosine_odd(2, 0.6), CurvatureProfile::piecewise_quartic(0.5)}) {
        const auto env = Envelope::build(p);
        for (int i = 1; i < 40; ++i) {
            const double phi = i / 40.0;
            const auto j = env.jet(phi);
            const double r = p.rho(std::asin(phi));
            CHECK(std::abs(j.a1 + r) < 1e-8);
            CHECK(std::abs(j.b1 + r * phi / std::sqrt(1 - phi * phi)) < 1e-8);
        }
    }
}

TEST_CASE("jet derivatives are consistent with finite differences of values") {
    for (auto p : {CurvatureProfile::cosine_odd(1, 0.5), CurvatureProfile::piecewise_quartic(0.5)}) {
        const auto env = Envelope::build(p);
        for (double phi : {0.2, 0.5, 0.75, 0.9}) {
            const double h = 1e-5;
            const auto j = env.jet(phi);
            auto at_of = [&](double x) { return env.jet(x).at; };
            auto b_of = [&](double x) { return env.jet(x).b; };
            CHECK(j.at1 == Catch::Approx(fbtest::fd_derivative(at_of, phi, h)).margin(1e-8));
            CHECK(j.at2 == Catch::Approx(fbtest::fd_second_derivative(at_of, phi, h)).margin(1e-5));
            CHECK(j.b1 == Catch::Approx(fbtest::fd_derivative(b_of, phi, h)).margin(1e-8));
            CHECK(j.b2 == Catch::Approx(fbtest::fd_second_derivative(b_of, phi, h)).margin(1e-5));
            auto at2_of = [&](double x) { return env.jet(x).at2; };
            auto b2_of = [&](double x) { return env.jet(x).b2; };
            CHECK(j.at3 == Catch::Approx(fbtest::fd_derivative(at2_of, phi, h)).margin(1e-4));
            CHECK(j.b3 == Catch::Approx(fbtest::fd_derivative(b2_of, phi, h)).margin(1e-4));
        }
    }
}

TEST_CASE("scaling linearity: lambda rho scales a, b, atilde pointwise") {
    const auto e1 = Envelope::build(CurvatureProfile::piecewise_quartic(0.25));
    const auto e2 = Envelope::build(CurvatureProfile::piecewise_quartic(0.75));
    for (double phi : {0.1, 0.75, 0.9, 0.999}) {
        const auto j1 = e1.jet(phi), j2 = e2.jet(phi);
        CHECK(std::abs(3.0 * j1.a - j2.a) < 1e-12);
        CHECK(std::abs(3.0 * j1.b - j2.b) < 1e-12);
        CHECK(std::abs(3.0 * j1.at - j2.at) < 1e-12);
    }
}

TEST_CASE("delta is monotone non-decreasing in |c| for each family") {
    double prev_q = -1.0, prev_c = -1.0;
    for (double c : {0.1, 0.2, 0.4, 0.8}) {
        const double dq = Envelope::build(CurvatureProfile::piecewise_quartic(c)).delta();
        const double dc = Envelope::build(CurvatureProfile::cosine_odd(1, c)).delta();
        CHECK(dq >= prev_q);
        CHECK(dc >= prev_c);
        prev_q = dq;
        prev_c = dc;
    }
}

TEST_CASE("tabulated build approximates the closed-form envelope") {
    const auto src = CurvatureProfile::cosine_odd(1, 0.5);
    std::vector<double> th, v;
    for (int i = 0; i <= 200; ++i) {
        th.push_back(0.5 * kPi * i / 200.0);
        v.push_back(src.rho(th.back()));
    }
    const auto tab_env = Envelope::build(CurvatureProfile::tabulated(th, v), 1e-4);
    const auto ref_env = Envelope::build(src);
    for (double phi : {0.2, 0.5, 0.8, 0.95}) {
        CHECK(tab_env.jet(phi).a == Catch::Approx(ref_env.jet(phi).a).margin(1e-6));
        CHECK(tab_env.jet(phi).b == Catch::Approx(ref_env.jet(phi).b).margin(1e-6));
        CHECK(tab_env.jet(phi).b2 == Catch::Approx(ref_env.jet(phi).b2).margin(1e-3));
    }
}

TEST_CASE("build rejects constraint-violating profiles") {
    // a lopsided tabulated profile with nonzero constraint-C integral
    std::vector<double> th, v;
    for (int i = 0; i <= 32; ++i) {
        const double t = 0.5 * kPi * i / 32.0;
        th.push_back(t);
        v.push_back(std::sin(t) * std::sin(2 * t));  // rho(pi/2) = 0, but A(0) != 0
    }
    CHECK_THROWS_AS(Envelope::build(CurvatureProfile::tabulated(th, v)), profile_error);
}

TEST_CASE("envelope csv dump is well formed") {
    const auto env = Envelope::build(CurvatureProfile::piecewise_quartic(0.5));
    std::ostringstream os;
    env.dump_csv(os, 17);
    std::istringstream is(os.str());
    std::string line;
    int rows = 0;
    std::getline(is, line);
    CHECK(line == "phi,a,b,atilde,da,db,d2b");
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 17);
}
