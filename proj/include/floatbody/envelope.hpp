// Water envelope a(phi), b(phi), atilde(phi) = a (1-phi^2)^{-1/2} and their
// derivatives to third order, built from a curvature profile.
//
//   a(phi) = int_phi^1 rho(arcsin t) dt
//   b(phi) = -int_0^phi rho(arcsin t) t (1-t^2)^{-1/2} dt
//
// b is normalized so that b(0) = 0 (the free constant c_B of the envelope is
// a vertical translation of the body; this choice makes Y_j(0) = 0 exact and
// keeps every kernel quantity regular at the equator).
//
// Built-in families are evaluated in closed form: for CosineOdd both atilde
// and b are polynomials in phi; for PiecewiseQuartic they are polynomials
// times (1-phi)^{3/2} (1+phi)^{+-1/2}, which stays numerically stable at the
// pole where naive chain-rule forms cancel catastrophically.  Tabulated
// profiles use a dense cached grid plus chain-rule differentiation.
#pragma once

#include <array>
#include <cmath>
#include <ostream>
#include <vector>

#include "floatbody/common.hpp"
#include "floatbody/poly.hpp"
#include "floatbody/profile.hpp"
#include "floatbody/quadrature.hpp"

namespace floatbody {

struct EnvelopeJet {
    double a = 0.0, a1 = 0.0;                          // a and a' = -rho(arcsin phi)
    double at = 0.0, at1 = 0.0, at2 = 0.0, at3 = 0.0;  // atilde jets
    double b = 0.0, b1 = 0.0, b2 = 0.0, b3 = 0.0;      // b jets
};

namespace detail {

using Jet4 = std::array<double, 4>;

inline Jet4 jet_mul(const Jet4& x, const Jet4& y) {
    return {x[0] * y[0],
            x[1] * y[0] + x[0] * y[1],
            x[2] * y[0] + 2.0 * x[1] * y[1] + x[0] * y[2],
            x[3] * y[0] + 3.0 * x[2] * y[1] + 3.0 * x[1] * y[2] + x[0] * y[3]};
}

// Jets of (1 - phi)^e and (1 + phi)^e.
inline Jet4 jet_pow_1m(double phi, double e) {
    const double t = 1.0 - phi;
    const double f = std::pow(t, e);
    return {f, -e * std::pow(t, e - 1.0), e * (e - 1.0) * std::pow(t, e - 2.0),
            -e * (e - 1.0) * (e - 2.0) * std::pow(t, e - 3.0)};
}
inline Jet4 jet_pow_1p(double phi, double e) {
    const double t = 1.0 + phi;
    const double f = std::pow(t, e);
    return {f, e * std::pow(t, e - 1.0), e * (e - 1.0) * std::pow(t, e - 2.0),
            e * (e - 1.0) * (e - 2.0) * std::pow(t, e - 3.0)};
}

}  // namespace detail

class Envelope {
public:
    // [OP] build_envelope.  Rejects profiles violating observations C or E.
    static Envelope build(const CurvatureProfile& profile, double constraint_tol = 1e-8) {
        const ConstraintReport rep = check_constraints(profile);
        const double tol = constraint_tol * std::max(1.0, profile.magnitude());
        if (!rep.passes(tol))
            throw profile_error("profile rejected: constraint residuals " +
                                fmt_g17(rep.residual_c) + " / " + fmt_g17(rep.rho_at_pole) +
                                " exceed tolerance " + fmt_g17(tol));
        Envelope e;
        e.profile_ = profile;
        e.alpha1_ = rep.alpha1;
        e.condition_i_ = rep.alpha1 > 0.0;
        switch (profile.family()) {
            case ProfileFamily::Zero:
                e.kind_ = Kind::Zero;
                break;
            case ProfileFamily::CosineOdd:
                e.kind_ = Kind::CosinePoly;
                e.build_cosine_poly();
                break;
            case ProfileFamily::PiecewiseQuartic:
                e.kind_ = Kind::QuarticArc;
                e.build_quartic_arc();
                break;
            case ProfileFamily::Tabulated:
                e.kind_ = Kind::Generic;
                e.build_generic();
                break;
        }
        e.compute_delta();
        return e;
    }

    // Full third-order jet of a, atilde, b at phi in [0, 1].  For families
    // that are even about Phi = pi/2 the second and higher atilde/b
    // derivatives diverge like (1-phi)^{-1/2} at the pole; values at
    // phi = 1 exactly may therefore be infinite in orders >= 2.
    EnvelopeJet jet(double phi) const {
        switch (kind_) {
            case Kind::Zero:
                return {};
            case Kind::CosinePoly: {
                EnvelopeJet j;
                const auto at = poly_jet3(at_poly_, phi);
                const auto b = poly_jet3(b_poly_, phi);
                j.at = at[0]; j.at1 = at[1]; j.at2 = at[2]; j.at3 = at[3];
                j.b = b[0]; j.b1 = b[1]; j.b2 = b[2]; j.b3 = b[3];
                const double C = std::sqrt(std::max(0.0, 1.0 - phi * phi));
                j.a = C * at[0];
                j.a1 = -C * poly_eval(ru_poly_, phi);
                return j;
            }
            case Kind::QuarticArc: {
                if (phi <= q0_) return {};
                EnvelopeJet j;
                using namespace detail;
                const Jet4 f32 = jet_pow_1m(phi, 1.5);
                const Jet4 atj = jet_mul(jet_mul(f32, jet_pow_1p(phi, -0.5)), poly_jet3(g_poly_, phi));
                const Jet4 bj = jet_mul(jet_mul(f32, jet_pow_1p(phi, 0.5)), poly_jet3(that_poly_, phi));
                j.at = atj[0]; j.at1 = atj[1]; j.at2 = atj[2]; j.at3 = atj[3];
                j.b = bj[0] + b_pole_; j.b1 = bj[1]; j.b2 = bj[2]; j.b3 = bj[3];
                j.a = poly_eval(a_poly_, phi);
                j.a1 = -poly_eval(r_poly_, phi);
                return j;
            }
            case Kind::Generic:
                return generic_jet(phi);
        }
        return {};
    }

    // Theta-space envelope point (A(Phi), B(Phi)) = (a(sin Phi), b(sin Phi)).
    std::array<double, 2> point(double Phi) const {
        const EnvelopeJet j = jet(std::sin(Phi));
        return {j.a, j.b};
    }

    const CurvatureProfile& profile() const { return profile_; }
    bool condition_i_satisfied() const { return condition_i_; }
    double alpha1() const { return alpha1_; }
    // delta of Lemma 3: max over phi of max(|a|, |b|).
    double delta() const { return delta_; }

    // Envelope dump: phi, a, b, atilde, a', b', b''.
    void dump_csv(std::ostream& os, int rows = 513) const {
        os << "phi,a,b,atilde,da,db,d2b\n";
        for (int i = 0; i < rows; ++i) {
            const double phi = double(i) / (rows - 1);
            const EnvelopeJet j = jet(phi);
            os << fmt_g17(phi) << ',' << fmt_g17(j.a) << ',' << fmt_g17(j.b) << ','
               << fmt_g17(j.at) << ',' << fmt_g17(j.a1) << ',' << fmt_g17(j.b1) << ','
               << fmt_g17(j.b2) << '\n';
        }
    }

private:
    enum class Kind { Zero, CosinePoly, QuarticArc, Generic };

    Envelope() : profile_(CurvatureProfile::zero()) {}

    void build_cosine_poly() {
        const int n = profile_.n();
        const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
        ru_poly_ = poly_scale(chebyshev_u(2 * n), profile_.c() * sgn);  // r = C * ru
        // b' = -phi * ru  ->  b polynomial with b(0) = 0.
        b_poly_ = poly_scale(poly_antiderivative(poly_mul({0.0, 1.0}, ru_poly_)), -1.0);
        // atilde solves d/dphi[C * atilde] = -C * ru with atilde = a / C polynomial.
        Poly rhs = poly_scale(poly_mul({1.0, 0.0, -1.0}, ru_poly_), -1.0);
        at_poly_ = poly_sqrt_weight_antiderivative(rhs);
        if (std::abs(at_poly_[0]) > 1e-10 * std::max(1.0, std::abs(profile_.c())))
            throw profile_error("cosine envelope: a(0) != 0");
        at_poly_[0] = 0.0;  // exact observation-C anchoring
    }

    void build_quartic_arc() {
        q0_ = std::sin(0.25 * kPi);
        const double c = profile_.c(), k = kQuarticConstant;
        const Poly one_m2p2 = {1.0, 0.0, -2.0};
        Poly sigma = poly_mul(poly_mul({0.0, 0.0, 16.0}, {1.0, 0.0, -1.0}),
                              poly_mul(one_m2p2, one_m2p2));
        r_poly_ = poly_scale(poly_add(sigma, poly_scale(poly_mul(sigma, sigma), -k)), c);
        // a(phi) = int_phi^1 r
        Poly Ra = poly_antiderivative(r_poly_);
        a_poly_ = poly_scale(Ra, -1.0);
        a_poly_[0] += poly_eval(Ra, 1.0);
        const double scale = std::max(1.0, std::abs(c));
        if (std::abs(poly_eval(a_poly_, q0_)) > 1e-10 * scale)
            throw profile_error("quartic envelope: a(alpha1) != 0 (constraint C broken)");
        double rem1 = 0.0, rem2 = 0.0;
        Poly g1 = poly_divide_1mx(a_poly_, &rem1);
        g_poly_ = poly_divide_1mx(g1, &rem2);
        if (std::abs(rem1) > 1e-10 * scale || std::abs(rem2) > 1e-10 * scale)
            throw profile_error("quartic envelope: a lacks the (1-phi)^2 factor");
        // b' = C * W on the arc, b(q0) = 0.
        Poly W = poly_scale(poly_mul(poly_mul({0.0, 0.0, 0.0, 1.0}, poly_mul(one_m2p2, one_m2p2)),
                                     poly_add({1.0}, poly_scale(sigma, -k))),
                            -16.0 * c);
        Poly T = poly_sqrt_weight_antiderivative(poly_mul({1.0, 0.0, -1.0}, W));
        const double Cq0 = std::sqrt(1.0 - q0_ * q0_);
        b_pole_ = -Cq0 * poly_eval(T, q0_);
        double remT = 0.0;
        that_poly_ = poly_divide_1mx(T, &remT);
        if (std::abs(remT) > 1e-10 * scale)
            throw profile_error("quartic envelope: T(1) != 0");
        // absorb the (1+phi)^{1/2} split: b - b_pole = (1-phi)^{3/2}(1+phi)^{1/2} That
        // with That = T / (1-phi); the pole offset is constant on the arc.
        // Below q0 the envelope vanishes identically (condition (i)).
    }

    void build_generic() {
        const int M = 4096;
        grid_A_.assign(M + 1, 0.0);
        grid_B_.assign(M + 1, 0.0);
        const GaussLegendre& gl = gauss_rule(16);
        // prefix integrals of rho cos and rho sin on the uniform Phi grid
        std::vector<double> pc(M + 1, 0.0), ps(M + 1, 0.0);
        for (int i = 0; i < M; ++i) {
            const double lo = 0.5 * kPi * i / M, hi = 0.5 * kPi * (i + 1) / M;
            pc[i + 1] = pc[i] + gl.integrate([&](double t) { return profile_.rho(t) * std::cos(t); }, lo, hi);
            ps[i + 1] = ps[i] + gl.integrate([&](double t) { return profile_.rho(t) * std::sin(t); }, lo, hi);
        }
        for (int i = 0; i <= M; ++i) {
            grid_A_[i] = pc[M] - pc[i];  // A(Phi) = int_Phi^{pi/2} rho cos
            grid_B_[i] = -ps[i];         // B(Phi) = -int_0^Phi rho sin  (b(0)=0)
        }
    }

    EnvelopeJet generic_jet(double phi) const {
        phi = std::min(phi, 1.0 - 1e-12);  // pole clamp, documented accuracy limit
        const double Phi = std::asin(phi);
        const double C = std::sqrt(1.0 - phi * phi);
        const int M = int(grid_A_.size()) - 1;
        const double t = Phi / (0.5 * kPi) * M;
        const int i = std::min(int(t), M - 1);
        const double h = 0.5 * kPi / M, u = t - i;
        auto hermite = [&](const std::vector<double>& v, double d0, double d1) {
            const double h00 = (1.0 + 2.0 * u) * sq(1.0 - u), h10 = u * sq(1.0 - u);
            const double h01 = u * u * (3.0 - 2.0 * u), h11 = u * u * (u - 1.0);
            return h00 * v[i] + h10 * h * d0 + h01 * v[i + 1] + h11 * h * d1;
        };
        auto dA = [&](int kk) {
            const double th = 0.5 * kPi * kk / M;
            return -profile_.rho(th) * std::cos(th);
        };
        auto dB = [&](int kk) {
            const double th = 0.5 * kPi * kk / M;
            return -profile_.rho(th) * std::sin(th);
        };
        EnvelopeJet j;
        j.a = hermite(grid_A_, dA(i), dA(i + 1));
        j.b = hermite(grid_B_, dB(i), dB(i + 1));
        const auto rj = profile_.jet(Phi);  // rho and Phi-derivatives
        const double r = rj[0];
        const double r1 = rj[1] / C;
        const double r2 = rj[2] / (C * C) + rj[1] * phi / cube(C);
        const double C3 = cube(C), C5 = C3 * C * C, C7 = C5 * C * C;
        j.a1 = -r;
        const double a2 = -r1, a3 = -r2;
        j.at = j.a / C;
        j.at1 = j.a1 / C + j.a * phi / C3;
        j.at2 = a2 / C + 2.0 * phi * j.a1 / C3 + j.a / C3 + 3.0 * phi * phi * j.a / C5;
        j.at3 = a3 / C + 3.0 * phi * a2 / C3 + 3.0 * j.a1 / C3 + 9.0 * phi * phi * j.a1 / C5 +
                9.0 * phi * j.a / C5 + 15.0 * cube(phi) * j.a / C7;
        j.b1 = -r * phi / C;
        j.b2 = -(phi * r1 / C + r / C + r * phi * phi / C3);
        j.b3 = -(2.0 * r1 / C + phi * r2 / C + 2.0 * phi * phi * r1 / C3 + 3.0 * r * phi / C3 +
                 3.0 * r * cube(phi) / C5);
        return j;
    }

    void compute_delta() {
        delta_ = 0.0;
        for (int i = 0; i <= 4096; ++i) {
            const EnvelopeJet j = jet(double(i) / 4096.0);
            delta_ = std::max({delta_, std::abs(j.a), std::abs(j.b)});
        }
    }

    CurvatureProfile profile_;
    Kind kind_ = Kind::Zero;
    bool condition_i_ = true;
    double alpha1_ = 1.0;
    double delta_ = 0.0;
    // CosinePoly
    Poly ru_poly_, at_poly_, b_poly_;
    // QuarticArc
    double q0_ = 0.0, b_pole_ = 0.0;
    Poly r_poly_, a_poly_, g_poly_, that_poly_;
    // Generic
    std::vector<double> grid_A_, grid_B_;
};

}  // namespace floatbody
