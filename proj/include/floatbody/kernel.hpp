// Geometric kernel of the floating-body equations: the chord functions
// X, Z, the desingularized squared half-chord Q with its phi-derivatives,
// the transformed kernel G(i,j,alpha,chi,y) with first/second chi
// derivatives (boundary matrix A and history kernel C), and the
// fractionally integrated right-hand side F''.
//
// All operations are pure functions of their arguments plus the immutable
// context; they are safe to call concurrently.
#pragma once

#include <array>
#include <cmath>
#include <ostream>
#include <vector>

#include "floatbody/common.hpp"
#include "floatbody/envelope.hpp"
#include "floatbody/quadrature.hpp"

namespace floatbody {

using Mat2 = std::array<std::array<double, 2>, 2>;  // [i][j], i,j = 0,1
using Vec2 = std::array<double, 2>;

inline double det2(const Mat2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

// [TYPE] KernelContext.  I is not a free input: every water section on the
// trivial initial segment is a great disk of the R-sphere, which forces the
// Eq-(7) constant I = pi R^4 / 8 (the physical diametral second moment of
// that disk is 2I = pi R^4 / 4, used by the hydrostatic oracle).
struct KernelContext {
    const Envelope* env = nullptr;
    double R = 1.0;
    double I = 0.0;
    int gl_order = 64;
    double h_sw_rel = 1e-4;  // switchover quotient -> series for Q near alpha=phi
    double h_fd = 1e-5;      // finite-difference step, cross-validation only

    // Gauss-Legendre rule on psi in [0, pi/2] after Gamma = sin(psi);
    // the substituted integrand is analytic, so fixed order converges fast.
    std::vector<double> qw, qs2, qc2, qc4, qc6;

    KernelContext(const Envelope& e, double R_ = 1.0, int order = 64)
        : env(&e), R(R_), I(kPi * R_ * R_ * R_ * R_ / 8.0), gl_order(order) {
        if (!(R_ > 0.0)) throw config_error("KernelContext: R must be positive");
        const GaussLegendre& gl = gauss_rule(order);
        const std::size_t n = gl.x.size();
        qw.resize(n); qs2.resize(n); qc2.resize(n); qc4.resize(n); qc6.resize(n);
        for (std::size_t q = 0; q < n; ++q) {
            const double psi = 0.25 * kPi * (gl.x[q] + 1.0);
            const double s = std::sin(psi), c = std::cos(psi);
            qw[q] = gl.w[q] * 0.25 * kPi;
            qs2[q] = s * s;
            qc2[q] = c * c;
            qc4[q] = qc2[q] * qc2[q];
            qc6[q] = qc4[q] * qc2[q];
        }
    }

    double section_moment_ref() const { return 2.0 * I; }
};

namespace kernel_detail {

// X^2(alpha, phi, y) as a function of phi (alpha enters only through y),
// with derivatives: X = (atilde + (y - b)/phi) sqrt(1 - phi^2).
struct XsqJet {
    double x2 = 0.0, x2p = 0.0, x2pp = 0.0, x2ppp = 0.0;
};

inline XsqJet xsq_jet(const EnvelopeJet& e, double phi, double y, int order) {
    const double ymb = y - e.b;
    const double inv = 1.0 / phi, inv2 = inv * inv, inv3 = inv2 * inv;
    const double u = e.at + ymb * inv;
    const double s = 1.0 - phi * phi, sp = -2.0 * phi;
    XsqJet r;
    r.x2 = u * u * s;
    const double up = e.at1 - e.b1 * inv - ymb * inv2;
    r.x2p = 2.0 * u * up * s + u * u * sp;
    if (order < 2) return r;
    const double upp = e.at2 - e.b2 * inv + 2.0 * e.b1 * inv2 + 2.0 * ymb * inv3;
    r.x2pp = 2.0 * up * up * s + 2.0 * u * upp * s + 4.0 * u * up * sp - 2.0 * u * u;
    if (order < 3) return r;
    const double uppp = e.at3 - e.b3 * inv + 3.0 * e.b2 * inv2 - 6.0 * e.b1 * inv3 -
                        6.0 * ymb * inv3 * inv;
    r.x2ppp = s * (6.0 * up * upp + 2.0 * u * uppp) - 6.0 * phi * (up * up + u * upp) * 2.0 -
              12.0 * u * up;
    return r;
}

// Q, dQ/dphi, d2Q/dphi2 from the difference quotient of D(phi) =
// X^2(alpha,alpha,y) - X^2(alpha,phi,y), or from the Taylor series of D
// about phi = alpha when phi - alpha < h_sw (cancellation region).
struct QJet {
    double Q = 0.0, Qp = 0.0, Qpp = 0.0;
};

inline QJet q_from_quotient(double e0, double phi, double h, const XsqJet& xj) {
    const double D = e0 - xj.x2;
    const double Doh = D / h;
    const double Doh1 = (-xj.x2p - Doh) / h;
    const double Doh2 = (-xj.x2pp - 2.0 * Doh1) / h;
    return {phi * Doh, Doh + phi * Doh1, 2.0 * Doh1 + phi * Doh2};
}

inline QJet q_from_series(double phi, double h, const XsqJet& diag) {
    const double Doh = -diag.x2p - 0.5 * diag.x2pp * h - diag.x2ppp * h * h / 6.0;
    const double Doh1 = -0.5 * diag.x2pp - diag.x2ppp * h / 3.0;
    const double Doh2 = -diag.x2ppp / 3.0;
    return {phi * Doh, Doh + phi * Doh1, 2.0 * Doh1 + phi * Doh2};
}

}  // namespace kernel_detail

// [OP] X: chord x-coordinate at height y of the water section at phi.
inline double X(const KernelContext& ctx, double alpha, double phi, double y) {
    (void)alpha;  // alpha enters only through y = Y_j(alpha)
    if (!(phi > 0.0))
        throw std::domain_error("X: phi must be positive (use the analytic phi->0 limit)");
    const EnvelopeJet e = ctx.env->jet(phi);
    return (e.at + (y - e.b) / phi) * std::sqrt(std::max(0.0, 1.0 - phi * phi));
}

// X^2(alpha, alpha, y): squared contour abscissa at parameter alpha.
// At alpha = 0 the formula is 0/0 along the trajectory (y = Y_j(0) = 0);
// the limit is R^2 for both branches.
inline double outline_xsq(const KernelContext& ctx, double alpha, double y) {
    if (alpha == 0.0) return ctx.R * ctx.R;
    const EnvelopeJet e = ctx.env->jet(alpha);
    const double u = e.at + (y - e.b) / alpha;
    return u * u * (1.0 - alpha * alpha);
}

// [OP] Q: Z^2 / (1 - alpha/phi), bounded and strictly positive on the
// admissible tube; continuous at alpha = phi (boundary-limit value).
inline double Q(const KernelContext& ctx, double alpha, double phi, double y) {
    if (!(alpha >= 0.0 && alpha <= phi && phi <= 1.0 && phi > 0.0))
        throw std::domain_error("Q: need 0 <= alpha <= phi <= 1, phi > 0");
    const double e0 = outline_xsq(ctx, alpha, y);
    const EnvelopeJet e = ctx.env->jet(phi);
    const double h = phi - alpha;
    double q;
    if (h > ctx.h_sw_rel * phi) {
        q = phi * (e0 - kernel_detail::xsq_jet(e, phi, y, 1).x2) / h;
    } else {
        const EnvelopeJet ea = ctx.env->jet(alpha);
        q = kernel_detail::q_from_series(phi, h, kernel_detail::xsq_jet(ea, alpha, y, 3)).Q;
    }
    if (!(q > 0.0))
        throw geometry_error("Q <= 0 at alpha=" + fmt_g17(alpha) + " phi=" + fmt_g17(phi) +
                             " y=" + fmt_g17(y) + " (degenerate water-section chord)");
    return q;
}

// [OP] Z: half-chord length, sqrt(Q (1 - alpha/phi)); Z(phi,phi,.) = 0.
inline double Z(const KernelContext& ctx, double alpha, double phi, double y) {
    const double q = Q(ctx, alpha, phi, y);
    return std::sqrt(q * (1.0 - alpha / phi));
}

namespace kernel_detail {

// Per-(alpha, y) cached quantities for the Gamma-integrals.
struct AlphaState {
    double e0 = 0.0;       // X^2(alpha, alpha, y)
    XsqJet diag;           // phi-derivatives of X^2 at phi = alpha (series branch)
    bool diag_ready = false;
};

inline AlphaState make_alpha_state(const KernelContext& ctx, double alpha, double y,
                                   bool with_diag) {
    AlphaState st;
    st.e0 = outline_xsq(ctx, alpha, y);
    if (with_diag && alpha > 0.0) {
        const EnvelopeJet ea = ctx.env->jet(alpha);
        st.diag = xsq_jet(ea, alpha, y, 3);
        st.diag_ready = true;
    }
    return st;
}

// Branch selection for the Q jet: difference quotient away from the
// diagonal, Taylor series (about phi = alpha) inside the cancellation zone.
inline QJet q_jet(const KernelContext& ctx, double alpha, double y, double phi,
                  const EnvelopeJet& e, const AlphaState& st, int order) {
    const double h = phi - alpha;
    if (h > ctx.h_sw_rel * phi || !st.diag_ready)
        return q_from_quotient(st.e0, phi, h, xsq_jet(e, phi, y, order));
    return q_from_series(phi, h, st.diag);
}

// V(phi) = phi^{-1/2} sqrt(Q) (y - b)^i and first/second phi-derivatives,
// for i = 1, 2 simultaneously.
struct VPair {
    double v[2] = {0, 0}, vp[2] = {0, 0}, vpp[2] = {0, 0};
};

inline VPair v_pair(const KernelContext& ctx, double alpha, double y, double phi,
                    const EnvelopeJet& e, const AlphaState& st, int order) {
    const QJet qj = q_jet(ctx, alpha, y, phi, e, st, order);
    if (!(qj.Q > 0.0))
        throw geometry_error("Q <= 0 inside Gamma integral at alpha=" + fmt_g17(alpha) +
                             " phi=" + fmt_g17(phi) + " y=" + fmt_g17(y));
    const double S = std::sqrt(qj.Q);
    const double Sp = qj.Qp / (2.0 * S);
    const double Spp = qj.Qpp / (2.0 * S) - qj.Qp * qj.Qp / (4.0 * S * qj.Q);
    const double P = 1.0 / std::sqrt(phi);
    const double Pp = -0.5 * P / phi;
    const double Ppp = 0.75 * P / (phi * phi);
    const double ymb = y - e.b;
    VPair out;
    for (int i = 1; i <= 2; ++i) {
        const double T = (i == 1) ? ymb : ymb * ymb;
        const double T1 = (i == 1) ? -e.b1 : -2.0 * e.b1 * ymb;
        const double T2 = (i == 1) ? -e.b2 : 2.0 * e.b1 * e.b1 - 2.0 * e.b2 * ymb;
        out.v[i - 1] = P * S * T;
        out.vp[i - 1] = Pp * S * T + P * Sp * T + P * S * T1;
        if (order >= 2)
            out.vpp[i - 1] = Ppp * S * T + P * Spp * T + P * S * T2 + 2.0 * Pp * Sp * T +
                             2.0 * Pp * S * T1 + 2.0 * P * Sp * T1;
    }
    return out;
}

}  // namespace kernel_detail

// [OP] G: the Gamma-substituted proper integral, Eq-(43) form.
// G(i, j, chi, chi, y) = 0 exactly (the 2(chi - alpha) prefactor).
// j is part of the contract but enters only through y = Y_j(alpha).
inline double G(const KernelContext& ctx, int i, int j, double alpha, double chi, double y) {
    if (i < 1 || i > 2 || j < 1 || j > 2) throw std::domain_error("G: i, j must be 1 or 2");
    if (!(alpha >= 0.0 && alpha <= chi && chi <= 1.0))
        throw std::domain_error("G: need 0 <= alpha <= chi <= 1");
    if (alpha == chi) return 0.0;
    const double d = chi - alpha;
    const auto st = kernel_detail::make_alpha_state(ctx, alpha, y, true);
    double acc = 0.0;
    for (std::size_t q = 0; q < ctx.qw.size(); ++q) {
        const double phi = chi - ctx.qs2[q] * d;
        const EnvelopeJet e = ctx.env->jet(phi);
        const auto v = kernel_detail::v_pair(ctx, alpha, y, phi, e, st, 1);
        acc += ctx.qw[q] * ctx.qc2[q] * v.v[i - 1];
    }
    return 2.0 * d * acc;
}

// d2G/dchi2 for i = 1,2 at one (alpha, y); the workhorse of the history
// kernel.  Undefined at alpha = chi (callers integrate over alpha < chi).
inline Vec2 ddG_pair(const KernelContext& ctx, double alpha, double chi, double y) {
    if (!(alpha >= 0.0 && alpha < chi && chi <= 1.0))
        throw std::domain_error("ddG: need 0 <= alpha < chi <= 1");
    const double d = chi - alpha;
    const auto st = kernel_detail::make_alpha_state(ctx, alpha, y, true);
    Vec2 acc = {0.0, 0.0};
    for (std::size_t q = 0; q < ctx.qw.size(); ++q) {
        const double phi = chi - ctx.qs2[q] * d;
        const EnvelopeJet e = ctx.env->jet(phi);
        const auto v = kernel_detail::v_pair(ctx, alpha, y, phi, e, st, 2);
        for (int i = 0; i < 2; ++i)
            acc[i] += ctx.qw[q] * (4.0 * ctx.qc4[q] * v.vp[i] + 2.0 * d * ctx.qc6[q] * v.vpp[i]);
    }
    return acc;
}

// [OP] a_matrix: boundary matrix, Eq (44) with the Eq-(45) boundary limit
//   a_ij = (pi/2) chi^{-1/2} sqrt(Q(chi,chi,Y_j)) (Y_j - b(chi))^i.
inline Mat2 a_matrix(const KernelContext& ctx, double chi, const Vec2& Y) {
    if (!(chi > 0.0)) throw std::domain_error("a_matrix: chi must be positive");
    const EnvelopeJet e = ctx.env->jet(chi);
    Mat2 A{};
    for (int j = 0; j < 2; ++j) {
        const auto xj = kernel_detail::xsq_jet(e, chi, Y[j], 1);
        const double qd = -chi * xj.x2p;  // Q(chi, chi, Y_j)
        if (!(qd > 0.0))
            throw geometry_error("a_matrix: boundary Q <= 0 at chi=" + fmt_g17(chi) +
                                 " y=" + fmt_g17(Y[j]));
        const double ymb = Y[j] - e.b;
        const double base = 0.5 * kPi / std::sqrt(chi) * std::sqrt(qd);
        A[0][j] = base * ymb;
        A[1][j] = base * ymb * ymb;
    }
    return A;
}

// [OP] c_kernel: c_ij = Y'_j(alpha) * d2G_ij/dchi2.
inline Mat2 c_kernel(const KernelContext& ctx, double alpha, double chi, const Vec2& Y,
                     const Vec2& Yp) {
    if (!(alpha < chi))
        throw std::domain_error("c_kernel: alpha must be strictly below chi");
    Mat2 C{};
    for (int j = 0; j < 2; ++j) {
        const Vec2 dd = ddG_pair(ctx, alpha, chi, Y[j]);
        C[0][j] = Yp[j] * dd[0];
        C[1][j] = Yp[j] * dd[1];
    }
    return C;
}

// [OP] f_rhs: F''(chi) = (0, 8 I chi^{3/2}); F_2 itself is (32/35) I chi^{7/2}.
inline Vec2 f_rhs(const KernelContext& ctx, double chi) {
    if (!(chi >= 0.0)) throw std::domain_error("f_rhs: chi must be nonnegative");
    return {0.0, 8.0 * ctx.I * chi * std::sqrt(chi)};
}

}  // namespace floatbody
