// Volterra-type initial value problem integrator: marches
//   M(chi, Y) Y'(chi) = F''(chi) - int_0^chi chat(alpha) dalpha
// with M the boundary matrix with column signs (-1)^{j+1} folded in and
// chat_i(alpha) = sum_j (-1)^{j+1} Y'_j(alpha) d2G_ij/dchi2.
//
// The trivial segment Y_j = (-1)^{j+1} R chi is emplaced analytically on
// [0, chi_start]; beyond it an explicit-Euler predictor plus one
// trapezoidal corrector pass (PECE) marches to chi = 1.  The history
// integral is a composite trapezoid over stored nodes with both singular
// endpoints (alpha = 0 limit handled analytically, alpha = chi value
// linearly extrapolated from the two previous nodes).
#pragma once

#include <array>
#include <cmath>
#include <ostream>
#include <vector>

#include "floatbody/common.hpp"
#include "floatbody/kernel.hpp"

namespace floatbody {

struct SolveConfig {
    int n_grid = 1024;        // uniform intervals on [0, 1]
    double chi_start = 1e-3;  // regularized start when condition (i) fails
    int tail_refine = 5;      // extra geometric substeps (2^L) in the last interval
    double stall_rel = 1e-6;  // stall when |det| < stall_rel * pi^2 chi^2 R^5
    bool force_march = false; // march from chi_start even when condition (i) holds
                              // (convergence studies on the trivial solution)
};

// [TYPE] Solution
struct Solution {
    std::vector<double> chi;
    std::vector<Vec2> Y, Yp;
    std::vector<double> detA;       // paper-form det of the boundary matrix
    std::size_t start_index = 0;    // first marched node
    bool condition_i = false;
    bool endpoint_flagged = false;  // chi = 1 node marched through the pole
    double R = 1.0;

    std::size_t size() const { return chi.size(); }

    // Piecewise cubic Hermite interpolation of Y_j and Y'_j.
    std::size_t locate(double a) const {
        std::size_t lo = 0, hi = chi.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (chi[mid] <= a ? lo : hi) = mid;
        }
        return lo;
    }
    double y(int j, double a) const {
        const std::size_t k = locate(a);
        const double h = chi[k + 1] - chi[k], t = (a - chi[k]) / h;
        const double y0 = Y[k][j], y1 = Y[k + 1][j];
        const double d0 = Yp[k][j] * h, d1 = Yp[k + 1][j] * h;
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * d0 +
               (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * d1;
    }
    double yp(int j, double a) const {
        const std::size_t k = locate(a);
        const double h = chi[k + 1] - chi[k], t = (a - chi[k]) / h;
        const double y0 = Y[k][j], y1 = Y[k + 1][j];
        const double d0 = Yp[k][j], d1 = Yp[k + 1][j];
        const double t2 = t * t;
        return (6 * t2 - 6 * t) / h * y0 + (3 * t2 - 4 * t + 1) * d0 +
               (-6 * t2 + 6 * t) / h * y1 + (3 * t2 - 2 * t) * d1;
    }

    // Solution dump: chi, Y1, Y2, Y1', Y2', detA, r1, r2 (residual columns
    // filled by the pipeline).
    void dump_csv(std::ostream& os, const std::vector<Vec2>& residuals) const {
        os << "chi,Y1,Y2,dY1,dY2,detA,r1,r2\n";
        for (std::size_t k = 0; k < size(); ++k) {
            os << fmt_g17(chi[k]) << ',' << fmt_g17(Y[k][0]) << ',' << fmt_g17(Y[k][1]) << ','
               << fmt_g17(Yp[k][0]) << ',' << fmt_g17(Yp[k][1]) << ',' << fmt_g17(detA[k]) << ','
               << fmt_g17(residuals[k][0]) << ',' << fmt_g17(residuals[k][1]) << '\n';
        }
    }
};

namespace solver_detail {

inline Vec2 solve2(const Mat2& m, const Vec2& r) {
    const double det = det2(m);
    return {(r[0] * m[1][1] - r[1] * m[0][1]) / det,
            (m[0][0] * r[1] - m[1][0] * r[0]) / det};
}

// chat_i(alpha) = sum_j (-1)^{j+1} Y'_j(alpha) ddG_i(alpha, chi, Y_j(alpha)).
inline Vec2 chat(const KernelContext& ctx, double alpha, double chi, const Vec2& Yv,
                 const Vec2& Ypv) {
    Vec2 out = {0.0, 0.0};
    for (int j = 0; j < 2; ++j) {
        const double sgn = (j == 0) ? 1.0 : -1.0;
        const Vec2 dd = ddG_pair(ctx, alpha, chi, Yv[j]);
        out[0] += sgn * Ypv[j] * dd[0];
        out[1] += sgn * Ypv[j] * dd[1];
    }
    return out;
}

// History integral over the stored prefix [0, chi_m] where chi_m = sol.chi[m]
// is the node being evaluated; trapezoid with extrapolated right endpoint.
inline Vec2 history_integral(const KernelContext& ctx, const Solution& sol, std::size_t m) {
    const double chi = sol.chi[m];
    std::vector<Vec2> c(m + 1);
    for (std::size_t k = 0; k < m; ++k) c[k] = chat(ctx, sol.chi[k], chi, sol.Y[k], sol.Yp[k]);
    // alpha = chi endpoint: quadratic Lagrange extrapolation from the last
    // three values (the kernel is undefined exactly at alpha = chi)
    if (m >= 3) {
        const double x0 = sol.chi[m - 3], x1 = sol.chi[m - 2], x2 = sol.chi[m - 1];
        const double l0 = (chi - x1) * (chi - x2) / ((x0 - x1) * (x0 - x2));
        const double l1 = (chi - x0) * (chi - x2) / ((x1 - x0) * (x1 - x2));
        const double l2 = (chi - x0) * (chi - x1) / ((x2 - x0) * (x2 - x1));
        for (int i = 0; i < 2; ++i)
            c[m][i] = l0 * c[m - 3][i] + l1 * c[m - 2][i] + l2 * c[m - 1][i];
    } else {
        const double hl = sol.chi[m] - sol.chi[m - 1], hp = sol.chi[m - 1] - sol.chi[m - 2];
        for (int i = 0; i < 2; ++i)
            c[m][i] = c[m - 1][i] + (c[m - 1][i] - c[m - 2][i]) * hl / hp;
    }
    Vec2 acc = {0.0, 0.0};
    for (std::size_t k = 0; k + 1 <= m; ++k) {
        const double w = 0.5 * (sol.chi[k + 1] - sol.chi[k]);
        acc[0] += w * (c[k][0] + c[k + 1][0]);
        acc[1] += w * (c[k][1] + c[k + 1][1]);
    }
    return acc;
}

// Signed solver matrix: columns of the paper-form boundary matrix times
// (-1)^{j+1}; returns the paper-form determinant through *det_paper.
inline Mat2 signed_matrix(const KernelContext& ctx, double chi, const Vec2& Y,
                          double* det_paper) {
    Mat2 A = a_matrix(ctx, chi, Y);
    if (det_paper) *det_paper = det2(A);
    for (int i = 0; i < 2; ++i) A[i][1] = -A[i][1];
    return A;
}

}  // namespace solver_detail

// [OP] rhs: Y'(chi) solving the 2x2 system of Eq (17) against the stored
// history prefix.  `m` indexes the node of sol at which chi sits; the
// history must cover [0, chi) densely.  Stall and geometry errors carry
// diagnostics.
inline Vec2 rhs(const KernelContext& ctx, double chi, const Vec2& Ycur, const Solution& sol,
                std::size_t m, double stall_rel = 1e-6, double* det_out = nullptr) {
    double det_paper = 0.0;
    const Mat2 M = solver_detail::signed_matrix(ctx, chi, Ycur, &det_paper);
    if (det_out) *det_out = det_paper;
    const double scale = kPi * kPi * chi * chi * std::pow(ctx.R, 5);
    if (std::abs(det2(M)) < stall_rel * scale)
        throw stall_error("solver stall: |det A| below threshold at chi=" + fmt_g17(chi), chi,
                          det_paper);
    const Vec2 hist = solver_detail::history_integral(ctx, sol, m);
    const Vec2 f = f_rhs(ctx, chi);
    return solver_detail::solve2(M, {f[0] - hist[0], f[1] - hist[1]});
}

// [OP] solve: trivial segment emplaced analytically on [0, chi_start],
// PECE march to chi = 1.
inline Solution solve(const KernelContext& ctx, const SolveConfig& cfg = {}) {
    if (cfg.n_grid < 16) throw config_error("solve: n_grid too small");
    const int N = cfg.n_grid;
    const double h = 1.0 / N;
    const double a1 = cfg.force_march ? 0.0 : ctx.env->alpha1();
    const bool cond_i = !cfg.force_march && ctx.env->condition_i_satisfied();

    // grid: uniform nodes, plus geometric refinement inside the last interval
    std::vector<double> nodes(N + 1);
    for (int k = 0; k <= N; ++k) nodes[k] = double(k) / N;
    if (cfg.tail_refine > 0 && a1 < 1.0) {
        std::vector<double> tail;
        double step = h;
        for (int l = 0; l < cfg.tail_refine; ++l) {
            step *= 0.5;
            tail.push_back(1.0 - step);
        }
        nodes.pop_back();
        for (double t : tail) nodes.push_back(t);
        nodes.push_back(1.0);
    }

    // starting node: last node not beyond alpha1 (condition (i)) or the
    // regularized start
    double chi_s = cond_i ? std::min(a1, 1.0) : cfg.chi_start;
    std::size_t k_start = 0;
    while (k_start + 1 < nodes.size() && nodes[k_start + 1] <= chi_s + 1e-14) ++k_start;
    // history extrapolation needs two prior nodes
    if (k_start < 2 && k_start + 1 < nodes.size()) k_start = 2;

    Solution sol;
    sol.chi = nodes;
    sol.R = ctx.R;
    sol.condition_i = cond_i;
    sol.start_index = k_start;
    sol.Y.assign(nodes.size(), {0.0, 0.0});
    sol.Yp.assign(nodes.size(), {0.0, 0.0});
    sol.detA.assign(nodes.size(), 0.0);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        if (k <= k_start) {
            sol.Y[k] = {ctx.R * nodes[k], -ctx.R * nodes[k]};
            sol.Yp[k] = {ctx.R, -ctx.R};
            sol.detA[k] = nodes[k] > 0.0 ? det2(a_matrix(ctx, nodes[k], sol.Y[k])) : 0.0;
        }
    }

    for (std::size_t k = k_start; k + 1 < nodes.size(); ++k) {
        const double hk = nodes[k + 1] - nodes[k];
        const double chi1 = nodes[k + 1];
        // predict
        Vec2 Ystar = {sol.Y[k][0] + hk * sol.Yp[k][0], sol.Y[k][1] + hk * sol.Yp[k][1]};
        // one shared history integral per step (it depends only on stored nodes)
        const Vec2 hist = solver_detail::history_integral(ctx, sol, k + 1);
        const Vec2 f = f_rhs(ctx, chi1);
        const double scale = kPi * kPi * chi1 * chi1 * std::pow(ctx.R, 5);
        auto eval = [&](const Vec2& Yv, double* det_keep) {
            double det_paper = 0.0;
            const Mat2 M = solver_detail::signed_matrix(ctx, chi1, Yv, &det_paper);
            if (std::abs(det2(M)) < cfg.stall_rel * scale)
                throw stall_error("solver stall at chi=" + fmt_g17(chi1), chi1, det_paper);
            if (det_keep) *det_keep = det_paper;
            return solver_detail::solve2(M, {f[0] - hist[0], f[1] - hist[1]});
        };
        const Vec2 yp_pred = eval(Ystar, nullptr);
        // correct (one trapezoidal pass), then evaluate at the corrected point
        sol.Y[k + 1] = {sol.Y[k][0] + 0.5 * hk * (sol.Yp[k][0] + yp_pred[0]),
                        sol.Y[k][1] + 0.5 * hk * (sol.Yp[k][1] + yp_pred[1])};
        double det_keep = 0.0;
        sol.Yp[k + 1] = eval(sol.Y[k + 1], &det_keep);
        sol.detA[k + 1] = det_keep;
    }
    sol.endpoint_flagged = (a1 < 1.0);
    return sol;
}

// [OP] residual: direct evaluation of the original integral equations,
//   r1 = sum_j (-1)^j   int_0^phi Z_j (Y_j - b(phi))   Y'_j dalpha
//   r2 = sum_j (-1)^{j+1} int_0^phi Z_j (Y_j - b(phi))^2 Y'_j dalpha - I phi^3,
// the false-solution detector.  The sqrt endpoint singularity is removed by
// alpha = phi (1 - tau^2); the solution history enters through its Hermite
// interpolant only.
inline Vec2 residual(const KernelContext& ctx, const Solution& sol, double phi) {
    if (!(phi > 0.0 && phi <= 1.0)) throw std::domain_error("residual: phi in (0, 1]");
    const EnvelopeJet e = ctx.env->jet(phi);
    const GaussLegendre& gl = gauss_rule(64);
    // composite panels in tau: the tau ~ 0 end maps to alpha ~ phi where the
    // integrand is roughest (pole region when phi = 1)
    static constexpr double cuts[] = {0.0, 0.125, 0.25, 0.5, 1.0};
    Vec2 r = {0.0, 0.0};
    for (int j = 0; j < 2; ++j) {
        const double sgn1 = (j == 0) ? -1.0 : 1.0;  // (-1)^j for j = 1, 2
        double i1 = 0.0, i2 = 0.0;
        for (std::size_t p = 0; p + 1 < std::size(cuts); ++p) {
            const double mid = 0.5 * (cuts[p + 1] + cuts[p]);
            const double half = 0.5 * (cuts[p + 1] - cuts[p]);
            for (std::size_t q = 0; q < gl.x.size(); ++q) {
                const double tau = mid + half * gl.x[q];
                const double w = half * gl.w[q];
                const double alpha = phi * (1.0 - tau * tau);
                const double yv = sol.y(j, alpha);
                const double ypv = sol.yp(j, alpha);
                // Z = sqrt(Q (1 - alpha/phi)) = sqrt(Q) tau, stable Q path
                const double qv = Q(ctx, alpha, phi, yv);
                const double Zv = std::sqrt(qv) * tau;
                const double ymb = yv - e.b;
                const double common = 2.0 * phi * w * tau * Zv * ypv;
                i1 += common * ymb;
                i2 += common * ymb * ymb;
            }
        }
        r[0] += sgn1 * i1;
        r[1] += -sgn1 * i2;  // (-1)^{j+1}
    }
    r[1] -= ctx.I * cube(phi);
    return r;
}

// Debug dump of the assembled pieces along a trajectory at fixed chi:
// alpha, chat_1, chat_2 rows plus a header with A entries and F''.
inline void dump_kernel_csv(const KernelContext& ctx, const Solution& sol, double chi,
                            std::ostream& os) {
    const std::size_t m = sol.locate(chi);
    const Mat2 A = a_matrix(ctx, chi, sol.Y[m]);
    const Vec2 f = f_rhs(ctx, chi);
    os << "# chi=" << fmt_g17(chi) << " a11=" << fmt_g17(A[0][0]) << " a12=" << fmt_g17(A[0][1])
       << " a21=" << fmt_g17(A[1][0]) << " a22=" << fmt_g17(A[1][1])
       << " F2pp=" << fmt_g17(f[1]) << '\n';
    os << "alpha,c1,c2\n";
    for (std::size_t k = 0; k < m; ++k) {
        const Vec2 c = solver_detail::chat(ctx, sol.chi[k], chi, sol.Y[k], sol.Yp[k]);
        os << fmt_g17(sol.chi[k]) << ',' << fmt_g17(c[0]) << ',' << fmt_g17(c[1]) << '\n';
    }
}

}  // namespace floatbody
