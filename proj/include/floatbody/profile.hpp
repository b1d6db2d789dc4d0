// Signed radius-of-curvature profiles rho(Phi) of the water envelope,
// Phi in [0, pi/2], plus their symmetry-constraint report.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "floatbody/common.hpp"
#include "floatbody/quadrature.hpp"

namespace floatbody {

enum class ProfileFamily { Zero, CosineOdd, PiecewiseQuartic, Tabulated };

inline const char* family_name(ProfileFamily f) {
    switch (f) {
        case ProfileFamily::Zero: return "zero";
        case ProfileFamily::CosineOdd: return "cosine_odd";
        case ProfileFamily::PiecewiseQuartic: return "piecewise_quartic";
        case ProfileFamily::Tabulated: return "tabulated";
    }
    return "?";
}

// Coefficient of the quartic family, pinned by the A(0)=0 constraint:
//   integral of sin^2(4T)cosT over (pi/4,pi/2] divided by the sin^4 one.
inline constexpr double kQuarticConstant = 85.0 / 64.0;

namespace detail {

// Natural cubic spline on ascending knots; C2, bounded discontinuous f'''.
struct CubicSpline {
    std::vector<double> x, y, m;  // m = second derivatives at knots

    CubicSpline() = default;
    CubicSpline(std::vector<double> xs, std::vector<double> ys)
        : x(std::move(xs)), y(std::move(ys)) {
        const std::size_t n = x.size();
        if (n < 3) throw profile_error("tabulated profile needs >= 3 knots");
        for (std::size_t i = 1; i < n; ++i)
            if (!(x[i] > x[i - 1])) throw profile_error("tabulated knots must be strictly increasing");
        m.assign(n, 0.0);
        std::vector<double> c(n, 0.0), d(n, 0.0), rhs(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double hl = x[i] - x[i - 1], hr = x[i + 1] - x[i];
            c[i] = 2.0 * (hl + hr);
            rhs[i] = 6.0 * ((y[i + 1] - y[i]) / hr - (y[i] - y[i - 1]) / hl);
        }
        // Thomas solve on the interior (natural BC: m[0] = m[n-1] = 0).
        for (std::size_t i = 2; i + 1 < n; ++i) {
            const double hl = x[i] - x[i - 1];
            const double w = hl / c[i - 1];
            c[i] -= w * hl;
            rhs[i] -= w * rhs[i - 1];
        }
        for (std::size_t i = n - 2; i >= 1; --i) {
            const double hr = x[i + 1] - x[i];
            m[i] = (rhs[i] - hr * (i + 2 < n ? m[i + 1] : 0.0)) / c[i];
            if (i == 1) break;
        }
    }

    std::array<double, 4> jet(double t) const {
        const std::size_t n = x.size();
        std::size_t i = std::upper_bound(x.begin(), x.end(), t) - x.begin();
        i = std::clamp<std::size_t>(i, 1, n - 1) - 1;
        const double h = x[i + 1] - x[i];
        const double A = (x[i + 1] - t) / h, B = (t - x[i]) / h;
        const double f = A * y[i] + B * y[i + 1] +
                         ((A * A * A - A) * m[i] + (B * B * B - B) * m[i + 1]) * h * h / 6.0;
        const double f1 = (y[i + 1] - y[i]) / h -
                          (3.0 * A * A - 1.0) * h / 6.0 * m[i] +
                          (3.0 * B * B - 1.0) * h / 6.0 * m[i + 1];
        const double f2 = A * m[i] + B * m[i + 1];
        const double f3 = (m[i + 1] - m[i]) / h;
        return {f, f1, f2, f3};
    }
};

}  // namespace detail

// [TYPE] CurvatureProfile: rho(Phi) on [0, pi/2], C1 with bounded
// (possibly discontinuous) second derivative; rho(pi/2) = 0.
class CurvatureProfile {
public:
    static CurvatureProfile zero() {
        CurvatureProfile p;
        p.family_ = ProfileFamily::Zero;
        return p;
    }

    // rho(Phi) = c cos((2n+1) Phi), n >= 1.
    static CurvatureProfile cosine_odd(int n, double c) {
        if (n < 1) throw profile_error("cosine_odd: n must be a positive integer");
        CurvatureProfile p;
        p.family_ = ProfileFamily::CosineOdd;
        p.n_ = n;
        p.c_ = c;
        return p;
    }

    // rho(Phi) = c (sin^2(4Phi) - (85/64) sin^4(4Phi)) on (pi/4, pi/2], else 0.
    static CurvatureProfile piecewise_quartic(double c) {
        CurvatureProfile p;
        p.family_ = ProfileFamily::PiecewiseQuartic;
        p.c_ = c;
        return p;
    }

    static CurvatureProfile tabulated(std::vector<double> angles, std::vector<double> values) {
        CurvatureProfile p;
        p.family_ = ProfileFamily::Tabulated;
        p.spline_ = detail::CubicSpline(std::move(angles), std::move(values));
        if (std::abs(p.spline_.x.front()) > 1e-12 ||
            std::abs(p.spline_.x.back() - 0.5 * kPi) > 1e-12)
            throw profile_error("tabulated knots must span [0, pi/2]");
        return p;
    }

    ProfileFamily family() const { return family_; }
    int n() const { return n_; }
    double c() const { return c_; }

    // [OP] rho_eval
    double rho(double theta) const { return jet(theta)[0]; }

    // Value and first three derivatives with respect to the tangent angle.
    std::array<double, 4> jet(double theta) const {
        if (!(theta >= -1e-15 && theta <= 0.5 * kPi + 1e-15))
            throw std::domain_error("rho: tangent angle outside [0, pi/2]");
        theta = std::clamp(theta, 0.0, 0.5 * kPi);
        switch (family_) {
            case ProfileFamily::Zero:
                return {0.0, 0.0, 0.0, 0.0};
            case ProfileFamily::CosineOdd: {
                const double m = 2.0 * n_ + 1.0;
                const double cs = std::cos(m * theta), sn = std::sin(m * theta);
                return {c_ * cs, -c_ * m * sn, -c_ * m * m * cs, c_ * m * m * m * sn};
            }
            case ProfileFamily::PiecewiseQuartic: {
                if (theta <= 0.25 * kPi) return {0.0, 0.0, 0.0, 0.0};
                const double k = kQuarticConstant;
                const double S = std::sin(4.0 * theta), C4 = std::cos(4.0 * theta);
                const double f = c_ * (S * S - k * S * S * S * S);
                const double f1 = 4.0 * c_ * C4 * (2.0 * S - 4.0 * k * S * S * S);
                const double f2 =
                    4.0 * c_ * (-4.0 * S * (2.0 * S - 4.0 * k * S * S * S) +
                                4.0 * C4 * C4 * (2.0 - 12.0 * k * S * S));
                const double f3 =
                    4.0 * c_ * S * C4 * (-128.0 + 640.0 * k * S * S - 384.0 * k * C4 * C4);
                return {f, f1, f2, f3};
            }
            case ProfileFamily::Tabulated:
                return spline_.jet(theta);
        }
        return {0.0, 0.0, 0.0, 0.0};
    }

    // Largest alpha1 = sin(Theta1) such that rho vanishes on [0, Theta1];
    // 0 when the profile is active immediately (condition (i) fails).
    double alpha1() const {
        switch (family_) {
            case ProfileFamily::Zero:
                return 1.0;
            case ProfileFamily::CosineOdd:
                return c_ == 0.0 ? 1.0 : 0.0;
            case ProfileFamily::PiecewiseQuartic:
                return c_ == 0.0 ? 1.0 : std::sin(0.25 * kPi);
            case ProfileFamily::Tabulated: {
                const int n_scan = 4096;
                const double scale = std::max(1e-300, magnitude());
                for (int i = 1; i <= n_scan; ++i) {
                    const double th = 0.5 * kPi * i / n_scan;
                    if (std::abs(rho(th)) > 1e-12 * scale)
                        return std::sin(0.5 * kPi * (i - 1) / n_scan);
                }
                return 1.0;
            }
        }
        return 0.0;
    }

    double magnitude() const {
        double m = 0.0;
        for (int i = 0; i <= 256; ++i) m = std::max(m, std::abs(rho(0.5 * kPi * i / 256.0)));
        return m;
    }

    std::string describe() const {
        std::string s = family_name(family_);
        if (family_ == ProfileFamily::CosineOdd)
            s += " n=" + std::to_string(n_) + " c=" + fmt_g17(c_);
        if (family_ == ProfileFamily::PiecewiseQuartic) s += " c=" + fmt_g17(c_);
        return s;
    }

private:
    CurvatureProfile() = default;
    ProfileFamily family_ = ProfileFamily::Zero;
    int n_ = 1;
    double c_ = 0.0;
    detail::CubicSpline spline_;
};

// [OP] check_constraints: report-only residuals of observations C and E
// plus the condition-(i) threshold alpha1.
struct ConstraintReport {
    double residual_c = 0.0;   // integral of rho(T) cos(T) over [0, pi/2]
    double rho_at_pole = 0.0;  // rho(pi/2)
    double alpha1 = 0.0;
    bool passes(double tol) const {
        return std::abs(residual_c) <= tol && std::abs(rho_at_pole) <= tol;
    }
};

inline ConstraintReport check_constraints(const CurvatureProfile& p) {
    ConstraintReport r;
    auto f = [&](double th) { return p.rho(th) * std::cos(th); };
    // Split at pi/4: the quartic family has a curvature jump there.
    r.residual_c = adaptive_simpson(f, 0.0, 0.25 * kPi, 1e-13) +
                   adaptive_simpson(f, 0.25 * kPi, 0.5 * kPi, 1e-13);
    r.rho_at_pole = p.rho(0.5 * kPi);
    r.alpha1 = p.alpha1();
    return r;
}

}  // namespace floatbody
