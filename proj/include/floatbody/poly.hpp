// Dense polynomial helpers used by the closed-form envelope families.
#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace floatbody {

// Coefficients in ascending powers: p[k] * x^k.
using Poly = std::vector<double>;

inline double poly_eval(const Poly& p, double x) {
    double acc = 0.0;
    for (std::size_t k = p.size(); k-- > 0;) acc = acc * x + p[k];
    return acc;
}

// Value and first three derivatives at x.
inline std::array<double, 4> poly_jet3(const Poly& p, double x) {
    double f = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0;
    for (std::size_t k = p.size(); k-- > 0;) {
        d3 = d3 * x + 3.0 * d2;
        d2 = d2 * x + 2.0 * d1;
        d1 = d1 * x + f;
        f = f * x + p[k];
    }
    return {f, d1, d2, d3};
}

inline Poly poly_derivative(const Poly& p) {
    if (p.size() <= 1) return {0.0};
    Poly d(p.size() - 1);
    for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = p[k] * double(k);
    return d;
}

inline Poly poly_antiderivative(const Poly& p) {
    Poly a(p.size() + 1, 0.0);
    for (std::size_t k = 0; k < p.size(); ++k) a[k + 1] = p[k] / double(k + 1);
    return a;
}

inline Poly poly_add(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), 0.0);
    for (std::size_t k = 0; k < a.size(); ++k) r[k] += a[k];
    for (std::size_t k = 0; k < b.size(); ++k) r[k] += b[k];
    return r;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
    Poly r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

inline Poly poly_scale(Poly p, double s) {
    for (double& c : p) c *= s;
    return p;
}

inline void poly_trim(Poly& p, double tol = 0.0) {
    while (p.size() > 1 && std::abs(p.back()) <= tol) p.pop_back();
}

// Synthetic division by (1 - x); returns quotient, stores remainder = p(1).
inline Poly poly_divide_1mx(const Poly& p, double* remainder) {
    // p(x) = (1-x) q(x) + p(1).  Divide by (-(x-1)) via Horner at x=1.
    Poly q(p.size() > 1 ? p.size() - 1 : 1, 0.0);
    double carry = 0.0;
    for (std::size_t k = p.size(); k-- > 1;) {
        carry += p[k];
        q[k - 1] = -carry;  // coefficient of x^{k-1} in p/(x-1)
    }
    if (remainder) *remainder = carry + p[0];
    // p = (x-1)*(p/(x-1)) + p(1)  =>  (1-x) q with q = -(p/(x-1)).
    return q;
}

// Chebyshev polynomial of the second kind U_m, ascending coefficients.
inline Poly chebyshev_u(unsigned m) {
    Poly um1{1.0};            // U_0
    if (m == 0) return um1;
    Poly um{0.0, 2.0};        // U_1
    for (unsigned k = 1; k < m; ++k) {
        Poly next = poly_mul({0.0, 2.0}, um);
        for (std::size_t i = 0; i < um1.size(); ++i) next[i] -= um1[i];
        um1 = std::move(um);
        um = std::move(next);
    }
    return um;
}

// Polynomial solution p of (1-x^2) p'(x) - x p(x) = rhs(x), solved top-down;
// exists iff rhs admits one (our envelope integrands do).  Then
// d/dx [sqrt(1-x^2) p(x)] = rhs(x)/sqrt(1-x^2).
inline Poly poly_sqrt_weight_antiderivative(const Poly& rhs) {
    const std::size_t deg_rhs = rhs.size() - 1;
    if (deg_rhs < 1) {
        if (rhs.size() == 1 && rhs[0] == 0.0) return {0.0};
        throw std::invalid_argument("sqrt-weight antiderivative: degree too low");
    }
    const std::size_t deg_p = deg_rhs - 1;
    Poly p(deg_p + 1, 0.0);
    auto rc = [&](std::size_t k) { return k < rhs.size() ? rhs[k] : 0.0; };
    auto pc = [&](std::size_t k) { return k < p.size() ? p[k] : 0.0; };
    // [x^k]: (k+1) p_{k+1} - k p_{k-1} = rhs_k  ->  p_{k-1} = ((k+1)p_{k+1} - rhs_k)/k
    for (std::size_t k = deg_p + 1; k >= 1; --k)
        p[k - 1] = (double(k + 1) * pc(k + 1) - rc(k)) / double(k);
    return p;
}

}  // namespace floatbody
