// Test-side oracles: independent adaptive quadrature (boost Gauss-Kronrod),
// finite-difference helpers, and deterministic random sampling.  These stay
// independent of the production evaluation paths they check.
#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>

namespace fbtest {

// Adaptive Gauss-Kronrod; handles integrable endpoint singularities by
// depth, which keeps it an independent check of the production fixed-order
// Gauss-Legendre paths.
template <class F>
double gk_integrate(F&& f, double a, double b, double tol = 1e-10) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        std::forward<F>(f), a, b, 22, tol);
}

template <class F>
double fd_derivative(F&& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

template <class F>
double fd_second_derivative(F&& f, double x, double h) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

inline std::mt19937& rng() {
    static std::mt19937 gen(0xf10a7b0d);
    return gen;
}

inline double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

}  // namespace fbtest
