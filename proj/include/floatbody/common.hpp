// Shared error types and small numeric helpers.
#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace floatbody {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Error taxonomy; the CLI maps each class to a distinct exit code.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct profile_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct geometry_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct stall_error : std::runtime_error {
    double chi = 0.0;
    double det = 0.0;
    stall_error(const std::string& msg, double chi_, double det_)
        : std::runtime_error(msg), chi(chi_), det(det_) {}
};
struct quadrature_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double sq(double x) { return x * x; }
inline double cube(double x) { return x * x * x; }

// Deterministic shortest round-trip formatting for CSV/JSON/OBJ output.
inline std::string fmt_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace floatbody
