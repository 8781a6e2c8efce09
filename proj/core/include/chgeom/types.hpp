#pragma once

#include <Eigen/Core>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace chg {

using cplx = std::complex<double>;
using PVec = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3cd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

// Shared strictness margin for strict inequalities.
inline constexpr double kMargin = 1e-9;
// Slack below this magnitude marks a result as marginal.
inline constexpr double kMarginalBand = 1e-6;
// Slack allowed for non-strict inequalities.
inline constexpr double kNonStrictSlack = -1e-12;
inline constexpr double kClassifyTol = 1e-12;

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct DegenerateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StabilizationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PropertyViolation : std::logic_error {
    using std::logic_error::logic_error;
};

inline PVec make_pvec(cplx a, cplx b, cplx c) { return PVec(a, b, c); }

// Angle reduced to [0, 2pi).
inline double wrap_2pi(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0) r += kTwoPi;
    if (r >= kTwoPi) r -= kTwoPi;
    return r;
}

// Angle reduced to (-pi, pi].
inline double wrap_pi(double a) {
    double r = wrap_2pi(a);
    return r > kPi ? r - kTwoPi : r;
}

inline double arg_2pi(cplx z) { return wrap_2pi(std::arg(z)); }

// Form-unitary matrix with respect to diag(-1,1,1).
struct Isometry {
    Mat3 M = Mat3::Identity();

    Isometry() = default;
    explicit Isometry(const Mat3& m) : M(m) {}

    static Isometry identity() { return Isometry{}; }
};

}  // namespace chg
