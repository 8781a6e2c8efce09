#pragma once

#include <Eigen/Core>
#include <array>
#include <vector>

#include "chgeom/hermitian.hpp"
#include "chgeom/types.hpp"

namespace chg {

using Mat2 = Eigen::Matrix2cd;

inline constexpr double kParabolicBand = 1e-8;
inline constexpr double kAngleSeparation = 1e-6;

PVec act(const Isometry& I, const PVec& p);
Isometry compose(const Isometry& a, const Isometry& b);  // a after b
Isometry inverse(const Isometry& I);
Isometry operator*(const Isometry& a, const Isometry& b);
cplx det(const Isometry& I);
bool is_form_unitary(const Isometry& I, double tol = 1e-10);

/// Action of a slice-stabilizing isometry on the (n0,p0) basis of g^perp, det A = 1.
struct SliceAction {
    Mat2 A;
    PVec g;
    SliceBasis basis;

    /// Image of the disc coordinate z (point z p0 + n0).
    cplx mobius(cplx z) const;
};

enum class SliceTag { Elliptic, Parabolic, Hyperbolic, Identity };
enum class ParabolicKind { None, R, L };

const char* to_string(SliceTag t);

struct SliceClass {
    SliceTag tag;
    double abs_trace;
    double rotation_angle = 0.0;  // elliptic only, (-pi, pi]
    std::vector<double> fixed_angles;
    ParabolicKind parabolic = ParabolicKind::None;
    cplx center{0.0, 0.0};  // elliptic fixed point in the disc coordinate
};

SliceAction restrict_to_slice(const Isometry& I, const PVec& g);
SliceClass classify(const SliceAction& A, double tol = kParabolicBand);

/// theta with x ~ e^{i theta} p0 + n0, in [0, 2pi).
double boundary_angle(const PVec& g, const PVec& x);

/// Point of the slice boundary at angle theta.
PVec boundary_point(const PVec& g, double theta);

/// 0 iff theta1, theta2, theta3 are in counterclockwise cyclic order.
int cyclic_order(double t1, double t2, double t3, double sep = kAngleSeparation);

int l_part_indicator(const PVec& x, const Isometry& I, const PVec& g);

struct EigenPair {
    cplx value;
    PVec vector;
};

std::array<EigenPair, 3> eigensystem3(const Isometry& I);

/// Roots of z^3 + a z^2 + b z + c.
std::array<cplx, 3> cubic_roots(cplx a, cplx b, cplx c);

}  // namespace chg
