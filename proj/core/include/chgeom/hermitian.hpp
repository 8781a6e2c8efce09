#pragma once

#include "chgeom/types.hpp"

namespace chg {

enum class Sign { Negative, Isotropic, Positive };

struct PointClass {
    Sign tag;
    double margin;  // <p,p> / |p|^2
};

struct Projection {
    PVec perp;
    PVec par;
    bool degenerate;  // perp vanished: v lies on the line of p
};

struct SliceBasis {
    PVec n0;  // <n0,n0> = -1
    PVec p0;  // <p0,p0> = 1
};

struct Gram3 {
    Mat3 G;
    cplx operator()(int i, int j) const { return G(i, j); }
};

/// Tangent vector v_p = <-,p>v at p, stored with dir orthogonal to base.
struct TangentRep {
    PVec base;
    PVec dir;
};

/// <x,y> = -x1 conj(y1) + x2 conj(y2) + x3 conj(y3)
inline cplx form(const PVec& x, const PVec& y) {
    return -x[0] * std::conj(y[0]) + x[1] * std::conj(y[1]) + x[2] * std::conj(y[2]);
}

inline double self_form(const PVec& x) {
    return -std::norm(x[0]) + std::norm(x[1]) + std::norm(x[2]);
}

PointClass classify(const PVec& p, double tol = kClassifyTol);
bool is_isotropic(const PVec& p, double tol = kClassifyTol);

/// Same projective point: the 2x3 coordinate matrix has rank one.
bool same_point(const PVec& a, const PVec& b, double tol = 1e-9);

/// ta(p,q); +inf or 1 when an argument is isotropic.
double tance(const PVec& p, const PVec& q);

PVec proj_perp(const PVec& p, const PVec& v);
PVec proj_par(const PVec& p, const PVec& v);
Projection project(const PVec& p, const PVec& v);

Isometry reflection(const PVec& p);

/// <v1,p><p,v2> / (<v1,v2><p,p>) for isotropic v1, v2.
cplx eta(const PVec& v1, const PVec& v2, const PVec& p);

double dist(const PVec& p, const PVec& q);

/// Tance from negative q to the slice polar to positive p.
double tance_to_slice(const PVec& q, const PVec& p);

/// Tance from negative p to the bisector with vertices v1, v2.
double tance_to_bisector(const PVec& p, const PVec& v1, const PVec& v2);

/// Polar point of the middle slice between ultraparallel slices.
PVec midpoint_polar(const PVec& p1, const PVec& p2);

SliceBasis slice_basis(const PVec& g);

Gram3 gram(const PVec& a, const PVec& b, const PVec& c);

/// Scale to |<p,p>| = 1.
PVec unit(const PVec& p);

/// Rotate the phase so that the largest-modulus coordinate is real positive.
PVec fix_phase(const PVec& p);

/// A vector orthogonal to both arguments.
PVec orthogonal_to(const PVec& a, const PVec& b);

TangentRep make_tangent(const PVec& base, const PVec& v);

/// e^{-t} v1 + e^{t} v2 after rescaling v2 so that <v1,v2> = -1/2; unit speed in t.
PVec geodesic_point(const PVec& v1, const PVec& v2, double t);

}  // namespace chg
