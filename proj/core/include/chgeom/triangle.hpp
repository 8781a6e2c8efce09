#pragma once

#include <array>
#include <vector>

#include "chgeom/hermitian.hpp"
#include "chgeom/isometry.hpp"
#include "chgeom/types.hpp"

namespace chg {

struct TriangleInv {
    double t12;
    double t23;
    double t31;
    cplx eps;

    double eps0() const { return eps.real(); }
    double eps1() const { return eps.imag(); }
    double d() const {
        return 1.0 + 2.0 * t12 * t23 * t31 * eps0() - t12 * t12 - t23 * t23 - t31 * t31;
    }
};

struct TrianglePolars {
    PVec g1;
    PVec g2;
    PVec g3;
};

TriangleInv invariants(const TrianglePolars& T);

/// Representatives with Gram matrix [[1,t12,t31 conj(eps)],[t12,1,t23],[t31 eps,t23,1]].
TrianglePolars normalized(const TrianglePolars& T);

/// Minimum slack of the three transversality inequalities.
double transversal_slack(const TriangleInv& I);
bool is_transversal(const TriangleInv& I, double margin = kMargin);
bool is_ccw(const TriangleInv& I, double margin = kMargin);

/// Middle-slice polars m1, m2, m3 of the normalized representatives.
std::array<PVec, 3> middle_polars(const TrianglePolars& T);

/// phi = R3 R2 R1, acting on the normalized representatives.
Isometry holonomy(const TrianglePolars& T);

/// Trace from the pairings g_ij = <m_i,m_j>.
cplx holonomy_trace_pairings(const TrianglePolars& T);

/// Trace in closed form from the invariants.
cplx holonomy_trace_closed(const TriangleInv& I);

double holonomy_abs_trace(const TriangleInv& I);

/// Classification of the holonomy restricted to S1; throws on trivial or R-parabolic results.
SliceClass classify_triangle(const TrianglePolars& T, double tol = kParabolicBand);

/// Area of the geodesic triangle in the common complex spine of a C-plane triangle.
double cplane_area(const TrianglePolars& T, double dtol = 1e-8);

using RegionPoint = std::array<double, 4>;  // (e, t1, t2, t3)

bool region_member(double e, double t1, double t2, double t3, double tol = 0.0);

/// Sampled path inside the region ending on the locus d = 0 with t2 = t3.
std::vector<RegionPoint> deformation_path(double e, double t1, double t2, double t3, double step);

}  // namespace chg
