#pragma once

#include <functional>
#include <vector>

#include "chgeom/hermitian.hpp"
#include "chgeom/quadrangle.hpp"
#include "chgeom/types.hpp"

namespace chg {

/// P_c(v_p) = -Im(<p,p><v,c> / (2<p,c>)).
double P(const PVec& c, const TangentRep& v);

/// Total increment of 1/2 Arg(<c1,p><p,c2>/<c1,c2>) along the path, tracked continuously.
double f_pot(const PVec& c1, const PVec& c2, const std::vector<PVec>& path);

/// Pointwise value of 1/2 Arg(<c1,p><p,c2>/<c1,c2>) on the principal branch.
double f_value(const PVec& c1, const PVec& c2, const PVec& p);

/// omega(v_p, w_p) = Im(-<p,p><v,w>).
double omega(const TangentRep& v, const TangentRep& w);

/// Tangent vector of the curve x(s) with x(0) = p and x'(0) = dx.
TangentRep tangent_of_curve(const PVec& p, const PVec& dx);

/// Lift of a two-parameter surface with its partial derivatives.
struct Patch {
    std::function<PVec(double, double)> at;
    std::function<PVec(double, double)> da;
    std::function<PVec(double, double)> db;
    double radius = 0.1;  // parameters range over [-radius, radius]^2
};

Patch affine_patch(const PVec& base, const PVec& x, const PVec& y, double radius);

/// max |d(P_c)(da,db) - omega(da,db)| over a sample grid, central differences with step h.
double check_dP(const PVec& c, const Patch& patch, double h, int grid = 5);

/// max |d f_{c1,c2}(da) - (P_{c1} - P_{c2})(da)| over a sample grid.
double check_df(const PVec& c1, const PVec& c2, const Patch& patch, double h, int grid = 5);

struct ToledoIntegral {
    double value;  // tau at the level of H_n
    long num3;     // 3 tau rounded
    std::vector<double> terms;  // Arg(<q,s_{i+1}>/<q,s_i>) in [0, 2pi)
};

ToledoIntegral toledo_by_integral(const QuadrangleData& D);

}  // namespace chg
