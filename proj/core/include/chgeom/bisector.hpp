#pragma once

#include <utility>

#include "chgeom/hermitian.hpp"
#include "chgeom/types.hpp"

namespace chg {

/// Bisector with real spine through g1, g2; focus is the polar of the complex spine.
struct Bisector {
    PVec g1;
    PVec g2;
    PVec focus;
};

Bisector make_bisector(const PVec& g1, const PVec& g2);

/// Isotropic endpoints of the real spine through g1, g2, scaled so that <v1,v2> = 1/2.
std::pair<PVec, PVec> spine_vertices(const PVec& g1, const PVec& g2);

/// Im(<g1,x><x,g2>/<g1,g2>); the bisector is its zero set.
double bisector_im(const PVec& x, const Bisector& B);
cplx bisector_value(const PVec& x, const Bisector& B);
bool on_bisector(const PVec& x, const Bisector& B, double tol = 1e-10);

TangentRep normal_vector(const PVec& p, const Bisector& B);
double tangency_test(const PVec& v, const PVec& p, const Bisector& B);
int halfspace_sign(const PVec& x, const Bisector& B, double tol = 1e-12);

/// Oriented angle at p from the normal of B(g,g1) to the normal of B(g,g2), in [0, 2pi).
double cotranchal_angle(const PVec& g, const PVec& g1, const PVec& g2, const PVec& p);

/// Slack of the transversality inequality along the common slice of g (positive when transversal).
double cotranchal_slack(const PVec& g, const PVec& g1, const PVec& g2);
bool cotranchal_transversal(const PVec& g, const PVec& g1, const PVec& g2, double margin = kMargin);

/// Reflection in the middle slice between the slices of p1 and p2, applied to s.
PVec slice_transport(const PVec& s, const PVec& p1, const PVec& p2);

/// Brute-force transversality over a grid of slice points.
bool transversality_oracle(const PVec& g, const PVec& g1, const PVec& g2, int grid);

/// Empirical sup of ta(p,S)-1 over p in B2 with ta(p,B1) < 1+eps^2.
double separability_probe(const Bisector& B1, const Bisector& B2, double eps, int samples);

/// Radical inverse in the given base.
double halton(unsigned index, unsigned base);

}  // namespace chg
