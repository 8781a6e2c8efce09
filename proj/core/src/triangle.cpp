#include "chgeom/triangle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace chg {

namespace {

double locus_gap(double e, double a, double b, double c) {
    return a * a + b * b + c * c - 1.0 - 2.0 * a * b * c * e;
}

// Root of a decreasing function on [lo, hi] with f(lo) > 0 >= f(hi).
double bisect(const std::function<double(double)>& f, double lo, double hi) {
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0 ? lo : hi) = mid;
    }
    return hi;
}

int steps_for(double span, double step) {
    return std::max(1, static_cast<int>(std::ceil(std::abs(span) / step)));
}

}  // namespace

TriangleInv invariants(const TrianglePolars& T) {
    for (const PVec* g : {&T.g1, &T.g2, &T.g3})
        if (classify(*g).tag != Sign::Positive) throw DomainError("triangle: polar points must be positive");
    const double a = tance(T.g1, T.g2), b = tance(T.g2, T.g3), c = tance(T.g3, T.g1);
    if (!(a > 1.0 && b > 1.0 && c > 1.0)) throw DomainError("triangle: slices are not ultraparallel");
    const cplx kappa = form(T.g1, T.g2) * form(T.g2, T.g3) * form(T.g3, T.g1) /
                       (self_form(T.g1) * self_form(T.g2) * self_form(T.g3));
    return {std::sqrt(a), std::sqrt(b), std::sqrt(c), kappa / std::abs(kappa)};
}

TrianglePolars normalized(const TrianglePolars& T) {
    TrianglePolars r{unit(T.g1), unit(T.g2), unit(T.g3)};
    const cplx c12 = form(r.g1, r.g2);
    r.g2 *= c12 / std::abs(c12);
    const cplx c23 = form(r.g2, r.g3);
    r.g3 *= c23 / std::abs(c23);
    return r;
}

double transversal_slack(const TriangleInv& I) {
    const double lhs = 1.0 + 2.0 * I.t12 * I.t23 * I.t31 * I.eps0();
    const double e2 = I.eps0() * I.eps0();
    const double a = I.t12 * I.t12, b = I.t23 * I.t23, c = I.t31 * I.t31;
    return std::min({lhs - (a * e2 + b + c), lhs - (a + b * e2 + c), lhs - (a + b + c * e2)});
}

bool is_transversal(const TriangleInv& I, double margin) { return transversal_slack(I) > margin; }

bool is_ccw(const TriangleInv& I, double margin) { return I.eps1() < -margin; }

std::array<PVec, 3> middle_polars(const TrianglePolars& T) {
    const TriangleInv I = invariants(T);
    const TrianglePolars N = normalized(T);
    return {(N.g1 + N.g2) / std::sqrt(2.0 * I.t12 + 2.0), (N.g2 + N.g3) / std::sqrt(2.0 * I.t23 + 2.0),
            (I.eps * N.g1 + N.g3) / std::sqrt(2.0 * I.t31 + 2.0)};
}

Isometry holonomy(const TrianglePolars& T) {
    const auto m = middle_polars(T);
    return reflection(m[2]) * reflection(m[1]) * reflection(m[0]);
}

cplx holonomy_trace_pairings(const TrianglePolars& T) {
    const auto m = middle_polars(T);
    auto g = [&](int i, int j) { return form(m[i - 1], m[j - 1]); };
    return 8.0 * g(1, 2) * g(2, 3) * g(3, 1) - 4.0 * g(2, 3) * g(3, 2) - 4.0 * g(1, 3) * g(3, 1) -
           4.0 * g(1, 2) * g(2, 1) + 3.0;
}

cplx holonomy_trace_closed(const TriangleInv& I) {
    const double prod = (I.t12 + 1.0) * (I.t23 + 1.0) * (I.t31 + 1.0);
    return I.eps - (1.0 + std::conj(I.eps)) * (1.0 - I.d() / prod);
}

double holonomy_abs_trace(const TriangleInv& I) {
    const double prod = (I.t12 + 1.0) * (I.t23 + 1.0) * (I.t31 + 1.0);
    return std::sqrt(2.0 * (1.0 + I.eps0())) * std::abs(1.0 - I.d() / prod);
}

SliceClass classify_triangle(const TrianglePolars& T, double tol) {
    const SliceClass c = classify(restrict_to_slice(holonomy(T), T.g1), tol);
    if (c.tag == SliceTag::Identity) throw PropertyViolation("triangle holonomy is trivial");
    if (c.tag == SliceTag::Parabolic && c.parabolic == ParabolicKind::R)
        throw PropertyViolation("triangle holonomy is R-parabolic");
    return c;
}

double cplane_area(const TrianglePolars& T, double dtol) {
    const TriangleInv I = invariants(T);
    if (std::abs(I.d()) > dtol) throw DomainError("cplane_area: triangle is not C-plane");
    const PVec p1 = proj_perp(T.g1, T.g2);
    const PVec p2 = proj_perp(T.g2, T.g1);
    const PVec p3 = proj_perp(T.g3, T.g2);
    return 0.5 * std::arg(-form(p1, p2) * form(p2, p3) * form(p3, p1));
}

bool region_member(double e, double t1, double t2, double t3, double tol) {
    if (!(t1 > 1.0) || t1 > t2 + tol || t1 > t3 + tol) return false;
    const double rhs = 1.0 + 2.0 * t1 * t2 * t3 * e;
    if (!(t1 * t1 * e * e + t2 * t2 + t3 * t3 < rhs)) return false;
    return rhs <= t1 * t1 + t2 * t2 + t3 * t3 + tol;
}

std::vector<RegionPoint> deformation_path(double e, double t1, double t2, double t3, double step) {
    if (!(step > 0)) throw DomainError("deformation_path: step must be positive");
    if (!region_member(e, t1, t2, t3, 1e-12)) throw DomainError("deformation_path: start outside region");
    const bool swapped = t2 > t3;
    if (swapped) std::swap(t2, t3);

    std::vector<RegionPoint> path;
    auto emit = [&](double ee, double a, double b, double c) {
        path.push_back(swapped ? RegionPoint{ee, a, c, b} : RegionPoint{ee, a, b, c});
    };
    emit(e, t1, t2, t3);
    constexpr double kOnLocus = 1e-10;
    auto on_locus = [&] { return locus_gap(e, t1, t2, t3) <= kOnLocus; };

    // Raise t1 until t1 = t2 or the locus is reached.
    if (!on_locus() && t1 < t2) {
        auto f = [&](double x) { return locus_gap(e, x, t2, t3); };
        const double end = f(t2) > 0 ? t2 : bisect(f, t1, t2);
        const double start = t1;
        const int n = steps_for(end - start, step);
        for (int i = 1; i <= n; ++i) {
            t1 = i == n ? end : start + (end - start) * i / n;
            emit(e, t1, t2, t3);
        }
    }
    // Raise t1 = t2 together until they reach t3 or the locus.
    if (!on_locus() && t2 < t3) {
        auto g = [&](double x) { return locus_gap(e, x, x, t3); };
        const double end = g(t3) > 0 ? t3 : bisect(g, t1, t3);
        const double start = t1;
        const int n = steps_for(end - start, step);
        for (int i = 1; i <= n; ++i) {
            t1 = t2 = i == n ? end : start + (end - start) * i / n;
            emit(e, t1, t2, t3);
        }
    }
    // All equal: raise e onto the locus.
    if (!on_locus()) {
        const double t = t1;
        const double end = (3.0 * t * t - 1.0) / (2.0 * t * t * t);
        const double start = e;
        const int n = steps_for((end - start) * t, step);
        for (int i = 1; i <= n; ++i) {
            e = i == n ? end : start + (end - start) * i / n;
            emit(e, t1, t2, t3);
        }
    }
    // On the locus: raise t2 to t3 with e eliminated.
    if (t2 < t3) {
        const double start = t2;
        const int n = steps_for(t3 - start, step);
        for (int i = 1; i <= n; ++i) {
            t2 = i == n ? t3 : start + (t3 - start) * i / n;
            e = (t1 * t1 + t2 * t2 + t3 * t3 - 1.0) / (2.0 * t1 * t2 * t3);
            emit(e, t1, t2, t3);
        }
    }
    return path;
}

}  // namespace chg
