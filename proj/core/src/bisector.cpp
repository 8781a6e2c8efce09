#include "chgeom/bisector.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace chg {

namespace {

// Polar of the common slice: a shared spine point, else the point orthogonal to both foci.
PVec common_slice_polar(const Bisector& B1, const Bisector& B2) {
    for (const PVec* a : {&B1.g1, &B1.g2})
        for (const PVec* b : {&B2.g1, &B2.g2})
            if (same_point(*a, *b, 1e-9)) return *a;
    return orthogonal_to(B1.focus, B2.focus);
}

PVec other_spine_point(const Bisector& B, const PVec& g) {
    return same_point(B.g1, g, 1e-9) ? B.g2 : B.g1;
}

}  // namespace

Bisector make_bisector(const PVec& g1, const PVec& g2) {
    const double ta = tance(g1, g2);
    if (!(ta > 1e-10) || std::abs(ta - 1.0) <= 1e-10)
        throw DomainError("make_bisector: ta(g1,g2) must avoid 0 and 1");
    return {g1, g2, orthogonal_to(g1, g2)};
}

std::pair<PVec, PVec> spine_vertices(const PVec& g1, const PVec& g2) {
    const cplx c = form(g1, g2);
    if (std::abs(c) == 0.0) throw DegenerateError("spine_vertices: orthogonal spine points");
    const PVec h2 = g2 * (c / std::abs(c));  // <g1,h2> = |c|
    const double a = self_form(g1);
    const double b = self_form(h2);
    const double r = std::abs(c);
    const double disc = r * r - a * b;
    if (!(disc > 0)) throw DegenerateError("spine_vertices: real spine has no vertices");
    PVec v1, v2;
    if (std::abs(b) <= 1e-14 * h2.squaredNorm()) {
        v1 = g1 - (a / (2.0 * r)) * h2;
        v2 = h2;
    } else {
        const double sq = std::sqrt(disc);
        // Stable pair of roots of b s^2 + 2 r s + a.
        const double q = -(r + sq);
        const double s1 = q / b;
        const double s2 = a / q;
        v1 = g1 + s1 * h2;
        v2 = g1 + s2 * h2;
    }
    const cplx v12 = form(v1, v2);
    v2 *= 1.0 / (2.0 * std::conj(v12));
    return {v1, v2};
}

double bisector_im(const PVec& x, const Bisector& B) {
    return (form(B.g1, x) * form(x, B.g2) / form(B.g1, B.g2)).imag();
}

cplx bisector_value(const PVec& x, const Bisector& B) {
    return {0.0, 2.0 * bisector_im(x, B)};
}

bool on_bisector(const PVec& x, const Bisector& B, double tol) {
    const double scale = x.squaredNorm() * B.g1.norm() * B.g2.norm() / std::abs(form(B.g1, B.g2));
    return std::abs(bisector_im(x, B)) <= tol * scale;
}

TangentRep normal_vector(const PVec& p, const Bisector& B) {
    if (is_isotropic(p)) throw DomainError("normal_vector: isotropic p");
    if (same_point(p, B.focus, 1e-9)) throw DomainError("normal_vector: p is the focus");
    const PVec n = kI * ((form(p, B.g2) / form(B.g1, B.g2)) * B.g1 -
                         (form(p, B.g1) / form(B.g2, B.g1)) * B.g2);
    return make_tangent(p, n);
}

double tangency_test(const PVec& v, const PVec& p, const Bisector& B) {
    const cplx a = (form(B.g1, v) * form(p, B.g2) + form(B.g1, p) * form(v, B.g2)) / form(B.g1, B.g2);
    return a.imag();
}

int halfspace_sign(const PVec& x, const Bisector& B, double tol) {
    const double sigma = self_form(B.focus) >= 0 ? 1.0 : -1.0;
    const double scale = x.squaredNorm() * B.g1.norm() * B.g2.norm() / std::abs(form(B.g1, B.g2));
    const double v = sigma * bisector_im(x, B);
    if (std::abs(v) <= tol * scale) return 0;
    return v > 0 ? 1 : -1;
}

double cotranchal_angle(const PVec& g, const PVec& g1, const PVec& g2, const PVec& p) {
    if (is_isotropic(p)) throw DomainError("cotranchal_angle: isotropic p");
    if (same_point(p, orthogonal_to(g, g1), 1e-9) || same_point(p, orthogonal_to(g, g2), 1e-9))
        throw DomainError("cotranchal_angle: p is a focus");
    const cplx z = -self_form(p) * self_form(g) * form(g1, p) * form(p, g2) / (form(g1, g) * form(g, g2));
    return arg_2pi(z);
}

double cotranchal_slack(const PVec& g, const PVec& g1, const PVec& g2) {
    if (classify(g).tag != Sign::Positive) throw DomainError("cotranchal: g not positive");
    const double t1 = tance(g, g1);
    const double t2 = tance(g, g2);
    if (!(t1 > 1.0) || !(t2 > 1.0)) throw DomainError("cotranchal: need ta(g,gi) > 1");
    const double lhs =
        std::abs((form(g1, g2) * self_form(g) / (form(g1, g) * form(g, g2))).real() - 1.0);
    const double rhs = std::sqrt(1.0 - 1.0 / t1) * std::sqrt(1.0 - 1.0 / t2);
    return rhs - lhs;
}

bool cotranchal_transversal(const PVec& g, const PVec& g1, const PVec& g2, double margin) {
    return cotranchal_slack(g, g1, g2) > margin;
}

PVec slice_transport(const PVec& s, const PVec& p1, const PVec& p2) {
    const PVec m = midpoint_polar(p1, p2);
    return reflection(m).M * s;
}

bool transversality_oracle(const PVec& g, const PVec& g1, const PVec& g2, int grid) {
    const Bisector B1 = make_bisector(g, g1);
    const Bisector B2 = make_bisector(g, g2);
    const SliceBasis sb = slice_basis(g);
    const PVec u = g / std::sqrt(self_form(g));
    const PVec iu = kI * u;

    std::vector<cplx> pts;
    for (int a = 0; a < grid; ++a)
        for (int b = 0; b < grid; ++b) {
            const cplx z(-1.0 + 2.0 * a / (grid - 1), -1.0 + 2.0 * b / (grid - 1));
            if (std::abs(z) <= 1.0) pts.push_back(z);
        }
    for (int a = 0; a < 4 * grid; ++a) pts.push_back(std::polar(1.0, kTwoPi * a / (4 * grid)));

    int sign = 0;
    for (const cplx z : pts) {
        const PVec p = sb.n0 + z * sb.p0;
        const double a1 = tangency_test(u, p, B1), b1 = tangency_test(iu, p, B1);
        const double a2 = tangency_test(u, p, B2), b2 = tangency_test(iu, p, B2);
        const double d = a1 * b2 - a2 * b1;
        const double scale = std::hypot(a1, b1) * std::hypot(a2, b2);
        if (!(std::abs(d) > 1e-9 * scale)) return false;
        const int s = d > 0 ? 1 : -1;
        if (sign == 0) sign = s;
        if (s != sign) return false;
    }
    return true;
}

double halton(unsigned index, unsigned base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * (index % base);
        index /= base;
    }
    return r;
}

double separability_probe(const Bisector& B1, const Bisector& B2, double eps, int samples) {
    const PVec g = common_slice_polar(B1, B2);
    if (classify(g).tag != Sign::Positive) throw DomainError("separability_probe: no common positive slice");
    if (!on_bisector(g, B1, 1e-9) || !on_bisector(g, B2, 1e-9))
        throw DomainError("separability_probe: bisectors are not cotranchal");
    if (!cotranchal_transversal(g, other_spine_point(B1, g), other_spine_point(B2, g)))
        throw DomainError("separability_probe: bisectors are not transversal");

    // Rescale B2's vertices so that g = v + w with <v,w> = 1/2.
    auto [v, w] = spine_vertices(B2.g1, B2.g2);
    const cplx alpha = 2.0 * form(g, w);
    const cplx beta = 2.0 * form(g, v);
    v *= alpha;
    w *= beta;
    const cplx k2 = alpha * std::conj(beta);
    const double k = std::sqrt(std::abs(k2));
    v /= k;
    w /= k;
    const PVec f2 = B2.focus / std::sqrt(self_form(B2.focus));
    const auto [a1, a2] = spine_vertices(B1.g1, B1.g2);

    const double lo = std::log(1e-2), hi = std::log(1e2);
    double sup = 0.0;
    for (int i = 1; i <= samples; ++i) {
        const double t = std::exp(lo + (hi - lo) * halton(i, 2));
        const double r = std::sqrt(halton(i, 3)) * (1.0 - 1e-9);
        const cplx z = std::polar(r, kTwoPi * halton(i, 5));
        const PVec gt = v / t - t * w;
        const PVec p = z * f2 + gt;
        const cplx e = eta(a1, a2, p);
        const double to_b1 = 1.0 - e.real() + std::abs(e);
        if (to_b1 >= 1.0 + eps * eps) continue;
        const double h = std::abs(1.0 / t - t) / (2.0 * std::sqrt(1.0 - r * r));
        sup = std::max(sup, h * h);
    }
    return sup;
}

}  // namespace chg
