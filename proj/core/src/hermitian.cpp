#include "chgeom/hermitian.hpp"

#include <cmath>
#include <limits>

namespace chg {

namespace {

constexpr double kPairTol = 1e-12;

double coord_norm2(const PVec& p) { return p.squaredNorm(); }

void require_nonisotropic(const PVec& p, const char* what) {
    if (is_isotropic(p)) throw DomainError(what);
}

PVec basis_vector(int i) {
    PVec e = PVec::Zero();
    e[i] = 1.0;
    return e;
}

}  // namespace

PointClass classify(const PVec& p, double tol) {
    const double n2 = coord_norm2(p);
    if (!(n2 > 1e-300)) throw DomainError("classify: zero vector");
    const double m = self_form(p) / n2;
    if (m < -tol) return {Sign::Negative, m};
    if (m > tol) return {Sign::Positive, m};
    return {Sign::Isotropic, m};
}

bool is_isotropic(const PVec& p, double tol) {
    return std::abs(self_form(p)) <= tol * coord_norm2(p);
}

bool same_point(const PVec& a, const PVec& b, double tol) {
    const double scale = a.norm() * b.norm();
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (std::abs(a[i] * b[j] - a[j] * b[i]) > tol * scale) return false;
    return true;
}

double tance(const PVec& p, const PVec& q) {
    const cplx pq = form(p, q);
    if (is_isotropic(p) || is_isotropic(q)) {
        if (std::abs(pq) <= kPairTol * p.norm() * q.norm()) return 1.0;
        return std::numeric_limits<double>::infinity();
    }
    return std::norm(pq) / (self_form(p) * self_form(q));
}

PVec proj_perp(const PVec& p, const PVec& v) {
    require_nonisotropic(p, "proj_perp: isotropic p");
    return v - (form(v, p) / self_form(p)) * p;
}

PVec proj_par(const PVec& p, const PVec& v) {
    require_nonisotropic(p, "proj_par: isotropic p");
    return (form(v, p) / self_form(p)) * p;
}

Projection project(const PVec& p, const PVec& v) {
    Projection r{proj_perp(p, v), proj_par(p, v), false};
    r.degenerate = r.perp.norm() <= 1e-12 * v.norm();
    return r;
}

Isometry reflection(const PVec& p) {
    require_nonisotropic(p, "reflection: isotropic p");
    const double pp = self_form(p);
    Mat3 M;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double jj = j == 0 ? -1.0 : 1.0;
            M(i, j) = 2.0 * p[i] * jj * std::conj(p[j]) / pp - (i == j ? 1.0 : 0.0);
        }
    return Isometry(M);
}

cplx eta(const PVec& v1, const PVec& v2, const PVec& p) {
    require_nonisotropic(p, "eta: isotropic p");
    const cplx v12 = form(v1, v2);
    if (std::abs(v12) <= kPairTol * v1.norm() * v2.norm())
        throw DegenerateError("eta: <v1,v2> = 0");
    return form(v1, p) * form(p, v2) / (v12 * self_form(p));
}

double dist(const PVec& p, const PVec& q) {
    if (classify(p).tag != Sign::Negative || classify(q).tag != Sign::Negative)
        throw DomainError("dist: points must be negative");
    return std::acosh(std::sqrt(std::max(1.0, tance(p, q))));
}

double tance_to_slice(const PVec& q, const PVec& p) {
    if (classify(p).tag != Sign::Positive || classify(q).tag != Sign::Negative)
        throw DomainError("tance_to_slice: need positive p and negative q");
    return 1.0 - tance(p, q);
}

double tance_to_bisector(const PVec& p, const PVec& v1, const PVec& v2) {
    if (classify(p).tag != Sign::Negative) throw DomainError("tance_to_bisector: p not negative");
    if (!is_isotropic(v1, 1e-9) || !is_isotropic(v2, 1e-9))
        throw DegenerateError("tance_to_bisector: vertices must be isotropic");
    const cplx e = eta(v1, v2, p);
    return 1.0 - e.real() + std::abs(e);
}

PVec unit(const PVec& p) {
    const double s = std::abs(self_form(p));
    if (!(s > 0)) throw DomainError("unit: isotropic vector");
    return p / std::sqrt(s);
}

PVec midpoint_polar(const PVec& p1, const PVec& p2) {
    if (classify(p1).tag != Sign::Positive || classify(p2).tag != Sign::Positive)
        throw DomainError("midpoint_polar: points must be positive");
    const PVec a = unit(p1);
    PVec b = unit(p2);
    const cplx c = form(b, a);
    if (std::abs(c) <= 1.0 + 1e-12) throw DomainError("midpoint_polar: slices are not ultraparallel");
    b *= std::abs(c) / c;  // <a,b> becomes real positive
    const double t = form(a, b).real();
    return (a + b) / std::sqrt(2.0 * t + 2.0);
}

PVec fix_phase(const PVec& p) {
    int best = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(p[i]) > std::abs(p[best]) * (1.0 + 1e-12)) best = i;
    const double a = std::abs(p[best]);
    if (!(a > 0)) return p;
    return p * (std::conj(p[best]) / a);
}

SliceBasis slice_basis(const PVec& g) {
    if (classify(g).tag != Sign::Positive) throw DomainError("slice_basis: g not positive");
    const double gg = self_form(g);
    PVec n0 = basis_vector(0) - (form(basis_vector(0), g) / gg) * g;
    n0 = fix_phase(n0 / std::sqrt(-self_form(n0)));

    PVec best = PVec::Zero();
    for (int i = 1; i < 3; ++i) {
        const PVec e = basis_vector(i);
        PVec x = e - (form(e, g) / gg) * g;
        x += form(x, n0) * n0;  // <n0,n0> = -1
        if (x.norm() > best.norm()) best = x;
    }
    const PVec p0 = fix_phase(best / std::sqrt(self_form(best)));
    return {n0, p0};
}

Gram3 gram(const PVec& a, const PVec& b, const PVec& c) {
    const PVec* v[3] = {&a, &b, &c};
    Gram3 g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g.G(i, j) = form(*v[i], *v[j]);
    return g;
}

PVec orthogonal_to(const PVec& a, const PVec& b) {
    const PVec ja(-std::conj(a[0]), std::conj(a[1]), std::conj(a[2]));
    const PVec jb(-std::conj(b[0]), std::conj(b[1]), std::conj(b[2]));
    return PVec(ja[1] * jb[2] - ja[2] * jb[1], ja[2] * jb[0] - ja[0] * jb[2], ja[0] * jb[1] - ja[1] * jb[0]);
}

TangentRep make_tangent(const PVec& base, const PVec& v) {
    return {base, proj_perp(base, v)};
}

PVec geodesic_point(const PVec& v1, const PVec& v2, double t) {
    const cplx c = form(v1, v2);
    if (std::abs(c) <= kPairTol * v1.norm() * v2.norm())
        throw DegenerateError("geodesic_point: <v1,v2> = 0");
    const PVec w2 = v2 * (-0.5 / std::conj(c));
    return std::exp(-t) * v1 + std::exp(t) * w2;
}

}  // namespace chg
