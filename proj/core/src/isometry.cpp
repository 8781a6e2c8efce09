#include "chgeom/isometry.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>

namespace chg {

namespace {

const Mat3& Jmat() {
    static const Mat3 J = Eigen::Vector3cd(-1.0, 1.0, 1.0).asDiagonal();
    return J;
}

PVec cross3(const PVec& a, const PVec& b) {
    return PVec(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]);
}

// Null vector of the rank-two matrix B.
PVec null_vector(const Mat3& B) {
    PVec best = PVec::Zero();
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
            const PVec ra = B.row(a).transpose();
            const PVec rb = B.row(b).transpose();
            const PVec c = cross3(ra, rb);
            if (c.norm() > best.norm()) best = c;
        }
    return best / best.norm();
}

}  // namespace

PVec act(const Isometry& I, const PVec& p) { return I.M * p; }

Isometry compose(const Isometry& a, const Isometry& b) { return Isometry(a.M * b.M); }

Isometry operator*(const Isometry& a, const Isometry& b) { return compose(a, b); }

Isometry inverse(const Isometry& I) { return Isometry(Jmat() * I.M.adjoint() * Jmat()); }

cplx det(const Isometry& I) { return I.M.determinant(); }

bool is_form_unitary(const Isometry& I, double tol) {
    const Mat3 d = I.M.adjoint() * Jmat() * I.M - Jmat();
    return d.cwiseAbs().maxCoeff() < tol * std::max(1.0, I.M.cwiseAbs2().sum());
}

cplx SliceAction::mobius(cplx z) const {
    return (A(1, 0) + A(1, 1) * z) / (A(0, 0) + A(0, 1) * z);
}

const char* to_string(SliceTag t) {
    switch (t) {
        case SliceTag::Elliptic: return "elliptic";
        case SliceTag::Parabolic: return "parabolic";
        case SliceTag::Hyperbolic: return "hyperbolic";
        case SliceTag::Identity: return "identity";
    }
    return "?";
}

SliceAction restrict_to_slice(const Isometry& I, const PVec& g) {
    const PVec Ig = act(I, g);
    if (!same_point(Ig, g, 1e-8)) throw StabilizationError("isometry does not stabilize the slice");
    SliceAction s;
    s.g = g;
    s.basis = slice_basis(g);
    for (int j = 0; j < 2; ++j) {
        const PVec col = act(I, j == 0 ? s.basis.n0 : s.basis.p0);
        s.A(0, j) = -form(col, s.basis.n0);
        s.A(1, j) = form(col, s.basis.p0);
    }
    s.A /= std::sqrt(s.A.determinant());
    return s;
}

SliceClass classify(const SliceAction& s, double tol) {
    const Mat2& A = s.A;
    const cplx tr = A.trace();
    SliceClass c;
    c.abs_trace = std::abs(tr);

    // Eigenvalues of an SL(2) matrix.
    const cplx root = std::sqrt(tr * tr - 4.0);
    const cplx lam[2] = {(tr + root) / 2.0, (tr - root) / 2.0};
    auto eigvec = [&](cplx l) {
        Eigen::Vector2cd v1(A(0, 1), l - A(0, 0));
        Eigen::Vector2cd v2(l - A(1, 1), A(1, 0));
        return v1.norm() >= v2.norm() ? v1 : v2;
    };

    if (std::abs(c.abs_trace - 2.0) < tol) {
        const double off = std::max({std::abs(A(0, 1)), std::abs(A(1, 0)),
                                     std::abs(A(0, 0) - A(1, 1))});
        if (off < std::sqrt(tol)) {
            c.tag = SliceTag::Identity;
            return c;
        }
        c.tag = SliceTag::Parabolic;
        const Eigen::Vector2cd v = eigvec(tr / 2.0);
        const double fixed = arg_2pi(v[1] / v[0]);
        c.fixed_angles = {fixed};
        const cplx z = std::polar(1.0, fixed + kPi);
        const double step = wrap_pi(std::arg(s.mobius(z)) - std::arg(z));
        c.parabolic = step < 0 ? ParabolicKind::L : ParabolicKind::R;
        return c;
    }
    if (c.abs_trace < 2.0) {
        c.tag = SliceTag::Elliptic;
        for (const cplx l : lam) {
            const Eigen::Vector2cd v = eigvec(l);
            if (std::norm(v[1]) < std::norm(v[0])) {
                c.center = v[1] / v[0];
                c.rotation_angle = wrap_pi(-2.0 * std::arg(l));
                break;
            }
        }
        return c;
    }
    c.tag = SliceTag::Hyperbolic;
    for (const cplx l : lam) {
        const Eigen::Vector2cd v = eigvec(l);
        c.fixed_angles.push_back(arg_2pi(v[1] / v[0]));
    }
    return c;
}

double boundary_angle(const PVec& g, const PVec& x) {
    const double scale = x.norm() * g.norm();
    if (!is_isotropic(x, 1e-9) || std::abs(form(x, g)) > 1e-9 * scale)
        throw DomainError("boundary_angle: x is not on the slice boundary");
    const SliceBasis b = slice_basis(g);
    return arg_2pi(form(x, b.p0) / -form(x, b.n0));
}

PVec boundary_point(const PVec& g, double theta) {
    const SliceBasis b = slice_basis(g);
    return std::polar(1.0, theta) * b.p0 + b.n0;
}

int cyclic_order(double t1, double t2, double t3, double sep) {
    if (std::abs(wrap_pi(t1 - t2)) < sep || std::abs(wrap_pi(t2 - t3)) < sep ||
        std::abs(wrap_pi(t3 - t1)) < sep)
        throw DegenerateError("cyclic_order: near-coincident angles");
    return wrap_2pi(t2 - t1) < wrap_2pi(t3 - t1) ? 0 : 1;
}

int l_part_indicator(const PVec& x, const Isometry& I, const PVec& g) {
    const SliceAction s = restrict_to_slice(I, g);
    const SliceClass c = classify(s);
    if (c.tag == SliceTag::Elliptic) return 0;
    if (c.tag == SliceTag::Identity || c.parabolic == ParabolicKind::R) return 1;
    const double th = boundary_angle(g, x);
    for (const double f : c.fixed_angles)
        if (std::abs(wrap_pi(th - f)) < kAngleSeparation)
            throw DegenerateError("l_part_indicator: x is a fixed point");
    const double moved = boundary_angle(g, act(I, x));
    return wrap_pi(moved - th) < 0 ? 0 : 1;
}

std::array<cplx, 3> cubic_roots(cplx a, cplx b, cplx c) {
    const cplx P = b - a * a / 3.0;
    const cplx Q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const cplx disc = std::sqrt(Q * Q / 4.0 + P * P * P / 27.0);
    cplx u3 = -Q / 2.0 + disc;
    if (std::abs(-Q / 2.0 - disc) > std::abs(u3)) u3 = -Q / 2.0 - disc;
    const cplx omega = std::polar(1.0, kTwoPi / 3.0);
    std::array<cplx, 3> r;
    const cplx u = std::pow(u3, 1.0 / 3.0);
    for (int k = 0; k < 3; ++k) {
        const cplx uk = u * std::pow(omega, k);
        r[k] = (std::abs(uk) > 0 ? uk - P / (3.0 * uk) : cplx{}) - a / 3.0;
    }
    for (cplx& z : r)
        for (int it = 0; it < 2; ++it) {
            const cplx f = ((z + a) * z + b) * z + c;
            const cplx df = (3.0 * z + 2.0 * a) * z + b;
            if (std::abs(df) > 0) z -= f / df;
        }
    return r;
}

std::array<EigenPair, 3> eigensystem3(const Isometry& I) {
    const Mat3& M = I.M;
    const cplx tr = M.trace();
    const cplx minors = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0) + M(0, 0) * M(2, 2) -
                        M(0, 2) * M(2, 0) + M(1, 1) * M(2, 2) - M(1, 2) * M(2, 1);
    const std::array<cplx, 3> roots = cubic_roots(-tr, minors, -M.determinant());
    const double scale = std::max(1.0, M.norm());
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (std::abs(roots[i] - roots[j]) < 1e-8 * scale)
                throw DegenerateError("eigensystem3: near-degenerate spectrum");
    std::array<EigenPair, 3> out;
    for (int i = 0; i < 3; ++i) {
        const Mat3 B = M - roots[i] * Mat3::Identity();
        out[i] = {roots[i], null_vector(B)};
    }
    return out;
}

}  // namespace chg
