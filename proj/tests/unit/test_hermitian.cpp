#include <chgeom/hermitian.hpp>
#include <chgeom/isometry.hpp>

#include <doctest.h>

#include <cmath>

#include "properties.hpp"
#include "random.hpp"

using namespace chg;
using chgtest::Rng;

namespace {

// Minimum of f over a log grid in t, refined by golden-section search.
template <class F>
double minimize_log(F&& f, double lo, double hi, int grid) {
    int best = 0;
    double fbest = f(lo);
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 1; i < grid; ++i) {
        const double v = f(std::exp(a + (b - a) * i / (grid - 1)));
        if (v < fbest) {
            fbest = v;
            best = i;
        }
    }
    double l = a + (b - a) * std::max(0, best - 1) / (grid - 1);
    double r = a + (b - a) * std::min(grid - 1, best + 1) / (grid - 1);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 200; ++it) {
        const double x1 = r - phi * (r - l), x2 = l + phi * (r - l);
        if (f(std::exp(x1)) < f(std::exp(x2)))
            r = x2;
        else
            l = x1;
    }
    return std::min(fbest, f(std::exp(0.5 * (l + r))));
}

}  // namespace

TEST_SUITE("hermitian") {
    TEST_CASE("form on basis vectors") {
        CHECK(form(PVec(1, 0, 0), PVec(1, 0, 0)) == cplx(-1));
        CHECK(form(PVec(0, 1, 0), PVec(0, 0, 1)) == cplx(0));
        CHECK(form(PVec(1, 1, 0), PVec(1, -1, 0)) == cplx(-2));
    }

    TEST_CASE("form is hermitian and linear in the first argument") {
        Rng rng(11);
        for (int i = 0; i < 200; ++i) {
            const PVec x = rng.vec(), y = rng.vec(), z = rng.vec();
            const cplx a = rng.cnormal();
            CHECK(std::abs(form(x, y) - std::conj(form(y, x))) < 1e-12);
            CHECK(std::abs(form(a * x + z, y) - (a * form(x, y) + form(z, y))) < 1e-11);
            CHECK(std::abs(form(x, a * y) - std::conj(a) * form(x, y)) < 1e-11);
        }
    }

    TEST_CASE("tance") {
        CHECK(tance(PVec(1, 0, 0), PVec(1, 0, 0)) == doctest::Approx(1.0));
        CHECK(tance(PVec(1, 0, 0), PVec(0, 1, 0)) == doctest::Approx(0.0));
        CHECK(tance(PVec(1, 0, 0), PVec(2, 1, 0)) == doctest::Approx(4.0 / 3.0));
    }

    TEST_CASE("tance conventions at isotropic points") {
        const PVec iso(1, 1, 0);
        CHECK(tance(iso, PVec(1, 1, 0)) == 1.0);
        CHECK(std::isinf(tance(iso, PVec(1, 0, 0))));
    }

    TEST_CASE("tance is projectively invariant") {
        Rng rng(12);
        for (int i = 0; i < 200; ++i) {
            const PVec p = rng.vec(), q = rng.vec();
            const cplx a = rng.cnormal(), b = rng.cnormal();
            const double t = tance(p, q);
            CHECK(tance(a * p, b * q) == doctest::Approx(t).epsilon(1e-10));
        }
    }

    TEST_CASE("classify") {
        CHECK(classify(PVec(1, 0, 0)).tag == Sign::Negative);
        CHECK(classify(PVec(1, 1, 0)).tag == Sign::Isotropic);
        CHECK(classify(PVec(1, 2, 2)).tag == Sign::Positive);
        CHECK(self_form(PVec(1, 2, 2)) == doctest::Approx(7.0));
        CHECK_THROWS_AS(classify(PVec(0, 0, 0)), DomainError);
    }

    TEST_CASE("orthogonal projections") {
        CHECK((proj_perp(PVec(1, 0, 0), PVec(1, 1, 0)) - PVec(0, 1, 0)).norm() < 1e-15);
        CHECK((proj_perp(PVec(0, 0, 1), PVec(1, 2, 3)) - PVec(1, 2, 0)).norm() < 1e-15);
        const Projection d = project(PVec(0, 1, 0), PVec(0, 1, 0));
        CHECK(d.degenerate);
        CHECK(d.perp.norm() == 0.0);
        CHECK_THROWS_AS(proj_perp(PVec(1, 1, 0), PVec(1, 0, 0)), DomainError);

        Rng rng(13);
        for (int i = 0; i < 200; ++i) {
            const PVec p = rng.vec(), v = rng.vec();
            if (is_isotropic(p, 1e-3)) continue;
            const Projection pr = project(p, v);
            CHECK(std::abs(form(pr.perp, p)) < 1e-10 * v.norm() * p.norm());
            CHECK((pr.perp + pr.par - v).norm() < 1e-12 * v.norm());
        }
    }

    TEST_CASE("reflection") {
        const Isometry R = reflection(PVec(0, 1, 0));
        CHECK((R.M - Mat3(PVec(-1, 1, -1).asDiagonal())).norm() < 1e-15);
        CHECK((act(reflection(PVec(0, 1, 1)), PVec(0, 1, 0)) - PVec(0, 0, 1)).norm() < 1e-15);
        CHECK_THROWS_AS(reflection(PVec(1, 0, 1)), DomainError);
    }

    TEST_CASE("reflection is an involutive isometry fixing p and negating its complement") {
        Rng rng(14);
        for (int i = 0; i < 200; ++i) {
            const PVec p = rng.vec();
            if (is_isotropic(p, 1e-3)) continue;
            const Isometry R = reflection(p);
            CHECK(is_form_unitary(R, 1e-9));
            CHECK(((R * R).M - Mat3::Identity()).norm() < 1e-9);
            CHECK((act(R, p) - p).norm() < 1e-10 * p.norm());
            const PVec x = proj_perp(p, rng.vec());
            CHECK((act(R, x) + x).norm() < 1e-9 * std::max(1.0, x.norm()));
        }
    }

    TEST_CASE("eta") {
        CHECK(eta(PVec(1, 1, 0), PVec(1, -1, 0), PVec(1, 0, 0)) == cplx(0.5));
        CHECK_THROWS_AS(eta(PVec(1, 1, 0), PVec(1, 1, 0), PVec(1, 0, 0)), DegenerateError);
    }

    TEST_CASE("dist") {
        CHECK(dist(PVec(1, 0, 0), PVec(2, 1, 0)) == doctest::Approx(0.549306).epsilon(1e-6));
        CHECK(dist(PVec(1, 0, 0), PVec(2, 1, 0)) == doctest::Approx(std::acosh(std::sqrt(4.0 / 3.0))));
        CHECK_THROWS_AS(dist(PVec(0, 1, 0), PVec(1, 0, 0)), DomainError);
    }

    TEST_CASE("geodesic_point has unit speed") {
        Rng rng(15);
        for (int i = 0; i < 50; ++i) {
            PVec v1 = PVec(1, std::polar(1.0, rng.uniform(0, kTwoPi)), 0);
            PVec v2 = PVec(1, 0, std::polar(1.0, rng.uniform(0, kTwoPi)));
            const double t = rng.uniform(-3, 3);
            CHECK(dist(geodesic_point(v1, v2, 0), geodesic_point(v1, v2, t)) ==
                  doctest::Approx(std::abs(t)).epsilon(1e-9));
        }
    }

    TEST_CASE("tance_to_slice") {
        CHECK(tance_to_slice(PVec(2, 1, 0), PVec(0, 0, 1)) == doctest::Approx(1.0));
        CHECK(tance_to_slice(PVec(1, 0, 0), PVec(0, 1, 2)) == doctest::Approx(1.0));
        CHECK(tance_to_slice(PVec(2, 1, 0), PVec(1, 0, 2)) == doctest::Approx(13.0 / 9.0));
        CHECK_THROWS_AS(tance_to_slice(PVec(1, 0, 0), PVec(1, 0, 0)), DomainError);
    }

    TEST_CASE("tance_to_slice matches a minimization over the slice") {
        Rng rng(16);
        for (int i = 0; i < 30; ++i) {
            const PVec q = chgtest::random_negative(rng), p = chgtest::random_positive(rng);
            const SliceBasis b = slice_basis(p);
            double best = 1e300;
            for (int a = 0; a < 200; ++a)
                for (int r = 0; r < 200; ++r) {
                    const cplx z = std::polar(0.9999 * r / 199.0, kTwoPi * a / 200.0);
                    best = std::min(best, tance(q, b.n0 + z * b.p0));
                }
            const double v = tance_to_slice(q, p);
            CHECK(v <= best + 1e-12);
            CHECK(v == doctest::Approx(best).epsilon(2e-3));
        }
    }

    TEST_CASE("tance_to_bisector") {
        const PVec v1(1, 1, 0), v2(1, -1, 0);
        // eta = 1/2 at (1,0,0): the point lies on the real spine.
        CHECK(tance_to_bisector(PVec(1, 0, 0), v1, v2) == doctest::Approx(1.0));
        // A point of the slice through (1,0,0).
        CHECK(tance_to_bisector(PVec(1, 0, 0.5), v1, v2) == doctest::Approx(1.0));
        // Off the bisector the value exceeds 1.
        CHECK(tance_to_bisector(PVec(1, cplx(0, 0.3), 0), v1, v2) > 1.0);
        CHECK_THROWS_AS(tance_to_bisector(PVec(0, 1, 0), v1, v2), DomainError);
    }

    TEST_CASE("tance_to_bisector matches the minimum over its slices") {
        Rng rng(17);
        int checked = 0;
        while (checked < 40) {
            const PVec g1 = chgtest::random_positive(rng), g2 = chgtest::random_positive(rng);
            if (!(tance(g1, g2) > 1.05)) continue;
            // Isotropic vertices of the complex spine through g1, g2, scaled to <a,b> = 1/2.
            const cplx c = form(g1, g2);
            const PVec h2 = g2 * (c / std::abs(c));
            const double A = self_form(g1), B = self_form(h2), C = std::abs(c);
            const double sq = std::sqrt(C * C - A * B);
            PVec a = g1 + ((-C + sq) / B) * h2, b = g1 + ((-C - sq) / B) * h2;
            b /= 2.0 * std::conj(form(a, b));
            const PVec p = chgtest::random_negative(rng, 0.8);
            auto slice_ta = [&](double t) {
                const PVec g = a / t + t * b;  // polar of the slice through the spine point a/t - t b
                return 1.0 - tance(g, p);
            };
            const double oracle = minimize_log(slice_ta, 1e-3, 1e3, 10000);
            CHECK(tance_to_bisector(p, a, b) == doctest::Approx(oracle).epsilon(1e-6));
            ++checked;
        }
    }

    TEST_CASE("midpoint_polar") {
        const PVec m = midpoint_polar(PVec(1, 1, 1), PVec(-1, 1, 1));
        CHECK(same_point(m, PVec(0, 1, 1)));
        CHECK(self_form(m) == doctest::Approx(1.0));
        // ta = 1/9: these slices intersect.
        CHECK_THROWS_AS(midpoint_polar(PVec(0, std::sqrt(2.0), 1), PVec(0, std::sqrt(2.0), -1)), DomainError);

        Rng rng(18);
        for (int i = 0; i < 100; ++i) {
            const PVec p1 = chgtest::random_positive(rng), p2 = chgtest::random_positive(rng);
            if (!(tance(p1, p2) > 1.01)) continue;
            const PVec mm = midpoint_polar(p1, p2);
            CHECK(same_point(act(reflection(mm), p1), p2, 1e-8));
            CHECK(tance(mm, p1) == doctest::Approx(tance(mm, p2)).epsilon(1e-9));
        }
    }

    TEST_CASE("slice_basis") {
        const SliceBasis b = slice_basis(PVec(0, 0, 1));
        CHECK((b.n0 - PVec(1, 0, 0)).norm() < 1e-15);
        CHECK((b.p0 - PVec(0, 1, 0)).norm() < 1e-15);
        CHECK_THROWS_AS(slice_basis(PVec(1, 0, 0)), DomainError);

        Rng rng(19);
        for (int i = 0; i < 200; ++i) {
            const PVec g = chgtest::random_positive(rng);
            const SliceBasis s = slice_basis(g);
            CHECK(self_form(s.n0) == doctest::Approx(-1.0));
            CHECK(self_form(s.p0) == doctest::Approx(1.0));
            CHECK(std::abs(form(s.n0, g)) < 1e-10 * g.norm());
            CHECK(std::abs(form(s.p0, g)) < 1e-10 * g.norm());
            CHECK(std::abs(form(s.n0, s.p0)) < 1e-10);
        }
    }

    TEST_CASE("orthogonal_to and gram") {
        Rng rng(20);
        for (int i = 0; i < 100; ++i) {
            const PVec a = rng.vec(), b = rng.vec();
            const PVec f = orthogonal_to(a, b);
            CHECK(std::abs(form(a, f)) < 1e-12 * a.norm() * f.norm());
            CHECK(std::abs(form(b, f)) < 1e-12 * b.norm() * f.norm());
            const Gram3 G = gram(a, b, f);
            CHECK(std::abs(G(0, 1) - std::conj(G(1, 0))) < 1e-12);
        }
    }

    TEST_CASE("arclength of real segments equals acosh sqrt(ta)") {
        const chgtest::PropertyResult r = chgtest::arclength_agreement(21, 1000);
        CHECK(r.ok());
        CHECK(r.worst < 1e-6);
    }
}
