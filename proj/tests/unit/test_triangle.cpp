#include <chgeom/triangle.hpp>

#include <doctest.h>

#include <cmath>

#include "properties.hpp"
#include "random.hpp"

using namespace chg;
using chgtest::Rng;

namespace {

double locus_eps0(double a, double b, double c) { return (a * a + b * b + c * c - 1.0) / (2.0 * a * b * c); }

TriangleInv on_locus(double a, double b, double c, double sign1) {
    const double e0 = locus_eps0(a, b, c);
    return {a, b, c, cplx(e0, sign1 * std::sqrt(1.0 - e0 * e0))};
}

}  // namespace

TEST_SUITE("triangle") {
    TEST_CASE("invariants under relabeling and rescaling") {
        Rng rng(31);
        for (int s = 0; s < 200; ++s) {
            const TrianglePolars T = chgtest::random_triangle(rng);
            const TriangleInv I = invariants(T);
            const TriangleInv cyc = invariants({T.g2, T.g3, T.g1});
            CHECK(cyc.t12 == doctest::Approx(I.t23));
            CHECK(cyc.t23 == doctest::Approx(I.t31));
            CHECK(cyc.t31 == doctest::Approx(I.t12));
            CHECK(std::abs(cyc.eps - I.eps) < 1e-12);
            const TriangleInv odd = invariants({T.g2, T.g1, T.g3});
            CHECK(std::abs(odd.eps - std::conj(I.eps)) < 1e-12);
            const TriangleInv sc = invariants({T.g1 * rng.cnormal(), T.g2 * rng.cnormal() * 5.0, T.g3 * rng.cnormal()});
            CHECK(sc.t12 == doctest::Approx(I.t12).epsilon(1e-12));
            CHECK(sc.t23 == doctest::Approx(I.t23).epsilon(1e-12));
            CHECK(sc.t31 == doctest::Approx(I.t31).epsilon(1e-12));
            CHECK(std::abs(sc.eps - I.eps) < 1e-12);
        }
    }

    TEST_CASE("normalized representatives reproduce the Gram matrix") {
        Rng rng(32);
        for (int s = 0; s < 100; ++s) {
            const TrianglePolars T = chgtest::random_triangle(rng);
            const TriangleInv I = invariants(T);
            const TrianglePolars N = normalized(T);
            CHECK(std::abs(form(N.g1, N.g1) - 1.0) < 1e-12);
            CHECK(std::abs(form(N.g1, N.g2) - I.t12) < 1e-10 * I.t12);
            CHECK(std::abs(form(N.g2, N.g3) - I.t23) < 1e-10 * I.t23);
            CHECK(std::abs(form(N.g3, N.g1) - I.t31 * I.eps) < 1e-10 * I.t31);
        }
    }

    TEST_CASE("transversality and orientation") {
        const TriangleInv I = on_locus(1.2, 1.5, 1.5, -1.0);
        CHECK(I.d() == doctest::Approx(0.0));
        CHECK(is_transversal(I));
        CHECK(is_ccw(I));
        CHECK_FALSE(is_ccw(on_locus(1.2, 1.5, 1.5, 1.0)));

        TriangleInv real = I;
        real.eps = cplx(I.eps0(), 0.0);
        CHECK_FALSE(is_ccw(real));
        CHECK_FALSE(is_ccw({real.t12, real.t23, real.t31, std::conj(real.eps)}));

        Rng rng(33);
        for (int s = 0; s < 200; ++s) {
            const TriangleInv C = invariants(chgtest::random_cplane_triangle(rng));
            CHECK(std::abs(C.d()) < 1e-8);
            if (C.eps0() * C.eps0() < 1.0 - 1e-6) CHECK(is_transversal(C));
        }
    }

    TEST_CASE("absolute trace on the C-plane locus") {
        const TriangleInv I = on_locus(1.3, 1.7, 2.1, -1.0);
        CHECK(holonomy_abs_trace(I) == doctest::Approx(std::sqrt(2.0 * (1.0 + I.eps0()))));
        // eps = -1 gives a half turn.
        CHECK(holonomy_abs_trace({1.5, 1.5, 1.5, cplx(-1.0, 0.0)}) == doctest::Approx(0.0));
        // Equilateral triangles shrinking to a point: rotation tends to 0.
        double prev = kPi;
        for (double t : {2.0, 1.1, 1.01, 1.0001}) {
            const double rot = 2.0 * std::acos(std::min(1.0, holonomy_abs_trace(on_locus(t, t, t, -1.0)) / 2.0));
            CHECK(rot < prev);
            prev = rot;
        }
        CHECK(prev < 0.05);
    }

    TEST_CASE("holonomy trace three ways") {
        const chgtest::PropertyResult r = chgtest::trace_agreement(41, 2000);
        CHECK(r.ok());
        CHECK(r.worst < 1e-9);
        const chgtest::PropertyResult a = chgtest::abs_trace_agreement(42, 2000);
        CHECK(a.ok());
        CHECK(a.worst < 1e-9);
    }

    TEST_CASE("holonomy is form-unitary and preserves the first slice") {
        Rng rng(34);
        for (int s = 0; s < 100; ++s) {
            const TrianglePolars T = chgtest::random_triangle(rng);
            const Isometry H = holonomy(T);
            CHECK(is_form_unitary(H, 1e-9));
            CHECK(same_point(act(H, T.g1), T.g1, 1e-8));
        }
    }

    TEST_CASE("classification") {
        Rng rng(35);
        int hyperbolic = 0;
        for (int s = 0; s < 500 && hyperbolic < 5; ++s) {
            const TrianglePolars T = chgtest::random_triangle(rng);
            const TriangleInv I = invariants(T);
            if (holonomy_abs_trace(I) < 2.1) continue;
            CHECK(classify_triangle(T).tag == SliceTag::Hyperbolic);
            ++hyperbolic;
        }
        CHECK(hyperbolic == 5);
        const chgtest::PropertyResult f = chgtest::no_forbidden_holonomy(43, 5000);
        CHECK(f.ok());
    }

    TEST_CASE("C-plane rotation equals minus twice the area") {
        const chgtest::PropertyResult r = chgtest::cplane_rotation(44, 1000);
        CHECK(r.ok());
        CHECK(r.worst < 1e-8);
        Rng rng(36);
        CHECK_THROWS_AS(cplane_area(chgtest::random_triangle(rng)), DomainError);
    }

    TEST_CASE("deformation path") {
        const TriangleInv I = on_locus(1.2, 1.5, 1.5, -1.0);
        REQUIRE(region_member(I.eps0(), 1.2, 1.5, 1.5, 1e-12));
        CHECK(deformation_path(I.eps0(), 1.2, 1.5, 1.5, 1e-2).size() == 1);

        const double e = 0.85, a = 1.2, b = 1.6, c = 1.4;
        REQUIRE(region_member(e, a, b, c));
        const std::vector<RegionPoint> path = deformation_path(e, a, b, c, 1e-3);
        CHECK(path.size() > 1);
        for (const RegionPoint& q : path) CHECK(region_member(q[0], q[1], q[2], q[3], 1e-9));
        const RegionPoint& last = path.back();
        CHECK(last[2] == doctest::Approx(last[3]));
        const TriangleInv end{last[1], last[2], last[3], cplx(last[0], 0.0)};
        CHECK(std::abs(end.d()) < 1e-9);
        for (std::size_t i = 1; i < path.size(); ++i) {
            double jump = 0.0;
            for (int k = 0; k < 4; ++k) jump = std::max(jump, std::abs(path[i][k] - path[i - 1][k]));
            CHECK(jump < 5e-3);
        }
        CHECK_THROWS_AS(deformation_path(0.1, 1.2, 1.5, 1.5, 1e-2), DomainError);
    }
}
