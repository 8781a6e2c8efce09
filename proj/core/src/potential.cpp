#include "chgeom/potential.hpp"

#include <algorithm>
#include <cmath>

namespace chg {

double P(const PVec& c, const TangentRep& v) {
    if (is_isotropic(v.base)) throw DomainError("P: isotropic base point");
    const cplx pc = form(v.base, c);
    if (std::abs(pc) <= 1e-14 * v.base.norm() * c.norm()) throw DomainError("P: base orthogonal to c");
    return -(self_form(v.base) * form(v.dir, c) / (2.0 * pc)).imag();
}

double f_value(const PVec& c1, const PVec& c2, const PVec& p) {
    return 0.5 * std::arg(form(c1, p) * form(p, c2) / form(c1, c2));
}

double f_pot(const PVec& c1, const PVec& c2, const std::vector<PVec>& path) {
    const cplx c12 = form(c1, c2);
    if (std::abs(c12) == 0.0) throw DomainError("f_pot: <c1,c2> = 0");
    double total = 0.0;
    cplx prev{};
    for (std::size_t i = 0; i < path.size(); ++i) {
        const cplx z = form(c1, path[i]) * form(path[i], c2) / c12;
        if (std::abs(z) == 0.0) throw DomainError("f_pot: path meets a cut locus");
        if (i > 0) {
            const double step = std::arg(z / prev);
            if (std::abs(step) >= kPi / 2) throw DegenerateError("f_pot: branch tracking step too large");
            total += 0.5 * step;
        }
        prev = z;
    }
    return total;
}

double omega(const TangentRep& v, const TangentRep& w) {
    if (v.base != w.base) throw DomainError("omega: tangent vectors at different points");
    return (-self_form(v.base) * form(v.dir, w.dir)).imag();
}

TangentRep tangent_of_curve(const PVec& p, const PVec& dx) {
    return {p, proj_perp(p, dx) / self_form(p)};
}

Patch affine_patch(const PVec& base, const PVec& x, const PVec& y, double radius) {
    Patch s;
    s.at = [=](double a, double b) -> PVec { return base + a * x + b * y; };
    s.da = [=](double, double) -> PVec { return x; };
    s.db = [=](double, double) -> PVec { return y; };
    s.radius = radius;
    return s;
}

namespace {

template <class F>
double max_over_grid(const Patch& patch, int grid, F&& fn) {
    double worst = 0.0;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            const double a = grid == 1 ? 0.0 : -patch.radius + 2.0 * patch.radius * i / (grid - 1);
            const double b = grid == 1 ? 0.0 : -patch.radius + 2.0 * patch.radius * j / (grid - 1);
            worst = std::max(worst, fn(a, b));
        }
    return worst;
}

}  // namespace

double check_dP(const PVec& c, const Patch& patch, double h, int grid) {
    auto alpha_a = [&](double a, double b) { return P(c, tangent_of_curve(patch.at(a, b), patch.da(a, b))); };
    auto alpha_b = [&](double a, double b) { return P(c, tangent_of_curve(patch.at(a, b), patch.db(a, b))); };
    return max_over_grid(patch, grid, [&](double a, double b) {
        if (classify(patch.at(a, b)).tag != Sign::Negative) throw DomainError("check_dP: patch leaves the ball");
        const double d_alpha = (alpha_b(a + h, b) - alpha_b(a - h, b)) / (2 * h) -
                               (alpha_a(a, b + h) - alpha_a(a, b - h)) / (2 * h);
        const PVec p = patch.at(a, b);
        const double w = omega(tangent_of_curve(p, patch.da(a, b)), tangent_of_curve(p, patch.db(a, b)));
        return std::abs(d_alpha - w);
    });
}

double check_df(const PVec& c1, const PVec& c2, const Patch& patch, double h, int grid) {
    auto df = [&](const PVec& lo, const PVec& hi) {
        return 0.5 * wrap_pi(2.0 * (f_value(c1, c2, hi) - f_value(c1, c2, lo))) / (2 * h);
    };
    return max_over_grid(patch, grid, [&](double a, double b) {
        const PVec p = patch.at(a, b);
        const TangentRep ta = tangent_of_curve(p, patch.da(a, b));
        const TangentRep tb = tangent_of_curve(p, patch.db(a, b));
        const double ea = std::abs(df(patch.at(a - h, b), patch.at(a + h, b)) - (P(c1, ta) - P(c2, ta)));
        const double eb = std::abs(df(patch.at(a, b - h), patch.at(a, b + h)) - (P(c1, tb) - P(c2, tb)));
        return std::max(ea, eb);
    });
}

ToledoIntegral toledo_by_integral(const QuadrangleData& D) {
    const int n = D.params.n;
    std::vector<PVec> s(n + 2);
    s[2] = D.h1;
    s[1] = cycle_reflection(D, 1).M * s[2];
    for (int i = 2; i <= n; ++i) s[i + 1] = cycle_reflection(D, i).M * s[i];

    ToledoIntegral out{0.0, 0, {}};
    double sum = 0.0;
    for (int i = 1; i <= n; ++i) {
        const cplx pair = form(s[i + 1], s[i]);
        if (!(pair.real() > 0) || std::abs(pair.imag()) > 1e-8 * std::abs(pair))
            throw PropertyViolation("toledo_by_integral: <s_{i+1},s_i> is not positive");
        const double term = arg_2pi(form(D.q, s[i + 1]) / form(D.q, s[i]));
        out.terms.push_back(term);
        sum += term - kPi;
    }
    out.value = sum / kPi;
    out.num3 = std::lround(3.0 * out.value);
    return out;
}

}  // namespace chg
