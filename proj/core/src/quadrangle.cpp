#include "chgeom/quadrangle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "chgeom/bisector.hpp"

namespace chg {

namespace {

struct Angles {
    std::array<long, 3> a;  // u_i = root_3n(a_i)
    std::array<long, 3> b;  // w_i = root_3n(b_i)
};

Angles exponents(const Params& P) {
    const long np = static_cast<long>(P.n) * P.p;
    return {{2 * np - P.k, 2 * np - P.k - 3, 2 * np + 2L * P.k + 3}, {P.l, P.l + 3L, -(2L * P.l + 3)}};
}

// Accumulates the parts of one condition.
struct Acc {
    ConditionResult& r;
    double margin;
    double band;

    void strict(double s) { part(s, s > margin); }
    void non_strict(double s) { part(s, s >= kNonStrictSlack); }
    void part(double s, bool ok) {
        if (!r.evaluated) {
            r.evaluated = true;
            r.pass = true;
            r.slack = s;
        }
        r.slack = std::min(r.slack, s);
        r.pass = r.pass && ok;
        if (std::abs(s) < band) r.marginal = true;
    }
    void fail() { part(-std::numeric_limits<double>::infinity(), false); }
};

void finish(ConditionReport& rep) {
    rep.accepted = true;
    rep.marginal = false;
    rep.first_failure = -1;
    for (int c = 0; c < kCondCount; ++c) {
        const ConditionResult& r = rep.cond[c];
        if (!r.evaluated || !r.pass) {
            rep.accepted = false;
            if (rep.first_failure < 0) rep.first_failure = c;
        }
        if (r.evaluated && r.marginal) rep.marginal = true;
    }
}

// Q1..Q3; fills the eigen-angles and v.
bool early_conditions(const Params& P, double margin, double band, ConditionReport& rep, std::array<cplx, 3>& u,
                      std::array<cplx, 3>& w, cplx& v) {
    Acc q1{rep.cond[Q1], margin, band};
    q1.part(P.valid() ? 1.0 : -1.0, P.valid());
    if (!P.valid()) return false;

    const Angles A = exponents(P);
    std::array<cplx, 3> u2, w2;
    for (int i = 0; i < 3; ++i) {
        u[i] = root_3n(A.a[i], P.n);
        w[i] = root_3n(A.b[i], P.n);
        u2[i] = root_3n(2 * A.a[i], P.n);
        w2[i] = root_3n(2 * A.b[i], P.n);
    }
    v = (u2[0] + u2[1] + u2[2] + w2[0] + w2[1] + w2[2]) / 2.0;

    Acc q2{rep.cond[Q2], margin, band};
    q2.strict((w[1] * w2[1]).real() - (v * w[1]).real());
    q2.non_strict((w2[0] * w[2]).real() - (v * w[2]).real());
    if (!rep.cond[Q2].pass) return false;

    Acc q3{rep.cond[Q3], margin, band};
    double mn = std::numeric_limits<double>::infinity();
    for (const cplx a : u2)
        for (const cplx b : w2) mn = std::min(mn, std::abs(a + b));
    q3.strict(mn);
    return rep.cond[Q3].pass;
}

double q8_value(const PVec& a, const PVec& x, const PVec& b) {
    const double scale = x.squaredNorm() * a.norm() * b.norm() / std::abs(form(a, b));
    return (form(a, x) * form(x, b) / form(a, b)).imag() / scale;
}

void late_conditions(const QuadrangleData& D, double margin, double band, ConditionReport& rep) {
    Acc q4{rep.cond[Q4], margin, band};
    q4.strict(-self_form(D.h1) / D.h1.squaredNorm());
    const double ta_m_wm = tance(D.m, D.Wm);
    const double ta_m_h2 = tance(D.m, D.h2);
    q4.strict(ta_m_wm - 1.0);
    q4.strict(ta_m_h2 - 1.0);

    auto triangle_cond = [&](ConditionResult& r, const TrianglePolars& T) {
        Acc acc{r, margin, band};
        try {
            const TriangleInv I = invariants(T);
            acc.strict(transversal_slack(I));
            acc.strict(-I.eps1());
        } catch (const DomainError&) {
            acc.fail();
        }
    };
    triangle_cond(rep.cond[Q5], {D.q2, D.m, D.Wm});
    triangle_cond(rep.cond[Q6], {D.h2, D.Wm, D.m});

    Acc q7{rep.cond[Q7], margin, band};
    try {
        q7.strict(cotranchal_slack(D.m, D.h2, D.q2));
    } catch (const DomainError&) {
        q7.fail();
    }

    Acc q8{rep.cond[Q8], margin, band};
    q8.non_strict(q8_value(D.q2, D.h1, D.m));
    q8.non_strict(q8_value(D.Wm, D.h1, D.q2));
}

std::optional<QuadrangleData> construct(const Params& P, const std::array<cplx, 3>& u,
                                        const std::array<cplx, 3>& w, cplx v, std::string* why) {
    const cplx w1s = w[0] * w[0], w2s = w[1] * w[1], w3s = w[2] * w[2];
    const double r2 = ((w1s - v) * w[1]).real() / ((w1s - w2s) * w[1]).real();
    const double r3 = ((w1s - v) * w[2]).real() / ((w1s - w3s) * w[2]).real();
    if (!(r2 >= -1e-8) || !(r3 >= -1e-8)) {
        if (why) *why = "Q2: negative radicand";
        return std::nullopt;
    }
    QuadrangleData D;
    D.params = P;
    D.u = u;
    D.w = w;
    D.v = v;
    D.m2 = std::sqrt(std::max(0.0, r2));
    D.m3 = std::sqrt(std::max(0.0, r3));
    const double r1 = D.m2 * D.m2 + D.m3 * D.m3 - 1.0;
    if (!(r1 >= -1e-8)) {
        if (why) *why = "Q2: negative radicand";
        return std::nullopt;
    }
    D.m1 = std::sqrt(std::max(0.0, r1));
    D.m = PVec(D.m1, D.m2, D.m3);

    const PVec ws(w1s, w2s, w3s);
    D.W = Isometry(Mat3(ws.asDiagonal()));
    D.R = reflection(D.m);
    D.U = D.W * D.R;
    D.Wm = D.W.M * D.m;
    auto eigvec = [&](cplx ui) {
        PVec h;
        for (int j = 0; j < 3; ++j) h[j] = D.m[j] / (ui * ui / ws[j] + 1.0);
        return h;
    };
    D.h1 = eigvec(u[0]);
    D.h2 = eigvec(u[1]);
    return D;
}

}  // namespace

const char* cond_name(int c) {
    static const char* names[kCondCount] = {"Q1", "Q2", "Q3", "Q4", "Q5", "Q6", "Q7", "Q8"};
    return c >= 0 && c < kCondCount ? names[c] : "?";
}

cplx root_3n(long j, int n) {
    const long period = 6L * n;
    long r = j % period;
    if (r < 0) r += period;
    return std::polar(1.0, kPi * static_cast<double>(r) / (3.0 * n));
}

std::optional<QuadrangleData> build(const Params& P, std::string* why) {
    ConditionReport rep;
    std::array<cplx, 3> u, w;
    cplx v;
    if (!early_conditions(P, kMargin, kMarginalBand, rep, u, w, v)) {
        finish(rep);
        if (why) *why = cond_name(rep.first_failure);
        return std::nullopt;
    }
    return construct(P, u, w, v, why);
}

ConditionReport check_conditions(const QuadrangleData& D, double margin, double band) {
    ConditionReport rep;
    std::array<cplx, 3> u, w;
    cplx v;
    early_conditions(D.params, margin, band, rep, u, w, v);
    late_conditions(D, margin, band, rep);
    finish(rep);
    return rep;
}

ConditionReport evaluate(const Params& P, double margin, std::optional<QuadrangleData>* out, double band) {
    ConditionReport rep;
    std::array<cplx, 3> u, w;
    cplx v;
    if (early_conditions(P, margin, band, rep, u, w, v)) {
        std::optional<QuadrangleData> D = construct(P, u, w, v, nullptr);
        if (D) {
            late_conditions(*D, margin, band, rep);
        } else {
            rep.cond[Q2].pass = false;
        }
        if (out) *out = std::move(D);
    }
    finish(rep);
    return rep;
}

FResult compute_f_at(const QuadrangleData& D, double theta) {
    FResult r;
    r.seed = theta;
    const PVec z = boundary_point(D.q2, theta);
    const PVec p1 = slice_transport(z, D.q2, D.m);
    const PVec y = slice_transport(p1, D.m, D.h2);

    const Isometry phi = holonomy({D.h2, D.Wm, D.m});
    const Isometry phip = holonomy({D.q2, D.m, D.Wm});
    r.phi_class = classify(restrict_to_slice(phi, D.h2));
    r.phip_class = classify(restrict_to_slice(phip, D.q2));
    r.lambda_y = l_part_indicator(y, phi, D.h2);
    r.lambda_z = l_part_indicator(z, phip, D.q2);

    r.o_y = cyclic_order(boundary_angle(D.h2, y), boundary_angle(D.h2, act(D.U, y)),
                         boundary_angle(D.h2, act(inverse(phi), y)));
    r.o_z = cyclic_order(boundary_angle(D.q2, z), boundary_angle(D.q2, act(D.W, z)),
                         boundary_angle(D.q2, act(phip, z)));
    r.f = r.lambda_y + r.lambda_z + r.o_y - r.o_z;
    return r;
}

FResult compute_f(const QuadrangleData& D, double z_seed) {
    std::vector<FResult> got;
    double theta = z_seed;
    for (int attempt = 0; attempt < 32 + 3 && got.size() < 3; ++attempt, theta += kGoldenAngle) {
        try {
            got.push_back(compute_f_at(D, wrap_2pi(theta)));
        } catch (const DegenerateError&) {
        }
    }
    if (got.size() < 3) throw DegenerateError("compute_f: no generic boundary point found");
    for (const FResult& r : got)
        if (r.f != got[0].f) throw PropertyViolation("compute_f: f depends on the boundary point");

    FResult out = got[0];
    const double base = law_angle(D);
    for (int attempt = 0; attempt < 8; ++attempt) {
        try {
            const FResult at = compute_f_at(D, wrap_2pi(base + 1e-3 * attempt));
            if (at.f != out.f) throw PropertyViolation("compute_f: f depends on the boundary point");
            out.lambda_y = at.lambda_y;
            out.lambda_z = at.lambda_z;
            out.o_y = at.o_y;
            out.o_z = at.o_z;
            out.law_seed = at.seed;
            return out;
        } catch (const DegenerateError&) {
        }
    }
    throw DegenerateError("compute_f: law point is degenerate");
}

double law_angle(const QuadrangleData& D) {
    const SliceBasis b = slice_basis(D.q2);
    const PVec x = proj_perp(D.q2, D.m);
    return arg_2pi(form(x, b.p0) / -form(x, b.n0));
}

Toledo toledo(const Params& P) {
    const long n3 = 3L * P.n;
    long t = (2L * P.n * P.p - P.k - P.l) % n3;
    if (t < 0) t += n3;
    const long deg = P.n % 2 == 0 ? 2 : 4;
    return {static_cast<int>(t), deg * (2 * t - n3)};
}

Fraction reduced(long num, long den) {
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long g = std::gcd(num, den);
    return g == 0 ? Fraction{num, den} : Fraction{num / g, den / g};
}

std::string to_string(const Fraction& f) {
    if (f.den == 1) return std::to_string(f.num);
    return std::to_string(f.num) + "/" + std::to_string(f.den);
}

std::string tau_string(long tau3) { return to_string(reduced(tau3, 3)); }

Euler euler(const Params& P, int f) {
    const bool odd = P.n % 2 == 1;
    Euler E;
    E.e_P = static_cast<long>(P.n) * f - P.k - P.l - 2;
    E.e = (odd ? 4 : 2) * E.e_P;
    E.genus = odd ? P.n - 3 : P.n / 2 - 1;
    E.chi = 2 - 2 * E.genus;
    E.orb_e = reduced(E.e_P, P.n);
    return E;
}

ExampleRecord make_record(const QuadrangleData& D, const ConditionReport& rep, const FResult& fr) {
    const Params& P = D.params;
    const Toledo T = toledo(P);
    const Euler E = euler(P, fr.f);
    auto firm = [](const SliceClass& c) { return c.tag == SliceTag::Elliptic && 2.0 - c.abs_trace > 1e-6; };
    return {P,      fr.f,   T.t,    T.tau3,       E.e_P, E.genus, E.chi, E.e, E.orb_e,
            reduced(2L * T.t - 3L * P.n, 3L * P.n), rep.marginal, fr.o_y, fr.o_z,
            firm(fr.phi_class) && firm(fr.phip_class)};
}

bool is_c_fuchsian(const ExampleRecord& r) { return r.tau3 == 3 * r.chi; }

std::vector<std::string> law_violations(const ExampleRecord& r) {
    std::vector<std::string> v;
    if (2 * (r.chi + r.e) != r.tau3) v.emplace_back("2(chi+e) = 3 tau");
    if (r.params.n % 2 == 1 && (2 * (r.chi + r.e) - r.tau3) % (8L * r.params.n) != 0)
        v.emplace_back("2(chi+e) = 3 tau mod 8n");
    if (!(r.tau3 < 0)) v.emplace_back("tau < 0");
    if (!(r.chi < 2 * r.e && r.e < 0)) v.emplace_back("chi/2 < e < 0");
    if (r.params.p + r.f != 2) v.emplace_back("p + f = 2");
    if (r.f != r.o_y) v.emplace_back("f = o(y,Uy,phi^-1 y)");
    if (r.o_z != 0) v.emplace_back("o(z,Wz,phi' z) = 0");
    if (!r.triangles_elliptic) v.emplace_back("both triangles elliptic");
    return v;
}

Isometry power(const Isometry& I, int e) {
    Isometry base = e < 0 ? inverse(I) : I;
    Isometry r;
    for (int i = 0, n = std::abs(e); i < n; ++i) r = r * base;
    return r;
}

Isometry w_power(const Params& P, long e) {
    const Angles A = exponents(P);
    PVec d;
    for (int j = 0; j < 3; ++j) d[j] = root_3n(2 * e * A.b[j], P.n);
    return Isometry(Mat3(d.asDiagonal()));
}

Isometry cycle_reflection(const QuadrangleData& D, long i) {
    return w_power(D.params, i - 1) * D.R * w_power(D.params, 1 - i);
}

IdentityReport verify_identities(const QuadrangleData& D, double tol) {
    const Params& P = D.params;
    const int n = P.n;
    IdentityReport rep{};
    auto check_angle = [&](const char* what, double got, double want) {
        if (std::abs(wrap_pi(got - want)) > tol) rep.failures.emplace_back(what);
    };

    rep.angle_at_q = cotranchal_angle(D.q2, D.m, D.Wm, D.q);
    rep.angle_at_s2 = cotranchal_angle(D.h2, D.Wm, D.m, D.h1);
    check_angle("angle at q", rep.angle_at_q, kTwoPi / n);
    check_angle("angle at s2", rep.angle_at_s2, kTwoPi / n);

    rep.w_inv_rotation = classify(restrict_to_slice(inverse(D.W), D.q2)).rotation_angle;
    rep.u_rotation = classify(restrict_to_slice(D.U, D.h2)).rotation_angle;
    check_angle("W^-1 rotation on C", rep.w_inv_rotation, kTwoPi * (P.l + 1) / n);
    check_angle("U rotation on S2", rep.u_rotation, kTwoPi * (P.k + 1) / n);

    auto Wpow = [&](long e) { return w_power(P, e); };
    auto R_i = [&](long i) { return cycle_reflection(D, i); };
    auto U_i = [&](long i) { return Wpow(i - 2) * D.U * Wpow(2 - i); };
    auto diff = [](const Isometry& a, const Isometry& b) {
        return (a.M - b.M).cwiseAbs().maxCoeff() / std::max(1.0, a.M.cwiseAbs().maxCoeff());
    };

    rep.max_ru_relation = 0.0;
    for (long i = 1; i <= n; ++i)
        rep.max_ru_relation = std::max(rep.max_ru_relation, diff(R_i(i) * U_i(i), U_i(i + 1) * R_i(i)));
    if (rep.max_ru_relation > tol) rep.failures.emplace_back("R_i U_i = U_{i+1} R_i");

    const cplx delta = std::polar(1.0, kTwoPi * static_cast<double>(P.k + P.l + static_cast<long>(n) * P.p) / 3.0);
    const Isometry deltaI(Mat3::Identity() * delta);
    rep.max_delta_identity = diff(Wpow(n) * power(D.U, -n), deltaI);
    if (rep.max_delta_identity > tol) rep.failures.emplace_back("W^n U^-n = delta");

    Isometry cyc;
    for (long i = 1; i <= n; ++i) cyc = R_i(i) * cyc;
    rep.max_cycle_product = diff(cyc, deltaI);
    if (rep.max_cycle_product > tol) rep.failures.emplace_back("R_n ... R_1 = delta");
    return rep;
}

}  // namespace chg
