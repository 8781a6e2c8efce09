#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "chgeom/hermitian.hpp"
#include "chgeom/isometry.hpp"
#include "chgeom/triangle.hpp"
#include "chgeom/types.hpp"

namespace chg {

struct Params {
    int n = 0;
    int l = 0;
    int k = 0;
    int p = 1;

    bool valid() const { return n >= 3 && 0 <= k && k <= l && l <= n - 3 && (p == 1 || p == 2); }
    auto operator<=>(const Params&) const = default;
};

struct QuadrangleData {
    Params params;
    std::array<cplx, 3> u;
    std::array<cplx, 3> w;
    cplx v;
    double m1, m2, m3;
    PVec m, h1, h2, Wm;
    PVec q{1.0, 0.0, 0.0};
    PVec q2{0.0, 1.0, 0.0};
    Isometry W, R, U;
};

/// Indices into ConditionReport::cond; Q1..Q8 map to 0..7.
enum Cond { Q1 = 0, Q2, Q3, Q4, Q5, Q6, Q7, Q8, kCondCount };

const char* cond_name(int c);

struct ConditionResult {
    bool evaluated = false;
    bool pass = false;
    double slack = 0.0;  // smallest slack over the parts of the condition
    bool marginal = false;
};

struct ConditionReport {
    std::array<ConditionResult, kCondCount> cond;
    bool accepted = false;
    bool marginal = false;
    int first_failure = -1;
};

/// e^{i pi j / (3n)} with j reduced exactly.
cplx root_3n(long j, int n);

/// Builds the construction; returns nullopt when Q1, Q2 or Q3 fails.
std::optional<QuadrangleData> build(const Params& P, std::string* why = nullptr);

/// Full report for built data (Q1..Q3 are recomputed).
ConditionReport check_conditions(const QuadrangleData& D, double margin = kMargin, double band = kMarginalBand);

/// Report for a parameter tuple; later conditions are left unevaluated when the construction fails.
ConditionReport evaluate(const Params& P, double margin = kMargin, std::optional<QuadrangleData>* out = nullptr,
                         double band = kMarginalBand);

struct FResult {
    int f = 0;
    int o_y = 0;  // o(y, Uy, phi^{-1} y)
    int o_z = 0;  // o(z, Wz, phi' z)
    int lambda_y = 0;
    int lambda_z = 0;
    double seed = 0.0;      // boundary angle used for f
    double law_seed = 0.0;  // boundary angle used for the o and lambda terms
    SliceClass phi_class;
    SliceClass phip_class;
};

inline constexpr double kZSeed = 0.7337;
inline constexpr double kGoldenAngle = 2.399963229728653;

/// f at a single boundary angle; throws DegenerateError near coincidences.
FResult compute_f_at(const QuadrangleData& D, double theta);

/// Boundary angle of C pointing towards M1.
double law_angle(const QuadrangleData& D);

/// f with the retry protocol and three-seed agreement; the o and lambda terms are
/// taken at law_angle, where o(z,Wz,phi'z) = 0.
FResult compute_f(const QuadrangleData& D, double z_seed = kZSeed);

struct Toledo {
    int t;
    long tau3;  // 3 tau of the surface-group bundle
};

Toledo toledo(const Params& P);

struct Fraction {
    long num;
    long den;
};

Fraction reduced(long num, long den);
std::string to_string(const Fraction& f);

struct Euler {
    long e_P;
    long e;
    long genus;
    long chi;
    Fraction orb_e;
};

Euler euler(const Params& P, int f);

struct ExampleRecord {
    Params params;
    int f;
    int t;
    long tau3;
    long e_P;
    long genus;
    long chi;
    long e;
    Fraction orb_e;
    Fraction orb_tau;
    bool marginal;
    int o_y;
    int o_z;
    bool triangles_elliptic;
};

ExampleRecord make_record(const QuadrangleData& D, const ConditionReport& rep, const FResult& fr);

/// "a/3" reduced, or an integer.
std::string tau_string(long tau3);

bool is_c_fuchsian(const ExampleRecord& r);

/// Violated empirical laws; empty when all hold.
std::vector<std::string> law_violations(const ExampleRecord& r);

struct IdentityReport {
    double angle_at_q;   // from B[C,M1] to B[C,M2]
    double angle_at_s2;  // from B[S2,M2] to B[S2,M1]
    double w_inv_rotation;
    double u_rotation;
    double max_ru_relation;
    double max_delta_identity;
    double max_cycle_product;
    std::vector<std::string> failures;
};

IdentityReport verify_identities(const QuadrangleData& D, double tol = 1e-7);

/// Integer power by repeated multiplication.
Isometry power(const Isometry& I, int e);

/// W^e from exact eigen-angles.
Isometry w_power(const Params& P, long e);

/// R_i = W^{i-1} R W^{1-i}, the reflection in the i-th middle slice of the cycle.
Isometry cycle_reflection(const QuadrangleData& D, long i);

}  // namespace chg
