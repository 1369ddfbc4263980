#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "h14/dual.hpp"
#include "h14/maps.hpp"
#include "h14/orbits.hpp"

namespace h14 {

enum class CurveId {
    L_pi2_minus,
    L_pi2_plus,
    L4_1,
    L4_2,
    L4_3,
    L4_4,
    Ltilde4_sym,
    B4_l,
    B4_r,
    Bhat4_l,
    Bhat4_r,
    C4_l,
    C4_r,
    D4_l,
    D4_r,
    Dbar4_l,
    Dbar4_r,
    Dhat4_l,
    Dhat4_r,
    numeric,
};

std::string_view to_string(CurveId id);
CurveId curve_from_name(std::string_view name);  // std::invalid_argument on unknown names

struct CurveInfo {
    int delta = 1;               // which map the curve belongs to
    double m2_lo = 0.0;          // validity domain in M2 (closed)
    double m2_hi = 0.0;
    double trace_target = 2.0;   // trace of D C^q for the witness orbit
    int witness_period = 4;
    bool closed_form = true;     // M1 is an explicit function of M2
};

CurveInfo curve_info(CurveId id);
// Curves with an explicit M1(M2) formula, in declaration order.
std::span<const CurveId> closed_form_curves();

// Finite M2 window strictly inside the domain, away from the endpoint
// collisions, used for default sampling.
std::pair<double, double> sample_window(CurveId id);

// The mirror branch (l <-> r, L4_1 <-> L4_2); itself for unpaired curves.
CurveId mirror_curve(CurveId id);

struct CurvePoint {
    double param = 0.0;  // M2, t, t1 or arclength depending on the curve
    double m1 = 0.0;
    double m2 = 0.0;
    std::optional<PeriodicOrbit> witness;
};

namespace detail {

inline constexpr double kSqrt27 = 5.196152422706632;
inline constexpr double kSqrt3 = 1.7320508075688772;

template <class T>
T sqrt_nonneg(const T& v) {
    using std::sqrt;
    return value_of(v) <= 0.0 ? T(0.0) : sqrt(v);
}

}  // namespace detail

// Explicit branch M1(M2); T may be a dual number for slopes.
template <class T>
T closed_form_m1(CurveId id, const T& m2) {
    using detail::kSqrt27;
    using detail::kSqrt3;
    using detail::sqrt_nonneg;
    switch (id) {
        case CurveId::L_pi2_minus: {
            const T g = value_of(m2) <= 3.0 ? T(3.0 - m2) : T(m2 - 3.0);
            return 2.0 * sqrt_nonneg(m2) * g / kSqrt27;
        }
        case CurveId::L_pi2_plus: return 2.0 * sqrt_nonneg(-m2) * (3.0 - m2) / kSqrt27;
        case CurveId::L4_1: return 2.0 * (1.0 + m2) * sqrt_nonneg(1.0 + m2) / kSqrt27;
        case CurveId::L4_2: return -2.0 * (1.0 + m2) * sqrt_nonneg(1.0 + m2) / kSqrt27;
        case CurveId::L4_3: return 2.0 * (2.0 + m2) * sqrt_nonneg(m2 - 1.0) / kSqrt27;
        case CurveId::L4_4: return 2.0 * (m2 - 2.0) * sqrt_nonneg(m2 - 2.0) / kSqrt27;
        case CurveId::B4_r:
        case CurveId::B4_l: {
            const T s = sqrt_nonneg(-m2);
            const T v = (3.0 * kSqrt3 - 3.0 * s + 2.0 * s * s * s) / kSqrt27;
            return id == CurveId::B4_r ? v : -v;
        }
        case CurveId::Bhat4_r: return 2.0 * (2.0 + m2) * sqrt_nonneg(1.0 - m2) / kSqrt27;
        case CurveId::Bhat4_l: return -2.0 * (2.0 + m2) * sqrt_nonneg(1.0 - m2) / kSqrt27;
        case CurveId::C4_r: return 2.0 * (-1.0 - m2) * sqrt_nonneg(-1.0 - m2) / kSqrt27;
        case CurveId::C4_l: return -2.0 * (-1.0 - m2) * sqrt_nonneg(-1.0 - m2) / kSqrt27;
        case CurveId::D4_l:
        case CurveId::D4_r: {
            const T a = sqrt_nonneg(-m2 / 3.0) * (2.0 * m2 / 3.0 + 1.0);
            const T v = a + sqrt_nonneg(-3.0 * m2 - 8.0);
            return id == CurveId::D4_l ? v : -v;
        }
        case CurveId::Dbar4_l:
        case CurveId::Dbar4_r: {
            const T s = sqrt_nonneg(-m2);
            const T v = (3.0 * kSqrt3 + 3.0 * s - 2.0 * s * s * s) / kSqrt27;
            return id == CurveId::Dbar4_l ? v : -v;
        }
        default: break;
    }
    return T(0.0);
}

// Closed-form curve at M2 = param. OutOfDomain outside the validity domain or
// for curves without an explicit formula.
CurvePoint curve_point(CurveId id, double m2);
// dM1/dM2 along a closed-form curve.
double curve_slope(CurveId id, double m2);
// Residual of the curve's polynomial defining relation at (m1, m2), e.g.
// 27 M1^2 - 4 (1 + M2)^3 for L4_1/L4_2.
double curve_relation_residual(CurveId id, double m1, double m2);

// Both branches (+M1, -M1) of the pi/2 resonance curve of the given map.
std::pair<double, double> resonance_curve(int delta, double m2);

// The fixed point with eigenvalues +-i on the resonance curve; branch selects
// the sign of M1.
std::pair<MapSpec, PhasePoint> resonant_fixed_point(int delta, double m2, int branch = 1);

// Rebuilds the parabolic orbit on a closed-form curve (fixed point for the
// resonance curves, 2-orbit for D4, 4-orbit otherwise) from the explicit
// parametrizations and polishes it. NoConvergence if no candidate closes.
PeriodicOrbit curve_witness(CurveId id, double m1, double m2);

// Symmetric trace = -2 family cos t1 = cos t2. branch = +1 / -1 picks the
// root of the quartic in M2^2.
CurvePoint ltilde_sym_point(int delta, double t1, int branch);
// 4 M2^2 s^4 (1 - M2^2 c^2) - 1 with s = sin t1, c = 1 + 2 cos 2 t1.
double ltilde_relation_residual(double m2, double t1);

// Parabolic 4-orbits with a point on Fix(R') (second reversor line):
//   2 = (M2 - 3 delta y^2) M2 (1 + 2 cos 2t)
//   2 sqrt(delta M2 / 3) cos t = M1 + M2 y - delta y^3
//   M1 + 2/(3 sqrt 3) M2 sqrt(delta M2) cos 3t = 2y
struct Case22Unknowns {
    double y = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
};

std::array<double, 3> case22_residuals(int delta, double t, const Case22Unknowns& u);
// Newton from the seed; the witness orbit is attached. t = n pi is accepted
// and returns the limit point where the 4-orbit merges into a 2-orbit.
CurvePoint solve_case22(int delta, double t, const Case22Unknowns& seed);

struct Case22Path {
    std::vector<CurvePoint> points;  // ordered by t, from t_start toward t_end
    CurvePoint terminal;             // solution at t_end itself
};

// Natural-parameter continuation in t with step halving.
Case22Path continue_case22(int delta, double t_start, const Case22Unknowns& seed, double t_end, int n_steps);

// Brute-force check of the trigonometric parametrization. The point is
// x = a cos t2 - b sin t2, y = a cos t1 - b sin t1 with a = sqrt(delta M2/3),
// b = sqrt(delta M2); the parametrization also predicts P(x) = 2a cos t1 and
// P(y) = 2a cos t2.
// Residuals are backward errors: raw value over its first-order sensitivity to
// (t1, t2, M1, M2), floored at 1, so well-conditioned points see the raw value.
struct ParamResiduals {
    double closure_x = 0.0;  // factored 4-orbit condition in x
    double closure_y = 0.0;
    double param_x = 0.0;    // P(x) - 2a cos t1
    double param_y = 0.0;    // P(y) - 2a cos t2
    double trace_plus = 0.0;   // 2 - tr D C^4 written through P'
    double trace_minus = 0.0;  // -2 - tr D C^4
    bool degenerate = false;   // sin t1 = sin t2 = 0: a fixed point, not a 4-orbit

    double max_abs_plus() const;   // closure, parametrization and trace = 2
    double max_abs_minus() const;  // closure, parametrization and trace = -2
};

ParamResiduals parametrization_residuals(int delta, double t1, double t2, double m1, double m2);

// Sample generators for the three parametrized cases.
struct CaseSample {
    double t1 = 0.0;
    double t2 = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
};

// cos t1 = cos t2 (t2 = t1): M2 = delta / |4 cos^2 t1 - 1|.
CaseSample case11_sample(int delta, double t1);
// Hyperbola branch for delta = +1, t in (t-, t+).
CaseSample case12_sample(double t);
inline constexpr double kCase12TMinus = 0.5176380902050415;  // (sqrt3 - 1)/sqrt2
inline constexpr double kCase12TPlus = 1.9318516525781366;   // (sqrt3 + 1)/sqrt2
// delta = -1, M2 = -3/(2 cos t + sign)^2, y = sign * a.
CaseSample case21_sample(double t, int sign);

}  // namespace h14
