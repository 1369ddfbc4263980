#include "h14/curves.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "h14/dual.hpp"
#include "h14/errors.hpp"

namespace h14 {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoOver3Sqrt3 = 2.0 / (3.0 * detail::kSqrt3);

struct NamedCurve {
    CurveId id;
    std::string_view name;
};

constexpr NamedCurve kNames[] = {
    {CurveId::L_pi2_minus, "L_pi2_minus"}, {CurveId::L_pi2_plus, "L_pi2_plus"}, {CurveId::L4_1, "L4_1"},
    {CurveId::L4_2, "L4_2"},               {CurveId::L4_3, "L4_3"},             {CurveId::L4_4, "L4_4"},
    {CurveId::Ltilde4_sym, "Ltilde4_sym"}, {CurveId::B4_l, "B4_l"},             {CurveId::B4_r, "B4_r"},
    {CurveId::Bhat4_l, "Bhat4_l"},         {CurveId::Bhat4_r, "Bhat4_r"},       {CurveId::C4_l, "C4_l"},
    {CurveId::C4_r, "C4_r"},               {CurveId::D4_l, "D4_l"},             {CurveId::D4_r, "D4_r"},
    {CurveId::Dbar4_l, "Dbar4_l"},         {CurveId::Dbar4_r, "Dbar4_r"},       {CurveId::Dhat4_l, "Dhat4_l"},
    {CurveId::Dhat4_r, "Dhat4_r"},         {CurveId::numeric, "numeric"},
};

constexpr CurveId kClosedForm[] = {
    CurveId::L_pi2_minus, CurveId::L_pi2_plus, CurveId::L4_1,    CurveId::L4_2,    CurveId::L4_3,
    CurveId::L4_4,        CurveId::B4_l,       CurveId::B4_r,    CurveId::Bhat4_l, CurveId::Bhat4_r,
    CurveId::C4_l,        CurveId::C4_r,       CurveId::D4_l,    CurveId::D4_r,    CurveId::Dbar4_l,
    CurveId::Dbar4_r,
};

double sq(double v) { return v * v; }

bool m1_matches(double a, double b) { return std::fabs(a - b) < 1e-8 * (1.0 + std::fabs(b)); }

// Candidate orbit points from the parametrizations. Each returns every point
// whose parametrized M1 reproduces the requested one.

std::vector<PhasePoint> candidates_fixed(int delta, double m1, double m2) {
    std::vector<PhasePoint> out;
    for (const FixedPoint& f : fixed_points(MapSpec::make(delta, m1, m2)))
        if (std::fabs(f.trace) < 1e-6) out.push_back(f.point);
    return out;
}

// cos t1 = cos t2; the orbit meets the diagonal.
std::vector<PhasePoint> candidates_case11(int delta, double m1, double m2) {
    std::vector<PhasePoint> out;
    const double dm = delta * m2;
    if (!(dm > 0.0)) return out;
    const double a = std::sqrt(dm / 3.0), b = std::sqrt(dm), k = kTwoOver3Sqrt3 * b;
    for (double c2 : {0.25 * (1.0 + 1.0 / dm), 0.25 * (1.0 - 1.0 / dm)}) {
        if (c2 < 0.0 || c2 > 1.0) continue;
        for (double c : {std::sqrt(c2), -std::sqrt(c2)}) {
            const double m1c = k * (3.0 * c - m2 * (4.0 * c * c * c - 3.0 * c));
            if (!m1_matches(m1c, m1)) continue;
            const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
            for (double sg : {1.0, -1.0}) {
                const double y = a * c - sg * b * s;
                out.push_back({y, y});
            }
        }
    }
    return out;
}

// Hyperbola branch of cos t1 != cos t2 (delta = +1).
std::vector<PhasePoint> candidates_case12(double m1, double m2) {
    std::vector<PhasePoint> out;
    if (!(m2 > 0.0)) return out;
    const double a = std::sqrt(m2 / 3.0), b = std::sqrt(m2), k = kTwoOver3Sqrt3 * b;
    // M2 tau^2 + (4 - 4 M2) tau + M2 = 0, tau = t^2
    const double B = 4.0 - 4.0 * m2, disc = B * B - 4.0 * m2 * m2;
    if (disc < -1e-12) return out;
    const double sd = std::sqrt(std::max(0.0, disc));
    for (double tau : {(-B + sd) / (2.0 * m2), (-B - sd) / (2.0 * m2)}) {
        if (!(tau > 0.0)) continue;
        for (double t : {std::sqrt(tau), -std::sqrt(tau)}) {
            const CaseSample cs = case12_sample(t);
            const double c1 = std::cos(cs.t1), c2 = std::cos(cs.t2);
            if (!std::isfinite(c1) || !std::isfinite(c2)) continue;
            const double m1c = k * (3.0 * c2 - m2 * std::cos(3.0 * cs.t1));
            if (!m1_matches(m1c, m1)) continue;
            const double s1 = std::sin(cs.t1), s2 = std::sin(cs.t2);
            out.push_back({a * c2 - b * s2, a * c1 - b * s1});
        }
    }
    return out;
}

// Case y = +-sqrt(delta M2 / 3) with the orbit meeting Fix(R') (delta = -1).
std::vector<PhasePoint> candidates_case21(double m1, double m2) {
    std::vector<PhasePoint> out;
    if (!(m2 < 0.0)) return out;
    const double a = std::sqrt(-m2 / 3.0), b = std::sqrt(-m2), k = kTwoOver3Sqrt3 * m2 * b;
    const double w = std::sqrt(-3.0 / m2);
    for (int sg : {1, -1}) {
        for (double ww : {w, -w}) {
            const double c = 0.5 * (ww - sg);
            if (std::fabs(c) > 1.0 + 1e-12) continue;
            const double t = std::acos(std::clamp(c, -1.0, 1.0));
            const double m1c = 2.0 * a * std::cos(t) - sg * k;
            if (!m1_matches(m1c, m1)) continue;
            for (double ss : {1.0, -1.0}) out.push_back({a * std::cos(t) - ss * b * std::sin(t), sg * a});
        }
    }
    return out;
}

// 2-orbit on Fix(R') with P'(x) = 0 (period doubling).
std::vector<PhasePoint> candidates_d4(int delta, double m1, double m2) {
    std::vector<PhasePoint> out;
    const double dm = delta * m2;
    if (!(dm >= 0.0)) return out;
    const MapSpec spec = MapSpec::make(delta, m1, m2);
    for (double x : {std::sqrt(dm / 3.0), -std::sqrt(dm / 3.0)}) out.push_back({x, 0.5 * spec.P(x)});
    return out;
}

template <class T>
std::array<T, 3> case22_eq(int delta, double t, const T& y, const T& m1, const T& m2) {
    using std::sqrt;
    const double d = delta;
    const T dm = d * m2;
    const T e1 = (m2 - 3.0 * d * y * y) * m2 * (1.0 + 2.0 * std::cos(2.0 * t)) - 2.0;
    const T e2 = 2.0 * sqrt(dm / 3.0) * std::cos(t) - (m1 + m2 * y - d * y * y * y);
    const T e3 = m1 + kTwoOver3Sqrt3 * m2 * sqrt(dm) * std::cos(3.0 * t) - 2.0 * y;
    return {e1, e2, e3};
}

double max_abs3(const std::array<double, 3>& r) {
    return std::max({std::fabs(r[0]), std::fabs(r[1]), std::fabs(r[2])});
}

std::optional<PeriodicOrbit> case22_witness(int delta, double t, const Case22Unknowns& u) {
    const MapSpec spec = MapSpec::make(delta, u.m1, u.m2);
    const double a = std::sqrt(delta * u.m2 / 3.0), b = std::sqrt(delta * u.m2);
    std::optional<PeriodicOrbit> best;
    double best_res = kInf;
    for (double sg : {1.0, -1.0}) {
        const PhasePoint q{a * std::cos(t) - sg * b * std::sin(t), u.y};
        const double r = closure_residual(spec, q, 4);
        if (!(r < best_res)) continue;
        try {
            best = polish_orbit(spec, {q, 4}, 1e-11);
            best_res = r;
        } catch (const NumericalError&) {
        }
    }
    return best;
}

}  // namespace

std::string_view to_string(CurveId id) {
    for (const auto& n : kNames)
        if (n.id == id) return n.name;
    return "?";
}

CurveId curve_from_name(std::string_view name) {
    for (const auto& n : kNames)
        if (n.name == name) return n.id;
    throw std::invalid_argument("unknown curve id '" + std::string(name) + "'");
}

CurveInfo curve_info(CurveId id) {
    switch (id) {
        case CurveId::L_pi2_minus: return {1, 0.0, kInf, 0.0, 1, true};
        case CurveId::L_pi2_plus: return {-1, -kInf, 0.0, 0.0, 1, true};
        case CurveId::L4_1:
        case CurveId::L4_2: return {1, 1.0 / 3.0, kInf, 2.0, 4, true};
        case CurveId::L4_3: return {1, 1.0, kInf, 2.0, 4, true};
        case CurveId::L4_4: return {1, 2.0, kInf, 2.0, 4, true};
        case CurveId::Ltilde4_sym: return {1, -kInf, kInf, -2.0, 4, false};
        case CurveId::B4_l:
        case CurveId::B4_r:
        case CurveId::Bhat4_l:
        case CurveId::Bhat4_r: return {-1, -kInf, -1.0 / 3.0, 2.0, 4, true};
        case CurveId::C4_l:
        case CurveId::C4_r: return {-1, -kInf, -1.0, 2.0, 4, true};
        case CurveId::D4_l:
        case CurveId::D4_r: return {-1, -kInf, -8.0 / 3.0, -2.0, 2, true};
        case CurveId::Dbar4_l:
        case CurveId::Dbar4_r: return {-1, -kInf, -3.0, 2.0, 4, true};
        case CurveId::Dhat4_l:
        case CurveId::Dhat4_r: return {-1, -kInf, kInf, 2.0, 4, false};
        case CurveId::numeric: return {1, -kInf, kInf, 2.0, 4, false};
    }
    throw std::invalid_argument("curve_info: bad id");
}

std::span<const CurveId> closed_form_curves() { return kClosedForm; }

std::pair<double, double> sample_window(CurveId id) {
    switch (id) {
        case CurveId::L_pi2_minus: return {0.05, 2.9};
        case CurveId::L_pi2_plus: return {-3.0, -0.05};
        case CurveId::L4_1:
        case CurveId::L4_2: return {0.34, 2.0};
        case CurveId::L4_3: return {1.01, 2.5};
        case CurveId::L4_4: return {2.01, 3.5};
        case CurveId::B4_l:
        case CurveId::B4_r:
        case CurveId::Bhat4_l:
        case CurveId::Bhat4_r: return {-3.0, -0.34};
        case CurveId::C4_l:
        case CurveId::C4_r: return {-3.0, -1.01};
        case CurveId::D4_l:
        case CurveId::D4_r: return {-3.5, -2.67};
        case CurveId::Dbar4_l:
        case CurveId::Dbar4_r: return {-3.8, -3.01};
        default: break;
    }
    throw std::invalid_argument("sample_window: " + std::string(to_string(id)) + " has no closed form in M2");
}

CurveId mirror_curve(CurveId id) {
    switch (id) {
        case CurveId::L4_1: return CurveId::L4_2;
        case CurveId::L4_2: return CurveId::L4_1;
        case CurveId::B4_l: return CurveId::B4_r;
        case CurveId::B4_r: return CurveId::B4_l;
        case CurveId::Bhat4_l: return CurveId::Bhat4_r;
        case CurveId::Bhat4_r: return CurveId::Bhat4_l;
        case CurveId::C4_l: return CurveId::C4_r;
        case CurveId::C4_r: return CurveId::C4_l;
        case CurveId::D4_l: return CurveId::D4_r;
        case CurveId::D4_r: return CurveId::D4_l;
        case CurveId::Dbar4_l: return CurveId::Dbar4_r;
        case CurveId::Dbar4_r: return CurveId::Dbar4_l;
        default: return id;
    }
}

CurvePoint curve_point(CurveId id, double m2) {
    const CurveInfo info = curve_info(id);
    if (!info.closed_form)
        throw OutOfDomain(std::string(to_string(id)) + " has no explicit M1(M2); use its dedicated solver");
    if (!std::isfinite(m2) || m2 < info.m2_lo || m2 > info.m2_hi)
        throw OutOfDomain(std::string(to_string(id)) + ": M2 = " + std::to_string(m2) + " outside the validity domain");
    return {m2, closed_form_m1(id, m2), m2, std::nullopt};
}

double curve_slope(CurveId id, double m2) {
    curve_point(id, m2);  // domain check
    return closed_form_m1(id, Dual<1>::variable(m2, 0)).d[0];
}

double curve_relation_residual(CurveId id, double m1, double m2) {
    using detail::kSqrt3;
    const double s = std::sqrt(std::max(0.0, -m2));
    switch (id) {
        case CurveId::L_pi2_minus: return m1 * m1 - 4.0 / 27.0 * m2 * sq(m2 - 3.0);
        case CurveId::L_pi2_plus: return m1 * m1 + 4.0 / 27.0 * m2 * sq(m2 - 3.0);
        case CurveId::L4_1:
        case CurveId::L4_2: return 27.0 * m1 * m1 - 4.0 * std::pow(1.0 + m2, 3);
        case CurveId::L4_3: return 27.0 * m1 * m1 - 4.0 * sq(2.0 + m2) * (m2 - 1.0);
        case CurveId::L4_4: return 27.0 * m1 * m1 - 4.0 * std::pow(m2 - 2.0, 3);
        case CurveId::B4_l:
        case CurveId::B4_r: return 27.0 * m1 * m1 - sq(3.0 * kSqrt3 - 3.0 * s - 2.0 * m2 * s);
        case CurveId::Bhat4_l:
        case CurveId::Bhat4_r: return 27.0 * m1 * m1 - 4.0 * sq(2.0 + m2) * (1.0 - m2);
        case CurveId::C4_l:
        case CurveId::C4_r: return 27.0 * m1 * m1 + 4.0 * std::pow(1.0 + m2, 3);
        case CurveId::D4_l:
        case CurveId::D4_r: return m1 - closed_form_m1(id, m2);
        case CurveId::Dbar4_l:
        case CurveId::Dbar4_r: return 27.0 * m1 * m1 - sq(3.0 * kSqrt3 + 3.0 * s + 2.0 * m2 * s);
        default: break;
    }
    throw OutOfDomain(std::string(to_string(id)) + " has no polynomial relation");
}

std::pair<double, double> resonance_curve(int delta, double m2) {
    if (delta != 1 && delta != -1) throw std::invalid_argument("delta must be +1 or -1");
    if (!std::isfinite(m2) || delta * m2 < 0.0)
        throw OutOfDomain("resonance curve needs delta * M2 >= 0");
    const double m1 = std::sqrt(4.0 / 27.0 * delta * m2) * std::fabs(m2 - 3.0);
    return {m1, -m1};
}

std::pair<MapSpec, PhasePoint> resonant_fixed_point(int delta, double m2, int branch) {
    const auto [m1p, m1m] = resonance_curve(delta, m2);
    const double m1 = branch >= 0 ? m1p : m1m;
    // M1 = y (2 - 2 M2 / 3) on the fixed point with trace M2 - 3 delta y^2 = 0
    const double mag = std::sqrt(delta * m2 / 3.0);
    const double g = 2.0 - 2.0 * m2 / 3.0;
    double y = mag;
    if (g * m1 < 0.0 || (m1 == 0.0 && branch < 0)) y = -mag;
    return {MapSpec::make(delta, m1, m2), PhasePoint{y, y}};
}

PeriodicOrbit curve_witness(CurveId id, double m1, double m2) {
    const CurveInfo info = curve_info(id);
    std::vector<PhasePoint> cands;
    switch (id) {
        case CurveId::L_pi2_minus:
        case CurveId::L_pi2_plus: cands = candidates_fixed(info.delta, m1, m2); break;
        case CurveId::L4_1:
        case CurveId::L4_2:
        case CurveId::L4_3:
        case CurveId::Bhat4_l:
        case CurveId::Bhat4_r:
        case CurveId::C4_l:
        case CurveId::C4_r: cands = candidates_case11(info.delta, m1, m2); break;
        case CurveId::L4_4: cands = candidates_case12(m1, m2); break;
        case CurveId::B4_l:
        case CurveId::B4_r:
        case CurveId::Dbar4_l:
        case CurveId::Dbar4_r: cands = candidates_case21(m1, m2); break;
        case CurveId::D4_l:
        case CurveId::D4_r: cands = candidates_d4(info.delta, m1, m2); break;
        default: throw OutOfDomain(std::string(to_string(id)) + ": no closed-form witness");
    }
    const MapSpec spec = MapSpec::make(info.delta, m1, m2);
    for (const PhasePoint& q : cands) {
        try {
            PeriodicOrbit o = polish_orbit(spec, {q, info.witness_period}, 1e-11);
            if (o.period == info.witness_period && std::fabs(o.trace - info.trace_target) < 1e-6) return o;
        } catch (const NumericalError&) {
        }
    }
    throw NoConvergence(std::string(to_string(id)) + ": no parabolic orbit reconstructed at (" + std::to_string(m1) +
                        ", " + std::to_string(m2) + ")");
}

double ltilde_relation_residual(double m2, double t1) {
    const double s = std::sin(t1), c = 1.0 + 2.0 * std::cos(2.0 * t1);
    const double s4 = s * s * s * s;
    return 4.0 * m2 * m2 * s4 * (1.0 - m2 * m2 * c * c) - 1.0;
}

CurvePoint ltilde_sym_point(int delta, double t1, int branch) {
    if (delta != 1 && delta != -1) throw std::invalid_argument("delta must be +1 or -1");
    if (branch != 1 && branch != -1) throw std::invalid_argument("branch must be +1 or -1");
    const double ct = std::cos(t1);
    if (!std::isfinite(t1) || std::fabs(ct) > std::sqrt(0.4) + 1e-12)
        throw OutOfDomain("ltilde_sym_point: need |cos t1| <= sqrt(2/5)");
    const double s = std::sin(t1), c = 1.0 + 2.0 * std::cos(2.0 * t1);
    const double s2 = s * s;
    const double root = std::sqrt(std::max(0.0, s2 * s2 - c * c));
    // roots of 4 s^4 c^2 u^2 - 4 s^4 u + 1 = 0 in u = M2^2; the small root in
    // the cancellation-free form
    double u;
    if (branch > 0) {
        if (c == 0.0) throw NoRealRoot("ltilde_sym_point: the + root is at infinity for 1 + 2 cos 2t1 = 0");
        u = (s2 + root) / (2.0 * s2 * c * c);
    } else {
        u = 1.0 / (2.0 * s2 * (s2 + root));
    }
    if (!(u > 0.0) || !std::isfinite(u)) throw NoRealRoot("ltilde_sym_point: no positive root");
    const double m2 = delta * std::sqrt(u);
    const double m1 = kTwoOver3Sqrt3 * std::sqrt(delta * m2) * (3.0 * ct - m2 * std::cos(3.0 * t1));
    CurvePoint pt{t1, m1, m2, std::nullopt};
    // symmetric orbit on the diagonal, y = a cos t1 - b sin t1
    const double a = std::sqrt(delta * m2 / 3.0), b = std::sqrt(delta * m2);
    const MapSpec spec = MapSpec::make(delta, m1, m2);
    for (double sg : {1.0, -1.0}) {
        const double y = a * ct - sg * b * s;
        try {
            PeriodicOrbit o = polish_orbit(spec, {{y, y}, 4}, 1e-11);
            if (o.period == 4 && std::fabs(o.trace + 2.0) < 1e-6) {
                pt.witness = std::move(o);
                break;
            }
        } catch (const NumericalError&) {
        }
    }
    return pt;
}

std::array<double, 3> case22_residuals(int delta, double t, const Case22Unknowns& u) {
    if (!(delta * u.m2 > 0.0)) throw OutOfDomain("case22_residuals: need delta * M2 > 0");
    return case22_eq<double>(delta, t, u.y, u.m1, u.m2);
}

namespace {

Case22Unknowns newton_case22(int delta, double t, const Case22Unknowns& seed) {
    if (delta != 1 && delta != -1) throw std::invalid_argument("delta must be +1 or -1");
    if (!(delta * seed.m2 > 0.0)) throw OutOfDomain("solve_case22: seed needs delta * M2 > 0");
    Case22Unknowns u = seed;
    auto eval_res = [&](const Case22Unknowns& v) { return max_abs3(case22_eq<double>(delta, t, v.y, v.m1, v.m2)); };
    double res = eval_res(u);
    for (int iter = 0; iter < 50 && !(res < 1e-13); ++iter) {
        using D = Dual<3>;
        const auto e = case22_eq<D>(delta, t, D::variable(u.y, 0), D::variable(u.m1, 1), D::variable(u.m2, 2));
        Eigen::Matrix3d J;
        Eigen::Vector3d f;
        for (int i = 0; i < 3; ++i) {
            f(i) = e[i].v;
            for (int j = 0; j < 3; ++j) J(i, j) = e[i].d[j];
        }
        const Eigen::Vector3d step = -J.fullPivLu().solve(f);
        if (!step.allFinite()) throw NoConvergence("solve_case22: singular Jacobian");
        double lambda = 1.0;
        Case22Unknowns trial;
        double rt = kInf;
        for (int h = 0; h < 10; ++h, lambda *= 0.5) {
            trial = {u.y + lambda * step(0), u.m1 + lambda * step(1), u.m2 + lambda * step(2)};
            if (delta * trial.m2 <= 0.0) continue;
            rt = eval_res(trial);
            if (rt < res) break;
        }
        if (!std::isfinite(rt)) throw NoConvergence("solve_case22: left the domain delta * M2 > 0");
        if (!(rt < res) && res < 1e-11) break;  // rounding floor
        u = trial;
        res = rt;
    }
    if (!(res < 1e-11)) throw NoConvergence("solve_case22: residual " + std::to_string(res));
    return u;
}

CurvePoint case22_point(int delta, double t, const Case22Unknowns& u) {
    CurvePoint pt{t, u.m1, u.m2, std::nullopt};
    pt.witness = case22_witness(delta, t, u);
    return pt;
}

}  // namespace

CurvePoint solve_case22(int delta, double t, const Case22Unknowns& seed) {
    return case22_point(delta, t, newton_case22(delta, t, seed));
}

Case22Path continue_case22(int delta, double t_start, const Case22Unknowns& seed, double t_end, int n_steps) {
    if (n_steps < 1) throw std::invalid_argument("continue_case22: n_steps must be >= 1");
    const double dt = (t_end - t_start) / n_steps;
    Case22Path path;
    Case22Unknowns cur = newton_case22(delta, t_start, seed);
    path.points.push_back(case22_point(delta, t_start, cur));
    std::optional<Case22Unknowns> prev;
    double t = t_start, t_prev = t_start;
    double h = dt;
    // regular points strictly before t_end
    while (std::fabs(t_end - t) > 1.5 * std::fabs(dt) - 1e-15) {
        Case22Unknowns guess = cur;
        if (prev) {
            const double r = h / (t - t_prev);
            guess = {cur.y + r * (cur.y - prev->y), cur.m1 + r * (cur.m1 - prev->m1), cur.m2 + r * (cur.m2 - prev->m2)};
        }
        try {
            const Case22Unknowns next = newton_case22(delta, t + h, guess);
            prev = cur;
            t_prev = t;
            cur = next;
            t += h;
            path.points.push_back(case22_point(delta, t, cur));
            h = std::fabs(h) * 2.0 > std::fabs(dt) ? dt : 2.0 * h;
        } catch (const NumericalError&) {
            h *= 0.5;
            if (std::fabs(h) < 1e-6 * std::fabs(dt)) throw;
        }
    }
    Case22Unknowns guess = cur;
    if (prev) {
        const double r = (t_end - t) / (t - t_prev);
        guess = {cur.y + r * (cur.y - prev->y), cur.m1 + r * (cur.m1 - prev->m1), cur.m2 + r * (cur.m2 - prev->m2)};
    }
    path.terminal = case22_point(delta, t_end, newton_case22(delta, t_end, guess));
    return path;
}

double ParamResiduals::max_abs_plus() const {
    return std::max({std::fabs(closure_x), std::fabs(closure_y), std::fabs(param_x), std::fabs(param_y),
                     std::fabs(trace_plus)});
}

double ParamResiduals::max_abs_minus() const {
    return std::max({std::fabs(closure_x), std::fabs(closure_y), std::fabs(param_x), std::fabs(param_y),
                     std::fabs(trace_minus)});
}

ParamResiduals parametrization_residuals(int delta, double t1, double t2, double m1, double m2) {
    if (delta != 1 && delta != -1) throw std::invalid_argument("delta must be +1 or -1");
    if (!(delta * m2 > 0.0)) throw OutOfDomain("parametrization_residuals: need delta * M2 > 0");
    MapSpec::make(delta, m1, m2);
    // Each residual is reported as a backward error: the raw value over its
    // first-order sensitivity sum |dr/dp| |p| to the four inputs, floored at 1.
    // Near the ends of Case 1.2 M2 is unbounded and the trace condition
    // amplifies input rounding by ~1e7, so raw values are not comparable.
    using D = Dual<4>;
    const D T1 = D::variable(t1, 0), T2 = D::variable(t2, 1), M1 = D::variable(m1, 2), M2 = D::variable(m2, 3);
    const double d = delta;
    const std::array<double, 4> mag{std::fabs(t1), std::fabs(t2), std::fabs(m1), std::fabs(m2)};
    const D a = sqrt(d * M2 / 3.0), b = sqrt(d * M2);
    const D x = a * cos(T2) - b * sin(T2);
    const D y = a * cos(T1) - b * sin(T1);
    auto P = [&](const D& u) { return M1 + M2 * u - d * u * u * u; };
    auto dP = [&](const D& u) { return M2 - 3.0 * d * u * u; };
    auto backward = [&](const D& r) {
        double s = 0.0;
        for (int i = 0; i < 4; ++i) s += std::fabs(r.d[i]) * mag[i];
        return r.v / std::max(1.0, s);
    };
    const D px = P(x), py = P(y);
    ParamResiduals r;
    r.closure_x = backward((y * y - y * px + px * px - d * M2) * (px - 2.0 * y));
    r.closure_y = backward((x * x - x * py + py * py - d * M2) * (py - 2.0 * x));
    r.param_x = backward(px - 2.0 * a * cos(T1));
    r.param_y = backward(py - 2.0 * a * cos(T2));
    // slopes P' at the y-coordinates of C^-2 Q, C^-1 Q, Q, C Q
    const D pa = dP(px - y), pb = dP(x), pc = dP(y), pd = dP(py - x);
    const D tr = (pa + pc) * (pb + pd) - pa * pb * pc * pd;
    r.trace_plus = backward(tr);
    r.trace_minus = backward(tr - 4.0);
    r.degenerate = std::fabs(std::sin(t1)) < 1e-12 && std::fabs(std::sin(t2)) < 1e-12;
    return r;
}

CaseSample case11_sample(int delta, double t1) {
    const double c = std::cos(t1);
    const double den = std::fabs(4.0 * c * c - 1.0);
    if (den < 1e-12) throw OutOfDomain("case11_sample: 4 cos^2 t1 = 1");
    const double m2 = delta / den;
    const double m1 = kTwoOver3Sqrt3 * std::sqrt(delta * m2) * (3.0 * c - m2 * std::cos(3.0 * t1));
    return {t1, t1, m1, m2};
}

CaseSample case12_sample(double t) {
    constexpr double r2 = std::numbers::sqrt2, r3 = std::numbers::sqrt3;
    if (t == 0.0) throw OutOfDomain("case12_sample: t = 0");
    const double c1 = r2 / 8.0 * (1.0 - r3) * t - r2 / 8.0 * (1.0 + r3) / t;
    const double c2 = r2 / 8.0 * (1.0 + r3) * t - r2 / 8.0 * (1.0 - r3) / t;
    if (std::fabs(c1) > 1.0 + 1e-12 || std::fabs(c2) > 1.0 + 1e-12)
        throw OutOfDomain("case12_sample: t outside [t-, t+]");
    const double t1 = std::acos(std::clamp(c1, -1.0, 1.0)), t2 = std::acos(std::clamp(c2, -1.0, 1.0));
    const double m2 = -4.0 * t * t / (t * t * t * t - 4.0 * t * t + 1.0);
    const double m1 = kTwoOver3Sqrt3 * std::sqrt(m2) * (3.0 * std::cos(t2) - m2 * std::cos(3.0 * t1));
    return {t1, t2, m1, m2};
}

CaseSample case21_sample(double t, int sign) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("case21_sample: sign must be +1 or -1");
    const double den = 2.0 * std::cos(t) + sign;
    if (std::fabs(den) < 1e-12) throw OutOfDomain("case21_sample: 2 cos t + sign = 0");
    const double m2 = -3.0 / (den * den);
    const double a = std::sqrt(-m2 / 3.0);
    const double k = kTwoOver3Sqrt3 * m2 * std::sqrt(-m2);
    const double m1 = 2.0 * a * std::cos(t) - sign * k;
    return {sign > 0 ? 0.0 : std::numbers::pi, t, m1, m2};
}

}  // namespace h14
