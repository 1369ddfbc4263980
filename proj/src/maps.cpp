#include "h14/maps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace h14 {

MapSpec MapSpec::make(int delta, double m1, double m2) {
    MapSpec s{delta, m1, m2};
    s.validate();
    return s;
}

void MapSpec::validate() const {
    if (delta != 1 && delta != -1) throw std::invalid_argument("map sign must be +1 or -1");
    if (!std::isfinite(m1) || !std::isfinite(m2)) throw std::invalid_argument("map parameters must be finite");
}

int delta_from_name(std::string_view name) {
    if (name == "minus") return 1;
    if (name == "plus") return -1;
    throw std::invalid_argument("unknown map '" + std::string(name) + "' (expected minus|plus)");
}

std::string_view map_name(int delta) { return delta == 1 ? "minus" : "plus"; }

Jacobian2 operator*(const Jacobian2& a, const Jacobian2& b) {
    return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
            a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}

PhasePoint eval(const MapSpec& spec, PhasePoint p) { return {p.y, spec.P(p.y) - p.x}; }

// Literally R o C o R, so backward orbits are exact mirror images of forward ones.
PhasePoint eval_inverse(const MapSpec& spec, PhasePoint p) { return reflect(eval(spec, reflect(p))); }

Jacobian2 jacobian(const MapSpec& spec, PhasePoint p) { return {0.0, 1.0, -1.0, spec.dP(p.y)}; }

PhasePoint second_reversor(const MapSpec& spec, PhasePoint p) { return eval(spec, reflect(p)); }

IterateResult iterate(const MapSpec& spec, PhasePoint p, int n, double escape_radius) {
    if (n < 0) throw std::invalid_argument("iterate: n must be >= 0");
    IterateResult r{p, Jacobian2{}, std::nullopt};
    auto outside = [&](PhasePoint q) { return std::fabs(q.x) > escape_radius || std::fabs(q.y) > escape_radius; };
    if (outside(p)) {
        r.escaped_at = 0;
        return r;
    }
    for (int k = 1; k <= n; ++k) {
        const PhasePoint next = eval(spec, r.point);
        if (outside(next)) {
            r.escaped_at = k;
            return r;
        }
        r.jac = jacobian(spec, r.point) * r.jac;
        r.point = next;
    }
    return r;
}

Stability classify_trace(double trace) {
    const double a = std::fabs(trace);
    if (a < 2.0 - 1e-8) return Stability::elliptic;
    if (a > 2.0 + 1e-8) return Stability::hyperbolic;
    return Stability::parabolic;
}

std::string_view to_string(Stability s) {
    switch (s) {
        case Stability::elliptic: return "elliptic";
        case Stability::hyperbolic: return "hyperbolic";
        case Stability::parabolic: return "parabolic";
    }
    return "?";
}

namespace {

// Real roots of y^3 + p y + q = 0.
std::vector<double> depressed_cubic_roots(double p, double q) {
    std::vector<double> roots;
    const double disc = -(4.0 * p * p * p + 27.0 * q * q);
    const double scale = std::max({1.0, std::fabs(p * p * p), q * q});
    if (std::fabs(disc) <= 1e-14 * scale) {
        if (p == 0.0) {
            roots.push_back(0.0);
        } else {
            // double root -3q/(2p), simple root 3q/p
            roots.push_back(3.0 * q / p);
            roots.push_back(-1.5 * q / p);
        }
    } else if (disc > 0.0) {
        const double m = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) roots.push_back(m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0));
    } else {
        const double s = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
        roots.push_back(std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s));
    }
    return roots;
}

}  // namespace

std::vector<FixedPoint> fixed_points(const MapSpec& spec) {
    spec.validate();
    const double d = spec.delta;
    // delta y^3 + (2 - M2) y - M1 = 0, divided by delta
    const double p = d * (2.0 - spec.m2);
    const double q = -d * spec.m1;
    std::vector<double> ys = depressed_cubic_roots(p, q);
    for (double& y : ys) {
        const double f = y * y * y + p * y + q;
        const double df = 3.0 * y * y + p;
        if (df != 0.0) y -= f / df;
    }
    std::sort(ys.begin(), ys.end());
    std::vector<FixedPoint> out;
    for (double y : ys) {
        const double tr = spec.dP(y);
        out.push_back({{y, y}, tr, classify_trace(tr)});
    }
    return out;
}

}  // namespace h14
