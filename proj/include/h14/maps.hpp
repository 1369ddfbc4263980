#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace h14 {

// delta = +1 is the map C- ("minus"), delta = -1 is C+ ("plus").
// P(y) = M1 + M2 y - delta y^3 and C(x, y) = (y, -x + P(y)).
struct MapSpec {
    int delta = 1;
    double m1 = 0.0;
    double m2 = 0.0;

    static MapSpec make(int delta, double m1, double m2);
    void validate() const;

    template <class T>
    T P(const T& y) const {
        return m1 + m2 * y - static_cast<double>(delta) * y * y * y;
    }
    double dP(double y) const { return m2 - 3.0 * delta * y * y; }
};

// "minus" -> +1, "plus" -> -1; throws std::invalid_argument otherwise.
int delta_from_name(std::string_view name);
std::string_view map_name(int delta);

struct PhasePoint {
    double x = 0.0;
    double y = 0.0;
};

inline bool operator==(const PhasePoint& a, const PhasePoint& b) { return a.x == b.x && a.y == b.y; }

struct Jacobian2 {
    double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;

    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a21; }
};

Jacobian2 operator*(const Jacobian2& a, const Jacobian2& b);

inline constexpr double kDefaultEscapeRadius = 10.0;

PhasePoint eval(const MapSpec& spec, PhasePoint p);
PhasePoint eval_inverse(const MapSpec& spec, PhasePoint p);
Jacobian2 jacobian(const MapSpec& spec, PhasePoint p);

// Reversor R(x, y) = (y, x) and the second reversor R' = C o R.
inline PhasePoint reflect(PhasePoint p) { return {p.y, p.x}; }
PhasePoint second_reversor(const MapSpec& spec, PhasePoint p);

struct IterateResult {
    PhasePoint point;
    Jacobian2 jac;
    std::optional<int> escaped_at;  // step index at which |x| or |y| first exceeded the radius

    bool escaped() const { return escaped_at.has_value(); }
};

// C^n(p) together with D C^n(p). On escape, point/jac hold the last state
// inside the radius.
IterateResult iterate(const MapSpec& spec, PhasePoint p, int n,
                      double escape_radius = kDefaultEscapeRadius);

enum class Stability { elliptic, hyperbolic, parabolic };

Stability classify_trace(double trace);
std::string_view to_string(Stability s);

struct FixedPoint {
    PhasePoint point;
    double trace = 0.0;
    Stability stability = Stability::elliptic;
};

// All real roots of delta y^3 + (2 - M2) y - M1 = 0 as points (y, y),
// sorted by y.
std::vector<FixedPoint> fixed_points(const MapSpec& spec);

// Generic evaluation used by the dual-number solvers.
template <class T>
std::array<T, 2> eval_generic(int delta, const T& m1, const T& m2, const T& x, const T& y) {
    const T py = m1 + m2 * y - static_cast<double>(delta) * y * y * y;
    return {y, py - x};
}

}  // namespace h14
