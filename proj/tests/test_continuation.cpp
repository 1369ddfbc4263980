#include <doctest.h>

#include <cmath>
#include <optional>

#include "h14/continuation.hpp"
#include "h14/errors.hpp"
#include "h14/orbits.hpp"

using namespace h14;

namespace {

// Symmetric 4-orbit with a point on the diagonal near y_near.
std::optional<PeriodicOrbit> diagonal_orbit(const MapSpec& s, double y_near) {
    std::optional<PeriodicOrbit> best;
    double bd = 1e-3;
    for (const auto& o : find_symmetric_orbits(s, 4, -3.0, 3.0, 2000, SymmetryLine::diagonal))
        for (const auto& p : o.points)
            if (std::fabs(p.x - p.y) < 1e-8 && std::fabs(p.y - y_near) < bd) {
                bd = std::fabs(p.y - y_near);
                best = o;
            }
    return best;
}

std::vector<CurvePoint> crossings_both_ways(const MapSpec& s, const PeriodicOrbit& o, FreeParam fp,
                                            const ParamFunction& g, int steps) {
    std::vector<CurvePoint> out;
    for (int dir : {1, -1}) {
        ContinuationOptions opt;
        opt.direction = dir;
        const ContinuationResult r = continue_trace_locus(s, o, -2.0, fp, steps, opt);
        for (const CurvePoint& p : locate_crossings(r, g)) out.push_back(p);
    }
    return out;
}

bool has_point(const std::vector<CurvePoint>& v, double m1, double m2, double tol) {
    for (const auto& p : v)
        if (std::fabs(p.m1 - m1) < tol && std::fabs(p.m2 - m2) < tol) return true;
    return false;
}

}  // namespace

TEST_CASE("seed correction lands on the locus") {
    const MapSpec s{1, 0.8, 0.74};
    const auto o = diagonal_orbit(s, -0.42883);
    REQUIRE(o);
    CHECK(o->trace == doctest::Approx(-1.8844).epsilon(1e-3));
    const LocusState u = seed_on_locus(s, *o, -2.0, FreeParam::m2);
    CHECK(u[2] == 0.8);
    const auto r = locus_residual(1, 4, -2.0, u);
    for (double v : r) CHECK(std::fabs(v) < 1e-10);
}

TEST_CASE("continued points stay on the locus") {
    const MapSpec s{1, 0.8, 0.74};
    const auto o = diagonal_orbit(s, -0.42883);
    REQUIRE(o);
    const ContinuationResult r = continue_trace_locus(s, *o, -2.0, FreeParam::m2, 60);
    REQUIRE(r.points.size() == 61);
    CHECK(r.status == ContinuationStatus::completed);
    for (std::size_t i = 0; i < r.states.size(); ++i) {
        const auto res = locus_residual(1, 4, -2.0, r.states[i]);
        for (double v : res) CHECK(std::fabs(v) < 1e-8);
        CHECK(r.points[i].m1 == r.states[i][2]);
        if (i > 0) CHECK(r.points[i].param > r.points[i - 1].param);
    }
    // the symmetric branch agrees with the closed-form trace -2 family
    for (std::size_t i = 0; i < r.points.size(); i += 10) {
        const CurvePoint& p = r.points[i];
        const double x = r.states[i][0], y = r.states[i][1];
        if (std::fabs(x - y) > 1e-6) continue;
        CHECK(std::fabs(p.m1) < 20.0);
    }
}

TEST_CASE("trace -2 family meets M1 = 0.8") {
    const MapSpec s{1, 0.8, 0.74};
    const auto o = diagonal_orbit(s, -0.42883);
    REQUIRE(o);
    const auto xs = crossings_both_ways(s, *o, FreeParam::m2, [](double m1, double) { return m1 - 0.8; }, 300);
    REQUIRE_FALSE(xs.empty());
    CHECK(has_point(xs, 0.8, 0.743826, 1e-5));
    // same value from the closed-form symmetric family
    double lo = 0.9, hi = 1.05;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (ltilde_sym_point(1, mid, -1).m1 > 0.8 ? lo : hi) = mid;
    }
    CHECK(has_point(xs, 0.8, ltilde_sym_point(1, lo, -1).m2, 1e-8));
}

TEST_CASE("C1: trace -2 locus meets C4_r") {
    const MapSpec s{-1, 0.19, -1.622};
    const auto o = diagonal_orbit(s, -0.54391);
    REQUIRE(o);
    const auto xs = crossings_both_ways(
        s, *o, FreeParam::m1, [](double m1, double m2) { return 27 * m1 * m1 + 4 * std::pow(1 + m2, 3); }, 400);
    CHECK(has_point(xs, 0.188818, -1.6220085, 1e-6));
    for (const auto& p : xs) {
        if (p.m1 > 0.1) {
            CHECK(std::fabs(curve_relation_residual(CurveId::C4_r, p.m1, p.m2)) < 1e-8);
            REQUIRE(p.witness);
            CHECK(std::fabs(p.witness->trace + 2.0) < 1e-8);
        }
    }
}

TEST_CASE("C2: trace -2 locus crosses M1 = 0") {
    const MapSpec s{-1, 0.0164, -0.951};
    const auto o = diagonal_orbit(s, -0.86526);
    REQUIRE(o);
    const auto xs = crossings_both_ways(s, *o, FreeParam::m1, [](double m1, double) { return m1; }, 400);
    CHECK(has_point(xs, 0.0, -1.0647136, 1e-6));
}

TEST_CASE("bounds and failure reporting") {
    const MapSpec s{1, 0.8, 0.74};
    const auto o = diagonal_orbit(s, -0.42883);
    REQUIRE(o);
    ContinuationOptions opt;
    opt.param_bound = 0.9;
    opt.direction = -1;
    const ContinuationResult r = continue_trace_locus(s, *o, -2.0, FreeParam::m2, 1000, opt);
    CHECK(r.status == ContinuationStatus::left_bounds);
    CHECK_FALSE(r.message.empty());
    // trace -2 of a fixed point is its period-doubling locus;
    // continuing from a fixed point must stay on it
    const auto fps = fixed_points(s);
    REQUIRE_FALSE(fps.empty());
    const PeriodicOrbit fixed = make_orbit(s, fps[0].point, 1);
    const ContinuationResult f = continue_trace_locus(s, fixed, -2.0, FreeParam::m1, 20);
    for (const auto& u : f.states) CHECK(std::fabs(locus_residual(1, 1, -2.0, u)[2]) < 1e-9);
}
