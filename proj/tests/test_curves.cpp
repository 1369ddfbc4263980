#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "h14/curves.hpp"
#include "h14/errors.hpp"

using namespace h14;


TEST_CASE("closed-form landmarks") {
    CHECK(curve_point(CurveId::L4_1, 1.0 / 3.0).m1 == doctest::Approx(16.0 / 27.0).epsilon(1e-14));
    CHECK(curve_point(CurveId::B4_r, -1.0 / 3.0).m1 == doctest::Approx(20.0 / 27.0).epsilon(1e-14));
    CHECK(std::fabs(curve_point(CurveId::Dbar4_l, -3.0).m1) < 1e-14);
    CHECK(curve_point(CurveId::L4_3, 1.0).m1 == 0.0);
    CHECK(std::fabs(curve_point(CurveId::D4_l, -3.0).m1) < 1e-14);
    CHECK(std::fabs(curve_point(CurveId::D4_r, -3.0).m1) < 1e-14);
    CHECK(std::fabs(curve_point(CurveId::Bhat4_r, -2.0).m1) < 1e-14);
    // B4 and Bhat4 meet at the degeneracy point
    CHECK(curve_point(CurveId::Bhat4_r, -1.0 / 3.0).m1 == doctest::Approx(20.0 / 27.0).epsilon(1e-14));
}

TEST_CASE("names round trip") {
    for (CurveId id : closed_form_curves()) CHECK(curve_from_name(to_string(id)) == id);
    CHECK(curve_from_name("Dhat4_l") == CurveId::Dhat4_l);
    CHECK_THROWS_AS(curve_from_name("L9"), std::invalid_argument);
}

TEST_CASE("domains") {
    CHECK_THROWS_AS(curve_point(CurveId::L4_1, 0.2), OutOfDomain);
    CHECK_THROWS_AS(curve_point(CurveId::B4_r, 0.0), OutOfDomain);
    CHECK_THROWS_AS(curve_point(CurveId::Dhat4_l, -3.0), OutOfDomain);
    CHECK_THROWS_AS(curve_point(CurveId::Ltilde4_sym, 0.5), OutOfDomain);
    CHECK_THROWS_AS(resonance_curve(1, -0.1), OutOfDomain);
    CHECK_THROWS_AS(resonance_curve(-1, 0.1), OutOfDomain);
}

TEST_CASE("resonance curve") {
    auto [p, m] = resonance_curve(1, 1.0 / 3.0);
    CHECK(p == doctest::Approx(16.0 / 27.0).epsilon(1e-14));
    CHECK(m == -p);
    std::tie(p, m) = resonance_curve(1, 3.0);
    CHECK(p == 0.0);
    std::tie(p, m) = resonance_curve(-1, -1.0 / 3.0);
    CHECK(p == doctest::Approx(20.0 / 27.0).epsilon(1e-14));
    for (int branch : {1, -1}) {
        const auto [spec, fp] = resonant_fixed_point(1, 0.7, branch);
        CHECK(spec.m1 * branch > 0.0);
        const PhasePoint q = eval(spec, fp);
        CHECK(std::fabs(q.x - fp.x) < 1e-14);
        CHECK(std::fabs(q.y - fp.y) < 1e-14);
        CHECK(std::fabs(spec.dP(fp.y)) < 1e-14);
    }
}

TEST_CASE("relation residuals and branch symmetry") {
    for (CurveId id : closed_form_curves()) {
        const auto [lo, hi] = sample_window(id);
        for (int i = 0; i < 100; ++i) {
            const double m2 = lo + (hi - lo) * i / 99.0;
            const CurvePoint p = curve_point(id, m2);
            CHECK(std::fabs(curve_relation_residual(id, p.m1, p.m2)) < 1e-10);
            const CurvePoint q = curve_point(mirror_curve(id), m2);
            if (mirror_curve(id) != id) CHECK(q.m1 == doctest::Approx(-p.m1).epsilon(1e-15));
        }
    }
}

TEST_CASE("every closed-form curve carries its parabolic orbit") {
    for (CurveId id : closed_form_curves()) {
        const CurveInfo info = curve_info(id);
        const auto [lo, hi] = sample_window(id);
        int ok = 0;
        for (int i = 0; i < 25; ++i) {
            const double m2 = lo + (hi - lo) * i / 24.0;
            const CurvePoint p = curve_point(id, m2);
            try {
                const PeriodicOrbit o = curve_witness(id, p.m1, p.m2);
                CHECK(o.period == info.witness_period);
                CHECK(std::fabs(o.trace - info.trace_target) < 1e-6);
                ++ok;
            } catch (const NumericalError& e) {
                FAIL_CHECK(to_string(id) << " at M2=" << m2 << ": " << e.what());
            }
        }
        CHECK(ok == 25);
    }
}

TEST_CASE("tangency of L4_1 with the resonance curve at M2 = 1/3") {
    const double m2 = 1.0 / 3.0;
    const double s1 = curve_slope(CurveId::L4_1, m2), s2 = curve_slope(CurveId::L_pi2_minus, m2);
    CHECK(std::fabs(s1 - s2) < 1e-8);
    CHECK(s1 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    const double h = 1e-4;
    const double c1 = (curve_slope(CurveId::L4_1, m2 + 2 * h) - curve_slope(CurveId::L4_1, m2 + h)) / h;
    const double c2 = (curve_slope(CurveId::L_pi2_minus, m2 + 2 * h) - curve_slope(CurveId::L_pi2_minus, m2 + h)) / h;
    CHECK(std::fabs(c1 - c2) > 0.1);
    CHECK(curve_point(CurveId::L_pi2_minus, m2).m1 == doctest::Approx(16.0 / 27.0).epsilon(1e-14));
}

TEST_CASE("D4 is the period doubling of the symmetric 2-orbit") {
    for (CurveId id : {CurveId::D4_l, CurveId::D4_r}) {
        for (double m2 : {-3.0, -3.2, -3.5}) {
            const CurvePoint p = curve_point(id, m2);
            const MapSpec s{-1, p.m1, p.m2};
            const auto two = find_symmetric_orbits(s, 2, -4.0, 4.0, 4000, SymmetryLine::second_reversor);
            double best = 1e9;
            for (const auto& o : two) best = std::min(best, std::fabs(o.trace + 2.0));
            CHECK(best < 1e-8);
        }
    }
}

TEST_CASE("symmetric trace -2 family") {
    const double t = std::numbers::pi / 2;
    for (int delta : {1, -1}) {
        const CurvePoint p = ltilde_sym_point(delta, t, 1);
        CHECK(std::fabs(p.m1) < 1e-10);
        CHECK(std::fabs(p.m2 - delta / std::numbers::sqrt2) < 1e-10);
        const CurvePoint q = ltilde_sym_point(delta, t, -1);
        CHECK(std::fabs(q.m2 - delta / std::numbers::sqrt2) < 1e-10);
    }
    const double tmin = std::acos(std::sqrt(0.4));
    int witnessed = 0;
    for (int i = 0; i < 100; ++i) {
        const double t1 = tmin + (std::numbers::pi - 2 * tmin) * (i + 0.5) / 100.0;
        for (int branch : {1, -1}) {
            try {
                const CurvePoint p = ltilde_sym_point(1, t1, branch);
                CHECK(std::fabs(ltilde_relation_residual(p.m2, t1)) < 1e-12);
                if (p.witness) {
                    ++witnessed;
                    CHECK(std::fabs(p.witness->trace + 2.0) < 1e-6);
                }
            } catch (const NoRealRoot&) {
            }
        }
    }
    CHECK(witnessed > 100);
    CHECK_THROWS_AS(ltilde_sym_point(1, 0.1, 1), OutOfDomain);
    // L~4 meets M1 = 0.8 between the two portraits of the pitchfork sequence
    double lo = 0.9, hi = 1.05;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (ltilde_sym_point(1, mid, -1).m1 > 0.8 ? lo : hi) = mid;
    }
    const double m2 = ltilde_sym_point(1, lo, -1).m2;
    CHECK(m2 > 0.65);
    CHECK(m2 < 0.748);
}

TEST_CASE("Case 2.2 curve") {
    // the t -> 0 limit where the 4-orbit merges with the symmetric 2-orbit
    const CurvePoint end = solve_case22(-1, 0.0, {-0.95, 0.04, -2.94});
    CHECK(end.m1 == doctest::Approx(0.041064).epsilon(1e-4));
    CHECK(end.m2 == doctest::Approx(-2.944529).epsilon(1e-6));

    const Case22Path path = continue_case22(-1, 0.3, {-1.04, -0.43, -3.49}, 0.0, 60);
    CHECK(path.points.size() >= 50);
    for (const CurvePoint& p : path.points) {
        CHECK(p.witness.has_value());
        if (p.witness) {
            CHECK(p.witness->period == 4);
            CHECK(std::fabs(p.witness->trace - 2.0) < 1e-6);
        }
    }
    CHECK(std::fabs(path.terminal.m1 - 0.041064) < 1e-4);
    CHECK(std::fabs(path.terminal.m2 + 2.944529) < 1e-4);
    // the branch continued from t = 0.3 lies at M1 < 0
    CHECK(path.points.front().m1 < 0.0);
    CHECK_THROWS_AS(solve_case22(-1, 0.3, {0.0, 0.0, 1.0}), OutOfDomain);
}

TEST_CASE("Case 2.2 residuals at the solution") {
    const CurvePoint p = solve_case22(-1, 0.2, {-1.0, -0.17, -3.2});
    // recover y from the third equation and check all three
    const double y = 0.5 * (p.m1 + 2.0 / (3.0 * std::sqrt(3.0)) * p.m2 * std::sqrt(-p.m2) * std::cos(0.6));
    const auto r = case22_residuals(-1, 0.2, {y, p.m1, p.m2});
    CHECK(std::fabs(r[0]) < 1e-10);
    CHECK(std::fabs(r[1]) < 1e-10);
    CHECK(std::fabs(r[2]) < 1e-10);
}

TEST_CASE("parametrization residuals") {
    SUBCASE("Case 1.1 on L4_1") {
        for (double t1 : {0.2, 0.5, 0.9}) {
            const CaseSample cs = case11_sample(1, t1);
            CHECK(cs.m2 > 1.0 / 3.0);
            CHECK(std::fabs(curve_relation_residual(CurveId::L4_1, cs.m1, cs.m2)) < 1e-10);
            const ParamResiduals r = parametrization_residuals(1, cs.t1, cs.t2, cs.m1, cs.m2);
            CHECK(r.max_abs_plus() < 1e-10);
            CHECK_FALSE(r.degenerate);
        }
    }
    SUBCASE("Case 1.2 on L4_4") {
        for (int i = 0; i < 100; ++i) {
            const double t = kCase12TMinus + (kCase12TPlus - kCase12TMinus) * (i + 0.5) / 100.0;
            const CaseSample cs = case12_sample(t);
            CHECK(cs.m2 > 0.0);
            CHECK(std::fabs(curve_relation_residual(CurveId::L4_4, cs.m1, cs.m2)) < 1e-10 * (1 + cs.m2 * cs.m2 * cs.m2));
            CHECK(parametrization_residuals(1, cs.t1, cs.t2, cs.m1, cs.m2).max_abs_plus() < 1e-10);
        }
    }
    SUBCASE("Case 2.1 on B4 and Dbar4") {
        const CaseSample b = case21_sample(0.4, 1);
        CHECK(std::fabs(curve_relation_residual(CurveId::B4_r, b.m1, b.m2)) < 1e-10);
        CHECK(parametrization_residuals(-1, b.t1, b.t2, b.m1, b.m2).max_abs_plus() < 1e-10);
        const CaseSample d = case21_sample(0.4, -1);
        CHECK(std::fabs(curve_relation_residual(CurveId::Dbar4_l, d.m1, d.m2)) < 1e-10);
        CHECK(parametrization_residuals(-1, d.t1, d.t2, d.m1, d.m2).max_abs_plus() < 1e-10);
    }
    SUBCASE("trace -2 family") {
        const CurvePoint p = ltilde_sym_point(1, 1.2, -1);
        CHECK(parametrization_residuals(1, 1.2, 1.2, p.m1, p.m2).max_abs_minus() < 1e-10);
    }
    SUBCASE("off-curve points are rejected") {
        const CaseSample cs = case12_sample(1.9);
        CHECK(parametrization_residuals(1, cs.t1, cs.t2, cs.m1 * (1 + 1e-6), cs.m2).max_abs_plus() > 1e-8);
        const CaseSample b = case21_sample(0.4, 1);
        CHECK(parametrization_residuals(-1, b.t1, b.t2 + 1e-5, b.m1, b.m2).max_abs_plus() > 1e-7);
    }
    SUBCASE("degenerate and invalid") {
        CHECK(parametrization_residuals(1, 0.0, 0.0, 0.3, 0.5).degenerate);
        CHECK_THROWS_AS(parametrization_residuals(1, 0.1, 0.2, 0.3, -0.5), OutOfDomain);
    }
}
