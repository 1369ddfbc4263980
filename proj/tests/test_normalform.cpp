#include <doctest.h>

#include <cmath>
#include <random>

#include "h14/curves.hpp"
#include "h14/errors.hpp"
#include "h14/normalform.hpp"

using namespace h14;

TEST_CASE("complexify") {
    const auto [spec, fp] = resonant_fixed_point(1, 1.0 / 3.0, -1);
    CHECK(spec.m1 == doctest::Approx(-16.0 / 27.0));
    CHECK(fp.x == doctest::Approx(-1.0 / 3.0));
    const ComplexifiedMap cm = complexify(spec, fp);
    CHECK(cm.series.coeff(1, 0) == cplx(0.0, 1.0));
    CHECK(cm.series.coeff(0, 1) == cplx(0.0, 0.0));
    // translation produces both quadratic and cubic terms, nothing above
    CHECK(cm.series.degree_part(2).is_zero() == false);
    CHECK(cm.series.degree_part(3).is_zero() == false);
    CHECK(cm.series.degree_part(4).is_zero());
    CHECK(cm.series.degree_part(5).is_zero());
    // -3 d y* v^2 with v = i (z - z*)/2 and y* = -1/3: the z^2 slot is -i * (1 * -1/4)
    CHECK(std::abs(cm.series.coeff(2, 0) - cplx(0.0, 0.25)) < 1e-15);
    // the series is the real map in the complex coordinate
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const cplx z(0.1 * u(rng), 0.1 * u(rng));
        const cplx direct = to_complex(fp, eval(spec, from_complex(fp, z)));
        CHECK(std::abs(direct - cm.series.eval(z)) < 1e-10 * std::abs(z));
    }
    CHECK_THROWS_AS(complexify(MapSpec{1, spec.m1, 0.5}, fixed_points(MapSpec{1, spec.m1, 0.5})[0].point), NotResonant);
}

TEST_CASE("minus map at the degeneracy A = 1") {
    const NormalFormCoeffs c = normal_form_at(1, 1.0 / 3.0);
    CHECK(8.0 * c.b21.real() == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(8.0 * c.b03.real() == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(std::fabs(c.b03.imag()) < 1e-14);
    REQUIRE(c.a_ratio);
    CHECK(*c.a_ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(c.omega + 0.25) < 0.02);
    CHECK(c.phase_rotation == 0.0);
}

TEST_CASE("plus map where B03 vanishes") {
    const NormalFormCoeffs c = normal_form_at(-1, -1.0 / 3.0);
    CHECK(std::abs(c.b03) < 1e-9);
    CHECK(c.b21.real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_FALSE(c.a_ratio);
    CHECK(c.b14.real() == doctest::Approx(-5.0 / 64.0).epsilon(0.02));
    CHECK(c.phase_rotation == 0.0);
}

TEST_CASE("closed forms of B21 and B03 and area-preservation identities") {
    for (int delta : {1, -1}) {
        for (int i = 0; i < 40; ++i) {
            const double m2 = delta * (0.01 + 0.1 * i);
            const NormalFormCoeffs c = normal_form_at(delta, m2);
            CHECK(std::fabs(8.0 * c.b21.real() + delta * (3.0 - 3.0 * m2)) < 1e-9);
            CHECK(std::fabs(8.0 * c.b03.real() + delta * (1.0 + 3.0 * m2)) < 1e-9);
            CHECK(c.identity_i() < 1e-9);
            CHECK(c.identity_ii() < 1e-8);
            CHECK(c.identity_iii() < 1e-8);
            CHECK(c.identity_iv() < 1e-8);
            if (delta == 1) CHECK(c.b03.real() <= 0.0);
        }
    }
}

TEST_CASE("branch independence") {
    for (auto [delta, m2] : {std::pair{1, 0.7}, std::pair{-1, -1.8}}) {
        const NormalFormCoeffs a = normal_form_at(delta, m2, 1), b = normal_form_at(delta, m2, -1);
        CHECK(a.spec.m1 == doctest::Approx(-b.spec.m1));
        CHECK(std::abs(a.b21 - b.b21) < 1e-12);
        CHECK(std::abs(a.b03 - b.b03) < 1e-12);
        CHECK(std::abs(a.b32 - b.b32) < 1e-12);
        CHECK(std::abs(a.b50 - b.b50) < 1e-12);
        CHECK(std::abs(a.b14 - b.b14) < 1e-12);
    }
}

TEST_CASE("the reduction is a conjugacy") {
    for (int deg : {5, 7}) {
        const auto [spec, fp] = resonant_fixed_point(1, 0.8, 1);
        const ComplexifiedMap cm = complexify(spec, fp, deg);
        const BirkhoffResult br = birkhoff_reduce_series(cm.series);
        const TruncatedSeries rot = TruncatedSeries::z(deg) * std::polar(1.0, br.phase_rotation);
        const TruncatedSeries T = br.transform.compose(rot);
        CHECK(cm.series.compose(T).max_abs_diff(T.compose(br.normal_form)) < 1e-9);
        // only resonant monomials survive
        for (int j = 0; j <= deg; ++j)
            for (int k = 0; j + k <= deg; ++k)
                if (((j - k - 1) % 4 + 4) % 4 != 0) CHECK(br.normal_form.coeff(j, k) == cplx{});
    }
}

TEST_CASE("normal form predicts the real map to sixth order") {
    const auto [spec, fp] = resonant_fixed_point(-1, -1.4, 1);
    const ComplexifiedMap cm = complexify(spec, fp);
    const BirkhoffResult br = birkhoff_reduce_series(cm.series);
    const TruncatedSeries T = br.transform.compose(TruncatedSeries::z(5) * std::polar(1.0, br.phase_rotation));
    // T(G(w)) vs C(T(w)) at small w
    double prev = 0.0;
    for (double r : {2e-2, 1e-2}) {
        const cplx w = std::polar(r, 0.4);
        const cplx lhs = T.eval(br.normal_form.eval(w));
        const cplx rhs = to_complex(fp, eval(spec, from_complex(fp, T.eval(w))));
        const double err = std::abs(lhs - rhs);
        if (prev > 0.0) CHECK(err < prev / 30.0);
        prev = err;
    }
}

TEST_CASE("coefficient scans") {
    SUBCASE("minus map: A follows its closed form") {
        const ScanResult s = coefficient_scan(1, 0.05, 3.0, 60, 2);
        CHECK(s.rows.size() == 60);
        for (std::size_t i = 0; i < s.rows.size(); ++i) {
            const ScanRow& r = s.rows[i];
            if (i > 0) CHECK(r.m2 > s.rows[i - 1].m2);
            CHECK(r.m1 >= 0.0);
            REQUIRE(r.coeffs.a_ratio);
            CHECK(std::fabs(*r.coeffs.a_ratio - std::fabs(3 - 3 * r.m2) / (1 + 3 * r.m2)) < 1e-8);
        }
    }
    SUBCASE("plus map: A > 1 and Im B14, Im B50 vanish together at -1/3") {
        const ScanResult s = coefficient_scan(-1, -3.0, -0.01, 300);
        CHECK(s.rows.size() == 300);
        int sign_changes_14 = 0, sign_changes_50 = 0;
        double at14 = 0, at50 = 0;
        for (std::size_t i = 0; i < s.rows.size(); ++i) {
            const auto& c = s.rows[i].coeffs;
            if (c.a_ratio) CHECK(*c.a_ratio > 1.0);
            if (i == 0) continue;
            const auto& p = s.rows[i - 1].coeffs;
            if ((p.b14.imag() > 0) != (c.b14.imag() > 0)) ++sign_changes_14, at14 = s.rows[i].m2;
            if ((p.b50.imag() > 0) != (c.b50.imag() > 0)) ++sign_changes_50, at50 = s.rows[i].m2;
        }
        CHECK(sign_changes_14 == 1);
        CHECK(sign_changes_50 == 1);
        CHECK(at14 == at50);
        CHECK(std::fabs(at14 + 1.0 / 3.0) < 0.01);
        const NormalFormCoeffs c = normal_form_at(-1, -1.0 / 3.0);
        CHECK(std::fabs(c.b14.imag()) < 1e-12);
        CHECK(std::fabs(c.b50.imag()) < 1e-12);
    }
    SUBCASE("scan is independent of the job count") {
        const ScanResult a = coefficient_scan(1, 0.1, 2.0, 17, 1), b = coefficient_scan(1, 0.1, 2.0, 17, 4);
        REQUIRE(a.rows.size() == b.rows.size());
        for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].coeffs.b32 == b.rows[i].coeffs.b32);
    }
    CHECK_THROWS_AS(coefficient_scan(1, -1.0, 1.0, 5), OutOfDomain);
}
