#include "h14/normalform.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "h14/curves.hpp"
#include "h14/errors.hpp"
#include "h14/parallel.hpp"

namespace h14 {

namespace {

constexpr double kResonanceTol = 1e-10;

bool resonant(int j, int k) { return (((j - k - 1) % 4) + 4) % 4 == 0; }

// i^n for integer n
cplx ipow(int n) {
    switch (((n % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

}  // namespace

cplx to_complex(PhasePoint fp, PhasePoint p) { return {p.x - fp.x, -(p.y - fp.y)}; }

PhasePoint from_complex(PhasePoint fp, cplx z) { return {fp.x + z.real(), fp.y - z.imag()}; }

ComplexifiedMap complexify(const MapSpec& spec, PhasePoint fp, int max_degree) {
    spec.validate();
    if (std::fabs(fp.x - fp.y) > 1e-9) throw std::invalid_argument("complexify: fixed points lie on the diagonal");
    const PhasePoint img = eval(spec, fp);
    if (std::fabs(img.x - fp.x) > 1e-9 || std::fabs(img.y - fp.y) > 1e-9)
        throw std::invalid_argument("complexify: point is not fixed");
    const double ys = fp.y, d = spec.delta;
    // (u, v) -> (v, -u + lin v - 3 d ys v^2 - d v^3); lin = trace
    const double lin = spec.dP(ys);
    if (std::fabs(lin) > kResonanceTol) throw NotResonant("complexify: fixed-point trace " + std::to_string(lin) + " is not 0");
    const int D = max_degree;
    const TruncatedSeries z = TruncatedSeries::z(D), zb = TruncatedSeries::zbar(D);
    const TruncatedSeries v = (z - zb) * cplx(0.0, 0.5);
    const TruncatedSeries v2 = v * v;
    const TruncatedSeries N = v2 * cplx(-3.0 * d * ys) + (v2 * v) * cplx(-d);
    // z' = u' - i v' = v + i u - i N(v) = i z - i N
    TruncatedSeries F = z * cplx(0.0, 1.0) + N * cplx(0.0, -1.0);
    return {spec, fp, F};
}

BirkhoffResult birkhoff_reduce_series(const TruncatedSeries& series) {
    const int D = series.max_degree();
    if (std::abs(series.coeff(1, 0) - cplx(0.0, 1.0)) > 1e-12 || std::abs(series.coeff(0, 1)) > 1e-12 ||
        std::abs(series.coeff(0, 0)) > 0.0)
        throw NotResonant("birkhoff_reduce: linear part is not i z");
    TruncatedSeries G = series;
    TruncatedSeries T = TruncatedSeries::z(D);
    for (int m = 2; m <= D; ++m) {
        TruncatedSeries X(D);
        for (int j = 0; j <= m; ++j) {
            const int k = m - j;
            if (resonant(j, k)) continue;
            // divisors i - i^{j-k} are 1+i, 2i or ... never zero off resonance
            const cplx div = cplx(0.0, 1.0) - ipow(j - k);
            X.set(j, k, -G.coeff(j, k) / div);
        }
        if (X.is_zero()) continue;
        const TruncatedSeries phi = time_one_map(X);
        const TruncatedSeries phi_inv = time_one_map(X * cplx(-1.0));
        G = phi_inv.compose(G.compose(phi));
        T = T.compose(phi);
    }
    // drop rounding leftovers in the removed slots
    for (int j = 0; j <= D; ++j)
        for (int k = 0; j + k <= D; ++k)
            if (j + k >= 2 && !resonant(j, k)) G.set(j, k, 0.0);

    // z -> e^{i theta} z scales c_jk by e^{i (j-k-1) theta}; B03 picks up e^{-4 i theta}.
    // Smallest |theta| making B03 real; theta = 0 when it already is.
    const cplx b03 = G.coeff(0, 3);
    double theta = 0.0;
    if (std::abs(b03) > 0.0 && std::fabs(b03.imag()) > 1e-14 * std::abs(b03)) {
        double phi = std::arg(b03);
        if (phi > std::numbers::pi / 2) phi -= std::numbers::pi;
        if (phi <= -std::numbers::pi / 2) phi += std::numbers::pi;
        theta = phi / 4.0;
    }
    if (theta != 0.0)
        for (int j = 0; j <= D; ++j)
            for (int k = 0; j + k <= D; ++k)
                G.set(j, k, G.coeff(j, k) * std::polar(1.0, (j - k - 1) * theta));
    return {G, T, theta};
}

NormalFormCoeffs birkhoff_reduce(const ComplexifiedMap& cm) {
    if (cm.series.max_degree() < 5) throw std::invalid_argument("birkhoff_reduce: need max_degree >= 5");
    const BirkhoffResult br = birkhoff_reduce_series(cm.series);
    const TruncatedSeries& G = br.normal_form;
    NormalFormCoeffs c;
    c.b21 = G.coeff(2, 1);
    c.b03 = G.coeff(0, 3);
    c.b32 = G.coeff(3, 2);
    c.b50 = G.coeff(5, 0);
    c.b14 = G.coeff(1, 4);
    if (std::abs(c.b03) > 1e-12) c.a_ratio = std::abs(c.b21 / c.b03);
    c.omega = (c.b32 - c.b50 - c.b14).real();
    c.spec = cm.spec;
    c.basepoint = cm.fixed_point;
    c.phase_rotation = br.phase_rotation;
    return c;
}

double NormalFormCoeffs::identity_i() const { return std::fabs(b21.imag()); }

double NormalFormCoeffs::identity_ii() const {
    const cplx I(0.0, 1.0);
    return std::abs(-3.0 * std::conj(b03) * b21 - 5.0 * I * b50 + I * std::conj(b14));
}

double NormalFormCoeffs::identity_iii() const {
    return std::fabs((3.0 * b21 * b21).real() + 6.0 * b32.imag() - 9.0 * std::norm(b03));
}

double NormalFormCoeffs::identity_iv() const { return std::fabs(b14.real() - 5.0 * b50.real()); }

NormalFormCoeffs normal_form_at(int delta, double m2, int branch, int max_degree) {
    const auto [spec, fp] = resonant_fixed_point(delta, m2, branch);
    return birkhoff_reduce(complexify(spec, fp, max_degree));
}

ScanResult coefficient_scan(int delta, double m2_lo, double m2_hi, int n, int jobs) {
    if (delta != 1 && delta != -1) throw std::invalid_argument("delta must be +1 or -1");
    if (n < 1) throw std::invalid_argument("coefficient_scan: n must be positive");
    if (!(m2_lo <= m2_hi)) throw std::invalid_argument("coefficient_scan: empty M2 range");
    if (delta * m2_lo < 0.0 || delta * m2_hi < 0.0) throw OutOfDomain("coefficient_scan: M2 range outside the resonance curve domain");
    std::vector<std::optional<ScanRow>> rows(static_cast<std::size_t>(n));
    std::vector<std::string> diag(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), jobs, [&](std::size_t i) {
        const double m2 = n == 1 ? m2_lo : m2_lo + (m2_hi - m2_lo) * static_cast<double>(i) / (n - 1);
        try {
            NormalFormCoeffs c = normal_form_at(delta, m2, 1);
            rows[i] = ScanRow{m2, c.spec.m1, c};
        } catch (const NumericalError& e) {
            diag[i] = "M2=" + std::to_string(m2) + ": " + e.what();
        }
    });
    ScanResult out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i]) out.rows.push_back(*rows[i]);
        if (!diag[i].empty()) out.diagnostics.push_back(diag[i]);
    }
    return out;
}

}  // namespace h14
