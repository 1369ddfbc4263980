#include "h14/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "h14/batch.hpp"
#include "h14/curves.hpp"
#include "h14/errors.hpp"
#include "h14/format.hpp"
#include "h14/nfflow.hpp"
#include "h14/normalform.hpp"
#include "h14/orbits.hpp"
#include "h14/portrait.hpp"

namespace h14 {

namespace {

// A check returns its worst residual and threshold.
struct Measure {
    double worst = 0.0;
    double bound = 0.0;
    std::string note;
};

CheckResult timed(const std::string& name, const std::function<Measure()>& f) {
    CheckResult r;
    r.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const Measure m = f();
        r.passed = m.worst < m.bound;
        char buf[96];
        std::snprintf(buf, sizeof buf, "worst %.3g (bound %.0e)", m.worst, m.bound);
        r.detail = buf + (m.note.empty() ? "" : "; " + m.note);
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

Measure structural() {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> par(-2.0, 2.0), pt(-1.5, 1.5);
    Measure m{0.0, 1e-12, "1e4 samples per map"};
    for (int delta : {1, -1}) {
        for (int i = 0; i < 10000; ++i) {
            const MapSpec s{delta, par(rng), par(rng)};
            const PhasePoint p{pt(rng), pt(rng)};
            m.worst = std::max(m.worst, std::fabs(jacobian(s, p).det() - 1.0));
            const PhasePoint a = eval_inverse(s, p), b = reflect(eval(s, reflect(p)));
            const PhasePoint c = eval(s, eval_inverse(s, p));
            m.worst = std::max({m.worst, std::fabs(a.x - b.x), std::fabs(a.y - b.y)});
            m.worst = std::max({m.worst, std::fabs(c.x - p.x) / (1 + std::fabs(p.x)), std::fabs(c.y - p.y) / (1 + std::fabs(p.y))});
            const PhasePoint q = second_reversor(s, second_reversor(s, p));
            const double sc = 1.0 + std::fabs(s.m1) + std::fabs(s.m2);
            m.worst = std::max({m.worst, std::fabs(q.x - p.x) / sc, std::fabs(q.y - p.y) / sc});
        }
    }
    return m;
}

Measure simd_equivalence() {
    PortraitRequest r;
    r.spec = MapSpec{-1, 0.715, -0.5};
    r.n_orbits = 64;
    r.iters = 1000;
    const PortraitCloud ref = render(r, 1, batch::Isa::scalar);
    Measure m{0.0, 0.5, "bitwise, 0 = identical"};
    std::string used = "scalar";
    for (batch::Isa isa : {batch::Isa::avx2, batch::Isa::neon}) {
        if (!batch::isa_available(isa)) continue;
        used += std::string(",") + std::string(batch::to_string(isa));
        const PortraitCloud c = render(r, 1, isa);
        if (c.rows.size() != ref.rows.size()) return {1.0, 0.5, "row count differs"};
        for (std::size_t i = 0; i < c.rows.size(); ++i)
            if (c.rows[i].x != ref.rows[i].x || c.rows[i].y != ref.rows[i].y) m.worst = 1.0;
    }
    m.note += "; " + used;
    return m;
}

Measure orbit_closure() {
    Measure m{0.0, 1e-10, ""};
    int n = 0;
    for (const MapSpec& s : {MapSpec{1, 0.8, 0.65}, MapSpec{1, 0.8, 1.37}, MapSpec{-1, 0.715, -0.5}, MapSpec{-1, 0.73, -0.5}}) {
        for (auto line : {SymmetryLine::diagonal, SymmetryLine::second_reversor})
            for (const auto& o : find_symmetric_orbits(s, 4, -3.0, 3.0, 2000, line)) {
                m.worst = std::max(m.worst, closure_residual(s, o.points[0], o.period));
                if (o.period != 4) m.worst = 1.0;
                ++n;
            }
    }
    m.note = std::to_string(n) + " orbits";
    return m;
}

Measure curve_relations() {
    Measure m{0.0, 1e-10, ""};
    for (CurveId id : closed_form_curves()) {
        const auto [lo, hi] = sample_window(id);
        for (int i = 0; i < 100; ++i) {
            const CurvePoint p = curve_point(id, lo + (hi - lo) * i / 99.0);
            m.worst = std::max(m.worst, std::fabs(curve_relation_residual(id, p.m1, p.m2)));
        }
    }
    return m;
}

Measure curve_witnesses() {
    Measure m{0.0, 1e-6, "10 points per curve"};
    for (CurveId id : closed_form_curves()) {
        const CurveInfo info = curve_info(id);
        const auto [lo, hi] = sample_window(id);
        for (int i = 0; i < 10; ++i) {
            const CurvePoint p = curve_point(id, lo + (hi - lo) * i / 9.0);
            const PeriodicOrbit o = curve_witness(id, p.m1, p.m2);
            m.worst = std::max(m.worst, std::fabs(o.trace - info.trace_target));
        }
    }
    return m;
}

Measure nf_identities() {
    Measure m{0.0, 1e-8, ""};
    const ScanResult a = coefficient_scan(1, 0.02, 3.0, 50), b = coefficient_scan(-1, -3.0, -0.02, 50);
    for (const auto* s : {&a, &b}) {
        if (s->rows.size() != 50) return {1.0, 1e-8, "scan skipped rows"};
        for (const auto& r : s->rows) {
            const auto& c = r.coeffs;
            const double d = c.spec.delta;
            m.worst = std::max({m.worst, c.identity_i(), c.identity_ii(), c.identity_iii(), c.identity_iv(),
                                std::fabs(8 * c.b21.real() + d * (3 - 3 * r.m2)),
                                std::fabs(8 * c.b03.real() + d * (1 + 3 * r.m2))});
        }
    }
    return m;
}

Measure nf_conjugacy() {
    Measure m{0.0, 1e-9, ""};
    for (auto [d, m2] : {std::pair{1, 0.6}, std::pair{-1, -1.2}}) {
        const auto [spec, fp] = resonant_fixed_point(d, m2, 1);
        const ComplexifiedMap cm = complexify(spec, fp);
        const BirkhoffResult br = birkhoff_reduce_series(cm.series);
        const TruncatedSeries T = br.transform.compose(TruncatedSeries::z(5) * std::polar(1.0, br.phase_rotation));
        m.worst = std::max(m.worst, cm.series.compose(T).max_abs_diff(T.compose(br.normal_form)));
    }
    return m;
}

Measure flow_symmetries() {
    Measure m{0.0, 1e-9, "equivariance, divergence, polar bridge"};
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    const std::vector<FlowModel> models{FlowModel::arnold(0.1, -2.0), FlowModel::a1(-0.01, 0.05, -0.1, 0.02, 0.1),
                                        FlowModel::b03(0.02, 0.5, -0.1, 0.2, -0.03, -0.15)};
    for (const FlowModel& f : models)
        for (int i = 0; i < 500; ++i) {
            const std::complex<double> z(u(rng), u(rng));
            const auto a = rhs_complex(f, std::complex<double>(0, 1) * z);
            const auto b = std::complex<double>(0, 1) * rhs_complex(f, z);
            m.worst = std::max(m.worst, std::abs(a - b) * 1e3);  // 1e-12 bound
            const double h = 1e-5;
            const FlowState p = rhs(f, {z.real() + h, z.imag()}), q = rhs(f, {z.real() - h, z.imag()});
            const FlowState r = rhs(f, {z.real(), z.imag() + h}), s = rhs(f, {z.real(), z.imag() - h});
            m.worst = std::max(m.worst, std::fabs((p[0] - q[0] + r[1] - s[1]) / (2 * h)) * 1e-3);  // 1e-6 bound
        }
    const FlowModel c = models[2], pm = polar_from_b03(c);
    for (int i = 0; i < 500; ++i) {
        const FlowState xy{u(rng), u(rng)};
        const std::complex<double> z(xy[0], xy[1]), zd = rhs_complex(c, z);
        const FlowState pd = rhs(pm, to_polar(xy));
        m.worst = std::max({m.worst, std::fabs((std::conj(z) * zd).real() - pd[0]), std::fabs((zd / z).imag() - pd[1])});
    }
    return m;
}

Measure portrait_reversor() {
    PortraitRequest r;
    r.spec = MapSpec{-1, 0.72, -0.5};
    r.seed_mode = SeedMode::line_xy;
    r.x0 = r.y0 = -0.4;
    r.x1 = r.y1 = 0.9;
    r.n_orbits = 16;
    r.iters = 500;
    r.backward = true;
    const PortraitCloud c = render(r);
    std::vector<std::pair<double, double>> a, b;
    for (const auto& row : c.rows) a.emplace_back(row.x, row.y), b.emplace_back(row.y, row.x);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    Measure m{0.0, 1e-9, std::to_string(a.size()) + " points"};
    for (std::size_t i = 0; i < a.size(); ++i)
        m.worst = std::max({m.worst, std::fabs(a[i].first - b[i].first), std::fabs(a[i].second - b[i].second)});
    // backward rows must really be preimages: C(row at iter k) = row at iter k+1
    for (std::size_t i = 0; i + 1 < c.rows.size(); ++i) {
        const auto& u = c.rows[i];
        const auto& v = c.rows[i + 1];
        if (u.orbit_id != v.orbit_id || v.iter != u.iter + 1) continue;
        const PhasePoint q = eval(r.spec, {u.x, u.y});
        m.worst = std::max({m.worst, std::fabs(q.x - v.x) * 1e-3, std::fabs(q.y - v.y) * 1e-3});  // 1e-6 bound
    }
    return m;
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(int jobs) {
    (void)jobs;  // every check is small; kept sequential for stable timing output
    std::vector<CheckResult> out;
    out.push_back(timed("maps.structural_identities", structural));
    out.push_back(timed("batch.simd_equivalence", simd_equivalence));
    out.push_back(timed("orbits.closure", orbit_closure));
    out.push_back(timed("curves.relations", curve_relations));
    out.push_back(timed("curves.witnesses", curve_witnesses));
    out.push_back(timed("normalform.identities_and_closed_forms", nf_identities));
    out.push_back(timed("normalform.conjugacy", nf_conjugacy));
    out.push_back(timed("nfflow.symmetries", flow_symmetries));
    out.push_back(timed("portrait.reversor_symmetry", portrait_reversor));
    return out;
}

}  // namespace h14
