#include "h14/portrait.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "h14/errors.hpp"
#include "h14/parallel.hpp"

namespace h14 {

std::string_view to_string(SeedMode m) {
    switch (m) {
        case SeedMode::grid: return "grid";
        case SeedMode::line_xy: return "line_xy";
        case SeedMode::list: return "list";
    }
    return "?";
}

SeedMode seed_mode_from_name(std::string_view n) {
    if (n == "grid") return SeedMode::grid;
    if (n == "line_xy") return SeedMode::line_xy;
    if (n == "list") return SeedMode::list;
    throw std::invalid_argument("unknown seed mode '" + std::string(n) + "' (grid, line_xy, list)");
}

void PortraitRequest::validate() const {
    spec.validate();
    if (!(x0 < x1) || !(y0 < y1)) throw std::invalid_argument("portrait: region needs x0 < x1 and y0 < y1");
    if (iters < 1) throw std::invalid_argument("portrait: iters must be >= 1");
    if (!(escape_radius > 0.0) || !std::isfinite(escape_radius))
        throw std::invalid_argument("portrait: escape radius must be positive");
    if (seed_mode == SeedMode::list) {
        if (seeds.empty()) throw std::invalid_argument("portrait: list mode needs at least one seed");
    } else if (n_orbits < 1) {
        throw std::invalid_argument("portrait: n_orbits must be >= 1");
    }
    if (seed_mode == SeedMode::line_xy && std::max(x0, y0) > std::min(x1, y1))
        throw std::invalid_argument("portrait: region does not meet the diagonal");
}

std::vector<PhasePoint> portrait_seeds(const PortraitRequest& r) {
    r.validate();
    std::vector<PhasePoint> out;
    switch (r.seed_mode) {
        case SeedMode::list: return r.seeds;
        case SeedMode::grid: {
            const int nx = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(r.n_orbits))));
            const int ny = (r.n_orbits + nx - 1) / nx;
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i) {
                    if (static_cast<int>(out.size()) == r.n_orbits) break;
                    const double fx = nx == 1 ? 0.5 : static_cast<double>(i) / (nx - 1);
                    const double fy = ny == 1 ? 0.5 : static_cast<double>(j) / (ny - 1);
                    out.push_back({r.x0 + fx * (r.x1 - r.x0), r.y0 + fy * (r.y1 - r.y0)});
                }
            return out;
        }
        case SeedMode::line_xy: {
            const double a = std::max(r.x0, r.y0), b = std::min(r.x1, r.y1);
            for (int i = 0; i < r.n_orbits; ++i) {
                const double f = r.n_orbits == 1 ? 0.5 : static_cast<double>(i) / (r.n_orbits - 1);
                const double s = a + f * (b - a);
                out.push_back({s, s});
            }
            return out;
        }
    }
    return out;
}

PortraitCloud render(const PortraitRequest& req, int jobs) { return render(req, jobs, batch::detect_isa()); }

PortraitCloud render(const PortraitRequest& req, int jobs, batch::Isa isa) {
    const std::vector<PhasePoint> seeds = portrait_seeds(req);
    const std::size_t n = seeds.size(), stride = static_cast<std::size_t>(req.iters) + 1;
    std::vector<double> x0(n), y0(n);
    for (std::size_t i = 0; i < n; ++i) x0[i] = seeds[i].x, y0[i] = seeds[i].y;
    std::vector<double> fx(n * stride), fy(n * stride), bx, by;
    std::vector<int> fesc(n), besc;
    if (req.backward) {
        bx.resize(n * stride);
        by.resize(n * stride);
        besc.resize(n);
    }
    // chunks of lanes per worker; lanes are independent so results do not depend on jobs
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(resolve_jobs(jobs)), n));
    const std::size_t chunk = (n + workers - 1) / workers;
    parallel_for(workers, static_cast<int>(workers), [&](std::size_t w) {
        const std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) return;
        const std::size_t m = hi - lo;
        batch::Lanes f{std::span<const double>(x0).subspan(lo, m), std::span<const double>(y0).subspan(lo, m),
                       std::span<double>(fx).subspan(lo * stride, m * stride),
                       std::span<double>(fy).subspan(lo * stride, m * stride), std::span<int>(fesc).subspan(lo, m)};
        batch::iterate(isa, req.spec, f, req.iters, req.escape_radius);
        if (req.backward) {
            // C^-1 = R C R: iterate the mirrored seeds forward, mirror back below
            batch::Lanes b{std::span<const double>(y0).subspan(lo, m), std::span<const double>(x0).subspan(lo, m),
                           std::span<double>(bx).subspan(lo * stride, m * stride),
                           std::span<double>(by).subspan(lo * stride, m * stride), std::span<int>(besc).subspan(lo, m)};
            batch::iterate(isa, req.spec, b, req.iters, req.escape_radius);
        }
    });

    PortraitCloud cloud;
    cloud.isa = isa;
    for (std::size_t i = 0; i < n; ++i) {
        PortraitOrbit o;
        o.orbit_id = static_cast<int>(i);
        o.seed = seeds[i];
        if (fesc[i] >= 0) o.escaped_at = fesc[i];
        if (req.backward && besc[i] >= 0) o.escaped_backward_at = besc[i];
        cloud.orbits.push_back(o);
        if (o.escaped() && !req.keep_escaped) continue;
        const int fend = o.escaped_at ? *o.escaped_at : req.iters + 1;
        if (req.backward) {
            const int bend = o.escaped_backward_at ? *o.escaped_backward_at : req.iters + 1;
            for (int k = bend - 1; k >= 1; --k) {
                const std::size_t at = i * stride + static_cast<std::size_t>(k);
                cloud.rows.push_back({o.orbit_id, -k, by[at], bx[at]});
            }
        }
        for (int k = 0; k < fend; ++k) {
            const std::size_t at = i * stride + static_cast<std::size_t>(k);
            cloud.rows.push_back({o.orbit_id, k, fx[at], fy[at]});
        }
    }
    return cloud;
}

std::vector<PhasePoint> orbit_points(const PortraitCloud& cloud, int orbit_id) {
    std::vector<PhasePoint> pts;
    for (const PortraitRow& r : cloud.rows)
        if (r.orbit_id == orbit_id) pts.push_back({r.x, r.y});
    return pts;
}

std::vector<AngularCluster> angular_clusters(const std::vector<PhasePoint>& pts, int q, PhasePoint center) {
    if (q < 1) throw std::invalid_argument("island_count: q must be >= 1");
    std::vector<double> ang;
    for (std::size_t i = 0; i < pts.size(); i += static_cast<std::size_t>(q)) {
        const double dx = pts[i].x - center.x, dy = pts[i].y - center.y;
        if (std::hypot(dx, dy) <= 1e-9) continue;
        ang.push_back(std::atan2(dy, dx));
    }
    if (ang.empty()) throw Degenerate("island_count: every point sits on the center");
    std::sort(ang.begin(), ang.end());
    constexpr double gap = 2.0 * std::numbers::pi / 64.0;
    const std::size_t m = ang.size();
    // start right after any gap above threshold; none means one annulus
    std::size_t start = m;
    for (std::size_t i = 0; i < m; ++i) {
        const double next = i + 1 < m ? ang[i + 1] : ang[0] + 2.0 * std::numbers::pi;
        if (next - ang[i] > gap) {
            start = (i + 1) % m;
            break;
        }
    }
    auto mean_of = [](const std::vector<double>& a) {
        std::complex<double> s{};
        for (double v : a) s += std::polar(1.0, v);
        return std::arg(s);
    };
    if (start == m) return {{mean_of(ang), m}};
    std::vector<AngularCluster> out;
    std::vector<double> cur{ang[start]};
    for (std::size_t step = 1; step < m; ++step) {
        const std::size_t i = (start + step) % m, prev = (start + step - 1) % m;
        double d = ang[i] - ang[prev];
        if (d < 0.0) d += 2.0 * std::numbers::pi;
        if (d > gap) {
            out.push_back({mean_of(cur), cur.size()});
            cur.clear();
        }
        cur.push_back(ang[i]);
    }
    out.push_back({mean_of(cur), cur.size()});
    return out;
}

int island_count(const std::vector<PhasePoint>& pts, int q, PhasePoint center) {
    return static_cast<int>(angular_clusters(pts, q, center).size());
}

double chain_phase(const std::vector<AngularCluster>& clusters) {
    if (clusters.empty()) throw std::invalid_argument("chain_phase: no clusters");
    std::complex<double> s{};
    for (const auto& c : clusters) s += std::polar(1.0, 4.0 * c.centroid);
    return std::arg(s) / 4.0;
}

}  // namespace h14
