#include "h14/orbits.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "h14/errors.hpp"
#include "h14/parallel.hpp"

namespace h14 {

namespace {

constexpr double kTieTol = 1e-9;
constexpr double kMinimalityTol = 1e-8;
constexpr double kLineTol = 1e-8;

bool canonical_less(PhasePoint a, PhasePoint b) {
    if (std::fabs(a.x - b.x) > kTieTol * (1.0 + std::fabs(a.x))) return a.x < b.x;
    return a.y < b.y;
}

double dist_inf(PhasePoint a, PhasePoint b) { return std::max(std::fabs(a.x - b.x), std::fabs(a.y - b.y)); }

void check_period(int period) {
    if (period != 1 && period != 2 && period != 4 && period != 8)
        throw std::invalid_argument("period must be one of 1, 2, 4, 8");
}

struct Residual {
    PhasePoint f;
    Jacobian2 jac;
    double norm;
};

Residual residual(const MapSpec& spec, PhasePoint p, int period) {
    const IterateResult it = iterate(spec, p, period);
    if (it.escaped()) return {{0, 0}, {}, std::numeric_limits<double>::infinity()};
    const PhasePoint f{it.point.x - p.x, it.point.y - p.y};
    return {f, it.jac, std::max(std::fabs(f.x), std::fabs(f.y))};
}

}  // namespace

double closure_residual(const MapSpec& spec, PhasePoint p, int period) { return residual(spec, p, period).norm; }

PeriodicOrbit make_orbit(const MapSpec& spec, PhasePoint p, int period) {
    check_period(period);
    int minimal = period;
    for (int d = 1; d < period; ++d) {
        if (period % d == 0 && closure_residual(spec, p, d) < kMinimalityTol) {
            minimal = d;
            break;
        }
    }
    std::vector<PhasePoint> pts{p};
    for (int k = 1; k < minimal; ++k) pts.push_back(eval(spec, pts.back()));
    std::size_t best = 0;
    for (std::size_t k = 1; k < pts.size(); ++k)
        if (canonical_less(pts[k], pts[best])) best = k;
    std::rotate(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(best), pts.end());

    PeriodicOrbit orbit;
    orbit.points = std::move(pts);
    orbit.period = minimal;
    orbit.trace = iterate(spec, orbit.points[0], minimal, std::numeric_limits<double>::infinity()).jac.trace();
    orbit.stability = classify_trace(orbit.trace);
    for (const PhasePoint& q : orbit.points) {
        if (std::fabs(q.x - q.y) < kLineTol * (1.0 + std::fabs(q.x))) orbit.symmetry |= kRSymmetric;
        const double px = spec.P(q.x);
        if (std::fabs(2.0 * q.y - px) < kLineTol * (1.0 + std::fabs(px))) orbit.symmetry |= kRPrimeSymmetric;
    }
    return orbit;
}

PeriodicOrbit refine_orbit(const MapSpec& spec, const OrbitSeed& seed, double tol) {
    NewtonOptions opt;
    opt.tol = tol;
    return refine_orbit(spec, seed, opt);
}

PeriodicOrbit refine_orbit(const MapSpec& spec, const OrbitSeed& seed, const NewtonOptions& opt) {
    if (!(opt.tol > 0.0)) throw std::invalid_argument("refine_orbit: tol must be > 0");
    check_period(seed.period);
    PhasePoint p = seed.guess;
    Residual r = residual(spec, p, seed.period);
    if (!std::isfinite(r.norm)) throw NoConvergence("refine_orbit: seed escapes");
    for (int iter = 0; iter <= opt.max_iter; ++iter) {
        if (r.norm < opt.tol) return make_orbit(spec, p, seed.period);
        if (iter == opt.max_iter) break;
        // J = D C^q - I; det J = 2 - trace because det D C^q = 1
        const double a = r.jac.a11 - 1.0, b = r.jac.a12, c = r.jac.a21, d = r.jac.a22 - 1.0;
        const double det = a * d - b * c;
        if (std::fabs(det) < opt.singular_threshold)
            throw SingularJacobian("refine_orbit: D C^q - I is singular (trace " + std::to_string(r.jac.trace()) +
                                   ")");
        const double sx = -(d * r.f.x - b * r.f.y) / det;
        const double sy = -(-c * r.f.x + a * r.f.y) / det;
        double lambda = 1.0;
        PhasePoint trial{p.x + sx, p.y + sy};
        Residual rt = residual(spec, trial, seed.period);
        for (int h = 0; h < opt.max_halvings && !(rt.norm < r.norm); ++h) {
            lambda *= 0.5;
            trial = {p.x + lambda * sx, p.y + lambda * sy};
            rt = residual(spec, trial, seed.period);
        }
        if (!std::isfinite(rt.norm)) throw NoConvergence("refine_orbit: iterate escaped during Newton");
        p = trial;
        r = rt;
    }
    throw NoConvergence("refine_orbit: no convergence in " + std::to_string(opt.max_iter) + " iterations");
}

PeriodicOrbit polish_orbit(const MapSpec& spec, const OrbitSeed& seed, double tol) {
    check_period(seed.period);
    PhasePoint p = seed.guess;
    Residual r = residual(spec, p, seed.period);
    for (int iter = 0; iter < 60 && std::isfinite(r.norm); ++iter) {
        if (r.norm < tol) return make_orbit(spec, p, seed.period);
        Eigen::Matrix2d J;
        J << r.jac.a11 - 1.0, r.jac.a12, r.jac.a21, r.jac.a22 - 1.0;
        Eigen::JacobiSVD<Eigen::Matrix2d> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
        svd.setThreshold(1e-10);
        const Eigen::Vector2d step = -svd.solve(Eigen::Vector2d(r.f.x, r.f.y));
        PhasePoint trial{p.x + step(0), p.y + step(1)};
        Residual rt = residual(spec, trial, seed.period);
        double lambda = 1.0;
        for (int h = 0; h < 6 && !(rt.norm < r.norm); ++h) {
            lambda *= 0.5;
            trial = {p.x + lambda * step(0), p.y + lambda * step(1)};
            rt = residual(spec, trial, seed.period);
        }
        if (!(rt.norm < r.norm)) break;
        p = trial;
        r = rt;
    }
    if (r.norm < tol) return make_orbit(spec, p, seed.period);
    throw NoConvergence("polish_orbit: residual stalled");
}

std::vector<PeriodicOrbit> find_symmetric_orbits(const MapSpec& spec, int period, double s_lo, double s_hi,
                                                  int n_grid, SymmetryLine line) {
    if (period != 2 && period != 4) throw std::invalid_argument("find_symmetric_orbits: period must be 2 or 4");
    if (!(s_lo < s_hi)) throw std::invalid_argument("find_symmetric_orbits: need s_lo < s_hi");
    if (n_grid < 1) throw std::invalid_argument("find_symmetric_orbits: n_grid must be >= 1");
    const int half = period / 2;
    auto start = [&](double s) -> PhasePoint {
        return line == SymmetryLine::diagonal ? PhasePoint{s, s} : PhasePoint{s, 0.5 * spec.P(s)};
    };
    // mismatch of the half-period image with the same symmetry line
    auto g = [&](double s) {
        const IterateResult it = iterate(spec, start(s), half);
        if (it.escaped()) return std::numeric_limits<double>::quiet_NaN();
        const PhasePoint q = it.point;
        return line == SymmetryLine::diagonal ? q.x - q.y : 2.0 * q.y - spec.P(q.x);
    };

    std::vector<PeriodicOrbit> found;
    double sa = s_lo;
    double ga = g(sa);
    for (int i = 1; i <= n_grid; ++i) {
        const double sb = s_lo + (s_hi - s_lo) * i / n_grid;
        const double gb = g(sb);
        if (std::isfinite(ga) && std::isfinite(gb) && (ga == 0.0 || ga * gb < 0.0)) {
            double lo = sa, hi = sb, glo = ga;
            if (ga != 0.0) {
                while (hi - lo > 1e-13 * std::max(1.0, std::fabs(lo))) {
                    const double mid = 0.5 * (lo + hi);
                    const double gm = g(mid);
                    if (!std::isfinite(gm)) break;
                    if (gm == 0.0) {
                        lo = hi = mid;
                        break;
                    }
                    if ((gm < 0.0) == (glo < 0.0)) {
                        lo = mid;
                        glo = gm;
                    } else {
                        hi = mid;
                    }
                }
            }
            const OrbitSeed seed{start(0.5 * (lo + hi)), period};
            std::optional<PeriodicOrbit> orbit;
            try {
                orbit = refine_orbit(spec, seed, 1e-12);
            } catch (const SingularJacobian&) {
                try {
                    orbit = polish_orbit(spec, seed, 1e-11);
                } catch (const NumericalError&) {
                }
            } catch (const NumericalError&) {
            }
            if (orbit && orbit->period == period) found.push_back(std::move(*orbit));
        }
        sa = sb;
        ga = gb;
    }
    return dedup_orbits(std::move(found));
}

std::vector<OrbitSeed> garland_seeds(const MapSpec& spec, PhasePoint fixed_pt, double radius) {
    if (radius < 0.0) throw std::invalid_argument("garland_seeds: radius must be >= 0");
    const double tr = spec.dP(fixed_pt.y);
    const double theta = std::fabs(tr) < 2.0 ? std::acos(0.5 * tr) : 0.5 * std::numbers::pi;
    // (cos(a + theta/2), cos(a - theta/2)) traces the ellipse the linear part
    // rotates by theta; angle a and -a are mirror images.
    std::vector<OrbitSeed> seeds;
    for (int k = 0; k < 8; ++k) {
        const double a = k * std::numbers::pi / 4.0;
        seeds.push_back({{fixed_pt.x + radius * std::cos(a + 0.5 * theta), fixed_pt.y + radius * std::cos(a - 0.5 * theta)},
                         4});
    }
    return seeds;
}

std::vector<PeriodicOrbit> search_orbits(const MapSpec& spec, int period, const SearchBox& box, int jobs) {
    check_period(period);
    if (box.nx < 1 || box.ny < 1 || !(box.x0 <= box.x1) || !(box.y0 <= box.y1))
        throw std::invalid_argument("search_orbits: invalid box");
    const std::size_t n = static_cast<std::size_t>(box.nx) * static_cast<std::size_t>(box.ny);
    std::vector<std::optional<PeriodicOrbit>> results(n);
    parallel_for(n, jobs, [&](std::size_t idx) {
        const int i = static_cast<int>(idx % static_cast<std::size_t>(box.nx));
        const int j = static_cast<int>(idx / static_cast<std::size_t>(box.nx));
        const double x = box.nx == 1 ? 0.5 * (box.x0 + box.x1) : box.x0 + (box.x1 - box.x0) * i / (box.nx - 1);
        const double y = box.ny == 1 ? 0.5 * (box.y0 + box.y1) : box.y0 + (box.y1 - box.y0) * j / (box.ny - 1);
        try {
            PeriodicOrbit o = refine_orbit(spec, {{x, y}, period}, 1e-12);
            if (o.period == period) results[idx] = std::move(o);
        } catch (const NumericalError&) {
        }
    });
    std::vector<PeriodicOrbit> all;
    for (auto& r : results)
        if (r) all.push_back(std::move(*r));
    return dedup_orbits(std::move(all));
}

bool same_orbit(const PeriodicOrbit& a, const PeriodicOrbit& b, double tol) {
    if (a.period != b.period || a.points.size() != b.points.size()) return false;
    for (const PhasePoint& p : a.points) {
        const bool hit = std::any_of(b.points.begin(), b.points.end(), [&](PhasePoint q) { return dist_inf(p, q) < tol; });
        if (!hit) return false;
    }
    return true;
}

std::vector<PeriodicOrbit> dedup_orbits(std::vector<PeriodicOrbit> orbits, double tol) {
    std::vector<PeriodicOrbit> out;
    for (auto& o : orbits) {
        const bool dup = std::any_of(out.begin(), out.end(), [&](const PeriodicOrbit& q) { return same_orbit(o, q, tol); });
        if (!dup) out.push_back(std::move(o));
    }
    std::stable_sort(out.begin(), out.end(), [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
        return canonical_less(a.points[0], b.points[0]);
    });
    return out;
}

double mirror_distance(const PeriodicOrbit& orbit) {
    double h = 0.0;
    for (const PhasePoint& p : orbit.points) {
        double best = std::numeric_limits<double>::infinity();
        for (const PhasePoint& q : orbit.points) best = std::min(best, dist_inf(reflect(p), q));
        h = std::max(h, best);
    }
    return h;
}

}  // namespace h14
