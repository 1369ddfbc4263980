#include "h14/continuation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "h14/dual.hpp"
#include "h14/errors.hpp"

namespace h14 {

namespace {

using Vec4 = Eigen::Vector4d;
using Mat34 = Eigen::Matrix<double, 3, 4>;

template <class T>
std::array<T, 3> locus_eq(int delta, int period, double target, const T& x0, const T& y0, const T& m1, const T& m2) {
    T x = x0, y = y0;
    T j11(1.0), j12(0.0), j21(0.0), j22(1.0);
    const double d = delta;
    for (int k = 0; k < period; ++k) {
        const T dp = m2 - 3.0 * d * y * y;
        // [[0, 1], [-1, dp]] * J
        const T n11 = j21, n12 = j22;
        const T n21 = dp * j21 - j11, n22 = dp * j22 - j12;
        j11 = n11;
        j12 = n12;
        j21 = n21;
        j22 = n22;
        const auto next = eval_generic<T>(delta, m1, m2, x, y);
        x = next[0];
        y = next[1];
    }
    return {x - x0, y - y0, j11 + j22 - target};
}

struct Linearized {
    Eigen::Vector3d f;
    Mat34 J;
};

Linearized linearize(int delta, int period, double target, const Vec4& u) {
    using D = Dual<4>;
    const auto e = locus_eq<D>(delta, period, target, D::variable(u(0), 0), D::variable(u(1), 1),
                               D::variable(u(2), 2), D::variable(u(3), 3));
    Linearized lin;
    for (int i = 0; i < 3; ++i) {
        lin.f(i) = e[i].v;
        for (int j = 0; j < 4; ++j) lin.J(i, j) = e[i].d[j];
    }
    return lin;
}

Vec4 null_vector(const Mat34& J) {
    Eigen::JacobiSVD<Eigen::Matrix<double, 3, 4>> svd(J, Eigen::ComputeFullV);
    Vec4 t = svd.matrixV().col(3);
    return t / t.norm();
}

LocusState to_state(const Vec4& u) { return {u(0), u(1), u(2), u(3)}; }
Vec4 to_vec(const LocusState& s) { return Vec4(s[0], s[1], s[2], s[3]); }

CurvePoint make_point(int delta, int period, double arclength, const Vec4& u) {
    CurvePoint pt{arclength, u(2), u(3), std::nullopt};
    try {
        pt.witness = make_orbit(MapSpec::make(delta, u(2), u(3)), {u(0), u(1)}, period);
    } catch (const std::exception&) {
    }
    return pt;
}

// Newton on {G(u) = 0, extra(u) = 0} where extra is linear: a . (u - b).
struct Corrected {
    bool ok = false;
    int iters = 0;
    Vec4 u;
};

Corrected correct(int delta, int period, double target, Vec4 u, const Vec4& a, const Vec4& b, int max_iter,
                  double tol) {
    Corrected c;
    for (int it = 0; it < max_iter; ++it) {
        const Linearized lin = linearize(delta, period, target, u);
        Eigen::Matrix4d A;
        A.topRows<3>() = lin.J;
        A.row(3) = a.transpose();
        Eigen::Vector4d rhs;
        rhs.head<3>() = lin.f;
        rhs(3) = a.dot(u - b);
        const Vec4 step = -A.partialPivLu().solve(rhs);
        if (!step.allFinite()) return c;
        u += step;
        c.iters = it + 1;
        const Linearized after = linearize(delta, period, target, u);
        if (!after.f.allFinite()) return c;
        if (after.f.cwiseAbs().maxCoeff() < tol && step.cwiseAbs().maxCoeff() < 1e-9) {
            c.ok = true;
            c.u = u;
            return c;
        }
    }
    return c;
}

}  // namespace

std::string_view to_string(ContinuationStatus s) {
    switch (s) {
        case ContinuationStatus::completed: return "completed";
        case ContinuationStatus::step_too_small: return "step_too_small";
        case ContinuationStatus::left_bounds: return "left_bounds";
    }
    return "?";
}

std::array<double, 3> locus_residual(int delta, int period, double trace_target, const LocusState& u) {
    return locus_eq<double>(delta, period, trace_target, u[0], u[1], u[2], u[3]);
}

LocusState seed_on_locus(const MapSpec& spec0, const PeriodicOrbit& orbit0, double trace_target, FreeParam free_param) {
    spec0.validate();
    if (orbit0.points.empty()) throw std::invalid_argument("seed_on_locus: empty orbit");
    const int fixed_index = free_param == FreeParam::m1 ? 3 : 2;
    Vec4 u(orbit0.points[0].x, orbit0.points[0].y, spec0.m1, spec0.m2);
    Vec4 a = Vec4::Zero();
    a(fixed_index) = 1.0;
    const Corrected c = correct(spec0.delta, orbit0.period, trace_target, u, a, u, 50, 1e-12);
    if (!c.ok) throw NoConvergence("seed_on_locus: corrector failed");
    return to_state(c.u);
}

ContinuationResult continue_trace_locus(const MapSpec& spec0, const PeriodicOrbit& orbit0, double trace_target,
                                        FreeParam free_param, int steps, const ContinuationOptions& opt) {
    if (steps < 0) throw std::invalid_argument("continue_trace_locus: steps must be >= 0");
    if (!(opt.h_min > 0.0) || !(opt.h_min <= opt.h_init) || !(opt.h_init <= opt.h_max))
        throw std::invalid_argument("continue_trace_locus: need 0 < h_min <= h_init <= h_max");
    const int delta = spec0.delta, period = orbit0.period;
    ContinuationResult res;
    res.delta = delta;
    res.period = period;
    res.trace_target = trace_target;

    Vec4 u = to_vec(seed_on_locus(spec0, orbit0, trace_target, free_param));
    Vec4 tangent = null_vector(linearize(delta, period, trace_target, u).J);
    const int free_index = free_param == FreeParam::m1 ? 2 : 3;
    if (tangent(free_index) * opt.direction < 0.0) tangent = -tangent;

    double arclength = 0.0;
    res.points.push_back(make_point(delta, period, arclength, u));
    res.states.push_back(to_state(u));

    double h = opt.h_init;
    int produced = 0;
    while (produced < steps) {
        const Vec4 pred = u + h * tangent;
        const Corrected c = correct(delta, period, trace_target, pred, tangent, pred, opt.max_corrector_iter, opt.tol);
        // reject corrections that jump far from the predictor (branch switching)
        if (!c.ok || (c.u - pred).norm() > 0.5 * h + 1e-9) {
            h *= 0.5;
            if (h < opt.h_min) {
                res.status = ContinuationStatus::step_too_small;
                res.message = "step size fell below " + std::to_string(opt.h_min);
                return res;
            }
            continue;
        }
        const Vec4 secant = c.u - u;
        arclength += secant.norm();
        u = c.u;
        // secant predictor for the next step
        tangent = secant / secant.norm();
        res.points.push_back(make_point(delta, period, arclength, u));
        res.states.push_back(to_state(u));
        ++produced;
        if (std::fabs(u(2)) > opt.param_bound || std::fabs(u(3)) > opt.param_bound ||
            std::fabs(u(0)) > kDefaultEscapeRadius || std::fabs(u(1)) > kDefaultEscapeRadius) {
            res.status = ContinuationStatus::left_bounds;
            res.message = "branch left the parameter/phase bounds";
            return res;
        }
        if (c.iters <= 3) h = std::min(opt.h_max, 1.5 * h);
    }
    return res;
}

std::vector<CurvePoint> locate_crossings(const ContinuationResult& path, const ParamFunction& g) {
    std::vector<CurvePoint> out;
    for (std::size_t i = 0; i + 1 < path.states.size(); ++i) {
        const Vec4 ua = to_vec(path.states[i]), ub = to_vec(path.states[i + 1]);
        const double ga = g(ua(2), ua(3)), gb = g(ub(2), ub(3));
        if (!std::isfinite(ga) || !std::isfinite(gb)) continue;
        if (!(ga * gb < 0.0 || (ga == 0.0 && i == 0) || gb == 0.0)) continue;
        const double w = ga == gb ? 0.5 : ga / (ga - gb);
        Vec4 u = ua + w * (ub - ua);
        bool ok = false;
        for (int it = 0; it < 30; ++it) {
            const Linearized lin = linearize(path.delta, path.period, path.trace_target, u);
            const double gv = g(u(2), u(3));
            const double h1 = 1e-7 * (1.0 + std::fabs(u(2))), h2 = 1e-7 * (1.0 + std::fabs(u(3)));
            const double g1 = (g(u(2) + h1, u(3)) - g(u(2) - h1, u(3))) / (2.0 * h1);
            const double g2 = (g(u(2), u(3) + h2) - g(u(2), u(3) - h2)) / (2.0 * h2);
            Eigen::Matrix4d A;
            A.topRows<3>() = lin.J;
            A.row(3) << 0.0, 0.0, g1, g2;
            Eigen::Vector4d rhs;
            rhs.head<3>() = lin.f;
            rhs(3) = gv;
            if (lin.f.cwiseAbs().maxCoeff() < 1e-11 && std::fabs(gv) < 1e-12) {
                ok = true;
                break;
            }
            // minimum-norm step keeps the update near the segment
            const Vec4 step = -A.completeOrthogonalDecomposition().solve(rhs);
            if (!step.allFinite()) break;
            u += step;
        }
        if (!ok) continue;
        const double s = path.points[i].param + w * (path.points[i + 1].param - path.points[i].param);
        out.push_back(make_point(path.delta, path.period, s, u));
    }
    return out;
}

}  // namespace h14
