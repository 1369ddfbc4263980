#include "h14/nfflow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "h14/errors.hpp"
#include "h14/parallel.hpp"

namespace h14 {

using cplx = std::complex<double>;

std::string_view to_string(FlowKind k) {
    switch (k) {
        case FlowKind::arnold: return "arnold";
        case FlowKind::a1: return "a1";
        case FlowKind::b03: return "b03";
        case FlowKind::polar: return "polar";
    }
    return "?";
}

FlowKind flow_kind_from_name(std::string_view n) {
    if (n == "arnold") return FlowKind::arnold;
    if (n == "a1") return FlowKind::a1;
    if (n == "b03") return FlowKind::b03;
    if (n == "polar") return FlowKind::polar;
    throw std::invalid_argument("unknown flow model '" + std::string(n) + "' (arnold, a1, b03, polar)");
}

const std::vector<std::string>& FlowModel::param_names(FlowKind kind) {
    static const std::vector<std::string> arnold{"eps", "b"};
    static const std::vector<std::string> a1{"beta", "mu", "b32", "b50", "b14"};
    static const std::vector<std::string> b03{"beta_hat", "b21", "eps", "b32", "b50", "b14"};
    static const std::vector<std::string> polar{"b1", "b2", "b3", "mu", "B"};
    switch (kind) {
        case FlowKind::arnold: return arnold;
        case FlowKind::a1: return a1;
        case FlowKind::b03: return b03;
        case FlowKind::polar: return polar;
    }
    return arnold;
}

namespace {

void check_finite(const std::vector<double>& p) {
    for (double v : p)
        if (!std::isfinite(v)) throw std::invalid_argument("flow parameters must be finite");
}

void check_divergence_free(double b50, double b14) {
    if (std::fabs(b14 - 5.0 * b50) > 1e-12 * (1.0 + std::fabs(b14)))
        throw std::invalid_argument("flow model needs B14 = 5 B50 to be Hamiltonian");
}

}  // namespace

FlowModel FlowModel::arnold(double eps, double b) { return make(FlowKind::arnold, {eps, b}); }

FlowModel FlowModel::a1(double beta, double mu, double b32, double b50, double b14) {
    return make(FlowKind::a1, {beta, mu, b32, b50, b14});
}

FlowModel FlowModel::b03(double beta_hat, double b21, double eps, double b32, double b50, double b14) {
    return make(FlowKind::b03, {beta_hat, b21, eps, b32, b50, b14});
}

FlowModel FlowModel::polar(double b1, double b2, double b3, double mu, double B) {
    return make(FlowKind::polar, {b1, b2, b3, mu, B});
}

FlowModel FlowModel::make(FlowKind kind, const std::vector<double>& params) {
    if (params.size() != param_names(kind).size())
        throw std::invalid_argument(std::string(to_string(kind)) + " model takes " +
                                    std::to_string(param_names(kind).size()) + " parameters");
    check_finite(params);
    if (kind == FlowKind::a1) check_divergence_free(params[3], params[4]);
    if (kind == FlowKind::b03) check_divergence_free(params[4], params[5]);
    return FlowModel{kind, params};
}

std::vector<Monomial> FlowModel::monomials() const {
    const auto& p = params;
    switch (kind) {
        case FlowKind::arnold: return {{1, 0, p[0]}, {2, 1, p[1]}, {0, 3, 1.0}};
        case FlowKind::a1:
            return {{1, 0, p[0]}, {2, 1, 1.0 + p[1]}, {0, 3, 1.0}, {3, 2, p[2]}, {5, 0, p[3]}, {1, 4, p[4]}};
        case FlowKind::b03:
            return {{1, 0, p[0]}, {2, 1, p[1]}, {0, 3, p[2]}, {3, 2, p[3]}, {5, 0, p[4]}, {1, 4, p[5]}};
        case FlowKind::polar: break;
    }
    throw std::invalid_argument("polar model has no Cartesian monomials");
}

namespace {

cplx ipow(cplx z, int n) {
    cplx r = 1.0;
    for (int i = 0; i < n; ++i) r *= z;
    return r;
}

// f = i sum c z^j zb^k and its two Wirtinger derivatives
struct CartEval {
    cplx f, fz, fzb;
};

CartEval cart_eval(const std::vector<Monomial>& ms, cplx z) {
    const cplx zb = std::conj(z), I(0.0, 1.0);
    CartEval e{};
    for (const Monomial& m : ms) {
        e.f += m.c * ipow(z, m.j) * ipow(zb, m.k);
        if (m.j > 0) e.fz += m.c * static_cast<double>(m.j) * ipow(z, m.j - 1) * ipow(zb, m.k);
        if (m.k > 0) e.fzb += m.c * static_cast<double>(m.k) * ipow(z, m.j) * ipow(zb, m.k - 1);
    }
    e.f *= I;
    e.fz *= I;
    e.fzb *= I;
    return e;
}

FlowState polar_rhs(const std::vector<double>& p, const FlowState& s) {
    const double b1 = p[0], b2 = p[1], b3 = p[2], mu = p[3], B = p[4];
    const double I = s[0], c = std::cos(4.0 * s[1]), sn = std::sin(4.0 * s[1]);
    return {4.0 * mu * I * I * sn + 4.0 * B * I * I * I * sn,
            b1 + 2.0 * b2 * I + 3.0 * b3 * I * I + 2.0 * mu * I * c + 3.0 * B * I * I * c};
}

}  // namespace

cplx rhs_complex(const FlowModel& m, cplx z) { return cart_eval(m.monomials(), z).f; }

FlowState rhs(const FlowModel& m, const FlowState& s) {
    if (m.kind == FlowKind::polar) return polar_rhs(m.params, s);
    const cplx f = rhs_complex(m, {s[0], s[1]});
    return {f.real(), f.imag()};
}

double hamiltonian(const FlowModel& m, const FlowState& s) {
    if (m.kind == FlowKind::polar) {
        const auto& p = m.params;
        const double I = s[0], c = std::cos(4.0 * s[1]);
        return p[0] * I + p[1] * I * I + p[2] * I * I * I + p[3] * I * I * c + p[4] * I * I * I * c;
    }
    // dK/dz* of each term reproduces c z^j z*^k; resonant pairs combine into real parts
    const cplx z(s[0], s[1]);
    const double r2 = std::norm(z);
    const double re4 = (z * z * z * z).real();
    const auto& p = m.params;
    double lin = 0, cub = 0, res3 = 0, quint = 0, b50 = 0;
    switch (m.kind) {
        case FlowKind::arnold: lin = p[0], cub = p[1], res3 = 1.0; break;
        case FlowKind::a1: lin = p[0], cub = 1.0 + p[1], res3 = 1.0, quint = p[2], b50 = p[3]; break;
        case FlowKind::b03: lin = p[0], cub = p[1], res3 = p[2], quint = p[3], b50 = p[4]; break;
        case FlowKind::polar: break;
    }
    // z^5 z* + z z*^5 = 2 |z|^2 Re z^4
    return lin * r2 + 0.5 * cub * r2 * r2 + 0.5 * res3 * re4 + quint * r2 * r2 * r2 / 3.0 + 2.0 * b50 * r2 * re4;
}

FlowModel polar_from_b03(const FlowModel& m) {
    if (m.kind != FlowKind::b03) throw std::invalid_argument("polar_from_b03: needs a b03 model");
    const auto& p = m.params;
    return FlowModel::polar(p[0], p[1], 4.0 * p[3] / 3.0, p[2], 8.0 * p[4]);
}

FlowState to_polar(const FlowState& xy) { return {0.5 * (xy[0] * xy[0] + xy[1] * xy[1]), std::atan2(xy[1], xy[0])}; }

FlowState to_cartesian(const FlowState& ip) {
    if (ip[0] < 0.0) throw std::invalid_argument("to_cartesian: I must be >= 0");
    const double r = std::sqrt(2.0 * ip[0]);
    return {r * std::cos(ip[1]), r * std::sin(ip[1])};
}

// ---------------------------------------------------------------- integrator

namespace {

// Dormand-Prince 5(4)
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// continuous extension
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

using V = FlowState;

V axpy(const V& y, double h, std::initializer_list<std::pair<double, const V*>> terms) {
    V r = y;
    for (const auto& [a, k] : terms) {
        r[0] += h * a * (*k)[0];
        r[1] += h * a * (*k)[1];
    }
    return r;
}

}  // namespace

Trajectory integrate(const FlowModel& m, const FlowState& s0, double T, const IntegrateOptions& opt) {
    if (!std::isfinite(T)) throw std::invalid_argument("integrate: T must be finite");
    if (!(opt.tol > 0.0)) throw std::invalid_argument("integrate: tol must be positive");
    if (opt.sample_dt < 0.0) throw std::invalid_argument("integrate: sample_dt must be >= 0");
    if (!std::isfinite(s0[0]) || !std::isfinite(s0[1])) throw std::invalid_argument("integrate: non-finite start");
    if (m.kind == FlowKind::polar && s0[0] < 0.0) throw std::invalid_argument("integrate: I must be >= 0");

    const double dir = T < 0.0 ? -1.0 : 1.0;
    const double H0 = hamiltonian(m, s0);
    Trajectory tr;
    tr.t.push_back(0.0);
    tr.s.push_back(s0);
    if (T == 0.0) return tr;

    auto f = [&](const V& y) { return rhs(m, y); };
    auto err_norm = [&](const V& y, const V& yn, const V& e) {
        double s = 0.0;
        for (int i = 0; i < 2; ++i) {
            const double sc = opt.tol + opt.tol * std::max(std::fabs(y[i]), std::fabs(yn[i]));
            s = std::max(s, std::fabs(e[i]) / sc);
        }
        return s;
    };

    double t = 0.0;
    V y = s0;
    V k1 = f(y);
    double h = opt.h_init > 0.0 ? opt.h_init : std::min(std::fabs(T), 0.01 * std::pow(opt.tol, 0.2) /
                                                                          std::max(1e-3, std::hypot(k1[0], k1[1])));
    h = std::max(h, 1e-6 * std::fabs(T));
    double next_sample = opt.sample_dt;
    const double tend = std::fabs(T);  // work in |t|, scale h by dir

    while (t < tend) {
        if (tr.accepted + tr.rejected >= opt.max_steps) throw StepUnderflow("integrate: step budget exhausted");
        bool last = false;
        if (t + h >= tend) {
            h = tend - t;
            last = true;
        }
        const double hs = dir * h;
        const V k2 = f(axpy(y, hs, {{a21, &k1}}));
        const V k3 = f(axpy(y, hs, {{a31, &k1}, {a32, &k2}}));
        const V k4 = f(axpy(y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const V k5 = f(axpy(y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const V k6 = f(axpy(y, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const V yn = axpy(y, hs, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
        const V k7 = f(yn);
        const V e = axpy(V{0.0, 0.0}, hs, {{e1, &k1}, {e3, &k3}, {e4, &k4}, {e5, &k5}, {e6, &k6}, {e7, &k7}});
        const double err = err_norm(y, yn, e);
        if (!std::isfinite(err)) {
            ++tr.rejected;
            h *= 0.2;
            if (h < 1e-14 * std::max(1.0, tend)) throw StepUnderflow("integrate: non-finite state (blow-up?)");
            continue;
        }
        if (err <= 1.0) {
            ++tr.accepted;
            const double tn = last ? tend : t + h;
            if (opt.sample_dt > 0.0) {
                // continuous extension on [t, tn]
                const V yd{yn[0] - y[0], yn[1] - y[1]};
                V r3, r4, r5;
                for (int i = 0; i < 2; ++i) {
                    r3[i] = hs * k1[i] - yd[i];
                    r4[i] = yd[i] - hs * k7[i] - r3[i];
                    r5[i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
                }
                while (next_sample < tn - 1e-12 * opt.sample_dt) {
                    const double th = (next_sample - t) / h, th1 = 1.0 - th;
                    V ys;
                    for (int i = 0; i < 2; ++i) ys[i] = y[i] + th * (yd[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
                    tr.t.push_back(dir * next_sample);
                    tr.s.push_back(ys);
                    tr.h_drift = std::max(tr.h_drift, std::fabs(hamiltonian(m, ys) - H0));
                    next_sample += opt.sample_dt;
                }
                if (last || std::fabs(next_sample - tn) <= 1e-12 * opt.sample_dt) {
                    tr.t.push_back(dir * tn);
                    tr.s.push_back(yn);
                    if (!last) next_sample += opt.sample_dt;
                }
            } else {
                tr.t.push_back(dir * tn);
                tr.s.push_back(yn);
            }
            tr.h_drift = std::max(tr.h_drift, std::fabs(hamiltonian(m, yn) - H0));
            t = tn;
            y = yn;
            k1 = k7;
            if (last) break;
        } else {
            ++tr.rejected;
        }
        const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h *= err <= 1.0 ? fac : std::min(fac, 1.0);
        if (h < 1e-14 * std::max(1.0, tend)) throw StepUnderflow("integrate: step size underflow at t = " + std::to_string(dir * t));
    }
    return tr;
}

// ---------------------------------------------------------------- equilibria

std::string_view to_string(EqClass c) {
    switch (c) {
        case EqClass::center: return "center";
        case EqClass::saddle: return "saddle";
        case EqClass::degenerate: return "degenerate";
    }
    return "?";
}

std::string_view to_string(PolarEquilibria::Status s) {
    switch (s) {
        case PolarEquilibria::Status::eight: return "eight";
        case PolarEquilibria::Status::pitchfork: return "pitchfork";
        case PolarEquilibria::Status::none: return "none";
    }
    return "?";
}

namespace {

// trace is zero for these Hamiltonian fields: eigenvalues +-sqrt(-det)
EqClass classify_det(double det) {
    if (det < 0.0 && std::sqrt(-det) > 1e-9) return EqClass::saddle;
    if (det > 0.0 && std::sqrt(det) > 1e-9) return EqClass::center;
    return EqClass::degenerate;
}

unsigned symmetry_tags(const FlowState& s) {
    constexpr double tol = 1e-9;
    unsigned t = 0;
    if (std::fabs(s[1]) < tol) t |= kFixR;
    if (std::fabs(s[0]) < tol) t |= kFixRTilde;
    if (std::fabs(s[0] - s[1]) < tol) t |= kFixRStar;
    return t;
}

}  // namespace

PolarEquilibria polar_equilibria(const FlowModel& m) {
    if (m.kind != FlowKind::polar) throw std::invalid_argument("polar_equilibria: needs a polar model");
    const double b1 = m.params[0], b2 = m.params[1], b3 = m.params[2], mu = m.params[3], B = m.params[4];
    if (B == 0.0) throw std::invalid_argument("polar_equilibria: B must be nonzero");
    if (mu == 0.0) throw std::invalid_argument("polar_equilibria: mu must be nonzero");
    PolarEquilibria out;
    out.i_star = -mu / B;
    if (out.i_star <= 0.0) return out;
    const double I = out.i_star;
    const double shift = 2.0 * b2 * I + 3.0 * b3 * I * I;
    // (2 mu I + 3 B I^2) cos 4phi = -(b1 + 2 b2 I + 3 b3 I^2), and 2 mu I + 3 B I^2 = mu^2 / B
    const double half = mu * mu / std::fabs(B);
    out.b1_interval = std::array<double, 2>{-shift - half, -shift + half};
    out.cos4phi = -(B / (mu * mu)) * (b1 + shift);
    const double c = out.cos4phi;
    if (std::fabs(c) > 1.0 + 1e-14) return out;
    const double a = std::acos(std::clamp(c, -1.0, 1.0));
    const bool boundary = std::fabs(std::fabs(c) - 1.0) <= 1e-14;
    out.status = boundary ? PolarEquilibria::Status::pitchfork : PolarEquilibria::Status::eight;
    std::vector<double> phis;
    for (int k = 0; k < 4; ++k) {
        phis.push_back((a + 2.0 * std::numbers::pi * k) / 4.0);
        if (!boundary) phis.push_back((2.0 * std::numbers::pi * (k + 1) - a) / 4.0);
    }
    std::sort(phis.begin(), phis.end());
    for (double phi : phis) {
        // Hessian of H: H_phiphi = -16 I^2 (mu + B I) cos = 0 here, so det = -H_Iphi^2
        const double h_ip = -4.0 * (2.0 * mu * I + 3.0 * B * I * I) * std::sin(4.0 * phi);
        const double det = -h_ip * h_ip;
        out.points.push_back({{I, phi}, boundary ? EqClass::degenerate : classify_det(det), 0});
    }
    return out;
}

std::vector<Equilibrium> cartesian_equilibria(const FlowModel& m, const EquilibriumBox& box, int grid_n, int jobs) {
    if (!m.cartesian()) throw std::invalid_argument("cartesian_equilibria: needs a Cartesian model");
    if (grid_n < 1) throw std::invalid_argument("cartesian_equilibria: grid_n must be positive");
    if (!(box.x_min < box.x_max && box.y_min < box.y_max)) throw std::invalid_argument("cartesian_equilibria: empty box");
    const auto ms = m.monomials();
    const std::size_t n = static_cast<std::size_t>(grid_n) * static_cast<std::size_t>(grid_n);
    std::vector<std::optional<cplx>> found(n + 1);
    auto newton = [&](cplx z) -> std::optional<cplx> {
        // no early exit on a small |f|: at a degenerate zero (eps = 0) Newton
        // only converges linearly and |f| ~ |z|^3 is tiny long before z is
        for (int it = 0; it < 200; ++it) {
            const CartEval e = cart_eval(ms, z);
            if (e.f == cplx(0.0)) return z;
            // real Jacobian of (Re f, Im f) in (x, y)
            const cplx fx = e.fz + e.fzb, fy = cplx(0.0, 1.0) * (e.fz - e.fzb);
            const double j11 = fx.real(), j12 = fy.real(), j21 = fx.imag(), j22 = fy.imag();
            const double det = j11 * j22 - j12 * j21;
            if (std::fabs(det) < 1e-300) return std::nullopt;
            const double dx = (j22 * e.f.real() - j12 * e.f.imag()) / det;
            const double dy = (-j21 * e.f.real() + j11 * e.f.imag()) / det;
            z -= cplx(dx, dy);
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > 1e6) return std::nullopt;
            if (std::hypot(dx, dy) < 1e-15 * (1.0 + std::abs(z))) break;
        }
        if (std::abs(cart_eval(ms, z).f) < 1e-11) return z;
        return std::nullopt;
    };
    parallel_for(n + 1, jobs, [&](std::size_t idx) {
        cplx z0{};
        if (idx < n) {
            const std::size_t i = idx / static_cast<std::size_t>(grid_n), j = idx % static_cast<std::size_t>(grid_n);
            const double fx = grid_n == 1 ? 0.5 : static_cast<double>(i) / (grid_n - 1);
            const double fy = grid_n == 1 ? 0.5 : static_cast<double>(j) / (grid_n - 1);
            z0 = {box.x_min + fx * (box.x_max - box.x_min), box.y_min + fy * (box.y_max - box.y_min)};
        }
        found[idx] = newton(z0);  // the last slot seeds the origin, always an equilibrium
    });
    std::vector<Equilibrium> out;
    for (const auto& z : found) {
        if (!z) continue;
        const double x = z->real(), y = z->imag();
        if (x < box.x_min || x > box.x_max || y < box.y_min || y > box.y_max) continue;
        const bool dup = std::any_of(out.begin(), out.end(), [&](const Equilibrium& q) {
            return std::hypot(q.s[0] - x, q.s[1] - y) < 1e-8 * (1.0 + std::abs(*z));
        });
        if (dup) continue;
        // snap rounding-level coordinates so symmetry tags are exact
        FlowState s{std::fabs(x) < 1e-13 ? 0.0 : x, std::fabs(y) < 1e-13 ? 0.0 : y};
        const CartEval e = cart_eval(ms, {s[0], s[1]});
        const cplx fx = e.fz + e.fzb, fy = cplx(0.0, 1.0) * (e.fz - e.fzb);
        const double det = fx.real() * fy.imag() - fy.real() * fx.imag();
        out.push_back({s, classify_det(det), symmetry_tags(s)});
    }
    std::sort(out.begin(), out.end(), [](const Equilibrium& a, const Equilibrium& b) {
        const double ra = std::hypot(a.s[0], a.s[1]), rb = std::hypot(b.s[0], b.s[1]);
        if (std::fabs(ra - rb) > 1e-9) return ra < rb;
        return std::atan2(a.s[1], a.s[0]) < std::atan2(b.s[1], b.s[0]);
    });
    return out;
}

}  // namespace h14
