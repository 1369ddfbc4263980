#include "h14/format.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace h14 {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(std::string_view s) {
    const std::string_view whole = s;
    if (s.size() > 1 && s[0] == '+' && s[1] != '-') s.remove_prefix(1);  // from_chars rejects '+'
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
        throw std::invalid_argument("not a number: '" + std::string(whole) + "'");
    return v;
}

long parse_long(std::string_view s) {
    const std::string_view whole = s;
    if (s.size() > 1 && s[0] == '+' && s[1] != '-') s.remove_prefix(1);  // from_chars rejects '+'
    long v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
        throw std::invalid_argument("not an integer: '" + std::string(whole) + "'");
    return v;
}

std::string symmetry_label(unsigned s) {
    const bool r = s & kRSymmetric, rp = s & kRPrimeSymmetric;
    if (r && rp) return "R+R'";
    if (r) return "R";
    if (rp) return "R'";
    return "none";
}

void write_fixed_points_csv(std::ostream& os, const std::vector<FixedPoint>& fps) {
    os << "x,y,trace,stability\n";
    for (const auto& f : fps)
        os << fmt(f.point.x) << ',' << fmt(f.point.y) << ',' << fmt(f.trace) << ',' << to_string(f.stability) << '\n';
}

void write_orbits_csv(std::ostream& os, const std::vector<PeriodicOrbit>& orbits) {
    os << "orbit_id,index,x,y,period,trace,stability,symmetry\n";
    for (std::size_t i = 0; i < orbits.size(); ++i) {
        const auto& o = orbits[i];
        for (std::size_t k = 0; k < o.points.size(); ++k)
            os << i << ',' << k << ',' << fmt(o.points[k].x) << ',' << fmt(o.points[k].y) << ',' << o.period << ','
               << fmt(o.trace) << ',' << to_string(o.stability) << ',' << symmetry_label(o.symmetry) << '\n';
    }
}

void write_curve_csv(std::ostream& os, std::string_view curve, const std::vector<CurvePoint>& pts) {
    os << "curve,param,m1,m2,witness_period,witness_trace,witness_x,witness_y\n";
    for (const auto& p : pts) {
        os << curve << ',' << fmt(p.param) << ',' << fmt(p.m1) << ',' << fmt(p.m2) << ',';
        if (p.witness)
            os << p.witness->period << ',' << fmt(p.witness->trace) << ',' << fmt(p.witness->points[0].x) << ','
               << fmt(p.witness->points[0].y);
        else
            os << ",,,";
        os << '\n';
    }
}

void write_continuation_csv(std::ostream& os, const ContinuationResult& r) {
    os << "index,arclength,m1,m2,x,y,trace\n";
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        const auto& p = r.points[i];
        const auto& u = r.states[i];
        const double tr = p.witness ? p.witness->trace : r.trace_target;
        os << i << ',' << fmt(p.param) << ',' << fmt(p.m1) << ',' << fmt(p.m2) << ',' << fmt(u[0]) << ',' << fmt(u[1])
           << ',' << fmt(tr) << '\n';
    }
}

const std::vector<std::string> kNormalFormFields{"m1",     "m2",     "x",      "y",      "b21_re",  "b21_im",
                                                 "b03_re", "b03_im", "b32_re", "b32_im", "b50_re",  "b50_im",
                                                 "b14_re", "b14_im", "a_ratio", "omega", "phase_rotation"};

namespace {

std::vector<double> nf_values(const NormalFormCoeffs& c) {
    return {c.spec.m1,     c.spec.m2,     c.basepoint.x, c.basepoint.y, c.b21.real(), c.b21.imag(),
            c.b03.real(),  c.b03.imag(),  c.b32.real(),  c.b32.imag(),  c.b50.real(), c.b50.imag(),
            c.b14.real(),  c.b14.imag(),  c.a_ratio ? *c.a_ratio : std::numeric_limits<double>::quiet_NaN(),
            c.omega,       c.phase_rotation};
}

}  // namespace

void write_scan_csv(std::ostream& os, const ScanResult& s) {
    for (std::size_t i = 0; i < kNormalFormFields.size(); ++i) os << (i ? "," : "") << kNormalFormFields[i];
    os << '\n';
    for (const auto& r : s.rows) {
        const auto v = nf_values(r.coeffs);
        for (std::size_t i = 0; i < v.size(); ++i) {
            os << (i ? "," : "");
            // undefined A is an empty cell
            if (!std::isnan(v[i])) os << fmt(v[i]);
        }
        os << '\n';
    }
}

void write_portrait_csv(std::ostream& os, const PortraitCloud& c) {
    os << "orbit_id,iter,x,y,escaped\n";
    for (const auto& r : c.rows)
        os << r.orbit_id << ',' << r.iter << ',' << fmt(r.x) << ',' << fmt(r.y) << ','
           << (c.orbits[static_cast<std::size_t>(r.orbit_id)].escaped() ? 1 : 0) << '\n';
}

void write_trajectory_csv(std::ostream& os, const FlowModel& m, const Trajectory& t) {
    os << (m.cartesian() ? "t,x,y\n" : "t,I,phi\n");
    for (std::size_t i = 0; i < t.t.size(); ++i) os << fmt(t.t[i]) << ',' << fmt(t.s[i][0]) << ',' << fmt(t.s[i][1]) << '\n';
}

nlohmann::ordered_json to_json(const NormalFormCoeffs& c) {
    nlohmann::ordered_json j;
    const auto v = nf_values(c);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::isnan(v[i]))
            j[kNormalFormFields[i]] = nullptr;
        else
            j[kNormalFormFields[i]] = v[i];
    }
    return j;
}

nlohmann::ordered_json to_json(const PeriodicOrbit& o) {
    nlohmann::ordered_json j;
    j["period"] = o.period;
    j["trace"] = o.trace;
    j["stability"] = std::string(to_string(o.stability));
    j["symmetry"] = symmetry_label(o.symmetry);
    auto pts = nlohmann::ordered_json::array();
    for (const auto& p : o.points) pts.push_back({p.x, p.y});
    j["points"] = pts;
    return j;
}

namespace {

nlohmann::ordered_json eq_symmetry(unsigned s) {
    auto a = nlohmann::ordered_json::array();
    if (s & kFixR) a.push_back("Fix(R)");
    if (s & kFixRTilde) a.push_back("Fix(R~)");
    if (s & kFixRStar) a.push_back("Fix(R*)");
    return a;
}

}  // namespace

nlohmann::ordered_json to_json(const std::vector<Equilibrium>& eqs) {
    auto a = nlohmann::ordered_json::array();
    for (const auto& e : eqs) {
        nlohmann::ordered_json j;
        j["x"] = e.s[0];
        j["y"] = e.s[1];
        j["class"] = std::string(to_string(e.cls));
        j["symmetry"] = eq_symmetry(e.symmetry);
        a.push_back(j);
    }
    return a;
}

nlohmann::ordered_json to_json(const PolarEquilibria& pe) {
    nlohmann::ordered_json j;
    j["status"] = std::string(to_string(pe.status));
    j["i_star"] = pe.i_star;
    j["cos4phi"] = pe.cos4phi;
    if (pe.b1_interval)
        j["b1_interval"] = {(*pe.b1_interval)[0], (*pe.b1_interval)[1]};
    else
        j["b1_interval"] = nullptr;
    auto a = nlohmann::ordered_json::array();
    for (const auto& e : pe.points) {
        nlohmann::ordered_json q;
        q["I"] = e.s[0];
        q["phi"] = e.s[1];
        q["class"] = std::string(to_string(e.cls));
        a.push_back(q);
    }
    j["equilibria"] = a;
    return j;
}

}  // namespace h14
