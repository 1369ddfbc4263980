#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "h14/batch.hpp"
#include "h14/continuation.hpp"
#include "h14/curves.hpp"
#include "h14/errors.hpp"
#include "h14/format.hpp"
#include "h14/maps.hpp"
#include "h14/nfflow.hpp"
#include "h14/normalform.hpp"
#include "h14/orbits.hpp"
#include "h14/portrait.hpp"
#include "h14/verify.hpp"

namespace h14 {

namespace {

using json = nlohmann::ordered_json;

// Splits on sep; empty fields are kept so "1,,2" is rejected downstream.
std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<double> parse_list(const std::string& s, char sep, std::size_t n, const std::string& flag) {
    const auto parts = split(s, sep);
    if (parts.size() != n)
        throw std::invalid_argument(flag + ": expected " + std::to_string(n) + " values separated by '" + sep + "'");
    std::vector<double> v;
    for (const auto& p : parts) v.push_back(parse_double(p));
    return v;
}

struct Range {
    double lo = 0.0, hi = 0.0;
};

Range parse_range(const std::string& s, const std::string& flag) {
    const auto v = parse_list(s, ':', 2, flag);
    return {v[0], v[1]};
}

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 1) throw std::invalid_argument("--n must be positive");
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return v;
}

enum class Format { csv, json };

struct Globals {
    std::string out = "-";
    std::string format;
    int jobs = 0;
};

// Numeric flags are taken as strings and parsed in C-locale style.
struct Num {
    std::string text;
    double get(const char* flag) const {
        try {
            return parse_double(text);
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument(std::string(flag) + ": not a number: '" + text + "'");
        }
    }
    int get_int(const char* flag) const {
        long v = 0;
        try {
            v = parse_long(text);
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument(std::string(flag) + ": not an integer: '" + text + "'");
        }
        if (v < INT32_MIN || v > INT32_MAX) throw std::invalid_argument(std::string(flag) + ": out of range");
        return static_cast<int>(v);
    }
};

class Output {
public:
    Output(const std::string& path, std::ostream& fallback) {
        if (path == "-") {
            os_ = &fallback;
        } else {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw std::invalid_argument("--out: cannot open '" + path + "'");
            os_ = file_.get();
        }
    }
    std::ostream& get() { return *os_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_ = nullptr;
};

Format resolve_format(const Globals& g, Format dflt) {
    if (g.format.empty()) return dflt;
    if (g.format == "csv") return Format::csv;
    if (g.format == "json") return Format::json;
    throw std::invalid_argument("--format must be csv or json");
}

json point_json(PhasePoint p) { return json::array({p.x, p.y}); }

json curve_point_json(const CurvePoint& p) {
    json j;
    j["param"] = p.param;
    j["m1"] = p.m1;
    j["m2"] = p.m2;
    j["witness"] = p.witness ? to_json(*p.witness) : json(nullptr);
    return j;
}

PeriodicOrbit mirror_orbit(const PeriodicOrbit& o) {
    // (x, y) -> (-x, -y) conjugates the map at M1 to the map at -M1
    PeriodicOrbit m = o;
    for (auto& p : m.points) p = {-p.x, -p.y};
    return m;
}

// Map selection shared by several subcommands.
struct MapFlags {
    std::string map;
    Num m1{"0"}, m2;

    void add(CLI::App* c, bool need_m1 = true) {
        c->add_option("--map", map, "minus (delta=+1) or plus (delta=-1)")->required();
        if (need_m1) c->add_option("--m1", m1.text, "parameter M1")->required();
        c->add_option("--m2", m2.text, "parameter M2")->required();
    }
    int delta() const { return delta_from_name(map); }
    MapSpec spec() const { return MapSpec::make(delta(), m1.get("--m1"), m2.get("--m2")); }
};

// ---- subcommands ----

struct FixedPointsCmd {
    MapFlags mf;
    void setup(CLI::App& app, std::function<void()>& action, Globals& g, std::ostream& out) {
        auto* c = app.add_subcommand("fixed-points", "fixed points and their stability");
        mf.add(c);
        c->callback([this, &action, &g, &out] {
            action = [this, &g, &out] {
                const auto fps = fixed_points(mf.spec());
                Output o(g.out, out);
                if (resolve_format(g, Format::csv) == Format::csv) {
                    write_fixed_points_csv(o.get(), fps);
                } else {
                    json a = json::array();
                    for (const auto& f : fps)
                        a.push_back({{"x", f.point.x}, {"y", f.point.y}, {"trace", f.trace},
                                     {"stability", std::string(to_string(f.stability))}});
                    o.get() << a.dump(2) << '\n';
                }
            };
        });
    }
};

struct OrbitCmd {
    MapFlags mf;
    Num period{"4"}, grid{"2000"};
    std::string seed, interval = "-3:3", line = "diagonal";
    bool symmetric = false;

    void setup(CLI::App& app, std::function<void()>& action, Globals& g, std::ostream& out) {
        auto* c = app.add_subcommand("orbit", "periodic orbit from a seed or all symmetric orbits on a line");
        mf.add(c);
        c->add_option("--period", period.text, "orbit period (default 4)");
        auto* s = c->add_option("--seed", seed, "Newton seed x,y");
        auto* sym = c->add_flag("--symmetric", symmetric, "scan a symmetry line instead");
        c->add_option("--interval", interval, "scan interval a:b on the line (default -3:3)")->needs(sym);
        c->add_option("--line", line, "diagonal or second (Fix of C o R)")->needs(sym);
        c->add_option("--grid", grid.text, "sign-change grid size (default 2000)")->needs(sym);
        s->excludes(sym);
        c->callback([this, &action, &g, &out] {
            action = [this, &g, &out] {
                const MapSpec spec = mf.spec();
                const int q = period.get_int("--period");
                if (q < 1) throw std::invalid_argument("--period must be >= 1");
                std::vector<PeriodicOrbit> orbits;
                if (symmetric) {
                    const Range r = parse_range(interval, "--interval");
                    SymmetryLine l;
                    if (line == "diagonal")
                        l = SymmetryLine::diagonal;
                    else if (line == "second")
                        l = SymmetryLine::second_reversor;
                    else
                        throw std::invalid_argument("--line must be diagonal or second");
                    orbits = find_symmetric_orbits(spec, q, r.lo, r.hi, grid.get_int("--grid"), l);
                } else {
                    if (seed.empty()) throw std::invalid_argument("orbit: give --seed x,y or --symmetric");
                    const auto v = parse_list(seed, ',', 2, "--seed");
                    orbits.push_back(refine_orbit(spec, OrbitSeed{{v[0], v[1]}, q}));
                }
                Output o(g.out, out);
                if (resolve_format(g, Format::csv) == Format::csv) {
                    write_orbits_csv(o.get(), orbits);
                } else {
                    json a = json::array();
                    for (const auto& orb : orbits) a.push_back(to_json(orb));
                    o.get() << a.dump(2) << '\n';
                }
            };
        });
    }
};

struct CurvesCmd {
    std::string id, range, map;
    Num n{"100"}, branch{"1"};
    bool witness = false;

    void setup(CLI::App& app, std::function<void()>& action, Globals& g, std::ostream& out) {
        auto* c = app.add_subcommand("curves", "sample a bifurcation curve");
        c->add_option("--id", id, "curve name, e.g. L4_1, D4_l, Ltilde4_sym, Dhat4_l")->required();
        c->add_option("--range", range, "a:b in M2 (closed-form curves) or in the curve parameter t");
        c->add_option("--n", n.text, "number of points (default 100)");
        c->add_flag("--witness", witness, "attach the parabolic witness orbit");
        c->add_option("--branch", branch.text, "Ltilde4_sym root, +1 or -1 (default 1)");
        c->add_option("--map", map, "Ltilde4_sym only: map override");
        c->callback([this, &action, &g, &out] {
            action = [this, &g, &out] {
                const CurveId cid = curve_from_name(id);
                if (cid == CurveId::numeric) throw std::invalid_argument("--id numeric has no sampler; use continue");
                const CurveInfo info = curve_info(cid);
                const int count = n.get_int("--n");
                std::vector<CurvePoint> pts;
                if (info.closed_form) {
                    const auto w = sample_window(cid);
                    const Range r = range.empty() ? Range{w.first, w.second} : parse_range(range, "--range");
                    for (double m2 : linspace(r.lo, r.hi, count)) {
                        CurvePoint p = curve_point(cid, m2);
                        if (witness) p.witness = curve_witness(cid, p.m1, p.m2);
                        pts.push_back(p);
                    }
                } else if (cid == CurveId::Ltilde4_sym) {
                    const int b = branch.get_int("--branch");
                    if (b != 1 && b != -1) throw std::invalid_argument("--branch must be 1 or -1");
                    const int d = map.empty() ? info.delta : delta_from_name(map);
                    const Range r = range.empty() ? Range{0.9, 2.24} : parse_range(range, "--range");
                    for (double t : linspace(r.lo, r.hi, count)) {
                        CurvePoint p = ltilde_sym_point(d, t, b);
                        if (!witness) p.witness.reset();
                        pts.push_back(p);
                    }
                } else {
                    // Dhat4: continuation in t from the known solution at t = 0.3
                    const Range r = range.empty() ? Range{0.3, 0.0} : parse_range(range, "--range");
                    if (count < 2) throw std::invalid_argument("--n must be >= 2 for Dhat4 curves");
                    const Case22Unknowns start{-1.04, -0.43, -3.49};
                    const CurvePoint a = r.lo == 0.3 ? solve_case22(info.delta, 0.3, start)
                                                     : continue_case22(info.delta, 0.3, start, r.lo, 200).terminal;
                    // y from the third parametrization equation
                    const double ya = 0.5 * (a.m1 + 2.0 / (3.0 * std::sqrt(3.0)) * a.m2 *
                                                        std::sqrt(info.delta * a.m2) * std::cos(3.0 * r.lo));
                    const Case22Unknowns s{ya, a.m1, a.m2};
                    const Case22Path path = continue_case22(info.delta, r.lo, s, r.hi, count - 1);
                    pts = path.points;
                    if (pts.empty() || pts.back().param != path.terminal.param) pts.push_back(path.terminal);
                    const bool mirror = cid == CurveId::Dhat4_r;
                    for (auto& p : pts) {
                        if (mirror) {
                            p.m1 = -p.m1;
                            if (p.witness) p.witness = mirror_orbit(*p.witness);
                        }
                        if (!witness) p.witness.reset();
                    }
                }
                Output o(g.out, out);
                if (resolve_format(g, Format::csv) == Format::csv) {
                    write_curve_csv(o.get(), id, pts);
                } else {
                    json j;
                    j["curve"] = id;
                    j["trace_target"] = info.trace_target;
                    json a = json::array();
                    for (const auto& p : pts) a.push_back(curve_point_json(p));
                    j["points"] = a;
                    o.get() << j.dump(2) << '\n';
                }
            };
        });
    }
};

struct ContinueCmd {
    Num trace, steps{"200"}, direction{"1"}, h_max{"0.05"}, bound{"20"};
    std::string seed_file, crossing, free_param;

    void setup(CLI::App& app, std::function<void()>& action, Globals& g, std::ostream& out) {
        auto* c = app.add_subcommand("continue", "pseudo-arclength continuation of trace(D C^q) = 2 or -2");
        c->add_option("--trace", trace.text, "2 or -2")->required();
        c->add_option("--seed-file", seed_file, "JSON seed: map, m1, m2, x, y, period, free")->required();
        c->add_option("--steps", steps.text, "number of steps (default 200)");
        c->add_option("--direction", direction.text, "+1 or -1 along the free parameter (default 1)");
        c->add_option("--free", free_param, "m1 or m2; overrides the seed file");
        c->add_option("--h-max", h_max.text, "largest arclength step (default 0.05)");
        c->add_option("--param-bound", bound.text, "stop once |M1| or |M2| exceeds this (default 20)");
        c->add_option("--crossing", crossing, "emit only crossings of m1=V or m2=V");
        c->callback([this, &action, &g, &out] {
            action = [this, &g, &out] {
                const double tr = trace.get("--trace");
                if (tr != 2.0 && tr != -2.0) throw std::invalid_argument("--trace must be 2 or -2");
                std::ifstream in(seed_file);
                if (!in) throw std::invalid_argument("--seed-file: cannot open '" + seed_file + "'");
                json s;
                try {
                    s = json::parse(in);
                } catch (const json::exception& e) {
                    throw std::invalid_argument(std::string("--seed-file: ") + e.what());
                }
                for (const char* k : {"map", "m1", "m2", "x", "y"})
                    if (!s.contains(k)) throw std::invalid_argument(std::string("--seed-file: missing '") + k + "'");
                std::string fp = free_param.empty() ? s.value("free", std::string("m2")) : free_param;
                FreeParam free;
                if (fp == "m1")
                    free = FreeParam::m1;
                else if (fp == "m2")
                    free = FreeParam::m2;
                else
                    throw std::invalid_argument("free parameter must be m1 or m2");
                MapSpec spec;
                PhasePoint p;
                int period = 4;
                try {
                    spec = MapSpec::make(delta_from_name(s.at("map").get<std::string>()), s.at("m1").get<double>(),
                                         s.at("m2").get<double>());
                    p = {s.at("x").get<double>(), s.at("y").get<double>()};
                    period = s.value("period", 4);
                } catch (const json::exception& e) {
                    throw std::invalid_argument(std::string("--seed-file: ") + e.what());
                }
                ContinuationOptions opt;
                opt.direction = direction.get_int("--direction");
                if (opt.direction != 1 && opt.direction != -1) throw std::invalid_argument("--direction must be 1 or -1");
                opt.h_max = h_max.get("--h-max");
                opt.param_bound = bound.get("--param-bound");
                const int n = steps.get_int("--steps");
                if (n < 1) throw std::invalid_argument("--steps must be positive");
                const PeriodicOrbit orbit = make_orbit(spec, p, period);
                const ContinuationResult res = continue_trace_locus(spec, orbit, tr, free, n, opt);
                std::optional<std::vector<CurvePoint>> hits;
                if (!crossing.empty()) {
                    const auto kv = split(crossing, '=');
                    if (kv.size() != 2 || (kv[0] != "m1" && kv[0] != "m2"))
                        throw std::invalid_argument("--crossing must be m1=V or m2=V");
                    const double v = parse_double(kv[1]);
                    const bool on_m1 = kv[0] == "m1";
                    hits = locate_crossings(res, [=](double a, double b) { return (on_m1 ? a : b) - v; });
                }
                Output o(g.out, out);
                const Format f = resolve_format(g, Format::csv);
                if (hits) {
                    if (f == Format::csv) {
                        write_curve_csv(o.get(), "crossing", *hits);
                    } else {
                        json a = json::array();
                        for (const auto& h : *hits) a.push_back(curve_point_json(h));
                        o.get() << a.dump(2) << '\n';
                    }
                } else if (f == Format::csv) {
                    write_continuation_csv(o.get(), res);
                } else {
                    json j;
                    j["status"] = std::string(to_string(res.status));
                    j["message"] = res.message;
                    j["trace_target"] = res.trace_target;
                    json a = json::array();
                    for (std::size_t i = 0; i < res.points.size(); ++i) {
                        const auto& u = res.states[i];
                        a.push_back({{"arclength", res.points[i].param},
                                     {"m1", u[2]},
                                     {"m2", u[3]},
                                     {"x", u[0]},
                                     {"y", u[1]}});
                    }
                    j["points"] = a;
                    o.get() << j.dump(2) << '\n';
                }
                statusline = std::string(to_string(res.status)) + (res.message.empty() ? "" : ": " + res.message);
            };
        });
    }
    std::string statusline;
};

struct NfCmd {
    MapFlags mf;
    Num branch{"1"}, degree{"5"};
    void setup(CLI::App& app, std::function<void()>& action, Globals& g, std::ostream& out) {
        auto* c = app.add_subcommand("nf", "normal-form coefficients at the 1:4 resonant fixed point");
        mf.add(c, false);
        c->add_option("--branch", branch.text, "+1: M1 >= 0, -1: M1 <= 0 (default 1)");
        c->add_option("--degree", degree.text, "truncation degree, >= 5 (default 5)");
        c->callback([this, &action, &g, &out] {
            action = [this, &g, &out] {
                const int b = branch.get_int("--branch");
                if (b != 1 && b != -1) throw std::invalid_argument("--branch must be 1 or -1");
                const NormalFormCoeffs nc = normal_form_at(mf.delta(), mf.m2.get("--m2"), b, degree.get_int("--degree"));
                Output o(g.out, out);
                if (resolve_format(g, Format::json) == Format::json) {
                    o.get() << to_json(nc).dump(2) << '\n';
                } else {
                    ScanResult s;
                    s.rows.push_back({nc.spec.m2, nc.spec.m1, nc});
                    write_scan_csv(o.get(), s);
                }
            };
        });
    }
};

struct NfScanCmd {
    std::string map, range;
    void setup(CLI::App& app, std::function<void()>& action, Globals& g, std::ostream& out, std::ostream& err) {
        auto* c = app.add_subcommand("nf-scan", "normal-form coefficients along the resonance curve");
        c->add_option("--map", map, "minus or plus")->required();
        c->add_option("--m2-range", range, "a:b:n")->required();
        c->callback([this, &action, &g, &out, &err] {
            action = [this, &g, &out, &err] {
                const auto parts = split(range, ':');
                if (parts.size() != 3) throw std::invalid_argument("--m2-range must be a:b:n");
                const long n = parse_long(parts[2]);
                if (n < 1 || n > 10000000) throw std::invalid_argument("--m2-range: n out of range");
                const ScanResult s = coefficient_scan(delta_from_name(map), parse_double(parts[0]),
                                                      parse_double(parts[1]), static_cast<int>(n), g.jobs);
                for (const auto& d : s.diagnostics) err << "nf-scan: " << d << '\n';
                Output o(g.out, out);
                if (resolve_format(g, Format::csv) == Format::csv) {
                    write_scan_csv(o.get(), s);
                } else {
                    json a = json::array();
                    for (const auto& r : s.rows) a.push_back(to_json(r.coeffs));
                    o.get() << a.dump(2) << '\n';
                }
            };
        });
    }
};

struct PortraitCmd {
    MapFlags mf;
    std::string xr = "-1:1", yr = "-1:1", seed_mode = "grid", seeds_file, isa = "auto";
    Num n_orbits{"16"}, iters{"2000"}, radius;
    bool backward = false, keep_escaped = false;

    void setup(CLI::App& app, std::function<void()>& action, Globals& g, std::ostream& out) {
        auto* c = app.add_subcommand("portrait", "phase-portrait point cloud");
        mf.add(c);
        c->add_option("--x-range", xr, "seed region in x, a:b (default -1:1)");
        c->add_option("--y-range", yr, "seed region in y, a:b (default -1:1)");
        c->add_option("--n-orbits", n_orbits.text, "number of seeds (default 16)");
        c->add_option("--iters", iters.text, "iterations per orbit (default 2000)");
        c->add_option("--escape-radius", radius.text, "escape when |x| or |y| exceeds this (default 10)");
        c->add_option("--seed-mode", seed_mode, "grid, line_xy or list (default grid)");
        c->add_option("--seeds-file", seeds_file, "list mode: JSON array of [x, y]");
        c->add_flag("--backward", backward, "also emit backward iterates (negative iter)");
        c->add_flag("--keep-escaped", keep_escaped, "emit escaped orbits up to their escape");
        c->add_option("--isa", isa, "auto, scalar, avx2 or neon (default auto)");
        c->callback([this, &action, &g, &out] {
            action = [this, &g, &out] {
                PortraitRequest r;
                r.spec = mf.spec();
                const Range x = parse_range(xr, "--x-range"), y = parse_range(yr, "--y-range");
                r.x0 = x.lo;
                r.x1 = x.hi;
                r.y0 = y.lo;
                r.y1 = y.hi;
                r.n_orbits = n_orbits.get_int("--n-orbits");
                r.iters = iters.get_int("--iters");
                if (!radius.text.empty()) r.escape_radius = radius.get("--escape-radius");
                r.seed_mode = seed_mode_from_name(seed_mode);
                r.backward = backward;
                r.keep_escaped = keep_escaped;
                if (r.seed_mode == SeedMode::list) {
                    if (seeds_file.empty()) throw std::invalid_argument("--seed-mode list needs --seeds-file");
                    std::ifstream in(seeds_file);
                    if (!in) throw std::invalid_argument("--seeds-file: cannot open '" + seeds_file + "'");
                    try {
                        for (const auto& e : json::parse(in)) r.seeds.push_back({e.at(0).get<double>(), e.at(1).get<double>()});
                    } catch (const json::exception& e) {
                        throw std::invalid_argument(std::string("--seeds-file: ") + e.what());
                    }
                    r.n_orbits = static_cast<int>(r.seeds.size());
                } else if (!seeds_file.empty()) {
                    throw std::invalid_argument("--seeds-file needs --seed-mode list");
                }
                batch::Isa chosen;
                if (isa == "auto")
                    chosen = batch::detect_isa();
                else if (isa == "scalar")
                    chosen = batch::Isa::scalar;
                else if (isa == "avx2")
                    chosen = batch::Isa::avx2;
                else if (isa == "neon")
                    chosen = batch::Isa::neon;
                else
                    throw std::invalid_argument("--isa must be auto, scalar, avx2 or neon");
                if (!batch::isa_available(chosen)) throw std::invalid_argument("--isa: not available on this machine");
                const PortraitCloud cloud = render(r, g.jobs, chosen);
                Output o(g.out, out);
                if (resolve_format(g, Format::csv) == Format::csv) {
                    write_portrait_csv(o.get(), cloud);
                } else {
                    json j;
                    json orbits = json::array();
                    for (const auto& ob : cloud.orbits) {
                        json e;
                        e["orbit_id"] = ob.orbit_id;
                        e["seed"] = point_json(ob.seed);
                        e["escaped_at"] = ob.escaped_at ? json(*ob.escaped_at) : json(nullptr);
                        e["escaped_backward_at"] = ob.escaped_backward_at ? json(*ob.escaped_backward_at) : json(nullptr);
                        e["points"] = json::array();
                        orbits.push_back(e);
                    }
                    for (const auto& row : cloud.rows)
                        orbits[static_cast<std::size_t>(row.orbit_id)]["points"].push_back({row.iter, row.x, row.y});
                    j["orbits"] = orbits;
                    o.get() << j.dump() << '\n';
                }
            };
        });
    }
};

struct FlowCmd {
    std::string model, params, x0 = "0.1,0", box = "-1:1:-1:1";
    Num T{"100"}, tol{"1e-10"}, sample_dt{"0"}, grid{"41"};
    bool do_integrate = false, do_equilibria = false;

    FlowModel build() const {
        const FlowKind kind = flow_kind_from_name(model);
        const auto& names = FlowModel::param_names(kind);
        std::map<std::string, double> kv;
        if (!params.empty()) {
            for (const auto& item : split(params, ',')) {
                const auto p = split(item, '=');
                if (p.size() != 2) throw std::invalid_argument("--params: expected k=v, got '" + item + "'");
                if (std::find(names.begin(), names.end(), p[0]) == names.end())
                    throw std::invalid_argument("--params: unknown parameter '" + p[0] + "' for model " + model);
                if (!kv.emplace(p[0], parse_double(p[1])).second)
                    throw std::invalid_argument("--params: duplicate '" + p[0] + "'");
            }
        }
        // b14 may be left out for a1/b03 and then follows b14 = 5 b50
        if ((kind == FlowKind::a1 || kind == FlowKind::b03) && !kv.count("b14") && kv.count("b50"))
            kv["b14"] = 5.0 * kv["b50"];
        std::vector<double> v;
        for (const auto& n : names) {
            const auto it = kv.find(n);
            if (it == kv.end()) throw std::invalid_argument("--params: missing '" + n + "' for model " + model);
            v.push_back(it->second);
        }
        return FlowModel::make(kind, v);
    }

    void setup(CLI::App& app, std::function<void()>& action, Globals& g, std::ostream& out) {
        auto* c = app.add_subcommand("flow", "normal-form vector fields: integrate or find equilibria");
        c->add_option("--model", model, "arnold, a1, b03 or polar")->required();
        c->add_option("--params", params, "k=v,... (see README for names)");
        auto* in = c->add_flag("--integrate", do_integrate, "integrate one trajectory");
        auto* eq = c->add_flag("--equilibria", do_equilibria, "list equilibria");
        in->excludes(eq);
        c->add_option("--x0", x0, "initial state x,y (I,phi for polar; default 0.1,0)")->needs(in);
        c->add_option("--T", T.text, "final time, may be negative (default 100)")->needs(in);
        c->add_option("--tol", tol.text, "local error tolerance (default 1e-10)")->needs(in);
        c->add_option("--sample-dt", sample_dt.text, "dense output spacing; 0 = accepted steps")->needs(in);
        c->add_option("--box", box, "equilibrium search box x0:x1:y0:y1 (default -1:1:-1:1)")->needs(eq);
        c->add_option("--grid", grid.text, "Newton seeds per side (default 41)")->needs(eq);
        c->callback([this, &action, &g, &out] {
            action = [this, &g, &out] {
                if (!do_integrate && !do_equilibria) throw std::invalid_argument("flow: give --integrate or --equilibria");
                const FlowModel m = build();
                Output o(g.out, out);
                if (do_integrate) {
                    const auto s = parse_list(x0, ',', 2, "--x0");
                    IntegrateOptions opt;
                    opt.tol = tol.get("--tol");
                    opt.sample_dt = sample_dt.get("--sample-dt");
                    const Trajectory tr = integrate(m, {s[0], s[1]}, T.get("--T"), opt);
                    if (resolve_format(g, Format::csv) == Format::csv) {
                        write_trajectory_csv(o.get(), m, tr);
                    } else {
                        json j;
                        j["h_drift"] = tr.h_drift;
                        j["accepted"] = tr.accepted;
                        j["rejected"] = tr.rejected;
                        j["t"] = tr.t;
                        json st = json::array();
                        for (const auto& p : tr.s) st.push_back({p[0], p[1]});
                        j[m.cartesian() ? "xy" : "I_phi"] = st;
                        o.get() << j.dump() << '\n';
                    }
                    return;
                }
                const Format f = resolve_format(g, Format::json);
                if (m.cartesian()) {
                    const auto b = parse_list(box, ':', 4, "--box");
                    const auto eqs = cartesian_equilibria(m, {b[0], b[1], b[2], b[3]}, grid.get_int("--grid"), g.jobs);
                    if (f == Format::json) {
                        o.get() << to_json(eqs).dump(2) << '\n';
                    } else {
                        o.get() << "x,y,class,symmetry\n";
                        for (const auto& e : eqs) {
                            std::string sym;
                            if (e.symmetry & kFixR) sym += "R";
                            if (e.symmetry & kFixRTilde) sym += sym.empty() ? "Rtilde" : "+Rtilde";
                            if (e.symmetry & kFixRStar) sym += sym.empty() ? "Rstar" : "+Rstar";
                            o.get() << fmt(e.s[0]) << ',' << fmt(e.s[1]) << ',' << to_string(e.cls) << ','
                                    << (sym.empty() ? "none" : sym) << '\n';
                        }
                    }
                } else {
                    const PolarEquilibria pe = polar_equilibria(m);
                    if (f == Format::json) {
                        o.get() << to_json(pe).dump(2) << '\n';
                    } else {
                        o.get() << "I,phi,class\n";
                        for (const auto& e : pe.points)
                            o.get() << fmt(e.s[0]) << ',' << fmt(e.s[1]) << ',' << to_string(e.cls) << '\n';
                    }
                }
            };
        });
    }
};

struct VerifyCmd {
    bool failed = false;
    void setup(CLI::App& app, std::function<void()>& action, Globals& g, std::ostream& out) {
        auto* c = app.add_subcommand("verify", "run the invariant suite; exit 0 iff every check passes");
        c->callback([this, &action, &g, &out] {
            action = [this, &g, &out] {
                const auto results = run_invariant_suite(g.jobs);
                Output o(g.out, out);
                const Format f = resolve_format(g, Format::csv);
                json a = json::array();
                for (const auto& r : results) {
                    failed = failed || !r.passed;
                    if (f == Format::json) {
                        a.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}});
                    } else {
                        char t[32];
                        std::snprintf(t, sizeof t, "%.3fs", r.seconds);
                        o.get() << (r.passed ? "PASS " : "FAIL ") << r.name << " [" << t << "] " << r.detail << '\n';
                    }
                }
                if (f == Format::json) o.get() << a.dump(2) << '\n';
            };
        });
    }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"1:4 resonance toolkit for the cubic Henon maps", "henon14"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    Num jobs{"0"};
    app.add_option("--out", g.out, "output file, '-' for standard output (default -)");
    app.add_option("--format", g.format, "csv or json (default depends on the subcommand)");
    app.add_option("--jobs", jobs.text, "worker threads, 0 = all cores (default 0)");

    std::function<void()> action;
    FixedPointsCmd fp;
    OrbitCmd orbit;
    CurvesCmd curves;
    ContinueCmd cont;
    NfCmd nf;
    NfScanCmd scan;
    PortraitCmd portrait;
    FlowCmd flow;
    VerifyCmd verify;
    fp.setup(app, action, g, out);
    orbit.setup(app, action, g, out);
    curves.setup(app, action, g, out);
    cont.setup(app, action, g, out);
    nf.setup(app, action, g, out);
    scan.setup(app, action, g, out, err);
    portrait.setup(app, action, g, out);
    flow.setup(app, action, g, out);
    verify.setup(app, action, g, out);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : 2;
    }

    try {
        g.jobs = jobs.get_int("--jobs");
        if (g.jobs < 0) throw std::invalid_argument("--jobs must be >= 0");
        if (!action) throw std::invalid_argument("no subcommand");
        action();
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    if (!cont.statusline.empty() && cont.statusline != "completed") err << "continue: " << cont.statusline << '\n';
    return verify.failed ? 1 : 0;
}

}  // namespace h14
