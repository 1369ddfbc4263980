#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "h14/curves.hpp"

namespace h14 {

enum class FreeParam { m1, m2 };

struct ContinuationOptions {
    double h_init = 0.01;
    double h_min = 1e-5;
    double h_max = 0.05;
    int max_corrector_iter = 8;
    double tol = 1e-11;
    // +1 / -1: initial direction measured along the seed's free parameter
    int direction = 1;
    // stop once |M1| or |M2| exceeds this
    double param_bound = 20.0;
};

enum class ContinuationStatus { completed, step_too_small, left_bounds };

std::string_view to_string(ContinuationStatus s);

// Unknowns (x, y, M1, M2) of the bordered system.
using LocusState = std::array<double, 4>;

struct ContinuationResult {
    int delta = 1;
    int period = 4;
    double trace_target = 2.0;
    std::vector<CurvePoint> points;  // param = arclength in (x, y, M1, M2)
    std::vector<LocusState> states;  // raw unknowns, parallel to points
    ContinuationStatus status = ContinuationStatus::completed;
    std::string message;
};

// Residual {C^q(Q) - Q, tr D C^q(Q) - target} at a state.
std::array<double, 3> locus_residual(int delta, int period, double trace_target, const LocusState& u);

// Moves the orbit onto the locus by Newton in (Q, free parameter) with the
// other parameter held. NoConvergence on failure.
LocusState seed_on_locus(const MapSpec& spec0, const PeriodicOrbit& orbit0, double trace_target, FreeParam free_param);

// Pseudo-arclength continuation of the locus trace(D C^q) = target. The seed
// is corrected first; then `steps` points are produced unless the step size
// underflows or the branch leaves the parameter bounds, which is reported in
// status rather than thrown.
ContinuationResult continue_trace_locus(const MapSpec& spec0, const PeriodicOrbit& orbit0, double trace_target,
                                        FreeParam free_param, int steps, const ContinuationOptions& opt = {});

// Zeros of g(M1, M2) between consecutive continuation points, each refined by
// Newton on the bordered system augmented with g = 0.
using ParamFunction = std::function<double(double m1, double m2)>;
std::vector<CurvePoint> locate_crossings(const ContinuationResult& path, const ParamFunction& g);

}  // namespace h14
