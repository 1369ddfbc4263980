#pragma once

#include <optional>
#include <span>
#include <vector>

#include "h14/maps.hpp"

namespace h14 {

enum SymmetryFlags : unsigned {
    kAsymmetric = 0,
    kRSymmetric = 1,       // meets the line x = y
    kRPrimeSymmetric = 2,  // meets the line 2y = P(x)
};

struct PeriodicOrbit {
    std::vector<PhasePoint> points;  // points[0] is the canonical representative
    int period = 0;
    double trace = 0.0;  // trace of D C^period at points[0]
    Stability stability = Stability::elliptic;
    unsigned symmetry = kAsymmetric;

    bool r_symmetric() const { return symmetry & kRSymmetric; }
    bool rprime_symmetric() const { return symmetry & kRPrimeSymmetric; }
};

struct OrbitSeed {
    PhasePoint guess;
    int period = 4;
};

struct NewtonOptions {
    int max_iter = 50;
    double tol = 1e-12;
    int max_halvings = 6;
    // |det(D C^q - I)| = |2 - trace| below this is treated as singular
    double singular_threshold = 1e-10;
};

// Builds the orbit through p, which must already close under C^period.
// Reduces to the minimal period, canonicalizes, and tags symmetry.
PeriodicOrbit make_orbit(const MapSpec& spec, PhasePoint p, int period);

// Sup-norm of C^period(p) - p (infinite if the iterate escapes).
double closure_residual(const MapSpec& spec, PhasePoint p, int period);

PeriodicOrbit refine_orbit(const MapSpec& spec, const OrbitSeed& seed, double tol = 1e-12);
PeriodicOrbit refine_orbit(const MapSpec& spec, const OrbitSeed& seed, const NewtonOptions& opt);

// Gauss-Newton with a truncated pseudo-inverse step. Works through the
// parabolic case where refine_orbit reports SingularJacobian; the result is
// accepted when the closure residual is below tol.
PeriodicOrbit polish_orbit(const MapSpec& spec, const OrbitSeed& seed, double tol = 1e-11);

enum class SymmetryLine { diagonal, second_reversor };

// Shoots along a symmetry line: s -> (s, s) for the diagonal, s -> (s, P(s)/2)
// for Fix(R'). Sign changes of the half-period mismatch are bisected and
// refined. Only orbits of exactly the requested period are returned, sorted
// by canonical representative.
std::vector<PeriodicOrbit> find_symmetric_orbits(const MapSpec& spec, int period, double s_lo, double s_hi,
                                                  int n_grid = 2000,
                                                  SymmetryLine line = SymmetryLine::diagonal);

// Eight period-4 seeds around an elliptic fixed point on the ellipse invariant
// under its linearization, at angles k*pi/4. Seeds k and 8-k are mirror
// images under (x, y) -> (y, x).
std::vector<OrbitSeed> garland_seeds(const MapSpec& spec, PhasePoint fixed_pt, double radius);

struct SearchBox {
    double x0 = -2.0, x1 = 2.0, y0 = -2.0, y1 = 2.0;
    int nx = 41, ny = 41;
};

// Newton from every node of a grid; orbits of exactly the requested period,
// deduplicated and sorted.
std::vector<PeriodicOrbit> search_orbits(const MapSpec& spec, int period, const SearchBox& box = {},
                                         int jobs = 1);

bool same_orbit(const PeriodicOrbit& a, const PeriodicOrbit& b, double tol = 1e-8);
// Keeps the first occurrence of each orbit, then sorts by representative.
std::vector<PeriodicOrbit> dedup_orbits(std::vector<PeriodicOrbit> orbits, double tol = 1e-8);

// Hausdorff distance between the orbit's point set and its (y, x) mirror.
double mirror_distance(const PeriodicOrbit& orbit);

}  // namespace h14
