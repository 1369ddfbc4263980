#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace h14 {

enum class FlowKind { arnold, a1, b03, polar };

std::string_view to_string(FlowKind k);
FlowKind flow_kind_from_name(std::string_view name);

// One term i c z^j (z*)^k of a Cartesian vector field.
struct Monomial {
    int j, k;
    double c;
};

// Parameters in the order of the named constructors.
struct FlowModel {
    FlowKind kind = FlowKind::arnold;
    std::vector<double> params;

    // dz/dt = i (eps z + b z|z|^2 + z*^3)
    static FlowModel arnold(double eps, double b);
    // dz/dt = i (beta z + (1+mu) z|z|^2 + z*^3 + B32 z|z|^4 + B50 z^5 + B14 |z|^2 z*^3); needs B14 = 5 B50
    static FlowModel a1(double beta, double mu, double b32, double b50, double b14);
    // dz/dt = i (bh z + B21 z|z|^2 + eps z*^3 + B32 z|z|^4 + B50 z^5 + B14 |z|^2 z*^3); needs B14 = 5 B50
    static FlowModel b03(double beta_hat, double b21, double eps, double b32, double b50, double b14);
    // H = b1 I + b2 I^2 + b3 I^3 + mu I^2 cos 4phi + B I^3 cos 4phi
    static FlowModel polar(double b1, double b2, double b3, double mu, double B);

    // Builds from a name and the parameter list above; std::invalid_argument on bad input.
    static FlowModel make(FlowKind kind, const std::vector<double>& params);

    static const std::vector<std::string>& param_names(FlowKind kind);

    bool cartesian() const { return kind != FlowKind::polar; }
    std::vector<Monomial> monomials() const;  // Cartesian kinds only
};

// (x, y) with z = x + i y, or (I, phi) for the polar kind.
using FlowState = std::array<double, 2>;

FlowState rhs(const FlowModel& m, const FlowState& s);
std::complex<double> rhs_complex(const FlowModel& m, std::complex<double> z);

// Conserved quantity: K with dz/dt = i dK/dz* (Cartesian) or H(I, phi) (polar).
// For matched states K = 2 H.
double hamiltonian(const FlowModel& m, const FlowState& s);

// Cartesian B03 model in the polar frame: b1 = bh, b2 = B21, b3 = 4 B32 / 3,
// mu = eps, B = 8 B50 (I = |z|^2 / 2).
FlowModel polar_from_b03(const FlowModel& b03_model);

FlowState to_polar(const FlowState& xy);
FlowState to_cartesian(const FlowState& ip);

struct IntegrateOptions {
    double tol = 1e-10;        // local error per step (absolute + relative)
    double sample_dt = 0.0;    // > 0: dense output on this grid; else accepted steps
    long max_steps = 10000000;
    double h_init = 0.0;       // 0 picks a starting step
};

struct Trajectory {
    std::vector<double> t;
    std::vector<FlowState> s;
    double h_drift = 0.0;  // max |H(t) - H(0)| over returned samples and accepted steps
    long accepted = 0;
    long rejected = 0;
};

// Dormand-Prince 5(4) with continuous extension. T may be negative.
// StepUnderflow if the step collapses.
Trajectory integrate(const FlowModel& m, const FlowState& s0, double T, const IntegrateOptions& opt = {});

enum class EqClass { center, saddle, degenerate };
std::string_view to_string(EqClass c);

enum EqSymmetry : unsigned { kFixR = 1, kFixRTilde = 2, kFixRStar = 4 };  // y = 0, x = 0, x = y

struct Equilibrium {
    FlowState s;
    EqClass cls = EqClass::degenerate;
    unsigned symmetry = 0;
};

struct PolarEquilibria {
    enum class Status { eight, pitchfork, none };
    Status status = Status::none;
    std::vector<Equilibrium> points;  // (I*, phi*) with phi* in [0, 2 pi)
    std::optional<std::array<double, 2>> b1_interval;  // empty when I* <= 0
    double i_star = 0.0;
    double cos4phi = 0.0;
};

std::string_view to_string(PolarEquilibria::Status s);

// Non-symmetric equilibria I* = -mu/B of the polar model.
PolarEquilibria polar_equilibria(const FlowModel& m);

struct EquilibriumBox {
    double x_min = -1.0, x_max = 1.0, y_min = -1.0, y_max = 1.0;
};

// Newton from every node of a grid_n x grid_n grid; deduplicated, classified,
// sorted by (|z|, arg z).
std::vector<Equilibrium> cartesian_equilibria(const FlowModel& m, const EquilibriumBox& box = {}, int grid_n = 41,
                                              int jobs = 1);

}  // namespace h14
