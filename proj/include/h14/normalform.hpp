#pragma once

#include <optional>
#include <string>
#include <vector>

#include "h14/maps.hpp"
#include "h14/series.hpp"

namespace h14 {

// Map at an elliptic fixed point with eigenvalues +-i, in z = u - i v where
// (u, v) = (x, y) - fixed point. Linear coefficient is exactly i.
struct ComplexifiedMap {
    MapSpec spec;
    PhasePoint fixed_point;
    TruncatedSeries series;
};

ComplexifiedMap complexify(const MapSpec& spec, PhasePoint fixed_pt, int max_degree = 5);

// The real coordinate change as z(x, y), for checks.
cplx to_complex(PhasePoint fixed_pt, PhasePoint p);
PhasePoint from_complex(PhasePoint fixed_pt, cplx z);

struct NormalFormCoeffs {
    cplx b21, b03, b32, b50, b14;
    // |B21 / B03|; empty when B03 vanishes
    std::optional<double> a_ratio;
    double omega = 0.0;  // Re(B32 - B50 - B14)
    MapSpec spec;
    PhasePoint basepoint;
    double phase_rotation = 0.0;  // theta in z -> e^{i theta} z that made B03 real

    double identity_i() const;    // |Im B21|
    double identity_ii() const;   // |-3 conj(B03) B21 - 5i B50 + i conj(B14)|
    double identity_iii() const;  // |3 B21^2 + 6 Im B32 - 9 |B03|^2|
    double identity_iv() const;   // |Re B14 - 5 Re B50|
};

struct BirkhoffResult {
    TruncatedSeries normal_form;  // resonant terms only, after rotation
    TruncatedSeries transform;    // z = transform(w), w the normal-form coordinate (before rotation)
    double phase_rotation = 0.0;
};

// Removes every non-resonant monomial (j - k != 1 mod 4) up to max_degree by a
// sequence of near-identity symplectic changes (time-one maps of polynomial
// vector fields), then rotates so that B03 is real.
BirkhoffResult birkhoff_reduce_series(const TruncatedSeries& series);

NormalFormCoeffs birkhoff_reduce(const ComplexifiedMap& cm);

// Resonant fixed point on the given branch (sign of M1), complexified and reduced.
NormalFormCoeffs normal_form_at(int delta, double m2, int branch = 1, int max_degree = 5);

struct ScanRow {
    double m2 = 0.0;
    double m1 = 0.0;
    NormalFormCoeffs coeffs;
};

struct ScanResult {
    std::vector<ScanRow> rows;             // ordered by M2
    std::vector<std::string> diagnostics;  // skipped rows
};

// n evenly spaced M2 values in [m2_lo, m2_hi], M1 >= 0 branch.
ScanResult coefficient_scan(int delta, double m2_lo, double m2_hi, int n, int jobs = 1);

}  // namespace h14
