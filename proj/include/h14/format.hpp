#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "h14/continuation.hpp"
#include "h14/curves.hpp"
#include "h14/maps.hpp"
#include "h14/nfflow.hpp"
#include "h14/normalform.hpp"
#include "h14/orbits.hpp"
#include "h14/portrait.hpp"

namespace h14 {

// 17 significant digits, C locale; round-trips every finite double.
std::string fmt(double v);

// Whole-string parse, C locale; std::invalid_argument on junk.
double parse_double(std::string_view s);
long parse_long(std::string_view s);

std::string symmetry_label(unsigned orbit_symmetry);  // "R", "R'", "R+R'", "none"

// CSV writers; the header row is part of the public contract.
void write_fixed_points_csv(std::ostream& os, const std::vector<FixedPoint>& fps);
void write_orbits_csv(std::ostream& os, const std::vector<PeriodicOrbit>& orbits);
void write_curve_csv(std::ostream& os, std::string_view curve, const std::vector<CurvePoint>& pts);
void write_continuation_csv(std::ostream& os, const ContinuationResult& r);
void write_scan_csv(std::ostream& os, const ScanResult& s);
void write_portrait_csv(std::ostream& os, const PortraitCloud& c);
void write_trajectory_csv(std::ostream& os, const FlowModel& m, const Trajectory& t);

nlohmann::ordered_json to_json(const NormalFormCoeffs& c);
nlohmann::ordered_json to_json(const PeriodicOrbit& o);
nlohmann::ordered_json to_json(const std::vector<Equilibrium>& eqs);
nlohmann::ordered_json to_json(const PolarEquilibria& pe);

extern const std::vector<std::string> kNormalFormFields;

}  // namespace h14
