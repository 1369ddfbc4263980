#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "h14/batch.hpp"
#include "h14/maps.hpp"

namespace h14 {

enum class SeedMode { grid, line_xy, list };

std::string_view to_string(SeedMode m);
SeedMode seed_mode_from_name(std::string_view name);

struct PortraitRequest {
    MapSpec spec;
    double x0 = -1.0, x1 = 1.0, y0 = -1.0, y1 = 1.0;
    int n_orbits = 16;  // list mode: taken from seeds
    int iters = 2000;
    double escape_radius = kDefaultEscapeRadius;
    SeedMode seed_mode = SeedMode::grid;
    std::vector<PhasePoint> seeds;  // list mode only
    bool backward = false;          // also emit iters backward iterates (negative iter)
    bool keep_escaped = false;      // emit escaped orbits up to their escape

    // std::invalid_argument on a malformed request
    void validate() const;
};

// grid: ceil(sqrt n) columns over the region, row-major, first n nodes;
// line_xy: n points on x = y inside the region, endpoints included;
// list: the given seeds.
std::vector<PhasePoint> portrait_seeds(const PortraitRequest& req);

struct PortraitRow {
    int orbit_id;
    int iter;
    double x, y;
};

struct PortraitOrbit {
    int orbit_id = 0;
    PhasePoint seed;
    std::optional<int> escaped_at;           // forward step that left the box
    std::optional<int> escaped_backward_at;  // same, backward
    bool escaped() const { return escaped_at.has_value() || escaped_backward_at.has_value(); }
};

struct PortraitCloud {
    std::vector<PortraitOrbit> orbits;
    std::vector<PortraitRow> rows;  // (orbit_id, iter) order
    batch::Isa isa = batch::Isa::scalar;
};

PortraitCloud render(const PortraitRequest& req, int jobs = 1);
PortraitCloud render(const PortraitRequest& req, int jobs, batch::Isa isa);

// Points of one orbit in iteration order.
std::vector<PhasePoint> orbit_points(const PortraitCloud& cloud, int orbit_id);

struct AngularCluster {
    double centroid = 0.0;  // circular mean angle in (-pi, pi]
    std::size_t count = 0;
};

// Angular clustering of every q-th point around center; sectors separated by
// gaps wider than 2 pi / 64 are distinct clusters. Degenerate if every point
// lies within 1e-9 of center.
std::vector<AngularCluster> angular_clusters(const std::vector<PhasePoint>& pts, int q, PhasePoint center);
int island_count(const std::vector<PhasePoint>& pts, int q, PhasePoint center);

// Phase of the 4-fold pattern: arg of the mean of e^{4 i alpha} over cluster
// centroids, divided by 4, so the result lives modulo pi/2.
double chain_phase(const std::vector<AngularCluster>& clusters);

}  // namespace h14
