#pragma once

#include <memory>
#include <string>
#include <vector>

#include "wallflux/fields.hpp"

namespace wallflux {

/// One time block of a sampled snapshot: node order is x-fastest row-major.
struct SnapshotSlab {
    double time = 0.0;
    std::vector<double> u1, u2, u3, p;
};

/// In-memory form of the canonical snapshot interchange format: a `key = value`
/// text header (origin, spacing, dims, times, nu) terminated by a blank line,
/// then one whitespace-separated record `u1 u2 u3 p` per grid node, one block
/// per time stamp.
struct Snapshot {
    Vec3 origin;
    Vec3 spacing;
    int dims[3] = {0, 0, 0};
    double nu = 0.0;
    std::vector<SnapshotSlab> slabs;

    std::size_t nodes_per_slab() const {
        return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    }
};

Snapshot read_snapshot(const std::string& path);
void write_snapshot(const std::string& path, const Snapshot& snap);

/// Sampled field over a snapshot grid: trilinear interpolation in space,
/// linear in time, derivative queries by second-order central differences at
/// the grid step. Wall pressure extrapolates quadratically from three interior
/// points along the wall normal at spacings {1,2,3} * grid step.
std::shared_ptr<FlowField> make_sampled_field(Snapshot snap, double horizon);

}  // namespace wallflux
