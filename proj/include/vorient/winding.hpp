#pragma once

#include <vector>

#include "vorient/geometry.hpp"
#include "vorient/voronoi.hpp"

namespace vorient {

// Winding value per examination point, aligned with
// VoronoiStructure::exam_points.
struct WindingField {
    std::vector<double> values;
};

// Generalized winding number at q:
//   w(q) = sum_i a_i (p_i - q) . n_i / (4 pi |p_i - q|^3),
// with terms closer than 1e-12 to q skipped. Contributions accumulate in
// sample index order so results are reproducible.
double winding_number(const Vec3& q, const PointCloud& cloud);

// Batch evaluation over all examination points; parallel over queries,
// identical to serial winding_number calls.
WindingField winding_field(const VoronoiStructure& vor, const PointCloud& cloud);

}  // namespace vorient
