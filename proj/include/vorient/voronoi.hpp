#pragma once

#include <vector>

#include "vorient/delaunay.hpp"
#include "vorient/geometry.hpp"
#include "vorient/vec3.hpp"

namespace vorient {

// Voronoi examination structure dual to a Delaunay complex. Examination
// points are the finite Voronoi vertices (tet circumcenters) inside the
// scaled bounding box plus the intersections of Voronoi edges (segments and
// hull rays) with the box boundary.
struct VoronoiStructure {
    std::vector<Vec3> exam_points;
    std::vector<std::vector<int>> cell_vertex_ids;  // per sample, indices into exam_points
    std::vector<std::vector<int>> neighbors;        // per sample, Delaunay neighbor samples
    Box3 box;

    std::size_t num_exam_points() const { return exam_points.size(); }
};

VoronoiStructure extract_voronoi(const TetComplex& complex, double bbox_scale = 1.3);

struct AreaWeights {
    std::vector<double> areas;
};

// Per-sample area weight: the area of the polygon cut from the box-clipped
// Voronoi cell by the plane through p_i orthogonal to q_max - p_i, where
// q_max is the farthest cell vertex. Degenerate cells fall back to the
// median of the valid weights (or diag^2/N when no cell is valid).
AreaWeights estimate_area_weights(const VoronoiStructure& vor, const PointCloud& cloud);

// Convex polyhedron as a face list; used for the cut-polygon areas.
// Grown from the clip box and repeatedly clipped by halfspaces n.x <= d.
class ConvexCell {
public:
    explicit ConvexCell(const Box3& box);

    void clip(const Vec3& n, double d);
    bool empty() const { return faces_.empty(); }

    // Polygon of intersection with plane n.x = d (empty if no crossing).
    std::vector<Vec3> section(const Vec3& n, double d) const;

    const std::vector<std::vector<Vec3>>& faces() const { return faces_; }

private:
    std::vector<std::vector<Vec3>> faces_;
    double tol_;
};

double polygon_area(const std::vector<Vec3>& poly);

}  // namespace vorient
