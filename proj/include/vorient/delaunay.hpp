#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "vorient/vec3.hpp"

namespace vorient {

struct DegenerateInputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Delaunay tetrahedralization. Every tetrahedron is positively oriented
// (orient3d(v0,v1,v2,v3) > 0); adjacency[t][k] is the neighbor across the
// face opposite vertex k, or -1 on the convex hull.
struct TetComplex {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 4>> tets;
    std::vector<std::array<int, 4>> adjacency;

    // Face opposite local vertex k, ordered so the opposite vertex lies on
    // the negative side of the face plane.
    static constexpr std::array<std::array<int, 3>, 4> face_verts = {{
        {1, 2, 3},
        {0, 3, 2},
        {1, 3, 0},
        {0, 2, 1},
    }};
};

// Incremental insertion with adaptive exact predicates. Exactly cospherical
// or duplicate configurations trigger a deterministic jitter (1e-9 of the box
// diagonal, seeded from a hash of the input) and a rebuild.
// Throws DegenerateInputError when no valid complex can be built.
TetComplex delaunay_tetrahedralize(const std::vector<Vec3>& points);

// Circumcenter of tet t (plain floating point).
Vec3 circumcenter(const TetComplex& complex, int t);

}  // namespace vorient
