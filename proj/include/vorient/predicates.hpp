#pragma once

#include "vorient/vec3.hpp"

namespace vorient {

// Adaptive-precision geometric predicates. A floating-point evaluation with a
// forward error bound is tried first; when the magnitude of the result does
// not dominate the bound, the sign is recomputed in exact rational
// arithmetic.

// Sign of det[b-a, c-a, d-a]. Positive when d lies on the side of plane
// (a,b,c) given by the right-hand rule; zero for coplanar points.
int orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

// For a positively oriented tetrahedron (a,b,c,d): positive when e lies
// strictly inside the circumsphere, negative outside, zero on it.
int insphere(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, const Vec3& e);

}  // namespace vorient
