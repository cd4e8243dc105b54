#pragma once

#include <cstdint>
#include <vector>

#include "vorient/vec3.hpp"

namespace vorient {

// Unit normal parameterized by polar/azimuthal angles:
//   n = (sin u cos v, sin u sin v, cos u).
struct SphericalNormal {
    double u = 0.0;
    double v = 0.0;
};

Vec3 spherical_to_cartesian(const SphericalNormal& sn);
SphericalNormal cartesian_to_spherical(const Vec3& n);

struct PointCloud {
    std::vector<Vec3> points;
    std::vector<SphericalNormal> normals;  // empty until assigned
    std::vector<double> areas;             // empty until estimated

    std::size_t size() const { return points.size(); }
    bool has_normals() const { return normals.size() == points.size() && !points.empty(); }
    bool has_areas() const { return areas.size() == points.size() && !points.empty(); }

    Vec3 normal_vector(std::size_t i) const { return spherical_to_cartesian(normals[i]); }
};

struct GroundTruthCloud {
    PointCloud cloud;
    std::vector<Vec3> gt_normals;  // unit vectors, same length as cloud.points
};

// Uniform scale + translation: x -> (x - center) * scale.
struct UnitBoxTransform {
    Vec3 center{0, 0, 0};
    double scale = 1.0;

    Vec3 apply(const Vec3& p) const { return (p - center) * scale; }
    Vec3 invert(const Vec3& p) const { return p / scale + center; }
};

// Rescale into [-0.5, 0.5]^3 so the longest bounding-box edge becomes 1.
// Throws std::invalid_argument on degenerate input (all points coincident
// or fewer than 4 points).
PointCloud normalize_unit_box(const PointCloud& cloud, UnitBoxTransform* out_transform = nullptr);

// Displace every point by level * N(0, I3). level = 0 is the identity.
PointCloud add_gaussian_noise(const PointCloud& cloud, double level, std::uint64_t seed);

// Synthetic ground-truth fixtures. All are normalized to the unit box;
// normals are unaffected by the uniform scale + translation.
GroundTruthCloud generate_torus(double major_radius, double minor_radius, std::size_t n,
                                std::uint64_t seed);
GroundTruthCloud generate_sphere(std::size_t n, std::uint64_t seed);
GroundTruthCloud generate_thin_sheet(double thickness, std::size_t n, std::uint64_t seed);

// Uniformly random unit directions, one per point.
std::vector<SphericalNormal> random_init_normals(std::size_t n, std::uint64_t seed);

}  // namespace vorient
