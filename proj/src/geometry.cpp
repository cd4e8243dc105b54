#include "vorient/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vorient/rng.hpp"

namespace vorient {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Vec3 spherical_to_cartesian(const SphericalNormal& sn) {
    double su = std::sin(sn.u);
    return {su * std::cos(sn.v), su * std::sin(sn.v), std::cos(sn.u)};
}

SphericalNormal cartesian_to_spherical(const Vec3& n) {
    Vec3 u = n.normalized();
    SphericalNormal sn;
    sn.u = std::acos(std::clamp(u.z, -1.0, 1.0));
    sn.v = std::atan2(u.y, u.x);
    return sn;
}

PointCloud normalize_unit_box(const PointCloud& cloud, UnitBoxTransform* out_transform) {
    if (cloud.size() < 4) throw std::invalid_argument("normalize_unit_box: need at least 4 points");
    Box3 box = Box3::bounding(cloud.points.begin(), cloud.points.end());
    Vec3 ext = box.extent();
    double longest = std::max({ext.x, ext.y, ext.z});
    if (!(longest > 0.0)) throw std::invalid_argument("normalize_unit_box: degenerate bounding box");

    UnitBoxTransform t;
    t.center = box.center();
    t.scale = 1.0 / longest;
    if (out_transform) *out_transform = t;

    PointCloud out = cloud;
    for (Vec3& p : out.points) p = t.apply(p);
    return out;
}

PointCloud add_gaussian_noise(const PointCloud& cloud, double level, std::uint64_t seed) {
    if (level < 0.0) throw std::invalid_argument("add_gaussian_noise: negative level");
    PointCloud out = cloud;
    if (level == 0.0) return out;
    Rng rng(seed);
    for (Vec3& p : out.points) p += rng.normal3() * level;
    return out;
}

namespace {

GroundTruthCloud finalize_fixture(std::vector<Vec3> points, std::vector<Vec3> normals) {
    GroundTruthCloud gt;
    gt.cloud.points = std::move(points);
    gt.gt_normals = std::move(normals);
    gt.cloud = normalize_unit_box(gt.cloud);
    return gt;
}

}  // namespace

GroundTruthCloud generate_torus(double major_radius, double minor_radius, std::size_t n,
                                std::uint64_t seed) {
    if (!(major_radius > minor_radius && minor_radius > 0.0))
        throw std::invalid_argument("generate_torus: need major > minor > 0");
    if (n < 100) throw std::invalid_argument("generate_torus: need n >= 100");

    Rng rng(seed);
    std::vector<Vec3> pts, nrm;
    pts.reserve(n);
    nrm.reserve(n);
    while (pts.size() < n) {
        // Rejection on the minor angle: surface density is proportional to
        // R + r cos(theta).
        double theta = 2.0 * kPi * rng.uniform();
        double accept = (major_radius + minor_radius * std::cos(theta)) /
                        (major_radius + minor_radius);
        if (rng.uniform() > accept) continue;
        double phi = 2.0 * kPi * rng.uniform();
        double ct = std::cos(theta), st = std::sin(theta);
        double cp = std::cos(phi), sp = std::sin(phi);
        double ring = major_radius + minor_radius * ct;
        pts.push_back({ring * cp, ring * sp, minor_radius * st});
        nrm.push_back({ct * cp, ct * sp, st});
    }
    return finalize_fixture(std::move(pts), std::move(nrm));
}

GroundTruthCloud generate_sphere(std::size_t n, std::uint64_t seed) {
    if (n < 100) throw std::invalid_argument("generate_sphere: need n >= 100");
    Rng rng(seed);
    std::vector<Vec3> pts, nrm;
    pts.reserve(n);
    nrm.reserve(n);
    // Fixed scale about the origin keeps the center exact, so the normal at
    // every sample is its own direction.
    for (std::size_t i = 0; i < n; ++i) {
        Vec3 d = rng.unit_vector();
        pts.push_back(d * 0.5);
        nrm.push_back(d);
    }
    GroundTruthCloud gt;
    gt.cloud.points = std::move(pts);
    gt.gt_normals = std::move(nrm);
    return gt;
}

GroundTruthCloud generate_thin_sheet(double thickness, std::size_t n, std::uint64_t seed) {
    if (!(thickness > 0.0 && thickness < 0.1))
        throw std::invalid_argument("generate_thin_sheet: thickness out of (0, 0.1)");
    if (n < 500) throw std::invalid_argument("generate_thin_sheet: need n >= 500");

    const double sx = 1.0, sy = 0.7, h = thickness * 0.5;
    const double face_area = 2.0 * sx * sy;                      // top + bottom together count twice
    const double side_area = 2.0 * (sx + sy) * thickness;
    const double frac_faces = 2.0 * face_area / (2.0 * face_area + side_area);

    Rng rng(seed);
    std::vector<Vec3> pts, nrm;
    pts.reserve(n + 1);
    nrm.reserve(n + 1);

    // Face samples are emitted as mirrored top/bottom pairs.
    std::size_t n_face_pairs = static_cast<std::size_t>(std::llround(frac_faces * double(n) / 2.0));
    for (std::size_t i = 0; i < n_face_pairs; ++i) {
        double x = rng.uniform(-sx * 0.5, sx * 0.5);
        double y = rng.uniform(-sy * 0.5, sy * 0.5);
        pts.push_back({x, y, h});
        nrm.push_back({0, 0, 1});
        pts.push_back({x, y, -h});
        nrm.push_back({0, 0, -1});
    }
    // Edge band: pick a side proportional to its length.
    while (pts.size() < n) {
        double z = rng.uniform(-h, h);
        double pick = rng.uniform() * 2.0 * (sx + sy);
        if (pick < sx) {
            pts.push_back({pick - sx * 0.5, sy * 0.5, z});
            nrm.push_back({0, 1, 0});
        } else if (pick < 2.0 * sx) {
            pts.push_back({(pick - sx) - sx * 0.5, -sy * 0.5, z});
            nrm.push_back({0, -1, 0});
        } else if (pick < 2.0 * sx + sy) {
            pts.push_back({sx * 0.5, (pick - 2.0 * sx) - sy * 0.5, z});
            nrm.push_back({1, 0, 0});
        } else {
            pts.push_back({-sx * 0.5, (pick - 2.0 * sx - sy) - sy * 0.5, z});
            nrm.push_back({-1, 0, 0});
        }
    }
    return finalize_fixture(std::move(pts), std::move(nrm));
}

std::vector<SphericalNormal> random_init_normals(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("random_init_normals: n must be positive");
    Rng rng(seed);
    std::vector<SphericalNormal> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double r1 = rng.uniform();
        double r2 = rng.uniform();
        SphericalNormal sn;
        sn.u = std::acos(1.0 - 2.0 * r1);
        sn.v = 2.0 * kPi * r2;
        out.push_back(sn);
    }
    return out;
}

}  // namespace vorient
