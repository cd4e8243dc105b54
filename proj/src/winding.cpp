#include "vorient/winding.hpp"

#include <cmath>
#include <stdexcept>

namespace vorient {

namespace {
constexpr double kFourPi = 4.0 * 3.14159265358979323846;
constexpr double kSingular = 1e-12;  // skip samples grazing the query
}

double winding_number(const Vec3& q, const PointCloud& cloud) {
    if (!cloud.has_normals() || !cloud.has_areas())
        throw std::invalid_argument("winding_number: cloud needs normals and areas");
    double sum = 0.0;
    const std::size_t n = cloud.size();
    for (std::size_t i = 0; i < n; ++i) {
        Vec3 l = cloud.points[i] - q;
        double r = l.norm();
        if (r < kSingular) continue;
        sum += cloud.areas[i] * l.dot(cloud.normal_vector(i)) / (kFourPi * r * r * r);
    }
    return sum;
}

WindingField winding_field(const VoronoiStructure& vor, const PointCloud& cloud) {
    WindingField field;
    const std::size_t m = vor.exam_points.size();
    field.values.resize(m);
#pragma omp parallel for schedule(static)
    for (long long j = 0; j < static_cast<long long>(m); ++j)
        field.values[j] = winding_number(vor.exam_points[j], cloud);
    return field;
}

}  // namespace vorient
