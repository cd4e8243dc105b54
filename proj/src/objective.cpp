#include "vorient/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace vorient {

namespace {
constexpr double kFourPi = 4.0 * 3.14159265358979323846;
constexpr double kSingular = 1e-12;
}

double double_well(double x) {
    double t = x - 0.5;
    double t2 = t * t;
    return 4.0 * t2 * t2 - 2.0 * t2;
}

double double_well_deriv(double x) {
    double t = x - 0.5;
    return 16.0 * t * t * t - 4.0 * t;
}

double term_01(const WindingField& w, double shear_d) {
    if (!(shear_d > 0.0)) throw std::invalid_argument("term_01: shear divisor must be positive");
    double sum = 0.0;
    for (double wj : w.values) sum += double_well(wj) - wj / shear_d;
    return sum;
}

double term_balance(const VoronoiStructure& vor, const WindingField& w) {
    double sum = 0.0;
    for (const auto& cell : vor.cell_vertex_ids) {
        if (cell.empty()) continue;
        double inv_m = 1.0 / static_cast<double>(cell.size());
        double mean = 0.0;
        for (int j : cell) mean += w.values[j];
        mean *= inv_m;
        double var = 0.0;
        for (int j : cell) {
            double d = w.values[j] - mean;
            var += d * d;
        }
        sum -= var * inv_m;
    }
    return sum;
}

double term_align(const VoronoiStructure& vor, const WindingField& w, const PointCloud& cloud) {
    if (!cloud.has_normals()) throw std::invalid_argument("term_align: cloud needs normals");
    double sum = 0.0;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto& cell = vor.cell_vertex_ids[i];
        if (cell.empty()) continue;
        Vec3 n = cloud.normal_vector(i);
        double acc = 0.0;
        for (int j : cell) acc += w.values[j] * n.dot(vor.exam_points[j] - cloud.points[i]);
        sum += acc / static_cast<double>(cell.size());
    }
    return sum;
}

ObjectiveState::ObjectiveState(const PointCloud& cloud, const VoronoiStructure& vor,
                               const ObjectiveParams& params)
    : cloud_(cloud), vor_(vor), params_(params) {
    if (!cloud.has_areas()) throw std::invalid_argument("ObjectiveState: cloud needs area weights");
    if (vor.cell_vertex_ids.size() != cloud.size())
        throw std::invalid_argument("ObjectiveState: structure/cloud size mismatch");

    incidence_.assign(vor.exam_points.size(), {});
    for (std::size_t i = 0; i < vor.cell_vertex_ids.size(); ++i) {
        const auto& cell = vor.cell_vertex_ids[i];
        double inv_m = 1.0 / static_cast<double>(cell.size());
        for (int j : cell) incidence_[j].emplace_back(static_cast<int>(i), inv_m);
    }
    cell_mean_.resize(cloud.size());
}

void ObjectiveState::refresh(const std::vector<SphericalNormal>& uv) {
    if (uv.size() != cloud_.size())
        throw std::invalid_argument("ObjectiveState: variable count mismatch");
    if (cache_valid_ && cached_uv_.size() == uv.size()) {
        bool same = true;
        for (std::size_t i = 0; i < uv.size(); ++i) {
            if (uv[i].u != cached_uv_[i].u || uv[i].v != cached_uv_[i].v) {
                same = false;
                break;
            }
        }
        if (same) return;
    }

    const std::size_t n = cloud_.size();
    const std::size_t m = vor_.exam_points.size();
    normals_.resize(n);
    for (std::size_t i = 0; i < n; ++i) normals_[i] = spherical_to_cartesian(uv[i]);

    field_.values.resize(m);
    // Same formula and accumulation order as winding_number(); results must
    // match the serial path bit for bit.
#pragma omp parallel for schedule(static)
    for (long long j = 0; j < static_cast<long long>(m); ++j) {
        const Vec3 q = vor_.exam_points[j];
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            Vec3 l = cloud_.points[i] - q;
            double r = l.norm();
            if (r < kSingular) continue;
            sum += cloud_.areas[i] * l.dot(normals_[i]) / (kFourPi * r * r * r);
        }
        field_.values[j] = sum;
    }

    for (std::size_t i = 0; i < n; ++i) {
        const auto& cell = vor_.cell_vertex_ids[i];
        double mean = 0.0;
        for (int j : cell) mean += field_.values[j];
        cell_mean_[i] = cell.empty() ? 0.0 : mean / static_cast<double>(cell.size());
    }

    cached_uv_ = uv;
    cache_valid_ = true;
}

ObjectiveValue ObjectiveState::compose() const {
    ObjectiveValue v;
    v.f01 = term_01(field_, params_.shear_d);
    v.fb = term_balance(vor_, field_);
    double fa = 0.0;
    for (std::size_t i = 0; i < cloud_.size(); ++i) {
        const auto& cell = vor_.cell_vertex_ids[i];
        if (cell.empty()) continue;
        double acc = 0.0;
        for (int j : cell)
            acc += field_.values[j] * normals_[i].dot(vor_.exam_points[j] - cloud_.points[i]);
        fa += acc / static_cast<double>(cell.size());
    }
    v.fa = fa;
    v.total = (v.f01 + params_.lambda_b * v.fb + params_.lambda_a * v.fa) /
              static_cast<double>(cloud_.size());
    return v;
}

ObjectiveValue ObjectiveState::objective(const std::vector<SphericalNormal>& uv) {
    refresh(uv);
    return compose();
}

std::vector<std::array<double, 2>> ObjectiveState::gradient(const std::vector<SphericalNormal>& uv) {
    refresh(uv);
    const std::size_t n = cloud_.size();
    const std::size_t m = vor_.exam_points.size();
    const double inv_n = 1.0 / static_cast<double>(n);

    // df/dw_j, combining the 0-1 derivative with the per-cell balance and
    // alignment contributions of every cell containing j.
    std::vector<double> dfdw(m);
#pragma omp parallel for schedule(static)
    for (long long jj = 0; jj < static_cast<long long>(m); ++jj) {
        std::size_t j = static_cast<std::size_t>(jj);
        double g = double_well_deriv(field_.values[j]) - 1.0 / params_.shear_d;
        for (const auto& [i, inv_m] : incidence_[j]) {
            g += params_.lambda_b * (-2.0 * inv_m) * (field_.values[j] - cell_mean_[i]);
            g += params_.lambda_a * inv_m *
                 normals_[i].dot(vor_.exam_points[j] - cloud_.points[i]);
        }
        dfdw[j] = g;
    }

    std::vector<std::array<double, 2>> grad(n);
#pragma omp parallel for schedule(static)
    for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
        std::size_t i = static_cast<std::size_t>(ii);
        const Vec3 p = cloud_.points[i];
        const double a = cloud_.areas[i];

        // Indirect path: dw_j/dn_i summed with df/dw_j.
        Vec3 h{0, 0, 0};
        for (std::size_t j = 0; j < m; ++j) {
            Vec3 l = p - vor_.exam_points[j];
            double r = l.norm();
            if (r < kSingular) continue;
            h += l * (dfdw[j] * a / (kFourPi * r * r * r));
        }

        // Direct alignment path: explicit n_i inside cell i.
        const auto& cell = vor_.cell_vertex_ids[i];
        if (!cell.empty()) {
            Vec3 acc{0, 0, 0};
            for (int j : cell) acc += (vor_.exam_points[j] - p) * field_.values[j];
            h += acc * (params_.lambda_a / static_cast<double>(cell.size()));
        }

        double su = std::sin(uv[i].u), cu = std::cos(uv[i].u);
        double sv = std::sin(uv[i].v), cv = std::cos(uv[i].v);
        Vec3 dn_du{cu * cv, cu * sv, -su};
        Vec3 dn_dv{-su * sv, su * cv, 0.0};
        grad[i] = {h.dot(dn_du) * inv_n, h.dot(dn_dv) * inv_n};
    }
    return grad;
}

std::vector<std::array<double, 2>> finite_diff_gradient(ObjectiveState& state,
                                                        const std::vector<SphericalNormal>& uv,
                                                        double step) {
    if (!(step > 0.0)) throw std::invalid_argument("finite_diff_gradient: step must be positive");
    std::vector<SphericalNormal> work = uv;
    std::vector<std::array<double, 2>> grad(uv.size());
    for (std::size_t i = 0; i < uv.size(); ++i) {
        for (int c = 0; c < 2; ++c) {
            double& coord = c == 0 ? work[i].u : work[i].v;
            double saved = coord;
            coord = saved + step;
            double hi = state.objective(work).total;
            coord = saved - step;
            double lo = state.objective(work).total;
            coord = saved;
            grad[i][c] = (hi - lo) / (2.0 * step);
        }
    }
    return grad;
}

}  // namespace vorient
