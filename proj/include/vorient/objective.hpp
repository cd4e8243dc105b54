#pragma once

#include <array>
#include <vector>

#include "vorient/geometry.hpp"
#include "vorient/voronoi.hpp"
#include "vorient/winding.hpp"

namespace vorient {

struct ObjectiveParams {
    double lambda_b = 50.0;  // balance weight
    double lambda_a = 10.0;  // alignment weight
    double shear_d = 4.0;    // shear correction divisor
};

// Quartic with valleys at 0 and 1: 4(x-1/2)^4 - 2(x-1/2)^2.
double double_well(double x);
double double_well_deriv(double x);

// 0-1 term: sum_j f_DW(w_j) - w_j / D.
double term_01(const WindingField& w, double shear_d);

// Balance term: negated sum of per-cell population variances.
double term_balance(const VoronoiStructure& vor, const WindingField& w);

// Alignment term: sum_i (1/M_i) sum_k w_k^i n_i.(q_k^i - p_i).
double term_align(const VoronoiStructure& vor, const WindingField& w, const PointCloud& cloud);

struct ObjectiveValue {
    double total = 0.0;  // (f01 + lambda_b fb + lambda_a fa) / N
    double f01 = 0.0;
    double fb = 0.0;
    double fa = 0.0;
};

// Holds the fixed geometry plus scratch buffers reused across evaluations.
// Positions, areas and examination points never change during a run; one
// state serves one optimization run at a time.
class ObjectiveState {
public:
    ObjectiveState(const PointCloud& cloud, const VoronoiStructure& vor,
                   const ObjectiveParams& params);

    ObjectiveValue objective(const std::vector<SphericalNormal>& uv);

    // Analytic gradient of objective().total w.r.t. every (u_i, v_i). The
    // winding field cached by objective() for the same uv is reused.
    std::vector<std::array<double, 2>> gradient(const std::vector<SphericalNormal>& uv);

    const WindingField& cached_field() const { return field_; }
    const ObjectiveParams& params() const { return params_; }
    const PointCloud& cloud() const { return cloud_; }
    const VoronoiStructure& voronoi() const { return vor_; }

private:
    void refresh(const std::vector<SphericalNormal>& uv);
    ObjectiveValue compose() const;

    const PointCloud& cloud_;
    const VoronoiStructure& vor_;
    ObjectiveParams params_;

    // Per-exam-point incidence: (sample, 1/M_i) for every cell containing j.
    std::vector<std::vector<std::pair<int, double>>> incidence_;

    // Scratch, valid for uv == cached_uv_.
    std::vector<SphericalNormal> cached_uv_;
    bool cache_valid_ = false;
    std::vector<Vec3> normals_;
    WindingField field_;
    std::vector<double> cell_mean_;
};

// Central differences of objective().total per coordinate; the slow oracle
// the analytic gradient is checked against.
std::vector<std::array<double, 2>> finite_diff_gradient(ObjectiveState& state,
                                                        const std::vector<SphericalNormal>& uv,
                                                        double step);

}  // namespace vorient
