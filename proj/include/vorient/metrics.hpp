#pragma once

#include <vector>

#include "vorient/vec3.hpp"
#include "vorient/winding.hpp"

namespace vorient {

// Percentage of predicted normals within 90 degrees of ground truth. A dot
// product of exactly zero counts as false.
double truth_percentage(const std::vector<Vec3>& pred, const std::vector<Vec3>& gt);

// Root-mean-square angular error in degrees.
double angle_rmse(const std::vector<Vec3>& pred, const std::vector<Vec3>& gt);

// Symmetric chamfer distance: mean of nearest-neighbor distances both ways,
// halved. Callers applying the x100 reporting convention scale the result.
double chamfer_distance(const std::vector<Vec3>& a, const std::vector<Vec3>& b);

struct Histogram {
    std::vector<std::size_t> counts;
    double lo = 0.0;
    double hi = 0.0;
};

// Bin counts over [min(w, -0.25), max(w, 1.25)]; counts sum to the number of
// winding values.
Histogram winding_histogram(const WindingField& w, std::size_t bins);

// Median-split kd-tree for exact nearest-neighbor queries.
class KdTree {
public:
    explicit KdTree(const std::vector<Vec3>& points);

    // Index of the nearest point and its squared distance.
    std::pair<int, double> nearest(const Vec3& q) const;

private:
    struct Node {
        int left = -1, right = -1;
        int point = -1;
        int axis = 0;
    };
    void build(int node, int begin, int end, int depth);
    void search(int node, const Vec3& q, int& best, double& best_d) const;

    std::vector<Vec3> points_;
    std::vector<int> index_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

}  // namespace vorient
