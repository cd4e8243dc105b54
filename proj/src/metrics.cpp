#include "vorient/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace vorient {

double truth_percentage(const std::vector<Vec3>& pred, const std::vector<Vec3>& gt) {
    if (pred.size() != gt.size() || pred.empty())
        throw std::invalid_argument("truth_percentage: length mismatch");
    std::size_t good = 0;
    for (std::size_t i = 0; i < pred.size(); ++i)
        if (pred[i].dot(gt[i]) > 0.0) ++good;
    return 100.0 * static_cast<double>(good) / static_cast<double>(pred.size());
}

double angle_rmse(const std::vector<Vec3>& pred, const std::vector<Vec3>& gt) {
    if (pred.size() != gt.size() || pred.empty())
        throw std::invalid_argument("angle_rmse: length mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        double c = std::clamp(pred[i].dot(gt[i]), -1.0, 1.0);
        double deg = std::acos(c) * (180.0 / 3.14159265358979323846);
        sum += deg * deg;
    }
    return std::sqrt(sum / static_cast<double>(pred.size()));
}

double chamfer_distance(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("chamfer_distance: empty point set");
    KdTree tree_a(a), tree_b(b);
    double sum_ab = 0.0, sum_ba = 0.0;
    for (const Vec3& p : a) sum_ab += std::sqrt(tree_b.nearest(p).second);
    for (const Vec3& p : b) sum_ba += std::sqrt(tree_a.nearest(p).second);
    return 0.5 * (sum_ab / static_cast<double>(a.size()) + sum_ba / static_cast<double>(b.size()));
}

Histogram winding_histogram(const WindingField& w, std::size_t bins) {
    if (bins < 2) throw std::invalid_argument("winding_histogram: need at least 2 bins");
    Histogram h;
    h.lo = -0.25;
    h.hi = 1.25;
    for (double v : w.values) {
        h.lo = std::min(h.lo, v);
        h.hi = std::max(h.hi, v);
    }
    h.counts.assign(bins, 0);
    double width = (h.hi - h.lo) / static_cast<double>(bins);
    for (double v : w.values) {
        auto bin = static_cast<std::size_t>(
            std::clamp((v - h.lo) / width, 0.0, static_cast<double>(bins - 1)));
        ++h.counts[bin];
    }
    return h;
}

KdTree::KdTree(const std::vector<Vec3>& points) : points_(points) {
    if (points_.empty()) throw std::invalid_argument("KdTree: empty point set");
    index_.resize(points_.size());
    std::iota(index_.begin(), index_.end(), 0);
    nodes_.reserve(2 * points_.size());
    nodes_.emplace_back();
    root_ = 0;
    build(root_, 0, static_cast<int>(points_.size()), 0);
}

void KdTree::build(int node, int begin, int end, int depth) {
    int axis = depth % 3;
    int mid = (begin + end) / 2;
    std::nth_element(index_.begin() + begin, index_.begin() + mid, index_.begin() + end,
                     [&](int a, int b) { return points_[a][axis] < points_[b][axis]; });
    nodes_[node].point = index_[mid];
    nodes_[node].axis = axis;
    if (mid > begin) {
        nodes_[node].left = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        build(nodes_[node].left, begin, mid, depth + 1);
    }
    if (mid + 1 < end) {
        nodes_[node].right = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        build(nodes_[node].right, mid + 1, end, depth + 1);
    }
}

void KdTree::search(int node, const Vec3& q, int& best, double& best_d) const {
    const Node& nd = nodes_[node];
    double d = (points_[nd.point] - q).squared_norm();
    if (d < best_d) {
        best_d = d;
        best = nd.point;
    }
    double delta = q[nd.axis] - points_[nd.point][nd.axis];
    int near = delta < 0.0 ? nd.left : nd.right;
    int far = delta < 0.0 ? nd.right : nd.left;
    if (near >= 0) search(near, q, best, best_d);
    if (far >= 0 && delta * delta < best_d) search(far, q, best, best_d);
}

std::pair<int, double> KdTree::nearest(const Vec3& q) const {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    search(root_, q, best, best_d);
    return {best, best_d};
}

}  // namespace vorient
