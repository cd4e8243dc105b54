#include <cmath>
#include <vector>

#include "doctest.h"
#include "vorient/delaunay.hpp"
#include "vorient/geometry.hpp"
#include "vorient/optimizer.hpp"
#include "vorient/voronoi.hpp"

using namespace vorient;

namespace {

struct SphereFixture {
    PointCloud cloud;
    VoronoiStructure vor;
    std::vector<Vec3> gt_normals;
};

SphereFixture make_sphere_fixture(std::size_t n, std::uint64_t seed) {
    GroundTruthCloud gt = generate_sphere(n, seed);
    SphereFixture f;
    f.cloud = gt.cloud;
    f.gt_normals = gt.gt_normals;
    TetComplex complex = delaunay_tetrahedralize(f.cloud.points);
    f.vor = extract_voronoi(complex);
    f.cloud.areas = estimate_area_weights(f.vor, f.cloud).areas;
    return f;
}

double truth_percent(const PointCloud& oriented, const std::vector<Vec3>& gt) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < gt.size(); ++i)
        if (spherical_to_cartesian(oriented.normals[i]).dot(gt[i]) > 0.0) ++hits;
    return 100.0 * double(hits) / double(gt.size());
}

}  // namespace

TEST_CASE("coupled convex quadratic converges to the analytic minimizer") {
    const int n = 10;
    std::vector<double> target(n), weight(n);
    for (int i = 0; i < n; ++i) {
        target[i] = 0.3 * i - 1.0;
        weight[i] = 1.0 + i;
    }
    EvalFn evaluate = [&](const std::vector<double>& x, std::vector<double>& g) {
        g.assign(n, 0.0);
        double f = 0.0;
        for (int i = 0; i < n; ++i) {
            double d = x[i] - target[i];
            f += weight[i] * d * d;
            g[i] += 2.0 * weight[i] * d;
        }
        for (int i = 0; i + 1 < n; ++i) {
            double a = x[i] - target[i], b = x[i + 1] - target[i + 1];
            f += 0.5 * a * b;
            g[i] += 0.5 * b;
            g[i + 1] += 0.5 * a;
        }
        return f;
    };

    OptimizerConfig cfg;
    cfg.max_iterations = 30;
    cfg.termination_delta = 1e-18;
    LbfgsTrace trace;
    std::vector<double> x = lbfgs_minimize(std::vector<double>(n, 5.0), evaluate, cfg, &trace);

    for (int i = 0; i < n; ++i) CHECK(std::fabs(x[i] - target[i]) < 1e-8);
    CHECK(trace.iterations <= 30);
    CHECK(trace.termination_reason != "iteration cap");
}

TEST_CASE("Rosenbrock reaches the global minimum") {
    EvalFn evaluate = [](const std::vector<double>& x, std::vector<double>& g) {
        double a = 1.0 - x[0];
        double b = x[1] - x[0] * x[0];
        g.resize(2);
        g[0] = -2.0 * a - 400.0 * x[0] * b;
        g[1] = 200.0 * b;
        return a * a + 100.0 * b * b;
    };
    OptimizerConfig cfg;
    cfg.max_iterations = 200;
    cfg.termination_delta = 1e-30;
    LbfgsTrace trace;
    std::vector<double> x = lbfgs_minimize({-1.2, 1.0}, evaluate, cfg, &trace);

    std::vector<double> g;
    double f = evaluate(x, g);
    CHECK(f < 1e-10);
    CHECK(std::fabs(x[0] - 1.0) < 1e-4);
    CHECK(std::fabs(x[1] - 1.0) < 1e-4);

    // accepted sequence is nonincreasing
    for (std::size_t i = 1; i < trace.objective_values.size(); ++i)
        CHECK(trace.objective_values[i] <= trace.objective_values[i - 1]);
    CHECK(trace.objective_values.size() == std::size_t(trace.iterations) + 1);
}

TEST_CASE("stationary start returns immediately") {
    EvalFn evaluate = [](const std::vector<double>&, std::vector<double>& g) {
        g.assign(3, 0.0);
        return 7.0;
    };
    OptimizerConfig cfg;
    LbfgsTrace trace;
    std::vector<double> x = lbfgs_minimize({1.0, 2.0, 3.0}, evaluate, cfg, &trace);
    CHECK(trace.iterations == 0);
    CHECK(trace.termination_reason == "stationary start");
    CHECK(x == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("non-finite objective is reported") {
    EvalFn evaluate = [](const std::vector<double>&, std::vector<double>& g) {
        g.assign(2, 1.0);
        return std::numeric_limits<double>::quiet_NaN();
    };
    LbfgsTrace trace;
    lbfgs_minimize({0.0, 0.0}, evaluate, OptimizerConfig{}, &trace);
    CHECK(trace.termination_reason == "non-finite");
}

TEST_CASE("sphere orientation from random init") {
    SphereFixture f = make_sphere_fixture(600, 19);
    OptimizerConfig cfg;
    cfg.seed = 0;

    OrientationTrace trace;
    PointCloud oriented = orient_normals(f.cloud, f.vor, ObjectiveParams{}, cfg, &trace);
    REQUIRE(oriented.normals.size() == f.cloud.size());
    CHECK(truth_percent(oriented, f.gt_normals) >= 99.0);
    CHECK(trace.iterations <= cfg.max_iterations);
    CHECK(trace.entries.size() == std::size_t(trace.iterations) + 1);
    for (std::size_t i = 1; i < trace.entries.size(); ++i)
        CHECK(trace.entries[i].total <= trace.entries[i - 1].total);
    for (std::size_t i = 1; i < trace.entries.size(); ++i)
        CHECK(trace.entries[i].seconds >= trace.entries[i - 1].seconds);

    // canonical angle ranges
    for (const auto& sn : oriented.normals) {
        CHECK(sn.u >= 0.0);
        CHECK(sn.u <= 3.14159265358979323846);
        CHECK(sn.v >= -3.14159265358979323846);
        CHECK(sn.v < 3.14159265358979323846);
    }

    SUBCASE("determinism: identical run gives identical normals") {
        PointCloud again = orient_normals(f.cloud, f.vor, ObjectiveParams{}, cfg);
        for (std::size_t i = 0; i < oriented.normals.size(); ++i) {
            CHECK(again.normals[i].u == oriented.normals[i].u);
            CHECK(again.normals[i].v == oriented.normals[i].v);
        }
    }

    SUBCASE("warm restart from the minimizer stops within two iterations") {
        PointCloud warm = f.cloud;
        warm.normals = oriented.normals;
        OrientationTrace rerun;
        orient_normals(warm, f.vor, ObjectiveParams{}, cfg, &rerun);
        CHECK(rerun.iterations <= 2);
        CHECK(rerun.termination_reason == "converged");
    }

    SUBCASE("globally flipped start does not stay inverted") {
        PointCloud flipped = f.cloud;
        for (const Vec3& n : f.gt_normals)
            flipped.normals.push_back(cartesian_to_spherical(n * -1.0));
        PointCloud out = orient_normals(flipped, f.vor, ObjectiveParams{}, cfg);
        CHECK(truth_percent(out, f.gt_normals) > 50.0);
    }
}

TEST_CASE("non-finite orientation input raises") {
    SphereFixture f = make_sphere_fixture(300, 23);
    f.cloud.areas.assign(f.cloud.size(), std::numeric_limits<double>::quiet_NaN());
    CHECK_THROWS(orient_normals(f.cloud, f.vor, ObjectiveParams{}, OptimizerConfig{}));
}
