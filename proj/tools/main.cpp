#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "vorient/delaunay.hpp"
#include "vorient/geometry.hpp"
#include "vorient/io.hpp"
#include "vorient/metrics.hpp"
#include "vorient/objective.hpp"
#include "vorient/optimizer.hpp"
#include "vorient/voronoi.hpp"
#include "vorient/winding.hpp"

using namespace vorient;

namespace {

struct RunConfig {
    std::string input;
    std::string output;
    std::string format;  // empty: infer from paths
    double lambda_a = 10.0;
    double lambda_b = 50.0;
    double shear_d = 4.0;
    double bbox_scale = 1.3;
    double noise_level = 0.0;
    std::uint64_t seed = 0;
    int max_iters = 200;
    double tol = 1.0;
    bool export_exam_points = false;
    bool export_histogram = false;
    std::string gt;
    std::string init;
    int threads = 0;
};

std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

int run_orient(const RunConfig& cfg) {
    if (cfg.threads > 0) {
#ifdef _OPENMP
        omp_set_num_threads(cfg.threads);
#endif
    }

    CloudFormat in_fmt =
        cfg.format.empty() ? format_from_path(cfg.input) : format_from_string(cfg.format);
    CloudFormat out_fmt =
        cfg.format.empty() ? format_from_path(cfg.output) : format_from_string(cfg.format);

    LoadedCloud loaded = read_point_cloud(cfg.input, in_fmt);
    std::cerr << "loaded " << loaded.cloud.size() << " points from " << cfg.input << "\n";

    // Ground truth: explicit file wins, otherwise normals carried by the input.
    std::vector<Vec3> gt_normals;
    if (!cfg.gt.empty()) {
        LoadedCloud g = read_point_cloud(cfg.gt, format_from_path(cfg.gt));
        if (!g.has_normals()) throw IoError(cfg.gt + ": ground-truth file has no normals");
        if (g.cloud.size() != loaded.cloud.size())
            throw IoError(cfg.gt + ": ground-truth point count mismatch");
        gt_normals = g.normals;
    } else if (loaded.has_normals()) {
        gt_normals = loaded.normals;
    }

    UnitBoxTransform transform;
    PointCloud work = normalize_unit_box(loaded.cloud, &transform);
    if (cfg.noise_level > 0.0) work = add_gaussian_noise(work, cfg.noise_level, cfg.seed);

    if (!cfg.init.empty()) {
        LoadedCloud w = read_point_cloud(cfg.init, format_from_path(cfg.init));
        if (!w.has_normals()) throw IoError(cfg.init + ": warm-start file has no normals");
        if (w.cloud.size() != work.size())
            throw IoError(cfg.init + ": warm-start point count mismatch");
        work.normals.clear();
        for (const Vec3& n : w.normals) work.normals.push_back(cartesian_to_spherical(n));
    }

    TetComplex complex = delaunay_tetrahedralize(work.points);
    VoronoiStructure vor = extract_voronoi(complex, cfg.bbox_scale);
    work.areas = estimate_area_weights(vor, work).areas;
    std::cerr << "examination points: " << vor.num_exam_points() << "\n";

    ObjectiveParams params;
    params.lambda_a = cfg.lambda_a;
    params.lambda_b = cfg.lambda_b;
    params.shear_d = cfg.shear_d;

    OptimizerConfig opt;
    opt.max_iterations = cfg.max_iters;
    opt.termination_delta = cfg.tol;
    opt.seed = cfg.seed;

    OrientationTrace trace;
    auto progress = [](int iter, const ObjectiveValue& v, double grad_norm) {
        std::fprintf(stderr, "iter %4d  f %.9g  f01 %.9g  fB %.9g  fA %.9g  |g| %.9g\n", iter,
                     v.total, v.f01, v.fb, v.fa, grad_norm);
    };
    PointCloud oriented = orient_normals(work, vor, params, opt, &trace, progress);

    WindingField final_field;
    {
        PointCloud probe = oriented;
        final_field = winding_field(vor, probe);
    }

    // Everything computed; write artifacts only now so failures leave nothing
    // half-written.
    PointCloud out = oriented;
    for (Vec3& p : out.points) p = transform.invert(p);
    write_oriented_cloud(out, cfg.output, out_fmt);

    if (cfg.export_exam_points) {
        std::string path = cfg.output + ".exam";
        std::ofstream f(path, std::ios::binary);
        if (!f) throw IoError("cannot write " + path);
        std::string buf;
        for (std::size_t j = 0; j < vor.num_exam_points(); ++j) {
            Vec3 q = transform.invert(vor.exam_points[j]);
            buf += fmt_num(q.x);
            buf += ' ';
            buf += fmt_num(q.y);
            buf += ' ';
            buf += fmt_num(q.z);
            buf += ' ';
            buf += fmt_num(final_field.values[j]);
            buf += '\n';
        }
        f << buf;
        if (!f) throw IoError("write failed: " + path);
    }

    if (cfg.export_histogram) {
        Histogram h = winding_histogram(final_field, 20);
        std::string path = cfg.output + ".hist";
        std::ofstream f(path, std::ios::binary);
        if (!f) throw IoError("cannot write " + path);
        f << "range " << fmt_num(h.lo) << " " << fmt_num(h.hi) << "\n";
        for (std::size_t b = 0; b < h.counts.size(); ++b) {
            double lo = h.lo + (h.hi - h.lo) * double(b) / double(h.counts.size());
            double hi = h.lo + (h.hi - h.lo) * double(b + 1) / double(h.counts.size());
            f << fmt_num(lo) << " " << fmt_num(hi) << " " << h.counts[b] << "\n";
        }
        if (!f) throw IoError("write failed: " + path);
    }

    // Final report as plain key: value lines on stdout.
    std::cout << "points: " << work.size() << "\n";
    std::cout << "exam_points: " << vor.num_exam_points() << "\n";
    std::cout << "iterations: " << trace.iterations << "\n";
    std::cout << "evaluations: " << trace.evaluations << "\n";
    std::cout << "termination: " << trace.termination_reason << "\n";
    if (!trace.entries.empty()) {
        std::cout << "final_objective: " << fmt_num(trace.entries.back().total) << "\n";
        std::cout << "seconds: " << fmt_num(trace.entries.back().seconds) << "\n";
    }
    if (!gt_normals.empty()) {
        std::vector<Vec3> pred;
        pred.reserve(oriented.size());
        for (std::size_t i = 0; i < oriented.size(); ++i)
            pred.push_back(spherical_to_cartesian(oriented.normals[i]));
        std::cout << "truth_percentage: " << fmt_num(truth_percentage(pred, gt_normals)) << "\n";
        double rmse = angle_rmse(pred, gt_normals);
        std::cout << "angle_rmse_deg: " << fmt_num(rmse) << "\n";
        std::cout << "chamfer_x100: "
                  << fmt_num(100.0 * chamfer_distance(out.points, loaded.cloud.points)) << "\n";
    }
    std::cout << "output: " << cfg.output << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Consistent normal orientation for unoriented point clouds"};
    RunConfig cfg;

    app.add_option("-i,--input", cfg.input, "input point cloud (xyz or ply)")->required();
    app.add_option("-o,--output", cfg.output, "oriented output path")->required();
    app.add_option("--format", cfg.format, "force format: xyz | ply");
    app.add_option("--lambda-a", cfg.lambda_a, "alignment weight");
    app.add_option("--lambda-b", cfg.lambda_b, "balance weight");
    app.add_option("--shear-d", cfg.shear_d, "shear correction divisor");
    app.add_option("--bbox-scale", cfg.bbox_scale, "clip box scale around the data");
    app.add_option("--noise-level", cfg.noise_level, "gaussian noise added after normalization");
    app.add_option("--seed", cfg.seed, "seed for noise and random initialization");
    app.add_option("--max-iters", cfg.max_iters, "iteration cap");
    app.add_option("--tol", cfg.tol, "termination delta on the unnormalized objective");
    app.add_flag("--export-exam-points", cfg.export_exam_points,
                 "write <output>.exam with 'x y z w' per examination point");
    app.add_flag("--export-histogram", cfg.export_histogram,
                 "write <output>.hist with the final winding histogram");
    app.add_option("--gt", cfg.gt, "ground-truth normals for metrics");
    app.add_option("--init", cfg.init, "warm-start normals");
    app.add_option("--threads", cfg.threads, "worker threads (0 = auto)");

    CLI11_PARSE(app, argc, argv);

    try {
        return run_orient(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
