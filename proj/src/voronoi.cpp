#include "vorient/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vorient {

namespace {

// Slab clip of o + t*d against the box over [lo, hi]. Returns false when the
// intersection is empty.
bool clip_line(const Box3& box, const Vec3& o, const Vec3& d, double lo, double hi, double& t0,
               double& t1) {
    t0 = lo;
    t1 = hi;
    for (int axis = 0; axis < 3; ++axis) {
        double po = o[axis], pd = d[axis];
        double bmin = box.lo[axis], bmax = box.hi[axis];
        if (pd == 0.0) {
            if (po < bmin || po > bmax) return false;
            continue;
        }
        double ta = (bmin - po) / pd;
        double tb = (bmax - po) / pd;
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) return false;
    }
    return true;
}

}  // namespace

VoronoiStructure extract_voronoi(const TetComplex& complex, double bbox_scale) {
    const std::size_t n = complex.vertices.size();
    const std::size_t t_count = complex.tets.size();
    if (t_count == 0) throw std::invalid_argument("extract_voronoi: empty complex");

    VoronoiStructure vor;
    // Cubified so flat inputs still get cells that extend along their normal
    // direction; the farthest cell vertex then sits roughly opposite the
    // surface instead of sideways along it.
    vor.box = Box3::bounding(complex.vertices.begin(), complex.vertices.end())
                  .cube()
                  .scaled(bbox_scale);
    vor.cell_vertex_ids.assign(n, {});
    vor.neighbors.assign(n, {});

    std::vector<Vec3> centers(t_count);
    std::vector<int> center_id(t_count, -1);
    for (std::size_t t = 0; t < t_count; ++t) {
        centers[t] = circumcenter(complex, static_cast<int>(t));
        if (vor.box.contains(centers[t])) {
            center_id[t] = static_cast<int>(vor.exam_points.size());
            vor.exam_points.push_back(centers[t]);
            for (int v : complex.tets[t]) vor.cell_vertex_ids[v].push_back(center_id[t]);
        }
    }

    auto add_crossing = [&vor](const Vec3& p, const std::array<int, 3>& samples) {
        int id = static_cast<int>(vor.exam_points.size());
        vor.exam_points.push_back(p);
        for (int s : samples) vor.cell_vertex_ids[s].push_back(id);
    };

    for (std::size_t t = 0; t < t_count; ++t) {
        const auto& tv = complex.tets[t];
        for (int k = 0; k < 4; ++k) {
            const auto& fl = TetComplex::face_verts[k];
            std::array<int, 3> fs = {tv[fl[0]], tv[fl[1]], tv[fl[2]]};
            int s = complex.adjacency[t][k];
            if (s >= 0) {
                if (s < static_cast<int>(t)) continue;  // each interior edge once
                Vec3 o = centers[t];
                Vec3 d = centers[s] - o;
                double t0, t1;
                if (!clip_line(vor.box, o, d, 0.0, 1.0, t0, t1)) continue;
                if (t0 > 0.0) add_crossing(o + d * t0, fs);
                if (t1 < 1.0 && t1 > t0) add_crossing(o + d * t1, fs);
            } else {
                // Hull face: the dual Voronoi edge is the outward ray from
                // this tet's circumcenter along the face normal.
                const Vec3& f0 = complex.vertices[fs[0]];
                Vec3 nrm = (complex.vertices[fs[1]] - f0).cross(complex.vertices[fs[2]] - f0);
                double len = nrm.norm();
                if (len == 0.0) continue;
                nrm = nrm / len;
                Vec3 o = centers[t];
                double t0, t1;
                if (!clip_line(vor.box, o, nrm, 0.0, std::numeric_limits<double>::infinity(), t0,
                               t1))
                    continue;
                if (t0 > 0.0) add_crossing(o + nrm * t0, fs);
                if (t1 > t0) add_crossing(o + nrm * t1, fs);
            }
        }
    }

    // Delaunay neighbor sets (bisector planes for the cell geometry).
    {
        std::vector<std::vector<int>> nb(n);
        for (const auto& tv : complex.tets) {
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j) {
                    nb[tv[i]].push_back(tv[j]);
                    nb[tv[j]].push_back(tv[i]);
                }
        }
        for (std::size_t i = 0; i < n; ++i) {
            std::sort(nb[i].begin(), nb[i].end());
            nb[i].erase(std::unique(nb[i].begin(), nb[i].end()), nb[i].end());
            vor.neighbors[i] = std::move(nb[i]);
        }
    }

    if (vor.exam_points.empty()) throw std::runtime_error("extract_voronoi: no examination points");

    // A cell can end up empty when all incident dual edges miss the box; give
    // it the nearest examination point so downstream sums stay well defined.
    for (std::size_t i = 0; i < n; ++i) {
        if (!vor.cell_vertex_ids[i].empty()) continue;
        const Vec3& p = complex.vertices[i];
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < vor.exam_points.size(); ++j) {
            double dist = (vor.exam_points[j] - p).squared_norm();
            if (dist < best_d) {
                best_d = dist;
                best = static_cast<int>(j);
            }
        }
        vor.cell_vertex_ids[i].push_back(best);
    }
    return vor;
}

ConvexCell::ConvexCell(const Box3& box) {
    tol_ = 1e-12 * std::max(box.diagonal(), 1.0);
    const Vec3& l = box.lo;
    const Vec3& h = box.hi;
    Vec3 v[8] = {{l.x, l.y, l.z}, {h.x, l.y, l.z}, {h.x, h.y, l.z}, {l.x, h.y, l.z},
                 {l.x, l.y, h.z}, {h.x, l.y, h.z}, {h.x, h.y, h.z}, {l.x, h.y, h.z}};
    faces_ = {
        {v[0], v[3], v[2], v[1]},  // z = lo
        {v[4], v[5], v[6], v[7]},  // z = hi
        {v[0], v[1], v[5], v[4]},  // y = lo
        {v[2], v[3], v[7], v[6]},  // y = hi
        {v[0], v[4], v[7], v[3]},  // x = lo
        {v[1], v[2], v[6], v[5]},  // x = hi
    };
}

void ConvexCell::clip(const Vec3& n, double d) {
    std::vector<std::vector<Vec3>> kept;
    std::vector<Vec3> on_plane;
    bool cut_any = false;

    for (const auto& face : faces_) {
        std::vector<Vec3> out;
        const std::size_t m = face.size();
        for (std::size_t i = 0; i < m; ++i) {
            const Vec3& a = face[i];
            const Vec3& b = face[(i + 1) % m];
            double da = n.dot(a) - d;
            double db = n.dot(b) - d;
            if (da <= tol_) {
                out.push_back(a);
                if (std::fabs(da) <= tol_) on_plane.push_back(a);
            }
            if ((da < -tol_ && db > tol_) || (da > tol_ && db < -tol_)) {
                double t = da / (da - db);
                Vec3 x = a + (b - a) * t;
                out.push_back(x);
                on_plane.push_back(x);
            }
        }
        if (out.size() != m) cut_any = true;
        if (out.size() >= 3) kept.push_back(std::move(out));
    }

    if (!cut_any) {
        faces_ = std::move(kept);
        return;
    }
    if (kept.empty()) {
        faces_.clear();
        return;
    }

    // Closing face: order the cut points around their centroid in the plane.
    if (on_plane.size() >= 3) {
        Vec3 c{0, 0, 0};
        for (const Vec3& p : on_plane) c += p;
        c = c / static_cast<double>(on_plane.size());
        Vec3 axis = n.normalized();
        Vec3 ref = std::fabs(axis.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
        Vec3 e1 = axis.cross(ref).normalized();
        Vec3 e2 = axis.cross(e1);
        std::vector<std::pair<double, Vec3>> ang;
        ang.reserve(on_plane.size());
        for (const Vec3& p : on_plane) {
            Vec3 r = p - c;
            ang.emplace_back(std::atan2(r.dot(e2), r.dot(e1)), p);
        }
        std::sort(ang.begin(), ang.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<Vec3> closing;
        for (auto& [angle, p] : ang) {
            if (closing.empty() || (p - closing.back()).norm() > tol_) closing.push_back(p);
        }
        if (closing.size() >= 3 && (closing.front() - closing.back()).norm() <= tol_)
            closing.pop_back();
        if (closing.size() >= 3) kept.push_back(std::move(closing));
    }
    faces_ = std::move(kept);
}

std::vector<Vec3> ConvexCell::section(const Vec3& n, double d) const {
    ConvexCell copy = *this;
    std::size_t before = copy.faces_.size();
    copy.clip(n, d);
    if (copy.faces_.size() <= before && copy.faces_.empty()) return {};
    // The closing face lies on the plane; find it.
    for (const auto& face : copy.faces_) {
        bool on = true;
        for (const Vec3& p : face)
            if (std::fabs(n.dot(p) - d) > 10.0 * tol_ * std::max(1.0, n.norm())) on = false;
        if (on && face.size() >= 3) return face;
    }
    return {};
}

double polygon_area(const std::vector<Vec3>& poly) {
    if (poly.size() < 3) return 0.0;
    Vec3 s{0, 0, 0};
    const Vec3& o = poly[0];
    for (std::size_t i = 1; i + 1 < poly.size(); ++i)
        s += (poly[i] - o).cross(poly[i + 1] - o);
    return 0.5 * s.norm();
}

AreaWeights estimate_area_weights(const VoronoiStructure& vor, const PointCloud& cloud) {
    const std::size_t n = cloud.size();
    if (vor.cell_vertex_ids.size() != n)
        throw std::invalid_argument("estimate_area_weights: structure/cloud size mismatch");

    AreaWeights out;
    out.areas.assign(n, -1.0);
    std::vector<double> valid;
    valid.reserve(n);

#pragma omp parallel for schedule(dynamic, 32)
    for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
        std::size_t i = static_cast<std::size_t>(ii);
        const Vec3& p = cloud.points[i];
        const auto& cell_ids = vor.cell_vertex_ids[i];
        if (cell_ids.empty()) continue;

        // Farthest cell vertex fixes the cutting direction.
        Vec3 q_max = vor.exam_points[cell_ids[0]];
        double best = (q_max - p).squared_norm();
        for (int id : cell_ids) {
            double dist = (vor.exam_points[id] - p).squared_norm();
            if (dist > best) {
                best = dist;
                q_max = vor.exam_points[id];
            }
        }
        Vec3 dir = q_max - p;
        if (dir.norm() == 0.0) continue;
        dir = dir.normalized();

        ConvexCell cell(vor.box);
        for (int k : vor.neighbors[i]) {
            Vec3 nrm = cloud.points[k] - p;
            Vec3 mid = (cloud.points[k] + p) * 0.5;
            cell.clip(nrm, nrm.dot(mid));
            if (cell.empty()) break;
        }
        if (cell.empty()) continue;

        std::vector<Vec3> poly = cell.section(dir, dir.dot(p));
        double area = polygon_area(poly);
        if (std::isfinite(area) && area >= 1e-14) out.areas[i] = area;
    }

    for (double a : out.areas)
        if (a >= 0.0) valid.push_back(a);

    double fallback;
    if (!valid.empty()) {
        std::nth_element(valid.begin(), valid.begin() + valid.size() / 2, valid.end());
        fallback = valid[valid.size() / 2];
    } else {
        fallback = vor.box.diagonal() * vor.box.diagonal() / static_cast<double>(n);
    }
    // Samples on an open boundary have cells that run to the clip box, so their
    // sections can dwarf the true surface element; cap against the median.
    double cap = 5.0 * fallback;
    for (double& a : out.areas) {
        if (a < 0.0) a = fallback;
        if (a > cap) a = cap;
    }
    return out;
}

}  // namespace vorient
