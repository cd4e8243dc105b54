#include "vorient/delaunay.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <numeric>
#include <random>

#include "vorient/predicates.hpp"
#include "vorient/rng.hpp"

namespace vorient {

namespace {

// Thrown internally when an exactly cospherical/coplanar configuration is
// hit; the caller jitters and rebuilds.
struct NeedsJitter {};

struct Builder {
    std::vector<Vec3> verts;  // input points followed by 4 super vertices
    int n_input = 0;

    struct Tet {
        std::array<int, 4> v;
        std::array<int, 4> adj;
        bool alive = true;
    };
    std::vector<Tet> tets;
    std::vector<int> free_list;
    std::vector<int> stamp;  // insphere cavity marks
    int stamp_id = 0;

    int make_tet(const std::array<int, 4>& v) {
        int id;
        if (!free_list.empty()) {
            id = free_list.back();
            free_list.pop_back();
            tets[id] = Tet{v, {-1, -1, -1, -1}, true};
        } else {
            id = static_cast<int>(tets.size());
            tets.push_back(Tet{v, {-1, -1, -1, -1}, true});
        }
        if (static_cast<int>(stamp.size()) <= id) stamp.resize(id + 1, 0);
        return id;
    }

    const Vec3& vp(int i) const { return verts[i]; }

    int face_orient(int t, int k, const Vec3& p) const {
        const auto& fv = TetComplex::face_verts[k];
        const auto& tv = tets[t].v;
        return orient3d(vp(tv[fv[0]]), vp(tv[fv[1]]), vp(tv[fv[2]]), p);
    }

    int locate(const Vec3& p, int hint) const {
        int t = hint;
        std::size_t steps = 0;
        const std::size_t max_steps = 4 * tets.size() + 64;
        while (true) {
            if (++steps > max_steps) break;  // walk got stuck, scan below
            bool moved = false;
            for (int k = 0; k < 4; ++k) {
                if (face_orient(t, k, p) > 0) {
                    int n = tets[t].adj[k];
                    if (n < 0) throw NeedsJitter{};  // outside the super tet
                    t = n;
                    moved = true;
                    break;
                }
            }
            if (!moved) return t;
        }
        for (int i = 0; i < static_cast<int>(tets.size()); ++i) {
            if (!tets[i].alive) continue;
            bool inside = true;
            for (int k = 0; k < 4 && inside; ++k)
                if (face_orient(i, k, p) > 0) inside = false;
            if (inside) return i;
        }
        throw NeedsJitter{};
    }

    bool in_circumsphere(int t, const Vec3& p) const {
        const auto& tv = tets[t].v;
        int s = insphere(vp(tv[0]), vp(tv[1]), vp(tv[2]), vp(tv[3]), p);
        if (s == 0) throw NeedsJitter{};
        return s > 0;
    }

    void insert(int pi, int& hint) {
        const Vec3& p = verts[pi];
        int t0 = locate(p, hint);
        if (!in_circumsphere(t0, p)) throw NeedsJitter{};

        // Cavity of tets whose circumsphere strictly contains p.
        ++stamp_id;
        std::vector<int> cavity{t0};
        stamp[t0] = stamp_id;
        struct Border {
            int outside;      // neighbor tet or -1
            int outside_face; // its face index toward the cavity
            std::array<int, 3> fv;
        };
        std::vector<Border> border;
        for (std::size_t head = 0; head < cavity.size(); ++head) {
            int t = cavity[head];
            for (int k = 0; k < 4; ++k) {
                int n = tets[t].adj[k];
                if (n >= 0 && stamp[n] == stamp_id) continue;
                if (n >= 0 && in_circumsphere(n, p)) {
                    stamp[n] = stamp_id;
                    cavity.push_back(n);
                    continue;
                }
                const auto& fl = TetComplex::face_verts[k];
                Border b;
                b.outside = n;
                b.outside_face = -1;
                b.fv = {tets[t].v[fl[0]], tets[t].v[fl[1]], tets[t].v[fl[2]]};
                if (n >= 0) {
                    for (int j = 0; j < 4; ++j)
                        if (tets[n].adj[j] == t) b.outside_face = j;
                }
                border.push_back(b);
            }
        }

        for (int t : cavity) {
            tets[t].alive = false;
            free_list.push_back(t);
        }

        // One new tet per border face; p goes to local slot 3.
        std::map<std::pair<int, int>, std::pair<int, int>> edge_map;  // edge -> (tet, face)
        int last = -1;
        for (const Border& b : border) {
            // Border face has p on its negative side; reverse it for a
            // positively oriented tet.
            std::array<int, 4> nv = {b.fv[0], b.fv[2], b.fv[1], pi};
            int nt = make_tet(nv);
            tets[nt].adj[3] = b.outside;
            if (b.outside >= 0) tets[b.outside].adj[b.outside_face] = nt;
            // Side faces: opposite base vertex i contains the other two base
            // vertices and p.
            for (int i = 0; i < 3; ++i) {
                int u = nv[(i + 1) % 3], v = nv[(i + 2) % 3];
                auto key = std::minmax(u, v);
                auto it = edge_map.find(key);
                if (it == edge_map.end()) {
                    edge_map[key] = {nt, i};
                } else {
                    tets[nt].adj[i] = it->second.first;
                    tets[it->second.first].adj[it->second.second] = nt;
                    edge_map.erase(it);
                }
            }
            last = nt;
        }
        if (last < 0 || !edge_map.empty()) throw NeedsJitter{};
        hint = last;
    }

    TetComplex build(const std::vector<Vec3>& points) {
        n_input = static_cast<int>(points.size());
        verts = points;

        Box3 box = Box3::bounding(points.begin(), points.end());
        Vec3 c = box.center();
        double k = 1e6 * std::max(box.diagonal(), 1.0);
        verts.push_back(c + Vec3{k, k, k});
        verts.push_back(c + Vec3{k, -k, -k});
        verts.push_back(c + Vec3{-k, k, -k});
        verts.push_back(c + Vec3{-k, -k, k});
        std::array<int, 4> sv = {n_input, n_input + 1, n_input + 2, n_input + 3};
        if (orient3d(vp(sv[0]), vp(sv[1]), vp(sv[2]), vp(sv[3])) < 0) std::swap(sv[2], sv[3]);
        make_tet(sv);

        // Randomized insertion order keeps the expected complexity low and is
        // deterministic for a fixed input.
        std::vector<int> order(n_input);
        std::iota(order.begin(), order.end(), 0);
        std::mt19937_64 shuffle_rng(0x5eed5eed1234ULL);
        std::shuffle(order.begin(), order.end(), shuffle_rng);

        int hint = 0;
        for (int pi : order) insert(pi, hint);

        // Strip super-vertex tets and compact.
        TetComplex out;
        out.vertices = points;
        std::vector<int> remap(tets.size(), -1);
        for (int t = 0; t < static_cast<int>(tets.size()); ++t) {
            if (!tets[t].alive) continue;
            bool finite = true;
            for (int k = 0; k < 4; ++k)
                if (tets[t].v[k] >= n_input) finite = false;
            if (!finite) continue;
            remap[t] = static_cast<int>(out.tets.size());
            out.tets.push_back(tets[t].v);
        }
        out.adjacency.reserve(out.tets.size());
        for (int t = 0; t < static_cast<int>(tets.size()); ++t) {
            if (remap[t] < 0) continue;
            std::array<int, 4> adj;
            for (int k = 0; k < 4; ++k) {
                int n = tets[t].adj[k];
                adj[k] = (n >= 0 && remap[n] >= 0) ? remap[n] : -1;
            }
            out.adjacency.push_back(adj);
        }
        return out;
    }
};

std::uint64_t hash_points(const std::vector<Vec3>& points) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    auto mix = [&h](double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xffu;
            h *= 1099511628211ULL;
        }
    };
    for (const Vec3& p : points) {
        mix(p.x);
        mix(p.y);
        mix(p.z);
    }
    return h;
}

}  // namespace

TetComplex delaunay_tetrahedralize(const std::vector<Vec3>& points) {
    if (points.size() < 4)
        throw DegenerateInputError("delaunay_tetrahedralize: need at least 4 points");
    for (const Vec3& p : points)
        if (!p.finite()) throw DegenerateInputError("delaunay_tetrahedralize: non-finite point");

    Box3 box = Box3::bounding(points.begin(), points.end());
    double diag = box.diagonal();
    if (!(diag > 0.0))
        throw DegenerateInputError("delaunay_tetrahedralize: all points coincident");

    std::uint64_t seed = hash_points(points);
    std::vector<Vec3> work = points;
    for (int attempt = 0; attempt < 4; ++attempt) {
        try {
            Builder builder;
            TetComplex complex = builder.build(work);
            if (complex.tets.empty())
                throw DegenerateInputError("delaunay_tetrahedralize: degenerate input (coplanar?)");
            std::vector<char> used(points.size(), 0);
            for (const auto& tet : complex.tets)
                for (int v : tet) used[v] = 1;
            if (std::find(used.begin(), used.end(), 0) != used.end())
                throw NeedsJitter{};
            return complex;
        } catch (const NeedsJitter&) {
            double magnitude = 1e-9 * diag * std::pow(10.0, attempt);
            Rng rng(seed + attempt);
            work = points;
            for (Vec3& p : work) p += rng.normal3() * magnitude;
        }
    }
    throw DegenerateInputError("delaunay_tetrahedralize: degenerate input");
}

Vec3 circumcenter(const TetComplex& complex, int t) {
    const auto& tv = complex.tets[t];
    const Vec3& a = complex.vertices[tv[0]];
    Vec3 u = complex.vertices[tv[1]] - a;
    Vec3 v = complex.vertices[tv[2]] - a;
    Vec3 w = complex.vertices[tv[3]] - a;
    // 2 [u; v; w] x = (|u|^2, |v|^2, |w|^2), center = a + x.
    double det = u.dot(v.cross(w));
    Vec3 rhs{0.5 * u.squared_norm(), 0.5 * v.squared_norm(), 0.5 * w.squared_norm()};
    Vec3 x = (rhs.x * v.cross(w) + rhs.y * w.cross(u) + rhs.z * u.cross(v)) / det;
    return a + x;
}

}  // namespace vorient
