#pragma once

// Test-only exact winding oracle: signed solid angles over a closed oriented
// triangle mesh.

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "vorient/vec3.hpp"

namespace vorient::testing {

struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;

    void flip_orientation() {
        for (auto& t : triangles) std::swap(t[1], t[2]);
    }

    // Every edge must appear in exactly two triangles with opposite
    // direction.
    bool closed_and_consistent() const {
        std::map<std::pair<int, int>, int> edges;
        for (const auto& t : triangles)
            for (int k = 0; k < 3; ++k) ++edges[{t[k], t[(k + 1) % 3]}];
        for (const auto& [e, count] : edges) {
            if (count != 1) return false;
            auto rev = edges.find({e.second, e.first});
            if (rev == edges.end() || rev->second != 1) return false;
        }
        return true;
    }
};

// Exact signed-solid-angle sum divided by 4 pi (Van Oosterom & Strackee).
inline double mesh_winding_oracle(const Vec3& q, const TriangleMesh& mesh) {
    double total = 0.0;
    for (const auto& tri : mesh.triangles) {
        Vec3 a = mesh.vertices[tri[0]] - q;
        Vec3 b = mesh.vertices[tri[1]] - q;
        Vec3 c = mesh.vertices[tri[2]] - q;
        double la = a.norm(), lb = b.norm(), lc = c.norm();
        if (la == 0.0 || lb == 0.0 || lc == 0.0)
            throw std::invalid_argument("mesh_winding_oracle: query on the surface");
        double num = a.dot(b.cross(c));
        double den = la * lb * lc + a.dot(b) * lc + b.dot(c) * la + c.dot(a) * lb;
        total += 2.0 * std::atan2(num, den);
    }
    return total / (4.0 * 3.14159265358979323846);
}

// Unit icosphere centered at the origin, outward orientation.
inline TriangleMesh make_icosphere(int subdivisions) {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    TriangleMesh mesh;
    auto add = [&mesh](double x, double y, double z) {
        mesh.vertices.push_back(Vec3{x, y, z}.normalized());
    };
    add(-1, phi, 0); add(1, phi, 0); add(-1, -phi, 0); add(1, -phi, 0);
    add(0, -1, phi); add(0, 1, phi); add(0, -1, -phi); add(0, 1, -phi);
    add(phi, 0, -1); add(phi, 0, 1); add(-phi, 0, -1); add(-phi, 0, 1);
    mesh.triangles = {
        {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11},
        {1, 5, 9}, {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8}, {3, 8, 9},
        {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1},
    };
    for (int s = 0; s < subdivisions; ++s) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int i, int j) {
            auto key = std::minmax(i, j);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            Vec3 m = ((mesh.vertices[i] + mesh.vertices[j]) * 0.5).normalized();
            int id = static_cast<int>(mesh.vertices.size());
            mesh.vertices.push_back(m);
            midpoint[key] = id;
            return id;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(mesh.triangles.size() * 4);
        for (const auto& t : mesh.triangles) {
            int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
            next.push_back({t[0], ab, ca});
            next.push_back({t[1], bc, ab});
            next.push_back({t[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        mesh.triangles = std::move(next);
    }
    return mesh;
}

}  // namespace vorient::testing
