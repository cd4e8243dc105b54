#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace vorient {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    double& operator[](int i) { return (&x)[i]; }
    double operator[](int i) const { return (&x)[i]; }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
    bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double squared_norm() const { return dot(*this); }
    double norm() const { return std::sqrt(squared_norm()); }
    Vec3 normalized() const {
        double n = norm();
        return n > 0.0 ? *this / n : Vec3{0, 0, 0};
    }
    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Axis-aligned box.
struct Box3 {
    Vec3 lo{0, 0, 0};
    Vec3 hi{0, 0, 0};

    Vec3 center() const { return (lo + hi) * 0.5; }
    Vec3 extent() const { return hi - lo; }
    double diagonal() const { return extent().norm(); }

    bool contains(const Vec3& p, double tol = 0.0) const {
        return p.x >= lo.x - tol && p.x <= hi.x + tol &&
               p.y >= lo.y - tol && p.y <= hi.y + tol &&
               p.z >= lo.z - tol && p.z <= hi.z + tol;
    }

    void expand(const Vec3& p) {
        lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y); lo.z = std::min(lo.z, p.z);
        hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y); hi.z = std::max(hi.z, p.z);
    }

    // Cube about the center with edge length equal to the longest extent.
    Box3 cube() const {
        Vec3 c = center();
        Vec3 e = extent();
        double h = 0.5 * std::max({e.x, e.y, e.z});
        return {c - Vec3{h, h, h}, c + Vec3{h, h, h}};
    }

    // Scaled about the center by a uniform factor.
    Box3 scaled(double factor) const {
        Vec3 c = center();
        Vec3 h = extent() * (0.5 * factor);
        return {c - h, c + h};
    }

    template <typename Iter>
    static Box3 bounding(Iter begin, Iter end) {
        Box3 b;
        b.lo = Vec3{1e300, 1e300, 1e300};
        b.hi = Vec3{-1e300, -1e300, -1e300};
        for (Iter it = begin; it != end; ++it) b.expand(*it);
        return b;
    }
};

}  // namespace vorient
