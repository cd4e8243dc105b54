#include "vorient/predicates.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace vorient {

namespace {

using Rational = boost::multiprecision::cpp_rational;

template <typename T>
T det3(T a, T b, T c, T d, T e, T f, T g, T h, T i) {
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
}

// Absolute-value analog of det3, used for the error filter.
double perm3(double a, double b, double c, double d, double e, double f, double g, double h,
             double i) {
    a = std::fabs(a); b = std::fabs(b); c = std::fabs(c);
    d = std::fabs(d); e = std::fabs(e); f = std::fabs(f);
    g = std::fabs(g); h = std::fabs(h); i = std::fabs(i);
    return a * (e * i + f * h) + b * (d * i + f * g) + c * (d * h + e * g);
}

template <typename T>
struct V3 {
    T x, y, z;
};

template <typename T>
int sign_of(const T& v) {
    if (v > 0) return 1;
    if (v < 0) return -1;
    return 0;
}

int orient3d_exact(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    V3<Rational> u{Rational(b.x) - Rational(a.x), Rational(b.y) - Rational(a.y),
                   Rational(b.z) - Rational(a.z)};
    V3<Rational> v{Rational(c.x) - Rational(a.x), Rational(c.y) - Rational(a.y),
                   Rational(c.z) - Rational(a.z)};
    V3<Rational> w{Rational(d.x) - Rational(a.x), Rational(d.y) - Rational(a.y),
                   Rational(d.z) - Rational(a.z)};
    Rational det = det3<Rational>(u.x, u.y, u.z, v.x, v.y, v.z, w.x, w.y, w.z);
    return sign_of(det);
}

// Lifted 4x4 determinant, expanded along the squared-norm column. Returns the
// raw determinant sign; the insphere convention is applied by the caller.
template <typename T>
T lifted_det(const V3<T>* r, const T* w) {
    T m0 = det3<T>(r[1].x, r[1].y, r[1].z, r[2].x, r[2].y, r[2].z, r[3].x, r[3].y, r[3].z);
    T m1 = det3<T>(r[0].x, r[0].y, r[0].z, r[2].x, r[2].y, r[2].z, r[3].x, r[3].y, r[3].z);
    T m2 = det3<T>(r[0].x, r[0].y, r[0].z, r[1].x, r[1].y, r[1].z, r[3].x, r[3].y, r[3].z);
    T m3 = det3<T>(r[0].x, r[0].y, r[0].z, r[1].x, r[1].y, r[1].z, r[2].x, r[2].y, r[2].z);
    return -w[0] * m0 + w[1] * m1 - w[2] * m2 + w[3] * m3;
}

int insphere_exact(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, const Vec3& e) {
    const Vec3* pts[4] = {&a, &b, &c, &d};
    V3<Rational> r[4];
    Rational w[4];
    for (int i = 0; i < 4; ++i) {
        r[i].x = Rational(pts[i]->x) - Rational(e.x);
        r[i].y = Rational(pts[i]->y) - Rational(e.y);
        r[i].z = Rational(pts[i]->z) - Rational(e.z);
        w[i] = r[i].x * r[i].x + r[i].y * r[i].y + r[i].z * r[i].z;
    }
    Rational det = lifted_det<Rational>(r, w);
    return -sign_of(det);
}

}  // namespace

int orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    double ux = b.x - a.x, uy = b.y - a.y, uz = b.z - a.z;
    double vx = c.x - a.x, vy = c.y - a.y, vz = c.z - a.z;
    double wx = d.x - a.x, wy = d.y - a.y, wz = d.z - a.z;
    double det = det3<double>(ux, uy, uz, vx, vy, vz, wx, wy, wz);
    double perm = perm3(ux, uy, uz, vx, vy, vz, wx, wy, wz);
    double bound = 1e-12 * perm;
    if (det > bound) return 1;
    if (det < -bound) return -1;
    return orient3d_exact(a, b, c, d);
}

int insphere(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, const Vec3& e) {
    const Vec3* pts[4] = {&a, &b, &c, &d};
    V3<double> r[4];
    double w[4];
    for (int i = 0; i < 4; ++i) {
        r[i].x = pts[i]->x - e.x;
        r[i].y = pts[i]->y - e.y;
        r[i].z = pts[i]->z - e.z;
        w[i] = r[i].x * r[i].x + r[i].y * r[i].y + r[i].z * r[i].z;
    }
    double det = lifted_det<double>(r, w);

    double p0 = perm3(r[1].x, r[1].y, r[1].z, r[2].x, r[2].y, r[2].z, r[3].x, r[3].y, r[3].z);
    double p1 = perm3(r[0].x, r[0].y, r[0].z, r[2].x, r[2].y, r[2].z, r[3].x, r[3].y, r[3].z);
    double p2 = perm3(r[0].x, r[0].y, r[0].z, r[1].x, r[1].y, r[1].z, r[3].x, r[3].y, r[3].z);
    double p3 = perm3(r[0].x, r[0].y, r[0].z, r[1].x, r[1].y, r[1].z, r[2].x, r[2].y, r[2].z);
    double perm = w[0] * p0 + w[1] * p1 + w[2] * p2 + w[3] * p3;

    double bound = 1e-11 * perm;
    if (det > bound) return -1;
    if (det < -bound) return 1;
    return insphere_exact(a, b, c, d, e);
}

}  // namespace vorient
