#pragma once

#include <array>
#include <cmath>

namespace dlp {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }
Vec3 normalized(const Vec3& v);  // throws DomainError on near-zero input
inline Vec3 lerp(const Vec3& a, const Vec3& b, double t) { return a + (b - a) * t; }

// 3x3 rotation matrix, row-major.
struct Mat3 {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    double& at(int r, int c) { return m[r * 3 + c]; }
    double at(int r, int c) const { return m[r * 3 + c]; }
    Vec3 col(int c) const { return {m[c], m[3 + c], m[6 + c]}; }
    void set_col(int c, const Vec3& v) {
        m[c] = v.x;
        m[3 + c] = v.y;
        m[6 + c] = v.z;
    }

    Vec3 operator*(const Vec3& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z, m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }
    Mat3 operator*(const Mat3& o) const;

    static Mat3 identity() { return {}; }
    static Mat3 rotation_y(double angle);
};

double det(const Mat3& m);

struct Quat {
    double w = 1.0, x = 0.0, y = 0.0, z = 0.0;
};

Quat mat_to_quat(const Mat3& m);
Mat3 quat_to_mat(const Quat& q);
Quat slerp(const Quat& a, const Quat& b, double t);

// First two columns of a rotation matrix: [c0.x c0.y c0.z c1.x c1.y c1.z].
using Rot6 = std::array<double, 6>;

inline Rot6 identity_rot6() { return {1, 0, 0, 0, 1, 0}; }

// Gram-Schmidt orthonormalization; throws MalformedRotation when the two
// columns are parallel within 1e-9 or the first is near zero.
Mat3 rot6_to_mat(const Rot6& r);
Rot6 mat_to_rot6(const Mat3& m);
Rot6 slerp_rot6(const Rot6& a, const Rot6& b, double t);

inline double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * (3.0 - 2.0 * t);
}

inline double clamp(double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); }

}  // namespace dlp
