#include "dlp/core/math.hpp"

#include "dlp/core/error.hpp"

namespace dlp {

Vec3 normalized(const Vec3& v) {
    const double n = norm(v);
    if (n < 1e-12) throw DomainError("normalized: near-zero vector");
    return v * (1.0 / n);
}

Mat3 Mat3::operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += at(i, k) * o.at(k, j);
            r.at(i, j) = s;
        }
    }
    return r;
}

Mat3 Mat3::rotation_y(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Mat3 r;
    r.m = {c, 0, s, 0, 1, 0, -s, 0, c};
    return r;
}

double det(const Mat3& m) {
    return m.at(0, 0) * (m.at(1, 1) * m.at(2, 2) - m.at(1, 2) * m.at(2, 1)) -
           m.at(0, 1) * (m.at(1, 0) * m.at(2, 2) - m.at(1, 2) * m.at(2, 0)) +
           m.at(0, 2) * (m.at(1, 0) * m.at(2, 1) - m.at(1, 1) * m.at(2, 0));
}

Quat mat_to_quat(const Mat3& m) {
    Quat q;
    const double tr = m.at(0, 0) + m.at(1, 1) + m.at(2, 2);
    if (tr > 0.0) {
        double s = std::sqrt(tr + 1.0) * 2.0;
        q.w = 0.25 * s;
        q.x = (m.at(2, 1) - m.at(1, 2)) / s;
        q.y = (m.at(0, 2) - m.at(2, 0)) / s;
        q.z = (m.at(1, 0) - m.at(0, 1)) / s;
    } else if (m.at(0, 0) > m.at(1, 1) && m.at(0, 0) > m.at(2, 2)) {
        double s = std::sqrt(1.0 + m.at(0, 0) - m.at(1, 1) - m.at(2, 2)) * 2.0;
        q.w = (m.at(2, 1) - m.at(1, 2)) / s;
        q.x = 0.25 * s;
        q.y = (m.at(0, 1) + m.at(1, 0)) / s;
        q.z = (m.at(0, 2) + m.at(2, 0)) / s;
    } else if (m.at(1, 1) > m.at(2, 2)) {
        double s = std::sqrt(1.0 + m.at(1, 1) - m.at(0, 0) - m.at(2, 2)) * 2.0;
        q.w = (m.at(0, 2) - m.at(2, 0)) / s;
        q.x = (m.at(0, 1) + m.at(1, 0)) / s;
        q.y = 0.25 * s;
        q.z = (m.at(1, 2) + m.at(2, 1)) / s;
    } else {
        double s = std::sqrt(1.0 + m.at(2, 2) - m.at(0, 0) - m.at(1, 1)) * 2.0;
        q.w = (m.at(1, 0) - m.at(0, 1)) / s;
        q.x = (m.at(0, 2) + m.at(2, 0)) / s;
        q.y = (m.at(1, 2) + m.at(2, 1)) / s;
        q.z = 0.25 * s;
    }
    return q;
}

Mat3 quat_to_mat(const Quat& q) {
    Mat3 m;
    const double xx = q.x * q.x, yy = q.y * q.y, zz = q.z * q.z;
    const double xy = q.x * q.y, xz = q.x * q.z, yz = q.y * q.z;
    const double wx = q.w * q.x, wy = q.w * q.y, wz = q.w * q.z;
    m.m = {1 - 2 * (yy + zz), 2 * (xy - wz),     2 * (xz + wy),
           2 * (xy + wz),     1 - 2 * (xx + zz), 2 * (yz - wx),
           2 * (xz - wy),     2 * (yz + wx),     1 - 2 * (xx + yy)};
    return m;
}

Quat slerp(const Quat& a, const Quat& b, double t) {
    double cos_half = a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
    Quat bb = b;
    if (cos_half < 0.0) {
        cos_half = -cos_half;
        bb = {-b.w, -b.x, -b.y, -b.z};
    }
    if (cos_half > 1.0 - 1e-10) {
        // nearly identical, fall back to nlerp
        Quat r{a.w + (bb.w - a.w) * t, a.x + (bb.x - a.x) * t, a.y + (bb.y - a.y) * t,
               a.z + (bb.z - a.z) * t};
        const double n = std::sqrt(r.w * r.w + r.x * r.x + r.y * r.y + r.z * r.z);
        return {r.w / n, r.x / n, r.y / n, r.z / n};
    }
    const double half = std::acos(cos_half);
    const double s = std::sin(half);
    const double wa = std::sin((1.0 - t) * half) / s;
    const double wb = std::sin(t * half) / s;
    return {wa * a.w + wb * bb.w, wa * a.x + wb * bb.x, wa * a.y + wb * bb.y,
            wa * a.z + wb * bb.z};
}

Mat3 rot6_to_mat(const Rot6& r) {
    const Vec3 a1{r[0], r[1], r[2]};
    const Vec3 a2{r[3], r[4], r[5]};
    const double n1 = norm(a1);
    if (n1 < 1e-9) throw MalformedRotation("rot6: first column near zero");
    const Vec3 b1 = a1 * (1.0 / n1);
    const Vec3 proj = a2 - b1 * dot(b1, a2);
    const double n2 = norm(proj);
    if (n2 < 1e-9) throw MalformedRotation("rot6: columns parallel");
    const Vec3 b2 = proj * (1.0 / n2);
    const Vec3 b3 = cross(b1, b2);
    Mat3 m;
    m.set_col(0, b1);
    m.set_col(1, b2);
    m.set_col(2, b3);
    return m;
}

Rot6 mat_to_rot6(const Mat3& m) {
    const Vec3 c0 = m.col(0);
    const Vec3 c1 = m.col(1);
    return {c0.x, c0.y, c0.z, c1.x, c1.y, c1.z};
}

Rot6 slerp_rot6(const Rot6& a, const Rot6& b, double t) {
    const Quat qa = mat_to_quat(rot6_to_mat(a));
    const Quat qb = mat_to_quat(rot6_to_mat(b));
    return mat_to_rot6(quat_to_mat(slerp(qa, qb, t)));
}

}  // namespace dlp
