#pragma once

#include <array>
#include <cmath>

namespace landau {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double& operator[](int i) { return (&x)[i]; }
    double operator[](int i) const { return (&x)[i]; }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Symmetric 3x3 matrix, dense storage.
struct Mat3 {
    // row-major
    std::array<double, 9> a{};

    double& operator()(int i, int j) { return a[3 * i + j]; }
    double operator()(int i, int j) const { return a[3 * i + j]; }

    static Mat3 identity() {
        Mat3 m;
        m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
        return m;
    }
    static Mat3 outer(const Vec3& u, const Vec3& v) {
        Mat3 m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = u[i] * v[j];
        return m;
    }

    Mat3 operator+(const Mat3& o) const {
        Mat3 m;
        for (int i = 0; i < 9; ++i) m.a[i] = a[i] + o.a[i];
        return m;
    }
    Mat3 operator-(const Mat3& o) const {
        Mat3 m;
        for (int i = 0; i < 9; ++i) m.a[i] = a[i] - o.a[i];
        return m;
    }
    Mat3 operator*(double s) const {
        Mat3 m;
        for (int i = 0; i < 9; ++i) m.a[i] = a[i] * s;
        return m;
    }
    Vec3 operator*(const Vec3& v) const {
        return {a[0] * v.x + a[1] * v.y + a[2] * v.z,
                a[3] * v.x + a[4] * v.y + a[5] * v.z,
                a[6] * v.x + a[7] * v.y + a[8] * v.z};
    }
    Mat3 matmul(const Mat3& o) const {
        Mat3 m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
                m(i, j) = s;
            }
        return m;
    }
    double trace() const { return a[0] + a[4] + a[8]; }
    double quad(const Vec3& v) const { return v.dot((*this) * v); }
    double max_abs() const {
        double m = 0.0;
        for (double e : a) m = std::max(m, std::fabs(e));
        return m;
    }
};

inline Mat3 operator*(double s, const Mat3& m) { return m * s; }

// Eigenvalues of a symmetric 3x3 matrix, ascending.  Closed-form
// (trigonometric) solution of the characteristic cubic.
inline std::array<double, 3> sym_eigenvalues(const Mat3& A) {
    const double p1 = A(0, 1) * A(0, 1) + A(0, 2) * A(0, 2) + A(1, 2) * A(1, 2);
    const double q = A.trace() / 3.0;
    if (p1 == 0.0) {
        std::array<double, 3> d{A(0, 0), A(1, 1), A(2, 2)};
        if (d[0] > d[1]) std::swap(d[0], d[1]);
        if (d[1] > d[2]) std::swap(d[1], d[2]);
        if (d[0] > d[1]) std::swap(d[0], d[1]);
        return d;
    }
    const double p2 = (A(0, 0) - q) * (A(0, 0) - q) + (A(1, 1) - q) * (A(1, 1) - q) +
                      (A(2, 2) - q) * (A(2, 2) - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    Mat3 B = (A - q * Mat3::identity()) * (1.0 / p);
    const double detB = B(0, 0) * (B(1, 1) * B(2, 2) - B(1, 2) * B(2, 1)) -
                        B(0, 1) * (B(1, 0) * B(2, 2) - B(1, 2) * B(2, 0)) +
                        B(0, 2) * (B(1, 0) * B(2, 1) - B(1, 1) * B(2, 0));
    double r = detB / 2.0;
    r = std::fmin(1.0, std::fmax(-1.0, r));
    const double phi = std::acos(r) / 3.0;
    const double e1 = q + 2.0 * p * std::cos(phi);
    const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    const double e2 = 3.0 * q - e1 - e3;
    return {e3, e2, e1};
}

inline double min_eigenvalue(const Mat3& A) { return sym_eigenvalues(A)[0]; }

} // namespace landau
