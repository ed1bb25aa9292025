#pragma once

#include <array>
#include <cmath>

namespace subpix {

struct Vec2 {
  double x = 0.0, y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double norm() const { return std::hypot(x, y); }
};

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(Vec3 o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(Vec3 o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

// Row-major 2x2 matrix.
struct Mat2 {
  std::array<double, 4> m{1.0, 0.0, 0.0, 1.0};

  static Mat2 identity() { return {}; }
  static Mat2 rotation(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {{c, -s, s, c}};
  }
  static Mat2 diag(double a, double b) { return {{a, 0.0, 0.0, b}}; }

  double operator()(int r, int c) const { return m[2 * r + c]; }
  double& operator()(int r, int c) { return m[2 * r + c]; }

  Vec2 operator*(Vec2 v) const {
    return {m[0] * v.x + m[1] * v.y, m[2] * v.x + m[3] * v.y};
  }
  Mat2 operator*(const Mat2& o) const {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        r(i, j) = (*this)(i, 0) * o(0, j) + (*this)(i, 1) * o(1, j);
    return r;
  }
  Mat2 operator-(const Mat2& o) const {
    Mat2 r;
    for (int i = 0; i < 4; ++i) r.m[i] = m[i] - o.m[i];
    return r;
  }
  double det() const { return m[0] * m[3] - m[1] * m[2]; }
  Mat2 transposed() const { return {{m[0], m[2], m[1], m[3]}}; }
};

// Row-major 3x3 matrix.
struct Mat3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static Mat3 identity() { return {}; }
  static Mat3 diag(double a, double b, double c) {
    return {{a, 0, 0, 0, b, 0, 0, 0, c}};
  }
  // Rotation about the z axis (acts on the first two coordinates).
  static Mat3 rot_z(double t) {
    const double c = std::cos(t), s = std::sin(t);
    return {{c, -s, 0, s, c, 0, 0, 0, 1}};
  }
  // Rotation about the y axis.
  static Mat3 rot_y(double t) {
    const double c = std::cos(t), s = std::sin(t);
    return {{c, 0, s, 0, 1, 0, -s, 0, c}};
  }

  double operator()(int r, int c) const { return m[3 * r + c]; }
  double& operator()(int r, int c) { return m[3 * r + c]; }

  Vec3 operator*(Vec3 v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
            m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
  }
  Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0;
        for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
        r(i, j) = s;
      }
    return r;
  }
  Mat3 operator-(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.m[i] = m[i] - o.m[i];
    return r;
  }
  Mat3 transposed() const {
    return {{m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]}};
  }
  double det() const {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) -
           m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
  }
};

}  // namespace subpix
