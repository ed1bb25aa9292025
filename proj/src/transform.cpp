#include "subpix/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace subpix {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

int floor_int(double x) { return static_cast<int>(std::floor(x)); }

}  // namespace

std::optional<Pixel2> apply_image_affine(const AffineMap2D& map, Pixel2 p, int n) {
  const Vec2 q = map.map_point({static_cast<double>(p.i), static_cast<double>(p.j)});
  const int qi = floor_int(q.x), qj = floor_int(q.y);
  if (qi < 1 || qi > n || qj < 1 || qj > n) return std::nullopt;
  return Pixel2{qi, qj};
}

std::optional<Pixel3> apply_image_affine(const AffineMap3D& map, Pixel3 p, int n) {
  const Vec3 q = map.map_point({static_cast<double>(p.i), static_cast<double>(p.j),
                                static_cast<double>(p.k)});
  const int qi = floor_int(q.x), qj = floor_int(q.y), qk = floor_int(q.z);
  if (qi < 1 || qi > n || qj < 1 || qj > n || qk < 1 || qk > n)
    return std::nullopt;
  return Pixel3{qi, qj, qk};
}

std::optional<Pixel3> apply_restricted_3d(const RestrictedMap3D& map, Pixel3 p, int n) {
  const Vec2 q = map.planar.map_point({static_cast<double>(p.i), static_cast<double>(p.j)});
  const int qi = floor_int(q.x), qj = floor_int(q.y);
  if (qi < 1 || qi > n || qj < 1 || qj > n) return std::nullopt;
  int qk = floor_int(map.zscale * p.k + map.zshift);
  qk = std::clamp(qk, 1, n);
  return Pixel3{qi, qj, qk};
}

AffineMap3D embed_restricted(const RestrictedMap3D& map) {
  AffineMap3D r;
  r.A = Mat3{{map.planar.A(0, 0), map.planar.A(0, 1), 0.0,
              map.planar.A(1, 0), map.planar.A(1, 1), 0.0,
              0.0, 0.0, map.zscale}};
  r.t = {map.planar.t.x, map.planar.t.y, map.zshift};
  return r;
}

AffineMap2D compose_decomposition(const Decomposition2D& d, double c) {
  if (c < 1.0) throw std::invalid_argument("scaling bound c must be >= 1");
  const double lo = 1.0 / c - 1e-12, hi = c + 1e-12;
  if (d.sx < lo || d.sx > hi || d.sy < lo || d.sy > hi)
    throw std::invalid_argument("scale outside [1/c, c]");
  AffineMap2D m;
  m.A = Mat2::rotation(d.theta2) * Mat2::diag(d.sx, d.sy) * Mat2::rotation(d.theta1);
  m.t = {d.tx, d.ty};
  return m;
}

Decomposition2D decompose(const AffineMap2D& map) {
  const double det = map.A.det();
  if (det <= kSingularTol) {
    if (std::abs(det) <= kSingularTol)
      throw std::invalid_argument("matrix is singular");
    throw std::invalid_argument("orientation-reversing map not supported");
  }
  // Closed-form 2x2 SVD. With E,F,H,G the half sum/difference combinations,
  // A = R(t2) diag(q+r, q-r) R(t1) where q = |(E,H)|, r = |(F,G)|.
  const double a = map.A(0, 0), b = map.A(0, 1);
  const double c = map.A(1, 0), d = map.A(1, 1);
  const double e = (a + d) / 2, f = (a - d) / 2;
  const double g = (c + b) / 2, h = (c - b) / 2;
  const double q = std::hypot(e, h), r = std::hypot(f, g);
  const double a1 = std::atan2(g, f);  // theta2 - theta1
  const double a2 = std::atan2(h, e);  // theta2 + theta1
  Decomposition2D out;
  out.sx = q + r;
  out.sy = q - r;
  out.theta1 = wrap_angle((a2 - a1) / 2);
  out.theta2 = wrap_angle((a2 + a1) / 2);
  out.tx = map.t.x;
  out.ty = map.t.y;
  return out;
}

namespace {

double corner_max_displacement(const Mat2& dA, Vec2 dt, int n) {
  const double lo = 1.0, hi = static_cast<double>(n) + 1.0;
  double best = 0.0;
  for (double x : {lo, hi})
    for (double y : {lo, hi}) best = std::max(best, (dA * Vec2{x, y} + dt).norm());
  return best;
}

double corner_max_displacement(const Mat3& dA, Vec3 dt, int n) {
  const double lo = 1.0, hi = static_cast<double>(n) + 1.0;
  double best = 0.0;
  for (double x : {lo, hi})
    for (double y : {lo, hi})
      for (double z : {lo, hi})
        best = std::max(best, (dA * Vec3{x, y, z} + dt).norm());
  return best;
}

}  // namespace

double linf_distance(const AffineMap2D& a, const AffineMap2D& b, int n) {
  return corner_max_displacement(a.A - b.A, a.t - b.t, n);
}

double linf_distance(const AffineMap3D& a, const AffineMap3D& b, int n) {
  return corner_max_displacement(a.A - b.A, a.t - b.t, n);
}

void singular_values_2x2(const Mat2& m, double& smax, double& smin) {
  const double e = (m(0, 0) + m(1, 1)) / 2, f = (m(0, 0) - m(1, 1)) / 2;
  const double g = (m(1, 0) + m(0, 1)) / 2, h = (m(1, 0) - m(0, 1)) / 2;
  const double q = std::hypot(e, h), r = std::hypot(f, g);
  smax = q + r;
  smin = std::abs(q - r);
}

bool within_scaling_bound(const AffineMap2D& map, double c, double tol) {
  double smax, smin;
  singular_values_2x2(map.A, smax, smin);
  return smin >= 1.0 / c - tol && smax <= c + tol;
}

bool within_scaling_bound(const AffineMap3D& map, double c, double tol) {
  if (map.A.det() <= kSingularTol) return false;
  const Svd3 s = svd3(map.A);
  return s.s.z >= 1.0 / c - tol && s.s.x <= c + tol;
}

double apply_intensity(const IntensityMap& map, double v) {
  return std::clamp(map.con * v + map.bri, 0.0, 1.0);
}

double linf_intensity(const IntensityMap& a, const IntensityMap& b) {
  auto add_breakpoints = [](const IntensityMap& m, double* pts, int& count) {
    // clamp(con v + bri) changes slope where con v + bri crosses 0 or 1.
    if (m.con != 0.0) {
      for (double target : {0.0, 1.0}) {
        const double v = (target - m.bri) / m.con;
        if (v > 0.0 && v < 1.0) pts[count++] = v;
      }
    }
  };
  double pts[6] = {0.0, 1.0};
  int count = 2;
  add_breakpoints(a, pts, count);
  add_breakpoints(b, pts, count);
  double best = 0.0;
  for (int i = 0; i < count; ++i)
    best = std::max(best, std::abs(apply_intensity(a, pts[i]) - apply_intensity(b, pts[i])));
  return best;
}

void validate_intensity(const IntensityMap& map, double c) {
  if (c < 1.0) throw std::invalid_argument("scaling bound c must be >= 1");
  const double tol = 1e-12;
  if (map.con < 1.0 / c - tol || map.con > c + tol)
    throw std::invalid_argument("con outside [1/c, c]");
  if (map.bri < -c - tol || map.bri > 1.0 + tol)
    throw std::invalid_argument("bri outside [-c, 1]");
}

Mat3 compose_euler_zyz(const EulerZYZ& e) {
  return Mat3::rot_z(e.alpha) * Mat3::rot_y(e.beta) * Mat3::rot_z(e.gamma);
}

EulerZYZ euler_zyz_from_rotation(const Mat3& r) {
  EulerZYZ e;
  // R(2,2) = cos(beta); beta in [0, pi] makes sin(beta) >= 0.
  const double cb = std::clamp(r(2, 2), -1.0, 1.0);
  e.beta = std::acos(cb);
  const double sb = std::sin(e.beta);
  if (sb > 1e-12) {
    e.alpha = wrap_angle(std::atan2(r(1, 2), r(0, 2)));
    e.gamma = wrap_angle(std::atan2(r(2, 1), -r(2, 0)));
  } else {
    // Gimbal: only alpha +/- gamma is determined; pick gamma = 0. At
    // beta = pi the rotation is Rz(alpha) * diag(-1, 1, -1), so the first
    // column reads (-cos(alpha), -sin(alpha)).
    e.gamma = 0.0;
    if (cb > 0)
      e.alpha = wrap_angle(std::atan2(r(1, 0), r(0, 0)));
    else
      e.alpha = wrap_angle(std::atan2(-r(1, 0), -r(0, 0)));
  }
  return e;
}

namespace {

// Cyclic Jacobi eigendecomposition of a symmetric 3x3 matrix. Returns
// eigenvalues in w (descending) and eigenvectors as columns of v. Plenty of
// accuracy for matrices with condition numbers around c^2 <= 16.
void sym_eig3(const Mat3& s_in, Vec3& w, Mat3& v) {
  Mat3 a = s_in;
  v = Mat3::identity();
  for (int sweep = 0; sweep < 32; ++sweep) {
    double off = std::abs(a(0, 1)) + std::abs(a(0, 2)) + std::abs(a(1, 2));
    if (off < 1e-15) break;
    for (int p = 0; p < 2; ++p)
      for (int q = p + 1; q < 3; ++q) {
        if (std::abs(a(p, q)) < 1e-18) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double cth = 1.0 / std::sqrt(t * t + 1.0);
        const double sth = t * cth;
        Mat3 rot = Mat3::identity();
        rot(p, p) = cth;
        rot(q, q) = cth;
        rot(p, q) = sth;
        rot(q, p) = -sth;
        a = rot.transposed() * a * rot;
        v = v * rot;
      }
  }
  w = {a(0, 0), a(1, 1), a(2, 2)};
  // Sort descending, permuting eigenvector columns alongside.
  int order[3] = {0, 1, 2};
  double vals[3] = {w.x, w.y, w.z};
  std::sort(order, order + 3, [&](int x, int y) { return vals[x] > vals[y]; });
  Mat3 vs;
  for (int c = 0; c < 3; ++c)
    for (int r = 0; r < 3; ++r) vs(r, c) = v(r, order[c]);
  w = {vals[order[0]], vals[order[1]], vals[order[2]]};
  v = vs;
}

}  // namespace

Svd3 svd3(const Mat3& a) {
  if (a.det() <= kSingularTol)
    throw std::invalid_argument("3D decomposition requires det(A) > 0");
  Svd3 out;
  Vec3 w;
  Mat3 v;
  sym_eig3(a.transposed() * a, w, v);
  out.s = {std::sqrt(std::max(w.x, 0.0)), std::sqrt(std::max(w.y, 0.0)),
           std::sqrt(std::max(w.z, 0.0))};
  // Make V proper.
  if (v.det() < 0)
    for (int r = 0; r < 3; ++r) v(r, 2) = -v(r, 2);
  Mat3 u = a * v;  // columns scale to sigma_i * u_i
  const double s[3] = {out.s.x, out.s.y, out.s.z};
  for (int c = 0; c < 3; ++c)
    for (int r = 0; r < 3; ++r) u(r, c) /= s[c];
  // Orthonormalize U against accumulated rounding (modified Gram-Schmidt);
  // det(A) > 0 and det(V) = +1 imply det(U) = +1.
  for (int c = 0; c < 3; ++c) {
    for (int p = 0; p < c; ++p) {
      double dot = 0;
      for (int r = 0; r < 3; ++r) dot += u(r, c) * u(r, p);
      for (int r = 0; r < 3; ++r) u(r, c) -= dot * u(r, p);
    }
    double norm = 0;
    for (int r = 0; r < 3; ++r) norm += u(r, c) * u(r, c);
    norm = std::sqrt(norm);
    for (int r = 0; r < 3; ++r) u(r, c) /= norm;
  }
  out.U = u;
  out.V = v;
  return out;
}

}  // namespace subpix
