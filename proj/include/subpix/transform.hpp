#pragma once

#include <optional>

#include "subpix/geometry.hpp"

namespace subpix {

constexpr double kDefaultScaleBound = 2.0;
constexpr double kSingularTol = 1e-12;

struct Pixel2 {
  int i = 0, j = 0;
  bool operator==(const Pixel2&) const = default;
};

struct Pixel3 {
  int i = 0, j = 0, k = 0;
  bool operator==(const Pixel3&) const = default;
};

// p -> A p + t acting on (i, j) as a column vector; the grid action floors
// both coordinates afterwards.
struct AffineMap2D {
  Mat2 A;
  Vec2 t;

  Vec2 map_point(Vec2 p) const { return A * p + t; }
  static AffineMap2D identity() { return {}; }
  static AffineMap2D translation(double ti, double tj) {
    return {Mat2::identity(), {ti, tj}};
  }
};

struct AffineMap3D {
  Mat3 A;
  Vec3 t;

  Vec3 map_point(Vec3 p) const { return A * p + t; }
  static AffineMap3D identity() { return {}; }
  static AffineMap3D translation(double ti, double tj, double tk) {
    return {Mat3::identity(), {ti, tj, tk}};
  }
};

// Rotation-scale-rotation-translation parameters:
//   A = R(theta2) * diag(sx, sy) * R(theta1),  t = (tx, ty),
// with R the counterclockwise rotation matrix.
struct Decomposition2D {
  double theta1 = 0.0;
  double sx = 1.0, sy = 1.0;
  double theta2 = 0.0;
  double tx = 0.0, ty = 0.0;
};

// Planar affine map plus an axis-aligned map of the third coordinate:
// (i, j, k) -> (planar(i, j), zscale * k + zshift), floored; the third
// coordinate is then truncated into {1, ..., n} rather than mapping out.
struct RestrictedMap3D {
  AffineMap2D planar;
  double zscale = 1.0;
  double zshift = 0.0;
};

// v -> clamp(con * v + bri, 0, 1) on pixel values.
struct IntensityMap {
  double con = 1.0;
  double bri = 0.0;
};

// Floor both mapped coordinates; empty when the target lies outside
// {1, ..., n}^2. Out-of-image is a value, not an error.
std::optional<Pixel2> apply_image_affine(const AffineMap2D& map, Pixel2 p, int n);
std::optional<Pixel3> apply_image_affine(const AffineMap3D& map, Pixel3 p, int n);

// Planar part may leave the image; the z part is truncated into range.
std::optional<Pixel3> apply_restricted_3d(const RestrictedMap3D& map, Pixel3 p, int n);

AffineMap3D embed_restricted(const RestrictedMap3D& map);

// Throws std::invalid_argument when a scale lies outside [1/c, c].
AffineMap2D compose_decomposition(const Decomposition2D& d,
                                  double c = kDefaultScaleBound);

// Canonical rotation-scale-rotation split via the SVD, singular values in
// descending order, both rotation factors proper (determinant +1), angles
// normalized to [0, 2pi). Throws std::invalid_argument for det(A) <= 0
// (orientation-reversing maps are out of scope) and for near-singular A.
Decomposition2D decompose(const AffineMap2D& map);

// Largest displacement between the two maps over the continuous image box
// [1, n+1]^d. The displacement norm is convex in p, so the maximum is
// attained at a corner; only the 4 (8) corners are evaluated.
double linf_distance(const AffineMap2D& a, const AffineMap2D& b, int n);
double linf_distance(const AffineMap3D& a, const AffineMap3D& b, int n);

// True iff both singular values lie in [1/c - tol, c + tol].
bool within_scaling_bound(const AffineMap2D& map, double c, double tol = 1e-9);
bool within_scaling_bound(const AffineMap3D& map, double c, double tol = 1e-9);

double apply_intensity(const IntensityMap& map, double v);

// Largest |L1(v) - L2(v)| over v in [0, 1]. Both maps are piecewise linear,
// so the maximum is attained at 0, 1, or a clamp breakpoint of either map.
double linf_intensity(const IntensityMap& a, const IntensityMap& b);

// Throws std::invalid_argument when con is outside [1/c, c] or bri outside
// [-c, 1].
void validate_intensity(const IntensityMap& map, double c = kDefaultScaleBound);

// --- 3D decomposition helpers (used by the cover construction) ---

// A = Rz(alpha) * Ry(beta) * Rz(gamma); alpha, gamma in [0, 2pi),
// beta in [0, pi].
struct EulerZYZ {
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
};

Mat3 compose_euler_zyz(const EulerZYZ& e);
EulerZYZ euler_zyz_from_rotation(const Mat3& r);

// A = U * diag(s) * V^T with s descending positive and U, V proper
// rotations; requires det(A) > 0. Throws std::invalid_argument otherwise.
struct Svd3 {
  Mat3 U;
  Vec3 s;
  Mat3 V;
};
Svd3 svd3(const Mat3& a);

// Singular values of a 2x2 matrix, descending.
void singular_values_2x2(const Mat2& a, double& smax, double& smin);

}  // namespace subpix
