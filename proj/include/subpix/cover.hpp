#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "subpix/errors.hpp"
#include "subpix/transform.hpp"

namespace subpix {

constexpr std::uint64_t kDefaultMemberCap = 100'000'000ull;  // 1e8

// Radius delta_prime * n is the guarantee the cover offers callers; the
// per-primitive grid step uses delta = delta_prime / (c + 3) because the
// rotation-scale-rotation-translation error chain multiplies intermediate
// snap errors by at most c once and adds one delta*n term per stage.
//
// nested_grids rounds every grid cardinality up to a power of two. Grids
// then only get finer, and halving delta_prime produces exact supersets of
// the points, which makes exhaustive-search results monotone under
// refinement. The default ceil-based cardinality is smaller.
struct CoverParams {
  int n = 0;
  double delta_prime = 0.0;
  double c = kDefaultScaleBound;
  bool nested_grids = false;

  double delta() const { return delta_prime / (c + 3.0); }
  void validate() const;
};

// Restriction of the transformation family the grids span. Degenerate axes
// hold the single value of the identity. kIdentity keeps every planar axis
// degenerate (useful when only the non-planar parameters are searched).
enum class Family2D { kIdentity, kTranslation, kAffine };

const char* family_name(Family2D f);
Family2D family_from_name(const std::string& name);

// Uniform 1D grid. Linear grids include both range endpoints (cardinality
// ceil(range/step) + 1, minimum 2; a zero-length range collapses to one
// point). Circular grids cover a full period with ceil(period/step) points
// starting at 0; index distance wraps. With nested, the cell count is
// rounded up to a power of two (see CoverParams::nested_grids).
struct Grid {
  double lo = 0.0;
  double spacing = 0.0;
  int count = 1;
  bool circular = false;
  double period = 0.0;

  static Grid linear(double lo, double hi, double max_step, bool nested = false);
  static Grid circle(double period, double max_step, bool nested = false);

  double at(int i) const { return lo + spacing * i; }
  int snap_index(double v) const;
};

struct CoverMember2D {
  std::uint64_t index = 0;
  AffineMap2D map;
  Decomposition2D decomposition;
};

// Lazy product of six grids in axis order (theta1, sx, sy, theta2, tx, ty);
// member index is the row-major mixed-radix code with theta1 slowest.
// Deterministic and pure: member(i) depends only on the params.
class Cover2D {
 public:
  Cover2D(const CoverParams& params, Family2D family);

  const CoverParams& params() const { return params_; }
  Family2D family() const { return family_; }
  std::uint64_t size() const { return size_; }
  const Grid& grid(int axis) const { return grids_[axis]; }  // axis 0..5

  CoverMember2D member(std::uint64_t index) const;

  // Cover-property witness: decomposes the query, snaps every parameter to
  // its grid, recomposes. For any map within the family the witness lies
  // within delta_prime * n in linf_distance (the acceptance certificate
  // measures the true distance of the returned member).
  CoverMember2D snap(const AffineMap2D& query) const;

  // Exact argmin of linf_distance over all members; ties break to the lowest
  // index. Enumerates every member, so the size must not exceed work_cap.
  CoverMember2D nearest_member(const AffineMap2D& query,
                               std::uint64_t work_cap = kDefaultMemberCap) const;

  // All members, in index order. Throws CapacityError beyond member_cap.
  std::vector<CoverMember2D> materialize(std::uint64_t member_cap = kDefaultMemberCap) const;

 private:
  CoverParams params_;
  Family2D family_;
  Grid grids_[6];
  std::uint64_t size_ = 0;
};

Cover2D build_cover_2d(const CoverParams& params, Family2D family = Family2D::kAffine);

struct CoverMember3DRestricted {
  std::uint64_t index = 0;
  RestrictedMap3D map;
};

// Planar cover x zscale grid x zshift grid, planar axis slowest. Members
// double as grayscale candidates: con = zscale, bri = zshift / n.
class Cover3DRestricted {
 public:
  Cover3DRestricted(const CoverParams& params, Family2D planar_family);

  const CoverParams& params() const { return params_; }
  const Cover2D& planar() const { return planar_; }
  const Grid& zscale_grid() const { return zscale_; }
  const Grid& zshift_grid() const { return zshift_; }
  std::uint64_t size() const { return size_; }

  CoverMember3DRestricted member(std::uint64_t index) const;
  CoverMember3DRestricted snap(const RestrictedMap3D& query) const;

 private:
  CoverParams params_;
  Cover2D planar_;
  Grid zscale_, zshift_;
  std::uint64_t size_ = 0;
};

Cover3DRestricted build_cover_3d_restricted(const CoverParams& params,
                                            Family2D planar_family = Family2D::kAffine);

struct CoverMember3D {
  std::uint64_t index = 0;
  AffineMap3D map;
};

enum class Family3D { kTranslation, kAffine };

// Twelve grids in order (alpha2, beta2, gamma2, sx, sy, sz, alpha1, beta1,
// gamma1, tx, ty, tz): A = R(alpha2,beta2,gamma2) diag(s) R(alpha1,beta1,gamma1).
class Cover3DFull {
 public:
  Cover3DFull(const CoverParams& params, Family3D family);

  const CoverParams& params() const { return params_; }
  Family3D family() const { return family_; }
  std::uint64_t size() const { return size_; }
  const Grid& grid(int axis) const { return grids_[axis]; }  // axis 0..11

  CoverMember3D member(std::uint64_t index) const;
  CoverMember3D snap(const AffineMap3D& query) const;

 private:
  CoverParams params_;
  Family3D family_;
  Grid grids_[12];
  std::uint64_t size_ = 0;
};

Cover3DFull build_cover_3d_full(const CoverParams& params,
                                Family3D family = Family3D::kAffine);

}  // namespace subpix
