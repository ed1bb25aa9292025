#include "subpix/cover.hpp"

#include <cmath>
#include <limits>

namespace subpix {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (b != 0 && a > std::numeric_limits<std::uint64_t>::max() / b) {
    throw CapacityError("cover cardinality overflows 64-bit index space");
  }
  return a * b;
}

Grid singleton(double v) { return Grid::linear(v, v, 1.0); }

}  // namespace

void CoverParams::validate() const {
  if (n < 2) throw std::invalid_argument("cover: n must be at least 2");
  if (!(delta_prime > 0.0)) throw std::invalid_argument("cover: radius must be positive");
  if (!(c >= 1.0)) throw std::invalid_argument("cover: scaling bound must be >= 1");
}

const char* family_name(Family2D f) {
  switch (f) {
    case Family2D::kIdentity: return "identity";
    case Family2D::kTranslation: return "translation";
    case Family2D::kAffine: return "affine";
  }
  return "affine";
}

Family2D family_from_name(const std::string& name) {
  if (name == "identity") return Family2D::kIdentity;
  if (name == "translation") return Family2D::kTranslation;
  if (name == "affine") return Family2D::kAffine;
  throw std::invalid_argument("unknown family: " + name);
}

namespace {

// Cell count for a range: at least one cell, optionally rounded up to a
// power of two so halving the step exactly doubles the count and the finer
// grid contains every point of the coarser one.
long long cell_count(double range, double max_step, bool nested) {
  double cells = std::ceil(range / max_step);
  if (cells < 1.0) cells = 1.0;
  if (cells > 1e9) throw CapacityError("grid: cardinality too large");
  auto c = static_cast<long long>(cells);
  if (nested) {
    long long p = 1;
    while (p < c) p *= 2;
    c = p;
  }
  return c;
}

}  // namespace

Grid Grid::linear(double lo, double hi, double max_step, bool nested) {
  if (!(max_step > 0.0)) throw std::invalid_argument("grid: step must be positive");
  if (hi < lo) throw std::invalid_argument("grid: empty range");
  Grid g;
  g.lo = lo;
  if (hi == lo) {
    g.spacing = 0.0;
    g.count = 1;
    return g;
  }
  g.count = static_cast<int>(cell_count(hi - lo, max_step, nested)) + 1;
  g.spacing = (hi - lo) / (g.count - 1);
  return g;
}

Grid Grid::circle(double period, double max_step, bool nested) {
  if (!(max_step > 0.0)) throw std::invalid_argument("grid: step must be positive");
  if (!(period > 0.0)) throw std::invalid_argument("grid: period must be positive");
  Grid g;
  g.circular = true;
  g.period = period;
  g.count = static_cast<int>(cell_count(period, max_step, nested));
  g.spacing = period / g.count;
  return g;
}

int Grid::snap_index(double v) const {
  if (count == 1) return 0;
  if (circular) {
    double w = std::fmod(v, period);
    if (w < 0.0) w += period;
    auto k = static_cast<long long>(std::llround(w / spacing)) % count;
    return static_cast<int>(k);
  }
  auto k = std::llround((v - lo) / spacing);
  if (k < 0) k = 0;
  if (k >= count) k = count - 1;
  return static_cast<int>(k);
}

// --- planar cover ---

Cover2D::Cover2D(const CoverParams& params, Family2D family)
    : params_(params), family_(family) {
  params_.validate();
  const double d = params_.delta();
  const double n = params_.n;
  const double c = params_.c;
  // Rotation and scale steps d/sqrt(2): each stage of the
  // rotation-scale-rotation factorization moves a domain point (lever arm
  // at most sqrt(2)*(n+1)) by at most step/2 * arm, and the downstream
  // scale stage amplifies by at most c. Translation step sqrt(2)*d*n keeps
  // the final additive snap within the same budget. Summed, the witness
  // stays within (c+3)*d*n = radius*n of the query for n >= 2.
  const double angle_step = d / std::sqrt(2.0);
  const double scale_step = d / std::sqrt(2.0);
  const double shift_step = std::sqrt(2.0) * d * n;
  const bool nest = params_.nested_grids;
  switch (family_) {
    case Family2D::kAffine:
      grids_[0] = Grid::circle(kTwoPi, angle_step, nest);
      grids_[1] = Grid::linear(1.0 / c, c, scale_step, nest);
      grids_[2] = Grid::linear(1.0 / c, c, scale_step, nest);
      grids_[3] = Grid::circle(kTwoPi, angle_step, nest);
      // Any map whose image footprint still meets the n x n frame has its
      // shift inside this window: |A p|_2 <= c*sqrt(2)*(n+1) <= 2.13*c*n
      // for n >= 2, padded to 2.75 for slack.
      grids_[4] = Grid::linear(-2.75 * c * n, n + 2.75 * c * n, shift_step, nest);
      grids_[5] = grids_[4];
      break;
    case Family2D::kTranslation:
      grids_[0] = singleton(0.0);
      grids_[1] = singleton(1.0);
      grids_[2] = singleton(1.0);
      grids_[3] = singleton(0.0);
      grids_[4] = Grid::linear(-n, n, shift_step, nest);
      grids_[5] = grids_[4];
      break;
    case Family2D::kIdentity:
      grids_[0] = singleton(0.0);
      grids_[1] = singleton(1.0);
      grids_[2] = singleton(1.0);
      grids_[3] = singleton(0.0);
      grids_[4] = singleton(0.0);
      grids_[5] = singleton(0.0);
      break;
  }
  size_ = 1;
  for (const Grid& g : grids_) size_ = checked_mul(size_, static_cast<std::uint64_t>(g.count));
}

CoverMember2D Cover2D::member(std::uint64_t index) const {
  if (index >= size_) throw std::out_of_range("cover: member index out of range");
  int idx[6];
  std::uint64_t rem = index;
  for (int axis = 5; axis >= 0; --axis) {
    auto cnt = static_cast<std::uint64_t>(grids_[axis].count);
    idx[axis] = static_cast<int>(rem % cnt);
    rem /= cnt;
  }
  CoverMember2D m;
  m.index = index;
  m.decomposition.theta1 = grids_[0].at(idx[0]);
  m.decomposition.sx = grids_[1].at(idx[1]);
  m.decomposition.sy = grids_[2].at(idx[2]);
  m.decomposition.theta2 = grids_[3].at(idx[3]);
  m.decomposition.tx = grids_[4].at(idx[4]);
  m.decomposition.ty = grids_[5].at(idx[5]);
  m.map = compose_decomposition(m.decomposition, params_.c);
  return m;
}

CoverMember2D Cover2D::snap(const AffineMap2D& query) const {
  Decomposition2D d = decompose(query);
  std::uint64_t index = 0;
  const double vals[6] = {d.theta1, d.sx, d.sy, d.theta2, d.tx, d.ty};
  for (int axis = 0; axis < 6; ++axis) {
    index = index * static_cast<std::uint64_t>(grids_[axis].count) +
            static_cast<std::uint64_t>(grids_[axis].snap_index(vals[axis]));
  }
  return member(index);
}

CoverMember2D Cover2D::nearest_member(const AffineMap2D& query, std::uint64_t work_cap) const {
  if (size_ > work_cap) throw CapacityError("cover: too many members to enumerate");
  CoverMember2D best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::uint64_t i = 0; i < size_; ++i) {
    CoverMember2D m = member(i);
    double dist = linf_distance(query, m.map, params_.n);
    if (dist < best_dist) {
      best_dist = dist;
      best = m;
    }
  }
  return best;
}

std::vector<CoverMember2D> Cover2D::materialize(std::uint64_t member_cap) const {
  if (size_ > member_cap) throw CapacityError("cover: too many members to materialize");
  std::vector<CoverMember2D> out;
  out.reserve(static_cast<std::size_t>(size_));
  for (std::uint64_t i = 0; i < size_; ++i) out.push_back(member(i));
  return out;
}

Cover2D build_cover_2d(const CoverParams& params, Family2D family) {
  return Cover2D(params, family);
}

// --- planar x depth cover ---

Cover3DRestricted::Cover3DRestricted(const CoverParams& params, Family2D planar_family)
    : params_(params), planar_(params, planar_family) {
  const double d = params_.delta();
  const double n = params_.n;
  const double c = params_.c;
  // Two non-planar axes share the planar translation budget: steps d/sqrt(2)
  // (scale, lever arm n) and d*n/sqrt(2) (shift) leave the combined vertical
  // snap error within d*n, inside the overall (c+3)*d*n allowance.
  zscale_ = Grid::linear(1.0 / c, c, d / std::sqrt(2.0), params_.nested_grids);
  zshift_ = Grid::linear(-c * n, n, d * n / std::sqrt(2.0), params_.nested_grids);
  size_ = checked_mul(planar_.size(),
                      checked_mul(static_cast<std::uint64_t>(zscale_.count),
                                  static_cast<std::uint64_t>(zshift_.count)));
}

CoverMember3DRestricted Cover3DRestricted::member(std::uint64_t index) const {
  if (index >= size_) throw std::out_of_range("cover: member index out of range");
  auto nh = static_cast<std::uint64_t>(zshift_.count);
  auto ns = static_cast<std::uint64_t>(zscale_.count);
  int ih = static_cast<int>(index % nh);
  std::uint64_t rem = index / nh;
  int is = static_cast<int>(rem % ns);
  std::uint64_t planar_index = rem / ns;
  CoverMember3DRestricted m;
  m.index = index;
  m.map.planar = planar_.member(planar_index).map;
  m.map.zscale = zscale_.at(is);
  m.map.zshift = zshift_.at(ih);
  return m;
}

CoverMember3DRestricted Cover3DRestricted::snap(const RestrictedMap3D& query) const {
  CoverMember2D pm = planar_.snap(query.planar);
  auto is = static_cast<std::uint64_t>(zscale_.snap_index(query.zscale));
  auto ih = static_cast<std::uint64_t>(zshift_.snap_index(query.zshift));
  std::uint64_t index =
      (pm.index * static_cast<std::uint64_t>(zscale_.count) + is) *
          static_cast<std::uint64_t>(zshift_.count) +
      ih;
  return member(index);
}

Cover3DRestricted build_cover_3d_restricted(const CoverParams& params, Family2D planar_family) {
  return Cover3DRestricted(params, planar_family);
}

// --- full 3D cover ---

Cover3DFull::Cover3DFull(const CoverParams& params, Family3D family)
    : params_(params), family_(family) {
  params_.validate();
  const double d = params_.delta();
  const double n = params_.n;
  const double c = params_.c;
  // Three rotation angles per stage and a sqrt(3)*(n+1) lever arm: angle
  // steps d/(3*sqrt(3)), scale steps d/sqrt(3), shift steps d*n/sqrt(3)
  // keep the accumulated snap error within (c+3)*d*n.
  const double angle_step = d / (3.0 * std::sqrt(3.0));
  const double scale_step = d / std::sqrt(3.0);
  const double shift_step = d * n / std::sqrt(3.0);
  const bool nest = params_.nested_grids;
  if (family_ == Family3D::kAffine) {
    grids_[0] = Grid::circle(kTwoPi, angle_step, nest);
    grids_[1] = Grid::linear(0.0, kPi, angle_step, nest);
    grids_[2] = Grid::circle(kTwoPi, angle_step, nest);
    grids_[3] = Grid::linear(1.0 / c, c, scale_step, nest);
    grids_[4] = grids_[3];
    grids_[5] = grids_[3];
    grids_[6] = Grid::circle(kTwoPi, angle_step, nest);
    grids_[7] = Grid::linear(0.0, kPi, angle_step, nest);
    grids_[8] = Grid::circle(kTwoPi, angle_step, nest);
    // |A p|_2 <= c*sqrt(3)*(n+1) <= 2.6*c*n for n >= 2, padded to 3.4.
    grids_[9] = Grid::linear(-3.4 * c * n, n + 3.4 * c * n, shift_step, nest);
    grids_[10] = grids_[9];
    grids_[11] = grids_[9];
  } else {
    for (int axis = 0; axis < 3; ++axis) grids_[axis] = singleton(0.0);
    for (int axis = 3; axis < 6; ++axis) grids_[axis] = singleton(1.0);
    for (int axis = 6; axis < 9; ++axis) grids_[axis] = singleton(0.0);
    grids_[9] = Grid::linear(-n, n, shift_step, nest);
    grids_[10] = grids_[9];
    grids_[11] = grids_[9];
  }
  size_ = 1;
  for (const Grid& g : grids_) size_ = checked_mul(size_, static_cast<std::uint64_t>(g.count));
}

CoverMember3D Cover3DFull::member(std::uint64_t index) const {
  if (index >= size_) throw std::out_of_range("cover: member index out of range");
  int idx[12];
  std::uint64_t rem = index;
  for (int axis = 11; axis >= 0; --axis) {
    auto cnt = static_cast<std::uint64_t>(grids_[axis].count);
    idx[axis] = static_cast<int>(rem % cnt);
    rem /= cnt;
  }
  EulerZYZ left{grids_[0].at(idx[0]), grids_[1].at(idx[1]), grids_[2].at(idx[2])};
  Vec3 s{grids_[3].at(idx[3]), grids_[4].at(idx[4]), grids_[5].at(idx[5])};
  EulerZYZ right{grids_[6].at(idx[6]), grids_[7].at(idx[7]), grids_[8].at(idx[8])};
  CoverMember3D m;
  m.index = index;
  m.map.A = compose_euler_zyz(left) * Mat3::diag(s.x, s.y, s.z) * compose_euler_zyz(right);
  m.map.t = Vec3{grids_[9].at(idx[9]), grids_[10].at(idx[10]), grids_[11].at(idx[11])};
  return m;
}

CoverMember3D Cover3DFull::snap(const AffineMap3D& query) const {
  if (query.A.det() <= kSingularTol) {
    throw std::invalid_argument("cover: orientation-reversing or singular map");
  }
  Svd3 f = svd3(query.A);
  EulerZYZ left = euler_zyz_from_rotation(f.U);
  EulerZYZ right = euler_zyz_from_rotation(f.V.transposed());
  const double vals[12] = {left.alpha,  left.beta,  left.gamma, f.s.x,
                           f.s.y,       f.s.z,      right.alpha, right.beta,
                           right.gamma, query.t.x,  query.t.y,  query.t.z};
  std::uint64_t index = 0;
  for (int axis = 0; axis < 12; ++axis) {
    index = index * static_cast<std::uint64_t>(grids_[axis].count) +
            static_cast<std::uint64_t>(grids_[axis].snap_index(vals[axis]));
  }
  return member(index);
}

Cover3DFull build_cover_3d_full(const CoverParams& params, Family3D family) {
  return Cover3DFull(params, family);
}

}  // namespace subpix
