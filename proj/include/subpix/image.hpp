#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

namespace subpix {

// Images are square n x n grids (volumes n x n x n), n >= 2, indexed
// 1-based: (i, j) with i the row and j the column, both in {1, ..., n}.
// Pixel values are bits for the binary types and doubles in [0, 1] for the
// grayscale type. Storage is row-major (slice-major for volumes).

class BinaryImage2D {
 public:
  explicit BinaryImage2D(int n);

  int n() const { return n_; }
  std::uint8_t v(int i, int j) const { return data_[idx(i, j)]; }
  void set(int i, int j, std::uint8_t value) { data_[idx(i, j)] = value ? 1 : 0; }
  bool in_range(int i, int j) const {
    return i >= 1 && i <= n_ && j >= 1 && j <= n_;
  }
  const std::vector<std::uint8_t>& raw() const { return data_; }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i - 1) * n_ + (j - 1);
  }
  int n_;
  std::vector<std::uint8_t> data_;
};

class GrayImage2D {
 public:
  explicit GrayImage2D(int n);

  int n() const { return n_; }
  double v(int i, int j) const { return data_[idx(i, j)]; }
  void set(int i, int j, double value);
  bool in_range(int i, int j) const {
    return i >= 1 && i <= n_ && j >= 1 && j <= n_;
  }
  const std::vector<double>& raw() const { return data_; }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i - 1) * n_ + (j - 1);
  }
  int n_;
  std::vector<double> data_;
};

class BinaryImage3D {
 public:
  explicit BinaryImage3D(int n);

  int n() const { return n_; }
  std::uint8_t v(int i, int j, int k) const { return data_[idx(i, j, k)]; }
  void set(int i, int j, int k, std::uint8_t value) {
    data_[idx(i, j, k)] = value ? 1 : 0;
  }
  bool in_range(int i, int j, int k) const {
    return i >= 1 && i <= n_ && j >= 1 && j <= n_ && k >= 1 && k <= n_;
  }
  const std::vector<std::uint8_t>& raw() const { return data_; }

 private:
  std::size_t idx(int i, int j, int k) const {
    return (static_cast<std::size_t>(k - 1) * n_ + (i - 1)) * n_ + (j - 1);
  }
  int n_;
  std::vector<std::uint8_t> data_;
};

// Counting facade: every value read through it bumps the counter by exactly
// one; geometric queries (size, bounds checks) stay free. The counter is
// atomic so several workers may share one instance, though the matchers give
// each worker its own view and sum at the end, which is deterministic either
// way because totals do not depend on interleaving.
template <class Image>
class MeteredImage {
 public:
  explicit MeteredImage(const Image& image) : image_(image) {}

  const Image& inner() const { return image_; }
  int n() const { return image_.n(); }
  std::uint64_t reads() const { return reads_.load(std::memory_order_relaxed); }

  auto read(int i, int j) const {
    reads_.fetch_add(1, std::memory_order_relaxed);
    return image_.v(i, j);
  }
  auto read(int i, int j, int k) const {
    reads_.fetch_add(1, std::memory_order_relaxed);
    return image_.v(i, j, k);
  }

 private:
  const Image& image_;
  mutable std::atomic<std::uint64_t> reads_{0};
};

// Perimeter of a binary image: pixels with an 8-neighbor of differing value,
// united with the outermost frame (first/last row and column). Range
// [4n-4, n^2].
long long perimeter_binary_2d(const BinaryImage2D& m);

// 3D analogue: 26-neighborhood boundary voxels united with the outer shell
// of 6n^2-12n+8 voxels. Range [6n^2-12n+8, n^3].
long long perimeter_binary_3d(const BinaryImage3D& m);

// Largest absolute value difference to any 8-neighbor. Throws
// std::out_of_range for coordinates outside the grid.
double gradient(const GrayImage2D& m, int i, int j);

// Sum of gradients over all pixels, with every outermost pixel contributing
// exactly 1 instead of its gradient.
double perimeter_gray(const GrayImage2D& m);

bool is_smooth(const BinaryImage2D& m, double c);
bool is_smooth(const GrayImage2D& m, double c);

}  // namespace subpix
