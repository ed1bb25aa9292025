#include "subpix/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subpix {

namespace {

void check_n(int n) {
  if (n < 2) throw std::invalid_argument("image side must be at least 2");
}

}  // namespace

BinaryImage2D::BinaryImage2D(int n) : n_(n) {
  check_n(n);
  data_.assign(static_cast<std::size_t>(n) * n, 0);
}

GrayImage2D::GrayImage2D(int n) : n_(n) {
  check_n(n);
  data_.assign(static_cast<std::size_t>(n) * n, 0.0);
}

void GrayImage2D::set(int i, int j, double value) {
  if (value < 0.0 || value > 1.0)
    throw std::invalid_argument("gray value outside [0, 1]");
  data_[idx(i, j)] = value;
}

BinaryImage3D::BinaryImage3D(int n) : n_(n) {
  check_n(n);
  data_.assign(static_cast<std::size_t>(n) * n * n, 0);
}

long long perimeter_binary_2d(const BinaryImage2D& m) {
  const int n = m.n();
  long long count = 0;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (i == 1 || i == n || j == 1 || j == n) {
        ++count;
        continue;
      }
      const std::uint8_t v = m.v(i, j);
      bool boundary = false;
      for (int di = -1; di <= 1 && !boundary; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          if (m.v(i + di, j + dj) != v) {
            boundary = true;
            break;
          }
        }
      if (boundary) ++count;
    }
  }
  return count;
}

long long perimeter_binary_3d(const BinaryImage3D& m) {
  const int n = m.n();
  long long count = 0;
  for (int k = 1; k <= n; ++k)
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        if (i == 1 || i == n || j == 1 || j == n || k == 1 || k == n) {
          ++count;
          continue;
        }
        const std::uint8_t v = m.v(i, j, k);
        bool boundary = false;
        for (int dk = -1; dk <= 1 && !boundary; ++dk)
          for (int di = -1; di <= 1 && !boundary; ++di)
            for (int dj = -1; dj <= 1; ++dj) {
              if (di == 0 && dj == 0 && dk == 0) continue;
              if (m.v(i + di, j + dj, k + dk) != v) {
                boundary = true;
                break;
              }
            }
        if (boundary) ++count;
      }
  return count;
}

double gradient(const GrayImage2D& m, int i, int j) {
  if (!m.in_range(i, j)) throw std::out_of_range("pixel outside image");
  const int n = m.n();
  const double v = m.v(i, j);
  double g = 0.0;
  for (int di = -1; di <= 1; ++di)
    for (int dj = -1; dj <= 1; ++dj) {
      if (di == 0 && dj == 0) continue;
      const int ni = i + di, nj = j + dj;
      if (ni < 1 || ni > n || nj < 1 || nj > n) continue;
      g = std::max(g, std::abs(v - m.v(ni, nj)));
    }
  return g;
}

double perimeter_gray(const GrayImage2D& m) {
  const int n = m.n();
  double total = 0.0;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (i == 1 || i == n || j == 1 || j == n)
        total += 1.0;
      else
        total += gradient(m, i, j);
    }
  return total;
}

bool is_smooth(const BinaryImage2D& m, double c) {
  return static_cast<double>(perimeter_binary_2d(m)) <= c * m.n();
}

bool is_smooth(const GrayImage2D& m, double c) {
  return perimeter_gray(m) <= c * m.n();
}

}  // namespace subpix
