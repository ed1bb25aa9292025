#pragma once

#include <iosfwd>
#include <string>

#include "subpix/errors.hpp"
#include "subpix/image.hpp"
#include "subpix/transform.hpp"

namespace subpix {

// Largest accepted pixel/voxel count when reading image headers.
constexpr long long kMaxImageCells = 1'000'000'000;

// PBM, plain (P1) or packed (P4). Only square images of side >= 2 are
// accepted; the stored bit is the image value (1 = foreground).
BinaryImage2D read_pbm(std::istream& in);
BinaryImage2D read_pbm_file(const std::string& path);
void write_pbm(std::ostream& out, const BinaryImage2D& img, bool binary = true);
void write_pbm_file(const std::string& path, const BinaryImage2D& img, bool binary = true);

// PGM, plain (P2) or raw (P5); sample / maxval gives the value in [0, 1].
// maxval up to 65535; raw samples are two-byte big-endian above 255.
GrayImage2D read_pgm(std::istream& in);
GrayImage2D read_pgm_file(const std::string& path);
void write_pgm(std::ostream& out, const GrayImage2D& img, int maxval = 255,
               bool binary = true);
void write_pgm_file(const std::string& path, const GrayImage2D& img, int maxval = 255,
                    bool binary = true);

// Volume text format:
//   VOX3
//   <n>
//   then n slices (k = 1..n), each n rows of n characters '0'/'1',
//   consecutive slices separated by one blank line.
// Reading tolerates extra blank lines; writing emits the canonical form and
// read(write(v)) reproduces v bit for bit.
BinaryImage3D read_vox3(std::istream& in);
BinaryImage3D read_vox3_file(const std::string& path);
void write_vox3(std::ostream& out, const BinaryImage3D& vol);
void write_vox3_file(const std::string& path, const BinaryImage3D& vol);

// Transform descriptor. Line oriented, '#' starts a comment:
//   A <4 or 9 reals, row-major>
//   t <2 or 3 reals>
//   con <real>        (optional, with bri: an intensity map)
//   bri <real>
// Reals are written with 17 significant digits and round-trip exactly.
struct TransformFile {
  int dims = 2;  // 2 or 3
  AffineMap2D map2;
  AffineMap3D map3;
  bool has_intensity = false;
  IntensityMap intensity;
};

TransformFile read_tfm(std::istream& in);
TransformFile read_tfm_file(const std::string& path);
void write_tfm(std::ostream& out, const TransformFile& tf);
void write_tfm_file(const std::string& path, const TransformFile& tf);

// 17 significant digits, shortest form; round-trips any finite double.
std::string format_real(double v);

}  // namespace subpix
