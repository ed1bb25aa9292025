#include "subpix/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace subpix {
namespace {

// Skips whitespace and '#' comments, returns the next whitespace-delimited
// token. Shared by the PNM header and plain-sample parsers.
std::string next_token(std::istream& in, const char* what) {
  int ch;
  for (;;) {
    ch = in.get();
    if (ch == EOF) throw FormatError(std::string(what) + ": unexpected end of file");
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (!std::isspace(ch)) break;
  }
  std::string tok;
  tok.push_back(static_cast<char>(ch));
  while ((ch = in.get()) != EOF && !std::isspace(ch) && ch != '#') {
    tok.push_back(static_cast<char>(ch));
  }
  // leave the delimiter in the stream: binary rasters start right after one
  // whitespace character, which expect_raster_separator consumes itself
  if (ch != EOF) in.unget();
  return tok;
}

long long parse_ll(const std::string& tok, const char* what) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    throw FormatError(std::string(what) + ": expected an integer, got '" + tok + "'");
  }
  if (pos != tok.size()) {
    throw FormatError(std::string(what) + ": expected an integer, got '" + tok + "'");
  }
  return v;
}

double parse_real(const std::string& tok, const char* what) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end != begin + tok.size() || tok.empty() || !std::isfinite(v)) {
    throw FormatError(std::string(what) + ": expected a real number, got '" + tok + "'");
  }
  return v;
}

int read_square_side(std::istream& in, const char* what) {
  long long w = parse_ll(next_token(in, what), what);
  long long h = parse_ll(next_token(in, what), what);
  if (w != h) throw FormatError(std::string(what) + ": image must be square");
  if (w < 2) throw FormatError(std::string(what) + ": side must be at least 2");
  if (w * w > kMaxImageCells) throw CapacityError(std::string(what) + ": image too large");
  return static_cast<int>(w);
}

// A pixel character for the plain bitmap format: single digits, whitespace
// optional between them.
int next_bit_char(std::istream& in, const char* what) {
  int ch;
  for (;;) {
    ch = in.get();
    if (ch == EOF) throw FormatError(std::string(what) + ": unexpected end of file");
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) continue;
    return ch;
  }
}

void expect_raster_separator(std::istream& in, const char* what) {
  int ch = in.get();
  if (ch == EOF || !std::isspace(ch)) {
    throw FormatError(std::string(what) + ": missing raster separator");
  }
}

std::ifstream open_input(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FileOpenError("cannot open " + path);
  return f;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FileOpenError("cannot open " + path + " for writing");
  return f;
}

void finish_output(std::ofstream& f, const std::string& path) {
  f.flush();
  if (!f) throw FileOpenError("write failed for " + path);
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// --- PBM ---

BinaryImage2D read_pbm(std::istream& in) {
  std::string magic = next_token(in, "pbm");
  if (magic != "P1" && magic != "P4") throw FormatError("pbm: bad magic '" + magic + "'");
  int n = read_square_side(in, "pbm");
  BinaryImage2D img(n);
  if (magic == "P1") {
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) {
        int ch = next_bit_char(in, "pbm");
        if (ch != '0' && ch != '1') throw FormatError("pbm: pixel must be 0 or 1");
        img.set(i, j, ch == '1');
      }
    }
    return img;
  }
  expect_raster_separator(in, "pbm");
  const int row_bytes = (n + 7) / 8;
  std::vector<char> row(row_bytes);
  for (int i = 1; i <= n; ++i) {
    in.read(row.data(), row_bytes);
    if (in.gcount() != row_bytes) throw FormatError("pbm: truncated raster");
    for (int j = 1; j <= n; ++j) {
      const auto byte = static_cast<unsigned char>(row[(j - 1) / 8]);
      img.set(i, j, (byte >> (7 - (j - 1) % 8)) & 1);
    }
  }
  return img;
}

void write_pbm(std::ostream& out, const BinaryImage2D& img, bool binary) {
  const int n = img.n();
  out << (binary ? "P4" : "P1") << "\n" << n << " " << n << "\n";
  if (!binary) {
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) out.put(img.v(i, j) ? '1' : '0');
      out.put('\n');
    }
    return;
  }
  const int row_bytes = (n + 7) / 8;
  std::vector<char> row(row_bytes);
  for (int i = 1; i <= n; ++i) {
    std::fill(row.begin(), row.end(), 0);
    for (int j = 1; j <= n; ++j) {
      if (img.v(i, j)) row[(j - 1) / 8] |= static_cast<char>(1 << (7 - (j - 1) % 8));
    }
    out.write(row.data(), row_bytes);
  }
}

BinaryImage2D read_pbm_file(const std::string& path) {
  auto f = open_input(path);
  return read_pbm(f);
}

void write_pbm_file(const std::string& path, const BinaryImage2D& img, bool binary) {
  auto f = open_output(path);
  write_pbm(f, img, binary);
  finish_output(f, path);
}

// --- PGM ---

GrayImage2D read_pgm(std::istream& in) {
  std::string magic = next_token(in, "pgm");
  if (magic != "P2" && magic != "P5") throw FormatError("pgm: bad magic '" + magic + "'");
  int n = read_square_side(in, "pgm");
  long long maxval = parse_ll(next_token(in, "pgm"), "pgm");
  if (maxval < 1 || maxval > 65535) throw FormatError("pgm: maxval out of range");
  GrayImage2D img(n);
  if (magic == "P2") {
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) {
        long long s = parse_ll(next_token(in, "pgm"), "pgm");
        if (s < 0 || s > maxval) throw FormatError("pgm: sample out of range");
        img.set(i, j, static_cast<double>(s) / static_cast<double>(maxval));
      }
    }
    return img;
  }
  expect_raster_separator(in, "pgm");
  const int bytes = maxval > 255 ? 2 : 1;
  std::vector<char> row(static_cast<std::size_t>(n) * bytes);
  for (int i = 1; i <= n; ++i) {
    in.read(row.data(), static_cast<std::streamsize>(row.size()));
    if (in.gcount() != static_cast<std::streamsize>(row.size())) {
      throw FormatError("pgm: truncated raster");
    }
    for (int j = 1; j <= n; ++j) {
      long long s;
      if (bytes == 1) {
        s = static_cast<unsigned char>(row[j - 1]);
      } else {
        s = static_cast<unsigned char>(row[2 * (j - 1)]) * 256 +
            static_cast<unsigned char>(row[2 * (j - 1) + 1]);
      }
      if (s > maxval) throw FormatError("pgm: sample out of range");
      img.set(i, j, static_cast<double>(s) / static_cast<double>(maxval));
    }
  }
  return img;
}

void write_pgm(std::ostream& out, const GrayImage2D& img, int maxval, bool binary) {
  if (maxval < 1 || maxval > 65535) throw std::invalid_argument("pgm: maxval out of range");
  const int n = img.n();
  out << (binary ? "P5" : "P2") << "\n" << n << " " << n << "\n" << maxval << "\n";
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      auto s = static_cast<long long>(std::llround(img.v(i, j) * maxval));
      if (s < 0) s = 0;
      if (s > maxval) s = maxval;
      if (!binary) {
        out << s << (j == n ? '\n' : ' ');
      } else if (maxval > 255) {
        out.put(static_cast<char>(s / 256));
        out.put(static_cast<char>(s % 256));
      } else {
        out.put(static_cast<char>(s));
      }
    }
  }
}

GrayImage2D read_pgm_file(const std::string& path) {
  auto f = open_input(path);
  return read_pgm(f);
}

void write_pgm_file(const std::string& path, const GrayImage2D& img, int maxval, bool binary) {
  auto f = open_output(path);
  write_pgm(f, img, maxval, binary);
  finish_output(f, path);
}

// --- VOX3 ---

namespace {

std::string read_trimmed_line(std::istream& in, bool* eof = nullptr) {
  std::string line;
  if (!std::getline(in, line)) {
    if (eof) {
      *eof = true;
      return line;
    }
    throw FormatError("vox3: unexpected end of file");
  }
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
    line.pop_back();
  }
  return line;
}

}  // namespace

BinaryImage3D read_vox3(std::istream& in) {
  if (read_trimmed_line(in) != "VOX3") throw FormatError("vox3: bad magic");
  long long side = parse_ll(read_trimmed_line(in), "vox3");
  if (side < 2) throw FormatError("vox3: side must be at least 2");
  if (side * side * side > kMaxImageCells) throw CapacityError("vox3: volume too large");
  const int n = static_cast<int>(side);
  BinaryImage3D vol(n);
  int k = 1, i = 1;
  while (k <= n) {
    bool eof = false;
    std::string line = read_trimmed_line(in, &eof);
    if (eof) throw FormatError("vox3: truncated volume");
    if (line.empty()) continue;  // slice separators, leniently anywhere
    if (static_cast<int>(line.size()) != n) throw FormatError("vox3: bad row length");
    for (int j = 1; j <= n; ++j) {
      char ch = line[j - 1];
      if (ch != '0' && ch != '1') throw FormatError("vox3: voxel must be 0 or 1");
      vol.set(i, j, k, ch == '1');
    }
    if (++i > n) {
      i = 1;
      ++k;
    }
  }
  return vol;
}

void write_vox3(std::ostream& out, const BinaryImage3D& vol) {
  const int n = vol.n();
  out << "VOX3\n" << n << "\n";
  for (int k = 1; k <= n; ++k) {
    if (k > 1) out.put('\n');
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) out.put(vol.v(i, j, k) ? '1' : '0');
      out.put('\n');
    }
  }
}

BinaryImage3D read_vox3_file(const std::string& path) {
  auto f = open_input(path);
  return read_vox3(f);
}

void write_vox3_file(const std::string& path, const BinaryImage3D& vol) {
  auto f = open_output(path);
  write_vox3(f, vol);
  finish_output(f, path);
}

// --- transform descriptor ---

TransformFile read_tfm(std::istream& in) {
  TransformFile tf;
  bool saw_a = false, saw_t = false, saw_con = false, saw_bri = false;
  std::vector<double> a_vals, t_vals;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    std::vector<double> vals;
    std::string tok;
    while (ls >> tok) vals.push_back(parse_real(tok, "tfm"));
    if (key == "A") {
      if (saw_a) throw FormatError("tfm: duplicate A");
      if (vals.size() != 4 && vals.size() != 9) {
        throw FormatError("tfm: A needs 4 or 9 values");
      }
      saw_a = true;
      a_vals = vals;
    } else if (key == "t") {
      if (saw_t) throw FormatError("tfm: duplicate t");
      if (vals.size() != 2 && vals.size() != 3) {
        throw FormatError("tfm: t needs 2 or 3 values");
      }
      saw_t = true;
      t_vals = vals;
    } else if (key == "con") {
      if (saw_con || vals.size() != 1) throw FormatError("tfm: bad con line");
      saw_con = true;
      tf.intensity.con = vals[0];
    } else if (key == "bri") {
      if (saw_bri || vals.size() != 1) throw FormatError("tfm: bad bri line");
      saw_bri = true;
      tf.intensity.bri = vals[0];
    } else {
      throw FormatError("tfm: unknown keyword '" + key + "'");
    }
  }
  if (!saw_a || !saw_t) throw FormatError("tfm: missing A or t");
  tf.has_intensity = saw_con || saw_bri;
  if (a_vals.size() == 4) {
    if (t_vals.size() != 2) throw FormatError("tfm: dimension mismatch between A and t");
    tf.dims = 2;
    tf.map2.A = Mat2{{a_vals[0], a_vals[1], a_vals[2], a_vals[3]}};
    tf.map2.t = Vec2{t_vals[0], t_vals[1]};
  } else {
    if (t_vals.size() != 3) throw FormatError("tfm: dimension mismatch between A and t");
    tf.dims = 3;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) tf.map3.A(r, c) = a_vals[3 * r + c];
    tf.map3.t = Vec3{t_vals[0], t_vals[1], t_vals[2]};
  }
  return tf;
}

void write_tfm(std::ostream& out, const TransformFile& tf) {
  out << "A";
  if (tf.dims == 2) {
    for (double v : tf.map2.A.m) out << " " << format_real(v);
    out << "\nt " << format_real(tf.map2.t.x) << " " << format_real(tf.map2.t.y) << "\n";
  } else if (tf.dims == 3) {
    for (double v : tf.map3.A.m) out << " " << format_real(v);
    out << "\nt " << format_real(tf.map3.t.x) << " " << format_real(tf.map3.t.y) << " "
        << format_real(tf.map3.t.z) << "\n";
  } else {
    throw std::invalid_argument("tfm: dims must be 2 or 3");
  }
  if (tf.has_intensity) {
    out << "con " << format_real(tf.intensity.con) << "\n";
    out << "bri " << format_real(tf.intensity.bri) << "\n";
  }
}

TransformFile read_tfm_file(const std::string& path) {
  auto f = open_input(path);
  return read_tfm(f);
}

void write_tfm_file(const std::string& path, const TransformFile& tf) {
  auto f = open_output(path);
  write_tfm(f, tf);
  finish_output(f, path);
}

}  // namespace subpix
