// Python bindings for the core operations: images, distances, matchers,
// reduction, adversarial generators and file IO.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <stdexcept>
#include <utility>
#include <vector>

#include "subpix/adversarial.hpp"
#include "subpix/cover.hpp"
#include "subpix/image.hpp"
#include "subpix/io.hpp"
#include "subpix/matcher.hpp"
#include "subpix/reduction.hpp"
#include "subpix/transform.hpp"

namespace py = pybind11;
using namespace subpix;

namespace {

AffineMap2D make_map(const std::array<double, 4>& a, const std::pair<double, double>& t) {
  return {Mat2{{a[0], a[1], a[2], a[3]}}, Vec2{t.first, t.second}};
}

std::array<double, 4> map_a(const AffineMap2D& m) {
  return {m.A.m[0], m.A.m[1], m.A.m[2], m.A.m[3]};
}

std::pair<double, double> map_t(const AffineMap2D& m) { return {m.t.x, m.t.y}; }

py::dict stats_dict(const MatchStats& s) {
  py::dict d;
  d["candidates"] = s.candidates;
  d["repetitions"] = s.repetitions;
  d["samples_per_estimate"] = s.samples_per_estimate;
  d["reads_m1"] = s.reads_m1;
  d["reads_m2"] = s.reads_m2;
  d["queries"] = s.queries();
  return d;
}

py::dict map_dict(const AffineMap2D& m) {
  py::dict d;
  d["a"] = map_a(m);
  d["t"] = map_t(m);
  return d;
}

template <class Image, class Value>
Image image_from_values(int n, const std::vector<Value>& values) {
  if (values.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
    throw std::invalid_argument("values: expected n*n entries, row-major");
  Image img(n);
  std::size_t idx = 0;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) img.set(i, j, values[idx++]);
  return img;
}

}  // namespace

PYBIND11_MODULE(_subpix, m) {
  m.doc() = "Approximate image matching under affine transformations";

  py::class_<BinaryImage2D>(m, "BinaryImage2D")
      .def(py::init<int>(), py::arg("n"))
      .def(py::init([](int n, const std::vector<int>& values) {
             return image_from_values<BinaryImage2D, int>(n, values);
           }),
           py::arg("n"), py::arg("values"))
      .def_property_readonly("n", &BinaryImage2D::n)
      .def("get", [](const BinaryImage2D& s, int i, int j) { return s.v(i, j) != 0; },
           py::arg("i"), py::arg("j"))
      .def("set",
           [](BinaryImage2D& s, int i, int j, bool v) { s.set(i, j, v ? 1 : 0); },
           py::arg("i"), py::arg("j"), py::arg("value"))
      .def("values", [](const BinaryImage2D& s) {
        return std::vector<int>(s.raw().begin(), s.raw().end());
      });

  py::class_<GrayImage2D>(m, "GrayImage2D")
      .def(py::init<int>(), py::arg("n"))
      .def(py::init([](int n, const std::vector<double>& values) {
             return image_from_values<GrayImage2D, double>(n, values);
           }),
           py::arg("n"), py::arg("values"))
      .def_property_readonly("n", &GrayImage2D::n)
      .def("get", [](const GrayImage2D& s, int i, int j) { return s.v(i, j); }, py::arg("i"),
           py::arg("j"))
      .def("set", [](GrayImage2D& s, int i, int j, double v) { s.set(i, j, v); }, py::arg("i"),
           py::arg("j"), py::arg("value"))
      .def("values", [](const GrayImage2D& s) { return s.raw(); });

  py::class_<BinaryImage3D>(m, "BinaryImage3D")
      .def(py::init<int>(), py::arg("n"))
      .def_property_readonly("n", &BinaryImage3D::n)
      .def("get",
           [](const BinaryImage3D& s, int i, int j, int k) { return s.v(i, j, k) != 0; },
           py::arg("i"), py::arg("j"), py::arg("k"))
      .def("set",
           [](BinaryImage3D& s, int i, int j, int k, bool v) { s.set(i, j, k, v ? 1 : 0); },
           py::arg("i"), py::arg("j"), py::arg("k"), py::arg("value"))
      .def("values", [](const BinaryImage3D& s) {
        return std::vector<int>(s.raw().begin(), s.raw().end());
      });

  py::class_<AffineMap2D>(m, "AffineMap2D")
      .def(py::init([](const std::array<double, 4>& a, const std::pair<double, double>& t) {
             return make_map(a, t);
           }),
           py::arg("a"), py::arg("t"))
      .def_static("identity", &AffineMap2D::identity)
      .def_static("translation", &AffineMap2D::translation, py::arg("ti"), py::arg("tj"))
      .def_property_readonly("a", &map_a)
      .def_property_readonly("t", &map_t);

  py::class_<IntensityMap>(m, "IntensityMap")
      .def(py::init([](double con, double bri) { return IntensityMap{con, bri}; }),
           py::arg("con") = 1.0, py::arg("bri") = 0.0)
      .def_readwrite("con", &IntensityMap::con)
      .def_readwrite("bri", &IntensityMap::bri);

  // --- distances ---

  m.def("distance",
        [](const BinaryImage2D& a, const BinaryImage2D& b, const AffineMap2D& map) {
          return distance_under(a, b, map);
        },
        py::arg("m1"), py::arg("m2"), py::arg("map"));
  m.def("distance",
        [](const GrayImage2D& a, const GrayImage2D& b, const AffineMap2D& map) {
          return distance_under(a, b, map);
        },
        py::arg("m1"), py::arg("m2"), py::arg("map"));
  m.def("distance",
        [](const GrayImage2D& a, const GrayImage2D& b, const AffineMap2D& map,
           const IntensityMap& intensity) { return distance_under(a, b, map, intensity); },
        py::arg("m1"), py::arg("m2"), py::arg("map"), py::arg("intensity"));

  m.def("estimate_distance",
        [](const BinaryImage2D& a, const BinaryImage2D& b, const AffineMap2D& map,
           double epsilon, std::uint64_t key) {
          const MeteredImage<BinaryImage2D> w1(a), w2(b);
          return estimate_distance_single(w1, w2, map, epsilon, key);
        },
        py::arg("m1"), py::arg("m2"), py::arg("map"), py::arg("epsilon"), py::arg("key") = 0);

  m.def("samples_per_estimate", &samples_per_estimate, py::arg("epsilon"));
  m.def("median_repetitions", &median_repetitions, py::arg("candidate_count"));
  m.def("general_sample_count", &general_sample_count, py::arg("n"), py::arg("epsilon"));

  // --- matchers ---

  m.def("match_smooth",
        [](const BinaryImage2D& a, const BinaryImage2D& b, const std::string& family,
           double delta_prime, double epsilon, double c, std::uint64_t seed, bool nested,
           int workers) {
          const Cover2D cover(CoverParams{a.n(), delta_prime, c, nested},
                              family_from_name(family));
          EstimatorParams params;
          params.epsilon = epsilon;
          params.seed = seed;
          params.workers = workers;
          const MatchResult2D r = match_smooth(a, b, cover, params);
          py::dict d = map_dict(r.map);
          d["cover_index"] = r.cover_index;
          d["distance"] = r.distance;
          d["stats"] = stats_dict(r.stats);
          return d;
        },
        py::arg("m1"), py::arg("m2"), py::arg("family") = "affine", py::arg("delta_prime") = 0.5,
        py::arg("epsilon") = 0.1, py::arg("c") = 2.0, py::arg("seed") = 0,
        py::arg("nested") = false, py::arg("workers") = 1);

  m.def("match_general",
        [](const BinaryImage2D& a, const BinaryImage2D& b,
           const std::vector<AffineMap2D>& candidates, double epsilon, std::uint64_t seed,
           bool strict_objective, int workers) {
          GeneralParams params;
          params.epsilon = epsilon;
          params.seed = seed;
          params.strict_objective = strict_objective;
          params.workers = workers;
          const GeneralResult r = match_general(a, b, candidates, params);
          py::dict d = map_dict(r.map);
          d["candidate_index"] = r.candidate_index;
          d["distance"] = r.distance;
          d["all_discarded"] = r.all_discarded;
          d["discarded"] = r.discarded;
          d["sample_count"] = r.sample_count;
          d["queries"] = r.reads_m1 + r.reads_m2;
          return d;
        },
        py::arg("m1"), py::arg("m2"), py::arg("candidates"), py::arg("epsilon") = 0.1,
        py::arg("seed") = 0, py::arg("strict_objective") = false, py::arg("workers") = 1);

  m.def("match_grayscale",
        [](const GrayImage2D& a, const GrayImage2D& b, const std::string& family,
           double delta_prime, double epsilon, double c, std::uint64_t seed, bool nested,
           int workers) {
          const Cover3DRestricted cover(CoverParams{a.n(), delta_prime, c, nested},
                                        family_from_name(family));
          EstimatorParams params;
          params.epsilon = epsilon;
          params.seed = seed;
          params.workers = workers;
          const GrayMatchResult r = match_grayscale(a, b, cover, params);
          py::dict d = map_dict(r.map);
          d["cover_index"] = r.cover_index;
          d["distance"] = r.distance;
          d["con"] = r.intensity.con;
          d["bri"] = r.intensity.bri;
          d["stats"] = stats_dict(r.stats);
          return d;
        },
        py::arg("m1"), py::arg("m2"), py::arg("family") = "identity",
        py::arg("delta_prime") = 0.5, py::arg("epsilon") = 0.1, py::arg("c") = 2.0,
        py::arg("seed") = 0, py::arg("nested") = false, py::arg("workers") = 1);

  m.def("match_volume",
        [](const BinaryImage3D& a, const BinaryImage3D& b, const std::string& family,
           double delta_prime, double epsilon, double c, std::uint64_t seed, bool nested,
           int workers) {
          const Cover3DRestricted cover(CoverParams{a.n(), delta_prime, c, nested},
                                        family_from_name(family));
          EstimatorParams params;
          params.epsilon = epsilon;
          params.seed = seed;
          params.workers = workers;
          const MatchResultRestricted3D r = match_smooth_3d(a, b, cover, params);
          py::dict d = map_dict(r.map.planar);
          d["cover_index"] = r.cover_index;
          d["distance"] = r.distance;
          d["zscale"] = r.map.zscale;
          d["zshift"] = r.map.zshift;
          d["stats"] = stats_dict(r.stats);
          return d;
        },
        py::arg("m1"), py::arg("m2"), py::arg("family") = "identity",
        py::arg("delta_prime") = 0.5, py::arg("epsilon") = 0.1, py::arg("c") = 2.0,
        py::arg("seed") = 0, py::arg("nested") = false, py::arg("workers") = 1);

  m.def("exhaustive_min_distance",
        [](const BinaryImage2D& a, const BinaryImage2D& b, const std::string& family,
           double delta_prime, double c, bool nested, double work_cap, int workers) {
          const Cover2D cover(CoverParams{a.n(), delta_prime, c, nested},
                              family_from_name(family));
          const ExhaustiveResult2D r = exhaustive_min_distance(a, b, cover, work_cap, workers);
          py::dict d = map_dict(r.map);
          d["cover_index"] = r.cover_index;
          d["distance"] = r.distance;
          return d;
        },
        py::arg("m1"), py::arg("m2"), py::arg("family") = "translation",
        py::arg("delta_prime") = 0.5, py::arg("c") = 2.0, py::arg("nested") = false,
        py::arg("work_cap") = kDefaultWorkCap, py::arg("workers") = 1);

  m.def("cover_size",
        [](const std::string& space, const std::string& family, int n, double delta_prime,
           double c, bool nested) -> std::uint64_t {
          const CoverParams params{n, delta_prime, c, nested};
          if (space == "2d") return Cover2D(params, family_from_name(family)).size();
          if (space == "3d") return Cover3DRestricted(params, family_from_name(family)).size();
          if (space == "3d-full") {
            const Family3D fam = family == "translation" ? Family3D::kTranslation
                                 : family == "affine"
                                     ? Family3D::kAffine
                                     : throw std::invalid_argument(
                                           "family: 3d-full expects translation or affine");
            return Cover3DFull(params, fam).size();
          }
          throw std::invalid_argument("space: expected 2d, 3d or 3d-full");
        },
        py::arg("space"), py::arg("family"), py::arg("n"), py::arg("delta_prime") = 0.5,
        py::arg("c") = 2.0, py::arg("nested") = false);

  // --- reduction ---

  m.def("reduce_to_3d", &reduce_to_3d, py::arg("image"));
  m.def("reduction_consistency",
        [](const GrayImage2D& a, const GrayImage2D& b, const AffineMap2D& map,
           const IntensityMap& intensity) {
          const ConsistencyReport r = reduction_consistency(a, b, map, intensity);
          py::dict d;
          d["gray"] = r.gray;
          d["vol"] = r.vol;
          d["gap"] = r.gap;
          return d;
        },
        py::arg("m1"), py::arg("m2"), py::arg("map"), py::arg("intensity"));

  // --- adversarial generators ---

  m.def("gen_d1",
        [](int n, int k, std::uint64_t seed) {
          const ImagePair p = gen_d1({n, k, seed});
          return py::make_tuple(p.m1, p.m2);
        },
        py::arg("n"), py::arg("k") = 1, py::arg("seed") = 0);
  m.def("gen_d2",
        [](int n, int k, std::uint64_t seed) {
          const PlantedPair p = gen_d2({n, k, seed});
          return py::make_tuple(p.m1, p.m2, p.s_h, p.s_v);
        },
        py::arg("n"), py::arg("k") = 1, py::arg("seed") = 0);
  m.def("min_translation_distance", &min_translation_distance, py::arg("m1"), py::arg("m2"),
        py::arg("radius"));

  // --- file IO ---

  m.def("read_pbm", &read_pbm_file, py::arg("path"));
  m.def("write_pbm",
        [](const std::string& path, const BinaryImage2D& img) { write_pbm_file(path, img); },
        py::arg("path"), py::arg("image"));
  m.def("read_pgm", &read_pgm_file, py::arg("path"));
  m.def("write_pgm",
        [](const std::string& path, const GrayImage2D& img, int maxval) {
          write_pgm_file(path, img, maxval);
        },
        py::arg("path"), py::arg("image"), py::arg("maxval") = 255);
  m.def("read_vox3", &read_vox3_file, py::arg("path"));
  m.def("write_vox3", &write_vox3_file, py::arg("path"), py::arg("volume"));
}
