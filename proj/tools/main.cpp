// subpix command-line tool: match, distance, gen, reduce, cover-stats, bench.
//
// Output is line-delimited JSON on standard output (one record per result,
// schema_version 1, keys sorted). Diagnostics go to standard error. Records
// are buffered and flushed only on success, so a failing run never emits a
// partial stream. Every field except bench's wall_ms is a deterministic
// function of (argv, input files, seed); worker count never changes output.
//
// Exit codes: 0 success, 2 validation, 3 unreadable/unwritable file,
// 4 malformed file content, 5 capacity/work cap exceeded.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "subpix/adversarial.hpp"
#include "subpix/cover.hpp"
#include "subpix/errors.hpp"
#include "subpix/image.hpp"
#include "subpix/io.hpp"
#include "subpix/matcher.hpp"
#include "subpix/reduction.hpp"
#include "subpix/transform.hpp"

namespace {

using nlohmann::json;
using namespace subpix;

constexpr int kSchemaVersion = 1;

enum class ImgKind { kBinary2D, kGray2D, kVolume3D };

ImgKind kind_of(const std::string& flag, const std::string& path) {
  const auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  if (ext == ".pbm") return ImgKind::kBinary2D;
  if (ext == ".pgm") return ImgKind::kGray2D;
  if (ext == ".vox3") return ImgKind::kVolume3D;
  throw std::invalid_argument(flag + ": unsupported image extension '" + ext +
                              "' (expected .pbm, .pgm or .vox3)");
}

double env_work_cap() {
  const char* raw = std::getenv("SUBPIX_WORK_CAP");
  if (raw == nullptr || *raw == '\0') return kDefaultWorkCap;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !(v > 0))
    throw std::invalid_argument("SUBPIX_WORK_CAP: expected a positive number");
  return v;
}

json map2_json(const AffineMap2D& m) {
  json j;
  j["A"] = {m.A(0, 0), m.A(0, 1), m.A(1, 0), m.A(1, 1)};
  j["t"] = {m.t.x, m.t.y};
  return j;
}

json map3_json(const AffineMap3D& m) {
  json j;
  j["A"] = {m.A(0, 0), m.A(0, 1), m.A(0, 2), m.A(1, 0), m.A(1, 1),
            m.A(1, 2), m.A(2, 0), m.A(2, 1), m.A(2, 2)};
  j["t"] = {m.t.x, m.t.y, m.t.z};
  return j;
}

json restricted_json(const RestrictedMap3D& m) {
  json j;
  j["planar"] = map2_json(m.planar);
  j["zscale"] = m.zscale;
  j["zshift"] = m.zshift;
  return j;
}

json grid_json(const std::string& name, const Grid& g) {
  json j;
  j["axis"] = name;
  j["circular"] = g.circular;
  j["count"] = g.count;
  j["lo"] = g.lo;
  j["spacing"] = g.spacing;
  return j;
}

json stats_json(const MatchStats& s) {
  json j;
  j["candidates"] = s.candidates;
  j["repetitions"] = s.repetitions;
  j["samples_per_estimate"] = s.samples_per_estimate;
  j["reads_m1"] = s.reads_m1;
  j["reads_m2"] = s.reads_m2;
  return j;
}

// Shared numeric-range validation; messages name the offending flag.
void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("--epsilon: must lie in (0, 1)");
}
void check_delta(double delta_prime) {
  if (!(delta_prime > 0.0 && delta_prime < std::sqrt(2.0)))
    throw std::invalid_argument("--delta: must lie in (0, sqrt(2))");
}
void check_c(double c) {
  if (!(c >= 1.0)) throw std::invalid_argument("--c: must be at least 1");
}
void check_workers(int workers) {
  if (workers < 1) throw std::invalid_argument("--workers: must be at least 1");
}
void check_work_cap(double cap) {
  if (!(cap > 0)) throw std::invalid_argument("--work-cap: must be positive");
}

// Predicted read total of a median-amplified cover search; refuse to start
// a search the work cap cannot pay for.
void check_search_budget(std::uint64_t members, double epsilon, double cap) {
  const double per = static_cast<double>(samples_per_estimate(epsilon));
  const double reps = static_cast<double>(median_repetitions(members));
  const double reads = 2.0 * per * reps * static_cast<double>(members);
  if (reads > cap)
    throw CapacityError("cover search needs " + std::to_string(reads) +
                        " reads, above the work cap " + std::to_string(cap));
}

struct CommonOpts {
  double delta_prime = 0.5;
  double epsilon = 0.1;
  double c = kDefaultScaleBound;
  std::uint64_t seed = 0;
  int workers = 1;
  double work_cap = 0.0;  // 0: take SUBPIX_WORK_CAP or the built-in default
  bool strict_paper = false;
  bool nested = false;

  double cap() const { return work_cap > 0 ? work_cap : env_work_cap(); }

  void validate_search() const {
    check_delta(delta_prime);
    check_epsilon(epsilon);
    check_c(c);
    check_workers(workers);
    if (work_cap > 0) check_work_cap(work_cap);
  }
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_search_params) {
  if (with_search_params) {
    cmd->add_option("--delta", o.delta_prime, "Cover resolution delta' in (0, sqrt(2))");
    cmd->add_option("--epsilon", o.epsilon, "Estimator accuracy in (0, 1)");
    cmd->add_option("--c", o.c, "Scaling bound (singular values in [1/c, c])");
    cmd->add_flag("--nested", o.nested, "Round grid sizes up to powers of two");
  }
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--workers", o.workers, "Worker threads (never changes results)");
  cmd->add_option("--work-cap", o.work_cap,
                  "Max pixel evaluations/reads (overrides SUBPIX_WORK_CAP)");
  cmd->add_flag("--strict-paper", o.strict_paper,
                "General matcher: historical objective and discard threshold");
}

json base_record(const std::string& command) {
  json j;
  j["command"] = command;
  j["schema_version"] = kSchemaVersion;
  return j;
}

// ---- distance ----

json run_distance(const std::string& m1p, const std::string& m2p, const std::string& tpath) {
  const ImgKind kind = kind_of("--m1", m1p);
  if (kind_of("--m2", m2p) != kind)
    throw std::invalid_argument("--m2: image kind differs from --m1");

  TransformFile tf;
  tf.dims = kind == ImgKind::kVolume3D ? 3 : 2;
  if (!tpath.empty()) tf = read_tfm_file(tpath);

  json rec = base_record("distance");
  json params;
  params["m1"] = m1p;
  params["m2"] = m2p;
  params["t"] = tpath.empty() ? "identity" : tpath;

  if (kind == ImgKind::kVolume3D) {
    if (tf.dims != 3) throw std::invalid_argument("--t: expected a 3-D transform");
    if (tf.has_intensity)
      throw std::invalid_argument("--t: intensity maps apply to grayscale images only");
    const BinaryImage3D a = read_vox3_file(m1p);
    const BinaryImage3D b = read_vox3_file(m2p);
    if (a.n() != b.n()) throw std::invalid_argument("--m2: volume side differs from --m1");
    rec["distance"] = distance_under(a, b, tf.map3);
    rec["n"] = a.n();
    rec["queries"] = static_cast<std::uint64_t>(a.n()) * a.n() * a.n();
    rec["transform"] = map3_json(tf.map3);
  } else {
    if (tf.dims != 2) throw std::invalid_argument("--t: expected a 2-D transform");
    if (kind == ImgKind::kBinary2D) {
      if (tf.has_intensity)
        throw std::invalid_argument("--t: intensity maps apply to grayscale images only");
      const BinaryImage2D a = read_pbm_file(m1p);
      const BinaryImage2D b = read_pbm_file(m2p);
      if (a.n() != b.n()) throw std::invalid_argument("--m2: image side differs from --m1");
      rec["distance"] = distance_under(a, b, tf.map2);
      rec["n"] = a.n();
      rec["queries"] = static_cast<std::uint64_t>(a.n()) * a.n();
    } else {
      const GrayImage2D a = read_pgm_file(m1p);
      const GrayImage2D b = read_pgm_file(m2p);
      if (a.n() != b.n()) throw std::invalid_argument("--m2: image side differs from --m1");
      rec["distance"] = tf.has_intensity ? distance_under(a, b, tf.map2, tf.intensity)
                                         : distance_under(a, b, tf.map2);
      rec["n"] = a.n();
      rec["queries"] = static_cast<std::uint64_t>(a.n()) * a.n();
    }
    json tj = map2_json(tf.map2);
    if (tf.has_intensity) {
      tj["bri"] = tf.intensity.bri;
      tj["con"] = tf.intensity.con;
    }
    rec["transform"] = tj;
  }
  rec["params"] = params;
  return rec;
}

// ---- match ----

json params_json(const CommonOpts& o, const std::string& mode, const std::string& family,
                 int n) {
  json p;
  p["c"] = o.c;
  p["delta_prime"] = o.delta_prime;
  p["epsilon"] = o.epsilon;
  p["family"] = family;
  p["mode"] = mode;
  p["n"] = n;
  p["nested"] = o.nested;
  p["strict_paper"] = o.strict_paper;
  // workers deliberately unlisted: output is identical for any worker count
  return p;
}

json run_match(const std::string& m1p, const std::string& m2p, const std::string& mode,
               const std::string& family, const CommonOpts& o, const std::string& out_tfm) {
  const ImgKind kind = kind_of("--m1", m1p);
  if (kind_of("--m2", m2p) != kind)
    throw std::invalid_argument("--m2: image kind differs from --m1");

  json rec = base_record("match");
  rec["seed"] = o.seed;
  TransformFile best;

  if (mode == "smooth" || mode == "exact" || mode == "general") {
    if (kind == ImgKind::kVolume3D)
      throw std::invalid_argument("--mode: " + mode + " expects 2-D images (.pbm/.pgm)");
  } else if (mode == "3d") {
    if (kind != ImgKind::kVolume3D)
      throw std::invalid_argument("--mode: 3d expects .vox3 volumes");
  } else if (mode == "gray") {
    if (kind != ImgKind::kGray2D)
      throw std::invalid_argument("--mode: gray expects .pgm images");
  } else {
    throw std::invalid_argument("--mode: unknown mode '" + mode + "'");
  }

  if (kind == ImgKind::kVolume3D) {
    const BinaryImage3D a = read_vox3_file(m1p);
    const BinaryImage3D b = read_vox3_file(m2p);
    if (a.n() != b.n()) throw std::invalid_argument("--m2: volume side differs from --m1");
    const CoverParams cp{a.n(), o.delta_prime, o.c, o.nested};
    const Cover3DRestricted cover(cp, family_from_name(family));
    check_search_budget(cover.size(), o.epsilon, o.cap());
    const EstimatorParams ep{o.epsilon, o.seed, 0, o.workers};
    const MatchResultRestricted3D r = match_smooth_3d(a, b, cover, ep);
    rec["cover_index"] = r.cover_index;
    rec["distance"] = r.distance;
    rec["queries"] = r.stats.queries();
    rec["stats"] = stats_json(r.stats);
    rec["transform"] = restricted_json(r.map);
    rec["params"] = params_json(o, mode, family, a.n());
    best.dims = 3;
    best.map3 = embed_restricted(r.map);
  } else if (mode == "gray") {
    const GrayImage2D a = read_pgm_file(m1p);
    const GrayImage2D b = read_pgm_file(m2p);
    if (a.n() != b.n()) throw std::invalid_argument("--m2: image side differs from --m1");
    const CoverParams cp{a.n(), o.delta_prime, o.c, o.nested};
    const Cover3DRestricted cover(cp, family_from_name(family));
    check_search_budget(cover.size(), o.epsilon, o.cap());
    const EstimatorParams ep{o.epsilon, o.seed, 0, o.workers};
    const GrayMatchResult r = match_grayscale(a, b, cover, ep);
    rec["cover_index"] = r.cover_index;
    rec["distance"] = r.distance;
    rec["queries"] = r.stats.queries();
    rec["stats"] = stats_json(r.stats);
    json tj = map2_json(r.map);
    tj["bri"] = r.intensity.bri;
    tj["con"] = r.intensity.con;
    rec["transform"] = tj;
    rec["params"] = params_json(o, mode, family, a.n());
    best.dims = 2;
    best.map2 = r.map;
    best.has_intensity = true;
    best.intensity = r.intensity;
  } else if (kind == ImgKind::kGray2D) {
    const GrayImage2D a = read_pgm_file(m1p);
    const GrayImage2D b = read_pgm_file(m2p);
    if (a.n() != b.n()) throw std::invalid_argument("--m2: image side differs from --m1");
    const CoverParams cp{a.n(), o.delta_prime, o.c, o.nested};
    const Cover2D cover(cp, family_from_name(family));
    if (mode == "general")
      throw std::invalid_argument("--mode: general expects binary images (.pbm)");
    if (mode == "smooth") {
      check_search_budget(cover.size(), o.epsilon, o.cap());
      const EstimatorParams ep{o.epsilon, o.seed, 0, o.workers};
      const MatchResult2D r = match_smooth(a, b, cover, ep);
      rec["cover_index"] = r.cover_index;
      rec["distance"] = r.distance;
      rec["queries"] = r.stats.queries();
      rec["stats"] = stats_json(r.stats);
      rec["transform"] = map2_json(r.map);
      best.map2 = r.map;
    } else {  // exact
      const ExhaustiveResult2D r = exhaustive_min_distance(a, b, cover, o.cap(), o.workers);
      rec["cover_index"] = r.cover_index;
      rec["distance"] = r.distance;
      rec["queries"] = cover.size() * static_cast<std::uint64_t>(a.n()) * a.n();
      rec["transform"] = map2_json(r.map);
      best.map2 = r.map;
    }
    rec["params"] = params_json(o, mode, family, a.n());
  } else {
    const BinaryImage2D a = read_pbm_file(m1p);
    const BinaryImage2D b = read_pbm_file(m2p);
    if (a.n() != b.n()) throw std::invalid_argument("--m2: image side differs from --m1");
    const CoverParams cp{a.n(), o.delta_prime, o.c, o.nested};
    const Cover2D cover(cp, family_from_name(family));
    if (mode == "smooth") {
      check_search_budget(cover.size(), o.epsilon, o.cap());
      const EstimatorParams ep{o.epsilon, o.seed, 0, o.workers};
      const MatchResult2D r = match_smooth(a, b, cover, ep);
      rec["cover_index"] = r.cover_index;
      rec["distance"] = r.distance;
      rec["queries"] = r.stats.queries();
      rec["stats"] = stats_json(r.stats);
      rec["transform"] = map2_json(r.map);
      best.map2 = r.map;
    } else if (mode == "general") {
      const std::uint64_t k = general_sample_count(a.n(), o.epsilon);
      const auto member_cap =
          static_cast<std::uint64_t>(std::max(1.0, o.cap() / static_cast<double>(k)));
      std::vector<AffineMap2D> candidates;
      for (const CoverMember2D& m : cover.materialize(member_cap)) candidates.push_back(m.map);
      const GeneralParams gp{o.epsilon, o.seed, o.strict_paper, o.workers};
      const GeneralResult r = match_general(a, b, candidates, gp);
      rec["all_discarded"] = r.all_discarded;
      rec["cover_index"] = r.candidate_index;
      rec["discarded"] = r.discarded;
      rec["distance"] = r.distance;
      rec["queries"] = r.reads_m1 + r.reads_m2;
      rec["sample_count"] = r.sample_count;
      rec["transform"] = map2_json(r.map);
      best.map2 = r.map;
    } else {  // exact
      const ExhaustiveResult2D r = exhaustive_min_distance(a, b, cover, o.cap(), o.workers);
      rec["cover_index"] = r.cover_index;
      rec["distance"] = r.distance;
      rec["queries"] = cover.size() * static_cast<std::uint64_t>(a.n()) * a.n();
      rec["transform"] = map2_json(r.map);
      best.map2 = r.map;
    }
    rec["params"] = params_json(o, mode, family, a.n());
  }

  if (!out_tfm.empty()) write_tfm_file(out_tfm, best);
  return rec;
}

// ---- gen ----

json run_gen(const std::string& family, int n, int k, std::uint64_t seed,
             const std::string& prefix, int s_h, int s_v) {
  const AdversarialParams params{n, k, seed};
  const std::string f1 = prefix + "_m1.pbm";
  const std::string f2 = prefix + "_m2.pbm";
  json rec = base_record("gen");
  rec["family"] = family;
  rec["k"] = k;
  rec["n"] = n;
  rec["seed"] = seed;
  if (family == "d1") {
    if (s_h >= 0 || s_v >= 0)
      throw std::invalid_argument("--s-h/--s-v: only the d2 family plants a shift");
    const ImagePair pair = gen_d1(params);
    write_pbm_file(f1, pair.m1);
    write_pbm_file(f2, pair.m2);
    rec["files"] = {f1, f2};
  } else if (family == "d2") {
    if ((s_h >= 0) != (s_v >= 0))
      throw std::invalid_argument("--s-h/--s-v: give both or neither");
    const PlantedPair pair =
        s_h >= 0 ? gen_d2_with_shift(params, s_h, s_v) : gen_d2(params);
    write_pbm_file(f1, pair.m1);
    write_pbm_file(f2, pair.m2);
    const std::string fs = prefix + "_shift.json";
    json side;
    side["family"] = "d2";
    side["k"] = k;
    side["n"] = n;
    side["s_h"] = pair.s_h;
    side["s_v"] = pair.s_v;
    side["schema_version"] = kSchemaVersion;
    side["seed"] = seed;
    std::ofstream out(fs, std::ios::binary);
    if (!out) throw FileOpenError("cannot open '" + fs + "' for writing");
    out << side.dump() << '\n';
    out.flush();
    if (!out) throw FileOpenError("failed writing '" + fs + "'");
    rec["files"] = {f1, f2, fs};
    rec["s_h"] = pair.s_h;
    rec["s_v"] = pair.s_v;
  } else {
    throw std::invalid_argument("--family: expected d1 or d2");
  }
  return rec;
}

// ---- reduce ----

json run_reduce(const std::string& in_path, const std::string& out_path) {
  const GrayImage2D img = read_pgm_file(in_path);
  const BinaryImage3D vol = reduce_to_3d(img);
  write_vox3_file(out_path, vol);
  json rec = base_record("reduce");
  rec["input"] = in_path;
  rec["n"] = img.n();
  rec["output"] = out_path;
  return rec;
}

// ---- cover-stats ----

json run_cover_stats(const std::string& space, const std::string& family, int n,
                     const CommonOpts& o) {
  const CoverParams cp{n, o.delta_prime, o.c, o.nested};
  json rec = base_record("cover-stats");
  json params;
  params["c"] = o.c;
  params["delta"] = cp.delta();
  params["delta_prime"] = o.delta_prime;
  params["family"] = family;
  params["n"] = n;
  params["nested"] = o.nested;
  params["space"] = space;
  rec["params"] = params;

  static const char* k2dAxes[6] = {"theta1", "sx", "sy", "theta2", "tx", "ty"};
  json axes = json::array();
  if (space == "2d") {
    const Cover2D cover(cp, family_from_name(family));
    for (int i = 0; i < 6; ++i) axes.push_back(grid_json(k2dAxes[i], cover.grid(i)));
    rec["size"] = cover.size();
  } else if (space == "3d") {
    const Cover3DRestricted cover(cp, family_from_name(family));
    for (int i = 0; i < 6; ++i) axes.push_back(grid_json(k2dAxes[i], cover.planar().grid(i)));
    axes.push_back(grid_json("zscale", cover.zscale_grid()));
    axes.push_back(grid_json("zshift", cover.zshift_grid()));
    rec["size"] = cover.size();
  } else if (space == "3d-full") {
    Family3D fam;
    if (family == "translation") {
      fam = Family3D::kTranslation;
    } else if (family == "affine") {
      fam = Family3D::kAffine;
    } else {
      throw std::invalid_argument("--family: 3d-full expects translation or affine");
    }
    static const char* k3dAxes[12] = {"alpha1", "beta1", "gamma1", "sx", "sy", "sz",
                                      "alpha2", "beta2", "gamma2", "tx", "ty", "tz"};
    const Cover3DFull cover(cp, fam);
    for (int i = 0; i < 12; ++i) axes.push_back(grid_json(k3dAxes[i], cover.grid(i)));
    rec["size"] = cover.size();
  } else {
    throw std::invalid_argument("--space: expected 2d, 3d or 3d-full");
  }
  rec["axes"] = axes;
  return rec;
}

// ---- bench ----

std::vector<json> run_bench(const std::string& mode, const std::vector<int>& ns,
                            const std::string& family, const CommonOpts& o) {
  if (ns.empty()) throw std::invalid_argument("--n: give at least one size");
  std::vector<json> rows;
  for (const int n : ns) {
    const AdversarialParams ap{n, 1, o.seed};
    const ImagePair pair = gen_d1(ap);
    const CoverParams cp{n, o.delta_prime, o.c, o.nested};

    json rec = base_record("bench");
    rec["c"] = o.c;
    rec["delta_prime"] = o.delta_prime;
    rec["epsilon"] = o.epsilon;
    rec["family"] = family;
    rec["mode"] = mode;
    rec["n"] = n;
    rec["seed"] = o.seed;

    const auto t0 = std::chrono::steady_clock::now();
    if (mode == "smooth") {
      const Cover2D cover(cp, family_from_name(family));
      check_search_budget(cover.size(), o.epsilon, o.cap());
      const EstimatorParams ep{o.epsilon, o.seed, 0, o.workers};
      const MatchResult2D r = match_smooth(pair.m1, pair.m2, cover, ep);
      rec["distance"] = r.distance;
      rec["queries"] = r.stats.queries();
    } else if (mode == "general") {
      const Cover2D cover(cp, family_from_name(family));
      const std::uint64_t k = general_sample_count(n, o.epsilon);
      const auto member_cap =
          static_cast<std::uint64_t>(std::max(1.0, o.cap() / static_cast<double>(k)));
      std::vector<AffineMap2D> candidates;
      for (const CoverMember2D& m : cover.materialize(member_cap)) candidates.push_back(m.map);
      const GeneralParams gp{o.epsilon, o.seed, o.strict_paper, o.workers};
      const GeneralResult r = match_general(pair.m1, pair.m2, candidates, gp);
      rec["distance"] = r.distance;
      rec["queries"] = r.reads_m1 + r.reads_m2;
    } else {
      throw std::invalid_argument("--mode: bench expects smooth or general");
    }
    const auto t1 = std::chrono::steady_clock::now();
    rec["wall_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    rows.push_back(std::move(rec));
  }
  return rows;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sublinear approximate image matching under affine transformations"};
  app.require_subcommand(1);

  // distance
  std::string d_m1, d_m2, d_t;
  CLI::App* cmd_distance =
      app.add_subcommand("distance", "Exact distance between two images under a transform");
  cmd_distance->add_option("--m1", d_m1, "Reference image (.pbm/.pgm/.vox3)")->required();
  cmd_distance->add_option("--m2", d_m2, "Target image (same kind as --m1)")->required();
  cmd_distance->add_option("--t", d_t, "Transform file (.tfm); identity when omitted");

  // match
  std::string m_m1, m_m2, m_mode = "smooth", m_family = "affine", m_out;
  CommonOpts m_opts;
  CLI::App* cmd_match = app.add_subcommand("match", "Search a cover for the best transform");
  cmd_match->add_option("--m1", m_m1, "Reference image (.pbm/.pgm/.vox3)")->required();
  cmd_match->add_option("--m2", m_m2, "Target image (same kind as --m1)")->required();
  cmd_match->add_option("--mode", m_mode, "smooth | general | exact | 3d | gray");
  cmd_match->add_option("--family", m_family, "identity | translation | affine");
  cmd_match->add_option("--out", m_out, "Write the best transform to this .tfm file");
  add_common(cmd_match, m_opts, true);

  // gen
  std::string g_family = "d1", g_prefix = "pair";
  int g_n = 64, g_k = 1, g_sh = -1, g_sv = -1;
  std::uint64_t g_seed = 0;
  CLI::App* cmd_gen = app.add_subcommand("gen", "Generate an adversarial image pair");
  cmd_gen->add_option("--family", g_family, "d1 (independent) | d2 (planted shift)");
  cmd_gen->add_option("--n", g_n, "Image side");
  cmd_gen->add_option("--k", g_k, "Block side (must divide n)");
  cmd_gen->add_option("--seed", g_seed, "RNG seed");
  cmd_gen->add_option("--out-prefix", g_prefix, "Output prefix (writes <p>_m1.pbm, <p>_m2.pbm)");
  cmd_gen->add_option("--s-h", g_sh, "d2: force this row shift (multiple of k)");
  cmd_gen->add_option("--s-v", g_sv, "d2: force this column shift (multiple of k)");

  // reduce
  std::string r_in, r_out;
  CLI::App* cmd_reduce =
      app.add_subcommand("reduce", "Reduce a grayscale image to its 3-D level-set volume");
  cmd_reduce->add_option("--in", r_in, "Input image (.pgm)")->required();
  cmd_reduce->add_option("--out", r_out, "Output volume (.vox3)")->required();

  // cover-stats
  std::string c_space = "2d", c_family = "affine";
  int c_n = 64;
  CommonOpts c_opts;
  CLI::App* cmd_cover =
      app.add_subcommand("cover-stats", "Report cover size and per-axis grids");
  cmd_cover->add_option("--space", c_space, "2d | 3d | 3d-full");
  cmd_cover->add_option("--family", c_family, "identity | translation | affine");
  cmd_cover->add_option("--n", c_n, "Image side");
  add_common(cmd_cover, c_opts, true);

  // bench
  std::string b_mode = "smooth", b_family = "translation";
  std::vector<int> b_ns;
  CommonOpts b_opts;
  CLI::App* cmd_bench =
      app.add_subcommand("bench", "Query counts and wall time over a size grid");
  cmd_bench->add_option("--mode", b_mode, "smooth | general");
  cmd_bench->add_option("--n", b_ns, "Image side (repeatable)");
  cmd_bench->add_option("--family", b_family, "identity | translation | affine");
  add_common(cmd_bench, b_opts, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // writes the diagnostic to stderr
    return 2;
  }

  std::vector<json> records;
  try {
    if (*cmd_distance) {
      records.push_back(run_distance(d_m1, d_m2, d_t));
    } else if (*cmd_match) {
      m_opts.validate_search();
      records.push_back(run_match(m_m1, m_m2, m_mode, m_family, m_opts, m_out));
    } else if (*cmd_gen) {
      records.push_back(run_gen(g_family, g_n, g_k, g_seed, g_prefix, g_sh, g_sv));
    } else if (*cmd_reduce) {
      records.push_back(run_reduce(r_in, r_out));
    } else if (*cmd_cover) {
      c_opts.validate_search();
      records.push_back(run_cover_stats(c_space, c_family, c_n, c_opts));
    } else if (*cmd_bench) {
      b_opts.validate_search();
      for (json& row : run_bench(b_mode, b_ns, b_family, b_opts)) records.push_back(std::move(row));
    }
  } catch (const FileOpenError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 5;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  std::string out;
  for (const json& rec : records) {
    out += rec.dump();
    out += '\n';
  }
  std::cout << out;
  std::cout.flush();
  return std::cout ? 0 : 3;
}
