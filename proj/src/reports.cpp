#include "covgeom/reports.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "covgeom/covering.hpp"
#include "covgeom/inequalities.hpp"
#include "covgeom/models.hpp"
#include "covgeom/positions.hpp"
#include "covgeom/rng.hpp"
#include "covgeom/subspace.hpp"
#include "covgeom/volume.hpp"

namespace covgeom::rep {
namespace {

using Json = nlohmann::ordered_json;

const std::set<std::string> kCommands = {"gen",   "position", "scan",
                                         "cover", "check",    "report"};
const std::set<std::string> kModes = {"centre", "santalo", "isotropic",
                                      "regularize"};
const std::set<std::string> kViews = {"regularity", "sweep", "scan"};
const std::set<std::string> kFamilies = {"ball", "cube", "cross", "simplex",
                                         "random"};
const std::set<std::string> kGlobalChecks = {"blaschke-santalo", "rogers-shephard",
                                             "sym-hull", "milman-pajor"};
const std::set<std::string> kSubspaceChecks = {
    "bs-projection", "fradelizi",     "rudelson",
    "rs-spingarn",   "stephen-zhang", "msz",
    "projection-comparison"};
const std::vector<std::string> kConstantFreeGroup = {
    "blaschke-santalo", "milman-pajor",  "sym-hull",    "fradelizi",
    "rs-spingarn",      "stephen-zhang", "msz",         "meyer-pajor"};

bool known_check(const std::string& name) {
  return name == "meyer-pajor" || kGlobalChecks.count(name) != 0 ||
         kSubspaceChecks.count(name) != 0;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt_full(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw PreconditionError("cannot write file: " + path);
  out << text;
  if (!out) throw PreconditionError("write failed: " + path);
}

template <typename T>
std::string join(const std::vector<T>& xs, const char* sep,
                 std::string (*format)(T)) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += sep;
    s += format(xs[i]);
  }
  return s;
}

std::string canonical_config(const ExperimentConfig& cfg) {
  std::ostringstream s;
  s << "command=" << cfg.command << "\n";
  s << "body_files=";
  for (std::size_t i = 0; i < cfg.body_files.size(); ++i)
    s << (i ? "," : "") << cfg.body_files[i];
  s << "\n";
  if (cfg.model) {
    s << "model.family=" << cfg.model->family << "\nmodel.n=" << cfg.model->n
      << "\nmodel.m=" << cfg.model->m << "\nmodel.scale="
      << fmt_full(cfg.model->scale) << "\n";
  }
  s << "mode=" << cfg.mode << "\ninequality=" << cfg.inequality
    << "\nfamily=" << cfg.family << "\nview=" << cfg.view
    << "\nbundle_file=" << cfg.bundle_file << "\n";
  s << "tgrid=" << join<double>(cfg.tgrid, ",", fmt_full) << "\n";
  s << "l_values=";
  for (std::size_t i = 0; i < cfg.l_values.size(); ++i)
    s << (i ? "," : "") << cfg.l_values[i];
  s << "\n";
  s << "n_lo=" << cfg.n_lo << "\nn_hi=" << cfg.n_hi << "\nl_lo=" << cfg.l_lo
    << "\nl_hi=" << cfg.l_hi << "\nsamples=" << cfg.samples << "\n";
  s << "seed=" << (cfg.seed ? std::to_string(*cfg.seed) : "none") << "\n";
  s << "tol_equality="
    << (cfg.tol_equality ? fmt_full(*cfg.tol_equality) : "default") << "\n";
  s << "tol_feasibility="
    << (cfg.tol_feasibility ? fmt_full(*cfg.tol_feasibility) : "default") << "\n";
  s << "out_json=" << cfg.out_json << "\nout_csv=" << cfg.out_csv << "\n";
  return s.str();
}

Json config_json(const ExperimentConfig& cfg) {
  Json j;
  j["command"] = cfg.command;
  j["body_files"] = cfg.body_files;
  if (cfg.model) {
    j["model"] = {{"family", cfg.model->family},
                  {"n", cfg.model->n},
                  {"m", cfg.model->m},
                  {"scale", cfg.model->scale}};
  }
  if (!cfg.mode.empty()) j["mode"] = cfg.mode;
  if (!cfg.inequality.empty()) j["inequality"] = cfg.inequality;
  if (!cfg.family.empty()) j["family"] = cfg.family;
  if (!cfg.view.empty()) j["view"] = cfg.view;
  if (!cfg.bundle_file.empty()) j["bundle_file"] = cfg.bundle_file;
  if (!cfg.tgrid.empty()) j["tgrid"] = cfg.tgrid;
  if (!cfg.l_values.empty()) j["l_values"] = cfg.l_values;
  j["n_lo"] = cfg.n_lo;
  j["n_hi"] = cfg.n_hi;
  j["l_lo"] = cfg.l_lo;
  j["l_hi"] = cfg.l_hi;
  j["samples"] = cfg.samples;
  if (cfg.seed) j["seed"] = *cfg.seed;
  if (cfg.tol_equality) j["tol_equality"] = *cfg.tol_equality;
  if (cfg.tol_feasibility) j["tol_feasibility"] = *cfg.tol_feasibility;
  if (!cfg.out_json.empty()) j["out_json"] = cfg.out_json;
  if (!cfg.out_csv.empty()) j["out_csv"] = cfg.out_csv;
  return j;
}

Json matrix_rows(const Matrix& M) {
  Json rows = Json::array();
  for (int i = 0; i < M.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_values(const Vector& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Matrix parse_matrix(const Json& a, int expect_cols, const std::string& path) {
  if (!a.is_array() || a.empty())
    throw PreconditionError(path + ": expected a non-empty array of rows");
  const int rows = static_cast<int>(a.size());
  int cols = -1;
  Matrix M;
  for (int i = 0; i < rows; ++i) {
    const Json& row = a[i];
    if (!row.is_array())
      throw PreconditionError(path + ": row " + std::to_string(i) +
                              " is not an array");
    if (cols < 0) {
      cols = static_cast<int>(row.size());
      if (expect_cols > 0 && cols != expect_cols)
        throw PreconditionError(path + ": rows must have " +
                                std::to_string(expect_cols) + " entries");
      M.resize(rows, cols);
    }
    if (static_cast<int>(row.size()) != cols)
      throw PreconditionError(path + ": ragged rows");
    for (int j = 0; j < cols; ++j) {
      if (!row[j].is_number())
        throw PreconditionError(path + ": non-numeric entry");
      M(i, j) = row[j].get<double>();
    }
  }
  return M;
}

Vector parse_vector(const Json& a, int expect, const std::string& path) {
  if (!a.is_array() || (expect > 0 && static_cast<int>(a.size()) != expect))
    throw PreconditionError(path + ": expected an array of " +
                            std::to_string(expect) + " numbers");
  Vector v(static_cast<int>(a.size()));
  for (int i = 0; i < v.size(); ++i) {
    if (!a[i].is_number()) throw PreconditionError(path + ": non-numeric entry");
    v[i] = a[i].get<double>();
  }
  return v;
}

Tolerances effective_tol(const ExperimentConfig& cfg) {
  Tolerances tol;
  if (cfg.tol_equality) tol.equality = *cfg.tol_equality;
  if (cfg.tol_feasibility) tol.feasibility = *cfg.tol_feasibility;
  return tol;
}

Body model_body(const ModelSource& ms, const std::optional<std::uint64_t>& seed) {
  const std::string& f = ms.family;
  Body K = [&]() {
    if (f == "simplex" || f == "regular-simplex")
      return models::regular_simplex(ms.n).body;
    if (f == "cube") return models::cube(ms.n);
    if (f == "cross" || f == "cross-polytope" || f == "b1" || f == "ell1-ball")
      return models::cross_polytope(ms.n);
    if (f == "ball") return models::ball(ms.n);
    if (f == "random" || f == "random-vertex-polytope") {
      const int m = ms.m > 0 ? ms.m : 3 * ms.n + 6;
      return models::random_polytope(ms.n, m, models::PointMode::gaussian, *seed);
    }
    throw PreconditionError("model.family: unknown family '" + f + "'");
  }();
  if (ms.scale != 1.0) K = dilate(K, ms.scale);
  return K;
}

std::vector<std::pair<std::string, Body>> load_sources(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, Body>> out;
  const Tolerances tol = effective_tol(cfg);
  for (const std::string& f : cfg.body_files)
    out.emplace_back(f, load_body_file(f, tol));
  if (cfg.model)
    out.emplace_back("model:" + cfg.model->family, model_body(cfg.model, cfg.seed));
  return out;
}

int source_count(const ExperimentConfig& cfg) {
  return static_cast<int>(cfg.body_files.size()) + (cfg.model ? 1 : 0);
}

std::uint64_t mix_stream(int a, int b, int role) {
  return (static_cast<std::uint64_t>(role) << 48) ^
         (static_cast<std::uint64_t>(a) << 24) ^ static_cast<std::uint64_t>(b);
}

Json record_json(const ineq::InequalityRecord& r, const std::string& provenance,
                 std::uint64_t seed_used) {
  Json j;
  j["name"] = r.name;
  j["body_id"] = r.body_id;
  if (!r.position_tag.empty()) j["position_tag"] = r.position_tag;
  j["n"] = r.n;
  j["l"] = r.l;
  if (r.subspace_seed) j["subspace_seed"] = r.subspace_seed;
  if (r.direction.size() > 0) j["direction"] = vector_values(r.direction);
  if (r.lambda != 0.0) j["lambda"] = r.lambda;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["ratio"] = r.ratio;
  j["constant_free"] = r.constant_free;
  if (r.constant_free)
    j["pass"] = r.pass;
  else
    j["implied_constant"] = r.implied_constant;
  j["provenance"] = provenance;
  j["seed"] = seed_used;
  return j;
}

std::string check_csv_row(const ineq::InequalityRecord& r,
                          const std::string& provenance, std::uint64_t seed_used) {
  std::ostringstream s;
  s << r.name << "," << r.body_id << "," << r.position_tag << "," << provenance
    << "," << seed_used << "," << r.n << "," << r.l << "," << r.subspace_seed
    << "," << fmt(r.lambda) << "," << fmt(r.lhs) << "," << fmt(r.rhs) << ","
    << fmt(r.ratio) << "," << (r.constant_free ? 1 : 0) << ",";
  if (r.constant_free)
    s << (r.pass ? 1 : 0) << ",";
  else
    s << "," << fmt(r.implied_constant);
  if (r.constant_free) s << "";
  s << "\n";
  return s.str();
}

struct CheckOutput {
  std::vector<ineq::InequalityRecord> records;
  std::vector<std::string> provenance;
  std::vector<std::uint64_t> seeds;
  Json errors = Json::array();
  bool partial = false;

  void add(const ineq::InequalityRecord& r, const std::string& prov,
           std::uint64_t seed) {
    records.push_back(r);
    provenance.push_back(prov);
    seeds.push_back(seed);
  }
  void fail(const std::string& name, int l, const std::string& what) {
    Json e;
    e["name"] = name;
    if (l > 0) e["l"] = l;
    e["error"] = what;
    errors.push_back(std::move(e));
    partial = true;
  }
};

void run_single_check(const std::string& name, const std::string& body_id,
                      const Body& K, const ExperimentConfig& cfg,
                      CheckOutput& out) {
  const int n = K.dim();
  if (kGlobalChecks.count(name)) {
    try {
      ineq::InequalityRecord r;
      if (name == "blaschke-santalo") r = ineq::check_blaschke_santalo(K);
      else if (name == "rogers-shephard") r = ineq::check_rogers_shephard(K);
      else if (name == "sym-hull") r = ineq::check_sym_hull(K);
      else r = ineq::check_milman_pajor(K);
      r.body_id = body_id;
      out.add(r, "exact", cfg.seed ? *cfg.seed : 0);
    } catch (const Error& e) {
      out.fail(name, 0, e.what());
    }
    return;
  }

  if (name == "meyer-pajor") {
    const Vector b = barycentre(K);
    for (int j = 0; j < cfg.samples; ++j) {
      const std::uint64_t ds = derive_seed(*cfg.seed, mix_stream(0, j, 2));
      try {
        Rng rng(ds);
        const Vector u = rng.sphere_vector(n);
        const auto H = ineq::separating_hyperplane(K, u, u.dot(b));
        ineq::InequalityRecord r = ineq::check_meyer_pajor(K, H);
        r.body_id = body_id;
        out.add(r, "sampled", ds);
      } catch (const Error& e) {
        out.fail(name, 0, e.what());
      }
    }
    return;
  }

  const bool grid_capped = name == "fradelizi" || name == "rudelson";
  const bool full_ok = name == "stephen-zhang" || name == "msz";
  const int l_lo = std::max(cfg.l_lo, grid_capped ? std::max(1, n - 3) : 1);
  const int l_hi = cfg.l_hi == 0 ? n - 1 : std::min(cfg.l_hi, full_ok ? n : n - 1);
  for (int l = l_lo; l <= l_hi; ++l) {
    for (int j = 0; j < cfg.samples; ++j) {
      const std::uint64_t fseed = derive_seed(*cfg.seed, mix_stream(l, j, 1));
      try {
        const sub::Subspace F = sub::random_subspace(n, l, fseed);
        ineq::InequalityRecord r;
        if (name == "bs-projection") {
          r = ineq::check_bs_projection(K, F, ineq::PositionTag::centred);
        } else if (name == "fradelizi") {
          r = ineq::check_fradelizi(K, F);
        } else if (name == "rudelson") {
          r = ineq::check_rudelson(K, F);
        } else if (name == "rs-spingarn") {
          r = ineq::check_rs_spingarn(K, F);
        } else if (name == "projection-comparison") {
          r = ineq::check_projection_comparison(K, F, ineq::PositionTag::centred);
        } else {
          Rng rng(derive_seed(*cfg.seed, mix_stream(l, j, 2)));
          auto pair = ineq::check_halfspace_sections(K, F, rng.sphere_vector(l));
          r = name == "msz" ? pair.second : pair.first;
        }
        r.body_id = body_id;
        r.subspace_seed = fseed;
        out.add(r, "sampled", fseed);
      } catch (const Error& e) {
        out.fail(name, l, e.what());
      }
    }
  }
}

}  // namespace

std::vector<std::string> validate(const ExperimentConfig& cfg) {
  std::vector<std::string> errs;
  const auto bad = [&errs](const std::string& msg) { errs.push_back(msg); };

  if (!kCommands.count(cfg.command)) {
    bad("command: unknown command '" + cfg.command + "'");
    return errs;
  }
  if (cfg.samples < 1) bad("samples: must be at least 1");
  if (cfg.tol_equality && !(*cfg.tol_equality > 0.0))
    bad("tol_equality: must be positive");
  if (cfg.tol_feasibility && !(*cfg.tol_feasibility > 0.0))
    bad("tol_feasibility: must be positive");
  if (!std::is_sorted(cfg.tgrid.begin(), cfg.tgrid.end()) ||
      std::adjacent_find(cfg.tgrid.begin(), cfg.tgrid.end()) != cfg.tgrid.end())
    bad("tgrid: must be sorted strictly ascending");
  if (!cfg.tgrid.empty() && cfg.tgrid.front() <= 0.0)
    bad("tgrid: dilations must be positive");

  if (cfg.model) {
    const std::set<std::string> fams = {"simplex", "regular-simplex", "cube",
                                        "cross",   "cross-polytope",  "b1",
                                        "ell1-ball", "ball", "random",
                                        "random-vertex-polytope"};
    if (!fams.count(cfg.model->family))
      bad("model.family: unknown family '" + cfg.model->family + "'");
    if (cfg.model->n < 1) bad("model.n: must be at least 1");
    if (!(cfg.model->scale > 0.0)) bad("model.scale: must be positive");
    const bool random = cfg.model->family == "random" ||
                        cfg.model->family == "random-vertex-polytope";
    if (random && cfg.model->m != 0 && cfg.model->m < cfg.model->n + 1)
      bad("model.m: random polytopes need at least n+1 vertices");
    if (random && !cfg.seed) bad("seed: required for the random family");
  }

  if (cfg.command == "gen") {
    if (!cfg.model) bad("model: gen requires an inline model");
    if (cfg.out_json.empty()) bad("out_json: gen requires an output path");
  } else if (cfg.command == "position") {
    if (source_count(cfg) != 1) bad("body_files: position takes exactly one body");
    if (!kModes.count(cfg.mode)) bad("mode: unknown mode '" + cfg.mode + "'");
  } else if (cfg.command == "scan") {
    if (source_count(cfg) != 1) bad("body_files: scan takes exactly one body");
    if (cfg.l_values.empty()) bad("l_values: scan needs at least one dimension");
    for (int l : cfg.l_values)
      if (l < 1) bad("l_values: dimensions must be at least 1");
    if (!cfg.seed) bad("seed: required for scan sampling");
  } else if (cfg.command == "cover") {
    if (source_count(cfg) != 2) bad("body_files: cover takes exactly two bodies");
    if (cfg.tgrid.empty()) bad("tgrid: cover needs a dilation grid");
  } else if (cfg.command == "check") {
    const bool group = cfg.inequality == "constant-free";
    if (cfg.inequality.empty())
      bad("inequality: required");
    else if (!group && !known_check(cfg.inequality))
      bad("inequality: unknown inequality '" + cfg.inequality + "'");
    const bool sweep_mode = !cfg.family.empty();
    if (sweep_mode) {
      if (!kFamilies.count(cfg.family))
        bad("family: unknown family '" + cfg.family + "'");
      if (source_count(cfg) != 0)
        bad("body_files: family sweeps take no body sources");
      if (!cfg.seed) bad("seed: required for family sweeps");
      if (cfg.n_lo < 1 || cfg.n_lo > cfg.n_hi) bad("n_lo: bad dimension range");
      if (cfg.l_lo < 1) bad("l_lo: must be at least 1");
    } else {
      if (source_count(cfg) != 1) bad("body_files: check takes exactly one body");
      const bool stochastic =
          group || !kGlobalChecks.count(cfg.inequality);
      if (stochastic && !cfg.seed)
        bad("seed: required for stochastic check '" + cfg.inequality + "'");
    }
  } else if (cfg.command == "report") {
    if (cfg.bundle_file.empty()) bad("bundle_file: report needs an input bundle");
    if (!kViews.count(cfg.view)) bad("view: unknown view '" + cfg.view + "'");
    if (cfg.out_csv.empty()) bad("out_csv: report requires an output path");
  }
  return errs;
}

std::string body_to_json_text(const Body& K) {
  Json j;
  j["n"] = K.dim();
  if (K.kind() == Body::Kind::vertices) {
    j["kind"] = "V";
    j["data"]["points"] = matrix_rows(K.vertex_matrix().transpose());
  } else if (K.kind() == Body::Kind::halfspaces) {
    j["kind"] = "H";
    j["data"]["normals"] = matrix_rows(K.normal_matrix());
    j["data"]["offsets"] = vector_values(K.offset_vector());
  } else {
    j["kind"] = "ellipsoid";
    j["data"]["center"] = vector_values(K.center());
    j["data"]["shape"] = matrix_rows(K.shape());
  }
  Json ordered;
  ordered["kind"] = j["kind"];
  ordered["n"] = j["n"];
  ordered["data"] = j["data"];
  return ordered.dump() + "\n";
}

Body body_from_json_text(const std::string& text, const Tolerances& tol) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("body json: parse failed: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind") || !j.contains("n") ||
      !j.contains("data"))
    throw PreconditionError("body json: need fields kind, n, data");
  if (!j["n"].is_number_integer() || j["n"].get<int>() < 1)
    throw PreconditionError("n: must be a positive integer");
  const int n = j["n"].get<int>();
  const std::string kind = j["kind"].is_string() ? j["kind"].get<std::string>() : "";
  const Json& data = j["data"];

  if (kind == "V") {
    if (!data.contains("points"))
      throw PreconditionError("data.points: required for kind V");
    const Matrix P = parse_matrix(data["points"], n, "data.points");
    return Body::from_vertices(P.transpose(), true, tol);
  }
  if (kind == "H") {
    if (!data.contains("normals") || !data.contains("offsets"))
      throw PreconditionError("data: kind H needs normals and offsets");
    const Matrix A = parse_matrix(data["normals"], n, "data.normals");
    const Vector b =
        parse_vector(data["offsets"], static_cast<int>(A.rows()), "data.offsets");
    return Body::from_halfspaces(A, b, true, tol);
  }
  if (kind == "ellipsoid") {
    if (!data.contains("center") || !data.contains("shape"))
      throw PreconditionError("data: kind ellipsoid needs center and shape");
    const Vector c = parse_vector(data["center"], n, "data.center");
    const Matrix S = parse_matrix(data["shape"], n, "data.shape");
    if (S.rows() != n) throw PreconditionError("data.shape: must be n x n");
    return Body::make_ellipsoid(c, S, tol);
  }
  throw PreconditionError("kind: must be one of V, H, ellipsoid");
}

Body load_body_file(const std::string& path, const Tolerances& tol) {
  try {
    return body_from_json_text(read_text_file(path), tol);
  } catch (const PreconditionError& e) {
    throw PreconditionError(path + ": " + e.what());
  }
}

ReportBundle run(const ExperimentConfig& cfg) {
  {
    const auto errs = validate(cfg);
    if (!errs.empty()) {
      std::string msg = "invalid config";
      for (const auto& e : errs) msg += "; " + e;
      throw PreconditionError(msg);
    }
  }

  ReportBundle out;
  out.config_hash = hex64(fnv1a(canonical_config(cfg)));

  Json doc;
  doc["schema"] = kBundleSchema;
  doc["version"] = kVersion;
  doc["command"] = cfg.command;
  doc["config_hash"] = out.config_hash;
  doc["config"] = config_json(cfg);

  Json records = Json::object();
  Json summary = Json::object();
  std::string csv;
  std::string body_text;  // gen only
  bool partial = false;
  int exit_code = 0;

  if (cfg.command == "gen") {
    const Body K = model_body(*cfg.model, cfg.seed);
    body_text = body_to_json_text(K);
    records["model"] = config_json(cfg)["model"];
    records["body"] = Json::parse(body_text);
    summary["n"] = K.dim();
    summary["kind"] = records["body"]["kind"];
    csv = "field,value\n";
    csv += "family," + cfg.model->family + "\n";
    csv += "n," + std::to_string(cfg.model->n) + "\n";
  } else if (cfg.command == "position") {
    const auto sources = load_sources(cfg);
    const auto& [id, K] = sources.front();
    Json pj;
    pj["body_id"] = id;
    pj["mode"] = cfg.mode;
    pj["provenance"] = "exact";
    Body positioned = K;
    if (cfg.mode == "regularize") {
      const auto [B, prof] = pos::regularize(K);
      positioned = B;
      Json rows = Json::array();
      csv = "t,logN_K_ball,logN_polar_ball,logN_ball_K,logN_ball_polar,max_logN\n";
      for (const auto& row : prof.rows) {
        Json r;
        r["t"] = row.t;
        r["logN"] = {row.logN[0], row.logN[1], row.logN[2], row.logN[3]};
        r["max_logN"] = row.max_logN;
        rows.push_back(std::move(r));
        csv += fmt(row.t);
        for (double v : row.logN) csv += "," + fmt(v);
        csv += "," + fmt(row.max_logN) + "\n";
      }
      Json prj;
      prj["n"] = prof.n;
      prj["saturated"] = prof.saturated;
      prj["regular"] = prof.regular;
      prj["beta"] = prof.beta;
      prj["D"] = prof.D;
      prj["fit_residual"] = prof.fit_residual;
      prj["rows"] = std::move(rows);
      pj["profile"] = std::move(prj);
      summary["regular"] = prof.regular;
      summary["saturated"] = prof.saturated;
    } else {
      const auto [B, rep] = [&]() {
        if (cfg.mode == "centre") return pos::centre(K);
        if (cfg.mode == "santalo") return pos::santalo_position(K);
        return pos::isotropic_position(K);
      }();
      positioned = B;
      pj["tag"] = rep.tag;
      pj["shift"] = vector_values(rep.v);
      pj["map"] = matrix_rows(rep.A);
      pj["barycentre_residual"] = rep.barycentre_residual;
      pj["anisotropy_residual"] = rep.anisotropy_residual;
      if (cfg.mode == "isotropic") pj["L"] = rep.L;
      const vol::MomentReport m = vol::moments(positioned);
      Json mj;
      mj["volume"] = m.volume;
      mj["barycentre"] = vector_values(m.barycentre);
      mj["isotropic_constant"] = m.isotropic_constant;
      mj["anisotropy"] = m.anisotropy;
      pj["moments"] = std::move(mj);
      csv = "field,value\n";
      csv += "mode," + cfg.mode + "\n";
      csv += "volume," + fmt(m.volume) + "\n";
      for (int i = 0; i < m.barycentre.size(); ++i)
        csv += "barycentre_" + std::to_string(i) + "," + fmt(m.barycentre[i]) + "\n";
      csv += "isotropic_constant," + fmt(m.isotropic_constant) + "\n";
      csv += "anisotropy," + fmt(m.anisotropy) + "\n";
      csv += "barycentre_residual," + fmt(rep.barycentre_residual) + "\n";
      csv += "anisotropy_residual," + fmt(rep.anisotropy_residual) + "\n";
      if (cfg.mode == "isotropic") csv += "L," + fmt(rep.L) + "\n";
      summary["volume"] = m.volume;
    }
    records["position"] = std::move(pj);
  } else if (cfg.command == "scan") {
    const auto sources = load_sources(cfg);
    const auto& [id, K] = sources.front();
    for (int l : cfg.l_values)
      if (l >= K.dim())
        throw PreconditionError("l_values: must be below the body dimension");
    Json scans = Json::array();
    csv =
        "l,kind,index,subspace_seed,vrad_projection,vrad_section,"
        "v_sup,v_inf,w_sup,w_inf\n";
    for (int l : cfg.l_values) {
      const std::uint64_t lseed = derive_seed(*cfg.seed, static_cast<std::uint64_t>(l));
      const sub::ScanReport rep = sub::vrad_scan(K, l, cfg.samples, lseed);
      partial = partial || rep.failures > 0;
      Json sj;
      sj["body_id"] = id;
      sj["l"] = rep.l;
      sj["samples"] = rep.samples;
      sj["failures"] = rep.failures;
      sj["seed"] = lseed;
      sj["provenance"] = "sampled";
      sj["v_sup"] = rep.v_sup;
      sj["v_inf"] = rep.v_inf;
      sj["w_sup"] = rep.w_sup;
      sj["w_inf"] = rep.w_inf;
      Json rows = Json::array();
      for (const auto& row : rep.rows) {
        Json rj;
        rj["index"] = row.index;
        rj["subspace_seed"] = row.subspace_seed;
        rj["vrad_projection"] = row.vrad_projection;
        rj["vrad_section"] = row.vrad_section;
        rows.push_back(std::move(rj));
        csv += std::to_string(rep.l) + ",sample," + std::to_string(row.index) +
               "," + std::to_string(row.subspace_seed) + "," +
               fmt(row.vrad_projection) + "," + fmt(row.vrad_section) + ",,,,\n";
      }
      sj["rows"] = std::move(rows);
      scans.push_back(std::move(sj));
      csv += std::to_string(rep.l) + ",summary,,,,," + fmt(rep.v_sup) + "," +
             fmt(rep.v_inf) + "," + fmt(rep.w_sup) + "," + fmt(rep.w_inf) + "\n";
    }
    records["scans"] = std::move(scans);
    summary["l_count"] = cfg.l_values.size();
  } else if (cfg.command == "cover") {
    const auto sources = load_sources(cfg);
    const Body& K = sources[0].second;
    const Body& L = sources[1].second;
    cov::CoveringProfile raw;
    raw.n = K.dim();
    Json rows = Json::array();
    Json errors = Json::array();
    csv = "t,lower,upper,method\n";
    for (double t : cfg.tgrid) {
      try {
        Json rj;
        rj["t"] = t;
        rj["provenance"] = "exact";
        if (cov::contained_in_dilate(K, L, t)) {
          rj["lower"] = 1.0;
          rj["upper"] = 1.0;
          rj["method"] = "containment";
          csv += fmt(t) + ",1,1,containment\n";
        } else {
          const cov::CoverBound b = cov::volumetric_covering_bounds(K, L, t);
          raw.rows.push_back(b);
          const double lo = std::max(1.0, b.lower);
          rj["lower"] = lo;
          rj["upper"] = b.upper;
          rj["method"] = b.method;
          csv += fmt(t) + "," + fmt(lo) + "," + fmt(b.upper) + "," + b.method + "\n";
        }
        rows.push_back(std::move(rj));
      } catch (const Error& e) {
        Json ej;
        ej["t"] = t;
        ej["error"] = e.what();
        errors.push_back(std::move(ej));
        partial = true;
      }
    }
    cov::fit_power_law(raw);
    Json pj;
    pj["n"] = raw.n;
    pj["K"] = sources[0].first;
    pj["L"] = sources[1].first;
    pj["rows"] = std::move(rows);
    if (raw.beta) {
      pj["beta"] = *raw.beta;
      pj["D"] = *raw.D;
      pj["fit_residual"] = raw.fit_residual;
    }
    if (!errors.empty()) pj["errors"] = std::move(errors);
    records["profile"] = std::move(pj);
    summary["rows"] = cfg.tgrid.size();
  } else if (cfg.command == "check") {
    CheckOutput co;
    const std::vector<std::string> names =
        cfg.inequality == "constant-free" ? kConstantFreeGroup
                                          : std::vector<std::string>{cfg.inequality};
    if (!cfg.family.empty()) {
      for (const std::string& name : names) {
        ineq::SweepRequest req;
        req.family = cfg.family;
        req.inequality = name;
        req.n_lo = cfg.n_lo;
        req.n_hi = cfg.n_hi;
        req.l_lo = cfg.l_lo;
        req.l_hi = cfg.l_hi;
        req.samples = cfg.samples;
        req.seed = *cfg.seed;
        for (const auto& r : ineq::sweep(req))
          co.add(r, "sampled", r.subspace_seed ? r.subspace_seed : *cfg.seed);
      }
    } else {
      const auto sources = load_sources(cfg);
      const auto& [id, K] = sources.front();
      for (const std::string& name : names)
        run_single_check(name, id, K, cfg, co);
    }
    partial = partial || co.partial;
    Json checks = Json::array();
    csv =
        "name,body_id,position_tag,provenance,seed,n,l,subspace_seed,"
        "lambda,lhs,rhs,ratio,constant_free,pass,implied_constant\n";
    long violations = 0;
    for (std::size_t i = 0; i < co.records.size(); ++i) {
      const auto& r = co.records[i];
      if (r.constant_free && !r.pass) ++violations;
      checks.push_back(record_json(r, co.provenance[i], co.seeds[i]));
      csv += check_csv_row(r, co.provenance[i], co.seeds[i]);
    }
    records["checks"] = std::move(checks);
    if (!co.errors.empty()) records["errors"] = co.errors;
    summary["records"] = co.records.size();
    summary["violations"] = violations;
    if (violations > 0) exit_code = 2;
  } else {  // report
    const std::string text = read_text_file(cfg.bundle_file);
    csv = emit_plot_data(text, cfg.view);
    records["view"] = cfg.view;
    records["source"] = cfg.bundle_file;
    summary["rows"] =
        std::count(csv.begin(), csv.end(), '\n') - (csv.empty() ? 0 : 1);
  }

  doc["partial_failure"] = partial;
  doc["exit_code"] = exit_code;
  doc["records"] = std::move(records);
  doc["summary"] = std::move(summary);

  out.json_text = doc.dump(2) + "\n";
  out.csv_text = csv;
  out.partial_failure = partial;
  out.exit_code = exit_code;

  if (!cfg.out_json.empty())
    write_text_file(cfg.out_json,
                    cfg.command == "gen" ? body_text : out.json_text);
  if (!cfg.out_csv.empty()) write_text_file(cfg.out_csv, out.csv_text);
  return out;
}

std::string emit_plot_data(const std::string& bundle_json_text,
                           const std::string& view) {
  Json doc;
  try {
    doc = Json::parse(bundle_json_text);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("bundle: parse failed: ") + e.what());
  }
  const Json records = doc.contains("records") ? doc["records"] : Json::object();

  if (view == "regularity") {
    std::string csv = "t,series,value,method\n";
    if (records.contains("profile") && records["profile"].contains("rows")) {
      for (const Json& r : records["profile"]["rows"]) {
        const double t = r["t"].get<double>();
        const std::string method = r["method"].get<std::string>();
        csv += fmt(t) + ",log_lower," + fmt(std::log(r["lower"].get<double>())) +
               "," + method + "\n";
        csv += fmt(t) + ",log_upper," + fmt(std::log(r["upper"].get<double>())) +
               "," + method + "\n";
      }
      return csv;
    }
    if (records.contains("position") && records["position"].contains("profile")) {
      static const char* series[4] = {"K_vs_ball", "polar_vs_ball", "ball_vs_K",
                                      "ball_vs_polar"};
      for (const Json& r : records["position"]["profile"]["rows"]) {
        const double t = r["t"].get<double>();
        for (int q = 0; q < 4; ++q)
          csv += fmt(t) + "," + series[q] + "," +
                 fmt(r["logN"][q].get<double>()) + ",m-position\n";
        csv += fmt(t) + ",max," + fmt(r["max_logN"].get<double>()) +
               ",m-position\n";
      }
      return csv;
    }
    throw PreconditionError("bundle: no regularity records in bundle");
  }
  if (view == "sweep") {
    if (!records.contains("checks"))
      throw PreconditionError("bundle: no inequality records in bundle");
    std::string csv = "n,l,name,body_id,provenance,value\n";
    for (const Json& r : records["checks"]) {
      const bool cf = r["constant_free"].get<bool>();
      const double value =
          cf ? r["ratio"].get<double>() : r["implied_constant"].get<double>();
      csv += std::to_string(r["n"].get<int>()) + "," +
             std::to_string(r["l"].get<int>()) + "," +
             r["name"].get<std::string>() + "," + r["body_id"].get<std::string>() +
             "," + r["provenance"].get<std::string>() + "," + fmt(value) + "\n";
    }
    return csv;
  }
  if (view == "scan") {
    if (!records.contains("scans"))
      throw PreconditionError("bundle: no scan records in bundle");
    std::string csv = "l,index,subspace_seed,vrad_projection,vrad_section\n";
    for (const Json& s : records["scans"]) {
      const int l = s["l"].get<int>();
      for (const Json& r : s["rows"]) {
        csv += std::to_string(l) + "," + std::to_string(r["index"].get<int>()) +
               "," + std::to_string(r["subspace_seed"].get<std::uint64_t>()) +
               "," + fmt(r["vrad_projection"].get<double>()) + "," +
               fmt(r["vrad_section"].get<double>()) + "\n";
      }
    }
    return csv;
  }
  throw PreconditionError("view: unknown view '" + view + "'");
}

}  // namespace covgeom::rep
