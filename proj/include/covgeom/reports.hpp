#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "covgeom/body.hpp"

namespace covgeom::rep {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kBundleSchema = "covgeom.bundle/1";

/// Inline body source, the alternative to a body file: a named model family
/// with its parameters. Random families consume the config seed.
struct ModelSource {
  std::string family;  // simplex | cube | cross | ball | b1 | random
  int n = 0;
  int m = 0;  // random family vertex count, 0 means 3n + 6
  double scale = 1.0;
};

/// One fully described run of a subcommand. Paths are used as given; the
/// front end resolves relative paths against the output directory before
/// filling them in. Empty output paths mean "do not write that file".
struct ExperimentConfig {
  std::string command;  // gen | position | scan | cover | check | report

  std::vector<std::string> body_files;
  std::optional<ModelSource> model;

  std::string mode;        // position: centre | santalo | isotropic | regularize
  std::string inequality;  // check: record name or the "constant-free" group
  std::string family;      // check: sweep family, empty means single-body mode
  std::string view;        // report: regularity | sweep | scan
  std::string bundle_file; // report: input bundle

  std::vector<double> tgrid;   // cover dilation grid
  std::vector<int> l_values;   // scan subspace dimensions
  int n_lo = 2;                // check sweep ranges
  int n_hi = 4;
  int l_lo = 1;
  int l_hi = 0;  // 0 means n - 1

  int samples = 10;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol_equality;     // tolerance overrides for loaded bodies
  std::optional<double> tol_feasibility;

  std::string out_json;  // bundle (body file for gen)
  std::string out_csv;   // primary table
};

/// Configuration problems as "field: message" lines; empty means valid.
std::vector<std::string> validate(const ExperimentConfig& cfg);

/// The result of a run: the schema-versioned JSON bundle, the primary CSV
/// table, and the exit status (0 all-pass, 2 constant-free violation,
/// 3 execution error). `partial_failure` marks bundles where some records
/// failed to evaluate but the run carried on.
struct ReportBundle {
  std::string json_text;
  std::string csv_text;
  std::string config_hash;
  bool partial_failure = false;
  int exit_code = 0;
};

/// Validates, executes the subcommand, writes the requested files, and
/// returns the bundle. Identical config (seed included) gives byte-identical
/// outputs. Throws PreconditionError listing every validation failure;
/// execution errors on the requested item surface as the thrown error.
ReportBundle run(const ExperimentConfig& cfg);

/// Tidy plot CSV from a bundle document. Views: "regularity" (t, series,
/// value rows from covering or M-position profiles), "sweep" (n, l, value
/// rows from inequality records), "scan" (per-subspace volume-radius rows).
std::string emit_plot_data(const std::string& bundle_json_text,
                           const std::string& view);

/// Body file format used by every subcommand:
///   {"kind": "V" | "H" | "ellipsoid", "n": int, "data": {...}}
/// with row-major matrices: V carries data.points (one point per row), H
/// carries data.normals and data.offsets, ellipsoid carries data.center and
/// data.shape. Doubles round-trip exactly.
std::string body_to_json_text(const Body& K);
Body body_from_json_text(const std::string& text,
                         const Tolerances& tol = Tolerances{});

Body load_body_file(const std::string& path,
                    const Tolerances& tol = Tolerances{});

}  // namespace covgeom::rep
