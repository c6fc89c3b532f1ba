#pragma once

/// \file
/// Numerical checks of the structural identities and inequalities for radial
/// functions, each producing a report entry with a verdict and the measured
/// constant together with the grid and tolerance that produced it.

#include <string>
#include <vector>

#include "json.hpp"
#include "radsob/manifold.hpp"
#include "radsob/radial.hpp"

namespace radsob {

enum class CheckKind {
  identity,
  gradient_inequality,
  k1_norm_equality,
  radial_lemma_power,
  radial_lemma_log,
  decay_lemma,
  hardy,
  embedding_ratio,
  counterexample,
  asymptotic_leading
};

std::string to_string(CheckKind kind);
CheckKind check_kind_from_string(const std::string& tag);

/// Target of embedding_ratio: the manifold norms or the weighted interval norms.
enum class EmbeddingSpace { manifold, interval };

std::string to_string(EmbeddingSpace space);
EmbeddingSpace embedding_space_from_string(const std::string& tag);

struct CheckSpec {
  CheckKind kind = CheckKind::identity;
  ManifoldSpec manifold{WarpSpec::euclidean(1.0), 3};
  std::vector<RadialFunction> families;
  int k = 1;
  double p = 2.0;
  double q = 2.0;
  double theta = 0.0;
  /// Hardy order j, or the rank shown by the norm_profile dump (-1: use k).
  int j = -1;
  EmbeddingSpace space = EmbeddingSpace::manifold;
  int grid_points = 256;
  double tol = 1e-10;
  /// Skip the embedding range guard; the entry is reported as non-normative.
  bool diagnostic = false;
  std::string label;
};

/// gaussian, power_decay, polynomial_bump, log_profile and linear members
/// sized for the warp's radius.
std::vector<RadialFunction> default_families(const WarpSpec& w);

/// Throws InadmissibleError when the parameters fall outside the hypotheses
/// of the checked statement, ConfigError for malformed specs.
void validate(const CheckSpec& spec);

struct RGrid {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> r;
};

/// Log-spaced points on [max(1e-3, R/1e4), min(0.999 R, tail cutoff)].
RGrid default_r_grid(const WarpSpec& w, int points);
/// Inserts the geometric midpoint of every adjacent pair.
RGrid refine_grid(const RGrid& grid);

/// Level 0 multiplies each shape parameter by {1, 2}; level 1 by {1, sqrt 2, 2}.
std::vector<double> sampling_factors(int level);
std::vector<RadialFunction> sample_families(const std::vector<RadialFunction>& families, int level);

struct ReportEntry {
  std::string kind;
  std::string label;
  /// pass, fail, or diagnostic (never counted as a failure).
  std::string verdict;
  nlohmann::ordered_json params;
  nlohmann::ordered_json measured;
  nlohmann::ordered_json worst_case;
  nlohmann::ordered_json grid;
  double runtime_ms = 0.0;

  bool failed() const { return verdict == "fail"; }
  nlohmann::ordered_json to_json() const;
};

/// Validates and runs one check.
ReportEntry run_check(const CheckSpec& spec);
/// Runs independent checks concurrently; entries keep the input order.
std::vector<ReportEntry> run_checks(const std::vector<CheckSpec>& specs);

enum class ProfileQuantity { norm_profile, decay_ratio, lemma_ratio, integrand };

std::string to_string(ProfileQuantity q);
ProfileQuantity profile_quantity_from_string(const std::string& tag);

struct Profile {
  std::string name;  ///< quantity and parameters, free of commas
  std::vector<double> r;
  std::vector<double> value;
};

/// Pointwise curve behind a check, on the check's level-0 grid and for its
/// first admissible family; values agree bit for bit with the per-family
/// entries of the corresponding report.
Profile compute_profile(ProfileQuantity quantity, const CheckSpec& spec);

/// Finite numbers as JSON numbers; infinities and NaN as strings.
nlohmann::ordered_json json_number(double x);

}  // namespace radsob
