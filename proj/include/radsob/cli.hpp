#pragma once

/// \file
/// Flat dotted key = value run configuration, JSON report assembly, CSV
/// curve output and the command-line entry point.
///
/// Config keys (values may be quoted; '#' starts a comment):
///   manifold.warp    tag, or an odd coefficient list "[1, a3, a5, ...]"
///   manifold.R       real or "inf"; defaults to the warp's natural radius
///   manifold.N       integer
///   families         "default" or a list of family indices, e.g. "1, 3"
///   family.<i>.tag / .params / .amplitude
///   check.<i>.kind   check kind; further keys k, p, q, theta, j, space,
///                    diagnostic, grid, tol, label, families, and the
///                    manifold overrides warp, R, N
///   output.report    report path; output.csv = true writes one curve per check
///
/// check.<i>.warp, .N and .p accept comma lists; the check is expanded over
/// their cartesian product in the order warp, N, p.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "radsob/verify.hpp"

namespace radsob {

struct RunConfig {
  std::vector<CheckSpec> checks;
  std::string report_path = "report.json";
  bool csv = false;
};

struct Overrides {
  std::optional<double> tol;
  std::optional<int> grid;
};

/// Throws ConfigError (or InadmissibleError) on malformed or inadmissible input.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
void apply_overrides(RunConfig& cfg, const Overrides& o);

/// Curve dumped for a check kind by output.csv.
std::optional<ProfileQuantity> natural_profile(CheckKind kind);

nlohmann::ordered_json make_report(const std::vector<ReportEntry>& entries, const std::string& config_path);
void write_csv(std::ostream& os, const Profile& profile);

/// Full command line; returns the process exit code (0 pass, 1 fail, 2 config error).
int cli_main(int argc, char** argv);

}  // namespace radsob
