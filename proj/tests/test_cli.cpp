#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "radsob/cli.hpp"
#include "radsob/errors.hpp"

using namespace radsob;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "radsob_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string write_file(const std::string& name, const std::string& text) {
  const auto path = scratch(name);
  std::ofstream(path) << text;
  return path.string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "radsob");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

const char* kSmall = R"(
manifold.warp = "hyperbolic"   # comment after a value
manifold.N = 3
family.1.tag = gaussian
family.1.params = 1
family.2.tag = polynomial_bump
family.2.params = "[1.5, 1, 0.5, -0.25]"
families = "1, 2"
check.1.kind = decay_lemma
check.1.grid = 32
check.2.kind = identity
check.2.k = 2
check.2.grid = 16
check.2.warp = "euclidean, tanh_cap"
check.2.N = "2, 3"
check.3.kind = asymptotic_leading
check.3.k = 3
)";

}  // namespace

TEST(Config, ParsesSectionsAndExpands) {
  const auto cfg = parse_config(kSmall);
  ASSERT_EQ(cfg.checks.size(), 6u);
  EXPECT_EQ(cfg.checks[0].kind, CheckKind::decay_lemma);
  EXPECT_EQ(cfg.checks[0].families.size(), 2u);
  EXPECT_EQ(cfg.checks[0].families[1].family(), Family::polynomial_bump);
  EXPECT_EQ(cfg.checks[1].manifold.describe(), "euclidean(N=2, R=inf)");
  EXPECT_EQ(cfg.checks[4].manifold.describe(), "tanh_cap(N=3, R=inf)");
  EXPECT_EQ(cfg.checks[4].grid_points, 16);
  EXPECT_EQ(cfg.report_path, "report.json");
}

TEST(Config, CustomWarpAndFiniteRadius) {
  const auto cfg = parse_config(
      "manifold.warp = \"[1, 0.1666]\"\nmanifold.R = 2\nmanifold.N = 4\ncheck.1.kind = identity\ncheck.1.k = 1\n");
  EXPECT_EQ(cfg.checks[0].manifold.warp().kind(), WarpKind::custom_odd_series);
  EXPECT_DOUBLE_EQ(cfg.checks[0].manifold.warp().radius(), 2.0);
}

TEST(Config, InfinityToken) {
  const auto cfg = parse_config("manifold.warp = euclidean\nmanifold.R = \"inf\"\nmanifold.N = 2\ncheck.1.kind = identity\n");
  EXPECT_FALSE(cfg.checks[0].manifold.warp().bounded());
}

TEST(Config, Rejections) {
  const std::string base = "manifold.warp = euclidean\nmanifold.R = 1\nmanifold.N = 2\n";
  EXPECT_THROW(parse_config(base + "check.1.kind = radial_lemma_power\ncheck.1.k = 1\ncheck.1.p = 2\n"),
               InadmissibleError);
  EXPECT_THROW(parse_config("manifold.warp = lorentzian\nmanifold.N = 2\ncheck.1.kind = identity\n"), ConfigError);
  EXPECT_THROW(parse_config(base + "check.1.kind = identity\ncheck.1.colour = red\n"), ConfigError);
  EXPECT_THROW(parse_config(base + "check.1.kind = identity\ncheck.1.k = 1\ncheck.1.k = 2\n"), ConfigError);
  EXPECT_THROW(parse_config(base + "check.1.kind = identity\ncheck.1.k = two\n"), ConfigError);
  EXPECT_THROW(parse_config(base + "check.1.kind = nonsense\n"), ConfigError);
  EXPECT_THROW(parse_config(base), ConfigError);
  EXPECT_THROW(parse_config(base + "check.1.kind = identity\nfamilies = 7\n"), ConfigError);
  EXPECT_THROW(parse_config(base + "check.1.kind = hardy\ncheck.1.k = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("manifold.warp = euclidean\nmanifold.N = 12\ncheck.1.kind = identity\n"), ConfigError);
  EXPECT_THROW(parse_config("manifold.warp = spherical\nmanifold.R = 4\nmanifold.N = 2\ncheck.1.kind = identity\n"),
               ConfigError);
}

TEST(Config, DefaultSuiteCoversBuiltins) {
  const auto cfg = load_config(std::string(RADSOB_CONFIG_DIR) + "/default_suite.cfg");
  EXPECT_GE(cfg.checks.size(), 10u);
  std::set<std::string> warps;
  std::set<CheckKind> kinds;
  for (const auto& s : cfg.checks) {
    warps.insert(s.manifold.warp().tag());
    kinds.insert(s.kind);
  }
  EXPECT_EQ(warps, (std::set<std::string>{"euclidean", "hyperbolic", "spherical", "tanh_cap"}));
  EXPECT_EQ(kinds.size(), 10u);
}

TEST(Config, Overrides) {
  auto cfg = parse_config(kSmall);
  apply_overrides(cfg, {1e-8, 8});
  for (const auto& s : cfg.checks) {
    EXPECT_EQ(s.tol, 1e-8);
    EXPECT_EQ(s.grid_points, 8);
  }
  EXPECT_THROW(apply_overrides(cfg, {1e-20, std::nullopt}), ConfigError);
}

TEST(Cli, RunWritesReportAndExitsZero) {
  const auto cfg = write_file("small.cfg", kSmall);
  const auto out = scratch("small.json").string();
  EXPECT_EQ(run_cli({"run", cfg, "--out", out}), 0);
  const auto report = nlohmann::ordered_json::parse(read_file(out));
  std::vector<std::string> top;
  for (auto it = report.begin(); it != report.end(); ++it) top.push_back(it.key());
  EXPECT_EQ(top, (std::vector<std::string>{"run_meta", "checks"}));
  EXPECT_EQ(report["checks"].size(), 6u);
  EXPECT_TRUE(report["run_meta"].contains("timestamp"));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({"run", scratch("missing.cfg").string()}), 2);
  const auto bad = write_file("bad.cfg", "manifold.warp = moebius\nmanifold.N = 2\ncheck.1.kind = identity\n");
  EXPECT_EQ(run_cli({"run", bad}), 2);
  const auto inadmissible = write_file(
      "inadm.cfg", "manifold.warp = euclidean\nmanifold.R = 1\nmanifold.N = 2\ncheck.1.kind = radial_lemma_power\n");
  EXPECT_EQ(run_cli({"run", inadmissible}), 2);
  EXPECT_EQ(run_cli({"frobnicate"}), 2);
  EXPECT_EQ(run_cli({"dump", "curvature", write_file("small.cfg", kSmall)}), 2);
}

TEST(Cli, DeterministicModuloTimestamp) {
  const auto cfg = write_file("small.cfg", kSmall);
  const auto a = scratch("det_a.json").string(), b = scratch("det_b.json").string();
  ASSERT_EQ(run_cli({"run", cfg, "--out", a}), 0);
  ASSERT_EQ(run_cli({"run", cfg, "--out", b}), 0);
  auto strip = [](const std::string& path) {
    auto j = nlohmann::ordered_json::parse(read_file(path));
    j["run_meta"].erase("timestamp");
    for (auto& c : j["checks"]) c.erase("runtime_ms");
    return j.dump(2);
  };
  EXPECT_EQ(strip(a), strip(b));
}

TEST(Cli, DumpCsvMatchesReportWorstCase) {
  const auto cfg = write_file("small.cfg", kSmall);
  const auto report_path = scratch("dump_report.json").string();
  const auto csv_path = scratch("decay.csv").string();
  ASSERT_EQ(run_cli({"run", cfg, "--out", report_path}), 0);
  ASSERT_EQ(run_cli({"dump", "decay_ratio", cfg, "--out", csv_path}), 0);
  const auto report = nlohmann::ordered_json::parse(read_file(report_path));
  const auto& first = report["checks"][0]["measured"]["per_family"][0];
  std::istringstream csv(read_file(csv_path));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line.rfind("r,decay_ratio[", 0), 0u);
  int rows = 0;
  bool matched = false;
  while (std::getline(csv, line)) {
    ++rows;
    const auto comma = line.find(',');
    const double r = std::stod(line.substr(0, comma));
    const double v = std::stod(line.substr(comma + 1));
    if (r == first["r"].get<double>()) {
      EXPECT_EQ(v, first["value"].get<double>());
      matched = true;
    }
  }
  EXPECT_EQ(rows, 32);
  EXPECT_TRUE(matched);
}

TEST(Cli, CsvToggleWritesCurves) {
  const auto cfg = write_file(
      "csv.cfg",
      "manifold.warp = tanh_cap\nmanifold.R = 2\nmanifold.N = 2\noutput.csv = true\n"
      "check.1.kind = counterexample\ncheck.1.k = 3\ncheck.1.grid = 8\n");
  const auto out = scratch("csv_report.json").string();
  ASSERT_EQ(run_cli({"run", cfg, "--out", out}), 0);
  const auto curve = read_file(scratch("csv_report.check1.integrand.csv").string());
  EXPECT_EQ(curve.rfind("r,integrand[", 0), 0u);
}
