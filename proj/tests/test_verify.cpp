#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "radsob/errors.hpp"
#include "radsob/norms.hpp"
#include "radsob/verify.hpp"

using namespace radsob;

namespace {

CheckSpec make(CheckKind kind, WarpSpec w, int n, int k, double p) {
  CheckSpec s;
  s.kind = kind;
  s.manifold = ManifoldSpec(std::move(w), n);
  s.families = default_families(s.manifold.warp());
  s.k = k;
  s.p = p;
  return s;
}

double num(const nlohmann::ordered_json& j) { return j.get<double>(); }

}  // namespace

TEST(Grid, DefaultEndpoints) {
  const auto g = default_r_grid(WarpSpec::euclidean(1.0), 256);
  EXPECT_EQ(g.r.size(), 256u);
  EXPECT_DOUBLE_EQ(g.r.front(), 1e-3);
  EXPECT_DOUBLE_EQ(g.r.back(), 0.999);
  const auto big = default_r_grid(WarpSpec::euclidean(100.0), 16);
  EXPECT_DOUBLE_EQ(big.r.front(), 1e-2);
  const auto h = default_r_grid(WarpSpec::hyperbolic(), 16);
  EXPECT_DOUBLE_EQ(h.r.back(), tail_cutoff(WarpSpec::hyperbolic()));
}

TEST(Grid, RefinementInsertsGeometricMidpoints) {
  const auto g = default_r_grid(WarpSpec::tanh_cap(2.0), 9);
  const auto f = refine_grid(g);
  ASSERT_EQ(f.r.size(), 17u);
  for (std::size_t i = 0; i < g.r.size(); ++i) EXPECT_EQ(f.r[2 * i], g.r[i]);
  EXPECT_NEAR(f.r[1], std::sqrt(g.r[0] * g.r[1]), 1e-15);
}

TEST(Sampling, ScaleFactors) {
  const auto base = std::vector{RadialFunction::gaussian(1.0), RadialFunction::linear()};
  const auto s0 = sample_families(base, 0);
  const auto s1 = sample_families(base, 1);
  ASSERT_EQ(s0.size(), 3u);
  ASSERT_EQ(s1.size(), 4u);
  EXPECT_DOUBLE_EQ(s0[1].params()[0], 2.0);
  EXPECT_DOUBLE_EQ(s1[1].params()[0], std::numbers::sqrt2);
  EXPECT_EQ(s0[0].describe(), base[0].describe());
}

TEST(CheckIdentity, HyperbolicThreeFamilies) {
  auto s = make(CheckKind::identity, WarpSpec::hyperbolic(), 3, 3, 2.0);
  const auto e = run_check(s);
  EXPECT_EQ(e.verdict, "pass");
  EXPECT_LE(num(e.measured["max_rel_gap"]), 1e-10);
}

TEST(CheckIdentity, FirstOrderGapIsZero) {
  auto s = make(CheckKind::identity, WarpSpec::spherical(), 4, 1, 2.0);
  const auto e = run_check(s);
  EXPECT_EQ(e.verdict, "pass");
  EXPECT_EQ(num(e.measured["max_rel_gap"]), 0.0);
}

TEST(CheckIdentity, TanhCapFourthOrder) {
  auto s = make(CheckKind::identity, WarpSpec::tanh_cap(), 4, 4, 2.0);
  s.grid_points = 64;
  EXPECT_EQ(run_check(s).verdict, "pass");
}

TEST(CheckGradient, AllBuiltinsPass) {
  for (const auto& w : {WarpSpec::euclidean(), WarpSpec::hyperbolic(), WarpSpec::spherical(), WarpSpec::tanh_cap()}) {
    auto s = make(CheckKind::gradient_inequality, w, 3, 4, 2.0);
    s.grid_points = 32;
    const auto e = run_check(s);
    EXPECT_EQ(e.verdict, "pass") << w.tag();
    EXPECT_EQ(num(e.measured["min_margin_by_rank"][0]), 0.0);
  }
}

TEST(CheckGradient, HessianSlackPositive) {
  auto s = make(CheckKind::gradient_inequality, WarpSpec::euclidean(), 3, 2, 2.0);
  s.families = {RadialFunction::polynomial_bump(kInf, {0.0, 0.0, 0.5})};
  s.grid_points = 16;
  const auto e = run_check(s);
  EXPECT_EQ(e.verdict, "pass");
  // |Hess|^2 = N for t^2/2, radial part 1: margin sqrt(3) - 1.
  EXPECT_NEAR(num(e.measured["min_margin_by_rank"][2]), std::sqrt(3.0) - 1.0, 1e-12);
}

TEST(CheckK1, HyperbolicGaussian) {
  auto s = make(CheckKind::k1_norm_equality, WarpSpec::hyperbolic(), 3, 1, 2.0);
  s.families = {RadialFunction::gaussian(1.0)};
  const auto e = run_check(s);
  EXPECT_EQ(e.verdict, "pass");
}

TEST(CheckK1, ZeroFunction) {
  auto s = make(CheckKind::k1_norm_equality, WarpSpec::euclidean(1.0), 3, 1, 2.0);
  s.families = {RadialFunction::gaussian(1.0, 0.0)};
  const auto e = run_check(s);
  EXPECT_EQ(e.verdict, "pass");
  EXPECT_EQ(num(e.measured["max_rel_gap"]), 0.0);
}

TEST(CheckK1, EuclideanBumpP1) {
  auto s = make(CheckKind::k1_norm_equality, WarpSpec::euclidean(), 5, 1, 1.0);
  s.families = {RadialFunction::polynomial_bump(1.0, {1.0})};
  EXPECT_EQ(run_check(s).verdict, "pass");
}

TEST(CheckK1, InfiniteFamiliesSkipped) {
  auto s = make(CheckKind::k1_norm_equality, WarpSpec::hyperbolic(), 3, 1, 2.0);
  const auto e = run_check(s);
  EXPECT_EQ(e.verdict, "pass");
  EXPECT_FALSE(e.measured["skipped_infinite_norm"].empty());
}

TEST(CheckRadialLemma, PowerEuclidean) {
  auto s = make(CheckKind::radial_lemma_power, WarpSpec::euclidean(1.0), 3, 1, 2.0);
  const auto e = run_check(s);
  EXPECT_EQ(e.verdict, "pass");
  EXPECT_TRUE(e.measured["constant"].is_number());
}

TEST(CheckRadialLemma, LogTanhCap) {
  auto s = make(CheckKind::radial_lemma_log, WarpSpec::tanh_cap(2.0), 4, 2, 2.0);
  const auto e = run_check(s);
  EXPECT_EQ(e.verdict, "pass");
}

TEST(CheckRadialLemma, Homogeneity) {
  auto s = make(CheckKind::radial_lemma_power, WarpSpec::euclidean(1.0), 3, 1, 2.0);
  s.families = {RadialFunction::gaussian(1.0)};
  const double c1 = num(run_check(s).measured["constant"]);
  s.families = {RadialFunction::gaussian(1.0, 2.0)};
  const double c2 = num(run_check(s).measured["constant"]);
  EXPECT_NEAR(c2, c1, 1e-12 * c1);
}

TEST(CheckRadialLemma, Guards) {
  auto s = make(CheckKind::radial_lemma_power, WarpSpec::euclidean(1.0), 2, 1, 2.0);
  EXPECT_THROW(validate(s), InadmissibleError);
  s = make(CheckKind::radial_lemma_log, WarpSpec::euclidean(1.0), 3, 1, 2.0);
  EXPECT_THROW(validate(s), InadmissibleError);
  s = make(CheckKind::radial_lemma_power, WarpSpec::euclidean(), 3, 1, 2.0);
  EXPECT_THROW(validate(s), InadmissibleError);
  // sin vanishes at pi.
  s = make(CheckKind::radial_lemma_power, WarpSpec::spherical(), 3, 1, 2.0);
  EXPECT_THROW(validate(s), InadmissibleError);
}

TEST(CheckDecay, HyperbolicGaussianPrefactor) {
  auto s = make(CheckKind::decay_lemma, WarpSpec::hyperbolic(), 3, 1, 2.0);
  s.families = {RadialFunction::gaussian(1.0)};
  const auto e = run_check(s);
  EXPECT_EQ(e.verdict, "pass");
  EXPECT_LE(num(e.measured["max_ratio"]), 1.0);
  EXPECT_NEAR(num(e.measured["prefactor"]), std::sqrt(2.0 / (4.0 * std::numbers::pi)), 1e-15);
}

TEST(CheckDecay, EuclideanPlaneStrauss) {
  auto s = make(CheckKind::decay_lemma, WarpSpec::euclidean(), 2, 1, 2.0);
  const auto e = run_check(s);
  EXPECT_EQ(e.verdict, "pass");
  EXPECT_NEAR(num(e.measured["prefactor"]), std::sqrt(2.0 / (2.0 * std::numbers::pi)), 1e-15);
}

TEST(CheckDecay, ZeroFunctionSkipsPoints) {
  auto s = make(CheckKind::decay_lemma, WarpSpec::hyperbolic(), 3, 1, 2.0);
  s.families = {RadialFunction::gaussian(1.0), RadialFunction::gaussian(1.0, 0.0)};
  s.grid_points = 32;
  const auto e = run_check(s);
  EXPECT_EQ(e.verdict, "pass");
  EXPECT_EQ(e.measured["zero_points_skipped"].get<int>(), 32);
}

TEST(CheckDecay, Guards) {
  auto s = make(CheckKind::decay_lemma, WarpSpec::euclidean(1.0), 3, 1, 2.0);
  EXPECT_THROW(validate(s), InadmissibleError);
  s = make(CheckKind::decay_lemma, WarpSpec::euclidean(), 3, 2, 2.0);
  EXPECT_THROW(validate(s), InadmissibleError);
}

TEST(CheckHardy, ClassicalRegime) {
  auto s = make(CheckKind::hardy, WarpSpec::euclidean(1.0), 3, 1, 2.0);
  s.j = 1;
  const auto e = run_check(s);
  EXPECT_EQ(e.verdict, "pass");
}

TEST(CheckHardy, TermInclusion) {
  auto s = make(CheckKind::hardy, WarpSpec::euclidean(1.0), 3, 2, 2.0);
  s.j = 0;
  const auto e = run_check(s);
  EXPECT_EQ(e.verdict, "pass");
  EXPECT_LE(num(e.measured["constant"]), 1.0 + 1e-10);
}

TEST(CheckHardy, TanhCapSecondOrder) {
  auto s = make(CheckKind::hardy, WarpSpec::tanh_cap(2.0), 5, 2, 2.0);
  s.j = 2;
  EXPECT_EQ(run_check(s).verdict, "pass");
}

TEST(CheckHardy, Guard) {
  auto s = make(CheckKind::hardy, WarpSpec::euclidean(1.0), 3, 2, 2.0);
  s.j = 2;
  EXPECT_THROW(validate(s), InadmissibleError);
}

TEST(CheckEmbedding, SobolevCriticalBall) {
  auto s = make(CheckKind::embedding_ratio, WarpSpec::euclidean(1.0), 3, 1, 2.0);
  s.q = 6.0;
  const auto e = run_check(s);
  EXPECT_EQ(e.verdict, "pass");
  EXPECT_TRUE(e.measured["constant"].is_number());
}

TEST(CheckEmbedding, HyperbolicWeightedCritical) {
  auto s = make(CheckKind::embedding_ratio, WarpSpec::hyperbolic(), 4, 1, 2.0);
  s.theta = 1.0;
  s.q = 5.0;
  const auto e = run_check(s);
  EXPECT_EQ(e.verdict, "pass");
  EXPECT_TRUE(e.measured["endpoints"].contains("q_upper"));
}

TEST(CheckEmbedding, TermInclusionAtQEqualsP) {
  auto s = make(CheckKind::embedding_ratio, WarpSpec::hyperbolic(), 3, 1, 2.0);
  s.q = 2.0;
  const auto e = run_check(s);
  EXPECT_LE(num(e.measured["constant"]), 1.0 + 1e-10);
  EXPECT_LE(num(e.measured["endpoints"]["q_equals_p"]), 1.0 + 1e-10);
}

TEST(CheckEmbedding, RangeGuardsAndDiagnostic) {
  auto s = make(CheckKind::embedding_ratio, WarpSpec::euclidean(1.0), 3, 1, 2.0);
  s.q = 7.0;
  EXPECT_THROW(validate(s), InadmissibleError);
  s.diagnostic = true;
  s.families = {RadialFunction::gaussian(1.0)};
  EXPECT_EQ(run_check(s).verdict, "diagnostic");
  s = make(CheckKind::embedding_ratio, WarpSpec::hyperbolic(), 3, 1, 2.0);
  s.q = 1.5;
  EXPECT_THROW(validate(s), InadmissibleError);
  s = make(CheckKind::embedding_ratio, WarpSpec::euclidean(1.0), 4, 1, 2.0);
  s.space = EmbeddingSpace::interval;
  s.theta = 0.5;
  EXPECT_THROW(validate(s), InadmissibleError);
  s.theta = 1.0;
  s.q = (1.0 + 1.0) * 2.0 / 2.0;
  EXPECT_NO_THROW(validate(s));
}

TEST(CheckCounterexample, TanhCapPowerLaw) {
  auto s = make(CheckKind::counterexample, WarpSpec::tanh_cap(2.0), 2, 3, 2.0);
  s.families = {RadialFunction::linear()};
  const auto e = run_check(s);
  EXPECT_EQ(e.verdict, "pass");
  EXPECT_NEAR(num(e.measured["exponent"]), 2.0, 0.04);
  EXPECT_TRUE(e.measured["interval_norm_finite"].get<bool>());
}

TEST(CheckCounterexample, LogLaw) {
  auto s = make(CheckKind::counterexample, WarpSpec::tanh_cap(2.0), 3, 2, 3.0);
  s.families = {RadialFunction::linear()};
  const auto e = run_check(s);
  EXPECT_EQ(e.verdict, "pass");
  EXPECT_EQ(e.measured["law"], "log");
}

TEST(CheckCounterexample, EquivalenceRegimeRejected) {
  auto s = make(CheckKind::counterexample, WarpSpec::euclidean(1.0), 4, 2, 2.0);
  s.families = {RadialFunction::linear()};
  EXPECT_THROW(validate(s), InadmissibleError);
}

TEST(CheckAsymptotic, Values) {
  auto s = make(CheckKind::asymptotic_leading, WarpSpec::hyperbolic(), 3, 2, 2.0);
  auto e = run_check(s);
  EXPECT_EQ(e.verdict, "pass");
  EXPECT_EQ(num(e.measured["ratio_fine"]), 1.0);
  s.k = 3;
  e = run_check(s);
  EXPECT_EQ(e.verdict, "pass");
  EXPECT_NEAR(num(e.measured["ratio_fine"]), -1.0, 0.01);
  s = make(CheckKind::asymptotic_leading, WarpSpec::euclidean(), 3, 4, 2.0);
  e = run_check(s);
  EXPECT_EQ(e.verdict, "pass");
  EXPECT_NEAR(num(e.measured["ratio_fine"]), 2.0, 0.02);
}

TEST(Profiles, LinearNormProfileIsStraightLine) {
  auto s = make(CheckKind::identity, WarpSpec::hyperbolic(), 3, 1, 2.0);
  s.families = {RadialFunction::linear()};
  s.j = 0;
  s.grid_points = 16;
  const auto prof = compute_profile(ProfileQuantity::norm_profile, s);
  for (std::size_t i = 0; i < prof.r.size(); ++i) EXPECT_EQ(prof.value[i], prof.r[i]);
  EXPECT_EQ(prof.name.find(','), std::string::npos);
}

TEST(Profiles, DecayRatioMatchesReport) {
  auto s = make(CheckKind::decay_lemma, WarpSpec::hyperbolic(), 3, 1, 2.0);
  s.families = {RadialFunction::gaussian(1.0)};
  const auto e = run_check(s);
  const auto prof = compute_profile(ProfileQuantity::decay_ratio, s);
  const double r = num(e.measured["per_family"][0]["r"]);
  const double v = num(e.measured["per_family"][0]["value"]);
  bool found = false;
  for (std::size_t i = 0; i < prof.r.size(); ++i) {
    EXPECT_LE(prof.value[i], 1.0);
    if (prof.r[i] == r) {
      EXPECT_EQ(prof.value[i], v);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Profiles, LemmaRatioMatchesReport) {
  auto s = make(CheckKind::radial_lemma_power, WarpSpec::euclidean(1.0), 3, 1, 2.0);
  const auto e = run_check(s);
  const auto prof = compute_profile(ProfileQuantity::lemma_ratio, s);
  const auto& first = e.measured["per_family"][0];
  const auto it = std::find(prof.r.begin(), prof.r.end(), num(first["r"]));
  ASSERT_NE(it, prof.r.end());
  EXPECT_EQ(prof.value[static_cast<std::size_t>(it - prof.r.begin())], num(first["value"]));
}

TEST(Profiles, CounterexampleIntegrandBlowsUpLikeCube) {
  auto s = make(CheckKind::counterexample, WarpSpec::tanh_cap(2.0), 2, 3, 2.0);
  s.families = {RadialFunction::linear()};
  const auto prof = compute_profile(ProfileQuantity::integrand, s);
  EXPECT_NEAR(prof.value.front() * std::pow(prof.r.front(), 3.0), 1.0, 1e-5);
}

TEST(Report, JsonFieldsAndInfinity) {
  auto s = make(CheckKind::asymptotic_leading, WarpSpec::euclidean(), 3, 3, 2.0);
  const auto j = run_check(s).to_json();
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"kind", "params", "verdict", "measured", "worst_case", "grid", "runtime_ms"}));
  EXPECT_EQ(json_number(kInf), "inf");
  EXPECT_EQ(j["params"]["R"], "inf");
}
