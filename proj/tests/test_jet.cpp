#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "radsob/errors.hpp"
#include "radsob/jet.hpp"

namespace radsob {
namespace {

BasePoint at(std::vector<double> x) { return BasePoint(std::move(x)); }

MultiIndex mi(std::initializer_list<int> v) {
  MultiIndex a{};
  std::size_t i = 0;
  for (int x : v) a[i++] = static_cast<std::uint8_t>(x);
  return a;
}

TEST(Jet, AdditionCancels) {
  const auto b = at({0.0});
  const Jet x = Jet::variable(1, 2, b, 0);
  const Jet lhs = x.plus_constant(1.0 - x.value());
  const Jet rhs = (-1.0 * x).plus_constant(2.0);
  const Jet sum = lhs + rhs;
  EXPECT_DOUBLE_EQ(sum.value(), 3.0);
  EXPECT_EQ(sum.coeff(mi({1})), 0.0);
  EXPECT_EQ(sum.coeff(mi({2})), 0.0);
}

TEST(Jet, AddZeroIsIdentity) {
  const auto b = at({0.3, 0.7});
  const Jet a = sin(Jet::variable(2, 3, b, 0)) * Jet::variable(2, 3, b, 1);
  const Jet s = a + Jet::zero(2, 3, b);
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) EXPECT_EQ(s.coeffs()[i], a.coeffs()[i]);
}

TEST(Jet, SumOfVariables) {
  const auto b = at({0.0, 0.0});
  const Jet s = Jet::variable(2, 1, b, 0) + Jet::variable(2, 1, b, 1);
  EXPECT_EQ(s.coeff(mi({1, 0})), 1.0);
  EXPECT_EQ(s.coeff(mi({0, 1})), 1.0);
  EXPECT_EQ(s.value(), 0.0);
}

TEST(Jet, BinomialSquare) {
  const auto b = at({0.0});
  const Jet y = Jet::variable(1, 2, b, 0).plus_constant(1.0);
  const Jet sq = y * y;
  EXPECT_DOUBLE_EQ(sq.coeffs()[0], 1.0);
  EXPECT_DOUBLE_EQ(sq.coeffs()[1], 2.0);
  EXPECT_DOUBLE_EQ(sq.coeffs()[2], 1.0);
}

TEST(Jet, MultiplyByOne) {
  const auto b = at({0.5});
  const Jet a = exp(Jet::variable(1, 4, b, 0));
  const Jet p = a * Jet::constant(1, 4, b, 1.0);
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) EXPECT_EQ(p.coeffs()[i], a.coeffs()[i]);
}

TEST(Jet, CrossProduct) {
  const auto b = at({0.0, 0.0});
  const Jet p = Jet::variable(2, 2, b, 0) * Jet::variable(2, 2, b, 1);
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
    const double expected = p.layout().monomial(i) == mi({1, 1}) ? 1.0 : 0.0;
    EXPECT_EQ(p.coeffs()[i], expected);
  }
}

TEST(Jet, ResultOrderIsMinimum) {
  const auto b = at({1.0});
  const Jet a = Jet::variable(1, 4, b, 0);
  const Jet c = Jet::variable(1, 2, b, 0);
  EXPECT_EQ((a * c).order(), 2);
  EXPECT_EQ((a + c).order(), 2);
}

TEST(Jet, MismatchedVariablesThrow) {
  const Jet a = Jet::variable(1, 2, at({0.0}), 0);
  const Jet c = Jet::variable(2, 2, at({0.0, 0.0}), 0);
  EXPECT_THROW(a + c, DimensionError);
  EXPECT_THROW(a * c, DimensionError);
}

TEST(Jet, MismatchedBaseThrows) {
  const Jet a = Jet::variable(1, 2, at({0.0}), 0);
  const Jet c = Jet::variable(1, 2, at({1.0}), 0);
  EXPECT_THROW(a + c, DimensionError);
}

TEST(Jet, SinAtHalfPi) {
  const double c = std::numbers::pi / 2;
  const Jet s = sin(Jet::variable(1, 2, at({c}), 0));
  EXPECT_NEAR(s.coeffs()[0], 1.0, 1e-16);
  EXPECT_NEAR(s.coeffs()[1], 0.0, 1e-16);
  EXPECT_NEAR(s.coeffs()[2], -0.5, 1e-16);
}

TEST(Jet, ExpSeries) {
  const Jet e = exp(Jet::variable(1, 3, at({0.0}), 0));
  EXPECT_DOUBLE_EQ(e.coeffs()[0], 1.0);
  EXPECT_DOUBLE_EQ(e.coeffs()[1], 1.0);
  EXPECT_DOUBLE_EQ(e.coeffs()[2], 0.5);
  EXPECT_DOUBLE_EQ(e.coeffs()[3], 1.0 / 6.0);
}

TEST(Jet, ReciprocalGeometric) {
  const Jet r = recip(Jet::variable(1, 2, at({0.0}), 0).plus_constant(2.0));
  EXPECT_DOUBLE_EQ(r.coeffs()[0], 0.5);
  EXPECT_DOUBLE_EQ(r.coeffs()[1], -0.25);
  EXPECT_DOUBLE_EQ(r.coeffs()[2], 0.125);
}

TEST(Jet, SingularCompositions) {
  const Jet x = Jet::variable(1, 2, at({0.0}), 0);
  EXPECT_THROW(recip(x), SingularCompositionError);
  EXPECT_THROW(log(x), SingularCompositionError);
  EXPECT_THROW(log(x.plus_constant(-1.0)), DomainError);
}

TEST(Jet, TanhSeriesMatchesDerivatives) {
  const double c = 0.7;
  const auto a = analytic_series({Analytic::tanh}, c, 3);
  const double t = std::tanh(c);
  const double s2 = 1 - t * t;
  EXPECT_NEAR(a[0], t, 1e-15);
  EXPECT_NEAR(a[1], s2, 1e-15);
  EXPECT_NEAR(a[2], -t * s2, 1e-15);
  EXPECT_NEAR(a[3], (-2 * s2 * s2 + 4 * t * t * s2) / 6.0, 1e-15);
}

TEST(Jet, PowMatchesBinomial) {
  const auto a = analytic_series({Analytic::pow, -1.5}, 2.0, 2);
  EXPECT_NEAR(a[0], std::pow(2.0, -1.5), 1e-15);
  EXPECT_NEAR(a[1], -1.5 * std::pow(2.0, -2.5), 1e-15);
  EXPECT_NEAR(a[2], -1.5 * -2.5 / 2 * std::pow(2.0, -3.5), 1e-15);
}

TEST(JetPartial, ProductXY) {
  const auto b = at({2.0, 3.0});
  const Jet xy = Jet::variable(2, 2, b, 0) * Jet::variable(2, 2, b, 1);
  const Jet d = partial(xy, 0);
  EXPECT_EQ(d.order(), 1);
  EXPECT_DOUBLE_EQ(d.value(), 3.0);
  EXPECT_DOUBLE_EQ(d.coeff(mi({0, 1})), 1.0);
  EXPECT_DOUBLE_EQ(d.coeff(mi({1, 0})), 0.0);
}

TEST(JetPartial, ConstantGivesZero) {
  const Jet d = partial(Jet::constant(1, 3, at({1.0}), 4.0), 0);
  EXPECT_TRUE(d.is_zero());
}

TEST(JetPartial, Square) {
  const Jet x = Jet::variable(1, 2, at({0.0}), 0);
  const Jet d = partial(x * x, 0);
  EXPECT_EQ(d.value(), 0.0);
  EXPECT_EQ(d.derivative(0, 1), 2.0);
}

TEST(JetPartial, OrderExhausted) {
  EXPECT_THROW(partial(Jet::constant(1, 0, at({1.0}), 4.0), 0), OrderExhaustedError);
}

TEST(JetProperties, ProductRule) {
  const auto b = at({0.4, 1.1, -0.3});
  const Jet x = Jet::variable(3, 4, b, 0), y = Jet::variable(3, 4, b, 1), z = Jet::variable(3, 4, b, 2);
  const Jet a = sin(x * y) + exp(z) * x;
  const Jet c = recip(y * y + z.plus_constant(2.0)) * cos(x);
  for (int v = 0; v < 3; ++v) {
    const Jet lhs = partial(a * c, v);
    const Jet rhs = partial(a, v) * c + a * partial(c, v);
    ASSERT_EQ(lhs.coeffs().size(), rhs.coeffs().size());
    for (std::size_t i = 0; i < lhs.coeffs().size(); ++i) {
      const double scale = std::max(1.0, std::abs(lhs.coeffs()[i]));
      EXPECT_NEAR(lhs.coeffs()[i], rhs.coeffs()[i], 1e-13 * scale);
    }
  }
}

TEST(JetProperties, CompositionChainRule) {
  const auto b = at({0.3, 0.9});
  const Jet g = Jet::variable(2, 4, b, 0) * Jet::variable(2, 4, b, 1) + Jet::variable(2, 4, b, 1);
  struct Case {
    AnalyticFn f;
    Jet df;
  };
  const std::vector<Case> cases = {
      {{Analytic::sin}, cos(g)},
      {{Analytic::exp}, exp(g)},
      {{Analytic::log}, recip(g)},
      {{Analytic::pow, 2.5}, 2.5 * pow(g, 1.5)},
      {{Analytic::sinh}, compose({Analytic::cosh}, g)},
      {{Analytic::tanh}, (-1.0 * compose({Analytic::tanh}, g) * compose({Analytic::tanh}, g)).plus_constant(1.0)},
  };
  for (const auto& c : cases) {
    for (int v = 0; v < 2; ++v) {
      const Jet lhs = partial(compose(c.f, g), v);
      const Jet rhs = c.df * partial(g, v);
      for (std::size_t i = 0; i < lhs.coeffs().size(); ++i) {
        const double scale = std::max(1.0, std::abs(lhs.coeffs()[i]));
        EXPECT_NEAR(lhs.coeffs()[i], rhs.coeffs()[i], 1e-12 * scale);
      }
    }
  }
}

TEST(JetProperties, TruncationIdempotent) {
  const auto b = at({0.2, 0.5});
  const Jet a = exp(Jet::variable(2, 5, b, 0) * Jet::variable(2, 5, b, 1));
  for (int d = 0; d <= 5; ++d) {
    const Jet once = a.truncated(d);
    const Jet twice = once.truncated(d);
    ASSERT_EQ(once.coeffs().size(), twice.coeffs().size());
    for (std::size_t i = 0; i < once.coeffs().size(); ++i) EXPECT_EQ(once.coeffs()[i], twice.coeffs()[i]);
  }
}

TEST(JetProperties, DerivativeExtractionMultipliesFactorials) {
  const Jet e = exp(Jet::variable(1, 4, at({0.0}), 0).plus_constant(0.0) * 2.0);
  for (int n = 0; n <= 4; ++n) EXPECT_NEAR(e.derivative(0, n), std::pow(2.0, n), 1e-13);
}

}  // namespace
}  // namespace radsob
