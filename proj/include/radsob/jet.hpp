#pragma once

/// \file
/// Truncated multivariate Taylor series ("jets").
///
/// A jet in `n` variables of order `d` stores the raw Taylor coefficients
/// c_alpha = (d^alpha f)(x0) / alpha! for every multi-index alpha with
/// |alpha| <= d, about a base point x0 kept alongside the coefficients.
/// Coefficients are laid out densely, grouped by total degree, so the layout
/// of order d' < d is a prefix of the layout of order d. Extraction of actual
/// derivatives multiplies the factorials back (see Jet::derivative).

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace radsob {

inline constexpr int kMaxJetVars = 8;
inline constexpr int kMaxJetOrder = 6;

using MultiIndex = std::array<std::uint8_t, kMaxJetVars>;

/// Monomial enumeration and precomputed product/derivative tables for one
/// (num_vars, order) pair. Instances are shared and immutable.
class JetLayout {
 public:
  struct MulTerm {
    std::uint32_t lhs;
    std::uint32_t rhs;
    std::uint32_t out;
  };
  struct PartialTerm {
    std::uint32_t src;
    std::uint32_t dst;
    double factor;
  };

  static const JetLayout& get(int num_vars, int order);

  int num_vars() const { return num_vars_; }
  int order() const { return order_; }
  std::size_t size() const { return monomials_.size(); }
  const MultiIndex& monomial(std::size_t i) const { return monomials_[i]; }
  int degree(std::size_t i) const { return degrees_[i]; }
  /// Index of `alpha`, or size() when |alpha| > order.
  std::size_t index_of(const MultiIndex& alpha) const;
  /// Number of monomials with total degree <= d.
  std::size_t prefix_size(int d) const { return prefix_[static_cast<std::size_t>(d)]; }

  /// Product terms sorted by output index.
  std::span<const MulTerm> mul_terms() const { return mul_terms_; }
  std::span<const PartialTerm> partial_terms(int var) const {
    return partial_terms_[static_cast<std::size_t>(var)];
  }

 private:
  JetLayout(int num_vars, int order);

  int num_vars_;
  int order_;
  std::vector<MultiIndex> monomials_;
  std::vector<int> degrees_;
  std::vector<std::size_t> prefix_;
  std::vector<MulTerm> mul_terms_;
  std::vector<std::vector<PartialTerm>> partial_terms_;
};

/// Expansion point shared by every jet of one computation.
class BasePoint {
 public:
  BasePoint() = default;
  explicit BasePoint(std::vector<double> coords)
      : coords_(std::make_shared<const std::vector<double>>(std::move(coords))) {}

  std::size_t size() const { return coords_ ? coords_->size() : 0; }
  double operator[](std::size_t i) const { return (*coords_)[i]; }
  std::span<const double> coords() const {
    return coords_ ? std::span<const double>(*coords_) : std::span<const double>();
  }

  friend bool operator==(const BasePoint& a, const BasePoint& b) {
    if (a.coords_ == b.coords_) return true;
    if (!a.coords_ || !b.coords_) return false;
    return *a.coords_ == *b.coords_;
  }

 private:
  std::shared_ptr<const std::vector<double>> coords_;
};

class Jet {
 public:
  Jet(int num_vars, int order, BasePoint base, std::vector<double> coeffs);

  static Jet zero(int num_vars, int order, BasePoint base);
  static Jet constant(int num_vars, int order, BasePoint base, double value);
  /// The coordinate function x_var (0-based) expanded about `base`.
  static Jet variable(int num_vars, int order, BasePoint base, int var);
  /// One-variable jet from raw Taylor coefficients c_0..c_order about `at`.
  static Jet univariate(double at, std::vector<double> coeffs);
  /// Lifts a univariate jet into variable `var` of an n-variable jet.
  static Jet embed(const Jet& univariate, int num_vars, int var, BasePoint base);

  int num_vars() const { return layout_->num_vars(); }
  int order() const { return layout_->order(); }
  const BasePoint& base() const { return base_; }
  std::span<const double> coeffs() const { return coeffs_; }
  const JetLayout& layout() const { return *layout_; }

  double value() const { return coeffs_[0]; }
  /// Raw Taylor coefficient of `alpha` (0 when |alpha| exceeds the order).
  double coeff(const MultiIndex& alpha) const;
  /// Mixed partial derivative d^alpha f at the base point.
  double derivative(const MultiIndex& alpha) const;
  /// n-th derivative along one variable.
  double derivative(int var, int n) const;
  bool is_zero() const;

  Jet truncated(int order) const;

  friend Jet operator+(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a, const Jet& b);
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator*(double s, const Jet& a);
  friend Jet operator*(const Jet& a, double s) { return s * a; }
  friend Jet operator-(const Jet& a) { return -1.0 * a; }
  Jet plus_constant(double c) const;

 private:
  const JetLayout* layout_;
  BasePoint base_;
  std::vector<double> coeffs_;
};

/// Formal partial derivative along `var` (0-based); the order drops by one.
Jet partial(const Jet& a, int var);

enum class Analytic { sin, cos, sinh, cosh, tanh, exp, log, pow, recip };

struct AnalyticFn {
  Analytic kind;
  double exponent = 0.0;  ///< used by Analytic::pow
};

/// Taylor coefficients f^(n)(c)/n!, n = 0..order.
std::vector<double> analytic_series(AnalyticFn f, double c, int order);

/// f o inner, by Horner evaluation of f's series about inner's constant term.
Jet compose(AnalyticFn f, const Jet& inner);

inline Jet sin(const Jet& a) { return compose({Analytic::sin}, a); }
inline Jet cos(const Jet& a) { return compose({Analytic::cos}, a); }
inline Jet exp(const Jet& a) { return compose({Analytic::exp}, a); }
inline Jet log(const Jet& a) { return compose({Analytic::log}, a); }
inline Jet recip(const Jet& a) { return compose({Analytic::recip}, a); }
inline Jet pow(const Jet& a, double e) { return compose({Analytic::pow, e}, a); }

}  // namespace radsob
