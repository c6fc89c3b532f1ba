#pragma once

/// \file
/// Radial profiles v(t) with closed-form derivative jets.

#include <optional>
#include <string>
#include <vector>

#include "radsob/jet.hpp"
#include "radsob/quadrature.hpp"

namespace radsob {

enum class Family { gaussian, power_decay, polynomial_bump, log_profile, linear };

std::string to_string(Family f);
Family family_from_string(const std::string& tag);

/// Highest derivative order served by eval_jet.
inline constexpr int kMaxRadialOrder = 4;

class RadialFunction {
 public:
  /// amplitude * exp(-a t^2)
  static RadialFunction gaussian(double a = 1.0, double amplitude = 1.0);
  /// amplitude * (1 + t^2)^(-a)
  static RadialFunction power_decay(double a = 2.0, double amplitude = 1.0);
  /// amplitude * P(t) * exp(1 - 1/(1 - (t/rho)^2)) on t < rho, 0 beyond;
  /// rho = inf gives the bare polynomial P.
  static RadialFunction polynomial_bump(double rho = 1.0, std::vector<double> poly = {1.0},
                                        double amplitude = 1.0);
  /// amplitude * log(L^2 / (t^2 + delta^2)) / 2, a tempered log(L/t).
  static RadialFunction log_profile(double L = 1.0, double delta = 1e-2, double amplitude = 1.0);
  /// amplitude * t
  static RadialFunction linear(double amplitude = 1.0);

  /// Builds a family from its tag and positional parameters.
  static RadialFunction from_params(Family f, const std::vector<double>& params, double amplitude);

  Family family() const { return family_; }
  const std::vector<double>& params() const { return params_; }
  double amplitude() const { return amplitude_; }
  std::string describe() const;

  /// Exact derivative jet of order <= kMaxRadialOrder at t > 0.
  Jet eval_jet(double t, int order) const;
  double value(double t) const;
  /// v^{(j)}(t).
  double derivative(double t, int j) const;

  /// v and all derivatives vanish on [support_end, inf).
  double support_end() const;

  /// Bound |v^{(j)}(t)| <= envelope for t >= 1; nullopt for non-decaying families.
  std::optional<TailEnvelope> envelope(int j) const;

  /// Worst ratio |v^{(j)}| / envelope over a sample of [1, 64], j <= max_order.
  double envelope_check(int max_order) const;

  RadialFunction scaled(double lambda) const;
  /// Index of the shape parameter varied by sampling refinement; -1 if none.
  int scale_param_index() const;
  RadialFunction with_param(int index, double value) const;

 private:
  RadialFunction(Family f, std::vector<double> params, std::vector<double> poly, double amplitude);

  Family family_;
  std::vector<double> params_;
  std::vector<double> poly_;
  double amplitude_;
  /// gaussian: P_j with v^{(j)} = P_j(t) e^{-a t^2}; power_decay: Q_j with
  /// v^{(j)} = Q_j(t) (1 + t^2)^{-a-j}. Coefficients in ascending powers.
  std::vector<std::vector<double>> deriv_polys_;
};

}  // namespace radsob
