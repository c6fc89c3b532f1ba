#pragma once

/// \file
/// Weighted integration of f(t) phi(t)^theta over (0, R), with geometric
/// grading toward the origin and certified truncation of infinite tails.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "radsob/manifold.hpp"

namespace radsob {

/// |f(t)| <= coeff * t^power * exp(-rate t - quad_rate t^2) for t >= start.
struct TailEnvelope {
  double coeff = 1.0;
  double power = 0.0;
  double rate = 0.0;
  double quad_rate = 0.0;
  double start = 1.0;

  double operator()(double t) const;
  /// Upper bound of the integral over [T, inf); nullopt when the bound is not
  /// yet valid at T, +inf when the envelope is not integrable.
  std::optional<double> integral_from(double T) const;
};

/// Envelope of f phi^theta, given an envelope of f.
std::optional<TailEnvelope> weighted_envelope(const TailEnvelope& f, const WarpSpec& w, double theta);

/// Vector-valued integrand: all components share one panel schedule.
struct Integrand {
  using Eval = std::function<void(double t, std::span<double> out)>;

  Eval eval;
  int components = 1;
  double weight_exponent = 0.0;
  /// No evaluations below this point; the remainder toward 0 is extrapolated.
  double min_eval = 0.0;
  /// f vanishes identically on [support_end, R).
  double support_end = kInf;
  /// Per-component envelopes of |f| (unweighted), used when R = inf.
  std::vector<std::optional<TailEnvelope>> tails;

  static Integrand scalar(std::function<double(double)> f, double weight_exponent);
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
  bool converged = false;
  /// The integral is infinite (value is then the last finite partial sum).
  bool diverged = false;
};

struct QuadOptions {
  double tol = 1e-10;
  /// Convergence is also accepted when the error is below this absolute level.
  double abs_tol = 0.0;
  int max_subdivisions = 4000;
};

std::vector<QuadResult> integrate_weighted_multi(const Integrand& f, const WarpSpec& w,
                                                 const QuadOptions& opts);
QuadResult integrate_weighted(const Integrand& f, const WarpSpec& w, double tol = 1e-10);

/// Integral over [a, b] with 0 < a < b < R, graded geometrically toward a.
std::vector<QuadResult> integrate_interval_multi(const Integrand& f, const WarpSpec& w, double a,
                                                 double b, const QuadOptions& opts);
QuadResult integrate_interval(const Integrand& f, const WarpSpec& w, double a, double b,
                              double tol = 1e-10);

enum class GrowthLaw { convergent, power, log };

std::string to_string(GrowthLaw law);

struct DivergenceFit {
  GrowthLaw law = GrowthLaw::convergent;
  /// Power-law exponent beta in I ~ eps^-beta, or the slope A in I ~ A log(1/eps).
  double exponent = 0.0;
  double residual = 0.0;
  double power_exponent = 0.0;
  double power_residual = 0.0;
  double log_slope = 0.0;
  double log_residual = 0.0;
  std::vector<double> eps;
  std::vector<double> values;
};

/// Fits the growth of I(eps) = int_eps^{R0} f phi^theta as eps -> 0.
DivergenceFit divergence_probe(const Integrand& f, const WarpSpec& w, double r0,
                               std::span<const double> eps_list, double tol = 1e-10);

}  // namespace radsob
