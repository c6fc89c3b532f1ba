#pragma once

/// \file
/// Weighted Lebesgue and Sobolev norms of radial profiles, on the interval
/// (0, R) with weight phi^theta and on the manifold via the layer-cake
/// reduction omega_{N-1} int_0^R (.) phi^{N-1} dt.

#include <vector>

#include "radsob/manifold.hpp"
#include "radsob/quadrature.hpp"
#include "radsob/radial.hpp"

namespace radsob {

struct NormRequest {
  int k = 1;
  double p = 2.0;
  double theta = 0.0;
  double q = 2.0;
};

/// (theta + N) p / (N - k p); requires N > k p.
double critical_exponent(int N, int k, double p, double theta);
/// (theta + 1) p / (N - k p), the interval analogue; requires N > k p.
double critical_exponent_1d(int N, int k, double p, double theta);

struct NormResult {
  double value = 0.0;  ///< +inf when some integral diverges
  bool finite = true;
  bool converged = true;
  /// Per-derivative pieces: (int |v^{(j)}|^p phi^{N-1})^{1/p} on the interval,
  /// (omega int |nabla^j u|^p phi^{N-1})^{1/p} on the manifold.
  std::vector<double> seminorms;
  std::vector<QuadResult> integrals;
};

/// (int_0^R |v|^q phi^theta dt)^{1/q}
NormResult lq_theta_norm_1d(const RadialFunction& v, double q, double theta, const WarpSpec& w,
                            double tol = 1e-10);

/// (sum_{j<=k} int_0^R |v^{(j)}|^p phi^{N-1} dt)^{1/p}
NormResult sobolev_norm_1d(const RadialFunction& v, int k, double p, int N, const WarpSpec& w,
                           double tol = 1e-10);

/// sum_{j<=k} (int_M |nabla^j u|_g^p dV)^{1/p}, with |nabla^j u|_g taken at
/// the default angles.
NormResult sobolev_norm_manifold(const RadialFunction& v, int k, double p, const ManifoldSpec& m,
                                 double tol = 1e-10);

/// |nabla^j u|_g(r) at the default angles for j = 0..k.
std::vector<double> norm_profile(const RadialFunction& v, const ManifoldSpec& m, double r, int k);

}  // namespace radsob
