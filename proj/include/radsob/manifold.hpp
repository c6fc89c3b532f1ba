#pragma once

/// \file
/// Warping functions and the diagonal metric g = dr^2 + phi(r)^2 g_sphere of
/// a spherically symmetric manifold in geodesic polar coordinates.
///
/// Coordinate convention: index 0 is r; indices 1..N-1 are the nested-sine
/// angles of S^{N-1}, whose metric is
///   dth_1^2 + sin^2 th_1 dth_2^2 + sin^2 th_1 sin^2 th_2 dth_3^2 + ...

#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "radsob/jet.hpp"

namespace radsob {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class WarpKind { euclidean, hyperbolic, spherical, tanh_cap, custom_odd_series };

std::string to_string(WarpKind kind);

/// Bound phi(t) <= coeff * t^power * exp(rate * t) valid for t >= 1.
struct WarpGrowth {
  double coeff;
  double power;
  double rate;
};

class WarpSpec {
 public:
  static WarpSpec euclidean(double radius = kInf);
  static WarpSpec hyperbolic(double radius = kInf);
  static WarpSpec spherical(double radius = std::numbers::pi);
  static WarpSpec tanh_cap(double radius = kInf);
  /// phi(r) = sum_m odd_coeffs[m] r^(2m+1); odd_coeffs[0] must be 1.
  static WarpSpec custom_odd_series(std::vector<double> odd_coeffs, double radius);

  WarpKind kind() const { return kind_; }
  double radius() const { return radius_; }
  bool bounded() const { return radius_ < kInf; }
  std::span<const double> odd_coefficients() const { return odd_coeffs_; }
  std::string tag() const { return to_string(kind_); }

  /// Raw Taylor coefficients of phi about r; no domain check (r = 0 allowed).
  std::vector<double> taylor(double r, int order) const;
  double value(double r) const;
  /// log phi(r), finite where value() would overflow.
  double log_value(double r) const;

  /// True when R < inf and phi has a positive finite limit at R.
  bool bounded_near_boundary() const;
  WarpGrowth growth() const;
  /// Lower bound of phi on [1, inf); 0 when unknown.
  double tail_floor() const;

 private:
  WarpSpec(WarpKind kind, double radius, std::vector<double> odd_coeffs);
  void validate() const;

  WarpKind kind_;
  double radius_;
  std::vector<double> odd_coeffs_;
};

/// Jet of phi at r in (0, R), order <= 6.
Jet warp_eval(const WarpSpec& w, double r, int order);

struct CPhiEstimate {
  double value;
  double tail_cutoff;  ///< upper end of the sampled range (R when bounded)
  double grid_lo;
  double grid_hi;
  int grid_size;
};

/// Sampling grid used by c_phi.
std::vector<double> c_phi_grid(const WarpSpec& w, int grid_size);

/// Lower estimate of inf_{0<r<=t} phi(t)/phi(r) over a graded grid. Exactly 1
/// when phi is nondecreasing on the grid.
CPhiEstimate c_phi(const WarpSpec& w, int grid_size = 1024);

/// Truncation point for unbounded warps: the first T in 8, 16, ... , 1024
/// such that phi stays >= phi(T) on a sample of [T, 2T]. R when bounded.
double tail_cutoff(const WarpSpec& w);

/// Volume of the unit sphere S^{N-1}, 2 pi^{N/2} / Gamma(N/2).
double sphere_volume(int dim);

class ManifoldSpec {
 public:
  ManifoldSpec(WarpSpec warp, int dim);

  const WarpSpec& warp() const { return warp_; }
  int dim() const { return dim_; }
  std::string describe() const;

 private:
  WarpSpec warp_;
  int dim_;
};

/// (r, th_1, ..., th_{N-1}).
struct ChartPoint {
  double r;
  std::vector<double> angles;

  static ChartPoint at_default_angles(int dim, double r);
  BasePoint base() const;
};

struct DiagonalMetric {
  std::vector<Jet> g;      ///< g_ii
  std::vector<Jet> g_inv;  ///< g^ii

  int dim() const { return static_cast<int>(g.size()); }
};

/// Diagonal metric jets at `point`, as functions of all N coordinates.
DiagonalMetric metric_at(const ManifoldSpec& m, const ChartPoint& point, int order);

}  // namespace radsob
