#pragma once

/// \file
/// Christoffel symbols of the diagonal warped metric and the covariant
/// derivative recursion for radial functions u(x) = v(r).

#include <cstddef>
#include <vector>

#include "radsob/jet.hpp"
#include "radsob/manifold.hpp"

namespace radsob {

/// Smallest radius accepted by the geometry routines.
inline constexpr double kMinRadius = 1e-6;

class ChristoffelTable {
 public:
  struct Entry {
    int alpha;
    const Jet* symbol;
  };

  ChristoffelTable(int dim, std::vector<Jet> entries);

  int dim() const { return dim_; }
  int order() const { return entries_.front().order(); }
  /// Gamma^k_{ij}, all indices 0-based.
  const Jet& operator()(int k, int i, int j) const {
    return entries_[static_cast<std::size_t>((k * dim_ + i) * dim_ + j)];
  }
  /// The alphas with Gamma^alpha_{ij} not identically zero.
  const std::vector<Entry>& nonzero(int i, int j) const {
    return nonzero_[static_cast<std::size_t>(i * dim_ + j)];
  }

 private:
  int dim_;
  std::vector<Jet> entries_;
  std::vector<std::vector<Entry>> nonzero_;
};

/// Gamma^k_ij = 1/2 g^kk (d_i g_jk + d_j g_ik - d_k g_ij) specialised to a
/// diagonal metric. Result order is one less than the metric's.
ChristoffelTable christoffel_at(const DiagonalMetric& metric);

/// Metric and Christoffel symbols at a point, ready for repeated recursions.
struct GeometryAt {
  ChartPoint point;
  DiagonalMetric metric;
  ChristoffelTable gamma;
};

/// Builds metric (order `order`) and symbols (order `order - 1`).
/// Throws ProximityError for r < kMinRadius.
GeometryAt geometry_at(const ManifoldSpec& m, const ChartPoint& point, int order);

/// Rank-j tensor with N^j jet components; index tuple (i_1, ..., i_j) is
/// flattened with i_1 most significant.
struct CovTensor {
  int rank = 0;
  int dim = 0;
  std::vector<Jet> components;

  const Jet& at(std::span<const int> idx) const;
  std::size_t flat(std::span<const int> idx) const;
};

/// Ranks 0..k of nabla^j u, where `v_jet` is the univariate jet of v at r
/// (order >= k) and the geometry was built with order >= k.
std::vector<CovTensor> covariant_derivatives(const Jet& v_jet, const GeometryAt& geo, int k);

/// Convenience overload that builds the geometry itself.
std::vector<CovTensor> covariant_derivatives(const Jet& v_jet, const ManifoldSpec& m,
                                             const ChartPoint& point, int k);

/// Squared norm split into the all-radial component and the remainder.
struct NormSplit {
  double radial_sq;
  double rest_sq;

  double norm() const;
  /// norm() - sqrt(radial_sq), free of cancellation.
  double excess() const;
};

NormSplit pointwise_norm_split(const CovTensor& t, const DiagonalMetric& metric);
double pointwise_norm(const CovTensor& t, const DiagonalMetric& metric);

/// |(nabla^k u)_{1..1} - v^{(k)}(r)| at default angles.
double radial_identity_gap(const Jet& v_jet, const ManifoldSpec& m, double r, int k);

/// (nabla^k u)_{1..1 2 2} phi^{k-3} / (phi'^{k-1} g~_22) for u = r, k >= 2.
double asymptotic_leading_ratio(const ManifoldSpec& m, int k, double r);

}  // namespace radsob
