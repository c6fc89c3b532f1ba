#include "radsob/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "radsob/errors.hpp"

namespace radsob {
namespace {

double ipow(double base, int e) {
  if (e < 0) return 1.0 / ipow(base, -e);
  double out = 1.0;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

struct Neumaier {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double result() const { return sum + comp; }
};

}  // namespace

ChristoffelTable::ChristoffelTable(int dim, std::vector<Jet> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (entries_.size() != static_cast<std::size_t>(dim * dim * dim)) {
    throw DimensionError("Christoffel table needs N^3 entries");
  }
  nonzero_.resize(static_cast<std::size_t>(dim * dim));
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      for (int k = 0; k < dim; ++k) {
        const Jet& s = (*this)(k, i, j);
        if (!s.is_zero()) nonzero_[static_cast<std::size_t>(i * dim + j)].push_back({k, &s});
      }
    }
  }
}

ChristoffelTable christoffel_at(const DiagonalMetric& metric) {
  const int n = metric.dim();
  if (n == 0) throw DimensionError("empty metric");
  const int order = metric.g.front().order();
  if (order < 1) throw OrderExhaustedError("Christoffel symbols need metric order >= 1");
  for (const Jet& gi : metric.g) {
    if (gi.value() == 0.0) throw SingularMetricError("zero diagonal metric entry");
  }
  const BasePoint& base = metric.g.front().base();

  // dg[a][c] = d_c g_aa
  std::vector<std::vector<Jet>> dg(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    for (int c = 0; c < n; ++c) dg[static_cast<std::size_t>(a)].push_back(partial(metric.g[static_cast<std::size_t>(a)], c));
  }
  auto d = [&](int a, int c) -> const Jet& {
    return dg[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)];
  };

  std::vector<Jet> entries;
  entries.reserve(static_cast<std::size_t>(n * n * n));
  for (int k = 0; k < n; ++k) {
    const Jet& ginv = metric.g_inv[static_cast<std::size_t>(k)];
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        // Only d_i g_kk (j == k), d_j g_kk (i == k) and -d_k g_ii (i == j) survive.
        if (i == j && j == k) {
          entries.push_back(0.5 * (ginv * d(k, k)));
        } else if (j == k) {
          entries.push_back(0.5 * (ginv * d(k, i)));
        } else if (i == k) {
          entries.push_back(0.5 * (ginv * d(k, j)));
        } else if (i == j) {
          entries.push_back(-0.5 * (ginv * d(i, k)));
        } else {
          entries.push_back(Jet::zero(n, order - 1, base));
        }
      }
    }
  }
  return ChristoffelTable(n, std::move(entries));
}

GeometryAt geometry_at(const ManifoldSpec& m, const ChartPoint& point, int order) {
  if (point.r < kMinRadius) {
    std::ostringstream os;
    os << "r = " << point.r << " is closer to the origin than " << kMinRadius;
    throw ProximityError(os.str());
  }
  DiagonalMetric metric = metric_at(m, point, order);
  ChristoffelTable gamma = christoffel_at(metric);
  return {point, std::move(metric), std::move(gamma)};
}

std::size_t CovTensor::flat(std::span<const int> idx) const {
  std::size_t f = 0;
  for (int i : idx) f = f * static_cast<std::size_t>(dim) + static_cast<std::size_t>(i);
  return f;
}

const Jet& CovTensor::at(std::span<const int> idx) const { return components[flat(idx)]; }

std::vector<CovTensor> covariant_derivatives(const Jet& v_jet, const GeometryAt& geo, int k) {
  const int n = geo.metric.dim();
  if (k < 0 || k > 4) throw DomainError("covariant derivatives supported for 0 <= k <= 4");
  if (v_jet.num_vars() != 1 || v_jet.order() < k) {
    throw OrderExhaustedError("radial jet must be univariate with order >= k");
  }
  if (geo.gamma.order() < k - 1) throw OrderExhaustedError("geometry order too low for k");

  const BasePoint base = geo.metric.g.front().base();
  std::vector<CovTensor> out;
  out.reserve(static_cast<std::size_t>(k) + 1);
  out.push_back({0, n, {Jet::embed(v_jet.truncated(k), n, 0, base)}});

  for (int rank = 0; rank < k; ++rank) {
    const CovTensor& prev = out.back();
    const std::size_t prev_size = prev.components.size();
    CovTensor next{rank + 1, n, {}};
    next.components.reserve(prev_size * static_cast<std::size_t>(n));
    std::vector<int> idx(static_cast<std::size_t>(rank));
    std::vector<std::size_t> stride(static_cast<std::size_t>(rank));
    for (int l = rank - 1, s = 1; l >= 0; --l, s *= n) stride[static_cast<std::size_t>(l)] = static_cast<std::size_t>(s);

    for (int i1 = 0; i1 < n; ++i1) {
      for (std::size_t f = 0; f < prev_size; ++f) {
        // Decode the remaining indices i_2..i_{rank+1}.
        std::size_t rem = f;
        for (int l = rank - 1; l >= 0; --l) {
          idx[static_cast<std::size_t>(l)] = static_cast<int>(rem % static_cast<std::size_t>(n));
          rem /= static_cast<std::size_t>(n);
        }
        Jet comp = partial(prev.components[f], i1);
        for (int l = 0; l < rank; ++l) {
          const int il = idx[static_cast<std::size_t>(l)];
          const std::size_t without = f - static_cast<std::size_t>(il) * stride[static_cast<std::size_t>(l)];
          for (const auto& e : geo.gamma.nonzero(i1, il)) {
            const std::size_t src = without + static_cast<std::size_t>(e.alpha) * stride[static_cast<std::size_t>(l)];
            comp = comp - (*e.symbol) * prev.components[src];
          }
        }
        next.components.push_back(std::move(comp));
      }
    }
    out.push_back(std::move(next));
  }
  return out;
}

std::vector<CovTensor> covariant_derivatives(const Jet& v_jet, const ManifoldSpec& m,
                                             const ChartPoint& point, int k) {
  const GeometryAt geo = geometry_at(m, point, std::max(k, 1));
  return covariant_derivatives(v_jet, geo, k);
}

double NormSplit::norm() const { return std::sqrt(radial_sq + rest_sq); }

double NormSplit::excess() const {
  const double n = norm();
  const double denom = n + std::sqrt(radial_sq);
  return denom > 0.0 ? rest_sq / denom : 0.0;
}

NormSplit pointwise_norm_split(const CovTensor& t, const DiagonalMetric& metric) {
  const int n = t.dim;
  if (metric.dim() != n) throw DimensionError("tensor and metric dimensions differ");
  const double radial = t.components.front().value();
  Neumaier rest;
  std::vector<int> idx(static_cast<std::size_t>(t.rank));
  for (std::size_t f = 1; f < t.components.size(); ++f) {
    std::size_t rem = f;
    double w = 1.0;
    for (int l = t.rank - 1; l >= 0; --l) {
      const auto i = rem % static_cast<std::size_t>(n);
      rem /= static_cast<std::size_t>(n);
      w *= metric.g_inv[i].value();
    }
    const double c = t.components[f].value();
    rest.add(w * c * c);
  }
  return {radial * radial, rest.result()};
}

double pointwise_norm(const CovTensor& t, const DiagonalMetric& metric) {
  return pointwise_norm_split(t, metric).norm();
}

double radial_identity_gap(const Jet& v_jet, const ManifoldSpec& m, double r, int k) {
  const auto point = ChartPoint::at_default_angles(m.dim(), r);
  const auto tensors = covariant_derivatives(v_jet, m, point, k);
  return std::abs(tensors.back().components.front().value() - v_jet.derivative(0, k));
}

double asymptotic_leading_ratio(const ManifoldSpec& m, int k, double r) {
  if (k < 2 || k > 4) throw DomainError("asymptotic ratio needs 2 <= k <= 4");
  const auto point = ChartPoint::at_default_angles(m.dim(), r);
  const GeometryAt geo = geometry_at(m, point, k);
  const Jet v = Jet::univariate(r, [&] {
    std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
    c[0] = r;
    c[1] = 1.0;
    return c;
  }());
  const auto tensors = covariant_derivatives(v, geo, k);
  std::vector<int> idx(static_cast<std::size_t>(k), 0);
  idx[static_cast<std::size_t>(k - 2)] = 1;
  idx[static_cast<std::size_t>(k - 1)] = 1;
  const double comp = tensors.back().at(idx).value();
  const Jet phi = warp_eval(m.warp(), r, 1);
  const double phi0 = phi.derivative(0, 0), phi1 = phi.derivative(0, 1);
  // g~_22 = 1 at every chart point.
  return comp / (ipow(phi1, k - 1) * ipow(phi0, 3 - k));
}

}  // namespace radsob
