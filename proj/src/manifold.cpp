#include "radsob/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "radsob/errors.hpp"

namespace radsob {
namespace {

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

std::vector<double> log_space(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace

std::string to_string(WarpKind kind) {
  switch (kind) {
    case WarpKind::euclidean: return "euclidean";
    case WarpKind::hyperbolic: return "hyperbolic";
    case WarpKind::spherical: return "spherical";
    case WarpKind::tanh_cap: return "tanh_cap";
    case WarpKind::custom_odd_series: return "custom_odd_series";
  }
  return "unknown";
}

WarpSpec::WarpSpec(WarpKind kind, double radius, std::vector<double> odd_coeffs)
    : kind_(kind), radius_(radius), odd_coeffs_(std::move(odd_coeffs)) {
  validate();
}

WarpSpec WarpSpec::euclidean(double radius) { return {WarpKind::euclidean, radius, {}}; }
WarpSpec WarpSpec::hyperbolic(double radius) { return {WarpKind::hyperbolic, radius, {}}; }
WarpSpec WarpSpec::spherical(double radius) { return {WarpKind::spherical, radius, {}}; }
WarpSpec WarpSpec::tanh_cap(double radius) { return {WarpKind::tanh_cap, radius, {}}; }
WarpSpec WarpSpec::custom_odd_series(std::vector<double> odd_coeffs, double radius) {
  return {WarpKind::custom_odd_series, radius, std::move(odd_coeffs)};
}

void WarpSpec::validate() const {
  if (!(radius_ > 0.0)) throw DomainError("warp radius must be positive");
  if (kind_ == WarpKind::spherical && radius_ > std::numbers::pi) {
    throw DomainError("spherical warp requires R <= pi");
  }
  if (kind_ == WarpKind::custom_odd_series) {
    if (odd_coeffs_.empty()) throw DomainError("custom warp needs at least one coefficient");
    if (odd_coeffs_.size() > 16) throw DomainError("custom warp supports at most 16 odd terms");
  }
  // phi(0) = 0, phi'(0) = 1, even derivatives vanish.
  const auto at0 = taylor(0.0, 6);
  constexpr double eps = 1e-14;
  if (std::abs(at0[1] - 1.0) > eps) throw DomainError("warp must satisfy phi'(0) = 1");
  for (int i = 0; i <= 6; i += 2) {
    if (std::abs(at0[static_cast<std::size_t>(i)]) > eps) {
      throw DomainError("warp must have vanishing even derivatives at 0");
    }
  }
  // Positivity on (0, R).
  const double hi = bounded() ? radius_ : 1024.0;
  for (int i = 1; i < 512; ++i) {
    const double t = hi * i / 512.0;
    const double v = value(t);
    if (!(v > 0.0) && std::isfinite(v)) throw DomainError("warp must be positive on (0, R)");
  }
}

std::vector<double> WarpSpec::taylor(double r, int order) const {
  if (order < 0 || order > kMaxJetOrder) throw DomainError("warp jet order must be in [0, 6]");
  std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
  switch (kind_) {
    case WarpKind::euclidean:
      c[0] = r;
      if (order >= 1) c[1] = 1.0;
      break;
    case WarpKind::hyperbolic: c = analytic_series({Analytic::sinh}, r, order); break;
    case WarpKind::spherical: c = analytic_series({Analytic::sin}, r, order); break;
    case WarpKind::tanh_cap: c = analytic_series({Analytic::tanh}, r, order); break;
    case WarpKind::custom_odd_series: {
      // Polynomial of degree 2M+1 re-expanded about r.
      for (std::size_t m = 0; m < odd_coeffs_.size(); ++m) {
        const int deg = static_cast<int>(2 * m + 1);
        for (int n = 0; n <= std::min(order, deg); ++n) {
          c[static_cast<std::size_t>(n)] +=
              odd_coeffs_[m] * binomial(deg, n) * std::pow(r, deg - n);
        }
      }
      break;
    }
  }
  return c;
}

double WarpSpec::value(double r) const {
  switch (kind_) {
    case WarpKind::euclidean: return r;
    case WarpKind::hyperbolic: return std::sinh(r);
    case WarpKind::spherical: return std::sin(r);
    case WarpKind::tanh_cap: return std::tanh(r);
    case WarpKind::custom_odd_series: return taylor(r, 0)[0];
  }
  return 0.0;
}

double WarpSpec::log_value(double r) const {
  if (kind_ == WarpKind::hyperbolic && r > 1.0) {
    return r + std::log1p(-std::exp(-2.0 * r)) - std::numbers::ln2;
  }
  return std::log(value(r));
}

bool WarpSpec::bounded_near_boundary() const {
  if (!bounded()) return false;
  const double edge = value(radius_);
  return std::isfinite(edge) && edge > 1e-8;
}

WarpGrowth WarpSpec::growth() const {
  switch (kind_) {
    case WarpKind::euclidean: return {1.0, 1.0, 0.0};
    case WarpKind::hyperbolic: return {0.5, 0.0, 1.0};
    case WarpKind::spherical:
    case WarpKind::tanh_cap: return {1.0, 0.0, 0.0};
    case WarpKind::custom_odd_series: {
      double sum = 0.0;
      for (double a : odd_coeffs_) sum += std::abs(a);
      return {sum, static_cast<double>(2 * odd_coeffs_.size() - 1), 0.0};
    }
  }
  return {1.0, 0.0, 0.0};
}

double WarpSpec::tail_floor() const {
  switch (kind_) {
    case WarpKind::euclidean: return 1.0;
    case WarpKind::hyperbolic: return std::sinh(1.0);
    case WarpKind::tanh_cap: return std::tanh(1.0);
    case WarpKind::spherical: return 0.0;
    case WarpKind::custom_odd_series: {
      if (bounded()) return 0.0;
      const auto est = c_phi(*this, 256);
      return est.value * value(1.0);
    }
  }
  return 0.0;
}

Jet warp_eval(const WarpSpec& w, double r, int order) {
  if (!(r > 0.0 && r < w.radius())) {
    std::ostringstream os;
    os << "warp evaluated at r = " << r << " outside (0, " << w.radius() << ")";
    throw DomainError(os.str());
  }
  if (order > kMaxJetOrder) throw DomainError("warp jet order must be <= 6");
  return Jet::univariate(r, w.taylor(r, order));
}

double tail_cutoff(const WarpSpec& w) {
  if (w.bounded()) return w.radius();
  double t = 8.0;
  for (; t < 1024.0; t *= 2.0) {
    const double at = w.value(t);
    bool monotone = std::isfinite(at);
    for (int i = 1; monotone && i <= 64; ++i) {
      const double v = w.value(t * (1.0 + i / 64.0));
      if (!(v >= at)) monotone = false;
    }
    if (monotone) break;
  }
  return t;
}

std::vector<double> c_phi_grid(const WarpSpec& w, int grid_size) {
  const double hi = tail_cutoff(w);
  const double n = static_cast<double>(grid_size);
  const double lo = hi / (n * n);
  if (!w.bounded()) return log_space(lo, hi, grid_size);
  // Graded toward both 0 and R.
  const int half = grid_size / 2;
  std::vector<double> grid = log_space(lo, hi / 2.0, half);
  const auto gaps = log_space(lo, hi / 2.0, grid_size - half + 1);
  for (auto it = gaps.rbegin() + 1; it != gaps.rend(); ++it) grid.push_back(hi - *it);
  return grid;
}

CPhiEstimate c_phi(const WarpSpec& w, int grid_size) {
  if (grid_size < 64) throw DomainError("c_phi needs grid_size >= 64");
  const auto grid = c_phi_grid(w, grid_size);
  double running_max = 0.0;
  double inf = 1.0;
  for (double t : grid) {
    const double v = w.value(t);
    running_max = std::max(running_max, v);
    inf = std::min(inf, v / running_max);
  }
  if (!(inf > 0.0) || !std::isfinite(inf)) inf = 0.0;
  return {inf, tail_cutoff(w), grid.front(), grid.back(), grid_size};
}

double sphere_volume(int dim) {
  if (dim < 2) throw DomainError("sphere_volume needs N >= 2");
  const double half = dim / 2.0;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

ManifoldSpec::ManifoldSpec(WarpSpec warp, int dim) : warp_(std::move(warp)), dim_(dim) {
  if (dim < 2) throw DomainError("manifold dimension must be >= 2");
  if (dim > kMaxJetVars) throw DomainError("manifold dimension must be <= 8");
}

std::string ManifoldSpec::describe() const {
  std::ostringstream os;
  os << warp_.tag() << "(N=" << dim_ << ", R=";
  if (warp_.bounded()) {
    os << warp_.radius();
  } else {
    os << "inf";
  }
  os << ")";
  return os.str();
}

ChartPoint ChartPoint::at_default_angles(int dim, double r) {
  return {r, std::vector<double>(static_cast<std::size_t>(dim - 1), std::numbers::pi / 2)};
}

BasePoint ChartPoint::base() const {
  std::vector<double> coords;
  coords.reserve(angles.size() + 1);
  coords.push_back(r);
  coords.insert(coords.end(), angles.begin(), angles.end());
  return BasePoint(std::move(coords));
}

DiagonalMetric metric_at(const ManifoldSpec& m, const ChartPoint& point, int order) {
  const int n = m.dim();
  if (static_cast<int>(point.angles.size()) != n - 1) {
    throw DimensionError("chart point needs N-1 angles");
  }
  // th_{N-1} carries no metric weight.
  for (int j = 0; j + 1 < n - 1; ++j) {
    if (std::abs(std::sin(point.angles[static_cast<std::size_t>(j)])) < 1e-12) {
      throw ChartSingularityError("angular coordinate on a pole of the nested-sine chart");
    }
  }
  const BasePoint base = point.base();
  const Jet phi = Jet::embed(warp_eval(m.warp(), point.r, order), n, 0, base);

  DiagonalMetric metric;
  metric.g.reserve(static_cast<std::size_t>(n));
  metric.g_inv.reserve(static_cast<std::size_t>(n));
  metric.g.push_back(Jet::constant(n, order, base, 1.0));
  metric.g_inv.push_back(Jet::constant(n, order, base, 1.0));

  Jet weight = phi * phi;
  for (int i = 1; i < n; ++i) {
    if (i >= 2) {
      const Jet s = sin(Jet::variable(n, order, base, i - 1));
      weight = weight * s * s;
    }
    if (weight.value() == 0.0) throw SingularMetricError("metric entry vanished");
    metric.g.push_back(weight);
    metric.g_inv.push_back(recip(weight));
  }
  return metric;
}

}  // namespace radsob
