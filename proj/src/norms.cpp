#include "radsob/norms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "radsob/errors.hpp"
#include "radsob/geometry.hpp"

namespace radsob {
namespace {

void check_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("exponent p must be a finite real >= 1");
}

TailEnvelope power_of(const TailEnvelope& e, double p) {
  return {std::pow(e.coeff, p), e.power * p, e.rate * p, e.quad_rate * p, e.start};
}

NormResult finish(std::vector<QuadResult> q, double p, double scale, bool sum_of_roots) {
  NormResult out;
  out.integrals = std::move(q);
  double total = 0.0;
  for (const auto& r : out.integrals) {
    if (r.diverged) out.finite = false;
    if (!r.converged) out.converged = false;
    const double piece = std::max(0.0, scale * r.value);
    out.seminorms.push_back(r.diverged ? kInf : std::pow(piece, 1.0 / p));
    total += sum_of_roots ? out.seminorms.back() : piece;
  }
  out.value = !out.finite ? kInf : (sum_of_roots ? total : std::pow(total, 1.0 / p));
  return out;
}

QuadOptions options(double tol, int components) {
  QuadOptions o;
  o.tol = tol;
  o.max_subdivisions = 2000 * components;
  return o;
}

/// Absolute floor so rounding-level components do not stall refinement.
QuadOptions with_floor(QuadOptions o, const Integrand& f, const WarpSpec& w) {
  QuadOptions coarse = o;
  coarse.tol = std::max(o.tol, 1e-6);
  coarse.max_subdivisions = 64;
  const auto first = integrate_weighted_multi(f, w, coarse);
  double biggest = 0.0;
  for (const auto& r : first) {
    if (!r.diverged) biggest = std::max(biggest, std::abs(r.value));
  }
  o.abs_tol = 1e-14 * biggest;
  return o;
}

}  // namespace

double critical_exponent(int N, int k, double p, double theta) {
  if (!(N > k * p)) throw InadmissibleError("critical exponent requires N > kp");
  return (theta + N) * p / (N - k * p);
}

double critical_exponent_1d(int N, int k, double p, double theta) {
  if (!(N > k * p)) throw InadmissibleError("critical exponent requires N > kp");
  return (theta + 1.0) * p / (N - k * p);
}

NormResult lq_theta_norm_1d(const RadialFunction& v, double q, double theta, const WarpSpec& w, double tol) {
  check_p(q);
  Integrand f;
  f.components = 1;
  f.weight_exponent = theta;
  f.support_end = v.support_end();
  f.eval = [&v, q](double t, std::span<double> out) { out[0] = std::pow(std::abs(v.value(t)), q); };
  if (auto e = v.envelope(0)) f.tails = {power_of(*e, q)};
  return finish(integrate_weighted_multi(f, w, options(tol, 1)), q, 1.0, false);
}

NormResult sobolev_norm_1d(const RadialFunction& v, int k, double p, int N, const WarpSpec& w, double tol) {
  check_p(p);
  if (N < 2) throw DomainError("N must be >= 2");
  if (k < 0 || k > kMaxRadialOrder) throw DomainError("k must be in [0, 4]");
  Integrand f;
  f.components = k + 1;
  f.weight_exponent = N - 1;
  f.support_end = v.support_end();
  f.eval = [&v, k, p](double t, std::span<double> out) {
    const Jet jet = v.eval_jet(t, k);
    for (int j = 0; j <= k; ++j) out[static_cast<std::size_t>(j)] = std::pow(std::abs(jet.derivative(0, j)), p);
  };
  for (int j = 0; j <= k; ++j) {
    const auto e = v.envelope(j);
    f.tails.push_back(e ? std::optional(power_of(*e, p)) : std::nullopt);
  }
  const QuadOptions o = with_floor(options(tol, k + 1), f, w);
  return finish(integrate_weighted_multi(f, w, o), p, 1.0, false);
}

std::vector<double> norm_profile(const RadialFunction& v, const ManifoldSpec& m, double r, int k) {
  const auto geo = geometry_at(m, ChartPoint::at_default_angles(m.dim(), r), std::max(k, 1));
  const auto tensors = covariant_derivatives(v.eval_jet(r, k), geo, k);
  std::vector<double> out;
  for (const auto& t : tensors) out.push_back(pointwise_norm(t, geo.metric));
  return out;
}

NormResult sobolev_norm_manifold(const RadialFunction& v, int k, double p, const ManifoldSpec& m, double tol) {
  check_p(p);
  if (k < 0 || k > kMaxRadialOrder) throw DomainError("k must be in [0, 4]");
  Integrand f;
  f.components = k + 1;
  f.weight_exponent = m.dim() - 1;
  f.support_end = v.support_end();
  f.min_eval = kMinRadius;
  f.eval = [&v, &m, k, p](double t, std::span<double> out) {
    const auto prof = norm_profile(v, m, t, k);
    for (int j = 0; j <= k; ++j) out[static_cast<std::size_t>(j)] = std::pow(prof[static_cast<std::size_t>(j)], p);
  };
  if (!m.warp().bounded()) {
    // Ranks 0 and 1 carry |v| and |v'| exactly. Higher ranks mix lower
    // derivatives with bounded geometric factors; the factor is calibrated on
    // a sample of [1, 8] and doubled.
    for (int j = 0; j <= k; ++j) {
      std::optional<TailEnvelope> sum;
      for (int i = (j <= 1 ? j : 1); i <= j; ++i) {
        const auto e = v.envelope(i);
        if (!e) {
          sum.reset();
          break;
        }
        if (!sum) {
          sum = *e;
        } else {
          sum->coeff += e->coeff;
          sum->power = std::max(sum->power, e->power);
          sum->rate = std::min(sum->rate, e->rate);
          sum->quad_rate = std::min(sum->quad_rate, e->quad_rate);
        }
        if (j <= 1) break;
      }
      if (sum && j >= 2) {
        double factor = 1.0;
        for (int i = 0; i <= 32; ++i) {
          const double t = std::pow(8.0, i / 32.0);
          if (t >= v.support_end()) break;
          const double env = (*sum)(t);
          const double actual = norm_profile(v, m, t, j)[static_cast<std::size_t>(j)];
          if (env > 0.0) factor = std::max(factor, actual / env);
        }
        sum->coeff *= 2.0 * factor;
      }
      f.tails.push_back(sum ? std::optional(power_of(*sum, p)) : std::nullopt);
    }
  }
  const QuadOptions o = with_floor(options(tol, k + 1), f, m.warp());
  return finish(integrate_weighted_multi(f, m.warp(), o), p, sphere_volume(m.dim()), true);
}

}  // namespace radsob
