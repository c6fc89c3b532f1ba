#include "radsob/radial.hpp"

#include <cmath>
#include <sstream>

#include "radsob/errors.hpp"
#include "radsob/manifold.hpp"

namespace radsob {
namespace {

using Poly = std::vector<double>;

double horner(const Poly& p, double t) {
  double s = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) s = s * t + *it;
  return s;
}

Poly poly_derivative(const Poly& p) {
  Poly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(static_cast<double>(i) * p[i]);
  if (d.empty()) d.push_back(0.0);
  return d;
}

Poly add(Poly a, const Poly& b) {
  if (b.size() > a.size()) a.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return a;
}

/// c * t^shift * p
Poly shifted(const Poly& p, double c, std::size_t shift) {
  Poly out(p.size() + shift, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) out[i + shift] = c * p[i];
  return out;
}

double abs_sum(const Poly& p) {
  double s = 0.0;
  for (double c : p) s += std::abs(c);
  return s;
}

double degree(const Poly& p) {
  for (std::size_t i = p.size(); i-- > 0;) {
    if (p[i] != 0.0) return static_cast<double>(i);
  }
  return 0.0;
}

std::vector<double> factorials() { return {1, 1, 2, 6, 24, 120, 720}; }

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::gaussian: return "gaussian";
    case Family::power_decay: return "power_decay";
    case Family::polynomial_bump: return "polynomial_bump";
    case Family::log_profile: return "log_profile";
    case Family::linear: return "linear";
  }
  return "unknown";
}

Family family_from_string(const std::string& tag) {
  for (Family f : {Family::gaussian, Family::power_decay, Family::polynomial_bump, Family::log_profile,
                   Family::linear}) {
    if (to_string(f) == tag) return f;
  }
  throw ConfigError("unknown family tag '" + tag + "'");
}

RadialFunction::RadialFunction(Family f, std::vector<double> params, std::vector<double> poly, double amplitude)
    : family_(f), params_(std::move(params)), poly_(std::move(poly)), amplitude_(amplitude) {
  if (!std::isfinite(amplitude_)) throw DomainError("amplitude must be finite");
  switch (family_) {
    case Family::gaussian: {
      const double a = params_.at(0);
      if (!(a > 0.0)) throw DomainError("gaussian needs a > 0");
      // P_{j+1} = P_j' - 2 a t P_j
      deriv_polys_.push_back({1.0});
      for (int j = 0; j < kMaxRadialOrder; ++j) {
        const Poly& p = deriv_polys_.back();
        deriv_polys_.push_back(add(poly_derivative(p), shifted(p, -2.0 * a, 1)));
      }
      break;
    }
    case Family::power_decay: {
      const double a = params_.at(0);
      if (!(a > 0.0)) throw DomainError("power_decay needs a > 0");
      // Q_{j+1} = Q_j' (1 + t^2) - 2 (a + j) t Q_j
      deriv_polys_.push_back({1.0});
      for (int j = 0; j < kMaxRadialOrder; ++j) {
        const Poly& q = deriv_polys_.back();
        const Poly dq = poly_derivative(q);
        Poly next = add(dq, shifted(dq, 1.0, 2));
        next = add(next, shifted(q, -2.0 * (a + j), 1));
        deriv_polys_.push_back(next);
      }
      break;
    }
    case Family::polynomial_bump:
      if (!(params_.at(0) > 0.0)) throw DomainError("polynomial_bump needs rho > 0");
      if (poly_.empty()) throw DomainError("polynomial_bump needs a polynomial");
      break;
    case Family::log_profile:
      if (!(params_.at(0) > 0.0) || !(params_.at(1) > 0.0)) {
        throw DomainError("log_profile needs L > 0 and delta > 0");
      }
      break;
    case Family::linear: break;
  }
}

RadialFunction RadialFunction::gaussian(double a, double amplitude) {
  return {Family::gaussian, {a}, {}, amplitude};
}
RadialFunction RadialFunction::power_decay(double a, double amplitude) {
  return {Family::power_decay, {a}, {}, amplitude};
}
RadialFunction RadialFunction::polynomial_bump(double rho, std::vector<double> poly, double amplitude) {
  return {Family::polynomial_bump, {rho}, std::move(poly), amplitude};
}
RadialFunction RadialFunction::log_profile(double L, double delta, double amplitude) {
  return {Family::log_profile, {L, delta}, {}, amplitude};
}
RadialFunction RadialFunction::linear(double amplitude) { return {Family::linear, {}, {}, amplitude}; }

RadialFunction RadialFunction::from_params(Family f, const std::vector<double>& p, double amplitude) {
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (p.size() < lo || p.size() > hi) {
      std::ostringstream os;
      os << to_string(f) << " takes " << lo << ".." << hi << " parameters, got " << p.size();
      throw ConfigError(os.str());
    }
  };
  try {
    switch (f) {
      case Family::gaussian:
        need(0, 1);
        return gaussian(p.empty() ? 1.0 : p[0], amplitude);
      case Family::power_decay:
        need(0, 1);
        return power_decay(p.empty() ? 2.0 : p[0], amplitude);
      case Family::polynomial_bump: {
        need(0, 17);
        const double rho = p.empty() ? 1.0 : p[0];
        std::vector<double> poly(p.size() > 1 ? p.begin() + 1 : p.end(), p.end());
        if (poly.empty()) poly = {1.0};
        return polynomial_bump(rho, std::move(poly), amplitude);
      }
      case Family::log_profile:
        need(0, 2);
        return log_profile(p.size() > 0 ? p[0] : 1.0, p.size() > 1 ? p[1] : 1e-2, amplitude);
      case Family::linear:
        need(0, 0);
        return linear(amplitude);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown family");
}

std::string RadialFunction::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << to_string(family_) << "(";
  for (std::size_t i = 0; i < params_.size(); ++i) os << (i ? ", " : "") << params_[i];
  if (family_ == Family::polynomial_bump) {
    os << "; P=[";
    for (std::size_t i = 0; i < poly_.size(); ++i) os << (i ? ", " : "") << poly_[i];
    os << "]";
  }
  os << ")";
  if (amplitude_ != 1.0) os << "*" << amplitude_;
  return os.str();
}

double RadialFunction::support_end() const {
  return family_ == Family::polynomial_bump ? params_[0] : kInf;
}

Jet RadialFunction::eval_jet(double t, int order) const {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("radial functions are evaluated at t > 0");
  if (order < 0 || order > kMaxRadialOrder) throw DomainError("radial jet order must be in [0, 4]");
  const auto fact = factorials();
  std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
  switch (family_) {
    case Family::gaussian: {
      const double e = std::exp(-params_[0] * t * t);
      for (int j = 0; j <= order; ++j) {
        c[static_cast<std::size_t>(j)] = horner(deriv_polys_[static_cast<std::size_t>(j)], t) * e / fact[static_cast<std::size_t>(j)];
      }
      break;
    }
    case Family::power_decay: {
      const double a = params_[0], s = 1.0 + t * t;
      for (int j = 0; j <= order; ++j) {
        c[static_cast<std::size_t>(j)] = horner(deriv_polys_[static_cast<std::size_t>(j)], t) *
                                         std::pow(s, -a - j) / fact[static_cast<std::size_t>(j)];
      }
      break;
    }
    case Family::polynomial_bump: {
      const double rho = params_[0];
      const Jet x = Jet::variable(1, order, BasePoint({t}), 0);
      Jet p = Jet::constant(1, order, x.base(), 0.0);
      for (auto it = poly_.rbegin(); it != poly_.rend(); ++it) p = (p * x).plus_constant(*it);
      if (std::isinf(rho)) {
        c.assign(p.coeffs().begin(), p.coeffs().end());
        break;
      }
      if (t >= rho) break;
      const Jet s = (1.0 / rho) * x;
      const Jet gap = (-1.0 * (s * s)).plus_constant(1.0);
      if (1.0 / gap.value() > 745.0) break;  // exp underflows with every derivative
      const Jet bump = exp((-1.0 * recip(gap)).plus_constant(1.0));
      const Jet v = p * bump;
      c.assign(v.coeffs().begin(), v.coeffs().end());
      break;
    }
    case Family::log_profile: {
      const double L = params_[0], d = params_[1];
      const Jet x = Jet::variable(1, order, BasePoint({t}), 0);
      const Jet v = (-0.5 * log((x * x).plus_constant(d * d))).plus_constant(std::log(L));
      c.assign(v.coeffs().begin(), v.coeffs().end());
      break;
    }
    case Family::linear:
      c[0] = t;
      if (order >= 1) c[1] = 1.0;
      break;
  }
  for (double& x : c) x *= amplitude_;
  return Jet::univariate(t, std::move(c));
}

double RadialFunction::value(double t) const { return eval_jet(t, 0).value(); }

double RadialFunction::derivative(double t, int j) const { return eval_jet(t, j).derivative(0, j); }

std::optional<TailEnvelope> RadialFunction::envelope(int j) const {
  if (j < 0 || j > kMaxRadialOrder) throw DomainError("envelope order must be in [0, 4]");
  const double amp = std::abs(amplitude_);
  switch (family_) {
    case Family::gaussian: {
      // |P_j(t)| <= sum |p_i| t^deg for t >= 1
      const Poly& p = deriv_polys_[static_cast<std::size_t>(j)];
      return TailEnvelope{amp * abs_sum(p), degree(p), 0.0, params_[0], 1.0};
    }
    case Family::power_decay: {
      // (1 + t^2)^{-a-j} <= t^{-2a-2j}
      const Poly& q = deriv_polys_[static_cast<std::size_t>(j)];
      return TailEnvelope{amp * abs_sum(q), degree(q) - 2.0 * (params_[0] + j), 0.0, 0.0, 1.0};
    }
    case Family::polynomial_bump:
      if (std::isinf(params_[0])) return std::nullopt;
      // Compact support: a zero envelope past rho is exact.
      return TailEnvelope{0.0, 0.0, 0.0, 0.0, std::max(1.0, params_[0])};
    case Family::log_profile:
    case Family::linear: return std::nullopt;
  }
  return std::nullopt;
}

double RadialFunction::envelope_check(int max_order) const {
  double worst = 0.0;
  for (int j = 0; j <= max_order; ++j) {
    const auto env = envelope(j);
    if (!env) continue;
    for (int i = 0; i <= 256; ++i) {
      const double t = std::max(env->start, 1.0) * std::pow(64.0, i / 256.0);
      const double v = std::abs(derivative(t, j));
      const double e = (*env)(t);
      if (v == 0.0) continue;
      worst = std::max(worst, e > 0.0 ? v / e : kInf);
    }
  }
  return worst;
}

RadialFunction RadialFunction::scaled(double lambda) const {
  RadialFunction out = *this;
  out.amplitude_ *= lambda;
  return out;
}

int RadialFunction::scale_param_index() const {
  switch (family_) {
    case Family::gaussian:
    case Family::power_decay:
    case Family::polynomial_bump: return 0;
    case Family::log_profile: return 1;
    case Family::linear: return -1;
  }
  return -1;
}

RadialFunction RadialFunction::with_param(int index, double value) const {
  std::vector<double> p = params_;
  p.at(static_cast<std::size_t>(index)) = value;
  return {family_, std::move(p), poly_, amplitude_};
}

}  // namespace radsob
