#include "radsob/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <queue>
#include <sstream>

#include "radsob/errors.hpp"

namespace radsob {
namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
using Gauss = boost::math::quadrature::gauss<double, 7>;

struct Neumaier {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double result() const { return sum + comp; }
};

struct Panel {
  double a, b;
  std::vector<double> val, err;
};

class Engine {
 public:
  Engine(const Integrand& f, const WarpSpec& w, const QuadOptions& opts)
      : f_(f), w_(w), opts_(opts), nc_(static_cast<std::size_t>(f.components)), buf_(nc_) {
    if (f.components < 1) throw DomainError("integrand needs at least one component");
    if (opts.tol < 1e-13) throw DomainError("quadrature tolerance must be >= 1e-13");
  }

  std::size_t components() const { return nc_; }

  /// f(t) phi(t)^theta for every component.
  void weighted(double t, std::span<double> out) {
    if (t >= f_.support_end) {
      std::fill(out.begin(), out.end(), 0.0);
      return;
    }
    f_.eval(t, out);
    const double theta = f_.weight_exponent;
    double wt = theta == 0.0 ? 1.0 : std::pow(w_.value(t), theta);
    const bool log_path = !std::isfinite(wt) || wt == 0.0;
    const double logw = log_path ? theta * w_.log_value(t) : 0.0;
    for (double& x : out) {
      if (std::isnan(x)) {
        std::ostringstream os;
        os << "integrand evaluated to NaN at t = " << t;
        throw EvaluationError(os.str());
      }
      if (x == 0.0) continue;
      x = log_path ? std::copysign(std::exp(std::log(std::abs(x)) + logw), x) : x * wt;
      if (std::isnan(x)) throw EvaluationError("weighted integrand is NaN");
    }
  }

  Panel panel(double a, double b) {
    Panel p{a, b, std::vector<double>(nc_, 0.0), std::vector<double>(nc_, 0.0)};
    const auto& xk = Kronrod::abscissa();
    const auto& wk = Kronrod::weights();
    const auto& wg = Gauss::weights();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    std::vector<double> kron(nc_, 0.0), gauss(nc_, 0.0);
    for (std::size_t i = 0; i < xk.size(); ++i) {
      const int signs = i == 0 ? 1 : 2;
      for (int s = 0; s < signs; ++s) {
        const double t = s == 0 ? c + h * xk[i] : c - h * xk[i];
        weighted(t, buf_);
        for (std::size_t k = 0; k < nc_; ++k) {
          kron[k] += wk[i] * buf_[k];
          // Gauss nodes are the even-indexed Kronrod abscissae.
          if (i % 2 == 0) gauss[k] += wg[i / 2] * buf_[k];
        }
      }
    }
    for (std::size_t k = 0; k < nc_; ++k) {
      p.val[k] = h * kron[k];
      p.err[k] = std::abs(h * (kron[k] - gauss[k]));
    }
    return p;
  }

  const Integrand& f() const { return f_; }
  const WarpSpec& w() const { return w_; }
  const QuadOptions& opts() const { return opts_; }

 private:
  const Integrand& f_;
  const WarpSpec& w_;
  QuadOptions opts_;
  std::size_t nc_;
  std::vector<double> buf_;
};

/// Partial sums plus tail corrections per component.
struct Accumulator {
  std::vector<Panel> panels;
  std::vector<double> tail_value, tail_error;
  std::vector<bool> diverged;

  explicit Accumulator(std::size_t nc) : tail_value(nc, 0.0), tail_error(nc, 0.0), diverged(nc, false) {}

  double total(std::size_t k) const {
    Neumaier s;
    for (const auto& p : panels) s.add(p.val[k]);
    s.add(tail_value[k]);
    return s.result();
  }
};

/// Tracks geometric ratios of consecutive panel contributions.
struct RatioTracker {
  double prev = 0.0, last = 0.0;
  double rho = 0.0, prev_rho = 0.0;
  int count = 0;
  int growing = 0;

  void push(double v) {
    prev = last;
    last = v;
    ++count;
    prev_rho = rho;
    rho = (count >= 2 && prev != 0.0) ? std::abs(last / prev) : 0.0;
    if (rho >= 1.0) {
      ++growing;
    } else if (last != 0.0) {
      growing = 0;
    }
  }
  /// A stretch of ratios >= 1 that is not settling back below 1.
  bool diverging() const {
    return (growing >= 6 && rho >= prev_rho * (1.0 - 1e-9)) || growing >= 60;
  }
  /// Extrapolated remainder sum_{n>=1} last * rho^n, or nullopt when rho >= 1.
  std::optional<double> tail() const {
    if (count < 2) return std::nullopt;
    if (last == 0.0) return 0.0;
    if (prev == 0.0) return std::nullopt;
    const double r = last / prev;
    if (std::abs(r) >= 1.0) return std::nullopt;
    return last * r / (1.0 - r);
  }
};

/// Dyadic panels [H 2^-(m+1), H 2^-m] down toward the origin.
void origin_panels(Engine& eng, Accumulator& acc, double H) {
  const std::size_t nc = eng.components();
  std::vector<RatioTracker> ratio(nc);
  std::vector<double> prev_tail(nc, 0.0);
  std::vector<bool> done(nc, false);
  const double tol = eng.opts().tol;
  double hi = H;
  for (int m = 0; m < 1100; ++m) {
    const double lo = 0.5 * hi;
    const bool blocked = lo < eng.f().min_eval || lo == 0.0;
    if (blocked) break;
    acc.panels.push_back(eng.panel(lo, hi));
    hi = lo;
    bool all_done = true;
    for (std::size_t k = 0; k < nc; ++k) {
      if (done[k]) continue;
      ratio[k].push(acc.panels.back().val[k]);
      if (m < 4) {
        all_done = false;
        continue;
      }
      if (ratio[k].diverging()) {
        acc.diverged[k] = true;
        done[k] = true;
        continue;
      }
      const auto t = ratio[k].tail();
      const double total = std::abs(acc.total(k));
      if (t && std::abs(*t) <= 1e-3 * tol * total) {
        done[k] = true;
      } else if (t && *t == 0.0 && total == 0.0 && ratio[k].prev == 0.0) {
        done[k] = true;
      } else {
        all_done = false;
      }
    }
    if (all_done) break;
  }
  // Extrapolate what remains below the last panel.
  for (std::size_t k = 0; k < nc; ++k) {
    if (acc.diverged[k]) continue;
    const auto t = ratio[k].tail();
    if (!t) {
      if (ratio[k].last != 0.0) acc.diverged[k] = true;
      continue;
    }
    acc.tail_value[k] += *t;
    // Change of the extrapolated remainder between consecutive panel pairs.
    const std::size_t n = acc.panels.size();
    double spread = 0.0;
    if (n >= 3) {
      RatioTracker older;
      older.push(acc.panels[n - 3].val[k]);
      older.push(acc.panels[n - 2].val[k]);
      if (const auto t0 = older.tail()) spread = std::abs((*t0 - acc.panels[n - 1].val[k]) - *t);
    }
    acc.tail_error[k] += spread + 1e-15 * std::abs(*t);
  }
}

/// Panels [2^m, 2^(m+1)] outward from 1 for R = inf.
void outward_panels(Engine& eng, Accumulator& acc) {
  const std::size_t nc = eng.components();
  const Integrand& f = eng.f();
  std::vector<std::optional<TailEnvelope>> env(nc);
  for (std::size_t k = 0; k < nc && k < f.tails.size(); ++k) {
    if (f.tails[k]) env[k] = weighted_envelope(*f.tails[k], eng.w(), f.weight_exponent);
  }
  std::vector<RatioTracker> ratio(nc);
  std::vector<bool> done(nc, false);
  std::vector<double> bound(nc, 0.0);
  const double tol = eng.opts().tol;
  double lo = 1.0;
  for (int m = 0; m < 64; ++m) {
    if (lo >= f.support_end) {
      std::fill(done.begin(), done.end(), true);
      std::fill(bound.begin(), bound.end(), 0.0);
      break;
    }
    const double hi = std::min(2.0 * lo, f.support_end);
    acc.panels.push_back(eng.panel(lo, hi));
    lo = hi;
    bool all_done = true;
    for (std::size_t k = 0; k < nc; ++k) {
      if (done[k]) continue;
      const double total = std::abs(acc.total(k));
      if (env[k]) {
        const auto b = env[k]->integral_from(hi);
        if (b && std::isinf(*b)) {
          acc.diverged[k] = true;
          done[k] = true;
          continue;
        }
        if (b && *b <= std::max(0.1 * tol * total, eng.opts().abs_tol)) {
          bound[k] = *b;
          done[k] = true;
          continue;
        }
        all_done = false;
        continue;
      }
      ratio[k].push(acc.panels.back().val[k]);
      if (ratio[k].diverging()) {
        acc.diverged[k] = true;
        done[k] = true;
        continue;
      }
      const auto t = ratio[k].tail();
      if (m >= 3 && t && std::abs(*t) <= 1e-3 * tol * total) {
        acc.tail_value[k] += *t;
        acc.tail_error[k] += std::abs(*t);
        done[k] = true;
        continue;
      }
      all_done = false;
    }
    if (all_done) break;
  }
  for (std::size_t k = 0; k < nc; ++k) {
    if (!done[k]) acc.diverged[k] = true;
    acc.tail_error[k] += bound[k];
  }
}

std::vector<QuadResult> refine(Engine& eng, Accumulator& acc) {
  const std::size_t nc = eng.components();
  const double tol = eng.opts().tol;
  const double abs_tol = eng.opts().abs_tol;
  int subdivisions = 0;

  auto totals = [&] {
    std::vector<double> v(nc), e(nc);
    for (std::size_t k = 0; k < nc; ++k) {
      Neumaier sv, se;
      for (const auto& p : acc.panels) {
        sv.add(p.val[k]);
        se.add(p.err[k]);
      }
      sv.add(acc.tail_value[k]);
      se.add(acc.tail_error[k]);
      v[k] = sv.result();
      e[k] = se.result();
    }
    return std::pair{v, e};
  };
  auto satisfied = [&](std::size_t k, double v, double e) {
    return acc.diverged[k] || e <= tol * std::abs(v) || e <= abs_tol;
  };

  // Max-heap on the normalized panel error; ties broken by insertion order.
  struct Key {
    double score;
    std::size_t id;
    bool operator<(const Key& o) const { return score < o.score || (score == o.score && id > o.id); }
  };
  auto [values, errors] = totals();
  auto score = [&](const Panel& p) {
    double s = 0.0;
    for (std::size_t k = 0; k < nc; ++k) {
      if (acc.diverged[k]) continue;
      const double scale = std::max(tol * std::abs(values[k]), abs_tol);
      s = std::max(s, scale > 0.0 ? p.err[k] / scale : (p.err[k] > 0.0 ? kInf : 0.0));
    }
    return s;
  };
  std::priority_queue<Key> heap;
  for (std::size_t i = 0; i < acc.panels.size(); ++i) heap.push({score(acc.panels[i]), i});

  while (true) {
    bool ok = true;
    for (std::size_t k = 0; k < nc; ++k) ok = ok && satisfied(k, values[k], errors[k]);
    if (ok || subdivisions >= eng.opts().max_subdivisions || heap.empty()) break;
    const Key top = heap.top();
    heap.pop();
    if (top.score == 0.0) break;
    Panel old = std::move(acc.panels[top.id]);
    const double mid = 0.5 * (old.a + old.b);
    if (!(mid > old.a && mid < old.b)) break;
    Panel left = eng.panel(old.a, mid);
    Panel right = eng.panel(mid, old.b);
    for (std::size_t k = 0; k < nc; ++k) {
      values[k] += left.val[k] + right.val[k] - old.val[k];
      errors[k] += left.err[k] + right.err[k] - old.err[k];
    }
    acc.panels[top.id] = std::move(left);
    acc.panels.push_back(std::move(right));
    heap.push({score(acc.panels[top.id]), top.id});
    heap.push({score(acc.panels.back()), acc.panels.size() - 1});
    ++subdivisions;
    // Running sums drift; recompute exactly from time to time.
    if (subdivisions % 64 == 0) std::tie(values, errors) = totals();
  }
  std::tie(values, errors) = totals();

  std::vector<QuadResult> out(nc);
  for (std::size_t k = 0; k < nc; ++k) {
    out[k].value = values[k];
    out[k].error_estimate = errors[k];
    out[k].subdivisions = subdivisions;
    out[k].diverged = acc.diverged[k];
    out[k].converged = !acc.diverged[k] && (errors[k] <= tol * std::max(1.0, std::abs(values[k])) &&
                                            (errors[k] <= tol * std::abs(values[k]) || errors[k] <= abs_tol ||
                                             (values[k] == 0.0 && errors[k] == 0.0)));
  }
  return out;
}

}  // namespace

double TailEnvelope::operator()(double t) const {
  return coeff * std::pow(t, power) * std::exp(-rate * t - quad_rate * t * t);
}

std::optional<double> TailEnvelope::integral_from(double T) const {
  if (T < start) return std::nullopt;
  if (coeff == 0.0) return 0.0;
  if (quad_rate < 0.0 || (quad_rate == 0.0 && rate < 0.0)) return kInf;
  if (quad_rate == 0.0 && rate == 0.0) {
    if (power >= -1.0) return kInf;
    return coeff * std::pow(T, power + 1.0) / (-power - 1.0);
  }
  // -d/dt log envelope >= rate + 2 quad_rate T - max(power, 0) / T on [T, inf).
  const double slope = rate + 2.0 * quad_rate * T - std::max(power, 0.0) / T;
  if (slope <= 0.0) return std::nullopt;
  return (*this)(T) / slope;
}

std::optional<TailEnvelope> weighted_envelope(const TailEnvelope& f, const WarpSpec& w, double theta) {
  TailEnvelope e = f;
  e.start = std::max(f.start, 1.0);
  if (theta >= 0.0) {
    const WarpGrowth g = w.growth();
    e.coeff *= std::pow(g.coeff, theta);
    e.power += theta * g.power;
    e.rate -= theta * g.rate;
    return e;
  }
  const double floor = w.tail_floor();
  if (!(floor > 0.0)) return std::nullopt;
  e.coeff *= std::pow(floor, theta);
  return e;
}

Integrand Integrand::scalar(std::function<double(double)> f, double weight_exponent) {
  Integrand out;
  out.eval = [f = std::move(f)](double t, std::span<double> o) { o[0] = f(t); };
  out.components = 1;
  out.weight_exponent = weight_exponent;
  return out;
}

std::vector<QuadResult> integrate_weighted_multi(const Integrand& f, const WarpSpec& w,
                                                 const QuadOptions& opts) {
  Engine eng(f, w, opts);
  Accumulator acc(eng.components());
  if (w.bounded()) {
    origin_panels(eng, acc, w.radius());
  } else {
    origin_panels(eng, acc, 1.0);
    outward_panels(eng, acc);
  }
  return refine(eng, acc);
}

QuadResult integrate_weighted(const Integrand& f, const WarpSpec& w, double tol) {
  QuadOptions opts;
  opts.tol = tol;
  return integrate_weighted_multi(f, w, opts).front();
}

std::vector<QuadResult> integrate_interval_multi(const Integrand& f, const WarpSpec& w, double a,
                                                 double b, const QuadOptions& opts) {
  if (!(a > 0.0 && b > a && b <= w.radius())) throw DomainError("integration interval outside (0, R)");
  Engine eng(f, w, opts);
  Accumulator acc(eng.components());
  double hi = b;
  while (0.5 * hi > a) {
    acc.panels.push_back(eng.panel(0.5 * hi, hi));
    hi *= 0.5;
  }
  acc.panels.push_back(eng.panel(a, hi));
  return refine(eng, acc);
}

QuadResult integrate_interval(const Integrand& f, const WarpSpec& w, double a, double b, double tol) {
  QuadOptions opts;
  opts.tol = tol;
  return integrate_interval_multi(f, w, a, b, opts).front();
}

std::string to_string(GrowthLaw law) {
  switch (law) {
    case GrowthLaw::convergent: return "convergent";
    case GrowthLaw::power: return "power";
    case GrowthLaw::log: return "log";
  }
  return "unknown";
}

DivergenceFit divergence_probe(const Integrand& f, const WarpSpec& w, double r0,
                               std::span<const double> eps_list, double tol) {
  if (eps_list.size() < 4) throw DomainError("divergence probe needs at least 4 cutoffs");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] >= 1e-6 && eps_list[i] < r0)) throw DomainError("cutoffs must lie in [1e-6, R0)");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) throw DomainError("cutoffs must strictly decrease");
  }
  DivergenceFit fit;
  fit.eps.assign(eps_list.begin(), eps_list.end());
  for (double e : eps_list) {
    const QuadResult q = integrate_interval(f, w, e, r0, tol);
    fit.values.push_back(q.value);
  }
  const std::size_t n = fit.values.size();
  const double last = fit.values[n - 1], before = fit.values[n - 2];
  if (std::abs(last - before) <= 1e-3 * std::abs(last)) {
    fit.law = GrowthLaw::convergent;
    return fit;
  }
  for (double v : fit.values) {
    if (!(v > 0.0)) throw DomainError("divergence probe expects a positive integrand");
  }

  auto linear_fit = [](const std::vector<double>& x, const std::vector<double>& y) {
    const double m = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sx += x[i];
      sy += y[i];
      sxx += x[i] * x[i];
      sxy += x[i] * y[i];
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return std::pair{slope, (sy - slope * sx) / m};
  };
  std::vector<double> L, logI;
  for (std::size_t i = 0; i < n; ++i) {
    L.push_back(std::log(1.0 / fit.eps[i]));
    logI.push_back(std::log(fit.values[i]));
  }
  // Power law: log I = beta log(1/eps) + c. Log law: I = A log(1/eps) + B.
  const auto [beta, c] = linear_fit(L, logI);
  const auto [A, B] = linear_fit(L, fit.values);
  double rp = 0.0, rl = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double I = fit.values[i];
    rp += std::pow((std::exp(beta * L[i] + c) - I) / I, 2);
    rl += std::pow((A * L[i] + B - I) / I, 2);
  }
  fit.power_exponent = beta;
  fit.power_residual = std::sqrt(rp / static_cast<double>(n));
  fit.log_slope = A;
  fit.log_residual = std::sqrt(rl / static_cast<double>(n));
  if (fit.log_residual < fit.power_residual) {
    fit.law = GrowthLaw::log;
    fit.exponent = A;
    fit.residual = fit.log_residual;
  } else {
    fit.law = GrowthLaw::power;
    fit.exponent = beta;
    fit.residual = fit.power_residual;
  }
  return fit;
}

}  // namespace radsob
