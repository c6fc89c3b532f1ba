#include "radsob/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "radsob/errors.hpp"

namespace radsob {
namespace {

void enumerate_degree(int num_vars, int degree, int var, MultiIndex& current,
                      std::vector<MultiIndex>& out) {
  if (var == num_vars - 1) {
    current[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(degree);
    out.push_back(current);
    current[static_cast<std::size_t>(var)] = 0;
    return;
  }
  for (int e = degree; e >= 0; --e) {
    current[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(e);
    enumerate_degree(num_vars, degree - e, var + 1, current, out);
  }
  current[static_cast<std::size_t>(var)] = 0;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Neumaier-compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double result() const { return sum + comp; }
};

void check_compatible(const Jet& a, const Jet& b) {
  if (a.num_vars() != b.num_vars()) {
    throw DimensionError("jet variable counts differ: " + std::to_string(a.num_vars()) +
                         " vs " + std::to_string(b.num_vars()));
  }
  if (!(a.base() == b.base())) {
    throw DimensionError("jets expanded about different base points");
  }
}

}  // namespace

JetLayout::JetLayout(int num_vars, int order) : num_vars_(num_vars), order_(order) {
  MultiIndex current{};
  for (int d = 0; d <= order; ++d) {
    enumerate_degree(num_vars, d, 0, current, monomials_);
    prefix_.push_back(monomials_.size());
  }
  degrees_.reserve(monomials_.size());
  std::map<MultiIndex, std::size_t> lookup;
  for (std::size_t i = 0; i < monomials_.size(); ++i) {
    int d = 0;
    for (int v = 0; v < num_vars; ++v) d += monomials_[i][static_cast<std::size_t>(v)];
    degrees_.push_back(d);
    lookup.emplace(monomials_[i], i);
  }

  for (std::size_t a = 0; a < monomials_.size(); ++a) {
    for (std::size_t b = 0; b < monomials_.size(); ++b) {
      if (degrees_[a] + degrees_[b] > order) continue;
      MultiIndex sum{};
      for (int v = 0; v < num_vars; ++v) {
        const auto s = static_cast<std::size_t>(v);
        sum[s] = static_cast<std::uint8_t>(monomials_[a][s] + monomials_[b][s]);
      }
      mul_terms_.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                            static_cast<std::uint32_t>(lookup.at(sum))});
    }
  }
  std::stable_sort(mul_terms_.begin(), mul_terms_.end(),
                   [](const MulTerm& x, const MulTerm& y) { return x.out < y.out; });

  partial_terms_.resize(static_cast<std::size_t>(num_vars));
  for (int v = 0; v < num_vars; ++v) {
    const auto s = static_cast<std::size_t>(v);
    for (std::size_t i = 0; i < monomials_.size(); ++i) {
      if (monomials_[i][s] == 0) continue;
      MultiIndex lowered = monomials_[i];
      lowered[s] = static_cast<std::uint8_t>(lowered[s] - 1);
      partial_terms_[s].push_back({static_cast<std::uint32_t>(i),
                                   static_cast<std::uint32_t>(lookup.at(lowered)),
                                   static_cast<double>(monomials_[i][s])});
    }
    std::sort(partial_terms_[s].begin(), partial_terms_[s].end(),
              [](const PartialTerm& x, const PartialTerm& y) { return x.dst < y.dst; });
  }
}

const JetLayout& JetLayout::get(int num_vars, int order) {
  if (num_vars < 1 || num_vars > kMaxJetVars || order < 0 || order > kMaxJetOrder) {
    throw DimensionError("jet layout out of range: num_vars=" + std::to_string(num_vars) +
                         ", order=" + std::to_string(order));
  }
  static std::array<std::array<std::once_flag, kMaxJetOrder + 1>, kMaxJetVars + 1> flags;
  static std::array<std::array<std::unique_ptr<JetLayout>, kMaxJetOrder + 1>, kMaxJetVars + 1>
      layouts;
  const auto n = static_cast<std::size_t>(num_vars);
  const auto d = static_cast<std::size_t>(order);
  std::call_once(flags[n][d], [&] { layouts[n][d].reset(new JetLayout(num_vars, order)); });
  return *layouts[n][d];
}

std::size_t JetLayout::index_of(const MultiIndex& alpha) const {
  int d = 0;
  for (int v = 0; v < num_vars_; ++v) d += alpha[static_cast<std::size_t>(v)];
  for (int v = num_vars_; v < kMaxJetVars; ++v) {
    if (alpha[static_cast<std::size_t>(v)] != 0) return size();
  }
  if (d > order_) return size();
  const std::size_t lo = d == 0 ? 0 : prefix_[static_cast<std::size_t>(d - 1)];
  const std::size_t hi = prefix_[static_cast<std::size_t>(d)];
  for (std::size_t i = lo; i < hi; ++i) {
    if (monomials_[i] == alpha) return i;
  }
  return size();
}

Jet::Jet(int num_vars, int order, BasePoint base, std::vector<double> coeffs)
    : layout_(&JetLayout::get(num_vars, order)),
      base_(std::move(base)),
      coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != layout_->size()) {
    throw DimensionError("coefficient count " + std::to_string(coeffs_.size()) +
                         " does not match layout size " + std::to_string(layout_->size()));
  }
  if (base_.size() != static_cast<std::size_t>(num_vars)) {
    throw DimensionError("base point dimension does not match jet variable count");
  }
}

Jet Jet::zero(int num_vars, int order, BasePoint base) {
  const auto n = JetLayout::get(num_vars, order).size();
  return Jet(num_vars, order, std::move(base), std::vector<double>(n, 0.0));
}

Jet Jet::constant(int num_vars, int order, BasePoint base, double value) {
  Jet j = zero(num_vars, order, std::move(base));
  j.coeffs_[0] = value;
  return j;
}

Jet Jet::variable(int num_vars, int order, BasePoint base, int var) {
  if (var < 0 || var >= num_vars) throw DimensionError("variable index out of range");
  const double at = base[static_cast<std::size_t>(var)];
  Jet j = constant(num_vars, order, std::move(base), at);
  if (order >= 1) {
    MultiIndex e{};
    e[static_cast<std::size_t>(var)] = 1;
    j.coeffs_[j.layout_->index_of(e)] = 1.0;
  }
  return j;
}

Jet Jet::univariate(double at, std::vector<double> coeffs) {
  if (coeffs.empty()) throw DimensionError("univariate jet needs at least one coefficient");
  const int order = static_cast<int>(coeffs.size()) - 1;
  return Jet(1, order, BasePoint({at}), std::move(coeffs));
}

Jet Jet::embed(const Jet& univariate, int num_vars, int var, BasePoint base) {
  if (univariate.num_vars() != 1) throw DimensionError("embed expects a univariate jet");
  if (var < 0 || var >= num_vars) throw DimensionError("variable index out of range");
  if (base[static_cast<std::size_t>(var)] != univariate.base()[0]) {
    throw DimensionError("embedded jet base point disagrees with target base point");
  }
  Jet j = zero(num_vars, univariate.order(), std::move(base));
  MultiIndex e{};
  for (int n = 0; n <= univariate.order(); ++n) {
    e[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(n);
    j.coeffs_[j.layout_->index_of(e)] = univariate.coeffs_[static_cast<std::size_t>(n)];
  }
  return j;
}

double Jet::coeff(const MultiIndex& alpha) const {
  const auto i = layout_->index_of(alpha);
  return i < coeffs_.size() ? coeffs_[i] : 0.0;
}

double Jet::derivative(const MultiIndex& alpha) const {
  double scale = 1.0;
  for (int v = 0; v < num_vars(); ++v) scale *= factorial(alpha[static_cast<std::size_t>(v)]);
  return coeff(alpha) * scale;
}

double Jet::derivative(int var, int n) const {
  MultiIndex alpha{};
  alpha[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(n);
  return derivative(alpha);
}

bool Jet::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
}

Jet Jet::truncated(int new_order) const {
  if (new_order >= order()) return *this;
  if (new_order < 0) throw DimensionError("negative truncation order");
  std::vector<double> c(coeffs_.begin(),
                        coeffs_.begin() + static_cast<std::ptrdiff_t>(layout_->prefix_size(new_order)));
  return Jet(num_vars(), new_order, base_, std::move(c));
}

Jet operator+(const Jet& a, const Jet& b) {
  check_compatible(a, b);
  const int order = std::min(a.order(), b.order());
  const auto n = JetLayout::get(a.num_vars(), order).size();
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = a.coeffs_[i] + b.coeffs_[i];
  return Jet(a.num_vars(), order, a.base_, std::move(c));
}

Jet operator-(const Jet& a, const Jet& b) {
  check_compatible(a, b);
  const int order = std::min(a.order(), b.order());
  const auto n = JetLayout::get(a.num_vars(), order).size();
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = a.coeffs_[i] - b.coeffs_[i];
  return Jet(a.num_vars(), order, a.base_, std::move(c));
}

Jet operator*(const Jet& a, const Jet& b) {
  check_compatible(a, b);
  const int order = std::min(a.order(), b.order());
  const JetLayout& layout = JetLayout::get(a.num_vars(), order);
  std::vector<double> c(layout.size(), 0.0);
  const auto terms = layout.mul_terms();
  std::size_t t = 0;
  while (t < terms.size()) {
    const std::uint32_t out = terms[t].out;
    CompensatedSum acc;
    for (; t < terms.size() && terms[t].out == out; ++t) {
      acc.add(a.coeffs_[terms[t].lhs] * b.coeffs_[terms[t].rhs]);
    }
    c[out] = acc.result();
  }
  return Jet(a.num_vars(), order, a.base_, std::move(c));
}

Jet operator*(double s, const Jet& a) {
  std::vector<double> c(a.coeffs_);
  for (double& x : c) x *= s;
  return Jet(a.num_vars(), a.order(), a.base_, std::move(c));
}

Jet Jet::plus_constant(double c) const {
  Jet j = *this;
  j.coeffs_[0] += c;
  return j;
}

Jet partial(const Jet& a, int var) {
  if (a.order() == 0) throw OrderExhaustedError("partial derivative of an order-0 jet");
  if (var < 0 || var >= a.num_vars()) throw DimensionError("partial: variable index out of range");
  const JetLayout& out_layout = JetLayout::get(a.num_vars(), a.order() - 1);
  std::vector<double> c(out_layout.size(), 0.0);
  for (const auto& term : a.layout().partial_terms(var)) {
    c[term.dst] = term.factor * a.coeffs()[term.src];
  }
  return Jet(a.num_vars(), a.order() - 1, a.base(), std::move(c));
}

std::vector<double> analytic_series(AnalyticFn f, double c, int order) {
  std::vector<double> a(static_cast<std::size_t>(order) + 1, 0.0);
  auto cyclic = [&](std::array<double, 4> cycle) {
    for (int n = 0; n <= order; ++n) {
      a[static_cast<std::size_t>(n)] = cycle[static_cast<std::size_t>(n % 4)] / factorial(n);
    }
  };
  switch (f.kind) {
    case Analytic::sin: {
      const double s = std::sin(c), co = std::cos(c);
      cyclic({s, co, -s, -co});
      break;
    }
    case Analytic::cos: {
      const double s = std::sin(c), co = std::cos(c);
      cyclic({co, -s, -co, s});
      break;
    }
    case Analytic::sinh: {
      const double s = std::sinh(c), ch = std::cosh(c);
      cyclic({s, ch, s, ch});
      break;
    }
    case Analytic::cosh: {
      const double s = std::sinh(c), ch = std::cosh(c);
      cyclic({ch, s, ch, s});
      break;
    }
    case Analytic::exp: {
      const double e = std::exp(c);
      for (int n = 0; n <= order; ++n) a[static_cast<std::size_t>(n)] = e / factorial(n);
      break;
    }
    case Analytic::tanh: {
      // y' = 1 - y^2, solved coefficient by coefficient.
      a[0] = std::tanh(c);
      for (int n = 0; n < order; ++n) {
        double conv = 0.0;
        for (int i = 0; i <= n; ++i) {
          conv += a[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(n - i)];
        }
        a[static_cast<std::size_t>(n + 1)] = ((n == 0 ? 1.0 : 0.0) - conv) / (n + 1);
      }
      break;
    }
    case Analytic::log: {
      if (c == 0.0) throw SingularCompositionError("log composed with a jet of value 0");
      if (c < 0.0) throw DomainError("log composed with a jet of negative value");
      a[0] = std::log(c);
      double cn = 1.0;
      for (int n = 1; n <= order; ++n) {
        cn *= c;
        a[static_cast<std::size_t>(n)] = ((n % 2 == 1) ? 1.0 : -1.0) / (n * cn);
      }
      break;
    }
    case Analytic::recip:
    case Analytic::pow: {
      const double e = f.kind == Analytic::recip ? -1.0 : f.exponent;
      const bool integral = std::floor(e) == e;
      if (c == 0.0 && (e < 0.0 || !integral)) {
        throw SingularCompositionError("power/reciprocal composed with a jet of value 0");
      }
      if (c < 0.0 && !integral) {
        throw DomainError("non-integer power of a jet with negative value");
      }
      double binom = 1.0;
      for (int n = 0; n <= order; ++n) {
        if (n > 0) binom *= (e - (n - 1)) / n;
        const double power = e - n;
        double cp;
        if (c == 0.0) {
          cp = power == 0.0 ? 1.0 : 0.0;
        } else if (integral) {
          cp = std::pow(c, static_cast<int>(power));
        } else {
          cp = std::pow(c, power);
        }
        a[static_cast<std::size_t>(n)] = binom * cp;
      }
      break;
    }
  }
  return a;
}

Jet compose(AnalyticFn f, const Jet& inner) {
  const double c = inner.value();
  const auto series = analytic_series(f, c, inner.order());
  const Jet h = inner.plus_constant(-c);
  Jet result = Jet::constant(inner.num_vars(), inner.order(), inner.base(), series.back());
  for (int n = inner.order() - 1; n >= 0; --n) {
    result = (result * h).plus_constant(series[static_cast<std::size_t>(n)]);
  }
  return result;
}

}  // namespace radsob
