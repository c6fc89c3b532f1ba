#include "radsob/verify.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "radsob/errors.hpp"
#include "radsob/geometry.hpp"
#include "radsob/norms.hpp"
#include "radsob/parallel.hpp"
#include "radsob/quadrature.hpp"

namespace radsob {
namespace {

using json = nlohmann::ordered_json;

constexpr double kIdentityTol = 1e-8;
constexpr double kMarginTol = -1e-10;
constexpr double kNormEqualityTol = 1e-8;
constexpr double kDecayTol = 1e-6;
constexpr double kStability = 0.01;
constexpr double kTermInclusionTol = 1e-10;
constexpr double kExponentTol = 0.02;
constexpr double kLeadingTol = 0.01;

const std::vector<double> kProbeEps = {1e-3, 5e-4, 2e-4, 1e-4, 5e-5, 2e-5, 1e-5, 5e-6, 2e-6, 1e-6};

double rel_gap(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

json family_list(const std::vector<RadialFunction>& fs) {
  json out = json::array();
  for (const auto& f : fs) out.push_back(f.describe());
  return out;
}

json params_json(const CheckSpec& s) {
  const WarpSpec& w = s.manifold.warp();
  json p;
  p["manifold"] = s.manifold.describe();
  p["warp"] = w.tag();
  if (w.kind() == WarpKind::custom_odd_series) {
    json c = json::array();
    for (double a : w.odd_coefficients()) c.push_back(a);
    p["coefficients"] = c;
  }
  p["R"] = json_number(w.radius());
  p["N"] = s.manifold.dim();
  p["k"] = s.k;
  p["p"] = s.p;
  switch (s.kind) {
    case CheckKind::embedding_ratio:
      p["q"] = s.q;
      p["theta"] = s.theta;
      p["space"] = to_string(s.space);
      p["diagnostic"] = s.diagnostic;
      break;
    case CheckKind::hardy: p["j"] = s.j; break;
    default: break;
  }
  p["families"] = family_list(s.families);
  return p;
}

json grid_json(const RGrid& g, int refined_points, double tol, bool sampled) {
  json out;
  out["spacing"] = "log";
  out["r_lo"] = g.lo;
  out["r_hi"] = g.hi;
  out["points"] = g.r.size();
  if (refined_points > 0) out["refined_points"] = refined_points;
  out["tol"] = tol;
  if (sampled) {
    out["refined_tol"] = tol / 2.0;
    out["sampling"] = sampling_factors(0);
    out["refined_sampling"] = sampling_factors(1);
  }
  return out;
}

json quad_json(double tol, bool sampled) {
  json out;
  out["tol"] = tol;
  if (sampled) {
    out["refined_tol"] = tol / 2.0;
    out["sampling"] = sampling_factors(0);
    out["refined_sampling"] = sampling_factors(1);
  }
  return out;
}

std::string verdict(bool ok) { return ok ? "pass" : "fail"; }

bool stable(double c0, double c1) {
  if (!std::isfinite(c0) || !std::isfinite(c1)) return false;
  if (c0 == 0.0) return c1 == 0.0;
  return std::abs(c1 - c0) <= kStability * std::abs(c0);
}

double log_phi(const WarpSpec& w, double t) { return w.log_value(t); }

int rank_of(const CheckSpec& s) { return s.j < 0 ? s.k : s.j; }

/// |nabla^j u|_g for j = 0..k with the geometry built at order k.
std::vector<double> rank_norms(const RadialFunction& f, const ManifoldSpec& m, double r, int k) {
  const auto geo = geometry_at(m, ChartPoint::at_default_angles(m.dim(), r), std::max(k, 1));
  const auto tensors = covariant_derivatives(f.eval_jet(r, k), geo, k);
  std::vector<double> out;
  for (const auto& t : tensors) out.push_back(pointwise_norm(t, geo.metric));
  return out;
}

// ---------------------------------------------------------------- identity

struct PointSweep {
  // Indexed [family][rank].
  std::vector<std::vector<double>> gap;
  std::vector<std::vector<double>> margin;
  std::vector<std::vector<double>> norm;
  int zero_pairs = 0;
};

PointSweep sweep_point(const CheckSpec& s, double r) {
  const int k = s.k;
  const auto geo = geometry_at(s.manifold, ChartPoint::at_default_angles(s.manifold.dim(), r), std::max(k, 1));
  PointSweep out;
  for (const auto& f : s.families) {
    const Jet vj = f.eval_jet(r, k);
    const auto tensors = covariant_derivatives(vj, geo, k);
    std::vector<double> gap(static_cast<std::size_t>(k) + 1, 0.0);
    std::vector<double> margin(static_cast<std::size_t>(k) + 1, 0.0);
    std::vector<double> norm(static_cast<std::size_t>(k) + 1, 0.0);
    for (int j = 0; j <= k; ++j) {
      const auto& t = tensors[static_cast<std::size_t>(j)];
      const double c = t.components.front().value();
      const double d = vj.derivative(0, j);
      const NormSplit split = pointwise_norm_split(t, geo.metric);
      norm[static_cast<std::size_t>(j)] = split.norm();
      if (c == 0.0 && d == 0.0) ++out.zero_pairs;
      gap[static_cast<std::size_t>(j)] = rel_gap(c, d);
      // Split form keeps the nonnegative angular excess free of cancellation.
      margin[static_cast<std::size_t>(j)] =
          (split.excess() + (std::abs(c) - std::abs(d))) / std::max(1.0, std::abs(d));
    }
    out.gap.push_back(std::move(gap));
    out.margin.push_back(std::move(margin));
    out.norm.push_back(std::move(norm));
  }
  return out;
}

std::vector<PointSweep> sweep(const CheckSpec& s, const RGrid& grid) {
  std::vector<PointSweep> pts(grid.r.size());
  parallel_for(grid.r.size(), [&](std::size_t i) { pts[i] = sweep_point(s, grid.r[i]); });
  return pts;
}

ReportEntry check_identity(const CheckSpec& s, ReportEntry e) {
  const RGrid grid = default_r_grid(s.manifold.warp(), s.grid_points);
  const auto pts = sweep(s, grid);
  double worst = 0.0;
  std::vector<double> per_rank(static_cast<std::size_t>(s.k), 0.0);
  json where = json::object();
  int zero_pairs = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    zero_pairs += pts[i].zero_pairs;
    for (std::size_t f = 0; f < s.families.size(); ++f) {
      for (int j = 1; j <= s.k; ++j) {
        const double g = pts[i].gap[f][static_cast<std::size_t>(j)];
        per_rank[static_cast<std::size_t>(j - 1)] = std::max(per_rank[static_cast<std::size_t>(j - 1)], g);
        if (where.empty() || g > worst) {
          worst = g;
          where = {{"r", grid.r[i]}, {"family", s.families[f].describe()}, {"rank", j}};
        }
      }
    }
  }
  e.verdict = verdict(worst <= kIdentityTol);
  e.measured = {{"max_rel_gap", worst}, {"max_rel_gap_by_k", per_rank}, {"threshold", kIdentityTol},
                {"zero_pairs_skipped", zero_pairs}};
  e.worst_case = where;
  e.grid = grid_json(grid, 0, 0.0, false);
  e.grid.erase("tol");
  return e;
}

ReportEntry check_gradient(const CheckSpec& s, ReportEntry e) {
  const RGrid grid = default_r_grid(s.manifold.warp(), s.grid_points);
  const auto pts = sweep(s, grid);
  double worst = kInf;
  std::vector<double> per_rank(static_cast<std::size_t>(s.k) + 1, kInf);
  json where;
  json per_family = json::array();
  for (std::size_t f = 0; f < s.families.size(); ++f) {
    double fam_worst = kInf;
    json fam_where;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (int j = 0; j <= s.k; ++j) {
        const double m = pts[i].margin[f][static_cast<std::size_t>(j)];
        auto& pr = per_rank[static_cast<std::size_t>(j)];
        pr = std::min(pr, m);
        if (m < worst) {
          worst = m;
          where = {{"r", grid.r[i]}, {"family", s.families[f].describe()}, {"rank", j},
                   {"norm", pts[i].norm[f][static_cast<std::size_t>(j)]}};
        }
        if (j == rank_of(s) && m < fam_worst) {
          fam_worst = m;
          fam_where = {{"family", s.families[f].describe()}, {"rank", j}, {"r", grid.r[i]},
                       {"margin", m}, {"norm", pts[i].norm[f][static_cast<std::size_t>(j)]}};
        }
      }
    }
    per_family.push_back(fam_where);
  }
  e.verdict = verdict(worst >= kMarginTol);
  e.measured = {{"min_margin", worst}, {"min_margin_by_rank", per_rank}, {"threshold", kMarginTol},
                {"per_family", per_family}};
  e.worst_case = where;
  e.grid = grid_json(grid, 0, 0.0, false);
  e.grid.erase("tol");
  return e;
}

// ------------------------------------------------------- k = 1 equality

ReportEntry check_k1(const CheckSpec& s, ReportEntry e) {
  const double omega = sphere_volume(s.manifold.dim());
  struct Row {
    bool skipped = false;
    double gap0 = 0.0, gap1 = 0.0, lhs = 0.0, rhs = 0.0;
  };
  std::vector<Row> rows(s.families.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    const auto& f = s.families[i];
    const auto man = sobolev_norm_manifold(f, 1, s.p, s.manifold, s.tol);
    const auto one = sobolev_norm_1d(f, 1, s.p, s.manifold.dim(), s.manifold.warp(), s.tol);
    Row& row = rows[i];
    if (!man.finite && !one.finite) {
      row.skipped = true;
      return;
    }
    const double scale = std::pow(omega, 1.0 / s.p);
    row.lhs = man.seminorms[1];
    row.rhs = scale * one.seminorms[1];
    row.gap1 = rel_gap(row.lhs, row.rhs);
    row.gap0 = rel_gap(man.seminorms[0], scale * one.seminorms[0]);
    if (!std::isfinite(row.gap1)) row.gap1 = kInf;
    if (!std::isfinite(row.gap0)) row.gap0 = kInf;
  });
  double worst = 0.0;
  json where = json::object();
  json per_family = json::array();
  json skipped = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const std::string name = s.families[i].describe();
    if (row.skipped) {
      skipped.push_back(name);
      continue;
    }
    per_family.push_back({{"family", name},
                          {"gradient_manifold", json_number(row.lhs)},
                          {"gradient_interval", json_number(row.rhs)},
                          {"rel_gap", json_number(row.gap1)},
                          {"rel_gap_lp", json_number(row.gap0)}});
    const double g = std::max(row.gap0, row.gap1);
    if (where.empty() || g > worst) {
      worst = g;
      where = {{"family", name}, {"rel_gap", json_number(g)}};
    }
  }
  e.verdict = verdict(worst <= kNormEqualityTol && !per_family.empty());
  e.measured = {{"max_rel_gap", json_number(worst)}, {"threshold", kNormEqualityTol},
                {"per_family", per_family}, {"skipped_infinite_norm", skipped}};
  e.worst_case = where;
  e.grid = quad_json(s.tol, false);
  return e;
}

// ---------------------------------------------------------- radial lemmas

double lemma_pointwise(const CheckSpec& s, const RadialFunction& f, double norm, double t) {
  const double v = std::abs(f.value(t));
  const WarpSpec& w = s.manifold.warp();
  if (s.kind == CheckKind::radial_lemma_power) {
    const double expo = (s.manifold.dim() - s.k * s.p) / s.p;
    return v * std::exp(expo * log_phi(w, t)) / norm;
  }
  const double lg = std::pow(std::log(w.radius() / t), (s.p - 1.0) / s.p);
  return v / (lg + 1.0) / norm;
}

struct SupResult {
  double value = 0.0;
  json where = json::object();
  json per_family = json::array();
  json skipped = json::array();
  int zero_points = 0;
};

SupResult lemma_sup(const CheckSpec& s, const RGrid& grid, const std::vector<RadialFunction>& fams, double tol) {
  std::vector<NormResult> norms(fams.size());
  parallel_for(fams.size(), [&](std::size_t i) {
    norms[i] = sobolev_norm_1d(fams[i], s.k, s.p, s.manifold.dim(), s.manifold.warp(), tol);
  });
  SupResult out;
  for (std::size_t i = 0; i < fams.size(); ++i) {
    const std::string name = fams[i].describe();
    const double nm = norms[i].value;
    if (!norms[i].finite || nm == 0.0) {
      out.skipped.push_back(name);
      if (nm == 0.0) out.zero_points += static_cast<int>(grid.r.size());
      continue;
    }
    double best = -1.0, best_r = 0.0;
    for (double t : grid.r) {
      const double ratio = lemma_pointwise(s, fams[i], nm, t);
      if (ratio > best) {
        best = ratio;
        best_r = t;
      }
    }
    out.per_family.push_back({{"family", name}, {"r", best_r}, {"value", best}, {"norm", nm}});
    if (out.where.empty() || best > out.value) {
      out.value = best;
      out.where = {{"r", best_r}, {"family", name}, {"value", best}};
    }
  }
  return out;
}

ReportEntry check_radial_lemma(const CheckSpec& s, ReportEntry e) {
  const RGrid g0 = default_r_grid(s.manifold.warp(), s.grid_points);
  const RGrid g1 = refine_grid(g0);
  const SupResult c0 = lemma_sup(s, g0, sample_families(s.families, 0), s.tol);
  const SupResult c1 = lemma_sup(s, g1, sample_families(s.families, 1), s.tol / 2.0);
  const bool any = !c0.per_family.empty();
  e.verdict = verdict(any && stable(c0.value, c1.value));
  e.measured = {{"constant", json_number(c0.value)},
                {"refined_constant", json_number(c1.value)},
                {"relative_change", json_number(c0.value > 0 ? std::abs(c1.value - c0.value) / c0.value : 0.0)},
                {"stability_threshold", kStability},
                {"per_family", c0.per_family},
                {"skipped_families", c0.skipped},
                {"zero_points_skipped", c0.zero_points}};
  e.worst_case = c1.where;
  e.grid = grid_json(g0, static_cast<int>(g1.r.size()), s.tol, true);
  return e;
}

// ------------------------------------------------------------ decay lemma

struct DecayData {
  bool admissible = false;
  double rhs_const = 0.0;
  double lp = 0.0, grad = 0.0;
};

double decay_prefactor(const CheckSpec& s, double cphi) {
  const int n = s.manifold.dim();
  return std::pow(s.p / (std::pow(cphi, n - 1) * sphere_volume(n)), 1.0 / s.p);
}

DecayData decay_data(const CheckSpec& s, const RadialFunction& f, double prefactor) {
  const auto nm = sobolev_norm_manifold(f, 1, s.p, s.manifold, s.tol);
  DecayData d;
  if (!nm.finite) return d;
  d.admissible = true;
  d.lp = nm.seminorms[0];
  d.grad = nm.seminorms[1];
  d.rhs_const = prefactor * std::pow(d.lp, (s.p - 1.0) / s.p) * std::pow(d.grad, 1.0 / s.p);
  return d;
}

/// nullopt marks a 0/0 point.
std::optional<double> decay_pointwise(const CheckSpec& s, const RadialFunction& f, const DecayData& d, double t) {
  const double v = std::abs(f.value(t));
  const double rhs = d.rhs_const * std::exp((1.0 - s.manifold.dim()) / s.p * log_phi(s.manifold.warp(), t));
  if (rhs == 0.0) {
    if (v == 0.0) return std::nullopt;
    return kInf;
  }
  return v / rhs;
}

ReportEntry check_decay(const CheckSpec& s, ReportEntry e) {
  const auto cphi = c_phi(s.manifold.warp());
  const double pref = decay_prefactor(s, cphi.value);
  const RGrid grid = default_r_grid(s.manifold.warp(), s.grid_points);
  std::vector<DecayData> data(s.families.size());
  parallel_for(data.size(), [&](std::size_t i) { data[i] = decay_data(s, s.families[i], pref); });
  double worst = 0.0;
  int zero = 0;
  json where = json::object(), per_family = json::array(), skipped = json::array();
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::string name = s.families[i].describe();
    if (!data[i].admissible) {
      skipped.push_back(name);
      continue;
    }
    double best = -1.0, best_r = 0.0;
    for (double t : grid.r) {
      const auto ratio = decay_pointwise(s, s.families[i], data[i], t);
      if (!ratio) {
        ++zero;
        continue;
      }
      if (*ratio > best) {
        best = *ratio;
        best_r = t;
      }
    }
    if (best < 0.0) continue;
    per_family.push_back({{"family", name}, {"r", best_r}, {"value", json_number(best)},
                          {"lp_norm", data[i].lp}, {"gradient_norm", data[i].grad}});
    if (where.empty() || best > worst) {
      worst = best;
      where = {{"r", best_r}, {"family", name}, {"value", json_number(best)}};
    }
  }
  e.verdict = verdict(!per_family.empty() && worst <= 1.0 + kDecayTol);
  e.measured = {{"max_ratio", json_number(worst)}, {"threshold", 1.0 + kDecayTol},
                {"c_phi", cphi.value}, {"prefactor", pref},
                {"per_family", per_family}, {"skipped_families", skipped},
                {"zero_points_skipped", zero}};
  e.worst_case = where;
  e.grid = grid_json(grid, 0, s.tol, false);
  e.grid["c_phi_grid"] = {{"lo", cphi.grid_lo}, {"hi", cphi.grid_hi}, {"points", cphi.grid_size}};
  return e;
}

// ------------------------------------------------------------------ hardy

SupResult hardy_sup(const CheckSpec& s, const std::vector<RadialFunction>& fams, double tol) {
  const int n = s.manifold.dim();
  const WarpSpec& w = s.manifold.warp();
  struct Row {
    double lhs = 0.0, rhs = 0.0;
    bool finite = true;
  };
  std::vector<Row> rows(fams.size());
  parallel_for(fams.size(), [&](std::size_t i) {
    const auto& f = fams[i];
    const auto rhs = sobolev_norm_1d(f, s.k, s.p, n, w, tol);
    Row& row = rows[i];
    row.finite = rhs.finite;
    for (int d = s.k - s.j; d <= s.k; ++d) row.rhs += rhs.integrals[static_cast<std::size_t>(d)].value;
    if (s.j == 0) {
      // Same integral as the top term of the right-hand side.
      row.lhs = rhs.integrals[static_cast<std::size_t>(s.k)].value;
      return;
    }
    const int order = s.k - s.j;
    Integrand g;
    g.weight_exponent = n - 1 - s.j * s.p;
    g.support_end = f.support_end();
    g.eval = [&f, order, p = s.p](double t, std::span<double> out) {
      out[0] = std::pow(std::abs(f.derivative(t, order)), p);
    };
    QuadOptions o;
    o.tol = tol;
    o.abs_tol = 1e-14 * row.rhs;
    const auto lhs = integrate_weighted_multi(g, w, o).front();
    row.lhs = lhs.diverged ? kInf : lhs.value;
  });
  SupResult out;
  for (std::size_t i = 0; i < fams.size(); ++i) {
    const std::string name = fams[i].describe();
    if (!rows[i].finite || rows[i].rhs == 0.0) {
      out.skipped.push_back(name);
      continue;
    }
    const double c = rows[i].lhs / rows[i].rhs;
    out.per_family.push_back({{"family", name}, {"lhs", json_number(rows[i].lhs)}, {"rhs", rows[i].rhs},
                              {"ratio", json_number(c)}});
    if (out.where.empty() || c > out.value) {
      out.value = c;
      out.where = {{"family", name}, {"ratio", json_number(c)}};
    }
  }
  return out;
}

ReportEntry check_hardy(const CheckSpec& s, ReportEntry e) {
  const SupResult c0 = hardy_sup(s, sample_families(s.families, 0), s.tol);
  const SupResult c1 = hardy_sup(s, sample_families(s.families, 1), s.tol / 2.0);
  bool ok = !c0.per_family.empty() && stable(c0.value, c1.value);
  if (s.j == 0) ok = ok && c0.value <= 1.0 + kTermInclusionTol && c1.value <= 1.0 + kTermInclusionTol;
  e.verdict = verdict(ok);
  e.measured = {{"constant", json_number(c0.value)},
                {"refined_constant", json_number(c1.value)},
                {"relative_change", json_number(c0.value > 0 ? std::abs(c1.value - c0.value) / c0.value : 0.0)},
                {"stability_threshold", kStability},
                {"per_family", c0.per_family},
                {"skipped_families", c0.skipped}};
  if (s.j == 0) e.measured["term_inclusion_bound"] = 1.0 + kTermInclusionTol;
  e.worst_case = c1.where;
  e.grid = quad_json(s.tol, true);
  return e;
}

// -------------------------------------------------------------- embedding

SupResult embedding_sup(const CheckSpec& s, const std::vector<RadialFunction>& fams, double q, double tol) {
  const int n = s.manifold.dim();
  const WarpSpec& w = s.manifold.warp();
  struct Row {
    double top = 0.0, bottom = 0.0;
  };
  std::vector<Row> rows(fams.size());
  parallel_for(fams.size(), [&](std::size_t i) {
    Row& row = rows[i];
    if (s.space == EmbeddingSpace::manifold) {
      row.bottom = sobolev_norm_manifold(fams[i], s.k, s.p, s.manifold, tol).value;
      row.top = std::pow(sphere_volume(n), 1.0 / q) * lq_theta_norm_1d(fams[i], q, s.theta + n - 1, w, tol).value;
    } else {
      row.bottom = sobolev_norm_1d(fams[i], s.k, s.p, n, w, tol).value;
      row.top = lq_theta_norm_1d(fams[i], q, s.theta, w, tol).value;
    }
  });
  SupResult out;
  for (std::size_t i = 0; i < fams.size(); ++i) {
    const std::string name = fams[i].describe();
    if (!std::isfinite(rows[i].bottom) || rows[i].bottom == 0.0) {
      out.skipped.push_back(name);
      continue;
    }
    const double c = rows[i].top / rows[i].bottom;
    out.per_family.push_back({{"family", name}, {"lq_norm", json_number(rows[i].top)},
                              {"sobolev_norm", rows[i].bottom}, {"ratio", json_number(c)}});
    if (out.where.empty() || c > out.value) {
      out.value = c;
      out.where = {{"family", name}, {"q", q}, {"ratio", json_number(c)}};
    }
  }
  return out;
}

double embedding_upper(const CheckSpec& s) {
  const int n = s.manifold.dim();
  if (!(n > s.k * s.p)) return kInf;
  return s.space == EmbeddingSpace::manifold ? critical_exponent(n, s.k, s.p, s.theta)
                                             : critical_exponent_1d(n, s.k, s.p, s.theta);
}

ReportEntry check_embedding(const CheckSpec& s, ReportEntry e) {
  const SupResult c0 = embedding_sup(s, sample_families(s.families, 0), s.q, s.tol);
  const SupResult c1 = embedding_sup(s, sample_families(s.families, 1), s.q, s.tol / 2.0);
  const bool ok = !c0.per_family.empty() && stable(c0.value, c1.value);
  e.measured = {{"constant", json_number(c0.value)},
                {"refined_constant", json_number(c1.value)},
                {"relative_change", json_number(c0.value > 0 ? std::abs(c1.value - c0.value) / c0.value : 0.0)},
                {"stability_threshold", kStability},
                {"q_upper", json_number(embedding_upper(s))},
                {"per_family", c0.per_family},
                {"skipped_families", c0.skipped}};
  if (!s.manifold.warp().bounded()) {
    json ends;
    ends["q_equals_p"] = json_number(embedding_sup(s, sample_families(s.families, 0), s.p, s.tol).value);
    const double upper = embedding_upper(s);
    if (std::isfinite(upper)) {
      ends["q_upper"] = json_number(embedding_sup(s, sample_families(s.families, 0), upper, s.tol).value);
    }
    e.measured["endpoints"] = ends;
  }
  e.verdict = s.diagnostic ? "diagnostic" : verdict(ok);
  if (s.diagnostic) e.measured["non_normative"] = true;
  e.worst_case = c1.where;
  e.grid = quad_json(s.tol, true);
  return e;
}

// --------------------------------------------------------- counterexample

double counterexample_alpha(const CheckSpec& s) { return s.manifold.dim() - 1 - (s.k - 1) * s.p; }

double counterexample_r0(const CheckSpec& s) { return std::min(1.0, s.manifold.warp().radius() / 2.0); }

ReportEntry check_counterexample(const CheckSpec& s, ReportEntry e) {
  const WarpSpec& w = s.manifold.warp();
  const double alpha = counterexample_alpha(s);
  const double r0 = counterexample_r0(s);
  const auto fit = divergence_probe(Integrand::scalar([](double) { return 1.0; }, alpha), w, r0, kProbeEps, s.tol);
  const double expected = -(alpha + 1.0);
  const bool log_case = alpha + 1.0 == 0.0;
  bool law_ok = false;
  if (log_case) {
    law_ok = fit.law == GrowthLaw::log;
  } else {
    law_ok = fit.law == GrowthLaw::power && std::abs(fit.exponent - expected) <= kExponentTol * std::abs(expected);
  }
  const RadialFunction v = s.families.empty() ? RadialFunction::linear() : s.families.front();
  const auto one = sobolev_norm_1d(v, s.k, s.p, s.manifold.dim(), w, s.tol);
  const auto man = sobolev_norm_manifold(v, s.k, s.p, s.manifold, s.tol);
  e.verdict = verdict(law_ok && one.finite);
  e.measured = {{"alpha", alpha},
                {"expected_law", log_case ? "log" : "power"},
                {"expected_exponent", log_case ? json(nullptr) : json(expected)},
                {"law", to_string(fit.law)},
                {"exponent", fit.exponent},
                {"power_exponent", fit.power_exponent},
                {"power_residual", fit.power_residual},
                {"log_slope", fit.log_slope},
                {"log_residual", fit.log_residual},
                {"exponent_tolerance", kExponentTol},
                {"interval_norm", json_number(one.value)},
                {"interval_norm_finite", one.finite},
                {"manifold_norm", json_number(man.value)},
                {"manifold_norm_finite", man.finite}};
  json values = json::array();
  for (double x : fit.values) values.push_back(json_number(x));
  e.measured["values"] = values;
  e.worst_case = {{"eps", fit.eps.back()}, {"integral", json_number(fit.values.back())}, {"family", v.describe()}};
  e.grid = {{"r0", r0}, {"eps", fit.eps}, {"tol", s.tol}};
  return e;
}

// ----------------------------------------------------- asymptotic leading

ReportEntry check_asymptotic(const CheckSpec& s, ReportEntry e) {
  const double expected = (s.k % 2 == 0 ? 1.0 : -1.0) * std::tgamma(s.k - 1.0);
  const double r_coarse = 1e-2, r_fine = 1e-3;
  const double a = asymptotic_leading_ratio(s.manifold, s.k, r_coarse);
  const double b = asymptotic_leading_ratio(s.manifold, s.k, r_fine);
  const double err_a = std::abs(a - expected), err_b = std::abs(b - expected);
  bool ok = err_b <= kLeadingTol * std::abs(expected) && err_b <= err_a;
  if (s.k == 2) ok = a == 1.0 && b == 1.0;
  e.verdict = verdict(ok);
  e.measured = {{"expected", expected}, {"ratio_coarse", a}, {"ratio_fine", b},
                {"rel_error_fine", err_b / std::abs(expected)}, {"tolerance", kLeadingTol}};
  e.worst_case = {{"r", r_fine}, {"ratio", b}};
  e.grid = {{"r", {r_coarse, r_fine}}};
  return e;
}

void require(bool cond, const std::string& what) {
  if (!cond) throw InadmissibleError(what);
}

const RadialFunction* first_admissible(const std::vector<RadialFunction>& fams,
                                       const std::function<bool(const RadialFunction&)>& ok) {
  for (const auto& f : fams) {
    if (ok(f)) return &f;
  }
  throw InadmissibleError("no family with finite norms for this profile");
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',') c = ';';
  }
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  return s;
}

}  // namespace

json json_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

std::string to_string(CheckKind kind) {
  switch (kind) {
    case CheckKind::identity: return "identity";
    case CheckKind::gradient_inequality: return "gradient_inequality";
    case CheckKind::k1_norm_equality: return "k1_norm_equality";
    case CheckKind::radial_lemma_power: return "radial_lemma_power";
    case CheckKind::radial_lemma_log: return "radial_lemma_log";
    case CheckKind::decay_lemma: return "decay_lemma";
    case CheckKind::hardy: return "hardy";
    case CheckKind::embedding_ratio: return "embedding_ratio";
    case CheckKind::counterexample: return "counterexample";
    case CheckKind::asymptotic_leading: return "asymptotic_leading";
  }
  return "unknown";
}

CheckKind check_kind_from_string(const std::string& tag) {
  for (int i = 0; i <= static_cast<int>(CheckKind::asymptotic_leading); ++i) {
    const auto k = static_cast<CheckKind>(i);
    if (to_string(k) == tag) return k;
  }
  throw ConfigError("unknown check kind '" + tag + "'");
}

std::string to_string(EmbeddingSpace space) {
  return space == EmbeddingSpace::manifold ? "manifold" : "interval";
}

EmbeddingSpace embedding_space_from_string(const std::string& tag) {
  if (tag == "manifold") return EmbeddingSpace::manifold;
  if (tag == "interval") return EmbeddingSpace::interval;
  throw ConfigError("unknown embedding space '" + tag + "'");
}

std::string to_string(ProfileQuantity q) {
  switch (q) {
    case ProfileQuantity::norm_profile: return "norm_profile";
    case ProfileQuantity::decay_ratio: return "decay_ratio";
    case ProfileQuantity::lemma_ratio: return "lemma_ratio";
    case ProfileQuantity::integrand: return "integrand";
  }
  return "unknown";
}

ProfileQuantity profile_quantity_from_string(const std::string& tag) {
  for (auto q : {ProfileQuantity::norm_profile, ProfileQuantity::decay_ratio, ProfileQuantity::lemma_ratio,
                 ProfileQuantity::integrand}) {
    if (to_string(q) == tag) return q;
  }
  throw ConfigError("unknown dump quantity '" + tag + "'");
}

std::vector<RadialFunction> default_families(const WarpSpec& w) {
  const double rho = w.bounded() ? std::min(2.0, 0.5 * w.radius()) : 2.0;
  return {RadialFunction::gaussian(1.0), RadialFunction::power_decay(2.0),
          RadialFunction::polynomial_bump(rho, {1.0, 0.5}), RadialFunction::log_profile(1.0, 1e-2),
          RadialFunction::linear()};
}

void validate(const CheckSpec& s) {
  const WarpSpec& w = s.manifold.warp();
  const int n = s.manifold.dim();
  const double kp = s.k * s.p;
  if (s.grid_points < 2) throw ConfigError("grid needs at least 2 points");
  if (!(s.tol >= 1e-13 && s.tol <= 1e-2)) throw ConfigError("tolerance must lie in [1e-13, 1e-2]");
  if (!(s.p >= 1.0) || !std::isfinite(s.p)) throw ConfigError("p must be a finite real >= 1");
  if (s.k < 0 || s.k > kMaxRadialOrder) throw ConfigError("k must lie in [0, 4]");
  if (s.families.empty() && s.kind != CheckKind::asymptotic_leading && s.kind != CheckKind::counterexample) {
    throw ConfigError("check needs at least one family");
  }
  switch (s.kind) {
    case CheckKind::identity:
    case CheckKind::gradient_inequality:
      require(s.k >= 1, "identity checks need 1 <= k <= 4");
      require(rank_of(s) <= s.k, "rank j must not exceed k");
      break;
    case CheckKind::k1_norm_equality: require(s.k == 1, "k1_norm_equality needs k = 1"); break;
    case CheckKind::radial_lemma_power:
      require(w.bounded(), "radial lemma needs R < inf");
      require(w.bounded_near_boundary(), "radial lemma needs phi bounded above and below near R");
      require(s.k >= 1, "radial lemma needs k >= 1");
      require(n > kp, "radial_lemma_power needs N > kp");
      break;
    case CheckKind::radial_lemma_log:
      require(w.bounded(), "radial lemma needs R < inf");
      require(w.bounded_near_boundary(), "radial lemma needs phi bounded above and below near R");
      require(s.k >= 1, "radial lemma needs k >= 1");
      require(n == kp && s.p > 1.0, "radial_lemma_log needs N = kp and p > 1");
      break;
    case CheckKind::decay_lemma:
      require(!w.bounded(), "decay lemma needs R = inf");
      require(s.k == 1, "decay lemma needs k = 1");
      require(c_phi(w).value > 0.0, "decay lemma needs C_phi > 0");
      break;
    case CheckKind::hardy:
      require(w.bounded(), "Hardy inequality needs R < inf");
      require(w.bounded_near_boundary(), "Hardy inequality needs phi bounded above and below near R");
      require(s.j >= 0 && s.j <= s.k, "Hardy inequality needs 0 <= j <= k");
      require(n > s.j * s.p, "Hardy inequality needs N > jp");
      break;
    case CheckKind::embedding_ratio: {
      if (!(s.q >= 1.0) || !std::isfinite(s.q)) throw ConfigError("q must be a finite real >= 1");
      require(s.k >= 1, "embedding needs k >= 1");
      if (s.diagnostic) break;
      require(s.theta >= 0.0, "embedding needs theta >= 0");
      const bool interval = s.space == EmbeddingSpace::interval;
      if (interval) require(s.theta >= n - kp - 1, "interval embedding needs theta >= N - kp - 1");
      if (w.bounded()) {
        require(w.bounded_near_boundary(), "embedding on R < inf needs phi bounded above and below near R");
      } else {
        require(c_phi(w).value > 0.0, "embedding on R = inf needs C_phi > 0");
      }
      const double lower = w.bounded() ? 1.0 : s.p;
      require(s.q >= lower, "q below the admissible range");
      if (n > kp) {
        require(s.q <= embedding_upper(s), "q above the critical exponent");
      } else if (n == kp) {
        require(!w.bounded() || s.p > 1.0, "N = kp on R < inf needs p > 1");
      } else {
        throw InadmissibleError("embedding needs N >= kp");
      }
      break;
    }
    case CheckKind::counterexample: {
      require(w.bounded(), "counterexample needs R < inf");
      require(s.k >= 1, "counterexample needs k >= 1");
      require(n <= (s.k - 1) * s.p, "counterexample needs N <= (k-1)p");
      for (const auto& f : s.families) {
        if (f.family() != Family::linear) throw ConfigError("counterexample uses the linear family only");
      }
      // phi in L^{N-1}(0, R): phi is continuous on [0, R] for the builtin warps.
      for (int i = 1; i <= 64; ++i) {
        require(std::isfinite(w.value(w.radius() * i / 64.0)), "counterexample needs phi in L^{N-1}(0, R)");
      }
      break;
    }
    case CheckKind::asymptotic_leading:
      require(s.k >= 2 && s.k <= 4, "asymptotic_leading needs k in {2, 3, 4}");
      break;
  }
}

RGrid default_r_grid(const WarpSpec& w, int points) {
  if (points < 2) throw ConfigError("grid needs at least 2 points");
  RGrid g;
  const double cut = tail_cutoff(w);
  g.lo = w.bounded() ? std::max(1e-3, w.radius() / 1e4) : 1e-3;
  g.hi = w.bounded() ? std::min(0.999 * w.radius(), cut) : cut;
  const double a = std::log(g.lo), b = std::log(g.hi);
  g.r.resize(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) g.r[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (points - 1));
  g.r.front() = g.lo;
  g.r.back() = g.hi;
  return g;
}

RGrid refine_grid(const RGrid& grid) {
  RGrid out;
  out.lo = grid.lo;
  out.hi = grid.hi;
  for (std::size_t i = 0; i < grid.r.size(); ++i) {
    out.r.push_back(grid.r[i]);
    if (i + 1 < grid.r.size()) out.r.push_back(std::sqrt(grid.r[i] * grid.r[i + 1]));
  }
  return out;
}

std::vector<double> sampling_factors(int level) {
  if (level == 0) return {1.0, 2.0};
  return {1.0, std::numbers::sqrt2, 2.0};
}

std::vector<RadialFunction> sample_families(const std::vector<RadialFunction>& families, int level) {
  std::vector<RadialFunction> out;
  for (const auto& f : families) {
    const int idx = f.scale_param_index();
    if (idx < 0) {
      out.push_back(f);
      continue;
    }
    const double base = f.params()[static_cast<std::size_t>(idx)];
    for (double factor : sampling_factors(level)) out.push_back(f.with_param(idx, base * factor));
  }
  return out;
}

nlohmann::ordered_json ReportEntry::to_json() const {
  json out;
  out["kind"] = kind;
  if (!label.empty()) out["label"] = label;
  out["params"] = params;
  out["verdict"] = verdict;
  out["measured"] = measured;
  out["worst_case"] = worst_case;
  out["grid"] = grid;
  out["runtime_ms"] = runtime_ms;
  return out;
}

ReportEntry run_check(const CheckSpec& spec) {
  validate(spec);
  const auto start = std::chrono::steady_clock::now();
  ReportEntry e;
  e.kind = to_string(spec.kind);
  e.label = spec.label;
  e.params = params_json(spec);
  const ReportEntry blank = e;
  try {
    switch (spec.kind) {
      case CheckKind::identity: e = check_identity(spec, std::move(e)); break;
      case CheckKind::gradient_inequality: e = check_gradient(spec, std::move(e)); break;
      case CheckKind::k1_norm_equality: e = check_k1(spec, std::move(e)); break;
      case CheckKind::radial_lemma_power:
      case CheckKind::radial_lemma_log: e = check_radial_lemma(spec, std::move(e)); break;
      case CheckKind::decay_lemma: e = check_decay(spec, std::move(e)); break;
      case CheckKind::hardy: e = check_hardy(spec, std::move(e)); break;
      case CheckKind::embedding_ratio: e = check_embedding(spec, std::move(e)); break;
      case CheckKind::counterexample: e = check_counterexample(spec, std::move(e)); break;
      case CheckKind::asymptotic_leading: e = check_asymptotic(spec, std::move(e)); break;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& ex) {
    e = blank;
    e.verdict = "fail";
    e.measured = {{"error", ex.what()}};
    e.worst_case = json::object();
    e.grid = json::object();
  }
  e.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return e;
}

std::vector<ReportEntry> run_checks(const std::vector<CheckSpec>& specs) {
  for (const auto& s : specs) validate(s);
  std::vector<ReportEntry> out(specs.size());
  parallel_for(specs.size(), [&](std::size_t i) { out[i] = run_check(specs[i]); });
  return out;
}

Profile compute_profile(ProfileQuantity quantity, const CheckSpec& s) {
  validate(s);
  const WarpSpec& w = s.manifold.warp();
  Profile out;
  out.r = default_r_grid(w, s.grid_points).r;
  std::ostringstream name;
  name << to_string(quantity) << "[manifold=" << s.manifold.describe() << ";k=" << s.k << ";p=" << s.p;
  switch (quantity) {
    case ProfileQuantity::norm_profile: {
      if (s.families.empty()) throw ConfigError("norm_profile needs a family");
      const auto& f = s.families.front();
      const int j = rank_of(s);
      if (j > s.k) throw ConfigError("rank j must not exceed k");
      name << ";j=" << j << ";family=" << f.describe();
      for (double t : out.r) out.value.push_back(rank_norms(f, s.manifold, t, s.k)[static_cast<std::size_t>(j)]);
      break;
    }
    case ProfileQuantity::decay_ratio: {
      if (s.kind != CheckKind::decay_lemma) throw ConfigError("decay_ratio needs a decay_lemma check");
      const double pref = decay_prefactor(s, c_phi(w).value);
      std::optional<DecayData> data;
      const auto* f = first_admissible(s.families, [&](const RadialFunction& g) {
        data = decay_data(s, g, pref);
        return data->admissible;
      });
      name << ";family=" << f->describe();
      for (double t : out.r) {
        const auto v = decay_pointwise(s, *f, *data, t);
        out.value.push_back(v ? *v : std::nan(""));
      }
      break;
    }
    case ProfileQuantity::lemma_ratio: {
      if (s.kind != CheckKind::radial_lemma_power && s.kind != CheckKind::radial_lemma_log) {
        throw ConfigError("lemma_ratio needs a radial lemma check");
      }
      double nm = 0.0;
      const auto* f = first_admissible(s.families, [&](const RadialFunction& g) {
        const auto r = sobolev_norm_1d(g, s.k, s.p, s.manifold.dim(), w, s.tol);
        nm = r.value;
        return r.finite && nm > 0.0;
      });
      name << ";variant=" << (s.kind == CheckKind::radial_lemma_power ? "power" : "log") << ";family=" << f->describe();
      for (double t : out.r) out.value.push_back(lemma_pointwise(s, *f, nm, t));
      break;
    }
    case ProfileQuantity::integrand: {
      const double alpha = counterexample_alpha(s);
      name << ";alpha=" << alpha;
      for (double t : out.r) out.value.push_back(std::exp(alpha * log_phi(w, t)));
      break;
    }
  }
  name << "]";
  out.name = sanitize(name.str());
  return out;
}

}  // namespace radsob
