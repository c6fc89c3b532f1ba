#include "radsob/cli.hpp"

#include <algorithm>
#include <cctype>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "radsob/errors.hpp"

namespace radsob {
namespace {

using json = nlohmann::ordered_json;

constexpr const char* kVersion = "1.0.0";

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

/// Splits on top-level commas; bracketed lists stay whole.
std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  for (const auto& x : out) {
    if (x.empty()) throw ConfigError("empty entry in list '" + s + "'");
  }
  return out;
}

double parse_real(const std::string& key, const std::string& s) {
  const std::string t = trim(s);
  if (t == "inf" || t == "+inf") return kInf;
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used == t.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected a real number, got '" + s + "'");
}

int parse_int(const std::string& key, const std::string& s) {
  const std::string t = trim(s);
  try {
    std::size_t used = 0;
    const int v = std::stoi(t, &used);
    if (used == t.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected an integer, got '" + s + "'");
}

bool parse_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + s + "'");
}

std::vector<double> parse_reals(const std::string& key, std::string s) {
  s = trim(s);
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') throw ConfigError(key + ": unterminated list");
    s = s.substr(1, s.size() - 2);
  }
  std::vector<double> out;
  if (trim(s).empty()) return out;
  for (const auto& x : split_list(s)) out.push_back(parse_real(key, x));
  return out;
}

class KeyValues {
 public:
  explicit KeyValues(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::string body;
      char quote = 0;
      for (char c : line) {
        if (quote) {
          if (c == quote) quote = 0;
        } else if (c == '"' || c == '\'') {
          quote = c;
        } else if (c == '#') {
          break;
        }
        body += c;
      }
      body = trim(body);
      if (body.empty()) continue;
      const auto eq = body.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
      }
      const std::string key = trim(body.substr(0, eq));
      const std::string value = unquote(trim(body.substr(eq + 1)));
      if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
      if (!values_.emplace(key, value).second) throw ConfigError("duplicate key '" + key + "'");
    }
  }

  std::optional<std::string> get(const std::string& key) {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    used_.insert(key);
    return it->second;
  }

  /// Sorted indices i of keys "<prefix>.<i>.<field>".
  std::vector<int> indices(const std::string& prefix) const {
    std::set<int> out;
    const std::string head = prefix + ".";
    for (const auto& [key, value] : values_) {
      if (key.rfind(head, 0) != 0) continue;
      const auto dot = key.find('.', head.size());
      if (dot == std::string::npos) continue;
      out.insert(parse_int(key, key.substr(head.size(), dot - head.size())));
    }
    return {out.begin(), out.end()};
  }

  void reject_unused() const {
    for (const auto& [key, value] : values_) {
      if (!used_.count(key)) throw ConfigError("unknown config key '" + key + "'");
    }
  }

 private:
  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
};

WarpSpec make_warp(const std::string& tag, std::optional<double> radius) {
  try {
    if (!tag.empty() && tag.front() == '[') {
      if (!radius) throw ConfigError("custom_odd_series warp needs an explicit R");
      return WarpSpec::custom_odd_series(parse_reals("warp", tag), *radius);
    }
    if (tag == "euclidean") return WarpSpec::euclidean(radius.value_or(kInf));
    if (tag == "hyperbolic") return WarpSpec::hyperbolic(radius.value_or(kInf));
    if (tag == "spherical") return radius ? WarpSpec::spherical(*radius) : WarpSpec::spherical();
    if (tag == "tanh_cap") return WarpSpec::tanh_cap(radius.value_or(kInf));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid warp: ") + e.what());
  }
  throw ConfigError("unknown warp tag '" + tag + "'");
}

ManifoldSpec make_manifold(WarpSpec w, int n) {
  try {
    return ManifoldSpec(std::move(w), n);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid manifold: ") + e.what());
  }
}

std::vector<RadialFunction> resolve_families(const std::string& key, const std::string& value,
                                             const std::map<int, RadialFunction>& defined, const WarpSpec& w,
                                             CheckKind kind) {
  if (trim(value) == "default") {
    if (kind == CheckKind::counterexample) return {RadialFunction::linear()};
    return default_families(w);
  }
  std::vector<RadialFunction> out;
  for (const auto& item : split_list(value)) {
    const int idx = parse_int(key, item);
    const auto it = defined.find(idx);
    if (it == defined.end()) throw ConfigError(key + ": family " + item + " is not defined");
    out.push_back(it->second);
  }
  return out;
}

std::string timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool compatible(ProfileQuantity q, CheckKind k) {
  switch (q) {
    case ProfileQuantity::norm_profile:
      return k != CheckKind::counterexample && k != CheckKind::asymptotic_leading;
    case ProfileQuantity::decay_ratio: return k == CheckKind::decay_lemma;
    case ProfileQuantity::lemma_ratio: return k == CheckKind::radial_lemma_power || k == CheckKind::radial_lemma_log;
    case ProfileQuantity::integrand: return k == CheckKind::counterexample;
  }
  return false;
}

std::string csv_path(const std::string& report, std::size_t index, ProfileQuantity q) {
  std::string stem = report;
  if (stem.size() > 5 && stem.substr(stem.size() - 5) == ".json") stem.resize(stem.size() - 5);
  return stem + ".check" + std::to_string(index + 1) + "." + to_string(q) + ".csv";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::string csv_text(const Profile& p) {
  std::ostringstream os;
  write_csv(os, p);
  return os.str();
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  KeyValues kv(text);
  RunConfig cfg;

  const auto g_warp = kv.get("manifold.warp");
  std::optional<double> g_radius;
  if (const auto r = kv.get("manifold.R")) g_radius = parse_real("manifold.R", *r);
  std::optional<int> g_dim;
  if (const auto n = kv.get("manifold.N")) g_dim = parse_int("manifold.N", *n);
  const std::string g_families = kv.get("families").value_or("default");

  std::map<int, RadialFunction> defined;
  for (int i : kv.indices("family")) {
    const std::string base = "family." + std::to_string(i) + ".";
    const auto tag = kv.get(base + "tag");
    if (!tag) throw ConfigError(base + "tag is required");
    const auto params = parse_reals(base + "params", kv.get(base + "params").value_or(""));
    const double amp = parse_real(base + "amplitude", kv.get(base + "amplitude").value_or("1"));
    try {
      defined.emplace(i, RadialFunction::from_params(family_from_string(*tag), params, amp));
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(base + ": " + e.what());
    }
  }

  const auto checks = kv.indices("check");
  if (checks.empty()) throw ConfigError("config defines no checks");
  for (int i : checks) {
    const std::string base = "check." + std::to_string(i) + ".";
    const auto kind_tag = kv.get(base + "kind");
    if (!kind_tag) throw ConfigError(base + "kind is required");
    CheckSpec proto;
    proto.kind = check_kind_from_string(*kind_tag);
    proto.label = kv.get(base + "label").value_or("check." + std::to_string(i));
    if (const auto v = kv.get(base + "k")) proto.k = parse_int(base + "k", *v);
    if (const auto v = kv.get(base + "q")) proto.q = parse_real(base + "q", *v);
    if (const auto v = kv.get(base + "theta")) proto.theta = parse_real(base + "theta", *v);
    if (const auto v = kv.get(base + "j")) proto.j = parse_int(base + "j", *v);
    if (const auto v = kv.get(base + "space")) proto.space = embedding_space_from_string(*v);
    if (const auto v = kv.get(base + "diagnostic")) proto.diagnostic = parse_bool(base + "diagnostic", *v);
    if (const auto v = kv.get(base + "grid")) proto.grid_points = parse_int(base + "grid", *v);
    if (const auto v = kv.get(base + "tol")) proto.tol = parse_real(base + "tol", *v);
    if (proto.kind == CheckKind::hardy && proto.j < 0) throw ConfigError(base + "j is required for hardy");

    const auto c_warp = kv.get(base + "warp");
    std::optional<double> radius;
    if (const auto r = kv.get(base + "R")) {
      radius = parse_real(base + "R", *r);
    } else if (!c_warp) {
      radius = g_radius;
    }
    const auto warp_text = c_warp ? c_warp : g_warp;
    if (!warp_text) throw ConfigError(base + "no warp given and manifold.warp is unset");
    const auto warp_tags = split_list(*warp_text);

    std::vector<int> dims;
    if (const auto n = kv.get(base + "N")) {
      for (const auto& x : split_list(*n)) dims.push_back(parse_int(base + "N", x));
    } else if (g_dim) {
      dims.push_back(*g_dim);
    } else {
      throw ConfigError(base + "no N given and manifold.N is unset");
    }
    std::vector<double> ps{2.0};
    if (const auto p = kv.get(base + "p")) ps = parse_reals(base + "p", *p);
    if (ps.empty()) throw ConfigError(base + "p list is empty");
    const std::string fam_text = kv.get(base + "families").value_or(g_families);

    const bool expanded = warp_tags.size() * dims.size() * ps.size() > 1;
    for (const auto& tag : warp_tags) {
      const WarpSpec w = make_warp(tag, radius);
      for (int n : dims) {
        for (double p : ps) {
          CheckSpec s = proto;
          s.manifold = make_manifold(w, n);
          s.p = p;
          if (proto.kind != CheckKind::asymptotic_leading) {
            s.families = resolve_families(base + "families", fam_text, defined, w, proto.kind);
          }
          if (expanded) {
            std::ostringstream os;
            os << proto.label << "[" << s.manifold.describe();
            if (ps.size() > 1) os << ", p=" << p;
            os << "]";
            s.label = os.str();
          }
          validate(s);
          cfg.checks.push_back(std::move(s));
        }
      }
    }
  }

  if (const auto r = kv.get("output.report")) cfg.report_path = *r;
  if (const auto c = kv.get("output.csv")) cfg.csv = parse_bool("output.csv", *c);
  kv.reject_unused();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_overrides(RunConfig& cfg, const Overrides& o) {
  for (auto& s : cfg.checks) {
    if (o.tol) s.tol = *o.tol;
    if (o.grid) s.grid_points = *o.grid;
    validate(s);
  }
}

std::optional<ProfileQuantity> natural_profile(CheckKind kind) {
  switch (kind) {
    case CheckKind::identity:
    case CheckKind::gradient_inequality: return ProfileQuantity::norm_profile;
    case CheckKind::radial_lemma_power:
    case CheckKind::radial_lemma_log: return ProfileQuantity::lemma_ratio;
    case CheckKind::decay_lemma: return ProfileQuantity::decay_ratio;
    case CheckKind::counterexample: return ProfileQuantity::integrand;
    default: return std::nullopt;
  }
}

nlohmann::ordered_json make_report(const std::vector<ReportEntry>& entries, const std::string& config_path) {
  int failed = 0, diagnostic = 0;
  for (const auto& e : entries) {
    if (e.failed()) ++failed;
    if (e.verdict == "diagnostic") ++diagnostic;
  }
  json meta;
  meta["tool"] = "radsob";
  meta["version"] = kVersion;
  meta["config"] = config_path;
  meta["timestamp"] = timestamp();
  meta["checks_total"] = entries.size();
  meta["checks_failed"] = failed;
  meta["checks_diagnostic"] = diagnostic;
  meta["all_passed"] = failed == 0;
  json checks = json::array();
  for (const auto& e : entries) checks.push_back(e.to_json());
  json out;
  out["run_meta"] = meta;
  out["checks"] = checks;
  return out;
}

void write_csv(std::ostream& os, const Profile& profile) {
  os << "r," << profile.name << "\n";
  char buf[64];
  for (std::size_t i = 0; i < profile.r.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", profile.r[i]);
    os << buf << ",";
    std::snprintf(buf, sizeof buf, "%.17g", profile.value[i]);
    os << buf << "\n";
  }
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Numerical verification of Sobolev-type inequalities for radial functions"};
  app.require_subcommand(1);

  std::string config;
  std::string quantity;
  std::string out;
  Overrides over;
  double tol = 0.0;
  int grid = 0;
  int check_index = 0;

  auto* run = app.add_subcommand("run", "Run every check of a config and write the JSON report");
  run->add_option("config", config, "Config file")->required();
  run->add_option("--tol", tol, "Quadrature tolerance for every check");
  run->add_option("--grid", grid, "Number of r-grid points for every check");
  run->add_option("--out", out, "Report path (overrides output.report)");

  auto* dump = app.add_subcommand("dump", "Write one pointwise curve as CSV");
  dump->add_option("quantity", quantity, "norm_profile | decay_ratio | lemma_ratio | integrand")->required();
  dump->add_option("config", config, "Config file")->required();
  dump->add_option("--check", check_index, "1-based index of the check to use (after expansion)");
  dump->add_option("--tol", tol, "Quadrature tolerance");
  dump->add_option("--grid", grid, "Number of r-grid points");
  dump->add_option("--out", out, "CSV path (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg = load_config(config);
    if (tol != 0.0) over.tol = tol;
    if (grid != 0) over.grid = grid;
    apply_overrides(cfg, over);

    if (*run) {
      const auto entries = run_checks(cfg.checks);
      const std::string path = out.empty() ? cfg.report_path : out;
      write_text(path, make_report(entries, config).dump(2) + "\n");
      if (cfg.csv) {
        for (std::size_t i = 0; i < cfg.checks.size(); ++i) {
          const auto q = natural_profile(cfg.checks[i].kind);
          if (q) write_text(csv_path(path, i, *q), csv_text(compute_profile(*q, cfg.checks[i])));
        }
      }
      int failed = 0;
      for (const auto& e : entries) {
        std::cout << e.verdict << "  " << e.kind << "  " << e.label << "\n";
        if (e.failed()) ++failed;
      }
      std::cout << entries.size() - static_cast<std::size_t>(failed) << "/" << entries.size()
                << " checks without failure; report: " << path << "\n";
      return failed == 0 ? 0 : 1;
    }

    const ProfileQuantity q = profile_quantity_from_string(quantity);
    const CheckSpec* chosen = nullptr;
    if (check_index != 0) {
      if (check_index < 1 || static_cast<std::size_t>(check_index) > cfg.checks.size()) {
        throw ConfigError("--check index out of range");
      }
      chosen = &cfg.checks[static_cast<std::size_t>(check_index - 1)];
      if (!compatible(q, chosen->kind)) throw ConfigError("check kind does not provide " + quantity);
    } else {
      for (const auto& s : cfg.checks) {
        if (compatible(q, s.kind)) {
          chosen = &s;
          break;
        }
      }
      if (!chosen) throw ConfigError("no check in the config provides " + quantity);
    }
    const std::string text = csv_text(compute_profile(q, *chosen));
    if (out.empty()) {
      std::cout << text;
    } else {
      write_text(out, text);
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace radsob
