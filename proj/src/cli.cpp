#include "stein/cli.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <variant>
#include <vector>

#include <json.hpp>

#include "stein/beta_stein.hpp"
#include "stein/oracle_exact.hpp"
#include "stein/polya.hpp"
#include "stein/parallel.hpp"
#include "stein/test_functions.hpp"

namespace stein::cli {
namespace {

using Cell = std::variant<long long, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> cells) { rows.push_back(std::move(cells)); }
};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    q += ch;
    if (ch == '"') q += '"';
  }
  q += '"';
  return q;
}

void write_csv(const Table& t, std::ostream& os) {
  for (size_t i = 0; i < t.columns.size(); ++i)
    os << (i ? "," : "") << csv_quote(t.columns[i]);
  os << "\n";
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) os << ",";
      if (const auto* n = std::get_if<long long>(&row[i]))
        os << *n;
      else if (const auto* d = std::get_if<double>(&row[i]))
        os << fmt17(*d);
      else
        os << csv_quote(std::get<std::string>(row[i]));
    }
    os << "\n";
  }
}

void write_json(const Table& t, const RunConfig& cfg, std::ostream& os) {
  nlohmann::ordered_json doc;
  doc["meta"]["command"] = cfg.command;
  for (const auto& [k, v] : cfg.params) doc["meta"][k] = v;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj;
    for (size_t i = 0; i < row.size(); ++i) {
      if (const auto* n = std::get_if<long long>(&row[i]))
        obj[t.columns[i]] = *n;
      else if (const auto* d = std::get_if<double>(&row[i]))
        obj[t.columns[i]] = *d;
      else
        obj[t.columns[i]] = std::get<std::string>(row[i]);
    }
    doc["rows"].push_back(std::move(obj));
  }
  os << doc.dump(2) << "\n";
}

class Params {
 public:
  explicit Params(const RunConfig& cfg) : cfg_(cfg) {}

  bool has(const std::string& key) const { return cfg_.params.count(key) != 0; }

  std::string str(const std::string& key) const {
    const auto it = cfg_.params.find(key);
    if (it == cfg_.params.end()) throw usage_error("missing parameter '" + key + "'");
    return it->second;
  }

  std::string str_or(const std::string& key, const std::string& fallback) const {
    const auto it = cfg_.params.find(key);
    return it == cfg_.params.end() ? fallback : it->second;
  }

  double num(const std::string& key) const {
    try {
      size_t pos = 0;
      const std::string s = str(key);
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw usage_error("");
      return v;
    } catch (const usage_error&) {
      throw usage_error("parameter '" + key + "' is not a number");
    } catch (const std::exception&) {
      throw usage_error("parameter '" + key + "' is not a number");
    }
  }

  long long integer(const std::string& key) const {
    try {
      size_t pos = 0;
      const std::string s = str(key);
      const long long v = std::stoll(s, &pos);
      if (pos != s.size()) throw usage_error("");
      return v;
    } catch (const usage_error&) {
      throw usage_error("parameter '" + key + "' is not an integer");
    } catch (const std::exception&) {
      throw usage_error("parameter '" + key + "' is not an integer");
    }
  }

  long long integer_or(const std::string& key, long long fallback) const {
    return has(key) ? integer(key) : fallback;
  }

 private:
  const RunConfig& cfg_;
};

SupSearchSpec search_spec(const Params& p) {
  SupSearchSpec s;
  s.coarse_points = static_cast<int>(p.integer_or("grid", s.coarse_points));
  return s;
}

// Residual library: six smooth g with hand-coded derivatives.
struct SmoothG {
  const char* name;
  double (*g)(double);
  double (*gd)(double);
};

const SmoothG kSmoothG[6] = {
    {"g_const", [](double) { return 1.0; }, [](double) { return 0.0; }},
    {"g_x", [](double x) { return x; }, [](double) { return 1.0; }},
    {"g_x2", [](double x) { return x * x; }, [](double x) { return 2.0 * x; }},
    {"g_x3", [](double x) { return x * x * x; }, [](double x) { return 3.0 * x * x; }},
    {"g_sin", [](double x) { return std::sin(x); }, [](double x) { return std::cos(x); }},
    {"g_cos2", [](double x) { return std::cos(2.0 * x); },
     [](double x) { return -2.0 * std::sin(2.0 * x); }},
};

TargetSpec target_from_params(const Params& p, std::string* label) {
  if (p.has("alpha") || p.has("beta")) {
    const beta::BetaSym sym{p.num("alpha"), p.num("beta")};
    if (label) *label = "sym(" + fmt17(sym.alpha) + "," + fmt17(sym.beta) + ")";
    return beta::make_target_sym(sym);
  }
  if (p.has("a") || p.has("b")) {
    const beta::Beta01 unit{p.num("a"), p.num("b")};
    if (label) *label = "unit(" + fmt17(unit.a) + "," + fmt17(unit.b) + ")";
    return beta::make_target_01(unit);
  }
  throw usage_error("expected alpha=..,beta=.. or a=..,b=..");
}

int cmd_stein_check(const Params& p, Table& t) {
  TargetSpec spec = target_from_params(p, nullptr);
  const double tilt = p.has("tilt") ? p.num("tilt") : 0.0;
  if (tilt != 0.0) {
    // Tilted density keeps the original coefficients, so the residuals
    // must detect the mismatch.
    const RealFn base = spec.p;
    const Profile clean(spec, 64, false);
    const double norm = 1.0 + tilt * clean.mean();
    spec.p = [base, tilt, norm](double x) { return base(x) * (1.0 + tilt * x) / norm; };
    spec.mean = std::nullopt;
  }

  t.columns = {"check", "value", "threshold", "pass"};
  int failures = 0;
  auto report = [&](const std::string& name, double value, double threshold) {
    const bool ok = value <= threshold;
    if (!ok) ++failures;
    t.add_row({name, value, threshold, std::string(ok ? "1" : "0")});
  };

  const double mass = integrate(spec.p, spec.a, spec.b, spec.quad);
  report("density_mass_dev", std::abs(mass - 1.0), 1e-9);
  const double gmean = integrate(
      [&](double x) { return spec.gamma(x) * spec.p(x); }, spec.a, spec.b, spec.quad);
  report("gamma_mean_dev", std::abs(gmean), 1e-9);

  int sign_changes = 0, prev_sign = 0;
  bool decreasing = true, positive = true;
  double prev = 0.0;
  for (int i = 1; i <= 512; ++i) {
    const double x = spec.a + (spec.b - spec.a) * i / 513.0;
    if (!(spec.p(x) > 0.0)) positive = false;
    const double g = spec.gamma(x);
    if (i > 1 && !(g < prev)) decreasing = false;
    prev = g;
    const int s = g > 0 ? 1 : (g < 0 ? -1 : 0);
    if (s != 0) {
      if (prev_sign != 0 && s != prev_sign) ++sign_changes;
      prev_sign = s;
    }
  }
  report("density_not_positive", positive ? 0.0 : 1.0, 0.0);
  report("gamma_not_decreasing", decreasing ? 0.0 : 1.0, 0.0);
  report("gamma_sign_change_dev", std::abs(sign_changes - 1.0), 0.0);

  const Profile pr(spec, 512, false);
  for (const SmoothG& g : kSmoothG)
    report(std::string("residual_") + g.name, stein_residual(pr, g.g, g.gd), 1e-8);
  return failures == 0 ? 0 : 1;
}

int cmd_beta_constants(const Params& p, Table& t) {
  const SupSearchSpec spec = search_spec(p);
  if (p.has("alpha") || p.has("beta")) {
    const beta::BetaSym sym{p.num("alpha"), p.num("beta")};
    beta::SteinConstants c = beta::estimate_K1(sym, spec);
    c.K2 = beta::estimate_K2(sym, spec);
    t.columns = {"alpha", "beta", "K1", "K2", "argmax_S", "S_at_minus1",
                 "S_at_plus1", "Sl_at_minus1", "lipschitz_sup_coeff", "grid"};
    t.add_row({sym.alpha, sym.beta, c.K1, c.K2, c.argmax_S,
               c.boundary_limits.S_at_minus1, c.boundary_limits.S_at_plus1,
               c.boundary_limits.Sl_at_minus1, c.lipschitz_sup_coeff,
               static_cast<long long>(spec.coarse_points)});
    return 0;
  }
  const beta::Beta01 unit{p.num("a"), p.num("b")};
  const beta::SteinConstants c = beta::constants_01(unit, spec);
  t.columns = {"a", "b", "K1", "K2", "C1", "C2", "C1_direct", "argmax_S",
               "S_at_minus1", "S_at_plus1", "Sl_at_minus1",
               "lipschitz_sup_coeff", "lipschitz_sup_coeff_sharp", "grid"};
  t.add_row({unit.a, unit.b, c.K1, c.K2, c.C1, c.C2, c.C1_direct, c.argmax_S,
             c.boundary_limits.S_at_minus1, c.boundary_limits.S_at_plus1,
             c.boundary_limits.Sl_at_minus1, c.lipschitz_sup_coeff,
             c.lipschitz_sup_coeff_sharp, static_cast<long long>(spec.coarse_points)});
  return 0;
}

int cmd_solve(const Params& p, Table& t) {
  TargetSpec spec = target_from_params(p, nullptr);
  const Profile pr(std::move(spec), 512, true);
  const auto fn = lookup_test_fn(p.str("test-fn"), pr.a(), pr.b());
  const long long grid = p.integer_or("grid", 17);
  if (grid < 1) throw usage_error("grid must be >= 1");
  t.columns = {"x", "g", "g_deriv"};
  for (long long i = 1; i <= grid; ++i) {
    const double x = pr.a() + (pr.b() - pr.a()) * i / (grid + 1.0);
    t.add_row({x, solve_stein(pr, fn.tf, x), solution_derivative(pr, fn.tf, x)});
  }
  return 0;
}

polya::UrnConfig urn_from_params(const Params& p) {
  polya::UrnConfig u;
  u.r = p.integer("r");
  u.w = p.integer("w");
  u.c = p.integer("c");
  u.n = p.integer_or("n", 1);
  return u;
}

int cmd_polya_pmf(const Params& p, Table& t) {
  polya::UrnConfig u = urn_from_params(p);
  u.n = p.integer("n");
  const polya::PolyaPmf pm = polya::pmf(u);
  t.columns = {"k", "prob", "prob_double", "log_prob"};
  for (long long k = 0; k <= u.n; ++k) {
    std::ostringstream frac;
    frac << pm.probs[k];
    t.add_row({k, frac.str(), to_double(pm.probs[k]), pm.log_probs[k]});
  }
  return 0;
}

int cmd_polya_verify(const Params& p, Table& t) {
  polya::UrnConfig u = urn_from_params(p);
  u.n = p.integer("n");
  t.columns = {"check", "cases", "failures"};
  long long total_failures = 0;
  auto report = [&](const std::string& name, long long cases, long long failures) {
    total_failures += failures;
    t.add_row({name, cases, failures});
  };

  const oracle::Enumeration e = oracle::enumerate_urn(u);
  const std::vector<Rational> opmf = oracle::oracle_pmf(e);
  const polya::PolyaPmf pm = polya::pmf(u);
  long long bad = 0;
  for (long long k = 0; k <= u.n; ++k)
    if (pm.probs[k] != opmf[k]) ++bad;
  report("pmf_vs_oracle", u.n + 1, bad);

  const polya::PairMomentTable closed = polya::pair_moments(u);
  const polya::PairMomentTable brute = oracle::oracle_pair_moments(e, u);
  bad = 0;
  for (long long k = 0; k <= u.n; ++k)
    if (closed.m1[k] != brute.m1[k] || closed.m2[k] != brute.m2[k]) ++bad;
  report("moments_vs_oracle", u.n + 1, bad);

  // Exchangeability: the sequence probability depends only on the number
  // of red draws.
  bad = 0;
  std::vector<Rational> layer_rep(u.n + 1);
  std::vector<bool> seen(u.n + 1, false);
  for (const auto& entry : e.entries) {
    const int k = std::popcount(entry.bits);
    if (!seen[k]) {
      layer_rep[k] = entry.prob;
      seen[k] = true;
    } else if (entry.prob != layer_rep[k]) {
      ++bad;
    }
  }
  report("exchangeability", static_cast<long long>(e.entries.size()), bad);

  // Pair symmetry: joint law of (V,V') equals that of (V',V).
  std::map<std::pair<Rational, Rational>, Rational> joint;
  for (const auto& entry : e.entries) {
    const int k = std::popcount(entry.bits);
    const bool xn = entry.bits >> (u.n - 1) & 1u;
    const long long k_head = k - (xn ? 1 : 0);
    const Rational pr_red = entry.resample_prob_red;
    joint[{Rational(k, u.n), Rational(k_head + 1, u.n)}] += entry.prob * pr_red;
    joint[{Rational(k, u.n), Rational(k_head, u.n)}] += entry.prob * (1 - pr_red);
  }
  bad = 0;
  for (const auto& [key, mass] : joint) {
    const auto it = joint.find({key.second, key.first});
    if (it == joint.end() || it->second != mass) ++bad;
  }
  report("pair_symmetry", static_cast<long long>(joint.size()), bad);

  Rational agg = 0;
  for (long long k = 0; k <= u.n; ++k) agg += pm.probs[k] * closed.m1[k];
  report("regression_aggregate_zero", 1, agg == 0 ? 0 : 1);

  return total_failures == 0 ? 0 : 1;
}

std::vector<long long> sweep_from_params(const Params& p) {
  std::vector<long long> ns;
  if (p.has("nmin") || p.has("nmax")) {
    const long long nmin = p.integer("nmin");
    const long long nmax = p.integer("nmax");
    if (nmin < 1 || nmax < nmin) throw usage_error("need 1 <= nmin <= nmax");
    for (long long n = nmin; n <= nmax; n *= 2) ns.push_back(n);
  } else {
    ns.push_back(p.integer("n"));
  }
  return ns;
}

int cmd_polya_rate(const Params& p, Table& t) {
  const polya::UrnConfig base = urn_from_params(p);
  const std::vector<long long> ns = sweep_from_params(p);
  const auto fn = lookup_test_fn(p.str_or("test-fn", "x2"), 0.0, 1.0);
  const beta::Beta01 unit{to_double(base.a()), to_double(base.b())};
  const beta::SteinConstants consts = beta::constants_01(unit, search_spec(p));
  const std::vector<polya::RateRow> rows = polya::rate_table(base, ns, fn, consts);
  t.columns = {"n", "exact_error", "bound", "lambda", "eta_discrepancy",
               "third_term", "slope_running"};
  for (const auto& r : rows)
    t.add_row({r.n, r.exact_error, r.bound, r.lambda, r.eta_discrepancy,
               r.third_term, r.slope_running});
  return 0;
}

int cmd_distances(const Params& p, Table& t) {
  polya::UrnConfig base = urn_from_params(p);
  const std::vector<long long> ns = sweep_from_params(p);
  t.columns = {"n", "kolmogorov", "wasserstein"};
  std::vector<polya::DistanceDiagnostics> rows(ns.size());
  parallel_for(ns.size(), [&](std::size_t i) {
    polya::UrnConfig u = base;
    u.n = ns[i];
    rows[i] = polya::distance_diagnostics(u);
  });
  for (std::size_t i = 0; i < ns.size(); ++i)
    t.add_row({ns[i], rows[i].kolmogorov, rows[i].wasserstein});
  return 0;
}

}  // namespace

RunConfig parse_args(int argc, const char* const* argv) {
  if (argc < 2) throw usage_error("missing command");
  RunConfig cfg;
  cfg.command = argv[1];
  for (int i = 2; i < argc; ++i) {
    const std::string arg = argv[i];
    const size_t eq = arg.find('=');
    if (eq == std::string::npos || eq == 0)
      throw usage_error("expected key=value, got '" + arg + "'");
    cfg.params[arg.substr(0, eq)] = arg.substr(eq + 1);
  }
  if (!cfg.params.count("seed")) cfg.params["seed"] = "42";
  if (!cfg.params.count("format")) cfg.params["format"] = "csv";
  const std::string fmt = cfg.params["format"];
  if (fmt != "csv" && fmt != "json") throw usage_error("format must be csv or json");
  return cfg;
}

void print_synopsis(std::ostream& os) {
  os << "usage: steinpairs <command> [key=value ...]\n"
        "\n"
        "commands:\n"
        "  stein-check     alpha= beta= | a= b=   [tilt=]\n"
        "  beta-constants  alpha= beta= | a= b=   [grid=]\n"
        "  solve           alpha= beta= | a= b=   test-fn= [grid=]\n"
        "  polya-pmf       r= w= c= n=\n"
        "  polya-verify    r= w= c= n=            (n <= 20)\n"
        "  polya-rate      r= w= c= nmin= nmax=   [test-fn=x2] [grid=]\n"
        "  distances       r= w= c= n= | nmin= nmax=\n"
        "\n"
        "common keys: format=csv|json out=<file> seed=<int> (default 42)\n"
        "test functions: x, x2, sin3x, sinkx:<k>, indicator:<z>, lipschitz-saw\n"
        "STEIN_THREADS caps sweep workers.\n";
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Params p(cfg);
  Table t;
  int rc = 0;
  try {
    if (cfg.command == "stein-check")
      rc = cmd_stein_check(p, t);
    else if (cfg.command == "beta-constants")
      rc = cmd_beta_constants(p, t);
    else if (cfg.command == "solve")
      rc = cmd_solve(p, t);
    else if (cfg.command == "polya-pmf")
      rc = cmd_polya_pmf(p, t);
    else if (cfg.command == "polya-verify")
      rc = cmd_polya_verify(p, t);
    else if (cfg.command == "polya-rate")
      rc = cmd_polya_rate(p, t);
    else if (cfg.command == "distances")
      rc = cmd_distances(p, t);
    else
      throw usage_error("unknown command '" + cfg.command + "'");
  } catch (const usage_error&) {
    throw;
  } catch (const std::exception& ex) {
    err << "steinpairs " << cfg.command << ": " << ex.what() << "\n";
    return 1;
  }

  std::ostringstream buf;
  if (p.str_or("format", "csv") == "json")
    write_json(t, cfg, buf);
  else
    write_csv(t, buf);

  if (p.has("out")) {
    std::ofstream file(p.str("out"), std::ios::binary);
    if (!file) {
      err << "steinpairs: cannot open output file '" << p.str("out") << "'\n";
      return 1;
    }
    file << buf.str();
  } else {
    out << buf.str();
  }
  return rc;
}

int main_impl(int argc, const char* const* argv) {
  try {
    const RunConfig cfg = parse_args(argc, argv);
    return run(cfg, std::cout, std::cerr);
  } catch (const usage_error& ex) {
    std::cerr << "steinpairs: " << ex.what() << "\n\n";
    print_synopsis(std::cerr);
    return 2;
  }
}

}  // namespace stein::cli
