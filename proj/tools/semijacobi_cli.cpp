// semijacobi: tables, residual suites, series comparisons, Riccati runs and
// the forward beta_n iteration from the command line.
//
// Exit codes: 0 pass, 1 fail (or numerical error), 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iterator>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "semijacobi/asymptotics.hpp"
#include "semijacobi/evolution.hpp"
#include "semijacobi/ladder.hpp"
#include "semijacobi/recur.hpp"

#ifndef SEMIJACOBI_VERSION
#define SEMIJACOBI_VERSION "unknown"
#endif

namespace sj = semijacobi;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kBitsEnv = "SEMIJACOBI_MANTISSA_BITS";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::vector<std::string> alpha{"0.5"};
  std::vector<std::string> t{"1"};
  int n_max = 10;
  int n_min = 64;
  int n = 3;
  std::optional<long> mantissa_bits;
  unsigned agreement_digits = 25;
  std::string t_start = "0.5";
  std::string t_end = "1.5";
  int points = 11;
  std::string out;
  std::string csv;
  std::string format = "json";
  std::string suite;
  std::string quantity;
  std::string tolerance;
  int samples = 33;
  int corrupt_beta = -1;
};

int out_digits(const RunConfig& cfg) { return static_cast<int>(cfg.agreement_digits) + 5; }

sj::Real parse_real(const std::string& text, const char* field) {
  try {
    sj::WorkingPrecision guard(1024);
    sj::Real x = sj::Real::parse(text);
    if (!x.is_finite()) throw std::invalid_argument("not finite");
    return x;
  } catch (const std::exception&) {
    throw UsageError(std::string(field) + ": cannot parse '" + text + "' as a number");
  }
}

void validate_alpha(const std::vector<std::string>& alphas) {
  if (alphas.empty()) throw UsageError("alpha: at least one value is required");
  for (const auto& a : alphas) {
    if (parse_real(a, "alpha") <= sj::Real(-1)) throw UsageError("alpha must exceed -1");
  }
}

void validate_fd_grid(const RunConfig& cfg) {
  if (cfg.points < 5) throw UsageError("points: finite-difference grids need at least 5 points");
  if (parse_real(cfg.t_start, "t-start").sign() <= 0) throw UsageError("t-start must be positive");
  if (parse_real(cfg.t_end, "t-end") <= parse_real(cfg.t_start, "t-start")) {
    throw UsageError("t-end must exceed t-start");
  }
}

sj::WeightParams params_of(const std::string& alpha, const std::string& t) {
  return sj::WeightParams::parse(alpha, t);
}

sj::PrecisionContext table_context(const RunConfig& cfg, int n_max) {
  sj::PrecisionContext ctx = sj::PrecisionContext::for_degree(n_max, cfg.agreement_digits);
  if (cfg.mantissa_bits) ctx.mantissa_bits = *cfg.mantissa_bits;
  return ctx;
}

sj::PrecisionContext fd_context(const RunConfig& cfg, int n) {
  sj::PrecisionContext ctx = sj::evolution_context(n, std::max(cfg.agreement_digits, 40u));
  if (cfg.mantissa_bits) ctx.mantissa_bits = *cfg.mantissa_bits;
  return ctx;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw UsageError("out: cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

json config_json(const RunConfig& cfg) {
  json c;
  c["command"] = cfg.command;
  if (!cfg.suite.empty()) c["suite"] = cfg.suite;
  if (!cfg.quantity.empty()) c["quantity"] = cfg.quantity;
  c["alpha"] = cfg.alpha;
  c["t"] = cfg.t;
  c["n_max"] = cfg.n_max;
  c["mantissa_bits"] = cfg.mantissa_bits ? json(*cfg.mantissa_bits) : json("auto");
  c["agreement_digits"] = cfg.agreement_digits;
  if (cfg.command == "verify" && (cfg.suite == "ode" || cfg.suite == "painleve")) {
    c["t_grid"] = {{"t_start", cfg.t_start}, {"t_end", cfg.t_end}, {"points", cfg.points}};
  }
  return c;
}

json meta_json() { return {{"program", "semijacobi"}, {"version", SEMIJACOBI_VERSION}}; }

// Runs f over the (alpha, t) grid concurrently; results come back in grid order.
template <typename F>
auto over_grid(const RunConfig& cfg, F&& f) {
  using R = decltype(f(std::string(), std::string()));
  std::vector<std::future<R>> jobs;
  for (const auto& a : cfg.alpha) {
    for (const auto& t : cfg.t) jobs.push_back(std::async(std::launch::async, [&f, a, t] { return f(a, t); }));
  }
  std::vector<R> results;
  results.reserve(jobs.size());
  for (auto& j : jobs) results.push_back(j.get());
  return results;
}

// ---------------------------------------------------------------- table

int cmd_table(const RunConfig& cfg) {
  validate_alpha(cfg.alpha);
  if (cfg.n_max < 0) throw UsageError("n-max must be nonnegative");
  if (cfg.format != "csv" && cfg.format != "json") throw UsageError("format must be csv or json");
  for (const auto& t : cfg.t) parse_real(t, "t");
  struct Built {
    sj::OrthoTable table;
    sj::AuxTable aux;
  };
  auto built = over_grid(cfg, [&](const std::string& a, const std::string& t) {
    sj::OrthoTable table = sj::build_ortho_table(params_of(a, t), cfg.n_max, table_context(cfg, cfg.n_max));
    sj::AuxTable aux = sj::build_aux_table(table);
    return Built{std::move(table), std::move(aux)};
  });
  const int d = out_digits(cfg);
  Output out(cfg.out);
  std::ostream& os = out.stream();
  if (cfg.format == "csv") {
    for (const auto& b : built) {
      os << "# alpha=" << b.table.params.alpha.str(d) << ",t=" << b.table.params.t.str(d)
         << ",mantissa_bits=" << b.table.bits << ",agreement_digits=" << b.table.agreement_digits << "\n";
      os << "n,h_n,beta_n,p_n,logD_n,R_n,r_n,H_n\n";
      for (int n = 0; n <= b.table.n_max; ++n) {
        os << n << ',' << b.table.h[n].str(d) << ',' << b.table.beta[n].str(d) << ',' << b.table.p[n].str(d) << ','
           << b.table.log_d[n].str(d) << ',' << b.aux.R[n].str(d) << ',' << b.aux.r[n].str(d) << ','
           << b.aux.H[n].str(d) << '\n';
      }
    }
    return 0;
  }
  json report;
  report["command"] = "table";
  report["config"] = config_json(cfg);
  report["tables"] = json::array();
  for (const auto& b : built) {
    json tj;
    tj["alpha"] = b.table.params.alpha.str(d);
    tj["t"] = b.table.params.t.str(d);
    tj["precision"] = {{"mantissa_bits_used", b.table.bits}, {"agreement_digits", b.table.agreement_digits}};
    tj["rows"] = json::array();
    for (int n = 0; n <= b.table.n_max; ++n) {
      tj["rows"].push_back({{"n", n},
                            {"h_n", b.table.h[n].str(d)},
                            {"beta_n", b.table.beta[n].str(d)},
                            {"p_n", b.table.p[n].str(d)},
                            {"logD_n", b.table.log_d[n].str(d)},
                            {"R_n", b.aux.R[n].str(d)},
                            {"r_n", b.aux.r[n].str(d)},
                            {"H_n", b.aux.H[n].str(d)}});
    }
    report["tables"].push_back(std::move(tj));
  }
  report["meta"] = meta_json();
  os << report.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------- verify

struct SuiteResult {
  std::string name;
  sj::Real max_residual;
  std::string alpha;
  std::string t;
  int n = 0;
  std::string tolerance;  // per-entry bound
  bool pass = false;
  std::optional<sj::Real> truncation_estimate;
};

struct GridOutcome {
  sj::ResidualReport report;
  std::vector<sj::FdCheckResult> fd;           // in (n, check) order
  std::vector<int> fd_n;
  mpfr_prec_t bits = 0;
};

void require_tolerance(const RunConfig& cfg, const char* fallback, sj::Real& tol) {
  tol = parse_real(cfg.tolerance.empty() ? std::string(fallback) : cfg.tolerance, "tolerance");
  if (tol.sign() <= 0) throw UsageError("tolerance must be positive");
}

GridOutcome run_identities(const RunConfig& cfg, const std::string& a, const std::string& t) {
  GridOutcome g;
  sj::OrthoTable table = sj::build_ortho_table(params_of(a, t), cfg.n_max + 1, table_context(cfg, cfg.n_max + 1));
  if (cfg.corrupt_beta >= 0) {
    sj::WorkingPrecision guard(table.bits);
    table.beta[cfg.corrupt_beta] = table.beta[cfg.corrupt_beta] + sj::pow(sj::Real(10), -6L);
  }
  sj::AuxTable aux = sj::build_aux_table(table);
  g.report = sj::identity_residuals(table, aux);
  g.bits = table.bits;
  return g;
}

GridOutcome run_difference(const RunConfig& cfg, const std::string& a, const std::string& t) {
  GridOutcome g;
  sj::OrthoTable table = sj::build_ortho_table(params_of(a, t), cfg.n_max, table_context(cfg, cfg.n_max));
  if (cfg.corrupt_beta >= 0) {
    sj::WorkingPrecision guard(table.bits);
    table.beta[cfg.corrupt_beta] = table.beta[cfg.corrupt_beta] + sj::pow(sj::Real(10), -6L);
  }
  sj::AuxTable aux = sj::build_aux_table(table);
  const auto& alpha = table.params.alpha;
  const auto& tt = table.params.t;
  for (int n = 1; n <= cfg.n_max; ++n) {
    g.report.record("btd", sj::btd_residual(table, n), alpha, tt, n);
    g.report.record("pnd", sj::pnd_residual(table, n), alpha, tt, n);
    g.report.record("hnd", sj::hnd_residual(aux, n), alpha, tt, n);
  }
  g.bits = table.bits;
  return g;
}

GridOutcome run_fd(const RunConfig& cfg, const std::string& a, bool painleve) {
  GridOutcome g;
  const sj::WeightParams base = params_of(a, cfg.t_start);
  sj::TGrid grid{parse_real(cfg.t_start, "t-start"), parse_real(cfg.t_end, "t-end"), cfg.points - 1};
  for (int n = 1; n <= cfg.n_max; ++n) {
    const sj::PrecisionContext ctx = fd_context(cfg, n);
    g.bits = std::max<mpfr_prec_t>(g.bits, ctx.mantissa_bits);
    std::vector<std::vector<sj::FdCheckResult>> groups;
    if (painleve) {
      groups.push_back(sj::pv_residual(base, n, grid, ctx));
    } else {
      groups.push_back(sj::dln_h_check(base, n, grid, ctx));
      groups.push_back(sj::dp_check(base, n, grid, ctx));
      groups.push_back(sj::hn_check(base, n, grid, ctx));
      groups.push_back(sj::btde_residual(base, n, grid, ctx));
      groups.push_back(sj::hn_ode_residual(base, n, grid, ctx));
    }
    for (auto& group : groups) {
      for (auto& r : group) {
        g.fd.push_back(std::move(r));
        g.fd_n.push_back(n);
      }
    }
  }
  if (!painleve) {
    // second-order ODE in z for P_n at each grid t
    const std::vector<sj::Real> zs{sj::Real::parse("0.1"), sj::Real::parse("0.3"), sj::Real::parse("0.7")};
    for (const sj::Real& t : grid.points()) {
      sj::OrthoTable table = sj::build_ortho_table(base.at(t), cfg.n_max, table_context(cfg, cfg.n_max));
      sj::AuxTable aux = sj::build_aux_table(table);
      g.bits = std::max(g.bits, table.bits);
      for (int n = 1; n <= cfg.n_max; ++n) {
        g.report.record("odep", sj::pn_ode_residual(table, aux, n, zs), base.alpha, t, n);
      }
    }
  }
  return g;
}

int cmd_verify(const RunConfig& cfg) {
  validate_alpha(cfg.alpha);
  if (cfg.n_max < 1) throw UsageError("n-max must be at least 1");
  const bool fd_suite = cfg.suite == "ode" || cfg.suite == "painleve";
  if (fd_suite) {
    validate_fd_grid(cfg);
  } else {
    for (const auto& t : cfg.t) parse_real(t, "t");
  }
  if (cfg.corrupt_beta >= 0 && (fd_suite || cfg.corrupt_beta > cfg.n_max)) {
    throw UsageError("corrupt-beta: needs the identities or difference suite and an index <= n-max");
  }
  sj::Real tol;
  if (cfg.suite == "identities") require_tolerance(cfg, "1e-22", tol);
  else if (cfg.suite == "difference") require_tolerance(cfg, "1e-20", tol);
  else require_tolerance(cfg, "1e-18", tol);  // odep; FD entries carry their own bound

  std::vector<GridOutcome> outcomes;
  std::vector<std::pair<std::string, std::string>> labels;
  if (fd_suite) {
    RunConfig single = cfg;
    single.t = {cfg.t_start};
    outcomes = over_grid(single, [&](const std::string& a, const std::string&) {
      return run_fd(cfg, a, cfg.suite == "painleve");
    });
    for (const auto& a : cfg.alpha) labels.emplace_back(a, cfg.t_start);
  } else {
    outcomes = over_grid(cfg, [&](const std::string& a, const std::string& t) {
      return cfg.suite == "identities" ? run_identities(cfg, a, t) : run_difference(cfg, a, t);
    });
    for (const auto& a : cfg.alpha)
      for (const auto& t : cfg.t) labels.emplace_back(a, t);
  }

  const int d = out_digits(cfg);
  mpfr_prec_t bits = 0;
  sj::ResidualReport merged;
  for (const auto& g : outcomes) {
    merged.merge(g.report);
    bits = std::max(bits, g.bits);
  }
  sj::WorkingPrecision guard(std::max<mpfr_prec_t>(bits, 128));
  std::vector<SuiteResult> results;
  for (const auto& e : merged.entries()) {
    SuiteResult r;
    r.name = e.name;
    r.max_residual = e.max_residual;
    r.alpha = e.argmax.alpha.str(d);
    r.t = e.argmax.t.str(d);
    r.n = e.argmax.n;
    r.tolerance = tol.str(d);
    r.pass = e.max_residual <= tol;
    results.push_back(std::move(r));
  }
  // FD checks: one entry per identity, worst over (alpha, n)
  for (std::size_t gi = 0; gi < outcomes.size(); ++gi) {
    const auto& g = outcomes[gi];
    for (std::size_t k = 0; k < g.fd.size(); ++k) {
      const auto& c = g.fd[k];
      auto it = std::find_if(results.begin(), results.end(), [&](const SuiteResult& r) { return r.name == c.name; });
      if (it == results.end()) {
        SuiteResult r;
        r.name = c.name;
        r.max_residual = sj::Real(-1);
        r.pass = true;
        results.push_back(std::move(r));
        it = std::prev(results.end());
      }
      if (c.max_residual > it->max_residual) {
        it->max_residual = c.max_residual;
        it->alpha = parse_real(labels[gi].first, "alpha").str(d);
        it->t = c.argmax_t.str(d);
        it->n = g.fd_n[k];
        it->truncation_estimate = c.truncation_estimate;
      }
      it->tolerance = "richardson";
      it->pass = it->pass && c.pass;
    }
  }

  bool pass = true;
  json res = json::array();
  for (const auto& r : results) {
    pass = pass && r.pass;
    json j;
    j["name"] = r.name;
    j["max_residual"] = r.max_residual.str(d);
    j["argmax"] = {{"alpha", r.alpha}, {"t", r.t}, {"n", r.n}};
    j["tolerance"] = r.tolerance;
    if (r.truncation_estimate) j["truncation_estimate"] = r.truncation_estimate->str(d);
    j["pass"] = r.pass;
    res.push_back(std::move(j));
    if (!r.pass) {
      std::cerr << "FAIL " << r.name << ": max residual " << r.max_residual.str(6) << " at alpha=" << parse_real(r.alpha, "alpha").str(6)
                << " t=" << parse_real(r.t, "t").str(6) << " n=" << r.n << '\n';
    }
  }

  json report;
  report["suite"] = cfg.suite;
  json grid;
  grid["alpha"] = json::array();
  for (const auto& a : cfg.alpha) grid["alpha"].push_back(parse_real(a, "alpha").str(d));
  grid["t"] = json::array();
  if (fd_suite) {
    sj::TGrid tg{parse_real(cfg.t_start, "t-start"), parse_real(cfg.t_end, "t-end"), cfg.points - 1};
    for (const auto& t : tg.points()) grid["t"].push_back(t.str(d));
  } else {
    for (const auto& t : cfg.t) grid["t"].push_back(parse_real(t, "t").str(d));
  }
  grid["n"] = {cfg.suite == "identities" ? 0 : 1, cfg.n_max};
  report["grid"] = grid;
  report["tolerance"] = tol.str(d);
  report["results"] = res;
  report["pass"] = pass;
  report["config"] = config_json(cfg);
  report["precision"] = {{"mantissa_bits_used", bits},
                         {"agreement_digits", fd_suite ? std::max(cfg.agreement_digits, 40u) : cfg.agreement_digits}};
  report["meta"] = meta_json();
  Output out(cfg.out);
  out.stream() << report.dump(2) << '\n';
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------- asymptotics

int cmd_asymptotics(const RunConfig& cfg) {
  validate_alpha(cfg.alpha);
  if (cfg.alpha.size() != 1 || cfg.t.size() != 1) throw UsageError("asymptotics takes a single alpha and t");
  parse_real(cfg.t[0], "t");
  if (cfg.n_min < 1) throw UsageError("n-min must be positive");
  std::vector<int> ladder;
  for (long n = cfg.n_min; n <= cfg.n_max; n *= 2) ladder.push_back(static_cast<int>(n));
  if (ladder.size() < 4) {
    throw UsageError("n ladder too short: n-min=" + std::to_string(cfg.n_min) + " to n-max=" +
                     std::to_string(cfg.n_max) + " gives " + std::to_string(ladder.size()) +
                     " ladder points, need at least 4");
  }
  sj::SeriesQuantity q = cfg.quantity == "beta" ? sj::SeriesQuantity::beta
                         : cfg.quantity == "p"  ? sj::SeriesQuantity::p
                                                : sj::SeriesQuantity::hankel;
  const sj::WeightParams params = params_of(cfg.alpha[0], cfg.t[0]);
  sj::PrecisionContext ctx = sj::PrecisionContext::for_degree(ladder.back(), cfg.agreement_digits, true);
  if (cfg.mantissa_bits) ctx.mantissa_bits = *cfg.mantissa_bits;
  const sj::OrthoTable table = sj::build_ortho_table(params, ladder.back(), ctx, sj::TableOptions{true});
  const sj::SeriesComparison cmp = sj::compare_series(q, table, ladder);
  const int d = out_digits(cfg);
  if (!cfg.csv.empty()) {
    Output csv(cfg.csv);
    sj::write_series_csv(csv.stream(), cmp, d);
  }
  json report;
  report["suite"] = "asymptotics";
  report["quantity"] = cfg.quantity;
  report["regime"] = cmp.exponential ? "exponential regime" : "algebraic";
  report["fit_valid"] = cmp.fit_valid;
  report["slope"] = cmp.fit_valid ? json(std::round(cmp.fit.slope * 1e6) / 1e6) : json(nullptr);
  report["points_used"] = cmp.fit.used;
  report["warnings"] = cmp.fit.warnings;
  report["rows"] = json::array();
  for (std::size_t i = 0; i < cmp.n.size(); ++i) {
    report["rows"].push_back({{"n", cmp.n[i]},
                              {"oracle", cmp.oracle[i].str(d)},
                              {"series", cmp.series[i].str(d)},
                              {"abs_error", cmp.abs_error[i].str(d)},
                              {"in_regime", static_cast<bool>(cmp.in_regime[i])}});
  }
  const bool pass = cmp.fit_valid || cmp.exponential;
  report["pass"] = pass;
  report["config"] = config_json(cfg);
  report["precision"] = {{"mantissa_bits_used", table.bits}, {"agreement_digits", table.agreement_digits}};
  report["meta"] = meta_json();
  Output out(cfg.out);
  out.stream() << report.dump(2) << '\n';
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------- riccati

int cmd_riccati(const RunConfig& cfg) {
  validate_alpha(cfg.alpha);
  if (cfg.alpha.size() != 1) throw UsageError("riccati takes a single alpha");
  if (cfg.n < 1) throw UsageError("n must be at least 1");
  if (cfg.samples < 2) throw UsageError("samples must be at least 2");
  const sj::Real t0 = parse_real(cfg.t_start, "t-start");
  const sj::Real t1 = parse_real(cfg.t_end, "t-end");
  if (t0.sign() <= 0 || t1.sign() <= 0) throw UsageError("t-start and t-end must be positive");
  if (cfg.format != "csv" && cfg.format != "json") throw UsageError("format must be csv or json");
  sj::Real tol;
  require_tolerance(cfg, "1e-8", tol);
  const sj::WeightParams params = params_of(cfg.alpha[0], cfg.t_start);
  const sj::PrecisionContext ctx = table_context(cfg, cfg.n + 1);
  sj::RiccatiOptions opts;
  opts.samples = cfg.samples;
  const sj::RiccatiSolution sol = sj::riccati_integrate(params, cfg.n, t0, t1, ctx, opts);
  const sj::OrthoTable end_table = sj::build_ortho_table(params.at(t1), cfg.n + 1, ctx);
  const sj::AuxTable end_aux = sj::build_aux_table(end_table);
  sj::WorkingPrecision guard(end_table.bits);
  const sj::Real dR = sj::abs(sol.R.values.back() - end_aux.R[cfg.n]);
  const sj::Real dr = sj::abs(sol.r.values.back() - end_aux.r[cfg.n]);
  const bool pass = dR <= tol && dr <= tol;
  const int d = out_digits(cfg);
  Output out(cfg.out);
  std::ostream& os = out.stream();
  if (cfg.format == "csv") {
    os << "t,R_n,r_n\n";
    for (std::size_t i = 0; i < sol.R.t.size(); ++i) {
      os << sol.R.t[i].str(d) << ',' << sol.R.values[i].str(d) << ',' << sol.r.values[i].str(d) << '\n';
    }
  } else {
    json report;
    report["suite"] = "riccati";
    report["endpoint"] = {{"t", t1.str(d)},
                          {"R_n", sol.R.values.back().str(d)},
                          {"r_n", sol.r.values.back().str(d)},
                          {"pipeline_R_n", end_aux.R[cfg.n].str(d)},
                          {"pipeline_r_n", end_aux.r[cfg.n].str(d)},
                          {"abs_diff_R_n", dR.str(d)},
                          {"abs_diff_r_n", dr.str(d)}};
    report["tolerance"] = tol.str(d);
    report["steps"] = sol.steps;
    report["rows"] = json::array();
    for (std::size_t i = 0; i < sol.R.t.size(); ++i) {
      report["rows"].push_back(
          {{"t", sol.R.t[i].str(d)}, {"R_n", sol.R.values[i].str(d)}, {"r_n", sol.r.values[i].str(d)}});
    }
    report["pass"] = pass;
    json c = config_json(cfg);
    c["n"] = cfg.n;
    c["t_start"] = cfg.t_start;
    c["t_end"] = cfg.t_end;
    c["samples"] = cfg.samples;
    report["config"] = c;
    report["precision"] = {{"mantissa_bits_used", end_table.bits}, {"agreement_digits", end_table.agreement_digits}};
    report["meta"] = meta_json();
    os << report.dump(2) << '\n';
  }
  if (!pass) std::cerr << "FAIL riccati: endpoint differs from the pipeline by " << max(dR, dr).str(6) << '\n';
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------- iterate

int cmd_iterate(const RunConfig& cfg) {
  validate_alpha(cfg.alpha);
  if (cfg.alpha.size() != 1 || cfg.t.size() != 1) throw UsageError("iterate takes a single alpha and t");
  if (cfg.n_max < 1) throw UsageError("n-max must be at least 1");
  if (parse_real(cfg.t[0], "t").is_zero()) throw UsageError("t must be nonzero for the forward iteration");
  if (cfg.format != "csv" && cfg.format != "json") throw UsageError("format must be csv or json");
  sj::Real tol;
  require_tolerance(cfg, "1e-15", tol);
  const sj::WeightParams params = params_of(cfg.alpha[0], cfg.t[0]);
  sj::PrecisionContext ctx = table_context(cfg, cfg.n_max);
  const sj::OrthoTable oracle = sj::build_ortho_table(params, cfg.n_max, ctx);
  const sj::BetaIteration iter = sj::btd_iterate(params, cfg.n_max, ctx);
  sj::WorkingPrecision guard(std::max(iter.bits, oracle.bits));
  sj::Real worst(0);
  for (int n = 0; n <= cfg.n_max; ++n) worst = sj::max(worst, sj::abs(iter.beta[n] - oracle.beta[n]));
  const bool pass = worst <= tol;
  const int d = out_digits(cfg);
  Output out(cfg.out);
  if (cfg.format == "csv") {
    sj::write_iteration_csv(out.stream(), iter, oracle, d);
  } else {
    json report;
    report["suite"] = "iterate";
    report["max_abs_diff"] = worst.str(d);
    report["tolerance"] = tol.str(d);
    report["growth_base"] = std::round(sj::iteration_growth_base(iter, oracle) * 1000) / 1000;
    report["rows"] = json::array();
    for (int n = 0; n <= cfg.n_max; ++n) {
      report["rows"].push_back({{"n", n},
                                {"beta_iter", iter.beta[n].str(d)},
                                {"beta_oracle", oracle.beta[n].str(d)},
                                {"digits_lost", std::round(iter.digits_lost[n] * 100) / 100}});
    }
    report["pass"] = pass;
    report["config"] = config_json(cfg);
    report["precision"] = {{"mantissa_bits_used", iter.bits}, {"agreement_digits", cfg.agreement_digits}};
    report["meta"] = meta_json();
    out.stream() << report.dump(2) << '\n';
  }
  if (!pass) std::cerr << "FAIL iterate: max |beta_iter - beta_oracle| = " << worst.str(6) << '\n';
  return pass ? 0 : 1;
}

std::optional<long> bits_from_env() {
  const char* v = std::getenv(kBitsEnv);
  if (v == nullptr || *v == '\0') return std::nullopt;
  char* end = nullptr;
  const long bits = std::strtol(v, &end, 10);
  if (*end != '\0' || bits < 64) throw UsageError(std::string(kBitsEnv) + " must be an integer >= 64");
  return bits;
}

void add_params(CLI::App* sub, RunConfig& cfg, bool lists) {
  if (lists) {
    sub->add_option("--alpha", cfg.alpha, "alpha values (> -1), comma separated")->delimiter(',');
    sub->add_option("--t", cfg.t, "t values, comma separated")->delimiter(',');
  } else {
    sub->add_option("--alpha", cfg.alpha, "alpha (> -1)")->expected(1);
    sub->add_option("--t", cfg.t, "t")->expected(1);
  }
}

void add_precision(CLI::App* sub, RunConfig& cfg, std::optional<long>& bits_flag) {
  sub->add_option("--bits", bits_flag, "starting mantissa bits (default: $" + std::string(kBitsEnv) + " or automatic)")
      ->check(CLI::Range(64L, 1L << 20));
  sub->add_option("--digits", cfg.agreement_digits, "agreement digits of the doubling policy")
      ->check(CLI::Range(1u, 1000u));
  sub->add_option("--out", cfg.out, "output path (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orthogonal polynomials for the weight (1-x^2)^alpha exp(-t x^2) on [-1, 1]"};
  app.set_version_flag("--version", SEMIJACOBI_VERSION);
  app.require_subcommand(1);
  RunConfig cfg;
  std::optional<long> bits_flag;

  auto* table = app.add_subcommand("table", "build h_n, beta_n, p(n,t), ln D_n, R_n, r_n, H_n");
  add_params(table, cfg, true);
  table->add_option("--n-max", cfg.n_max, "largest degree");
  table->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  add_precision(table, cfg, bits_flag);

  auto* verify = app.add_subcommand("verify", "run a residual suite and report the worst residual per identity");
  verify->add_option("--suite", cfg.suite, "identities, difference, ode or painleve")
      ->required()
      ->check(CLI::IsMember({"identities", "difference", "ode", "painleve"}));
  add_params(verify, cfg, true);
  verify->add_option("--n-max", cfg.n_max, "largest degree checked");
  verify->add_option("--t-start", cfg.t_start, "first t of the finite-difference grid (ode, painleve)");
  verify->add_option("--t-end", cfg.t_end, "last t of the finite-difference grid");
  verify->add_option("--points", cfg.points, "grid points including both ends (>= 5)");
  verify->add_option("--tolerance", cfg.tolerance, "override the suite tolerance");
  verify->add_option("--corrupt-beta", cfg.corrupt_beta, "perturb beta_n by 1e-6 before checking")->group("");
  add_precision(verify, cfg, bits_flag);

  auto* asym = app.add_subcommand("asymptotics", "compare the pipeline with a large-n expansion");
  asym->add_option("--quantity", cfg.quantity, "beta, p or hankel")
      ->required()
      ->check(CLI::IsMember({"beta", "p", "hankel"}));
  add_params(asym, cfg, false);
  asym->add_option("--n-min", cfg.n_min, "first n of the doubling ladder");
  asym->add_option("--n-max", cfg.n_max, "largest n of the doubling ladder");
  asym->add_option("--csv", cfg.csv, "also write n,oracle,series,abs_error,running_slope here");
  add_precision(asym, cfg, bits_flag);

  auto* ric = app.add_subcommand("riccati", "integrate the (R_n, r_n) system in t and compare with the pipeline");
  ric->add_option("--alpha", cfg.alpha, "alpha (> -1)")->expected(1);
  ric->add_option("--n", cfg.n, "degree");
  ric->add_option("--t-start", cfg.t_start, "initial t (> 0)");
  ric->add_option("--t-end", cfg.t_end, "final t (> 0)");
  ric->add_option("--samples", cfg.samples, "dense-output points including both ends");
  ric->add_option("--tolerance", cfg.tolerance, "endpoint tolerance against the pipeline");
  ric->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  add_precision(ric, cfg, bits_flag);

  auto* iter = app.add_subcommand("iterate", "iterate the beta_n difference equation forward");
  add_params(iter, cfg, false);
  iter->add_option("--n-max", cfg.n_max, "last n of the iteration");
  iter->add_option("--tolerance", cfg.tolerance, "largest accepted |beta_iter - beta_oracle|");
  iter->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  add_precision(iter, cfg, bits_flag);

  // Defaults that differ by command are applied before parsing overrides them.
  if (argc > 1) {
    const std::string first = argv[1];
    if (first == "asymptotics") cfg.n_max = 512;
    if (first == "iterate") cfg.n_max = 20;
    if (first == "table") cfg.format = "csv";
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.mantissa_bits = bits_flag ? bits_flag : bits_from_env();
    if (table->parsed()) {
      cfg.command = "table";
      return cmd_table(cfg);
    }
    if (verify->parsed()) {
      cfg.command = "verify";
      return cmd_verify(cfg);
    }
    if (asym->parsed()) {
      cfg.command = "asymptotics";
      return cmd_asymptotics(cfg);
    }
    if (ric->parsed()) {
      cfg.command = "riccati";
      return cmd_riccati(cfg);
    }
    cfg.command = "iterate";
    return cmd_iterate(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
