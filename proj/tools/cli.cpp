#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "smalldev/brownian.hpp"
#include "smalldev/dichotomy.hpp"
#include "smalldev/errors.hpp"
#include "smalldev/increments.hpp"
#include "smalldev/oracles.hpp"
#include "smalldev/series.hpp"
#include "smalldev/simulate.hpp"

#ifndef SMALLDEV_VERSION
#define SMALLDEV_VERSION "0.0.0"
#endif

namespace smalldev::cli {
namespace {

using json = nlohmann::ordered_json;

// 17 significant digits round-trip every double.
std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num(std::int64_t v) { return std::to_string(v); }
std::string num(std::uint64_t v) { return std::to_string(v); }
std::string num(unsigned v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string str() const {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
      os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return os.str();
  }
};

struct Outcome {
  json body;
  Csv csv;
  json parameters = json::object();
  std::vector<std::uint64_t> seeds;
  unsigned workers = 1;
};

// Counts accept integer or scientific notation ("100000", "1e5").
std::int64_t parse_count(const std::string& text, const std::string& flag, std::int64_t min) {
  double value = 0.0;
  std::size_t used = 0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidParameter(flag, "expected an integer, got '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(value) || value != std::floor(value) ||
      value > 9.0e15) {
    throw InvalidParameter(flag, "expected an integer, got '" + text + "'");
  }
  const auto count = static_cast<std::int64_t>(value);
  if (count < min) {
    throw InvalidParameter(flag, "must be >= " + std::to_string(min) + ", got " + text);
  }
  return count;
}

std::string flag_name(const std::string& parameter) {
  static const std::map<std::string, std::string> renames = {
      {"abs_tol", "tol"}, {"rel_tol", "tol"}, {"tail_index", "tail-index"},
      {"moment_eps", "moment-eps"}, {"grid_points", "grid"}, {"psi", "c"},
      {"threshold", "eps"}};
  const auto it = renames.find(parameter);
  return "--" + (it == renames.end() ? parameter : it->second);
}

// ---------------------------------------------------------------------------

struct BrownianCdfCmd {
  double x = 0.0;
  double tol = 1e-12;

  void attach(CLI::App& sub) {
    sub.add_option("--x", x, "Threshold x > 0")->required()->allow_extra_args(false);
    sub.add_option("--tol", tol, "Absolute truncation tolerance in (0, 1)");
  }

  Outcome run() const {
    const auto r = brownian::sup_cdf(x, tol);
    const double asym = brownian::sup_cdf_asymptotic(x);
    Outcome o;
    o.parameters = {{"x", x}, {"tol", tol}};
    o.body = {{"x", x},
              {"value", r.value},
              {"k_terms", r.k_terms},
              {"error_bound", r.error_bound},
              {"asymptotic", asym}};
    o.csv.header = {"x", "value", "k_terms", "error_bound", "asymptotic"};
    o.csv.rows.push_back({num(x), num(r.value), num(r.k_terms), num(r.error_bound), num(asym)});
    return o;
  }
};

struct WienerTermCmd {
  std::string n = "1";
  double eps = 1.0;
  double tau = 0.0;
  double tol = 1e-14;

  void attach(CLI::App& sub) {
    sub.add_option("--n", n, "Index n >= 1")->required();
    sub.add_option("--eps", eps, "Threshold multiplier eps")->required();
    sub.add_option("--tau", tau, "Drift limit tau (a_n = tau / log n)");
    sub.add_option("--tol", tol, "Absolute truncation tolerance");
  }

  Outcome run() const {
    const auto nn = parse_count(n, "n", 1);
    const auto drift = DriftSpec::inverse_log(tau);
    const auto r = brownian::wiener_term_prob(nn, eps, drift, tol);
    const double arg = brownian::wiener_threshold(static_cast<double>(nn), eps, drift);
    Outcome o;
    o.parameters = {{"n", nn}, {"eps", eps}, {"tau", tau}, {"tol", tol}};
    o.body = {{"n", nn},         {"eps", eps},           {"tau", tau},
              {"argument", arg}, {"value", r.value},     {"k_terms", r.k_terms},
              {"error_bound", r.error_bound}};
    o.csv.header = {"n", "eps", "tau", "argument", "value", "k_terms", "error_bound"};
    o.csv.rows.push_back({num(nn), num(eps), num(tau), num(arg), num(r.value), num(r.k_terms),
                          num(r.error_bound)});
    return o;
  }
};

struct ThresholdCmd {
  double r = 2.0;
  double sigma = 1.0;
  std::string scaling = "phi";

  void attach(CLI::App& sub) {
    sub.add_option("--r", r, "Weight exponent r > 1")->required();
    sub.add_option("--sigma", sigma, "Increment standard deviation");
    sub.add_option("--scaling", scaling, "phi or raw (sqrt(n / log n))")
        ->check(CLI::IsMember({"phi", "raw"}));
  }

  Outcome run() const {
    const WeightParams params(r, 0.0);
    const auto kind = scaling == "phi" ? series::Scaling::phi : series::Scaling::sqrt_n_over_log_n;
    const double value = series::critical_threshold(params, sigma, kind);
    Outcome o;
    o.parameters = {{"r", r}, {"sigma", sigma}, {"scaling", scaling}};
    o.body = {{"r", r}, {"sigma", sigma}, {"scaling", scaling}, {"critical_threshold", value}};
    o.csv.header = {"r", "sigma", "scaling", "critical_threshold"};
    o.csv.rows.push_back({num(r), num(sigma), scaling, num(value)});
    return o;
  }
};

struct LimitConstantCmd {
  double r = 2.0;
  double a = 0.0;
  double tau = 0.0;

  void attach(CLI::App& sub) {
    sub.add_option("--r", r, "Weight exponent r > 1")->required();
    sub.add_option("--a", a, "Log-weight exponent a > -1");
    sub.add_option("--tau", tau, "Drift limit tau");
  }

  Outcome run() const {
    const WeightParams params(r, a);
    const double value = series::limit_constant(params, tau);
    Outcome o;
    o.parameters = {{"r", r}, {"a", a}, {"tau", tau}};
    o.body = {{"r", r}, {"a", a}, {"tau", tau}, {"limit_constant", value}};
    o.csv.header = {"r", "a", "tau", "limit_constant"};
    o.csv.rows.push_back({num(r), num(a), num(tau), num(value)});
    return o;
  }
};

struct SeriesCmd {
  double r = 2.0;
  double a = 0.0;
  double tau = 0.0;
  std::optional<double> eps;
  std::optional<double> lambda;
  double tol = 1e-8;
  std::string cutoff = "0";
  unsigned workers = 1;

  void attach(CLI::App& sub) {
    sub.add_option("--r", r, "Weight exponent r > 1")->required();
    sub.add_option("--a", a, "Log-weight exponent a > -1");
    sub.add_option("--tau", tau, "Drift limit tau");
    auto* e = sub.add_option("--eps", eps, "Threshold multiplier eps < 1/sqrt(r-1)");
    auto* l = sub.add_option("--lambda", lambda, "Gap lambda = eps^-2 - (r-1) > 0");
    e->excludes(l);
    sub.add_option("--tol", tol, "Relative tolerance in (0, 0.1)");
    sub.add_option("--cutoff", cutoff, "Exact-summation cutoff (0 = automatic)");
    sub.add_option("--workers", workers, "Worker threads");
  }

  Outcome run() const {
    const WeightParams params(r, a);
    if (!eps && !lambda) throw InvalidParameter("eps", "one of --eps or --lambda is required");
    if (lambda && !(*lambda > 0.0)) {
      throw DivergentSeries("lambda", "lambda must be positive for a convergent series");
    }
    const double e = eps ? *eps : params.eps_for_gap(*lambda);
    const auto res = series::weighted_series_wiener(
        params, e, DriftSpec::inverse_log(tau),
        series::SeriesOptions{tol, parse_count(cutoff, "cutoff", 0), workers});
    Outcome o;
    o.workers = workers;
    o.parameters = {{"r", r},     {"a", a},     {"tau", tau},         {"eps", e},
                    {"tol", tol}, {"cutoff", res.cutoff_n}, {"workers", workers}};
    o.body = {{"r", r},
              {"a", a},
              {"tau", tau},
              {"eps", e},
              {"lambda", res.lambda},
              {"cutoff_n", res.cutoff_n},
              {"partial_sum", res.partial_sum},
              {"tail_correction", res.tail_correction},
              {"total", res.total},
              {"normalized", res.normalized},
              {"rel_err_bound", res.rel_err_bound},
              {"limit_constant", series::limit_constant(params, tau)}};
    o.csv.header = {"r",           "a",          "tau",         "eps",
                    "lambda",      "cutoff_n",   "partial_sum", "tail_correction",
                    "total",       "normalized", "rel_err_bound"};
    o.csv.rows.push_back({num(r), num(a), num(tau), num(e), num(res.lambda), num(res.cutoff_n),
                          num(res.partial_sum), num(res.tail_correction), num(res.total),
                          num(res.normalized), num(res.rel_err_bound)});
    return o;
  }
};

struct StabilizeCmd {
  double r = 2.0;
  double a = 0.0;
  double tau = 0.0;
  double eps = 0.9;
  std::string max_n = "1e7";
  unsigned workers = 1;

  void attach(CLI::App& sub) {
    sub.add_option("--r", r, "Weight exponent r > 1")->required();
    sub.add_option("--a", a, "Log-weight exponent a > -1");
    sub.add_option("--tau", tau, "Drift limit tau");
    sub.add_option("--eps", eps, "Threshold multiplier eps")->required();
    sub.add_option("--N", max_n, "Largest cutoff");
    sub.add_option("--workers", workers, "Worker threads");
  }

  Outcome run() const {
    const WeightParams params(r, a);
    const auto nmax = parse_count(max_n, "N", 10);
    const auto rows =
        series::stabilization_table(params, eps, DriftSpec::inverse_log(tau), nmax, workers);
    Outcome o;
    o.workers = workers;
    o.parameters = {{"r", r}, {"a", a}, {"tau", tau}, {"eps", eps}, {"N", nmax},
                    {"workers", workers}};
    json table = json::array();
    o.csv.header = {"cutoff", "raw_partial_sum", "accelerated_total"};
    for (const auto& row : rows) {
      table.push_back({{"cutoff", row.cutoff},
                       {"raw_partial_sum", row.raw_partial_sum},
                       {"accelerated_total", row.accelerated_total}});
      o.csv.rows.push_back(
          {num(row.cutoff), num(row.raw_partial_sum), num(row.accelerated_total)});
    }
    o.body = {{"r", r}, {"a", a}, {"tau", tau}, {"eps", eps}, {"rows", table}};
    return o;
  }
};

struct LimitProbeCmd {
  double r = 2.0;
  double a = 0.0;
  double tau = 0.0;
  std::vector<double> lambdas;
  double tol = 1e-8;
  double agree_tol = 0.02;
  unsigned workers = 1;

  void attach(CLI::App& sub) {
    sub.add_option("--r", r, "Weight exponent r > 1")->required();
    sub.add_option("--a", a, "Log-weight exponent a > -1");
    sub.add_option("--tau", tau, "Drift limit tau");
    sub.add_option("--lambdas", lambdas, "Strictly decreasing gaps, comma separated")
        ->required()
        ->delimiter(',');
    sub.add_option("--tol", tol, "Relative tolerance per series evaluation");
    sub.add_option("--agree-tol", agree_tol, "Relative tolerance for agreement with the limit");
    sub.add_option("--workers", workers, "Worker threads");
  }

  Outcome run() const {
    const WeightParams params(r, a);
    const auto probe = series::limit_probe(params, DriftSpec::inverse_log(tau), lambdas, tol,
                                           agree_tol, workers);
    Outcome o;
    o.workers = workers;
    o.parameters = {{"r", r},     {"a", a},     {"tau", tau},
                    {"lambdas", lambdas},       {"tol", tol},
                    {"agree_tol", agree_tol},   {"workers", workers}};
    json rows = json::array();
    o.csv.header = {"lambda", "normalized"};
    for (const auto& row : probe.rows) {
      rows.push_back({{"lambda", row.lambda},
                      {"eps", row.eps},
                      {"normalized", row.normalized},
                      {"rel_err_bound", row.rel_err_bound},
                      {"cutoff_n", row.cutoff_n}});
      o.csv.rows.push_back({num(row.lambda), num(row.normalized)});
    }
    o.csv.rows.push_back({"extrapolated", num(probe.extrapolated)});
    o.csv.rows.push_back({"analytic", num(probe.analytic)});
    o.body = {{"r", r},
              {"a", a},
              {"tau", tau},
              {"rows", rows},
              {"extrapolated", probe.extrapolated},
              {"first_order", probe.first_order},
              {"analytic", probe.analytic},
              {"extrapolation_basis", probe.basis},
              {"extrapolation_note", "error expansion is a modelling choice; no rate is proven"},
              {"agree_tol", probe.agree_tol},
              {"agrees", probe.agrees}};
    return o;
  }
};

struct LawOptions {
  std::string law = "rademacher";
  double sigma = 1.0;
  double tail_index = 2.5;
  std::optional<double> moment_eps;

  void attach(CLI::App& sub) {
    sub.add_option("--law", law,
                   "rademacher | gaussian | uniform_centered | exponential_centered | "
                   "symmetric_pareto")
        ->required();
    sub.add_option("--sigma", sigma, "Increment standard deviation");
    sub.add_option("--tail-index", tail_index, "Tail index of symmetric_pareto (> 2)");
    sub.add_option("--moment-eps", moment_eps, "Declared moment order 2 + moment_eps");
  }

  IncrementLaw make() const {
    return IncrementLaw::make(parse_law_kind(law), sigma, moment_eps, tail_index);
  }

  void record(json& params, const IncrementLaw& made) const {
    params["law"] = law;
    params["sigma"] = sigma;
    params["moment_eps"] = made.moment_eps();
    if (made.kind() == LawKind::symmetric_pareto) params["tail_index"] = tail_index;
  }
};

struct SimulateCmd {
  LawOptions law;
  std::string n = "100";
  double eps = 1.0;
  double tau = 0.0;
  std::string samples = "100000";
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double confidence = 0.95;

  void attach(CLI::App& sub) {
    law.attach(sub);
    sub.add_option("--n", n, "Walk length n")->required();
    sub.add_option("--eps", eps, "Threshold multiplier eps")->required();
    sub.add_option("--tau", tau, "Drift limit tau");
    sub.add_option("--samples", samples, "Number of simulated walks (>= 100)");
    sub.add_option("--seed", seed, "64-bit seed (required)")->required();
    sub.add_option("--workers", workers, "Worker threads");
    sub.add_option("--confidence", confidence, "Wilson interval confidence");
  }

  Outcome run() const {
    const auto made = law.make();
    const auto nn = parse_count(n, "n", 1);
    const auto ss = parse_count(samples, "samples", 100);
    const auto est = simulate::estimate_small_dev(made, nn, eps, DriftSpec::inverse_log(tau), ss,
                                                  seed, workers, confidence);
    Outcome o;
    o.workers = workers;
    o.seeds = {seed};
    law.record(o.parameters, made);
    o.parameters.update({{"n", nn}, {"eps", eps}, {"tau", tau}, {"samples", ss},
                         {"seed", seed}, {"workers", workers}, {"confidence", confidence}});
    o.body = o.parameters;
    o.body.update({{"threshold", est.threshold},
                   {"p_hat", est.p_hat},
                   {"ci_low", est.ci_low},
                   {"ci_high", est.ci_high},
                   {"successes", est.successes},
                   {"zero_successes", est.zero_successes}});
    o.csv.header = {"law",       "n",       "eps",    "tau",     "sigma",     "threshold",
                    "p_hat",     "ci_low",  "ci_high", "confidence", "samples", "successes",
                    "seed",      "workers", "zero_successes"};
    o.csv.rows.push_back({law.law, num(nn), num(eps), num(tau), num(made.sigma()),
                          num(est.threshold), num(est.p_hat), num(est.ci_low), num(est.ci_high),
                          num(confidence), num(ss), num(est.successes), num(seed),
                          num(est.workers), est.zero_successes ? "true" : "false"});
    return o;
  }
};

struct OracleCmd {
  std::string kind = "rademacher";
  std::string n = "1";
  double x = 1.0;
  int grid = 1024;
  double sigma = 1.0;

  void attach(CLI::App& sub) {
    sub.add_option("--kind", kind, "rademacher or gaussian")
        ->check(CLI::IsMember({"rademacher", "gaussian"}));
    sub.add_option("--n", n, "Walk length n")->required();
    sub.add_option("--x", x, "Barrier x")->required();
    sub.add_option("--grid", grid, "Grid intervals for the gaussian oracle (>= 256)");
    sub.add_option("--sigma", sigma, "Step size of the rademacher walk");
  }

  Outcome run() const {
    const auto nn = parse_count(n, "n", 1);
    Outcome o;
    o.parameters = {{"kind", kind}, {"n", nn}, {"x", x}};
    if (kind == "rademacher") {
      o.parameters["sigma"] = sigma;
      const double log_p = oracles::rademacher_oracle_log(nn, x, sigma);
      const double value = std::exp(log_p);
      o.body = o.parameters;
      o.body.update({{"value", value}, {"log_value", finite_or_null(log_p)}});
      o.csv.header = {"kind", "n", "x", "sigma", "value", "log_value"};
      o.csv.rows.push_back({kind, num(nn), num(x), num(sigma), num(value), num(log_p)});
    } else {
      o.parameters["grid"] = grid;
      const auto res = oracles::gaussian_grid_oracle(nn, x, grid);
      o.body = o.parameters;
      o.body.update({{"value", res.value},
                     {"log_value", finite_or_null(res.log_value)},
                     {"error_estimate", res.error_estimate}});
      o.csv.header = {"kind", "n", "x", "grid", "value", "log_value", "error_estimate"};
      o.csv.rows.push_back({kind, num(nn), num(x), num(grid), num(res.value),
                            num(res.log_value), num(res.error_estimate)});
    }
    return o;
  }
};

struct ExponentCheckCmd {
  LawOptions law;
  double x = 1.0;
  std::vector<std::string> ns;
  std::string source = "auto";
  std::string samples = "100000";
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  int grid = 1024;

  void attach(CLI::App& sub) {
    law.attach(sub);
    sub.add_option("--x", x, "Scale multiplier x in x phi(n)")->required();
    sub.add_option("--ns", ns, "Increasing walk lengths, comma separated")
        ->required()
        ->delimiter(',');
    sub.add_option("--source", source, "auto (exact oracle where available) or mc")
        ->check(CLI::IsMember({"auto", "mc"}));
    sub.add_option("--samples", samples, "Monte Carlo samples per n");
    sub.add_option("--seed", seed, "64-bit seed (required whenever Monte Carlo is used)");
    sub.add_option("--workers", workers, "Worker threads");
    sub.add_option("--grid", grid, "Grid intervals for the gaussian oracle");
  }

  Outcome run() const {
    const auto made = law.make();
    std::vector<std::int64_t> schedule;
    for (const auto& s : ns) schedule.push_back(parse_count(s, "ns", 2));
    const bool has_oracle = made.kind() == LawKind::rademacher ||
                            (made.kind() == LawKind::gaussian &&
                             std::all_of(schedule.begin(), schedule.end(),
                                         [](std::int64_t v) { return v <= 10000; }));
    const bool needs_mc = source == "mc" || !has_oracle;
    if (needs_mc && !seed) {
      throw InvalidParameter("seed", "Monte Carlo is required here; pass an explicit --seed");
    }
    simulate::ExponentCheckOptions opts;
    opts.source = source == "mc" ? simulate::ExponentSource::monte_carlo
                                 : simulate::ExponentSource::automatic;
    opts.samples = parse_count(samples, "samples", 100);
    opts.seed = seed.value_or(0);
    opts.workers = workers;
    opts.grid_points = grid;
    const auto rows = simulate::exponent_check(made, x, schedule, opts);

    Outcome o;
    o.workers = workers;
    if (needs_mc) o.seeds = {opts.seed};
    law.record(o.parameters, made);
    o.parameters.update({{"x", x}, {"ns", schedule}, {"source", source}});
    if (needs_mc) o.parameters.update({{"samples", opts.samples}, {"seed", opts.seed}});
    json table = json::array();
    o.csv.header = {"n", "probability", "exponent", "target", "bound_only", "method"};
    for (const auto& row : rows) {
      table.push_back({{"n", row.n},
                       {"probability", row.probability},
                       {"exponent", finite_or_null(row.exponent)},
                       {"target", row.target},
                       {"bound_only", row.bound_only},
                       {"method", std::string(row.method)}});
      o.csv.rows.push_back({num(row.n), num(row.probability), num(row.exponent),
                            num(row.target), row.bound_only ? "true" : "false",
                            std::string(row.method)});
    }
    o.body = o.parameters;
    o.body["rows"] = table;
    return o;
  }
};

struct DichotomyCmd {
  double c = 1.0;
  double b = 0.0;
  double d = 0.0;
  double r = 2.0;
  double a = 0.0;
  std::string max_n = "1e6";
  std::string mode = "both";
  unsigned workers = 1;

  void attach(CLI::App& sub) {
    sub.add_option("--c", c, "Coefficient of log n in psi")->required();
    sub.add_option("--b", b, "Coefficient of log log n in psi");
    sub.add_option("--d", d, "Constant offset of psi");
    sub.add_option("--r", r, "Weight exponent r > 1")->required();
    sub.add_option("--a", a, "Log-weight exponent a");
    sub.add_option("--N", max_n, "Largest cutoff (>= 10)");
    sub.add_option("--mode", mode, "exponential | wiener_prob | both")
        ->check(CLI::IsMember({"exponential", "wiener_prob", "both"}));
    sub.add_option("--workers", workers, "Worker threads");
  }

  Outcome run() const {
    const WeightParams params(r, a);
    const dichotomy::PsiSpec psi{c, b, d};
    const auto verdict = dichotomy::classify_psi(psi, params);
    const auto nmax = parse_count(max_n, "N", 10);

    std::vector<dichotomy::SummandMode> modes;
    if (mode != "wiener_prob") modes.push_back(dichotomy::SummandMode::exponential);
    if (mode != "exponential") modes.push_back(dichotomy::SummandMode::wiener_prob);

    Outcome o;
    o.workers = workers;
    o.parameters = {{"c", c}, {"b", b}, {"d", d}, {"r", r}, {"a", a}, {"N", nmax},
                    {"mode", mode}, {"workers", workers}};
    o.body = {{"c", c}, {"b", b}, {"d", d}, {"r", r}, {"a", a},
              {"verdict", std::string(dichotomy::to_string(verdict))}};
    json tables = json::object();
    o.csv.header = {"mode", "cutoff", "partial_sum", "increment"};
    std::vector<std::vector<std::string>> footer;
    for (auto m : modes) {
      const auto table = dichotomy::partial_sum_diagnostic(psi, params, nmax, m, workers);
      const std::string name(dichotomy::to_string(m));
      json rows = json::array();
      for (const auto& row : table.rows) {
        rows.push_back({{"cutoff", row.cutoff},
                        {"partial_sum", row.partial_sum},
                        {"increment", row.increment}});
        o.csv.rows.push_back(
            {name, num(row.cutoff), num(row.partial_sum), num(row.increment)});
      }
      tables[name] = {{"rows", rows}, {"trend", std::string(dichotomy::to_string(table.trend))}};
      footer.push_back({"trend_" + name, std::string(dichotomy::to_string(table.trend)), "", ""});
    }
    o.csv.rows.push_back({"verdict", std::string(dichotomy::to_string(verdict)), "", ""});
    for (auto& f : footer) o.csv.rows.push_back(std::move(f));
    o.body["tables"] = tables;
    return o;
  }
};

void write_manifest(const std::string& path, const std::vector<std::string>& args,
                    const Outcome& outcome, double wall_seconds) {
  json manifest = {{"tool", "smalldev"},
                   {"version", SMALLDEV_VERSION},
                   {"command_line", args},
                   {"seeds", outcome.seeds},
                   {"workers", outcome.workers},
                   {"wall_time_seconds", wall_seconds},
                   {"parameters", outcome.parameters}};
  std::ofstream file(path);
  if (!file) throw InvalidParameter("manifest", "cannot write manifest to '" + path + "'");
  file << manifest.dump(2) << '\n';
}

// Replays the command line stored in a manifest, minus its --manifest flag.
std::vector<std::string> replay_args(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw InvalidParameter("manifest-in", "cannot read manifest '" + path + "'");
  json manifest;
  try {
    manifest = json::parse(file);
  } catch (const json::exception& e) {
    throw InvalidParameter("manifest-in", std::string("malformed manifest: ") + e.what());
  }
  if (!manifest.contains("command_line") || !manifest["command_line"].is_array()) {
    throw InvalidParameter("manifest-in", "manifest has no command_line array");
  }
  std::vector<std::string> args;
  const auto& stored = manifest["command_line"];
  for (std::size_t i = 0; i < stored.size(); ++i) {
    const auto arg = stored[i].get<std::string>();
    if (arg == "--manifest") {
      ++i;
      continue;
    }
    if (arg.rfind("--manifest=", 0) == 0) continue;
    args.push_back(arg);
  }
  if (!args.empty() && args.front() == "replay") {
    throw InvalidParameter("manifest-in", "a manifest cannot replay another replay");
  }
  return args;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Small-deviation series, Brownian sup-norm CDF and random-walk simulation",
               "smalldev"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SMALLDEV_VERSION);

  std::string format = "json";
  std::string manifest_path;
  std::string manifest_in;

  BrownianCdfCmd brownian_cdf;
  WienerTermCmd wiener_term;
  ThresholdCmd threshold;
  LimitConstantCmd limit_constant;
  SeriesCmd series_cmd;
  StabilizeCmd stabilize;
  LimitProbeCmd limit_probe;
  SimulateCmd simulate_cmd;
  OracleCmd oracle;
  ExponentCheckCmd exponent_check;
  DichotomyCmd dichotomy_cmd;

  std::vector<std::pair<CLI::App*, std::function<Outcome()>>> commands;
  auto add = [&](const char* name, const char* help, auto& cmd) {
    CLI::App* sub = app.add_subcommand(name, help);
    cmd.attach(*sub);
    sub->add_option("--format", format, "Output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--manifest", manifest_path, "Write a JSON run manifest to this path");
    commands.emplace_back(sub, [&cmd] { return cmd.run(); });
  };
  add("brownian-cdf", "P(sup_[0,1] |W| <= x) by the theta series", brownian_cdf);
  add("wiener-term", "Series term probability at index n", wiener_term);
  add("threshold", "Critical eps separating convergence from divergence", threshold);
  add("limit-constant", "Limit (4/pi) exp(2 tau (r-1)^{3/2}) Gamma(a+1)", limit_constant);
  add("series", "Weighted Wiener series with tail acceleration", series_cmd);
  add("stabilize", "Raw and accelerated partial sums at decade cutoffs", stabilize);
  add("limit-probe", "Normalised series along a lambda schedule and its extrapolation",
      limit_probe);
  add("simulate", "Monte Carlo estimate of P(M_n <= sigma phi(n) (eps + a_n))", simulate_cmd);
  add("oracle", "Exact stay-in-band probability (rademacher DP or gaussian grid)", oracle);
  add("exponent-check", "Empirical small-deviation exponent -log P / log n", exponent_check);
  add("dichotomy", "Convergence verdict and partial-sum diagnostics for psi", dichotomy_cmd);
  CLI::App* replay = app.add_subcommand("replay", "Re-run the command stored in a manifest");
  replay->add_option("--manifest-in", manifest_in, "Manifest written by --manifest")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\nRun with --help for more information.\n";
    return kUsage;
  }

  try {
    if (replay->parsed()) return run(replay_args(manifest_in), out, err);
    for (auto& [sub, execute] : commands) {
      if (!sub->parsed()) continue;
      const auto start = std::chrono::steady_clock::now();
      const Outcome outcome = execute();
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (format == "json") {
        out << outcome.body.dump(2) << '\n';
      } else {
        out << outcome.csv.str();
      }
      if (!manifest_path.empty()) write_manifest(manifest_path, args, outcome, seconds);
      return kOk;
    }
  } catch (const DivergentSeries& e) {
    err << "error: " << flag_name(e.parameter()) << ": " << e.what() << '\n';
    return kDivergent;
  } catch (const DomainError& e) {
    err << "error: " << flag_name(e.parameter()) << ": " << e.what() << '\n';
    return kDomain;
  } catch (const InvalidParameter& e) {
    err << "error: " << flag_name(e.parameter()) << ": " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace smalldev::cli
