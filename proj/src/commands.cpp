#include "replen/commands.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "replen/methods.hpp"

namespace replen::cli {
namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitGateFailed = 1;
constexpr int kExitInvalid = 2;

std::string csv_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, result.ptr);
}

json json_time(double t) {
  if (std::isinf(t)) return "inf";
  return t;
}

json echo(const ModelParams& p) {
  json cost;
  if (const auto* fixed = std::get_if<FixedCost>(&p.cost)) {
    cost = {{"theta", fixed->theta}};
  } else {
    const auto& linear = std::get<LinearCost>(p.cost);
    cost = {{"a", linear.a}, {"b", linear.b}};
  }
  return {{"k", p.k}, {"mu", p.mu}, {"r", p.r}, {"growth", p.growth}, {"cost", cost}};
}

json echo(const EffectiveParams& e) {
  return {{"theta", e.theta}, {"r_eff", e.r_eff}, {"alpha", e.alpha},
          {"phi_k", e.phi_k}, {"rho", e.rho},     {"mu0", e.mu0},
          {"v", e.v}};
}

void write_json(std::ostream& out, const json& report) { out << report.dump(2) << '\n'; }

void write_row(std::ostream& out, double t, std::string_view method, double value,
               std::optional<double> std_error) {
  out << csv_number(t) << ',' << method << ',' << csv_number(value) << ',';
  if (std_error) out << csv_number(*std_error);
  out << '\n';
}

void write_curve_rows(std::ostream& out, const ValueCurve& curve) {
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    std::optional<double> se;
    if (!curve.std_errors.empty()) se = curve.std_errors[i];
    write_row(out, curve.times[i], to_string(curve.method), curve.values[i], se);
  }
}

json curve_json(const ValueCurve& curve) {
  json j = {{"method", to_string(curve.method)}, {"times", curve.times},
            {"values", curve.values}};
  if (!curve.std_errors.empty()) j["stderr"] = curve.std_errors;
  return j;
}

// Runs `body`, mapping exceptions to a diagnostic and exit code 2.
template <class Body>
int guarded(std::ostream& err, Body body) {
  try {
    return body();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

CurveOptions curve_options(const CurveCommand& cmd) {
  CurveOptions opts;
  opts.series_tol = cmd.common.tol;
  opts.volterra_h = cmd.h;
  opts.inversion.node_count = cmd.nodes;
  opts.mc.n_paths = cmd.paths;
  opts.mc.seed = cmd.seed;
  opts.mc.execution.threads = cmd.threads;
  opts.execution.threads = cmd.threads;
  return opts;
}

std::vector<double> curve_times(const CurveCommand& cmd) {
  if (!cmd.times.empty()) return cmd.times;
  return uniform_times(cmd.t_max, cmd.step);
}

json curve_metadata(const CurveCommand& cmd, bool uses_mc) {
  json meta = {{"version", kVersion},
               {"series_tol", cmd.common.tol},
               {"volterra_h", cmd.h},
               {"talbot_nodes", cmd.nodes}};
  if (uses_mc) {
    meta["paths"] = cmd.paths;
    meta["seed"] = cmd.seed;
  }
  return meta;
}

}  // namespace

const std::string kErratumNote =
    "The published finite-time values for k=10, mu=1, r=0.02, a=b=1 follow "
    "41.097 - 45*exp(-t/101). The decay rate of the "
    "asymptotic expansion is rho = r*mu/(r+mu) = 1/51, not 1/101, and the "
    "convolution series solution of the renewal equation gives w(10) = 4.023 "
    "rather than 0.339. Only the t=inf entry (41.097) is a value of w; the "
    "finite-time entries are an erratum and are not reproducible as ground "
    "truth.";

ModelParams to_model(const ModelFlags& flags) {
  if (!flags.k || !flags.mu || !flags.r) {
    throw std::invalid_argument("--k, --mu and --r are required");
  }
  const bool fixed = flags.theta.has_value();
  const bool linear = flags.a.has_value() || flags.b.has_value();
  if (fixed == linear) {
    throw std::invalid_argument("give exactly one of --theta or (--a and --b)");
  }
  if (linear && !(flags.a && flags.b)) {
    throw std::invalid_argument("linear cost needs both --a and --b");
  }
  ModelParams p;
  p.k = *flags.k;
  p.mu = *flags.mu;
  p.r = *flags.r;
  p.growth = flags.growth;
  if (fixed) {
    p.cost = FixedCost{*flags.theta};
  } else {
    p.cost = LinearCost{*flags.a, *flags.b};
  }
  return p;
}

int cmd_value(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ModelParams params = to_model(opts.model);
    const EffectiveParams eff = effective(params);
    if (opts.out == OutputFormat::json) {
      write_json(out, {{"params", echo(params)},
                       {"effective", echo(eff)},
                       {"v", eff.v},
                       {"metadata", {{"version", kVersion}}}});
    } else {
      out << "quantity,value\n";
      for (const auto& [name, value] :
           {std::pair{"theta", eff.theta}, {"r_eff", eff.r_eff}, {"alpha", eff.alpha},
            {"phi_k", eff.phi_k}, {"rho", eff.rho}, {"mu0", eff.mu0}, {"v", eff.v}}) {
        out << name << ',' << csv_number(value) << '\n';
      }
    }
    return kExitOk;
  });
}

int cmd_curve(const CurveCommand& cmd, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ModelParams params = to_model(cmd.common.model);
    const std::vector<double> times = curve_times(cmd);
    const CurveOptions opts = curve_options(cmd);

    std::vector<Method> methods;
    if (cmd.method == "all") {
      methods = {Method::series, Method::volterra, Method::laplace, Method::asymptotic};
      if (params.k == 1) methods.push_back(Method::exact_k1);
      if (cmd.with_mc) methods.push_back(Method::montecarlo);
    } else {
      methods = {parse_method(cmd.method)};
    }

    std::vector<ValueCurve> curves;
    for (Method m : methods) curves.push_back(evaluate_curve(params, m, times, opts));
    bool uses_mc = false;
    for (Method m : methods) uses_mc = uses_mc || m == Method::montecarlo;

    if (cmd.common.out == OutputFormat::json) {
      json list = json::array();
      for (const auto& c : curves) list.push_back(curve_json(c));
      write_json(out, {{"params", echo(params)},
                       {"curves", list},
                       {"metadata", curve_metadata(cmd, uses_mc)}});
    } else {
      out << kCsvHeader << '\n';
      for (const auto& c : curves) write_curve_rows(out, c);
    }
    return kExitOk;
  });
}

int cmd_compare(const CurveCommand& cmd, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ModelParams params = to_model(cmd.common.model);
    const std::vector<double> times = curve_times(cmd);
    const MethodComparison cmp =
        compare_methods(params, times, cmd.with_mc, curve_options(cmd));

    const bool analytic_ok = cmp.analytic_agree(cmd.agree_tol);
    const bool mc_ok = !cmp.montecarlo || cmp.montecarlo_agree(cmd.mc_sigmas);

    if (cmd.common.out == OutputFormat::json) {
      json curves = json::array();
      for (const auto& c : cmp.analytic) curves.push_back(curve_json(c));
      if (cmp.montecarlo) curves.push_back(curve_json(*cmp.montecarlo));
      json report = {{"params", echo(params)},
                     {"curves", curves},
                     {"max_discrepancy", cmp.max_discrepancy},
                     {"max_analytic_discrepancy", cmp.max_analytic_discrepancy()},
                     {"agree_tol", cmd.agree_tol},
                     {"analytic_agree", analytic_ok},
                     {"metadata", curve_metadata(cmd, cmd.with_mc)}};
      if (cmp.montecarlo) {
        report["max_mc_z_score"] = cmp.max_mc_z_score();
        report["mc_sigmas"] = cmd.mc_sigmas;
        report["mc_agree"] = mc_ok;
      }
      write_json(out, report);
    } else {
      out << kCsvHeader << '\n';
      for (const auto& c : cmp.analytic) write_curve_rows(out, c);
      if (cmp.montecarlo) write_curve_rows(out, *cmp.montecarlo);
      for (std::size_t i = 0; i < times.size(); ++i) {
        write_row(out, times[i], "max_abs_discrepancy", cmp.max_discrepancy[i], std::nullopt);
      }
    }

    if (!analytic_ok) {
      err << "analytic methods disagree: max discrepancy "
          << cmp.max_analytic_discrepancy() << " >= " << cmd.agree_tol << '\n';
    }
    if (!mc_ok) {
      err << "warning: Monte Carlo differs from series: max z = " << cmp.max_mc_z_score()
          << '\n';
    }
    return analytic_ok ? kExitOk : kExitGateFailed;
  });
}

int cmd_optimize(const OptimizeCommand& cmd, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const OptimalStock best = optimal_stock(cmd.a, cmd.b, cmd.mu, cmd.r, cmd.k_max);
    if (cmd.out == OutputFormat::json) {
      json scan = json::array();
      for (const auto& c : best.scan) scan.push_back({{"k", c.k}, {"v", c.v}});
      write_json(out, {{"params", {{"a", cmd.a}, {"b", cmd.b}, {"mu", cmd.mu}, {"r", cmd.r}}},
                       {"k_star", best.k},
                       {"v_star", best.v},
                       {"scan", scan},
                       {"metadata", {{"version", kVersion}}}});
    } else {
      out << "k,value,optimal\n";
      for (const auto& c : best.scan) {
        out << c.k << ',' << csv_number(c.v) << ',' << (c.k == best.k ? 1 : 0) << '\n';
      }
    }
    return kExitOk;
  });
}

std::vector<TableRow> reference_table() {
  ModelParams params;
  params.k = 10;
  params.mu = 1.0;
  params.r = 0.02;
  params.cost = LinearCost{1.0, 1.0};
  const EffectiveParams eff = effective(params);
  const double coefficient = asymptotic_coefficient(eff);

  constexpr double kPrintedLimit = 41.097;
  constexpr double kPrintedCoefficient = 45.0;
  constexpr double kPrintedRate = 1.0 / 101.0;
  const double inf = std::numeric_limits<double>::infinity();
  const std::pair<double, double> published[] = {
      {10, 0.339},    {20, 4.181},    {50, 13.688}, {100, 24.378},
      {200, 34.885},  {500, 40.778},  {inf, 41.097}};

  std::vector<TableRow> rows;
  for (const auto& [t, printed] : published) {
    TableRow row{t, 0, 0, 0, printed};
    if (std::isinf(t)) {
      row.printed_formula = kPrintedLimit;
      row.asymptotic = eff.v;
      row.ground_truth = eff.v;
    } else {
      row.printed_formula = kPrintedLimit - kPrintedCoefficient * std::exp(-kPrintedRate * t);
      row.asymptotic = eff.v - coefficient * std::exp(-eff.rho * t);
      row.ground_truth = series_value(eff, t, 1e-9);
    }
    rows.push_back(row);
  }
  return rows;
}

bool TableRow::formula_matches_printed() const {
  return std::abs(printed_formula - printed_table) <= kTableRounding;
}

int cmd_paper_table(OutputFormat format, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::vector<TableRow> rows = reference_table();
    std::string mismatches;
    for (const auto& row : rows) {
      if (row.formula_matches_printed()) continue;
      mismatches += " The printed t=" + csv_number(row.t) + " entry " +
                    csv_number(row.printed_table) + " also departs from that formula (" +
                    csv_number(row.printed_formula) + ").";
    }
    const std::string note = kErratumNote + mismatches;

    if (format == OutputFormat::json) {
      json list = json::array();
      for (const auto& row : rows) {
        list.push_back({{"t", json_time(row.t)},
                        {"printed_formula", row.printed_formula},
                        {"asymptotic", row.asymptotic},
                        {"ground_truth", row.ground_truth},
                        {"printed_table", row.printed_table},
                        {"formula_matches_printed", row.formula_matches_printed()}});
      }
      write_json(out, {{"params", {{"k", 10}, {"mu", 1.0}, {"r", 0.02}, {"a", 1.0}, {"b", 1.0}}},
                       {"rows", list},
                       {"erratum", note},
                       {"metadata", {{"version", kVersion}, {"series_tol", 1e-9}}}});
    } else {
      out << "t,printed_formula,asymptotic,ground_truth,printed_table,formula_matches_printed\n";
      for (const auto& row : rows) {
        out << csv_number(row.t) << ',' << csv_number(row.printed_formula) << ','
            << csv_number(row.asymptotic) << ',' << csv_number(row.ground_truth) << ','
            << csv_number(row.printed_table) << ',' << (row.formula_matches_printed() ? 1 : 0)
            << '\n';
      }
      err << "note: " << note << '\n';
    }
    return kExitOk;
  });
}

int cmd_simulate(const SimulateCommand& cmd, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (cmd.horizon.has_value() == cmd.perpetual) {
      throw std::invalid_argument("give exactly one of --horizon or --perpetual");
    }
    const ModelParams params = to_model(cmd.common.model);
    MCOptions opts;
    opts.n_paths = cmd.paths;
    opts.seed = cmd.seed;
    opts.execution.threads = cmd.threads;

    const MCEstimate est = cmd.perpetual ? simulate_vk(params, opts, cmd.tail_tol)
                                         : simulate_wk(params, *cmd.horizon, opts);
    const double t = cmd.perpetual ? std::numeric_limits<double>::infinity() : *cmd.horizon;

    if (cmd.common.out == OutputFormat::json) {
      json report = {{"params", echo(params)},
                     {"t", json_time(t)},
                     {"mean", est.mean},
                     {"stderr", est.std_error},
                     {"n_paths", est.n_paths},
                     {"seed", est.seed},
                     {"truncation_bias_bound", est.truncation_bias_bound},
                     {"metadata", {{"version", kVersion}}}};
      if (cmd.perpetual) report["metadata"]["tail_tol"] = cmd.tail_tol;
      write_json(out, report);
    } else {
      out << kCsvHeader << '\n';
      write_row(out, t, "mc", est.mean, est.std_error);
    }
    return kExitOk;
  });
}

}  // namespace replen::cli
