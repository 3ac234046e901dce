// replen: expected discounted replenishment cost of a k-unit storage system.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "replen/commands.hpp"

namespace {

using namespace replen::cli;

const std::map<std::string, OutputFormat> kFormats{{"csv", OutputFormat::csv},
                                                   {"json", OutputFormat::json}};

void add_model_flags(CLI::App* app, CommonOptions& opts) {
  app->add_option("--k", opts.model.k, "stock size (units per replenishment)");
  app->add_option("--mu", opts.model.mu, "Poisson demand rate");
  app->add_option("--r", opts.model.r, "discount rate");
  app->add_option("--theta", opts.model.theta, "fixed payment per replenishment");
  app->add_option("--a", opts.model.a, "fixed cost per order (linear payment b*k - a)");
  app->add_option("--b", opts.model.b, "unit margin (linear payment b*k - a)");
  app->add_option("--growth", opts.model.growth, "cost inflation rate, below r");
  app->add_option("--out", opts.out, "output format")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
  app->add_option("--tol", opts.tol, "series truncation tolerance");
}

void add_curve_flags(CLI::App* app, CurveCommand& cmd) {
  app->set_help_flag("--help", "print this help message and exit");  // frees -h for --h
  add_model_flags(app, cmd.common);
  app->add_option("--method", cmd.method,
                  "series|volterra|laplace|asymptotic|exact_k1|mc|all");
  app->add_option("--t-max", cmd.t_max, "last time point");
  app->add_option("--step", cmd.step, "spacing of output times");
  app->add_option("--times", cmd.times, "explicit output times")->delimiter(',');
  app->add_option("--h", cmd.h, "Volterra quadrature step");
  app->add_option("--nodes", cmd.nodes, "Talbot contour nodes");
  app->add_flag("--with-mc", cmd.with_mc, "include Monte Carlo");
  app->add_option("--paths", cmd.paths, "Monte Carlo paths");
  app->add_option("--seed", cmd.seed, "Monte Carlo seed");
  app->add_option("--threads", cmd.threads, "worker threads (0 = default)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Expected present value of replenishment costs under Poisson demand"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  CommonOptions value_opts;
  auto* value = app.add_subcommand("value", "perpetual value v_k and derived constants");
  add_model_flags(value, value_opts);

  CurveCommand curve_cmd;
  auto* curve = app.add_subcommand("curve", "w_k(t) on a time grid");
  add_curve_flags(curve, curve_cmd);

  CurveCommand compare_cmd;
  compare_cmd.method = "all";
  auto* compare = app.add_subcommand("compare", "cross-validate series, Volterra, Laplace (and MC)");
  add_curve_flags(compare, compare_cmd);
  compare->add_option("--agree-tol", compare_cmd.agree_tol, "analytic agreement tolerance");
  compare->add_option("--mc-sigmas", compare_cmd.mc_sigmas, "stderr multiple beyond which Monte Carlo drift is reported");

  OptimizeCommand optimize_cmd;
  auto* optimize = app.add_subcommand("optimize", "stock size maximizing v_k for payment b*k - a");
  optimize->add_option("--a", optimize_cmd.a, "fixed cost per order")->required();
  optimize->add_option("--b", optimize_cmd.b, "unit margin")->required();
  optimize->add_option("--mu", optimize_cmd.mu, "Poisson demand rate")->required();
  optimize->add_option("--r", optimize_cmd.r, "discount rate")->required();
  optimize->add_option("--k-max", optimize_cmd.k_max, "largest stock size scanned");
  optimize->add_option("--out", optimize_cmd.out, "output format")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));

  OutputFormat table_format = OutputFormat::csv;
  auto* table = app.add_subcommand("paper-table", "reference table with erratum diagnosis");
  table->add_option("--out", table_format, "output format")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));

  SimulateCommand simulate_cmd;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of w_k(t) or v_k");
  add_model_flags(simulate, simulate_cmd.common);
  simulate->add_option("--horizon", simulate_cmd.horizon, "time horizon t");
  simulate->add_flag("--perpetual", simulate_cmd.perpetual, "simulate V_k = W_k(inf)");
  simulate->add_option("--paths", simulate_cmd.paths, "number of paths");
  simulate->add_option("--seed", simulate_cmd.seed, "seed");
  simulate->add_option("--tail-tol", simulate_cmd.tail_tol, "discount factor stopping threshold");
  simulate->add_option("--threads", simulate_cmd.threads, "worker threads (0 = default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  std::ostream& out = std::cout;
  std::ostream& err = std::cerr;
  if (*value) return cmd_value(value_opts, out, err);
  if (*curve) return cmd_curve(curve_cmd, out, err);
  if (*compare) return cmd_compare(compare_cmd, out, err);
  if (*optimize) return cmd_optimize(optimize_cmd, out, err);
  if (*table) return cmd_paper_table(table_format, out, err);
  if (*simulate) return cmd_simulate(simulate_cmd, out, err);
  return 2;
}
