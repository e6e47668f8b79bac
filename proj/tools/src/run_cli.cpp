#include <CLI11.hpp>

#include "maxplus_cli/commands.hpp"

namespace maxplus::cli {

int run_cli(int argc, char** argv) {
  CLI::App app{"Max-plus basis pruning: importance metrics, propagation, benchmarks and verification"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config, "key = value configuration file");
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--out", g.out, "output directory")->capture_default_str();
  app.add_flag("--quick", g.quick, "reduced sizes");

  MetricOptions mo;
  auto* metric = app.add_subcommand("metric", "importance metric of one basis");
  metric->add_option("--instance", mo.instance, "basis-set file");
  metric->add_option("--j", mo.j, "candidate index")->capture_default_str();
  metric->add_option("--solver", mo.solvers, "bundle | dual | oracle (repeatable)");

  BenchOptions bo;
  auto* bench = app.add_subcommand("bench", "time and iteration sweep over m");
  bench->add_option("--m", bo.sweep, "sweep values")->delimiter(',');
  bench->add_option("--reps", bo.reps, "repetitions per m");
  bench->add_flag("--svg", bo.svg, "also write SVG charts");

  PropagateOptions po;
  auto* propagate = app.add_subcommand("propagate", "propagation with pruning");
  propagate->add_option("--budget", po.budget, "kept bases per step, or 'unlimited'");
  propagate->add_option("--steps", po.steps, "horizon");
  propagate->add_option("--mode", po.mode, "keep-top-k | drop-negative | both");

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "seeded verification battery");
  verify->add_option("--tol", vo.tol, "replace every pass threshold (harness self-test)");

  for (auto* sub : {metric, bench, propagate, verify}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  if (*metric) return cmd_metric(g, mo);
  if (*bench) return cmd_bench(g, bo);
  if (*propagate) return cmd_propagate(g, po);
  return cmd_verify(g, vo);
}

}  // namespace maxplus::cli
