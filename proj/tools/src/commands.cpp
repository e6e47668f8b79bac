#include "maxplus_cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include <maxplus/oracle.hpp>
#include <maxplus/pruning.hpp>
#include <maxplus/semigroup.hpp>

#include "maxplus_cli/bench.hpp"
#include "maxplus_cli/suites.hpp"

namespace maxplus::cli {

namespace fs = std::filesystem;

namespace {

// Input problems detected before any output is written.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ConfigMap config_of(const GlobalOptions& g) {
  if (g.config.empty()) return {};
  if (!fs::exists(g.config)) throw UsageError("config file '" + g.config + "' not found");
  try {
    return load_config(g.config);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

const std::string* lookup(const ConfigMap& cfg, const char* key) {
  auto it = cfg.find(key);
  return it == cfg.end() ? nullptr : &it->second;
}

std::vector<std::size_t> parse_sizes(const std::string& s) {
  std::vector<std::size_t> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(static_cast<std::size_t>(std::stoul(item)));
  }
  return out;
}

fs::path prepare_out(const GlobalOptions& g) {
  const fs::path dir(g.out);
  fs::create_directories(dir);
  return dir;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
  return os;
}

BasisSet metric_source(const GlobalOptions& g, const MetricOptions& o, const ConfigMap& cfg) {
  std::string source = o.instance;
  if (source.empty()) {
    auto v = lookup(cfg, "instance");
    source = v ? *v : "synthetic";
  }
  if (source == "synthetic") {
    const std::size_t n = lookup(cfg, "n") ? std::stoul(*lookup(cfg, "n")) : 2;
    const std::size_t m = lookup(cfg, "m") ? std::stoul(*lookup(cfg, "m")) : 8;
    return random_instance(n, m, g.seed);
  }
  if (source == "propagation") {
    const std::size_t step = lookup(cfg, "step") ? std::stoul(*lookup(cfg, "step")) : 3;
    return harvest_propagation(problem_from_config(cfg), step, g.seed);
  }
  if (!fs::exists(source)) throw UsageError("instance file '" + source + "' not found");
  try {
    return load_basis_set(source);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

template <class F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kAccuracy;
  }
}

}  // namespace

int cmd_metric(const GlobalOptions& g, const MetricOptions& o) {
  return guarded([&] {
    const ConfigMap cfg = config_of(g);
    const BasisSet S = metric_source(g, o, cfg);
    if (o.j >= S.size()) throw UsageError("candidate index out of range");
    PruningConfig pc = pruning_from_config(cfg);
    std::vector<std::string> solvers = o.solvers;
    if (solvers.empty()) solvers.push_back(to_string(pc.solver));
    std::vector<MetricSolver> parsed;
    for (const auto& s : solvers) parsed.push_back(parse_metric_solver(s));

    std::vector<std::pair<std::string, MetricResult>> rows;
    for (MetricSolver s : parsed) {
      pc.solver = s;
      rows.emplace_back(to_string(s), importance_metric(S, o.j, pc));
    }
    const fs::path dir = prepare_out(g);
    std::ofstream os = open_out(dir / "metric.csv");
    std::ostringstream table;
    table << "solver,j,value,dual_bound,gap,iterations,wall_time_s,status\n";
    bool flagged = false;
    for (const auto& [name, r] : rows) {
      table << name << ',' << r.j << ',' << format_double(r.value) << ',' << format_double(r.dual_bound) << ','
            << format_double(r.gap) << ',' << r.iterations << ',' << r.wall_time_s << ',' << to_string(r.status)
            << '\n';
      flagged = flagged || r.status != MetricStatus::kConverged;
    }
    os << table.str();
    std::cout << table.str();
    return flagged ? kAccuracy : kOk;
  });
}

int cmd_bench(const GlobalOptions& g, const BenchOptions& o) {
  return guarded([&] {
    const ConfigMap cfg = config_of(g);
    BenchConfig bc;
    bc.seed = g.seed;
    bc.bundle = pruning_from_config(cfg).bundle;
    if (auto v = lookup(cfg, "sweep")) bc.sweep = parse_sizes(*v);
    if (auto v = lookup(cfg, "reps")) bc.reps = std::stoi(*v);
    if (auto v = lookup(cfg, "n")) bc.n = std::stoul(*v);
    if (g.quick) {
      bc.sweep = {100, 200, 400};
      bc.reps = 2;
    }
    if (!o.sweep.empty()) bc.sweep = o.sweep;
    if (o.reps > 0) bc.reps = o.reps;
    if (bc.sweep.empty()) throw UsageError("empty m sweep");

    const auto rows = run_bench(bc);
    const BenchSummary s = summarize_bench(rows);
    const fs::path dir = prepare_out(g);
    {
      std::ofstream os = open_out(dir / "bench.csv");
      write_bench_csv(os, rows);
    }
    {
      std::ofstream os = open_out(dir / "bench_summary.csv");
      write_summary_csv(os, s);
    }
    {
      std::ofstream os = open_out(dir / "time_vs_m.csv");
      write_figure_csv(os, s, false);
    }
    {
      std::ofstream os = open_out(dir / "k0_vs_m.csv");
      write_figure_csv(os, s, true);
    }
    if (o.svg) {
      std::ofstream a = open_out(dir / "time_vs_m.svg");
      write_figure_svg(a, s, false);
      std::ofstream b = open_out(dir / "k0_vs_m.svg");
      write_figure_svg(b, s, true);
    }
    std::size_t flagged = 0;
    for (const auto& r : rows) flagged += r.flagged;
    nlohmann::json j;
    j["n"] = bc.n;
    j["reps"] = bc.reps;
    j["sweep"] = bc.sweep;
    j["seed"] = bc.seed;
    j["bundle"] = {{"mu", bc.bundle.mu}, {"epsilon", bc.bundle.epsilon}, {"gamma", bc.bundle.gamma}};
    j["slope_bundle"] = s.slope_bundle;
    j["slope_dual"] = s.slope_dual;
    j["k0_ratio"] = s.k0_ratio;
    j["flagged_rows"] = flagged;
    {
      std::ofstream os = open_out(dir / "bench_summary.json");
      os << j.dump(2) << '\n';
    }
    std::cout << "m        solver  median_time_s  median_iters\n";
    for (const auto& r : s.rows) {
      std::cout << std::left << std::setw(9) << r.m << std::setw(8) << r.solver << std::setw(15) << r.median_time_s
                << r.median_iters << '\n';
    }
    std::cout << "slope bundle " << s.slope_bundle << ", slope dual " << s.slope_dual << ", K0 ratio "
              << s.k0_ratio << ", flagged rows " << flagged << '\n';
    return flagged ? kAccuracy : kOk;
  });
}

int cmd_propagate(const GlobalOptions& g, const PropagateOptions& o) {
  return guarded([&] {
    ConfigMap cfg = config_of(g);
    if (o.budget) cfg["budget"] = *o.budget;
    if (o.mode) cfg["mode"] = *o.mode;
    if (o.steps) cfg["steps"] = std::to_string(*o.steps);
    const GateSynthesisProblem problem = problem_from_config(cfg);
    const PruningConfig pruner = pruning_from_config(cfg);

    const PropagationReport report = propagate_with_pruning(problem, pruner);
    const fs::path dir = prepare_out(g);
    {
      std::ofstream os = open_out(dir / "steps.csv");
      write_steps_csv(os, report.steps);
    }
    save_basis_set((dir / "final.bset").string(), report.final_set);
    {
      std::ofstream os = open_out(dir / "report.json");
      write_report_json(os, problem, pruner, report);
    }
    std::size_t failures = 0;
    for (const auto& s : report.steps) {
      failures += s.metric_failures;
      std::cout << "step " << s.step << ": " << s.count_before << " -> " << s.count_after << '\n';
    }
    std::cout << "final set: " << report.final_set.size() << " bases\n";
    return failures ? kAccuracy : kOk;
  });
}

int cmd_verify(const GlobalOptions& g, const VerifyOptions& o) {
  return guarded([&] {
    SuiteOptions opt;
    opt.seed = g.seed;
    opt.quick = g.quick;
    opt.tol = o.tol;
    const auto results = run_battery(opt);
    const fs::path dir = prepare_out(g);
    std::ofstream csv = open_out(dir / "verify.csv");
    csv << "suite,passed,seconds,detail\n";
    bool all = true;
    for (const auto& r : results) {
      all = all && r.passed;
      std::cout << std::left << std::setw(20) << r.name << (r.passed ? "PASS  " : "FAIL  ") << std::setw(9)
                << std::fixed << std::setprecision(2) << r.seconds << std::defaultfloat << r.detail << '\n';
      csv << r.name << ',' << (r.passed ? 1 : 0) << ',' << r.seconds << ",\"" << r.detail << "\"\n";
      if (!r.dumps.empty()) {
        fs::create_directories(dir / "dumps");
        for (std::size_t k = 0; k < r.dumps.size(); ++k) {
          std::ofstream os = open_out(dir / "dumps" / (r.name + "_" + std::to_string(k) + ".txt"));
          os << r.dumps[k];
        }
        std::cout << "  " << r.dumps.size() << " counterexample(s) in " << (dir / "dumps").string() << '\n';
      }
    }
    return all ? kOk : kAccuracy;
  });
}

}  // namespace maxplus::cli
