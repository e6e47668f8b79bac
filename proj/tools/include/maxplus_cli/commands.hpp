#pragma once

#include <optional>
#include <string>
#include <vector>

namespace maxplus::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kAccuracy = 2 };

struct GlobalOptions {
  std::string config;
  unsigned long long seed = 1;
  std::string out = "results";
  bool quick = false;
};

struct MetricOptions {
  std::string instance;  // basis-set file; empty = source from config
  std::size_t j = 0;
  std::vector<std::string> solvers;
};

struct BenchOptions {
  std::vector<std::size_t> sweep;
  int reps = 0;
  bool svg = false;
};

struct PropagateOptions {
  std::optional<std::string> budget;
  std::optional<std::size_t> steps;
  std::optional<std::string> mode;
};

struct VerifyOptions {
  std::optional<double> tol;
};

int cmd_metric(const GlobalOptions& g, const MetricOptions& o);
int cmd_bench(const GlobalOptions& g, const BenchOptions& o);
int cmd_propagate(const GlobalOptions& g, const PropagateOptions& o);
int cmd_verify(const GlobalOptions& g, const VerifyOptions& o);

/// Parses argv and dispatches; usage errors return kUsage.
int run_cli(int argc, char** argv);

}  // namespace maxplus::cli
