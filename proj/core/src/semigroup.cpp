#include "maxplus/semigroup.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace maxplus {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

CMat load_matrix_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open matrix file '" + path + "'");
  return read_matrix(is);
}

}  // namespace

void GateSynthesisProblem::validate() const {
  if (n == 0) throw std::invalid_argument("problem: n must be positive");
  if (generators.empty()) throw std::invalid_argument("problem: no generators");
  if (r_diag.size() != generators.size()) {
    throw std::invalid_argument("problem: r_diag length must equal the generator count");
  }
  for (const auto& H : generators) {
    if (static_cast<std::size_t>(H.rows()) != n || H.rows() != H.cols()) {
      throw std::invalid_argument("problem: generator dimension differs from n");
    }
    require_finite(H, "generator");
    if (!is_hermitian(H)) throw std::invalid_argument("problem: generator is not Hermitian");
  }
  for (double r : r_diag) {
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("problem: R entries must be positive");
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("problem: tau must be positive");
  if (static_cast<std::size_t>(target.rows()) != n || !is_unitary(target)) {
    throw std::invalid_argument("problem: target must be an n x n unitary");
  }
  if (horizon_steps == 0) throw std::invalid_argument("problem: steps must be positive");
}

std::vector<CMat> pauli_generators() {
  const Complex i(0.0, 1.0);
  CMat x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, -i, i, 0;
  z << 1, 0, 0, -1;
  return {x, y, z};
}

std::vector<CMat> gell_mann_generators() {
  const Complex i(0.0, 1.0);
  std::vector<CMat> g(8, CMat::Zero(3, 3));
  g[0](0, 1) = g[0](1, 0) = 1.0;
  g[1](0, 1) = -i;
  g[1](1, 0) = i;
  g[2](0, 0) = 1.0;
  g[2](1, 1) = -1.0;
  g[3](0, 2) = g[3](2, 0) = 1.0;
  g[4](0, 2) = -i;
  g[4](2, 0) = i;
  g[5](1, 2) = g[5](2, 1) = 1.0;
  g[6](1, 2) = -i;
  g[6](2, 1) = i;
  const double s = 1.0 / std::sqrt(3.0);
  g[7](0, 0) = s;
  g[7](1, 1) = s;
  g[7](2, 2) = -2.0 * s;
  return g;
}

std::vector<CMat> two_qubit_generators() {
  const auto p = pauli_generators();
  const CMat id = CMat::Identity(2, 2);
  return {kron(p[0], id), kron(p[1], id), kron(p[2], id),
          kron(id, p[0]), kron(id, p[1]), kron(id, p[2]), kron(p[2], p[2])};
}

CMat preset_target(const std::string& name, std::size_t n) {
  const auto dim = static_cast<Eigen::Index>(n);
  const Complex i(0.0, 1.0);
  if (name == "identity") return CMat::Identity(dim, dim);
  if (name == "hadamard") {
    if (n != 2) throw std::invalid_argument("target 'hadamard' requires n = 2");
    CMat h(2, 2);
    h << 1, 1, 1, -1;
    return (i / std::sqrt(2.0)) * h;  // determinant 1
  }
  if (name == "cnot") {
    if (n != 4) throw std::invalid_argument("target 'cnot' requires n = 4");
    CMat c = CMat::Zero(4, 4);
    c(0, 0) = c(1, 1) = c(2, 3) = c(3, 2) = 1.0;
    return std::polar(1.0, std::numbers::pi / 4.0) * c;  // determinant 1
  }
  throw std::invalid_argument("unknown target preset '" + name + "'");
}

GateSynthesisProblem default_su2_problem() {
  GateSynthesisProblem p;
  p.n = 2;
  p.generators = pauli_generators();
  p.r_diag = {1.0, 1.0, 1.0};
  p.tau = 0.2;
  p.target = preset_target("hadamard", 2);
  p.horizon_steps = 4;
  return p;
}

GateSynthesisProblem default_su4_problem() {
  GateSynthesisProblem p;
  p.n = 4;
  p.generators = two_qubit_generators();
  p.r_diag.assign(p.generators.size(), 1.0);
  p.tau = 0.2;
  p.target = preset_target("cnot", 4);
  p.horizon_steps = 3;
  return p;
}

BasisSet terminal_basis(const GateSynthesisProblem& problem) {
  problem.validate();
  AffineBasis b{-problem.target, static_cast<double>(problem.n)};
  return BasisSet({b}, {std::string()});
}

std::vector<Propagator> build_propagators(const GateSynthesisProblem& problem) {
  problem.validate();
  const auto n = static_cast<Eigen::Index>(problem.n);
  std::vector<Propagator> props;
  props.push_back({CMat::Identity(n, n), 0.0, 0});
  for (std::size_t k = 0; k < problem.generators.size(); ++k) {
    props.push_back({unitary_propagator(problem.generators[k], problem.tau),
                     problem.tau * std::sqrt(problem.r_diag[k]), k + 1});
  }
  return props;
}

BasisSet propagate_step(const BasisSet& S, const std::vector<Propagator>& props) {
  if (props.empty()) throw std::invalid_argument("propagate_step: no propagators");
  std::vector<AffineBasis> out;
  std::vector<std::string> labels;
  out.reserve(S.size() * props.size());
  labels.reserve(S.size() * props.size());
  for (const auto& g : props) {
    if (static_cast<std::size_t>(g.G.rows()) != S.dim()) {
      throw std::invalid_argument("propagate_step: propagator dimension mismatch");
    }
    for (std::size_t i = 0; i < S.size(); ++i) {
      out.push_back({g.G * S[i].P, S[i].c + g.cost_increment});
      const std::string prev = S.label(i);
      labels.push_back(prev.empty() ? std::to_string(g.m) : prev + "." + std::to_string(g.m));
    }
  }
  return BasisSet(std::move(out), std::move(labels));
}

PropagationReport propagate_with_pruning(const GateSynthesisProblem& problem,
                                         const PruningConfig& pruner, bool keep_all) {
  problem.validate();
  const auto props = build_propagators(problem);
  BasisSet current = terminal_basis(problem);
  PropagationReport report;
  for (std::size_t step = 1; step <= problem.horizon_steps; ++step) {
    const auto t0 = Clock::now();
    BasisSet next = propagate_step(current, props);
    StepRecord rec;
    rec.step = step;
    rec.count_before = next.size();
    rec.min_metric = std::numeric_limits<double>::quiet_NaN();
    rec.max_metric = std::numeric_limits<double>::quiet_NaN();

    const bool over_budget = pruner.budget > 0 && next.size() > pruner.budget;
    const bool needs_metrics = pruner.mode != PruneMode::kTopK || over_budget;
    if (needs_metrics && next.size() > 1) {
      const auto tp = Clock::now();
      const auto metrics = compute_metrics(next, pruner);
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (const auto& r : metrics) {
        if (r.status == MetricStatus::kInfeasibleAccuracy && !std::isfinite(r.value)) {
          ++rec.metric_failures;
          continue;
        }
        lo = std::min(lo, r.value);
        hi = std::max(hi, r.value);
      }
      if (std::isfinite(lo)) {
        rec.min_metric = lo;
        rec.max_metric = hi;
      }
      auto [kept, prune_report] = prune(next, metrics, pruner);
      next = std::move(kept);
      rec.pruned = true;
      rec.prune_time_s = seconds_since(tp);
    }
    rec.count_after = next.size();
    rec.step_time_s = seconds_since(t0);
    report.steps.push_back(rec);
    if (keep_all) report.sets.push_back(next);
    current = std::move(next);
  }
  report.final_set = current;
  if (!keep_all) report.sets.push_back(current);
  return report;
}

void write_steps_csv(std::ostream& os, const std::vector<StepRecord>& steps) {
  os << "step,count_before,count_after,min_metric,max_metric,prune_time_s\n";
  for (const auto& s : steps) {
    os << s.step << ',' << s.count_before << ',' << s.count_after << ','
       << format_double(s.min_metric) << ',' << format_double(s.max_metric) << ','
       << s.prune_time_s << '\n';
  }
}

void write_report_json(std::ostream& os, const GateSynthesisProblem& problem,
                       const PruningConfig& pruner, const PropagationReport& report) {
  nlohmann::json j;
  j["n"] = problem.n;
  j["generators"] = problem.generators.size();
  j["tau"] = problem.tau;
  j["steps"] = problem.horizon_steps;
  j["budget"] = pruner.budget;
  j["mode"] = to_string(pruner.mode);
  j["solver"] = to_string(pruner.solver);
  j["bundle"] = {{"mu", pruner.bundle.mu},
                 {"epsilon", pruner.bundle.epsilon},
                 {"gamma", pruner.bundle.gamma}};
  auto& rows = j["per_step"] = nlohmann::json::array();
  for (const auto& s : report.steps) {
    nlohmann::json r{{"step", s.step},
                     {"count_before", s.count_before},
                     {"count_after", s.count_after},
                     {"prune_time_s", s.prune_time_s},
                     {"step_time_s", s.step_time_s},
                     {"metric_failures", s.metric_failures},
                     {"pruned", s.pruned}};
    r["min_metric"] = std::isfinite(s.min_metric) ? nlohmann::json(s.min_metric) : nlohmann::json();
    r["max_metric"] = std::isfinite(s.max_metric) ? nlohmann::json(s.max_metric) : nlohmann::json();
    rows.push_back(std::move(r));
  }
  j["final_count"] = report.final_set.size();
  os << j.dump(2) << '\n';
}

ConfigMap read_config(std::istream& is) {
  ConfigMap cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find_first_of("=:");
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    cfg[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return cfg;
}

ConfigMap load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config '" + path + "'");
  return read_config(is);
}

GateSynthesisProblem problem_from_config(const ConfigMap& cfg) {
  auto get = [&](const char* key) -> const std::string* {
    auto it = cfg.find(key);
    return it == cfg.end() ? nullptr : &it->second;
  };
  GateSynthesisProblem p = default_su2_problem();
  if (auto v = get("n")) p.n = static_cast<std::size_t>(std::stoul(*v));
  if (auto v = get("generators")) {
    if (*v == "pauli") {
      p.generators = pauli_generators();
    } else if (*v == "gellmann") {
      p.generators = gell_mann_generators();
    } else if (*v == "two_qubit") {
      p.generators = two_qubit_generators();
    } else {
      p.generators.clear();
      for (const auto& path : split_list(*v)) p.generators.push_back(load_matrix_file(path));
    }
    p.r_diag.assign(p.generators.size(), 1.0);
  } else if (p.n != 2) {
    if (p.n == 3) p.generators = gell_mann_generators();
    else if (p.n == 4) p.generators = two_qubit_generators();
    else throw std::invalid_argument("config: generators required for n = " + std::to_string(p.n));
    p.r_diag.assign(p.generators.size(), 1.0);
  }
  if (auto v = get("r_diag")) {
    p.r_diag.clear();
    for (const auto& item : split_list(*v)) p.r_diag.push_back(parse_double(item));
  }
  if (auto v = get("tau")) p.tau = parse_double(*v);
  if (auto v = get("steps")) p.horizon_steps = static_cast<std::size_t>(std::stoul(*v));
  if (auto v = get("target")) {
    if (*v == "identity" || *v == "hadamard" || *v == "cnot") {
      p.target = preset_target(*v, p.n);
    } else {
      p.target = load_matrix_file(*v);
    }
  } else if (p.n != 2) {
    p.target = p.n == 4 ? preset_target("cnot", 4) : preset_target("identity", p.n);
  }
  p.validate();
  return p;
}

PruningConfig pruning_from_config(const ConfigMap& cfg) {
  PruningConfig c;
  for (const auto& [key, value] : cfg) {
    if (key == "budget") {
      c.budget = value == "unlimited" ? 0 : static_cast<std::size_t>(std::stoul(value));
    } else if (key == "mode") {
      c.mode = parse_prune_mode(value);
    } else if (key == "solver") {
      c.solver = parse_metric_solver(value);
    } else if (key == "mu") {
      c.bundle.mu = parse_double(value);
    } else if (key == "epsilon") {
      c.bundle.epsilon = parse_double(value);
    } else if (key == "gamma") {
      c.bundle.gamma = parse_double(value);
    } else if (key == "max_outer") {
      c.bundle.max_outer = std::stoi(value);
    } else if (key == "inner") {
      if (value == "barrier") c.bundle.inner.method = InnerMethod::kBarrier;
      else if (value == "smoothing") c.bundle.inner.method = InnerMethod::kSmoothing;
      else throw std::invalid_argument("config: unknown inner method '" + value + "'");
    } else if (key == "gap_tol") {
      c.gap_tol = parse_double(value);
      c.bundle.gap_tol = c.gap_tol;
    } else if (key == "safety_margin") {
      c.safety_margin = parse_double(value);
    } else if (key == "dual_max_iter") {
      c.dual.max_iter = std::stoi(value);
    } else if (key == "grid_per_axis") {
      c.oracle.grid_per_axis = std::stoi(value);
    } else if (key == "threads") {
      c.threads = static_cast<unsigned>(std::stoul(value));
    }
  }
  return c;
}

}  // namespace maxplus
