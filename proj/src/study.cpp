#include "mfg/study.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "mfg/error.hpp"

namespace mfg {

void StudyConfig::validate() const {
  if (levels.empty()) throw ValidationError("study: no levels given");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 1) throw ValidationError("study: levels must be positive");
    if (i > 0 && levels[i] <= levels[i - 1]) throw ValidationError("study: levels must be ascending");
  }
  if (!(weight_factor > 0.0)) throw ValidationError("study: weight factor must be positive");
  if (tau && !(*tau > 0.0)) throw ValidationError("study: tau must be positive");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw ValidationError("config: bad number for " + key + ": " + v);
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d)) throw ValidationError("config: expected an integer for " + key);
  return static_cast<int>(d);
}

std::vector<int> to_levels(const std::string& v) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    const auto dash = item.find('-');
    if (dash != std::string::npos && dash > 0) {
      const int a = to_int("levels", item.substr(0, dash));
      const int b = to_int("levels", item.substr(dash + 1));
      for (int k = a; k <= b; ++k) out.push_back(k);
    } else if (!item.empty()) {
      out.push_back(to_int("levels", item));
    }
  }
  return out;
}

}  // namespace

std::map<std::string, std::string> read_key_values(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config: line " + std::to_string(lineno) + " is not key=value");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

void apply_settings(StudyConfig& c, const std::map<std::string, std::string>& settings) {
  for (const auto& [key, value] : settings) {
    if (key == "problem") c.problem = value;
    else if (key == "levels") c.levels = to_levels(value);
    else if (key == "weight_factor" || key == "c_w") c.weight_factor = to_double(key, value);
    else if (key == "tau") c.tau = to_double(key, value);
    else if (key == "tol_fp") c.solver.tol_fp = to_double(key, value);
    else if (key == "max_outer") c.solver.max_outer = to_int(key, value);
    else if (key == "relaxation") c.solver.relaxation = to_double(key, value);
    else if (key == "tol_picard") c.solver.hjb.tol_picard = to_double(key, value);
    else if (key == "max_picard") c.solver.hjb.max_picard = to_int(key, value);
    else if (key == "linear_tol") c.solver.linear_tol = to_double(key, value);
    else if (key == "policy_iteration") c.solver.hjb.policy_iteration = value == "1" || value == "true";
    else if (key == "h1_norm") {
      if (value == "full") c.errors.h1 = H1Kind::Full;
      else if (value == "seminorm") c.errors.h1 = H1Kind::Seminorm;
      else throw ValidationError("config: h1_norm must be full or seminorm");
    } else if (key == "time_sampling") {
      if (value == "nodal") c.errors.sampling = TimeSampling::Nodal;
      else if (value == "gauss") c.errors.sampling = TimeSampling::Gauss;
      else throw ValidationError("config: time_sampling must be nodal or gauss");
    } else if (key == "output") c.output = value;
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(to_int(key, value));
    else if (key == "threads") c.threads = to_int(key, value);
    else throw ValidationError("config: unknown key " + key);
  }
}

int level_subdivisions(int level) {
  if (level < 1 || level > 20) throw ValidationError("level out of range");
  return 1 << level;
}

TimeGrid level_grid(int level, double horizon, const std::optional<double>& tau) {
  if (tau) {
    const double slabs = horizon / *tau;
    const int N = static_cast<int>(std::lround(slabs));
    if (N < 1 || std::abs(slabs - N) > 1e-9 * slabs) {
      throw ValidationError("tau must divide the time horizon");
    }
    return TimeGrid(horizon, N);
  }
  // tau_k = h_k / ((1 + 2^-k) sqrt 2) = 1 / (2^k + 1) on the unit horizon
  const double step = 1.0 / (level_subdivisions(level) + 1);
  return TimeGrid(horizon, static_cast<int>(std::lround(horizon / step)));
}

ProblemSpec make_problem(const std::string& name) {
  if (name == "manufactured") return manufactured().spec;
  if (name == "trivial") return trivial_problem();
  throw ValidationError("unknown problem: " + name);
}

LevelResult run_level(const StudyConfig& config, int level) {
  LevelResult r;
  r.level = level;
  r.n = level_subdivisions(level);
  const bool has_exact = config.problem == "manufactured";
  const ManufacturedProblem mp = manufactured();
  const ProblemSpec problem = has_exact ? mp.spec : make_problem(config.problem);

  auto mesh = std::make_shared<const Mesh>(generate_uniform_unit_square(r.n));
  const FeSpace fes(mesh);
  const TimeGrid grid = level_grid(level, problem.horizon, config.tau);
  r.h = mesh->max_h();
  r.tau = grid.tau();
  r.num_slabs = grid.num_slabs();
  const double lh = problem.hamiltonian.lipschitz();
  r.gamma = std::sqrt((1.0 + lh * lh * grid.tau() / problem.nu) / 2.0);
  const EdgeWeights weights = default_weights(*mesh, lh, config.weight_factor);

  try {
    const MfgSolution sol = solve(problem, fes, grid, weights, config.solver);
    r.converged = sol.converged;
    r.outer_iterations = sol.outer_iterations;
    r.residual_history = sol.residual_history;
    for (double q : sol.hjb.increment_ratios) r.max_picard_ratio = std::max(r.max_picard_ratio, q);
    r.residuals = residual_audit(sol, problem, fes, grid, weights);
    if (has_exact) r.errors = error_norms(sol, mp.exact, fes, grid, config.errors);
  } catch (const NonConvergence& e) {
    r.converged = false;
    r.residual_history = e.history();
    r.outer_iterations = static_cast<int>(e.history().size());
    r.failure = e.what();
  }
  return r;
}

int worker_count(int requested) {
  if (const char* env = std::getenv("MFG_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<LevelResult> run_study(const StudyConfig& config) {
  config.validate();
  const int count = static_cast<int>(config.levels.size());
  std::vector<LevelResult> results(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<int> next{0};
  // finest levels first so the longest job starts immediately
  auto worker = [&] {
    for (int i; (i = next.fetch_add(1)) < count;) {
      const int idx = count - 1 - i;
      try {
        results[idx] = run_level(config, config.levels[idx]);
      } catch (...) {
        errors[idx] = std::current_exception();
      }
    }
  };
  const int workers = std::min(worker_count(config.threads), count);
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.7g", v);
  return buf;
}

void write_csv(std::ostream& out, const std::vector<LevelResult>& results) {
  out << kCsvHeader << '\n';
  auto cell = [](const std::optional<ErrorReport>& e, int c) {
    return e ? format_number(e->column(c)) : std::string("nan");
  };
  for (const LevelResult& r : results) {
    out << r.level << ',' << r.n << ',' << format_number(r.h) << ',' << format_number(r.tau) << ',' << r.num_slabs
        << ',' << r.outer_iterations;
    for (int c = 0; c < ErrorReport::kColumns; ++c) out << ',' << (r.converged ? cell(r.errors, c) : "nan");
    out << '\n';
  }
  for (std::size_t i = 0; i + 1 < results.size(); ++i) {
    const LevelResult& a = results[i];
    const LevelResult& b = results[i + 1];
    out << "eoc," << a.level << '-' << b.level << ",,,,";
    for (int c = 0; c < ErrorReport::kColumns; ++c) {
      std::optional<double> q;
      if (a.converged && b.converged && a.errors && b.errors) q = rate(a.errors->column(c), b.errors->column(c));
      out << ',' << (q ? format_number(*q) : std::string("nan"));
    }
    out << '\n';
  }
}

}  // namespace mfg
