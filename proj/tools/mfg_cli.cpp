#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "mfg/error.hpp"
#include "mfg/study.hpp"
#include "mfg/verify.hpp"

using namespace mfg;

namespace {

enum Exit { kOk = 0, kFailure = 1, kValidation = 2, kIo = 3, kNonConvergence = 4 };

// Flags that map onto config keys; only the ones given on the command line
// override the config file.
struct ConfigFlags {
  std::string config_file;
  std::map<std::string, std::string> given;

  void add(CLI::App* cmd, const std::string& flag, const std::string& key, const std::string& help) {
    cmd->add_option_function<std::string>(flag, [this, key](const std::string& v) { given[key] = v; }, help);
  }

  StudyConfig load() const {
    StudyConfig c;
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw IoError("cannot open config file " + config_file);
      apply_settings(c, read_key_values(in));
    }
    apply_settings(c, given);
    return c;
  }
};

void add_solver_flags(CLI::App* cmd, ConfigFlags& f) {
  cmd->add_option("--config", f.config_file, "key=value config file");
  f.add(cmd, "--problem", "problem", "manufactured or trivial");
  f.add(cmd, "--weight-factor", "weight_factor", "stabilization weight factor c_w");
  f.add(cmd, "--tau", "tau", "explicit time step");
  f.add(cmd, "--tol-fp", "tol_fp", "outer fixed-point tolerance");
  f.add(cmd, "--max-outer", "max_outer", "outer iteration cap");
  f.add(cmd, "--relaxation", "relaxation", "under-relaxation of (u, m) in (0, 1]");
  f.add(cmd, "--tol-picard", "tol_picard", "HJB Picard tolerance");
  f.add(cmd, "--max-picard", "max_picard", "HJB Picard iteration cap");
  f.add(cmd, "--linear-tol", "linear_tol", "linear solver tolerance");
  f.add(cmd, "--time-sampling", "time_sampling", "error norms in time: nodal or gauss");
  f.add(cmd, "--h1-norm", "h1_norm", "L2(H1) errors: full or seminorm");
  f.add(cmd, "--seed", "seed", "random seed");
}

int cmd_mesh_check(int uniform, const std::string& file) {
  Mesh mesh = file.empty() ? generate_uniform_unit_square(uniform) : read_mesh_file(file);
  const MeshAudit a = audit(mesh);
  std::cout << "xz: " << (a.xz_pass ? "pass" : "fail") << '\n'
            << "worst_edge_cot_sum: " << format_number(a.worst_edge_cot_sum) << '\n'
            << "worst_edge: " << a.worst_edge << '\n'
            << "delta: " << format_number(a.shape_regularity_delta) << '\n'
            << "h: " << format_number(a.max_h) << '\n';
  return a.xz_pass ? kOk : kValidation;
}

void dump_field(const std::string& path, const FeSpace& fes, const SpaceTimeField& f) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "# slab dof x y value; slab -1 is the stored endpoint\n";
  auto rows = [&](int n, const Vector& v) {
    for (int i = 0; i < v.size(); ++i) {
      const Vec2& x = fes.mesh().vertex(fes.vertex_of(i));
      out << n << ' ' << i << ' ' << format_number(x.x()) << ' ' << format_number(x.y()) << ' '
          << format_number(v[i]) << '\n';
    }
  };
  rows(-1, f.endpoint());
  for (int n = 0; n < f.num_slabs(); ++n) rows(n, f.slab(n));
}

int cmd_solve(const StudyConfig& config, int level, const std::string& dump) {
  const bool has_exact = config.problem == "manufactured";
  const ManufacturedProblem mp = manufactured();
  const ProblemSpec problem = has_exact ? mp.spec : make_problem(config.problem);
  auto mesh = std::make_shared<const Mesh>(generate_uniform_unit_square(level_subdivisions(level)));
  const FeSpace fes(mesh);
  const TimeGrid grid = level_grid(level, problem.horizon, config.tau);
  const EdgeWeights weights = default_weights(*mesh, problem.hamiltonian.lipschitz(), config.weight_factor);

  std::cout << "problem: " << problem.name << '\n'
            << "level: " << level << " n: " << level_subdivisions(level) << " h: " << format_number(mesh->max_h())
            << " tau: " << format_number(grid.tau()) << " Nk: " << grid.num_slabs() << '\n';
  MfgSolution sol;
  try {
    sol = solve(problem, fes, grid, weights, config.solver);
  } catch (const NonConvergence& e) {
    std::cout << "converged: no\n";
    std::cout << "outer_iterations: " << e.history().size() << '\n';
    if (!e.history().empty()) std::cout << "last_change: " << format_number(e.history().back()) << '\n';
    std::cerr << e.what() << '\n';
    return kNonConvergence;
  }
  const ResidualReport res = residual_audit(sol, problem, fes, grid, weights);
  std::cout << "converged: yes\n"
            << "outer_iterations: " << sol.outer_iterations << '\n'
            << "last_change: " << format_number(sol.residual_history.back()) << '\n'
            << "kfp_residual: " << format_number(res.kfp_residual) << '\n'
            << "hjb_residual: " << format_number(res.hjb_residual) << '\n'
            << "min_m: " << format_number(res.min_density) << '\n'
            << "subgradient_slack: " << format_number(res.subgradient_slack) << '\n'
            << "picard_iterations: " << sol.hjb.total_iterations << '\n';
  if (has_exact) {
    const ErrorReport e = error_norms(sol, mp.exact, fes, grid, config.errors);
    static const char* names[] = {"rel_u_L2H1", "rel_b_L2L2", "rel_m_L2L2", "rel_m_L2H1", "rel_u0_L2", "rel_mT_L2"};
    for (int c = 0; c < ErrorReport::kColumns; ++c) std::cout << names[c] << ": " << format_number(e.column(c)) << '\n';
  }
  if (!dump.empty()) {
    dump_field(dump + "_u.txt", fes, sol.u);
    dump_field(dump + "_m.txt", fes, sol.m);
  }
  return kOk;
}

int cmd_converge(StudyConfig config, const std::string& levels, bool deep) {
  if (!levels.empty()) apply_settings(config, {{"levels", levels}});
  if (deep && levels.empty()) config.levels = {1, 2, 3, 4, 5, 6, 7, 8};
  const std::vector<LevelResult> results = run_study(config);
  if (config.output.empty()) {
    write_csv(std::cout, results);
  } else {
    std::ofstream out(config.output);
    if (!out) throw IoError("cannot write " + config.output);
    write_csv(out, results);
  }
  bool all = true;
  for (const LevelResult& r : results) {
    if (!r.converged) {
      all = false;
      std::cerr << "level " << r.level << ": " << r.failure << '\n';
    }
  }
  return all ? kOk : kNonConvergence;
}

int cmd_verify(const VerifyOptions& opts) {
  const std::vector<CheckResult> checks = run_verify(opts);
  bool all = true;
  bool weights_ok = true;
  for (const CheckResult& c : checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    all = all && c.passed;
    if (c.name == "weights" && !c.passed) weights_ok = false;
  }
  if (!weights_ok) return kValidation;
  return all ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monotone finite element solver for mean field games with nondifferentiable Hamiltonians"};
  app.require_subcommand(1);

  int uniform = 0;
  std::string mesh_file;
  auto* mesh_cmd = app.add_subcommand("mesh-check", "audit a mesh (exit 0 pass, 2 fail, 3 unreadable)");
  auto* uniform_opt = mesh_cmd->add_option("--uniform", uniform, "uniform n x n unit-square mesh")->check(CLI::PositiveNumber);
  auto* file_opt = mesh_cmd->add_option("--file", mesh_file, "mesh file");
  uniform_opt->excludes(file_opt);

  ConfigFlags solve_flags;
  int level = 2;
  std::string dump;
  auto* solve_cmd = app.add_subcommand("solve", "solve one level (exit 0 converged, 4 not converged)");
  add_solver_flags(solve_cmd, solve_flags);
  solve_cmd->add_option("--level", level, "mesh level k, n = 2^k")->check(CLI::Range(1, 12));
  solve_cmd->add_option("--dump", dump, "write <prefix>_u.txt and <prefix>_m.txt");

  ConfigFlags conv_flags;
  std::string levels;
  bool deep = false;
  auto* conv_cmd = app.add_subcommand("converge", "convergence study as CSV");
  add_solver_flags(conv_cmd, conv_flags);
  conv_cmd->add_option("--levels", levels, "levels, e.g. 1-6 or 2,3,4");
  conv_cmd->add_flag("--deep", deep, "levels 1-8");
  conv_flags.add(conv_cmd, "--output", "output", "CSV path (default stdout)");
  conv_flags.add(conv_cmd, "--threads", "threads", "worker threads (0 = auto; MFG_THREADS caps)");

  VerifyOptions vopts;
  auto* verify_cmd = app.add_subcommand("verify", "property suite");
  verify_cmd->add_option("--seed", vopts.seed, "random seed");
  verify_cmd->add_option("--break-weights", vopts.weight_factor, "weight factor c_w to use");
  verify_cmd->add_option("--n", vopts.subdivisions, "mesh subdivisions")->check(CLI::Range(2, 64));
  verify_cmd->add_option("--slabs", vopts.slabs, "time slabs")->check(CLI::Range(2, 1000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kValidation;
  }

  try {
    if (*mesh_cmd) {
      if (mesh_file.empty() && uniform == 0) throw ValidationError("mesh-check: give --uniform or --file");
      return cmd_mesh_check(uniform, mesh_file);
    }
    if (*solve_cmd) return cmd_solve(solve_flags.load(), level, dump);
    if (*conv_cmd) return cmd_converge(conv_flags.load(), levels, deep);
    if (*verify_cmd) return cmd_verify(vopts);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
