#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mfg/analysis.hpp"

namespace mfg {

struct StudyConfig {
  std::string problem = "manufactured";
  std::vector<int> levels{1, 2, 3, 4, 5, 6};
  double weight_factor = 1.0;
  /// Explicit step; the default rule is tau_k = 1 / (2^k + 1).
  std::optional<double> tau;
  SolverOptions solver;
  ErrorOptions errors;
  std::string output;
  std::uint64_t seed = 1;
  /// 0 = hardware concurrency.
  int threads = 0;

  /// Throws ValidationError on empty or non-ascending levels.
  void validate() const;
};

/// Reads `key = value` lines ('#' starts a comment) into a map.
std::map<std::string, std::string> read_key_values(std::istream& in);
/// Applies known keys to the config; unknown keys throw ValidationError.
void apply_settings(StudyConfig& config, const std::map<std::string, std::string>& settings);

/// Mesh n = 2^k and N = 2^k + 1 slabs over [0, T] (or T / tau slabs).
int level_subdivisions(int level);
TimeGrid level_grid(int level, double horizon, const std::optional<double>& tau);

ProblemSpec make_problem(const std::string& name);

struct LevelResult {
  int level = 0;
  int n = 0;
  double h = 0.0;
  double tau = 0.0;
  int num_slabs = 0;
  bool converged = false;
  int outer_iterations = 0;
  std::vector<double> residual_history;
  std::optional<ErrorReport> errors;  // manufactured problem only
  double max_picard_ratio = 0.0;
  double gamma = 0.0;
  ResidualReport residuals;
  std::string failure;
};

LevelResult run_level(const StudyConfig& config, int level);

/// Runs all levels, concurrently up to `config.threads` (or MFG_THREADS when
/// set); results are ordered by level.
std::vector<LevelResult> run_study(const StudyConfig& config);

/// Worker count: MFG_THREADS when set and positive, else `requested`, else
/// hardware concurrency.
int worker_count(int requested);

/// %.7g.
std::string format_number(double v);

inline constexpr const char* kCsvHeader =
    "level,n,h,tau,Nk,outer_iters,rel_u_L2H1,rel_b_L2L2,rel_m_L2L2,rel_m_L2H1,rel_u0_L2,rel_mT_L2";

/// Header, one row per level and one `eoc` row per consecutive pair.
void write_csv(std::ostream& out, const std::vector<LevelResult>& results);

}  // namespace mfg
