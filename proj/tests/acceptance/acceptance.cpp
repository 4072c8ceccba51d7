// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "mfg/analysis.hpp"
#include "mfg/manufactured.hpp"
#include "mfg/mfg_solver.hpp"
#include "mfg/study.hpp"
#include "mfg/verify.hpp"

using namespace mfg;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// reference relative errors, levels 1..5, columns in ErrorReport order
constexpr double kReference[5][6] = {
    {0.7006612, 0.6149608, 0.7018799, 0.7756508, 0.6241043, 0.7016681},
    {0.4321884, 0.4093697, 0.378799, 0.4737106, 0.2682495, 0.3803955},
    {0.2347566, 0.2559373, 0.1899179, 0.2608107, 0.1108376, 0.1911599},
    {0.1222251, 0.1331117, 0.09433648, 0.1365934, 0.0480436, 0.0950924},
    {0.06239205, 0.07477188, 0.04696553, 0.06991479, 0.02192813, 0.04734029},
};
const char* kNames[6] = {"u_L2H1", "b_L2L2", "m_L2L2", "m_L2H1", "u0_L2", "mT_L2"};

const CheckResult* find(const std::vector<CheckResult>& checks, const std::string& name) {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

void verify_pair(int id, const std::vector<CheckResult>& checks, const std::string& a, const std::string& b) {
  const CheckResult* x = find(checks, a);
  const CheckResult* y = find(checks, b);
  const bool ok = x && y && x->passed && y->passed;
  report(id, ok, (x ? a + ": " + x->detail : a + " missing") + "; " + (y ? b + ": " + y->detail : b + " missing"));
}

}  // namespace

int main() {
  // 1
  {
    const auto t0 = std::chrono::steady_clock::now();
    const ManufacturedGate g = manufactured_gate(1, 1000, 10000);
    const double t = seconds_since(t0);
    const double worst = std::max({g.max_u_residual, g.max_m_residual, g.max_s_residual, g.max_derivative_mismatch});
    report(1, worst <= 1e-10 && g.min_source >= -1e-12 && t < 5.0,
           fmt("max residual %.3g, min G %.3g, %.2f s", worst, g.min_source, t));
  }

  // 2, 3, 10 share the study run
  StudyConfig config;
  config.levels = {1, 2, 3, 4, 5};
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<LevelResult> study = run_study(config);
  const double study_time = seconds_since(t0);
  {
    bool ok = true;
    std::string detail;
    for (const LevelResult& r : study) {
      if (!r.converged || !r.errors) {
        ok = false;
        detail += fmt(" k=%g not converged;", r.level);
        continue;
      }
      for (int c = 0; c < ErrorReport::kColumns; ++c) {
        const double ref = kReference[r.level - 1][c];
        const double dev = r.errors->column(c) / ref - 1.0;
        if (std::abs(dev) > 0.05) {
          ok = false;
          detail += " k=" + std::to_string(r.level) + " " + kNames[c] + fmt(" %.4g vs %.4g (%+.1f%%);", r.errors->column(c), ref, 100 * dev);
        }
      }
    }
    report(2, ok, (ok ? std::string("all 30 values within 5%") : detail) + fmt(", %.0f s", study_time));
  }
  {
    std::vector<ErrorReport> reports;
    for (const LevelResult& r : study)
      if (r.level >= 3 && r.errors) reports.push_back(*r.errors);
    bool ok = reports.size() == 3;
    std::string detail;
    const auto rows = eoc(reports);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (int c = 0; c < ErrorReport::kColumns; ++c) {
        const auto& q = rows[i][c];
        const bool in = q && *q >= 0.85 && *q <= 1.15;
        if (!in) {
          ok = false;
          detail += " " + std::to_string(i + 3) + "-" + std::to_string(i + 4) + " " + kNames[c] + fmt(" %.4f;", q ? *q : NAN);
        }
      }
    }
    report(3, ok, ok ? std::string("all rates in [0.85, 1.15]") : "outside band:" + detail);
  }

  // 4
  {
    const auto t = std::chrono::steady_clock::now();
    const double lo = dmp_trials(1, 20, 1.0);
    const double s = seconds_since(t);
    report(4, lo >= -1e-12 && s < 30.0, fmt("min density %.3g, %.2f s", lo, s));
  }

  // 5
  {
    double worst = 0.0;
    for (int k = 1; k <= 5; ++k) worst = std::max(worst, edge_identity_error(k, 1.0));
    report(5, worst <= 1e-12, fmt("max off-diagonal mismatch %.3g over levels 1-5", worst));
  }

  // 6, 7 from the property suite on n = 4, N = 5
  {
    const auto t = std::chrono::steady_clock::now();
    const std::vector<CheckResult> checks = run_verify(VerifyOptions{});
    const double s = seconds_since(t);
    verify_pair(6, checks, "integration-by-parts", "lumped-norm");
    verify_pair(7, checks, "inf-sup", "tech-inequality");
    std::printf("              (property suite %.1f s)\n", s);
  }

  // 8
  {
    StudyConfig c;
    const LevelResult r = run_level(c, 3);
    const double bound = std::sqrt((1.0 + r.tau) / 2.0) + 0.05;
    report(8, r.converged && r.max_picard_ratio <= bound,
           fmt("max Picard ratio %.4f, bound %.4f", r.max_picard_ratio, bound));
  }

  // 9
  {
    const ManufacturedProblem p = manufactured();
    const int n = level_subdivisions(3);
    const auto mesh = std::make_shared<const Mesh>(generate_uniform_unit_square(n));
    const FeSpace fes(mesh);
    const TimeGrid grid = level_grid(3, 1.0, std::nullopt);
    const EdgeWeights w = default_weights(*mesh, 1.0, 1.0);
    const MfgSolution a = solve(p.spec, fes, grid, w);
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    TransportField b0(grid.num_slabs(), mesh->num_triangles());
    for (int s = 0; s < b0.num_slabs(); ++s) {
      for (auto& v : b0.slab(s)) {
        const double ang = 2.0 * std::numbers::pi * unit(rng);
        v = std::sqrt(unit(rng)) * Vec2(std::cos(ang), std::sin(ang));
      }
    }
    SolverOptions opts;
    opts.initial_transport = b0;
    const MfgSolution b = solve(p.spec, fes, grid, w, opts);
    SpaceTimeField du = a.u, dm = a.m;
    for (int s = 0; s < du.num_slabs(); ++s) {
      du.slab(s) -= b.u.slab(s);
      dm.slab(s) -= b.m.slab(s);
    }
    const double eu = l2h1_norm(fes, grid, du) / l2h1_norm(fes, grid, a.u);
    const double em = l2l2_norm(fes, grid, dm) / l2l2_norm(fes, grid, a.m);
    report(9, a.converged && b.converged && std::max(eu, em) <= 1e-6,
           fmt("relative difference u %.3g, m %.3g", eu, em));
  }

  // 10
  {
    double worst = INFINITY;
    bool all = true;
    for (const LevelResult& r : study) {
      all = all && r.converged;
      worst = std::min(worst, r.residuals.subgradient_slack);
    }
    report(10, all && worst >= -1e-10, fmt("min subgradient slack %.3g over levels 1-5", worst));
  }

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
