#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "mfg/error.hpp"
#include "mfg/study.hpp"

using namespace mfg;

TEST(Study, LevelGeometry) {
  EXPECT_EQ(level_subdivisions(3), 8);
  const TimeGrid g = level_grid(3, 1.0, std::nullopt);
  EXPECT_EQ(g.num_slabs(), 9);
  EXPECT_DOUBLE_EQ(g.tau(), 1.0 / 9.0);
  EXPECT_EQ(level_grid(3, 1.0, 0.25).num_slabs(), 4);
}

TEST(Study, KeyValueParsing) {
  std::istringstream in("# comment\nproblem = trivial\n\nlevels=2,3  # trailing\n tol_fp = 1e-8\n");
  const auto kv = read_key_values(in);
  ASSERT_EQ(kv.size(), 3u);
  EXPECT_EQ(kv.at("levels"), "2,3");
  StudyConfig c;
  apply_settings(c, kv);
  EXPECT_EQ(c.problem, "trivial");
  EXPECT_EQ(c.levels, (std::vector<int>{2, 3}));
  EXPECT_DOUBLE_EQ(c.solver.tol_fp, 1e-8);
  apply_settings(c, {{"levels", "1-4"}, {"time_sampling", "gauss"}});
  EXPECT_EQ(c.levels, (std::vector<int>{1, 2, 3, 4}));
  EXPECT_EQ(c.errors.sampling, TimeSampling::Gauss);
  EXPECT_THROW(apply_settings(c, {{"bogus", "1"}}), ValidationError);
  EXPECT_THROW(apply_settings(c, {{"tol_fp", "abc"}}), ValidationError);
}

TEST(Study, Validation) {
  StudyConfig c;
  EXPECT_NO_THROW(c.validate());
  c.levels = {3, 2};
  EXPECT_THROW(c.validate(), ValidationError);
  c.levels = {};
  EXPECT_THROW(c.validate(), ValidationError);
  EXPECT_THROW(make_problem("nope"), ValidationError);
  EXPECT_EQ(make_problem("trivial").source, nullptr);
}

TEST(Study, FormattingAndCsv) {
  EXPECT_EQ(format_number(0.12345678912), "0.1234568");
  EXPECT_EQ(format_number(2.0), "2");
  std::vector<LevelResult> results(3);
  for (int i = 0; i < 3; ++i) {
    results[i].level = i + 1;
    results[i].n = 2 << i;
    results[i].converged = true;
    ErrorReport e;
    e.rel_u_L2H1 = e.rel_b_L2L2 = e.rel_m_L2L2 = e.rel_m_L2H1 = e.rel_u0_L2 = e.rel_mT_L2 = 0.4 / (1 << i);
    results[i].errors = e;
  }
  std::ostringstream out;
  write_csv(out, results);
  std::istringstream lines(out.str());
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0], kCsvHeader);
  EXPECT_EQ(rows[4], "eoc,1-2,,,,,1,1,1,1,1,1");
  EXPECT_EQ(rows[5].rfind("eoc,2-3,", 0), 0u);
}

TEST(Study, WorkerCount) {
  ::setenv("MFG_THREADS", "3", 1);
  EXPECT_EQ(worker_count(1), 3);
  ::unsetenv("MFG_THREADS");
  EXPECT_EQ(worker_count(2), 2);
  EXPECT_GE(worker_count(0), 1);
}

TEST(Study, TrivialLevel) {
  StudyConfig c;
  c.problem = "trivial";
  const LevelResult r = run_level(c, 2);
  EXPECT_TRUE(r.converged);
  EXPECT_FALSE(r.errors.has_value());
  EXPECT_EQ(r.n, 4);
  EXPECT_EQ(r.num_slabs, 5);
  EXPECT_TRUE(r.failure.empty());
}
