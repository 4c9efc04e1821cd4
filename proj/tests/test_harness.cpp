#include <gtest/gtest.h>

#include <sstream>

#include "glimm/config.hpp"
#include "glimm/errors.hpp"
#include "glimm/harness.hpp"
#include "glimm/writers.hpp"

using namespace glimm;

namespace {
State s1(double a) { return State::Constant(1, a); }
}  // namespace

TEST(Harness, FitSlope) {
  EXPECT_NEAR(*fit_slope({0, 1, 2, 3}, {1, 3, 5, 7}), 2.0, 1e-14);
  EXPECT_FALSE(fit_slope({1.0}, {2.0}).has_value());
}

TEST(Harness, ConfigRoundTripAndErrors) {
  const ExperimentConfig c = parse_config(
      R"({"model":"psystem","eps":[0.1,0.05],"T":0.3,"initial":{"type":"riemann","uL":[0,0],"uR":[0.1,0]},
          "constants":{"c":8,"C_factor":0.5}})");
  EXPECT_EQ(c.model, "psystem");
  EXPECT_EQ(c.eps.size(), 2u);
  EXPECT_EQ(c.constants.c, 8.0);
  EXPECT_EQ(c.C_factor, 0.5);
  const ExperimentConfig d = parse_config(dump_config(c));
  EXPECT_EQ(dump_config(d), dump_config(c));
  EXPECT_THROW(parse_config(R"({"eps":[0.1,0.2]})"), Error);
  EXPECT_THROW(parse_config("{not json"), Error);
  EXPECT_THROW(parse_config(R"({"initial":{"type":"sine"}})"), Error);
}

TEST(Harness, RandomDataDeterministicAndSmall) {
  ExperimentConfig c;
  c.model = "cubic";
  c.initial.type = "random";
  c.initial.tv = 0.1;
  ModelPtr m = model_from(c);
  const InitialData a = initial_from(*m, c.initial, 5, 3), b = initial_from(*m, c.initial, 5, 3);
  const GridProfile pa = init_profile(a, 1.0 / 256), pb = init_profile(b, 1.0 / 256);
  ASSERT_EQ(pa.cells.size(), pb.cells.size());
  for (std::size_t i = 0; i < pa.cells.size(); ++i) EXPECT_EQ(pa.cells[i], pb.cells[i]);
  EXPECT_LE(pa.total_variation(), 0.1 + 1e-12);
}

TEST(Harness, RhoScheduleInteractionFree) {
  ModelPtr m = make_burgers();
  const Trajectory tr = evolve(*m, riemann_data(s1(0.6), s1(0.4)), 1.0 / 64, 1.0, SamplingSequence::vdc());
  const double rho = 0.1;
  const RhoReport r = rho_schedule(tr, rho);
  EXPECT_EQ(r.type2, 0u);
  const std::uint64_t len = static_cast<std::uint64_t>(std::floor(rho / tr.eps));
  for (std::size_t i = 0; i + 1 < r.intervals.size(); ++i) EXPECT_EQ(r.intervals[i].n - r.intervals[i].m, len);
  EXPECT_TRUE(r.bounded);
  EXPECT_THROW(rho_schedule(tr, 2 * tr.eps), Error);
}

TEST(Harness, RhoScheduleBigDrop) {
  // hand-made functional history: one large drop at step 5
  Trajectory tr;
  tr.eps = 0.01;
  tr.steps = 20;
  for (int i = 0; i <= 20; ++i) {
    FunctionalSnapshot s;
    s.Upsilon = i <= 5 ? 1.0 : 0.5;
    tr.snapshots.push_back(s);
  }
  const RhoReport r = rho_schedule(tr, 0.05);
  EXPECT_EQ(r.type2, 1u);
  bool at5 = false;
  for (const auto& iv : r.intervals)
    if (iv.type == 2) at5 = iv.m == 5 && iv.n == 6;
  EXPECT_TRUE(at5);
}

TEST(Harness, DefaultRho) { EXPECT_NEAR(default_rho(1.0 / 1024), std::sqrt(1.0 / 1024) * std::log(std::log(1024.0)), 1e-15); }

TEST(Harness, MonitorLinearOnlyLosesCrossings) {
  ExperimentConfig c;
  c.model = "linear";
  c.T = 1.0;
  c.eps = {1.0 / 32};
  c.initial.width = 0.2;
  const MonitorReport r = monitor_suite(c, 3);
  EXPECT_TRUE(r.ok());
  for (const auto& t : r.trials) {
    EXPECT_TRUE(t.failure.empty()) << t.failure;
    // V is conserved; Q drops when waves of different families cross
    EXPECT_LE(t.UpsilonT, t.Upsilon0 + 1e-14);
    EXPECT_EQ(t.max_increase <= 1e-14, true);
  }
}

TEST(Harness, MonitorWithoutPotentialFindsIncreases) {
  ExperimentConfig c;
  c.model = "psystem";
  c.T = 1.0;
  c.eps = {1.0 / 64};
  c.initial.width = 0.25;
  c.initial.jumps = 6;
  c.seed = 13;
  c.constants.c = 0;
  c.C_factor = 0;
  EXPECT_FALSE(monitor_suite(c, 6).ok());
}

TEST(Harness, ConvergenceSingleRung) {
  ExperimentConfig c;
  c.model = "cubic";
  c.initial.uL = s1(-1);
  c.initial.uR = s1(1);
  c.eps = {1.0 / 32};
  const ConvergenceResult r = run_convergence(c);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_FALSE(r.slope.has_value());
  EXPECT_GT(r.rows[0].error, 0.0);
  std::ostringstream a, b;
  write_convergence_csv(a, r);
  EXPECT_EQ(a.str().substr(0, 5), "eps,s");
}

TEST(Harness, ConvergenceDeterministic) {
  ExperimentConfig c;
  c.model = "cubic";
  c.initial.uL = s1(-1);
  c.initial.uR = s1(1);
  c.eps = {1.0 / 16, 1.0 / 32, 1.0 / 64};
  auto strip = [](ConvergenceResult r) {
    for (auto& row : r.rows) row.runtime = 0;
    std::ostringstream o;
    write_convergence_csv(o, r);
    return o.str();
  };
  EXPECT_EQ(strip(run_convergence(c)), strip(run_convergence(c)));
}

TEST(Harness, CsvFormatting) {
  std::ostringstream o;
  CsvWriter w(o);
  w.header({"a", "b"});
  w << 0.1 << std::string("x");
  w.end_row();
  EXPECT_EQ(o.str(), "a,b\n0.10000000000000001,x\n");
}
