#include <gtest/gtest.h>

#include <random>

#include "glimm/errors.hpp"
#include "glimm/tracing.hpp"

using namespace glimm;

namespace {

State s1(double a) { return State::Constant(1, a); }
State s2(double a, double b) {
  State u(2);
  u << a, b;
  return u;
}

std::shared_ptr<const RiemannSolution> rp(const SystemModel& m, const State& a, const State& b) {
  return std::make_shared<RiemannSolution>(solve_riemann(m, a, b));
}

WaveRecord whole(std::shared_ptr<const RiemannSolution> s, int k, long interface = 0) {
  return make_record(s, k, 0.0, s->fans[static_cast<std::size_t>(k)].length(), interface, static_cast<double>(interface));
}

void check_partition(const WaveFan& f, const PartitionedWave& w, double eps, double theta) {
  double total = 0;
  for (const auto& sw : w.subwaves) {
    total += sw.size;
    // no subwave straddles a component edge; rarefaction pieces rise by at most eps
    for (const auto& c : f.components) {
      EXPECT_FALSE(sw.x0 < c.x0 - 1e-12 && sw.x1 > c.x0 + 1e-12);
      if (c.kind == ComponentKind::Rarefaction && sw.x0 >= c.x0 - 1e-12 && sw.x1 <= c.x1 + 1e-12)
        EXPECT_LE(c.speed_at(sw.x1) - c.speed_at(sw.x0), eps + 1e-9);
    }
    const double sp = f.split_point(theta);
    EXPECT_FALSE(sw.x0 < sp - 1e-12 && sw.x1 > sp + 1e-12);
  }
  EXPECT_NEAR(total, f.size, 1e-14);
}

}  // namespace

TEST(Tracing, PartitionValidity) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(-0.5, 0.5);
  ModelPtr c = make_cubic();
  ModelPtr p = make_p_system();
  for (int t = 0; t < 40; ++t) {
    const double eps = 0.01 + 0.05 * (U(rng) + 0.5);
    const double theta = U(rng) + 0.5;
    auto a = rp(*c, s1(2 * U(rng)), s1(2 * U(rng)));
    if (!a->fans[0].empty()) check_partition(a->fans[0], partition_wave(a->fans[0], eps, theta), eps, theta);
    auto b = rp(*p, s2(0.4 * U(rng), 0.4 * U(rng)), s2(0.4 * U(rng), 0.4 * U(rng)));
    for (const auto& f : b->fans)
      if (!f.empty()) check_partition(f, partition_wave(f, eps, theta), eps, theta);
  }
}

TEST(Tracing, AntisymmetricSumVanishes) {
  ModelPtr c = make_cubic();
  auto a = rp(*c, s1(-1), s1(1));
  const PartitionedWave w = partition_wave(a->fans[0], 0.01, 0.37);
  EXPECT_GT(w.subwaves.size(), 10u);
  EXPECT_NEAR(antisymmetric_sum(w), 0.0, 1e-15);
}

TEST(Tracing, PureMergeConcatenates) {
  ModelPtr b = make_burgers();
  auto l = rp(*b, s1(1.0), s1(0.5)), r = rp(*b, s1(0.5), s1(0.0)), o = rp(*b, s1(1.0), s1(0.0));
  const PartitionedWave pl = partition_wave(l->fans[0], 0.1, NAN, 0);
  const PartitionedWave pr = partition_wave(r->fans[0], 0.1, NAN, 10);
  const PartitionedWave out = merge_partitions_at_interaction(pl, pr, whole(o, 0));
  ASSERT_EQ(out.subwaves.size(), 2u);
  EXPECT_EQ(out.subwaves[0].origin, 0);
  EXPECT_EQ(out.subwaves[1].origin, 10);
  EXPECT_NEAR(out.subwaves[0].size + out.subwaves[1].size, -1.0, 1e-14);
  EXPECT_NEAR(antisymmetric_sum(out), 0.0, 1e-15);
}

TEST(Tracing, CancellationKeepsLeadingPrimaries) {
  ModelPtr c = make_cubic();
  // s' = 0.3 rarefaction pieces, s'' = -0.1 shock; outgoing 0.2
  auto l = rp(*c, s1(0.2), s1(0.5)), r = rp(*c, s1(0.5), s1(0.4)), o = rp(*c, s1(0.2), s1(0.4));
  const PartitionedWave pl = partition_wave(l->fans[0], 0.05, NAN, 0);
  const PartitionedWave pr = partition_wave(r->fans[0], 0.05, NAN, 100);
  ASSERT_GT(pl.subwaves.size(), 2u);
  const PartitionedWave out = merge_partitions_at_interaction(pl, pr, whole(o, 0));
  double total = 0;
  for (const auto& sw : out.subwaves) {
    total += sw.size;
    EXPECT_LT(sw.origin, 100);  // nothing from the cancelled wave
  }
  EXPECT_NEAR(total, 0.2, 1e-12);
  EXPECT_EQ(out.subwaves.front().origin, 0);
}

TEST(Tracing, OtherFamilyOutgoingIsSecondary) {
  ModelPtr p = make_p_system();
  auto l = rp(*p, s2(0, 0), s2(0.05, 0.02));
  const PartitionedWave pl = partition_wave(l->fans[0], 0.1, NAN, 0);
  auto o = rp(*p, s2(0, 0), s2(0.02, 0.06));
  const PartitionedWave out = merge_partitions_at_interaction(pl, {}, whole(o, 1));
  ASSERT_FALSE(out.subwaves.empty());
  for (const auto& sw : out.subwaves) EXPECT_FALSE(sw.primary());
}

TEST(Tracing, InteractionFreeIntervalIsIdentity) {
  ModelPtr b = make_burgers();
  EvolveOptions o;
  o.keep_fans = true;
  const Trajectory tr = evolve(*b, riemann_data(s1(0.7), s1(0.3)), 1.0 / 32, 0.5, SamplingSequence::vdc(), o);
  const TracingReport r = trace_interval(tr, 0, tr.steps);
  EXPECT_EQ(r.survivors, r.primaries_start);
  EXPECT_EQ(r.secondary_total, 0.0);
  EXPECT_EQ(r.size_change_total, 0.0);
  EXPECT_NEAR(r.speed_change_total, 0.0, 1e-15);
  EXPECT_TRUE(r.bijective);
}

TEST(Tracing, CancellationEventCountsSecondary) {
  ModelPtr c = make_cubic();
  EvolveOptions o;
  o.keep_fans = true;
  // rarefaction then a faster-from-the-right shock that cancels part of it
  const InitialData u0 = piecewise_constant({0.0, 0.1}, {s1(0.1), s1(0.4), s1(0.2)});
  const Trajectory tr = evolve(*c, u0, 1.0 / 64, 3.0, SamplingSequence::vdc(), o);
  double canc = 0;
  for (const auto& s : tr.snapshots) canc += s.cancellation;
  ASSERT_GT(canc, 0.0);
  const TracingReport r = trace_interval(tr, 0, tr.steps);
  EXPECT_GE(r.secondary_total + 1e-12, std::min(canc, 0.2));
  EXPECT_TRUE(std::isfinite(r.secondary_ratio));
  EXPECT_TRUE(r.bijective);
}

TEST(Tracing, EmptyInterval) {
  ModelPtr b = make_burgers();
  EvolveOptions o;
  o.keep_fans = true;
  const Trajectory tr = evolve(*b, riemann_data(s1(0.7), s1(0.3)), 0.1, 0.3, SamplingSequence::vdc(), o);
  EXPECT_THROW(trace_interval(tr, 2, 2), Error);
  EXPECT_THROW(trace_interval(tr, 0, 99), Error);
}

TEST(Tracing, SpeedAverageBurgers) {
  ModelPtr b = make_burgers();
  auto l = rp(*b, s1(1.0), s1(0.5)), r = rp(*b, s1(0.5), s1(0.0)), o = rp(*b, s1(1.0), s1(0.0));
  const SpeedAverage a = speed_average_check(whole(l, 0, 0), whole(r, 0, 1), whole(o, 0));
  EXPECT_NEAR(a.residual, 0.0, 1e-14);
  EXPECT_GT(a.J, 0.0);
}

TEST(Tracing, SpeedAverageEqualSpeeds) {
  ModelPtr m = make_linear();
  auto l = rp(*m, s2(0, 0), s2(0.1, 0)), r = rp(*m, s2(0.1, 0), s2(0.3, 0)), o = rp(*m, s2(0, 0), s2(0.3, 0));
  const SpeedAverage a = speed_average_check(whole(l, 0, 0), whole(r, 0, 1), whole(o, 0));
  EXPECT_NEAR(a.residual, 0.0, 1e-15);
  EXPECT_NEAR(a.J, 0.0, 1e-15);
  EXPECT_EQ(a.ratio, 0.0);
}

TEST(Tracing, CrossingWavesAllSurvive) {
  // linear fields only cross; re-solved fans differ from the old ones by solver roundoff
  ModelPtr m = make_linear();
  EvolveOptions o;
  o.keep_fans = true;
  const Trajectory tr = evolve(*m, piecewise_constant({0.0, 0.05, 0.1}, {s2(0, 0), s2(0.03, -0.02), s2(0.01, 0.02), s2(0.04, 0.0)}),
                               1.0 / 64, 0.5, SamplingSequence::vdc(), o);
  for (std::uint64_t n = 1; n <= tr.steps; n += 7) {
    const TracingReport r = trace_interval(tr, 0, n);
    EXPECT_EQ(r.survivors, r.primaries_start) << n;
    EXPECT_LE(r.secondary_total, 1e-12) << n;
    EXPECT_TRUE(r.bijective);
  }
}
