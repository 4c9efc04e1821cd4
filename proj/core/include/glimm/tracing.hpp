#pragma once

#include <cstdint>
#include <vector>

#include "glimm/functionals.hpp"
#include "glimm/glimm.hpp"

namespace glimm {

struct Subwave {
  double size = 0;   // signed
  double speed = 0;  // mean normalized speed over the piece
  double x0 = 0, x1 = 0;  // oriented range in the fan
  long origin = -1;  // primary id, -1 = secondary
  bool primary() const { return origin >= 0; }
};

struct PartitionedWave {
  int k = 0;
  double size = 0;
  std::vector<double> grid;  // tau^0 < ... < tau^l (oriented)
  std::vector<Subwave> subwaves;
};

// Greedy partition of the oriented range [xa, xb] of a fan: component boundaries, speed increments at most
// eps, and no piece whose speed interval contains theta_next in its interior.
PartitionedWave partition_wave(const WaveFan& fan, double xa, double xb, double eps, double theta_next,
                               long first_id = 0);
PartitionedWave partition_wave(const WaveFan& fan, double eps, double theta_next, long first_id = 0);

// Outgoing partition of a same-family wave built from the incoming subwaves (left wave first).
PartitionedWave merge_partitions_at_interaction(const PartitionedWave& left, const PartitionedWave& right,
                                                const WaveRecord& outgoing);

struct TracingOptions {
  double snap_rel = 1e-11;
  double snap_abs = 1e-14;
  // roundoff level of Upsilon and of the totals: noise_rel * Upsilon(m) + noise_abs
  double noise_rel = 1e-10;
  double noise_abs = 1e-15;
};

struct TracingReport {
  std::uint64_t m = 0, n = 0;
  std::size_t primaries_start = 0;  // subwaves at time m
  std::size_t survivors = 0;        // primaries traced to time n
  std::vector<double> secondary;    // per time i = m..n
  double secondary_total = 0;       // max over i
  double size_change_total = 0;
  double speed_change_total = 0;
  double dUpsilon = 0;  // |Upsilon(n) - Upsilon(m)|
  double dUpsilon1 = 0;
  double secondary_ratio = 0, size_ratio = 0, speed_ratio = 0;
  bool bijective = true;
  std::size_t tracks = 0;
};

// Needs a trajectory evolved with keep_fans and functionals. Throws EmptyInterval.
TracingReport trace_interval(const Trajectory& tr, std::uint64_t m, std::uint64_t n, const TracingOptions& opt = {});

struct SpeedAverage {
  double residual = 0;  // |lambda (s' + s'') - int sigma' - int sigma''| in raw speed units
  double J = 0;
  double ratio = 0;     // residual / J, 0 when both vanish
};

SpeedAverage speed_average_check(const WaveRecord& left, const WaveRecord& right, const WaveRecord& outgoing);

// sum_{h,p} s^h s^p (lambda^h - lambda^p)
double antisymmetric_sum(const PartitionedWave& w);

}  // namespace glimm
