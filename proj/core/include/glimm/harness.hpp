#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "glimm/config.hpp"
#include "glimm/glimm.hpp"
#include "glimm/tracing.hpp"

namespace glimm {

struct ConvergenceRow {
  double eps = 0;
  std::uint64_t steps = 0;
  double error = 0;
  double ratio = 0;  // error / (sqrt(eps) |log eps|)
  double upsilon0 = 0, upsilonT = 0;
  double runtime = 0;  // seconds
  std::string failure;  // empty on success
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  std::optional<double> slope;  // least squares of log e against log(sqrt(eps) |log eps|)
  bool tail_nonincreasing = false;  // ratio over the last three rungs, 10% slack
};

double rate_scale(double eps);  // sqrt(eps) |log eps|
std::optional<double> fit_slope(const std::vector<double>& x, const std::vector<double>& y);

ConvergenceResult run_convergence(const ExperimentConfig& c);
void write_convergence_csv(std::ostream& os, const ConvergenceResult& r);

struct RhoInterval {
  std::uint64_t m = 0, n = 0;
  int type = 1;
  double drop = 0;  // Upsilon(m) - Upsilon(n)
};

struct RhoReport {
  double rho = 0;
  std::vector<RhoInterval> intervals;
  std::size_t type1 = 0, type2 = 0;
  double K = 0;        // count * rho
  double K_bound = 0;  // 2T + 3 (Upsilon(0) - Upsilon(T)) + 3 rho
  bool bounded = false;
};

double default_rho(double eps);  // sqrt(eps) log|log eps|
// Needs functionals on the trajectory. Throws RhoTooSmall when rho <= 2 eps.
RhoReport rho_schedule(const Trajectory& tr, double rho);

struct MonitorViolation {
  int trial = 0;
  std::uint64_t step = 0;  // from step to step + 1
  double dUpsilon = 0;
  double threshold = 0;
  std::vector<InteractionDeltas> deltas;  // interactions of that step
  std::vector<InteractionEntry> entries;
};

struct MonitorTrial {
  int trial = 0;
  double V0 = 0, Upsilon0 = 0, UpsilonT = 0, max_increase = 0;
  std::uint64_t steps = 0, interactions = 0;
  std::string failure;
};

struct MonitorReport {
  std::vector<MonitorTrial> trials;
  std::vector<MonitorViolation> violations;
  FunctionalConstants constants;  // c0, c, delta0 and C_factor as C
  bool ok() const { return violations.empty(); }
};

// Random small-TV data, seeded per trial; Upsilon(i+1) <= Upsilon(i) + 1e-9 V(0) checked at every step.
MonitorReport monitor_suite(const ExperimentConfig& c, int trials);

struct CalibrationResult {
  double c = 4, C_factor = 0.125;
  int rounds = 0;
  std::size_t violations_last = 0;
  bool converged = false;
};

// Doubles c, then C, alternately until the training configs show no violation.
CalibrationResult calibrate(std::vector<ExperimentConfig> training, int trials, int max_rounds = 12);

struct TraceSample {
  std::uint64_t m = 0, n = 0;
  TracingReport report;
};

struct TracingSuite {
  std::vector<TraceSample> samples;
  double secondary_max = 0, size_max = 0, speed_max = 0;  // implied constants
  bool finite = true;
};

// Intervals (m, n) with n - m <= max_len drawn from one trajectory.
TracingSuite trace_suite(const Trajectory& tr, int max_len, int count, std::uint64_t seed);

}  // namespace glimm
