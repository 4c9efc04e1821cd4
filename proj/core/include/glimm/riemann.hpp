#pragma once

#include <vector>

#include "glimm/wave_curves.hpp"

namespace glimm {

struct RiemannOptions {
  CurveOptions curve;
  double target = 1e-13;   // Newton stops below this residual
  double accept = 1e-9;    // NoConvergence above this
  int max_iter = 40;
  double zero_size = 1e-12;
};

struct RiemannSolution {
  const SystemModel* model = nullptr;
  State u_left, u_right;
  std::vector<WaveFan> fans;   // one per family; zero-size fans have no components
  std::vector<State> omega;    // omega_0 = u_L, ..., omega_N
  std::vector<double> sizes;
  double residual = 0;
  int iterations = 0;

  bool trivial() const;
  double min_speed() const;
  double max_speed() const;
};

// Throws DataTooLarge / NoConvergence.
RiemannSolution solve_riemann(const SystemModel& model, const State& u_left, const State& u_right,
                              const RiemannOptions& opt = {});

// Self-similar value at xi = x / t (normalized speeds). At a discontinuity speed the right state.
State evaluate_solution(const RiemannSolution& sol, double xi);

struct LiuViolation {
  std::size_t component = 0;
  double x = 0;          // oriented curve coordinate of the intermediate state
  double chord = 0;      // sigma[w', u]
  double shock = 0;      // sigma[w', w'']
};

struct LiuReport {
  std::size_t shocks = 0;
  std::size_t checked = 0;
  double min_margin = 0;  // min of sigma[w', u] - sigma[w', w''] (raw units)
  std::vector<LiuViolation> violations;
  bool admissible() const { return violations.empty(); }
};

LiuReport liu_admissibility_check(const SystemModel& model, const WaveFan& fan, int samples, double tol = 1e-9);

// Rankine-Hugoniot mismatch |F(w'') - F(w') - sigma (w'' - w')| / |w'' - w'| per shock component (raw units).
std::vector<double> conservation_residuals(const SystemModel& model, const WaveFan& fan);

}  // namespace glimm
