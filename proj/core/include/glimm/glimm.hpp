#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "glimm/functionals.hpp"
#include "glimm/riemann.hpp"
#include "glimm/sampler.hpp"

namespace glimm {

// Initial data with variation confined to [x_min, x_max].
struct InitialData {
  std::function<State(double)> value;
  double x_min = 0, x_max = 0;
};

InitialData riemann_data(const State& uL, const State& uR, double x0 = 0.0);
// states[i] on [breaks[i-1], breaks[i]); states.size() == breaks.size() + 1
InitialData piecewise_constant(std::vector<double> breaks, std::vector<State> states);

// Glimm state at time index i: cells [j eps, (j+1) eps) for j in [first, first + cells.size()).
struct GridProfile {
  double eps = 0;
  std::uint64_t time_index = 0;
  long first = 0;
  std::vector<State> cells;
  State left_bg, right_bg;

  long last() const { return first + static_cast<long>(cells.size()) - 1; }
  const State& at(long j) const;
  double x_left(long j) const { return static_cast<double>(j) * eps; }
  double total_variation() const;
};

// Throws TVBudgetExceeded.
GridProfile init_profile(const InitialData& u_bar, double eps, double theta0 = 0.5, double tv_budget = HUGE_VAL,
                         int pad = 2);

// Memo of Riemann solutions keyed by the exact bits of (u_L, u_R).
class RiemannCache {
 public:
  explicit RiemannCache(const SystemModel& model, RiemannOptions opt = {}, std::size_t capacity = 400000);
  std::shared_ptr<const RiemannSolution> solve(const State& uL, const State& uR);
  const SystemModel& model() const { return model_; }
  const RiemannOptions& options() const { return opt_; }
  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }

 private:
  const SystemModel& model_;
  RiemannOptions opt_;
  std::size_t capacity_;
  std::mutex mu_;
  std::unordered_map<std::string, std::shared_ptr<const RiemannSolution>> map_;
  std::size_t hits_ = 0, misses_ = 0;
};

// Fans at the interfaces j eps, j in [first, first + solutions.size()); null where neighbours agree.
struct InterfaceFans {
  long first = 0;
  double eps = 0;
  std::vector<std::shared_ptr<const RiemannSolution>> solutions;
  const RiemannSolution* at(long j) const;
  std::vector<PlacedSolution> placed() const;
};

// Throws CFLViolation when a fan speed leaves [0, 1].
InterfaceFans compute_fans(const GridProfile& p, RiemannCache& cache, int threads = 1);
GridProfile sample_profile(const GridProfile& p, const InterfaceFans& fans, double theta);
GridProfile step(const SystemModel& model, const GridProfile& p, double theta, const RiemannOptions& opt = {});

// Incoming waves of one new interface and its outgoing fan.
struct InteractionEntry {
  std::uint64_t step = 0;  // from time step to step + 1
  long interface = 0;
  double theta = 0;
  State u_left, u_mid, u_right;
  std::shared_ptr<const RiemannSolution> left_solution;   // old fan at interface - 1 (right part enters)
  std::shared_ptr<const RiemannSolution> right_solution;  // old fan at interface (left part enters)
  std::vector<double> split_left;   // oriented split positions per family in left_solution
  std::vector<double> split_right;  // ... in right_solution
  std::vector<double> incoming_left;   // sizes s'_k
  std::vector<double> incoming_right;  // sizes s''_k
  std::shared_ptr<const RiemannSolution> outgoing;
};

struct InteractionDeltas {
  double dV = 0, dQ1 = 0, dQq = 0, dQcubic = 0, dUpsilon = 0, dUpsilon1 = 0;
  double cancellation = 0, I1 = 0, I = 0, J = 0, transversal = 0;
  // implied constants: (dV + cancellation) / (transversal + I1) etc.
  double tv1_constant = 0, tv_constant = 0;
  // dQ1 + (transversal + opposite + I1) / 2 and the analogue for Q
  double q1_margin = 0, q_margin = 0;
};

InteractionDeltas interaction_deltas(const InteractionEntry& e, const FunctionalConstants& k,
                                     const RecordOptions& ropt = {});

struct EvolveOptions {
  RiemannOptions riemann;
  double theta0 = 0.5;
  double tv_budget = HUGE_VAL;
  int threads = 1;
  bool functionals = true;
  bool keep_profiles = true;
  bool keep_fans = false;
  bool record_ledger = true;
  FunctionalConstants constants;
  double C_factor = 0.125;  // C = C1 = C_factor / V(0) unless absolute constants are requested
  bool constants_absolute = false;
};

struct Trajectory {
  double eps = 0;
  std::uint64_t steps = 0;
  std::vector<double> thetas;  // thetas[i] used from time i to i + 1
  std::vector<GridProfile> profiles;
  std::vector<InterfaceFans> fans;
  std::vector<FunctionalSnapshot> snapshots;
  std::vector<InteractionEntry> ledger;
  FunctionalConstants constants;
  GridProfile final_profile;
};

// Functionals of one profile, with C resolved from the options unless given absolutely.
FunctionalSnapshot profile_functionals(const SystemModel& model, const GridProfile& p, const FunctionalConstants& k,
                                       const RiemannOptions& ropt = {}, double decompose_above = 0);

FunctionalConstants resolve_constants(const EvolveOptions& opt, double V0);

Trajectory evolve(const SystemModel& model, const InitialData& u_bar, double eps, double T,
                  const SamplingSequence& seq, const EvolveOptions& opt = {});

// L1 distance (Euclidean norm of the difference) between piecewise-constant profiles.
double l1_distance(const GridProfile& a, const GridProfile& b, double x_lo, double x_hi);
double l1_distance(const GridProfile& a, const GridProfile& b);

// Exact self-similar solution u(t, x) = R((x - x0) / t).
struct ExactSolution {
  std::shared_ptr<const RiemannSolution> solution;
  double x0 = 0;
  State at(double t, double x) const;
  std::vector<double> breakpoints(double t) const;  // discontinuities and rarefaction edges
};

// Throws WindowTooSmall when the profile is nonconstant outside the window.
double l1_distance(const GridProfile& a, const ExactSolution& u, double t, double x_lo, double x_hi);
double l1_distance(const GridProfile& a, const ExactSolution& u, double t);

}  // namespace glimm
