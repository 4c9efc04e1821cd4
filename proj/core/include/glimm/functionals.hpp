#pragma once

#include <memory>
#include <vector>

#include "glimm/riemann.hpp"

namespace glimm {

struct ShockPart {
  double size = 0;                // signed
  double x0 = 0, x1 = 0;          // oriented range in the fan
  std::vector<double> parts;      // convex/concave sub-decomposition (signed sizes)
  std::vector<char> convex;       // per part
  bool decomposed = false;
};

// A wave of the approximate solution: the family-k fan of one interface, or a portion of it.
struct WaveRecord {
  int k = 0;
  double size = 0;  // signed
  long interface = 0;
  double position = 0;
  std::shared_ptr<const RiemannSolution> owner;
  const WaveFan* fan = nullptr;
  double xa = 0, xb = 0;  // oriented range inside the fan
  double s_r = 0, s_s = 0;
  std::vector<ShockPart> shocks;
  std::vector<double> rarefactions;
  State left, right;
};

using Inventory = std::vector<WaveRecord>;

struct RecordOptions {
  double decompose_above = 0;   // shock sub-decomposition for |s^h| > this
  double hysteresis = 1e-10;
};

WaveRecord make_record(std::shared_ptr<const RiemannSolution> owner, int k, double xa, double xb, long interface,
                       double position, const RecordOptions& opt = {});
// Inflection-point partition of a shock component of the fan.
ShockPart decompose_shock(const WaveFan& fan, const WaveComponent& comp, double hysteresis = 1e-10);

// All nonzero family fans of the given solutions, ordered by position then family.
struct PlacedSolution {
  std::shared_ptr<const RiemannSolution> solution;
  long interface = 0;
  double position = 0;
};
Inventory inventory_from(const std::vector<PlacedSolution>& solutions, const RecordOptions& opt = {});

struct FunctionalConstants {
  double c0 = 4;
  double c = 4;
  double C = 1;   // absolute constants used by upsilon()
  double C1 = 1;
  double delta0 = 0.05;
};

struct FunctionalSnapshot {
  double V = 0, Q1 = 0, Qq = 0, Qcubic = 0, Q = 0, Upsilon = 0, Upsilon1 = 0;
  double dUpsilon = 0, dUpsilon1 = 0, cancellation = 0;
  std::size_t waves = 0;
};

double total_strength(const Inventory& inv);
double q1_potential(const Inventory& inv, double c0);
double i1_quantity(const WaveRecord& s_prime, const WaveRecord& s_second, double merged_rarefaction);
double i1_quantity(double sp, double sp_r, double sp_s, double ss, double ss_s, double merged_r);
double cancellation(double s_prime, double s_second);
double cubic_potential(const Inventory& inv);
double cubic_self_term(const WaveRecord& w);
double phi(double s, double delta0);
double intrinsic_potential(const ShockPart& shock, double delta0);
double inner_potential(const WaveRecord& w, double delta0);
double qq_potential(const Inventory& inv, double c, double delta0);

// Amount of interaction between two same-family waves on sampled reduced-flux grids (trapezoid rule).
// The oriented reduced fluxes of the records are resampled on a common spacing.
double amount_of_interaction(const WaveRecord& a, const WaveRecord& b, int min_cells = 256);
double amount_of_interaction(const ElementaryCurve& a, const ElementaryCurve& b, int min_cells = 256);

struct UpsilonValues {
  double Upsilon = 0, Upsilon1 = 0;
};
UpsilonValues upsilon(double V, double Qq, double Qcubic, double Q1, const FunctionalConstants& k);

FunctionalSnapshot evaluate_functionals(const Inventory& inv, const FunctionalConstants& k);

}  // namespace glimm
