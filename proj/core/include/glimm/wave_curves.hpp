#pragma once

#include <memory>
#include <vector>

#include "glimm/chebyshev.hpp"
#include "glimm/envelope.hpp"
#include "glimm/system_model.hpp"

namespace glimm {

// How the reduced flux speed is approximated along the curve.
//   Projected:  <l_k(u_L), A(u) r_k(u)>
//   Eigenvalue: lambda_k(u)
// Both coincide for scalar laws.
enum class SpeedApproximation { Projected, Eigenvalue };

struct CurveOptions {
  double h_min = 1.0 / 512;  // grid_n = max(min_cells, ceil(|s| / h_min))
  int min_cells = 64;
  double tol = 1e-13;  // fixed-point residual
  int max_iter = 80;
  SpeedApproximation speed = SpeedApproximation::Eigenvalue;
  double strict_tol = 1e-10;  // rarefaction vs. flat slope
  bool refine = true;         // sub-grid tangency and inflection refinement
};

int curve_cells(double s, const CurveOptions& opt);

// Discretized elementary curve of family k through u_L, on tau in [0, s].
struct ElementaryCurve {
  const SystemModel* model = nullptr;
  int k = 0;
  State u_left;
  double s = 0;
  SpeedApproximation speed = SpeedApproximation::Eigenvalue;
  Eigen::RowVectorXd l0;  // l_k(u_L)

  std::vector<double> tau;  // tau_i = i s / n
  std::vector<State> u;
  std::vector<State> du;  // r_k(u_i)
  std::vector<double> reduced_flux;  // raw units
  std::vector<double> envelope;      // conv (s > 0) or conc (s < 0) of the reduced flux
  std::vector<double> v;             // reduced_flux - envelope
  std::vector<double> sigma;         // raw speed at nodes
  std::vector<double> cell_slope;    // raw speed per cell
  EnvelopeResult hull;               // lower hull of the oriented samples (|tau|, sign(s) F)

  bool converged = false;
  double residual = 0;
  int iterations = 0;

  std::size_t cells() const { return tau.empty() ? 0 : tau.size() - 1; }
  double sign() const { return s < 0 ? -1.0 : 1.0; }
  double length() const { return s < 0 ? -s : s; }

  // Continuous evaluation at tau (signed, between 0 and s).
  State state_at(double t) const;
  double raw_speed_at(double t) const;
  double reduced_flux_at(double t) const;

  // Oriented coordinates x = |tau| on [0, |s|]; oriented flux Y = sign(s) F.
  State state_x(double x) const { return state_at(sign() * x); }
  double speed_x(double x) const { return raw_speed_at(sign() * x); }
  double flux_x(double x) const { return sign() * reduced_flux_at(sign() * x); }
};

// Throws NoConvergence / DomainEscape.
ElementaryCurve solve_curve(const SystemModel& model, const State& u_left, int k, double s,
                            const CurveOptions& opt = {});
ElementaryCurve solve_curve(const SystemModel& model, const State& u_left, int k, double s, int grid_n,
                            double tol, int max_iter, const CurveOptions& opt = {});

// Right state only (the state component of the fixed point), with a given grid.
State curve_endpoint(const SystemModel& model, const State& u_left, int k, double s, int grid_n,
                     const CurveOptions& opt = {});

State curve_right_state(const ElementaryCurve& curve);

enum class ComponentKind { Shock, Contact, Rarefaction };
const char* to_string(ComponentKind kind);

struct WaveComponent {
  ComponentKind kind = ComponentKind::Shock;
  double x0 = 0, x1 = 0;  // oriented coordinates along the curve
  double size = 0;        // signed
  State left, right;
  double speed_lo = 0, speed_hi = 0;  // normalized
  double raw_lo = 0, raw_hi = 0;
  Chebyshev sigma;        // normalized speed on [x0, x1] (rarefactions)
  Chebyshev sigma_int;    // its antiderivative from x0

  double length() const { return x1 - x0; }
  double speed_at(double x) const;
  // integral of the normalized speed over [a, b] inside the component
  double speed_integral(double a, double b) const;
  // x in [x0, x1] with speed_at(x) = t (rarefaction)
  double invert(double t) const;
};

struct WaveFan {
  int k = 0;
  State left, right;
  double size = 0;
  std::vector<WaveComponent> components;
  std::shared_ptr<const ElementaryCurve> curve;

  bool empty() const { return components.empty(); }
  double length() const { return size < 0 ? -size : size; }
  double sign() const { return size < 0 ? -1.0 : 1.0; }
  double shock_size() const;        // signed sum over shocks and contacts
  double rarefaction_size() const;  // signed sum over rarefactions
  double min_speed() const;
  double max_speed() const;
  double speed_at(double x) const;
  double speed_integral(double a, double b) const;  // over oriented [a, b]
  double mean_speed(double a, double b) const;
  // oriented position split by the sampling speed theta (waves with speed <= theta lie left)
  double split_point(double theta) const;
  State state_x(double x) const;
};

WaveFan wave_fan_from_curve(std::shared_ptr<const ElementaryCurve> curve, double strict_tol = 1e-10,
                            bool refine = true);
WaveFan wave_fan_from_curve(const ElementaryCurve& curve, double strict_tol = 1e-10, bool refine = true);

// Fan made of one discontinuity over the whole curve, speed given by the chord.
WaveFan single_discontinuity_fan(std::shared_ptr<const ElementaryCurve> curve);

}  // namespace glimm
