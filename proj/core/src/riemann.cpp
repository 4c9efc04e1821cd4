#include "glimm/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/LU>

#include "glimm/errors.hpp"

namespace glimm {

namespace {

double norm_inf(const State& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

struct Composer {
  const SystemModel& model;
  const State& uL;
  const std::vector<int>& cells;
  const CurveOptions& opt;

  // false when an intermediate curve escapes or fails
  bool operator()(const Eigen::VectorXd& s, State& out) const {
    try {
      State w = uL;
      for (int k = 0; k < model.dimension(); ++k)
        w = curve_endpoint(model, w, k, s[k], cells[static_cast<std::size_t>(k)], opt);
      out = w;
      return true;
    } catch (const Error&) {
      return false;
    }
  }
};

}  // namespace

bool RiemannSolution::trivial() const {
  for (const auto& f : fans)
    if (!f.empty()) return false;
  return true;
}

double RiemannSolution::min_speed() const {
  for (const auto& f : fans)
    if (!f.empty()) return f.min_speed();
  return 0.0;
}

double RiemannSolution::max_speed() const {
  for (auto it = fans.rbegin(); it != fans.rend(); ++it)
    if (!it->empty()) return it->max_speed();
  return 0.0;
}

RiemannSolution solve_riemann(const SystemModel& model, const State& uL, const State& uR,
                              const RiemannOptions& opt) {
  const int n = model.dimension();
  if (uL.size() != n || uR.size() != n) fail(ErrorKind::InvalidArgument, "state dimension mismatch");
  if (!model.domain().contains(uL, 1e-9) || !model.domain().contains(uR, 1e-9))
    fail(ErrorKind::OutOfDomain, "Riemann data outside the domain");
  const double jump = (uR - uL).norm();
  if (jump > model.small_data_bound()) {
    std::ostringstream os;
    os << "|uR - uL| = " << jump << " exceeds " << model.small_data_bound();
    fail(ErrorKind::DataTooLarge, os.str());
  }

  RiemannSolution sol;
  sol.model = &model;
  sol.u_left = uL;
  sol.u_right = uR;
  Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
  std::vector<int> cells(static_cast<std::size_t>(n), opt.curve.min_cells);

  if (n == 1) {
    s[0] = uR[0] - uL[0];
    cells[0] = curve_cells(s[0], opt.curve);
  } else if (uL != uR) {
    const EigenDecomposition mid = model.eig_unchecked(0.5 * (uL + uR));
    const Eigen::VectorXd guess = mid.left * (uR - uL);
    for (int k = 0; k < n; ++k) cells[static_cast<std::size_t>(k)] = curve_cells(guess[k], opt.curve);
    Composer compose{model, uL, cells, opt.curve};
    s = guess;
    State w;
    if (!compose(s, w)) fail(ErrorKind::NoConvergence, "initial guess leaves the domain");
    Eigen::VectorXd F = w - uR;
    double r = norm_inf(F);
    Matrix J = mid.right;
    int it = 0;
    while (it < opt.max_iter && r > opt.target) {
      ++it;
      const Eigen::VectorXd step = -J.partialPivLu().solve(F);
      double lambda = 1.0;
      bool accepted = false;
      Eigen::VectorXd s_try, F_try;
      for (int h = 0; h < 30; ++h, lambda *= 0.5) {
        s_try = s + lambda * step;
        State wt;
        if (!compose(s_try, wt)) continue;
        F_try = wt - uR;
        if (norm_inf(F_try) < r) {
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
      const Eigen::VectorXd d = s_try - s;
      const Eigen::VectorXd y = F_try - F;
      const double dd = d.squaredNorm();
      if (dd > 0) J += ((y - J * d) * d.transpose()) / dd;
      s = s_try;
      F = F_try;
      r = norm_inf(F);
    }
    sol.iterations = it;
    sol.residual = r;
    if (!(r <= opt.accept)) {
      std::ostringstream os;
      os << "composed residual " << r << " after " << it << " iterations";
      fail(ErrorKind::NoConvergence, os.str());
    }
  }

  for (int k = 0; k < n; ++k)
    if (std::abs(s[k]) < opt.zero_size) s[k] = 0.0;
  sol.sizes.assign(s.data(), s.data() + n);
  sol.omega.push_back(uL);
  sol.fans.resize(static_cast<std::size_t>(n));
  int last = -1;
  for (int k = 0; k < n; ++k) {
    WaveFan& fan = sol.fans[static_cast<std::size_t>(k)];
    const State& w = sol.omega.back();
    if (s[k] == 0.0) {
      fan.k = k;
      fan.left = fan.right = w;
      sol.omega.push_back(w);
      continue;
    }
    auto curve = std::make_shared<const ElementaryCurve>(
        solve_curve(model, w, k, s[k], cells[static_cast<std::size_t>(k)], opt.curve.tol, opt.curve.max_iter, opt.curve));
    fan = wave_fan_from_curve(curve, opt.curve.strict_tol, opt.curve.refine);
    sol.omega.push_back(fan.right);
    last = k;
  }
  if (n == 1 || last >= 0) sol.residual = norm_inf(sol.omega.back() - uR);
  // pin the far-right state
  if (last >= 0) {
    WaveFan& f = sol.fans[static_cast<std::size_t>(last)];
    f.right = uR;
    f.components.back().right = uR;
    for (int k = last; k < n; ++k) sol.omega[static_cast<std::size_t>(k) + 1] = uR;
    for (int k = last + 1; k < n; ++k) sol.fans[static_cast<std::size_t>(k)].left = sol.fans[static_cast<std::size_t>(k)].right = uR;
  } else {
    sol.omega.back() = uR;
  }
  return sol;
}

State evaluate_solution(const RiemannSolution& sol, double xi) {
  for (const auto& fan : sol.fans) {
    if (fan.empty()) continue;
    const double x = fan.split_point(xi);
    if (x <= 0) return fan.left;
    if (x < fan.length()) return fan.state_x(x);
  }
  return sol.u_right;
}

LiuReport liu_admissibility_check(const SystemModel&, const WaveFan& fan, int samples, double tol) {
  LiuReport rep;
  rep.min_margin = HUGE_VAL;
  if (!fan.curve) return rep;
  const ElementaryCurve& c = *fan.curve;
  for (std::size_t ci = 0; ci < fan.components.size(); ++ci) {
    const WaveComponent& w = fan.components[ci];
    if (w.kind != ComponentKind::Shock) continue;
    ++rep.shocks;
    const double y0 = c.flux_x(w.x0);
    const double shock = w.raw_lo;
    const double t = tol * std::max(1.0, std::abs(shock));
    for (int j = 1; j <= samples; ++j) {
      const double x = w.x0 + w.length() * j / samples;
      const double chord = (c.flux_x(x) - y0) / (x - w.x0);
      const double margin = chord - shock;
      rep.min_margin = std::min(rep.min_margin, margin);
      ++rep.checked;
      if (margin < -t) rep.violations.push_back({ci, x, chord, shock});
    }
  }
  if (rep.checked == 0) rep.min_margin = 0;
  return rep;
}

std::vector<double> conservation_residuals(const SystemModel& model, const WaveFan& fan) {
  std::vector<double> out;
  for (const auto& w : fan.components) {
    if (w.kind == ComponentKind::Rarefaction) continue;
    const State du = w.right - w.left;
    const double d = du.norm();
    if (d == 0) {
      out.push_back(0);
      continue;
    }
    out.push_back((model.flux(w.right) - model.flux(w.left) - w.raw_lo * du).norm() / d);
  }
  return out;
}

}  // namespace glimm
