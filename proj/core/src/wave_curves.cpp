#include "glimm/wave_curves.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "glimm/errors.hpp"

namespace glimm {

namespace {

constexpr int kChebPoints = 17;

std::string describe(const State& u) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < u.size(); ++i) os << (i ? ", " : "") << u[i];
  os << ")";
  return os.str();
}

// cumulative fourth-order quadrature of samples g on a uniform grid
void cumulative(const std::vector<State>& g, double h, std::vector<State>& out) {
  const std::size_t n = g.size() - 1;
  out.resize(g.size());
  out[0] = State::Zero(g[0].size());
  if (n < 3) {
    for (std::size_t i = 0; i < n; ++i) out[i + 1] = out[i] + 0.5 * h * (g[i] + g[i + 1]);
    return;
  }
  const double w = h / 24.0;
  for (std::size_t i = 0; i < n; ++i) {
    State cell;
    if (i == 0)
      cell = w * (9 * g[0] + 19 * g[1] - 5 * g[2] + g[3]);
    else if (i == n - 1)
      cell = w * (g[n - 3] - 5 * g[n - 2] + 19 * g[n - 1] + 9 * g[n]);
    else
      cell = w * (-g[i - 1] + 13 * g[i] + 13 * g[i + 1] - g[i + 2]);
    out[i + 1] = out[i] + cell;
  }
}

struct PathResult {
  std::vector<State> u, g;
  double residual = 0;
  int iterations = 0;
  bool converged = false;
};

// Fixed point u = u_L + int_0^tau r_k(u) on the uniform grid.
PathResult integrate_path(const SystemModel& model, const State& uL, int k, double s, int n, double tol,
                          int max_iter) {
  PathResult p;
  const std::size_t m = static_cast<std::size_t>(n) + 1;
  const double h = s / n;
  const Box& dom = model.domain();
  const State r0 = model.right_eigenvector(k, uL);
  p.u.resize(m);
  for (std::size_t i = 0; i < m; ++i) p.u[i] = uL + (h * static_cast<double>(i)) * r0;
  p.g.resize(m);
  std::vector<State> c;
  double prev = HUGE_VAL;
  bool relax = false;
  for (int it = 1; it <= max_iter; ++it) {
    for (std::size_t i = 0; i < m; ++i) {
      if (!dom.contains(p.u[i], 1e-9)) fail(ErrorKind::DomainEscape, "curve leaves the domain at " + describe(p.u[i]));
      p.g[i] = model.right_eigenvector(k, p.u[i]);
    }
    cumulative(p.g, h, c);
    double res = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const State next = uL + c[i];
      res = std::max(res, (next - p.u[i]).cwiseAbs().maxCoeff());
      p.u[i] = relax ? State(0.5 * (p.u[i] + next)) : next;
    }
    if (res > prev) relax = true;
    prev = res;
    p.residual = res;
    p.iterations = it;
    if (res <= tol) {
      p.converged = true;
      break;
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!dom.contains(p.u[i], 1e-9)) fail(ErrorKind::DomainEscape, "curve leaves the domain at " + describe(p.u[i]));
    p.g[i] = model.right_eigenvector(k, p.u[i]);
  }
  return p;
}

double oriented_speed(const ElementaryCurve& c, double x) { return c.speed_x(x); }

// root of f on [lo, hi] given opposite signs at the ends (Illinois variant of regula falsi)
template <class F>
double bracket_root(F&& f, double lo, double hi, double flo, double fhi, double xtol) {
  int side = 0;
  for (int it = 0; it < 200 && hi - lo > xtol; ++it) {
    double x = (lo * fhi - hi * flo) / (fhi - flo);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const double fx = f(x);
    if (fx == 0) return x;
    if ((fx < 0) == (flo < 0)) {
      lo = x;
      flo = fx;
      if (side == -1) fhi *= 0.5;
      side = -1;
    } else {
      hi = x;
      fhi = fx;
      if (side == 1) flo *= 0.5;
      side = 1;
    }
    if (it % 4 == 3) {  // guarantee progress
      const double mid = 0.5 * (lo + hi);
      const double fm = f(mid);
      if ((fm < 0) == (flo < 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
        fhi = fm;
      }
      side = 0;
    }
  }
  return std::abs(flo) < std::abs(fhi) ? lo : hi;
}

template <class F>
bool find_root_near(F&& f, double guess, double lo_lim, double hi_lim, double h, double xtol, double& root) {
  for (double w = h; w <= 8 * h; w *= 2) {
    const double lo = std::max(lo_lim, guess - w), hi = std::min(hi_lim, guess + w);
    if (!(hi > lo)) return false;
    const double flo = f(lo), fhi = f(hi);
    if (flo == 0) {
      root = lo;
      return true;
    }
    if (fhi == 0) {
      root = hi;
      return true;
    }
    if ((flo < 0) != (fhi < 0)) {
      root = bracket_root(f, lo, hi, flo, fhi, xtol);
      return true;
    }
  }
  return false;
}

struct ShockSpan {
  double a, b;
  bool fixed_a, fixed_b;
  bool flat;
};

// chord from a tangent at b (free right end)
double tangent_right(const ElementaryCurve& c, double a, double guess, double X, double h) {
  const double ya = c.flux_x(a);
  auto phi = [&](double b) { return c.speed_x(b) * (b - a) - (c.flux_x(b) - ya); };
  double r;
  if (find_root_near(phi, guess, a + 1e-3 * h, X, h, 1e-15 * std::max(1.0, X), r)) return r;
  return guess;
}

// chord into b tangent at a (free left end)
double tangent_left(const ElementaryCurve& c, double b, double guess, double h) {
  const double yb = c.flux_x(b);
  auto psi = [&](double a) { return c.speed_x(a) * (b - a) - (yb - c.flux_x(a)); };
  double r;
  if (find_root_near(psi, guess, 0.0, b - 1e-3 * h, h, 1e-15 * std::max(1.0, b), r)) return r;
  return guess;
}

void refine_span(const ElementaryCurve& c, ShockSpan& sp, double X, double h) {
  if (sp.flat) return;
  if (sp.fixed_a && sp.fixed_b) return;
  if (sp.fixed_a) {
    sp.b = tangent_right(c, sp.a, sp.b, X, h);
  } else if (sp.fixed_b) {
    sp.a = tangent_left(c, sp.b, sp.a, h);
  } else {
    for (int it = 0; it < 60; ++it) {
      const double a0 = sp.a, b0 = sp.b;
      sp.a = tangent_left(c, sp.b, sp.a, h);
      sp.b = tangent_right(c, sp.a, sp.b, X, h);
      if (std::abs(sp.a - a0) + std::abs(sp.b - b0) <= 1e-15 * std::max(1.0, X)) break;
    }
  }
}

// the refined chord must stay below the oriented flux at the interior nodes
bool span_valid(const ElementaryCurve& c, const ShockSpan& sp, const std::vector<double>& x,
                const std::vector<double>& y) {
  if (!(sp.b > sp.a)) return false;
  const double ya = c.flux_x(sp.a), yb = c.flux_x(sp.b);
  const double m = (yb - ya) / (sp.b - sp.a);
  double scale = 0;
  for (double v : y) scale = std::max(scale, std::abs(v));
  const double tol = 1e-11 * std::max(scale, 1e-300);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= sp.a || x[i] >= sp.b) continue;
    if (y[i] < ya + m * (x[i] - sp.a) - tol) return false;
  }
  return true;
}

WaveComponent make_shock(const ElementaryCurve& c, const SpeedMap& map, double a, double b, bool contact) {
  WaveComponent w;
  w.kind = contact ? ComponentKind::Contact : ComponentKind::Shock;
  w.x0 = a;
  w.x1 = b;
  w.size = c.sign() * (b - a);
  w.left = c.state_x(a);
  w.right = c.state_x(b);
  const double raw = (c.flux_x(b) - c.flux_x(a)) / (b - a);
  w.raw_lo = w.raw_hi = raw;
  w.speed_lo = w.speed_hi = map.apply(raw);
  return w;
}

WaveComponent make_rarefaction(const ElementaryCurve& c, const SpeedMap& map, double a, double b) {
  WaveComponent w;
  w.kind = ComponentKind::Rarefaction;
  w.x0 = a;
  w.x1 = b;
  w.size = c.sign() * (b - a);
  w.left = c.state_x(a);
  w.right = c.state_x(b);
  w.sigma = Chebyshev::fit(a, b, kChebPoints, [&](double x) { return map.apply(oriented_speed(c, x)); });
  w.sigma_int = w.sigma.integral();
  w.raw_lo = oriented_speed(c, a);
  w.raw_hi = oriented_speed(c, b);
  w.speed_lo = map.apply(w.raw_lo);
  w.speed_hi = map.apply(w.raw_hi);
  return w;
}

}  // namespace

int curve_cells(double s, const CurveOptions& opt) {
  const double n = std::ceil(std::abs(s) / opt.h_min);
  return std::max(opt.min_cells, static_cast<int>(std::min(n, 1e6)));
}

State ElementaryCurve::state_at(double t) const {
  if (tau.size() < 2) return u_left;
  if (model->dimension() == 1) return u_left + State::Constant(1, t);
  const std::size_t n = cells();
  const double h = s / static_cast<double>(n);
  double q = t / h;
  q = std::clamp(q, 0.0, static_cast<double>(n));
  std::size_t i = std::min(static_cast<std::size_t>(q), n - 1);
  const double r = q - static_cast<double>(i);
  if (r == 0) return u[i];
  if (r == 1) return u[i + 1];
  const double r2 = r * r, r3 = r2 * r;
  const double h00 = 2 * r3 - 3 * r2 + 1, h10 = r3 - 2 * r2 + r, h01 = -2 * r3 + 3 * r2, h11 = r3 - r2;
  return h00 * u[i] + (h10 * h) * du[i] + h01 * u[i + 1] + (h11 * h) * du[i + 1];
}

double ElementaryCurve::raw_speed_at(double t) const {
  if (model->dimension() == 1) return model->jacobian(u_left + State::Constant(1, t))(0, 0);
  const State w = state_at(t);
  if (speed == SpeedApproximation::Eigenvalue) return model->raw_speed(k, w);
  return l0.dot(model->jacobian(w) * model->right_eigenvector(k, w));
}

double ElementaryCurve::reduced_flux_at(double t) const {
  if (tau.size() < 2) return 0.0;
  if (model->dimension() == 1) return (model->flux(u_left + State::Constant(1, t)) - model->flux(u_left))[0];
  if (speed == SpeedApproximation::Projected) return l0.dot(model->flux(state_at(t)) - model->flux(u_left));
  const std::size_t n = cells();
  const double h = s / static_cast<double>(n);
  double q = std::clamp(t / h, 0.0, static_cast<double>(n));
  const std::size_t i = std::min(static_cast<std::size_t>(q), n - 1);
  const double t0 = tau[i];
  if (t == t0) return reduced_flux[i];
  if (t == tau[i + 1]) return reduced_flux[i + 1];
  return reduced_flux[i] + integrate_gauss([&](double z) { return raw_speed_at(z); }, t0, t, 6);
}

ElementaryCurve solve_curve(const SystemModel& model, const State& u_left, int k, double s,
                            const CurveOptions& opt) {
  return solve_curve(model, u_left, k, s, curve_cells(s, opt), opt.tol, opt.max_iter, opt);
}

ElementaryCurve solve_curve(const SystemModel& model, const State& u_left, int k, double s, int grid_n,
                            double tol, int max_iter, const CurveOptions& opt) {
  if (k < 0 || k >= model.dimension()) fail(ErrorKind::InvalidArgument, "family index out of range");
  if (!model.domain().contains(u_left, 1e-9)) fail(ErrorKind::OutOfDomain, "left state " + describe(u_left));
  ElementaryCurve c;
  c.model = &model;
  c.k = k;
  c.u_left = u_left;
  c.s = s;
  c.speed = opt.speed;
  const EigenDecomposition e0 = model.eig_unchecked(u_left);
  c.l0 = e0.left.row(k);
  if (s == 0) {
    c.tau = {0.0};
    c.u = {u_left};
    c.du = {State(e0.right.col(k))};
    c.reduced_flux = {0.0};
    c.envelope = {0.0};
    c.v = {0.0};
    c.sigma = {e0.raw_lambdas[k]};
    c.converged = true;
    return c;
  }
  const int n = std::max(grid_n, 3);
  const std::size_t m = static_cast<std::size_t>(n) + 1;
  const double h = s / n;
  c.tau.resize(m);
  for (std::size_t i = 0; i < m; ++i) c.tau[i] = h * static_cast<double>(i);

  if (model.dimension() == 1) {
    c.u.resize(m);
    c.du.assign(m, State::Ones(1));
    for (std::size_t i = 0; i < m; ++i) {
      c.u[i] = u_left + State::Constant(1, c.tau[i]);
      if (!model.domain().contains(c.u[i], 1e-9)) fail(ErrorKind::DomainEscape, "curve leaves the domain at " + describe(c.u[i]));
    }
    c.converged = true;
    c.iterations = 1;
    c.reduced_flux.resize(m);
    for (std::size_t i = 0; i < m; ++i) c.reduced_flux[i] = c.reduced_flux_at(c.tau[i]);
  } else {
    PathResult p = integrate_path(model, u_left, k, s, n, tol, max_iter);
    if (!p.converged) {
      std::ostringstream os;
      os << "fixed point residual " << p.residual << " after " << p.iterations << " iterations";
      fail(ErrorKind::NoConvergence, os.str());
    }
    c.u = std::move(p.u);
    c.du = std::move(p.g);
    c.converged = true;
    c.residual = p.residual;
    c.iterations = p.iterations;
    c.reduced_flux.assign(m, 0.0);
    if (opt.speed == SpeedApproximation::Projected) {
      const State f0 = model.flux(u_left);
      for (std::size_t i = 0; i < m; ++i) c.reduced_flux[i] = c.l0.dot(model.flux(c.u[i]) - f0);
    } else {
      for (std::size_t i = 0; i + 1 < m; ++i)
        c.reduced_flux[i + 1] =
            c.reduced_flux[i] + integrate_gauss([&](double z) { return c.raw_speed_at(z); }, c.tau[i], c.tau[i + 1], 4);
    }
  }

  // oriented samples: x = |tau|, y = sign(s) F
  SampledFunction f;
  f.grid.resize(m);
  f.values.resize(m);
  const double sg = c.sign();
  for (std::size_t i = 0; i < m; ++i) {
    f.grid[i] = std::abs(h) * static_cast<double>(i);
    f.values[i] = sg * c.reduced_flux[i];
  }
  c.hull = lower_convex_envelope(f);
  c.envelope.resize(m);
  c.v.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    c.envelope[i] = sg * c.hull.envelope.values[i];
    c.v[i] = c.reduced_flux[i] - c.envelope[i];
  }
  c.cell_slope = c.hull.slope;
  c.sigma.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (i == 0) c.sigma[i] = c.cell_slope.front();
    else if (i == m - 1) c.sigma[i] = c.cell_slope.back();
    else c.sigma[i] = 0.5 * (c.cell_slope[i - 1] + c.cell_slope[i]);
  }
  return c;
}

State curve_endpoint(const SystemModel& model, const State& u_left, int k, double s, int grid_n,
                     const CurveOptions& opt) {
  if (s == 0) return u_left;
  if (model.dimension() == 1) {
    State r = u_left + State::Constant(1, s);
    if (!model.domain().contains(r, 1e-9)) fail(ErrorKind::DomainEscape, "curve leaves the domain at " + describe(r));
    return r;
  }
  PathResult p = integrate_path(model, u_left, k, s, std::max(grid_n, 3), opt.tol, opt.max_iter);
  if (!p.converged) fail(ErrorKind::NoConvergence, "fixed point residual " + std::to_string(p.residual));
  return p.u.back();
}

State curve_right_state(const ElementaryCurve& curve) { return curve.u.back(); }

const char* to_string(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::Shock: return "shock";
    case ComponentKind::Contact: return "contact";
    case ComponentKind::Rarefaction: return "rarefaction";
  }
  return "?";
}

double WaveComponent::speed_at(double x) const {
  if (kind != ComponentKind::Rarefaction) return speed_lo;
  return sigma(std::clamp(x, x0, x1));
}

double WaveComponent::speed_integral(double a, double b) const {
  a = std::max(a, x0);
  b = std::min(b, x1);
  if (!(b > a)) return 0.0;
  if (kind != ComponentKind::Rarefaction) return speed_lo * (b - a);
  return sigma_int(b) - sigma_int(a);
}

double WaveComponent::invert(double t) const {
  if (kind != ComponentKind::Rarefaction) return t < speed_lo ? x0 : x1;
  double lo = x0, hi = x1;
  double flo = sigma(lo) - t, fhi = sigma(hi) - t;
  if (flo >= 0) return x0;
  if (fhi <= 0) return x1;
  return bracket_root([&](double x) { return sigma(x) - t; }, lo, hi, flo, fhi, 1e-16 * std::max(1.0, x1));
}

double WaveFan::shock_size() const {
  double s = 0;
  for (const auto& c : components)
    if (c.kind != ComponentKind::Rarefaction) s += c.size;
  return s;
}

double WaveFan::rarefaction_size() const {
  double s = 0;
  for (const auto& c : components)
    if (c.kind == ComponentKind::Rarefaction) s += c.size;
  return s;
}

double WaveFan::min_speed() const { return components.empty() ? 0.0 : components.front().speed_lo; }
double WaveFan::max_speed() const { return components.empty() ? 0.0 : components.back().speed_hi; }

double WaveFan::speed_at(double x) const {
  for (const auto& c : components)
    if (x <= c.x1) return c.speed_at(x);
  return components.empty() ? 0.0 : components.back().speed_hi;
}

double WaveFan::speed_integral(double a, double b) const {
  double s = 0;
  for (const auto& c : components) s += c.speed_integral(a, b);
  return s;
}

double WaveFan::mean_speed(double a, double b) const {
  if (!(b > a)) return speed_at(a);
  return speed_integral(a, b) / (b - a);
}

double WaveFan::split_point(double theta) const {
  for (const auto& c : components) {
    if (c.kind != ComponentKind::Rarefaction) {
      if (theta < c.speed_lo) return c.x0;
    } else {
      if (theta < c.speed_lo) return c.x0;
      if (theta < c.speed_hi) return c.invert(theta);
    }
  }
  return length();
}

State WaveFan::state_x(double x) const {
  if (x <= 0 || components.empty()) return left;
  if (x >= length()) return right;
  return curve->state_x(x);
}

WaveFan wave_fan_from_curve(const ElementaryCurve& curve, double strict_tol, bool refine) {
  return wave_fan_from_curve(std::make_shared<const ElementaryCurve>(curve), strict_tol, refine);
}

WaveFan wave_fan_from_curve(std::shared_ptr<const ElementaryCurve> cp, double strict_tol, bool refine) {
  const ElementaryCurve& c = *cp;
  WaveFan fan;
  fan.k = c.k;
  fan.left = c.u_left;
  fan.right = c.u.back();
  fan.size = c.s;
  fan.curve = cp;
  if (c.cells() == 0) return fan;

  const SystemModel& model = *c.model;
  const SpeedMap& map = model.speed_map();
  const bool ld = model.field(c.k).kind == FieldKind::LD;
  if (ld) {
    // roundoff in a linear flux would otherwise split the contact into slivers
    fan.components.push_back(make_shock(c, map, 0.0, c.length(), true));
    fan.components.front().left = fan.left;
    fan.components.front().right = fan.right;
    return fan;
  }
  const std::size_t n = c.cells();
  const double X = c.length();
  const double h = X / static_cast<double>(n);
  const auto& xs = c.hull.envelope.grid;
  std::vector<double> ys(n + 1);
  for (std::size_t i = 0; i <= n; ++i) ys[i] = c.sign() * c.reduced_flux[i];

  const auto pieces = decompose_contact(c.hull, strict_tol);
  std::vector<ShockSpan> spans;
  for (const auto& p : pieces) {
    if (p.kind != PieceKind::ShockOrContact) continue;
    ShockSpan sp{xs[p.begin], xs[p.end], p.begin == 0, p.end == n, p.flat_contact || ld};
    if (p.end == n) sp.b = X;
    spans.push_back(sp);
  }

  if (refine && !ld) {
    std::vector<ShockSpan> grid_spans = spans;
    for (std::size_t j = 0; j < spans.size(); ++j) {
      refine_span(c, spans[j], X, h);
      if (!span_valid(c, spans[j], xs, ys)) spans[j] = grid_spans[j];
    }
    // refined neighbours that cross are one discontinuity
    for (bool merged = true; merged;) {
      merged = false;
      for (std::size_t j = 0; j + 1 < spans.size(); ++j) {
        if (spans[j].b >= spans[j + 1].a - 1e-14 * X) {
          ShockSpan m{spans[j].a, spans[j + 1].b, spans[j].fixed_a, spans[j + 1].fixed_b, false};
          ShockSpan g = m;
          refine_span(c, m, X, h);
          if (!span_valid(c, m, xs, ys)) m = g;
          spans[j] = m;
          spans.erase(spans.begin() + static_cast<std::ptrdiff_t>(j) + 1);
          merged = true;
          break;
        }
      }
    }
    spans.erase(std::remove_if(spans.begin(), spans.end(), [](const ShockSpan& sp) { return !(sp.b > sp.a); }),
                spans.end());
  }

  double cursor = 0;
  const double min_gap = 1e-13 * X;
  for (std::size_t j = 0; j < spans.size(); ++j) {
    double a = spans[j].a;
    if (a - cursor <= min_gap) a = cursor;
    if (a > cursor) fan.components.push_back(make_rarefaction(c, map, cursor, a));
    double b = spans[j].b;
    if (X - b <= min_gap) b = X;
    if (b > a) fan.components.push_back(make_shock(c, map, a, b, spans[j].flat));
    cursor = b;
  }
  if (X - cursor > min_gap || fan.components.empty())
    fan.components.push_back(make_rarefaction(c, map, cursor, X));
  else if (cursor < X && !fan.components.empty()) {
    // absorb the sliver into the last component
    WaveComponent& last = fan.components.back();
    if (last.kind == ComponentKind::Rarefaction) last = make_rarefaction(c, map, last.x0, X);
    else last = make_shock(c, map, last.x0, X, last.kind == ComponentKind::Contact);
  }
  fan.components.front().left = fan.left;
  fan.components.back().right = fan.right;
  return fan;
}

WaveFan single_discontinuity_fan(std::shared_ptr<const ElementaryCurve> cp) {
  const ElementaryCurve& c = *cp;
  WaveFan fan;
  fan.k = c.k;
  fan.left = c.u_left;
  fan.right = c.u.back();
  fan.size = c.s;
  fan.curve = cp;
  if (c.cells() == 0) return fan;
  fan.components.push_back(make_shock(c, c.model->speed_map(), 0.0, c.length(), false));
  fan.components.front().left = fan.left;
  fan.components.front().right = fan.right;
  return fan;
}

}  // namespace glimm
