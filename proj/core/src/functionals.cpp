#include "glimm/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "glimm/envelope.hpp"
#include "glimm/errors.hpp"

namespace glimm {

namespace {

constexpr int kGauss = 24;

}  // namespace

ShockPart decompose_shock(const WaveFan& fan, const WaveComponent& comp, double hysteresis) {
  ShockPart sp;
  sp.size = comp.size;
  sp.x0 = comp.x0;
  sp.x1 = comp.x1;
  sp.decomposed = true;
  const double s = fan.sign();
  const ElementaryCurve& c = *fan.curve;
  // sign of the second derivative of the oriented reduced flux = sign of d(speed)/dx
  const Chebyshev lam = Chebyshev::fit(comp.x0, comp.x1, 33, [&](double x) { return c.speed_x(x); });
  const Chebyshev d = lam.derivative();
  constexpr int samples = 129;
  std::vector<double> xs(samples), ds(samples);
  double dmax = 0;
  for (int i = 0; i < samples; ++i) {
    xs[i] = comp.x0 + (comp.x1 - comp.x0) * i / (samples - 1);
    ds[i] = d(xs[i]);
    dmax = std::max(dmax, std::abs(ds[i]));
  }
  const double band = std::max(hysteresis * dmax, 1e-300);
  std::vector<double> cuts{comp.x0};
  std::vector<char> labels;
  int state = 0;
  int last_idx = 0;
  for (int i = 0; i < samples; ++i) {
    int now = ds[i] > band ? 1 : (ds[i] < -band ? -1 : 0);
    if (now == 0) continue;
    if (state == 0) {
      state = now;
    } else if (now != state) {
      // zero of d between the last strong sample of the old sign and this one
      double lo = xs[last_idx], hi = xs[i];
      double flo = d(lo);
      for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = d(mid);
        if ((fm > 0) == (flo > 0) && fm != 0) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      labels.push_back(state > 0);
      cuts.push_back(0.5 * (lo + hi));
      state = now;
    }
    last_idx = i;
  }
  labels.push_back(state > 0);
  cuts.push_back(comp.x1);
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    sp.parts.push_back(s * (cuts[p + 1] - cuts[p]));
    sp.convex.push_back(labels[p]);
  }
  return sp;
}

WaveRecord make_record(std::shared_ptr<const RiemannSolution> owner, int k, double xa, double xb, long interface,
                       double position, const RecordOptions& opt) {
  WaveRecord w;
  w.k = k;
  w.interface = interface;
  w.position = position;
  w.owner = std::move(owner);
  w.fan = &w.owner->fans.at(static_cast<std::size_t>(k));
  const WaveFan& fan = *w.fan;
  const double X = fan.length();
  xa = std::clamp(xa, 0.0, X);
  xb = std::clamp(xb, xa, X);
  w.xa = xa;
  w.xb = xb;
  const double s = fan.sign();
  w.size = s * (xb - xa);
  w.left = fan.state_x(xa);
  w.right = fan.state_x(xb);
  for (const auto& comp : fan.components) {
    const double a = std::max(comp.x0, xa), b = std::min(comp.x1, xb);
    if (!(b > a)) continue;
    if (comp.kind == ComponentKind::Rarefaction) {
      w.rarefactions.push_back(s * (b - a));
      w.s_r += s * (b - a);
    } else {
      ShockPart sp;
      const bool whole = a == comp.x0 && b == comp.x1;
      if (whole && comp.kind == ComponentKind::Shock && (b - a) > opt.decompose_above) {
        sp = decompose_shock(fan, comp, opt.hysteresis);
      } else {
        sp.size = s * (b - a);
        sp.x0 = a;
        sp.x1 = b;
        sp.parts = {sp.size};
        sp.convex = {0};
      }
      w.shocks.push_back(std::move(sp));
      w.s_s += s * (b - a);
    }
  }
  return w;
}

Inventory inventory_from(const std::vector<PlacedSolution>& solutions, const RecordOptions& opt) {
  Inventory inv;
  for (const auto& p : solutions) {
    if (!p.solution) continue;
    for (std::size_t k = 0; k < p.solution->fans.size(); ++k) {
      const WaveFan& f = p.solution->fans[k];
      if (f.empty()) continue;
      inv.push_back(make_record(p.solution, static_cast<int>(k), 0.0, f.length(), p.interface, p.position, opt));
    }
  }
  std::stable_sort(inv.begin(), inv.end(), [](const WaveRecord& a, const WaveRecord& b) {
    if (a.position != b.position) return a.position < b.position;
    return a.k < b.k;
  });
  return inv;
}

double total_strength(const Inventory& inv) {
  double v = 0;
  for (const auto& w : inv) v += std::abs(w.size);
  return v;
}

namespace {

// c_same * same-family same-sign pairs + c_other * (opposite-sign same-family + approaching) pairs
void pair_sums(const Inventory& inv, double& same, double& other) {
  same = other = 0;
  for (std::size_t i = 0; i < inv.size(); ++i) {
    for (std::size_t j = i + 1; j < inv.size(); ++j) {
      const WaveRecord& a = inv[i];
      const WaveRecord& b = inv[j];
      const double p = std::abs(a.size * b.size);
      if (a.k == b.k) {
        if (a.size * b.size > 0) same += p;
        else other += p;
      } else {
        // approaching: the lower family sits to the right
        const WaveRecord& lowk = a.k < b.k ? a : b;
        const WaveRecord& highk = a.k < b.k ? b : a;
        if (lowk.position > highk.position) other += p;
      }
    }
  }
}

}  // namespace

double q1_potential(const Inventory& inv, double c0) {
  double same, other;
  pair_sums(inv, same, other);
  double inner = 0;
  for (const auto& w : inv) inner += 2 * std::abs(w.s_r * w.s_s) + w.s_r * w.s_r;
  return 2 * same + inner + c0 * other;
}

double i1_quantity(double sp, double sp_r, double sp_s, double ss, double ss_s, double merged_r) {
  if (!(sp * ss > 0)) return 0.0;
  return (std::abs(merged_r - sp_r) + std::abs(sp_s)) * std::abs(ss_s);
}

double i1_quantity(const WaveRecord& a, const WaveRecord& b, double merged_r) {
  if (a.k != b.k) return 0.0;
  return i1_quantity(a.size, a.s_r, a.s_s, b.size, b.s_s, merged_r);
}

double cancellation(double a, double b) {
  if (a * b < 0) return std::min(std::abs(a), std::abs(b));
  return 0.0;
}

double phi(double s, double delta0) {
  const double a = std::abs(s);
  if (a >= 2 * delta0) return 1.0;
  if (a <= delta0) return 0.0;
  return (a - delta0) / delta0;
}

double intrinsic_potential(const ShockPart& sh, double delta0) {
  const double f = phi(sh.size, delta0);
  if (f == 0) return 0.0;
  double convex = 0;
  for (std::size_t p = 0; p < sh.parts.size(); ++p)
    if (sh.convex[p]) convex += std::abs(sh.parts[p]);
  if (convex == 0) return 0.0;
  double cross = 0, squares = 0;
  for (std::size_t p = 0; p < sh.parts.size(); ++p) {
    for (std::size_t q = p + 1; q < sh.parts.size(); ++q) cross += std::abs(sh.parts[p] * sh.parts[q]);
    if (sh.convex[p]) squares += sh.parts[p] * sh.parts[p];
  }
  return f * (2 * cross + squares);
}

double inner_potential(const WaveRecord& w, double delta0) {
  double v = 0;
  for (const auto& sh : w.shocks) {
    for (double r : w.rarefactions) v += 2 * std::abs(sh.size * r);
    v += intrinsic_potential(sh, delta0);
  }
  for (double r : w.rarefactions) v += r * r;
  return v;
}

double qq_potential(const Inventory& inv, double c, double delta0) {
  double same, other;
  pair_sums(inv, same, other);
  double inner = 0;
  for (const auto& w : inv) inner += inner_potential(w, delta0);
  return 2 * same + inner + c * other;
}

// ---- cubic potential ----

namespace {

struct SpeedPiece {
  const WaveComponent* comp = nullptr;
  bool constant = true;
  double a = 0, b = 0;  // oriented overlap range
  double L = 0;         // length
  double lo = 0, hi = 0;
  double I = 0;  // integral of the speed
};

void collect_pieces(const WaveRecord& w, std::vector<SpeedPiece>& out) {
  for (const auto& comp : w.fan->components) {
    const double a = std::max(comp.x0, w.xa), b = std::min(comp.x1, w.xb);
    if (!(b > a)) continue;
    SpeedPiece p;
    p.comp = &comp;
    p.constant = comp.kind != ComponentKind::Rarefaction;
    p.a = a;
    p.b = b;
    p.L = b - a;
    p.lo = comp.speed_at(a);
    p.hi = comp.speed_at(b);
    p.I = comp.speed_integral(a, b);
    out.push_back(p);
  }
}

// int_a^b |sigma(y) - t| dy
double abs_deviation(const SpeedPiece& p, double t) {
  if (p.constant) return std::abs(p.lo - t) * p.L;
  if (t <= p.lo) return p.I - t * p.L;
  if (t >= p.hi) return t * p.L - p.I;
  const double y = std::clamp(p.comp->invert(t), p.a, p.b);
  const double below = t * (y - p.a) - p.comp->speed_integral(p.a, y);
  const double above = p.comp->speed_integral(y, p.b) - t * (p.b - y);
  return below + above;
}

double self_term(const SpeedPiece& p) {
  if (p.constant) return 0.0;
  const WaveComponent& c = *p.comp;
  const double Ea = c.sigma_int(p.a);
  return 2 * integrate_gauss([&](double x) { return c.sigma(x) * (x - p.a) - (c.sigma_int(x) - Ea); }, p.a, p.b,
                             kGauss);
}

double cross_term(const SpeedPiece& p, const SpeedPiece& q) {
  if (p.hi <= q.lo) return p.L * q.I - q.L * p.I;
  if (q.hi <= p.lo) return q.L * p.I - p.L * q.I;
  if (p.constant) return p.L * abs_deviation(q, p.lo);
  if (q.constant) return q.L * abs_deviation(p, q.lo);
  // split p where its speed crosses the ends of q's range
  std::vector<double> cuts{p.a};
  for (double t : {q.lo, q.hi}) {
    if (t > p.lo && t < p.hi) cuts.push_back(std::clamp(p.comp->invert(t), p.a, p.b));
  }
  cuts.push_back(p.b);
  std::sort(cuts.begin(), cuts.end());
  double sum = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    sum += integrate_gauss([&](double x) { return abs_deviation(q, p.comp->sigma(x)); }, cuts[i], cuts[i + 1],
                           kGauss);
  }
  return sum;
}

double group_cubic(const std::vector<SpeedPiece>& ps) {
  double total = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    total += self_term(ps[i]);
    for (std::size_t j = i + 1; j < ps.size(); ++j) total += 2 * cross_term(ps[i], ps[j]);
  }
  return total;
}

}  // namespace

double cubic_self_term(const WaveRecord& w) {
  std::vector<SpeedPiece> ps;
  collect_pieces(w, ps);
  return group_cubic(ps);
}

double cubic_potential(const Inventory& inv) {
  // sum over ordered pairs incl. self pairs = double integral over the union of each group
  std::map<std::pair<int, int>, std::vector<SpeedPiece>> groups;
  for (const auto& w : inv) {
    if (w.size == 0) continue;
    collect_pieces(w, groups[{w.k, w.size > 0 ? 1 : -1}]);
  }
  double total = 0;
  for (const auto& [key, ps] : groups) total += group_cubic(ps);
  return total;
}

// ---- amount of interaction ----

namespace {

struct FluxSamples {
  std::vector<double> x, y;
};

FluxSamples sample_flux(const ElementaryCurve& c, double xa, double xb, double h) {
  FluxSamples f;
  const double L = xb - xa;
  const int n = std::max(1, static_cast<int>(std::ceil(L / h - 1e-9)));
  const double y0 = c.flux_x(xa);
  f.x.resize(static_cast<std::size_t>(n) + 1);
  f.y.resize(f.x.size());
  for (int i = 0; i <= n; ++i) {
    const double x = i == n ? L : L * i / n;
    f.x[static_cast<std::size_t>(i)] = x;
    f.y[static_cast<std::size_t>(i)] = c.flux_x(xa + x) - y0;
  }
  return f;
}

double trapezoid_abs(const std::vector<double>& x, const std::vector<double>& d) {
  double s = 0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) s += 0.5 * (x[i + 1] - x[i]) * (std::abs(d[i]) + std::abs(d[i + 1]));
  return s;
}

double interaction_on(const ElementaryCurve& ca, double a0, double a1, const ElementaryCurve& cb, double b0,
                      double b1, int min_cells) {
  const double La = a1 - a0, Lb = b1 - b0;
  if (!(La > 0) || !(Lb > 0)) return 0.0;
  const double ha = La / std::max<double>(min_cells, static_cast<double>(ca.cells()) * La / std::max(ca.length(), 1e-300));
  const double hb = Lb / std::max<double>(min_cells, static_cast<double>(cb.cells()) * Lb / std::max(cb.length(), 1e-300));
  const double h = std::min(ha, hb);
  const FluxSamples A = sample_flux(ca, a0, a1, h);
  const FluxSamples B = sample_flux(cb, b0, b1, h);

  const EnvelopeResult ea = lower_convex_envelope({A.x, A.y});
  const EnvelopeResult eb = lower_convex_envelope({B.x, B.y});
  SampledFunction u;
  u.grid = A.x;
  u.values = A.y;
  const double ya = A.y.back();
  for (std::size_t i = 1; i < B.x.size(); ++i) {
    u.grid.push_back(La + B.x[i]);
    u.values.push_back(ya + B.y[i]);
  }
  const EnvelopeResult eu = lower_convex_envelope(u);

  const std::size_t na = A.x.size();
  std::vector<double> d1(na);
  for (std::size_t i = 0; i < na; ++i) d1[i] = ea.envelope.values[i] - eu.envelope.values[i];
  std::vector<double> x2(B.x.size()), d2(B.x.size());
  for (std::size_t i = 0; i < B.x.size(); ++i) {
    x2[i] = La + B.x[i];
    d2[i] = ya + eb.envelope.values[i] - eu.envelope.values[na - 1 + i];
  }
  return trapezoid_abs(A.x, d1) + trapezoid_abs(x2, d2);
}

}  // namespace

double amount_of_interaction(const WaveRecord& a, const WaveRecord& b, int min_cells) {
  if (a.k != b.k || !(a.size * b.size > 0)) return 0.0;
  return interaction_on(*a.fan->curve, a.xa, a.xb, *b.fan->curve, b.xa, b.xb, min_cells);
}

double amount_of_interaction(const ElementaryCurve& a, const ElementaryCurve& b, int min_cells) {
  if (a.k != b.k || !(a.s * b.s > 0)) return 0.0;
  return interaction_on(a, 0.0, a.length(), b, 0.0, b.length(), min_cells);
}

UpsilonValues upsilon(double V, double Qq, double Qcubic, double Q1, const FunctionalConstants& k) {
  return {V + k.C * (Qq + k.c * Qcubic), V + k.C1 * Q1};
}

FunctionalSnapshot evaluate_functionals(const Inventory& inv, const FunctionalConstants& k) {
  FunctionalSnapshot s;
  s.waves = inv.size();
  s.V = total_strength(inv);
  s.Q1 = q1_potential(inv, k.c0);
  s.Qq = qq_potential(inv, k.c, k.delta0);
  s.Qcubic = cubic_potential(inv);
  s.Q = s.Qq + k.c * s.Qcubic;
  const UpsilonValues u = upsilon(s.V, s.Qq, s.Qcubic, s.Q1, k);
  s.Upsilon = u.Upsilon;
  s.Upsilon1 = u.Upsilon1;
  return s;
}

}  // namespace glimm
