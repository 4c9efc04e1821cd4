#include "glimm/glimm.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>
#include <string>

#include "glimm/chebyshev.hpp"
#include "glimm/parallel.hpp"
#include "glimm/errors.hpp"

namespace glimm {

InitialData riemann_data(const State& uL, const State& uR, double x0) {
  InitialData d;
  d.value = [uL, uR, x0](double x) { return x < x0 ? uL : uR; };
  d.x_min = x0;
  d.x_max = x0;
  return d;
}

InitialData piecewise_constant(std::vector<double> breaks, std::vector<State> states) {
  if (states.size() != breaks.size() + 1) fail(ErrorKind::InvalidArgument, "need one more state than breaks");
  if (!std::is_sorted(breaks.begin(), breaks.end())) fail(ErrorKind::InvalidArgument, "breaks must be sorted");
  InitialData d;
  d.x_min = breaks.empty() ? 0.0 : breaks.front();
  d.x_max = breaks.empty() ? 0.0 : breaks.back();
  d.value = [b = std::move(breaks), s = std::move(states)](double x) {
    const auto it = std::upper_bound(b.begin(), b.end(), x);
    return s[static_cast<std::size_t>(it - b.begin())];
  };
  return d;
}

const State& GridProfile::at(long j) const {
  if (j < first) return left_bg;
  if (j > last()) return right_bg;
  return cells[static_cast<std::size_t>(j - first)];
}

double GridProfile::total_variation() const {
  double tv = 0;
  for (long j = first; j <= last() + 1; ++j) tv += (at(j) - at(j - 1)).norm();
  return tv;
}

GridProfile init_profile(const InitialData& u_bar, double eps, double theta0, double tv_budget, int pad) {
  if (!(eps > 0)) fail(ErrorKind::InvalidArgument, "mesh size must be positive");
  if (!(theta0 >= 0 && theta0 < 1)) fail(ErrorKind::InvalidArgument, "theta0 must lie in [0, 1)");
  GridProfile p;
  p.eps = eps;
  const long lo = static_cast<long>(std::floor(u_bar.x_min / eps)) - pad;
  const long hi = static_cast<long>(std::ceil(u_bar.x_max / eps)) + pad;
  p.first = lo;
  for (long j = lo; j <= hi; ++j) p.cells.push_back(u_bar.value((static_cast<double>(j) + theta0) * eps));
  p.left_bg = u_bar.value(u_bar.x_min - 1.0 - eps);
  p.right_bg = u_bar.value(u_bar.x_max + 1.0 + eps);
  const double tv = p.total_variation();
  if (tv > tv_budget) {
    std::ostringstream os;
    os << "total variation " << tv << " exceeds budget " << tv_budget;
    fail(ErrorKind::TVBudgetExceeded, os.str());
  }
  return p;
}

// ---- cache ----

RiemannCache::RiemannCache(const SystemModel& model, RiemannOptions opt, std::size_t capacity)
    : model_(model), opt_(std::move(opt)), capacity_(capacity) {}

std::shared_ptr<const RiemannSolution> RiemannCache::solve(const State& uL, const State& uR) {
  std::string key(static_cast<std::size_t>(uL.size() + uR.size()) * sizeof(double), '\0');
  std::memcpy(key.data(), uL.data(), static_cast<std::size_t>(uL.size()) * sizeof(double));
  std::memcpy(key.data() + static_cast<std::size_t>(uL.size()) * sizeof(double), uR.data(),
              static_cast<std::size_t>(uR.size()) * sizeof(double));
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = map_.find(key);
    if (it != map_.end()) {
      ++hits_;
      return it->second;
    }
  }
  auto sol = std::make_shared<const RiemannSolution>(solve_riemann(model_, uL, uR, opt_));
  std::lock_guard<std::mutex> lock(mu_);
  ++misses_;
  if (map_.size() >= capacity_) map_.clear();
  map_.emplace(std::move(key), sol);
  return sol;
}

// ---- stepping ----

const RiemannSolution* InterfaceFans::at(long j) const {
  if (j < first || j >= first + static_cast<long>(solutions.size())) return nullptr;
  return solutions[static_cast<std::size_t>(j - first)].get();
}

std::vector<PlacedSolution> InterfaceFans::placed() const {
  std::vector<PlacedSolution> out;
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    if (!solutions[i]) continue;
    const long j = first + static_cast<long>(i);
    out.push_back({solutions[i], j, static_cast<double>(j) * eps});
  }
  return out;
}

InterfaceFans compute_fans(const GridProfile& p, RiemannCache& cache, int threads) {
  InterfaceFans f;
  f.first = p.first;
  f.eps = p.eps;
  const long count = static_cast<long>(p.cells.size()) + 1;
  f.solutions.resize(static_cast<std::size_t>(count));
  parallel_for(static_cast<std::size_t>(count), threads, [&](std::size_t i) {
    const long j = p.first + static_cast<long>(i);
    const State& uL = p.at(j - 1);
    const State& uR = p.at(j);
    if (uL == uR) return;
    auto sol = cache.solve(uL, uR);
    const double lo = sol->min_speed(), hi = sol->max_speed();
    if (lo < -1e-12 || hi > 1 + 1e-12) {
      std::ostringstream os;
      os << "interface " << j << ": fan speeds [" << lo << ", " << hi << "] leave [0, 1]";
      fail(ErrorKind::CFLViolation, os.str());
    }
    f.solutions[i] = std::move(sol);
  });
  return f;
}

GridProfile sample_profile(const GridProfile& p, const InterfaceFans& fans, double theta) {
  GridProfile q;
  q.eps = p.eps;
  q.time_index = p.time_index + 1;
  q.first = p.first - 1;
  q.left_bg = p.left_bg;
  q.right_bg = p.right_bg;
  const long last = p.last() + 1;
  q.cells.reserve(static_cast<std::size_t>(last - q.first + 1));
  for (long j = q.first; j <= last; ++j) {
    const RiemannSolution* s = fans.at(j);
    q.cells.push_back(s ? evaluate_solution(*s, theta) : p.at(j));
  }
  return q;
}

GridProfile step(const SystemModel& model, const GridProfile& p, double theta, const RiemannOptions& opt) {
  RiemannCache cache(model, opt);
  return sample_profile(p, compute_fans(p, cache), theta);
}

// ---- interactions ----

namespace {

Inventory incoming_inventory(const InteractionEntry& e, const RecordOptions& ropt) {
  Inventory inv;
  const std::size_t n = e.split_left.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (e.left_solution && e.incoming_left[k] != 0) {
      const WaveFan& f = e.left_solution->fans[k];
      inv.push_back(make_record(e.left_solution, static_cast<int>(k), e.split_left[k], f.length(), 0, 0.0, ropt));
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (e.right_solution && e.incoming_right[k] != 0)
      inv.push_back(make_record(e.right_solution, static_cast<int>(k), 0.0, e.split_right[k], 1, 1.0, ropt));
  }
  return inv;
}

const WaveRecord* find_record(const Inventory& inv, int k, long side) {
  for (const auto& w : inv)
    if (w.k == k && w.interface == side) return &w;
  return nullptr;
}

double ratio(double num, double den) {
  num = std::max(0.0, num);
  if (den > 0) return num / den;
  return num > 1e-14 ? HUGE_VAL : 0.0;
}

}  // namespace

InteractionDeltas interaction_deltas(const InteractionEntry& e, const FunctionalConstants& kc,
                                     const RecordOptions& ropt) {
  InteractionDeltas d;
  const Inventory in = incoming_inventory(e, ropt);
  Inventory out = e.outgoing ? inventory_from({{e.outgoing, 0, 0.5}}, ropt) : Inventory{};
  const FunctionalSnapshot a = evaluate_functionals(in, kc);
  const FunctionalSnapshot b = evaluate_functionals(out, kc);
  d.dV = b.V - a.V;
  d.dQ1 = b.Q1 - a.Q1;
  d.dQq = b.Qq - a.Qq;
  d.dQcubic = b.Qcubic - a.Qcubic;
  d.dUpsilon = b.Upsilon - a.Upsilon;
  d.dUpsilon1 = b.Upsilon1 - a.Upsilon1;

  const std::size_t n = e.incoming_left.size();
  double opposite = 0, I_small = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) d.transversal += std::abs(e.incoming_left[i] * e.incoming_right[j]);

  const SystemModel* model = e.outgoing ? e.outgoing->model
                                        : (e.left_solution ? e.left_solution->model : nullptr);
  for (std::size_t k = 0; k < n; ++k) {
    const double sp = e.incoming_left[k], ss = e.incoming_right[k];
    d.cancellation += cancellation(sp, ss);
    if (sp * ss < 0) opposite += std::abs(sp * ss);
    if (!(sp * ss > 0) || !model) continue;
    const WaveRecord* wp = find_record(in, static_cast<int>(k), 0);
    const WaveRecord* ws = find_record(in, static_cast<int>(k), 1);
    if (!wp || !ws) continue;
    // merged k-wave from u# = T_{k-1}(s''_{k-1}) ... T_1(s''_1)[u']
    State u_sharp = wp->left;
    const RiemannOptions& ro = RiemannOptions{};
    for (std::size_t j = 0; j < k; ++j)
      u_sharp = curve_endpoint(*model, u_sharp, static_cast<int>(j), e.incoming_right[j],
                               curve_cells(e.incoming_right[j], ro.curve), ro.curve);
    double merged_r = 0;
    bool crossed = false;
    int curvature = 0;
    try {
      auto curve = std::make_shared<const ElementaryCurve>(solve_curve(*model, u_sharp, static_cast<int>(k), sp + ss, ro.curve));
      merged_r = wave_fan_from_curve(curve).rarefaction_size();
      for (const auto& md : model->field(static_cast<int>(k)).manifolds) {
        if (md.g && md.g(curve->u.front()) * md.g(curve->u.back()) < 0) {
          crossed = true;
          curvature = md.curvature_sign;
        }
      }
    } catch (const Error&) {
      continue;
    }
    const double i1 = i1_quantity(*wp, *ws, merged_r);
    d.I1 += i1;
    double ival = i1;
    // mirrored branch when the crossed manifold has positive curvature (sign-adjusted for negative waves)
    if (crossed && curvature * (sp > 0 ? 1 : -1) > 0)
      ival = (std::abs(merged_r - ws->s_r) + std::abs(ws->s_s)) * std::abs(wp->s_s);
    d.I += ival;
    if (std::abs(sp) <= kc.delta0 / 2 && std::abs(ss) <= kc.delta0 / 2) I_small += ival;
    d.J += amount_of_interaction(*wp, *ws);
  }
  d.tv1_constant = ratio(d.dV + d.cancellation, d.transversal + d.I1);
  d.tv_constant = ratio(d.dV + d.cancellation, d.transversal + d.J);
  d.q1_margin = d.dQ1 + 0.5 * (d.transversal + opposite + d.I1);
  d.q_margin = (b.Q - a.Q) + 0.5 * (d.transversal + opposite + I_small + d.J);
  return d;
}

// ---- evolution ----

FunctionalConstants resolve_constants(const EvolveOptions& opt, double V0) {
  FunctionalConstants k = opt.constants;
  if (!opt.constants_absolute) {
    const double v = V0 > 0 ? V0 : 1.0;
    k.C = opt.C_factor / v;
    k.C1 = opt.C_factor / v;
  }
  return k;
}

namespace {

std::vector<InteractionEntry> interactions(const GridProfile& old_p, const InterfaceFans& old_f, const GridProfile& new_p,
                                           const InterfaceFans& new_f, double theta, std::uint64_t step) {
  std::vector<InteractionEntry> out;
  for (long j = new_p.first; j <= new_p.last() + 1; ++j) {
    const RiemannSolution* L = old_f.at(j - 1);
    const RiemannSolution* R = old_f.at(j);
    if (!L || !R) continue;
    const std::size_t n = L->fans.size();
    InteractionEntry e;
    e.step = step;
    e.interface = j;
    e.theta = theta;
    e.split_left.assign(n, 0);
    e.split_right.assign(n, 0);
    e.incoming_left.assign(n, 0);
    e.incoming_right.assign(n, 0);
    double tl = 0, tr = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const WaveFan& fl = L->fans[k];
      const WaveFan& fr = R->fans[k];
      if (!fl.empty()) {
        e.split_left[k] = fl.split_point(theta);
        e.incoming_left[k] = fl.sign() * (fl.length() - e.split_left[k]);
      }
      if (!fr.empty()) {
        e.split_right[k] = fr.split_point(theta);
        e.incoming_right[k] = fr.sign() * e.split_right[k];
      }
      tl += std::abs(e.incoming_left[k]);
      tr += std::abs(e.incoming_right[k]);
    }
    if (tl == 0 || tr == 0) continue;
    e.left_solution = old_f.solutions[static_cast<std::size_t>(j - 1 - old_f.first)];
    e.right_solution = old_f.solutions[static_cast<std::size_t>(j - old_f.first)];
    e.u_left = new_p.at(j - 1);
    e.u_mid = old_p.at(j - 1);
    e.u_right = new_p.at(j);
    const long idx = j - new_f.first;
    if (idx >= 0 && idx < static_cast<long>(new_f.solutions.size()))
      e.outgoing = new_f.solutions[static_cast<std::size_t>(idx)];
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

Trajectory evolve(const SystemModel& model, const InitialData& u_bar, double eps, double T,
                  const SamplingSequence& seq, const EvolveOptions& opt) {
  if (!(T >= 0)) fail(ErrorKind::InvalidArgument, "final time must be nonnegative");
  Trajectory tr;
  tr.eps = eps;
  tr.steps = static_cast<std::uint64_t>(std::ceil(T / eps - 1e-9));
  RiemannCache cache(model, opt.riemann);
  RecordOptions ropt;
  ropt.decompose_above = opt.constants.delta0;

  GridProfile p = init_profile(u_bar, eps, opt.theta0, opt.tv_budget);
  InterfaceFans f = compute_fans(p, cache, opt.threads);

  auto snapshot = [&](const InterfaceFans& fans) { return evaluate_functionals(inventory_from(fans.placed(), ropt), tr.constants); };

  if (opt.functionals) {
    const double V0 = total_strength(inventory_from(f.placed(), ropt));
    tr.constants = resolve_constants(opt, V0);
    tr.snapshots.push_back(snapshot(f));
  } else {
    tr.constants = resolve_constants(opt, 1.0);
  }
  if (opt.keep_profiles) tr.profiles.push_back(p);
  if (opt.keep_fans) tr.fans.push_back(f);

  for (std::uint64_t i = 0; i < tr.steps; ++i) {
    const double theta = seq(i + 1);
    tr.thetas.push_back(theta);
    GridProfile q = sample_profile(p, f, theta);
    InterfaceFans g = compute_fans(q, cache, opt.threads);
    double canc = 0;
    if (opt.record_ledger || opt.functionals) {
      auto entries = interactions(p, f, q, g, theta, i);
      for (const auto& e : entries)
        for (std::size_t k = 0; k < e.incoming_left.size(); ++k) canc += cancellation(e.incoming_left[k], e.incoming_right[k]);
      if (opt.record_ledger)
        for (auto& e : entries) tr.ledger.push_back(std::move(e));
    }
    if (opt.functionals) {
      FunctionalSnapshot s = snapshot(g);
      s.dUpsilon = s.Upsilon - tr.snapshots.back().Upsilon;
      s.dUpsilon1 = s.Upsilon1 - tr.snapshots.back().Upsilon1;
      s.cancellation = canc;
      tr.snapshots.push_back(s);
    }
    p = std::move(q);
    f = std::move(g);
    if (opt.keep_profiles) tr.profiles.push_back(p);
    if (opt.keep_fans) tr.fans.push_back(f);
  }
  tr.final_profile = p;
  return tr;
}

FunctionalSnapshot profile_functionals(const SystemModel& model, const GridProfile& p, const FunctionalConstants& k,
                                       const RiemannOptions& ropt, double decompose_above) {
  RiemannCache cache(model, ropt);
  RecordOptions r;
  r.decompose_above = decompose_above;
  return evaluate_functionals(inventory_from(compute_fans(p, cache).placed(), r), k);
}

// ---- distances ----

double l1_distance(const GridProfile& a, const GridProfile& b, double x_lo, double x_hi) {
  if (!(x_hi > x_lo)) fail(ErrorKind::WindowTooSmall, "empty window");
  std::vector<double> xs{x_lo, x_hi};
  for (const GridProfile* p : {&a, &b})
    for (long j = p->first; j <= p->last() + 1; ++j) {
      const double x = p->x_left(j);
      if (x > x_lo && x < x_hi) xs.push_back(x);
    }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  double s = 0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double m = 0.5 * (xs[i] + xs[i + 1]);
    const State& ua = a.at(static_cast<long>(std::floor(m / a.eps)));
    const State& ub = b.at(static_cast<long>(std::floor(m / b.eps)));
    s += (ua - ub).norm() * (xs[i + 1] - xs[i]);
  }
  return s;
}

double l1_distance(const GridProfile& a, const GridProfile& b) {
  const double lo = std::min(a.x_left(a.first), b.x_left(b.first));
  const double hi = std::max(a.x_left(a.last() + 1), b.x_left(b.last() + 1));
  if ((a.left_bg - b.left_bg).norm() > 0 || (a.right_bg - b.right_bg).norm() > 0)
    fail(ErrorKind::WindowTooSmall, "profiles have different far-field states");
  return l1_distance(a, b, lo, hi);
}

State ExactSolution::at(double t, double x) const {
  if (t <= 0) return x < x0 ? solution->u_left : solution->u_right;
  return evaluate_solution(*solution, (x - x0) / t);
}

std::vector<double> ExactSolution::breakpoints(double t) const {
  std::vector<double> out;
  for (const auto& f : solution->fans)
    for (const auto& c : f.components) {
      out.push_back(x0 + c.speed_lo * t);
      if (c.kind == ComponentKind::Rarefaction) out.push_back(x0 + c.speed_hi * t);
    }
  if (out.empty()) out.push_back(x0);
  return out;
}

double l1_distance(const GridProfile& a, const ExactSolution& u, double t, double x_lo, double x_hi) {
  if (!(x_hi > x_lo)) fail(ErrorKind::WindowTooSmall, "empty window");
  for (long j = a.first - 1; j <= a.last(); ++j) {
    const double x = a.x_left(j + 1);  // jump location
    if ((x < x_lo || x > x_hi) && (a.at(j) - a.at(j + 1)).norm() > 0)
      fail(ErrorKind::WindowTooSmall, "profile varies outside the window");
  }
  std::vector<double> xs{x_lo, x_hi};
  for (double x : u.breakpoints(t)) {
    if (x < x_lo || x > x_hi) fail(ErrorKind::WindowTooSmall, "exact solution varies outside the window");
    xs.push_back(x);
  }
  for (long j = a.first; j <= a.last() + 1; ++j) {
    const double x = a.x_left(j);
    if (x > x_lo && x < x_hi) xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  double s = 0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double lo = xs[i], hi = xs[i + 1];
    if (!(hi > lo)) continue;
    const State& v = a.at(static_cast<long>(std::floor(0.5 * (lo + hi) / a.eps)));
    s += integrate_gauss([&](double x) { return (u.at(t, x) - v).norm(); }, lo, hi, 16);
  }
  return s;
}

double l1_distance(const GridProfile& a, const ExactSolution& u, double t) {
  double lo = a.x_left(a.first), hi = a.x_left(a.last() + 1);
  for (double x : u.breakpoints(t)) {
    lo = std::min(lo, x - a.eps);
    hi = std::max(hi, x + a.eps);
  }
  return l1_distance(a, u, t, lo, hi);
}

}  // namespace glimm
