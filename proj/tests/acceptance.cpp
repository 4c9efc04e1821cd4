// Acceptance run: one PASS/FAIL line per criterion, thresholds fixed below.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "glimm/config.hpp"
#include "glimm/envelope.hpp"
#include "glimm/functionals.hpp"
#include "glimm/harness.hpp"
#include "glimm/parallel.hpp"
#include "glimm/riemann.hpp"
#include "glimm/sampler.hpp"
#include "glimm/tracing.hpp"
#include "oracles.hpp"

using namespace glimm;

namespace {

// pinned tolerances and budgets
constexpr double kEnvelopeRel = 1e-12;
constexpr double kEnvelopeSeconds = 5;
constexpr double kTangencyTol = 1e-6;
constexpr double kBoundRatio = 1.0;
constexpr double kBoundSeconds = 60;
constexpr double kMonitorRel = 1e-9;  // applied inside monitor_suite
constexpr double kSlopeMin = 0.9;
constexpr double kConvergeSeconds = 600;
constexpr double kTraceMax = 100;
constexpr double kTraceDrift = 2;
constexpr double kTraceZero = 1e-6;  // constants below this are solver roundoff over |dUpsilon|
constexpr double kSpeedK = 10;
constexpr double kScalarExact = 1e-13;
constexpr double kClosedForm = 1e-8;
constexpr double kSelfTermRel = 0.01;

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

State s1(double a) { return State::Constant(1, a); }

std::shared_ptr<const RiemannSolution> rp(const SystemModel& m, const State& a, const State& b,
                                          const RiemannOptions& o = {}) {
  return std::make_shared<RiemannSolution>(solve_riemann(m, a, b, o));
}

WaveRecord whole(std::shared_ptr<const RiemannSolution> s, int k, long interface = 0) {
  return make_record(s, k, 0.0, s->fans[static_cast<std::size_t>(k)].length(), interface,
                     static_cast<double>(interface));
}

// monitor suite: tight domains so the normalized speeds spread and waves meet
ExperimentConfig suite(const std::string& name) {
  ExperimentConfig c;
  c.eps = {1.0 / 64};
  c.trials = 50;
  c.initial.type = "random";
  c.initial.tv = 0.1;
  if (name == "cubic") {
    c.model = "cubic";
    c.domain = Box{s1(-0.25), s1(0.25)};
    c.T = 2.0;
    c.initial.jumps = 8;
    c.initial.width = 0.12;
    c.seed = 11;
  } else if (name == "quartic") {
    c.model = "quartic";
    c.T = 8.0;
    c.initial.jumps = 8;
    c.initial.width = 0.12;
    c.seed = 12;
  } else {
    c.model = "p-system";
    c.T = 1.0;
    c.initial.jumps = 6;
    c.initial.width = 0.25;
    c.seed = 13;
  }
  return c;
}

const char* kSuites[] = {"cubic", "quartic", "p-system"};

// ---- 1 ----
Outcome envelope_oracle() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> U(0, 1);
  std::vector<SampledFunction> fs;
  for (int t = 0; t < 500; ++t) {
    const int n = 2 + static_cast<int>(rng() % 199);  // 2..200
    SampledFunction f;
    double x = U(rng);
    const int shape = t % 4;
    for (int i = 0; i < n; ++i) {
      x += 0.01 + U(rng);
      f.grid.push_back(x);
      double y = U(rng) - 0.5;
      if (shape == 1) y += std::sin(3 * x);
      if (shape == 2) y = std::pow(x - n / 4.0, 3) + 0.1 * y;
      if (shape == 3) y = std::floor(2 * U(rng));  // many collinear ties
      f.values.push_back(y);
    }
    fs.push_back(std::move(f));
  }
  double swept = 0, worst = 0;
  for (const auto& f : fs) {
    const auto t0 = Clock::now();
    const EnvelopeResult e = lower_convex_envelope(f);
    swept += seconds_since(t0);
    const std::vector<double> o = oracle::convex_minorant(f.grid, f.values);
    double scale = 1;
    for (double v : f.values) scale = std::max(scale, std::fabs(v));
    for (std::size_t i = 0; i < f.size(); ++i)
      worst = std::max(worst, std::fabs(e.envelope.values[i] - o[i]) / scale);
  }
  return {worst <= kEnvelopeRel && swept < kEnvelopeSeconds,
          fmt("500 functions, max rel err %.3g (tol %.0e), sweep time %.3f s", worst, kEnvelopeRel, swept)};
}

// ---- 2 ----
Outcome riemann_correctness() {
  ModelPtr cubic = make_cubic();
  const RiemannSolution sol = solve_riemann(*cubic, s1(-1), s1(1));
  const WaveFan& f = sol.fans[0];
  bool shape = f.components.size() == 2 && f.components[0].kind == ComponentKind::Shock &&
               f.components[1].kind == ComponentKind::Rarefaction;
  double mid = NAN, speed = NAN, end = NAN;
  if (shape) {
    mid = f.state_x(f.components[0].x1)(0);
    speed = f.components[0].raw_lo;
    end = f.state_x(f.components[1].x1)(0);
  }
  const bool tangency = shape && std::fabs(mid - 0.5) <= kTangencyTol && std::fabs(speed - 0.75) <= kTangencyTol &&
                        std::fabs(end - 1.0) <= kTangencyTol;

  std::size_t bad = 0, shocks = 0, errors = 0;
  std::mt19937_64 rng(777);
  for (ModelPtr m : {make_cubic(), make_quartic()}) {
    const Box& box = m->domain();
    std::uniform_real_distribution<double> U(box.lo(0), box.hi(0));
    for (int t = 0; t < 1000; ++t) {
      try {
        const RiemannSolution s = solve_riemann(*m, s1(U(rng)), s1(U(rng)));
        const LiuReport r = liu_admissibility_check(*m, s.fans[0], 64);
        shocks += r.shocks;
        if (!r.admissible()) ++bad;
      } catch (const std::exception&) {
        ++errors;
      }
    }
  }
  return {tangency && bad == 0 && errors == 0,
          fmt("cubic(-1,1): middle %.9g speed %.9g end %.9g; Liu: %zu of 2000 inadmissible, %zu errors, %zu shocks",
              mid, speed, end, bad, errors, shocks)};
}

// ---- 3 ----
Outcome discrepancy_bound() {
  const auto t0 = Clock::now();
  const BoundReport r = verify_discrepancy_bound(SamplingSequence::vdc(), 4096);
  const double dt = seconds_since(t0);
  return {r.worst.ratio <= kBoundRatio && dt < kBoundSeconds && !r.sampled,
          fmt("sup ratio %.6f at (m,n)=(%llu,%llu), %llu pairs, %.2f s", r.worst.ratio,
              static_cast<unsigned long long>(r.worst.m), static_cast<unsigned long long>(r.worst.n),
              static_cast<unsigned long long>(r.pairs), dt)};
}

// ---- 4 ----
CalibrationResult g_cal;

Outcome monotonicity() {
  // calibrate on separate seeds, then test the 50 seeded trials with the result
  std::vector<ExperimentConfig> training;
  for (const char* s : kSuites) {
    ExperimentConfig c = suite(s);
    c.seed += 1000;
    training.push_back(c);
  }
  g_cal = calibrate(training, 20);
  std::string detail = fmt("calibrated c=%g C_factor=%g (%d rounds%s);", g_cal.c, g_cal.C_factor, g_cal.rounds,
                           g_cal.converged ? "" : ", not converged");
  bool ok = g_cal.converged;
  for (const char* s : kSuites) {
    ExperimentConfig c = suite(s);
    c.constants.c = g_cal.c;
    c.C_factor = g_cal.C_factor;
    const MonitorReport r = monitor_suite(c, c.trials);
    std::size_t failed = 0, inter = 0;
    for (const auto& t : r.trials) {
      if (!t.failure.empty()) ++failed;
      inter += t.interactions;
    }
    ok = ok && r.ok() && failed == 0;
    detail += fmt(" %s: %zu violations, %zu failed trials, %zu interactions;", s, r.violations.size(), failed, inter);
  }
  return {ok, detail + fmt(" tol %.0e V(0)", kMonitorRel)};
}

// ---- 5 ----
Outcome convergence() {
  ExperimentConfig c;
  c.model = "cubic";
  c.T = 0.5;
  c.initial.type = "riemann";
  c.initial.uL = s1(-1);
  c.initial.uR = s1(1);
  c.reference = "exact";
  c.eps.clear();
  for (int p = 6; p <= 11; ++p) c.eps.push_back(std::ldexp(1.0, -p));
  const auto t0 = Clock::now();
  const ConvergenceResult r = run_convergence(c);
  const double dt = seconds_since(t0);
  bool failures = false;
  for (const auto& row : r.rows) failures = failures || !row.failure.empty();
  const double slope = r.slope ? *r.slope : NAN;
  return {r.slope && slope >= kSlopeMin && r.tail_nonincreasing && !failures && dt < kConvergeSeconds,
          fmt("slope %.4f (min %.1f), tail non-increasing %s, %.1f s", slope, kSlopeMin,
              r.tail_nonincreasing ? "yes" : "no", dt)};
}

// ---- 6 ----
struct TraceMax {
  double secondary = 0, size = 0, speed = 0;
  bool finite = true;
  std::size_t intervals = 0;
};

TraceMax trace_model(const ExperimentConfig& c, double eps) {
  ModelPtr model = model_from(c);
  const SamplingSequence seq = SamplingSequence::parse(c.sequence);
  EvolveOptions o = evolve_options_from(c, *model);
  o.keep_fans = true;
  o.keep_profiles = false;
  o.functionals = true;
  std::vector<TraceMax> per(static_cast<std::size_t>(c.trials));
  parallel_for(per.size(), std::max(1, c.threads), [&](std::size_t t) {
    const InitialData u0 = initial_from(*model, c.initial, c.seed, t);
    const Trajectory tr = evolve(*model, u0, eps, c.T, seq, o);
    const TracingSuite s = trace_suite(tr, 64, 200, c.seed * 7919 + t);
    per[t] = {s.secondary_max, s.size_max, s.speed_max, s.finite, s.samples.size()};
  });
  TraceMax m;
  for (const auto& p : per) {
    m.secondary = std::max(m.secondary, p.secondary);
    m.size = std::max(m.size, p.size);
    m.speed = std::max(m.speed, p.speed);
    m.finite = m.finite && p.finite;
    m.intervals += p.intervals;
  }
  return m;
}

bool within_factor(double a, double b, double f) {
  if (a <= kTraceZero && b <= kTraceZero) return true;
  return std::max(a, b) < f * std::min(a, b);
}

Outcome tracing_bounds() {
  bool ok = true;
  std::string detail;
  for (const char* s : kSuites) {
    ExperimentConfig c = suite(s);
    c.constants.c = g_cal.c;
    c.C_factor = g_cal.C_factor;
    const double eps = c.eps.front();
    const TraceMax a = trace_model(c, eps), b = trace_model(c, eps / 2);
    const bool bounded = a.finite && b.finite && std::max({a.secondary, a.size, a.speed, b.secondary, b.size, b.speed}) <= kTraceMax;
    const bool stable = within_factor(a.secondary, b.secondary, kTraceDrift) && within_factor(a.size, b.size, kTraceDrift) &&
                        within_factor(a.speed, b.speed, kTraceDrift);
    ok = ok && bounded && stable;
    detail += fmt(" %s: eps (%.3g, %.3g, %.3g) eps/2 (%.3g, %.3g, %.3g)%s%s;", s, a.secondary, a.size, a.speed,
                  b.secondary, b.size, b.speed, bounded ? "" : " UNBOUNDED", stable ? "" : " DRIFT");
  }
  return {ok, "secondary/size/speed constants:" + detail};
}

// ---- 7 ----
struct Mergers {
  int made = 0, scalar = 0;
  double K = 0, scalar_worst = 0;
};

// count mergers per model: Burgers, cubic, p-system
Mergers shock_mergers(const RiemannOptions& ro, int n_burgers, int n_cubic, int n_psys, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0, 1);
  Mergers out;
  ModelPtr burgers = make_burgers(), cubic = make_cubic(), psys = make_p_system();
  const int total = n_burgers + n_cubic + n_psys;

  auto single_shock = [](const RiemannSolution& s, int k) {
    const WaveFan& f = s.fans[static_cast<std::size_t>(k)];
    return f.components.size() == 1 && f.components[0].kind == ComponentKind::Shock;
  };

  for (int attempts = 0; out.made < total && attempts < 100000; ++attempts) {
    const int which = out.made < n_burgers ? 0 : (out.made < n_burgers + n_cubic ? 1 : 2);
    const SystemModel& m = which == 0 ? *burgers : (which == 1 ? *cubic : *psys);
    const Box& box = m.domain();
    try {
      State uL(m.dimension());
      for (int i = 0; i < m.dimension(); ++i) uL(i) = box.lo(i) + (0.3 + 0.4 * U(rng)) * (box.hi(i) - box.lo(i));
      const int k = m.dimension() == 1 ? 0 : static_cast<int>(rng() % 2);
      const double span = 0.15 * (box.hi(0) - box.lo(0));
      const double sg = U(rng) < 0.5 ? -1.0 : 1.0;
      const double a = sg * span * (0.1 + U(rng)), b = sg * span * (0.1 + U(rng));
      const State uM = curve_right_state(solve_curve(m, uL, k, a, ro.curve));
      const State uR = curve_right_state(solve_curve(m, uM, k, b, ro.curve));
      auto l = rp(m, uL, uM, ro), r = rp(m, uM, uR, ro);
      if (!single_shock(*l, k) || !single_shock(*r, k)) continue;
      // approaching: the left shock is faster
      if (!(l->fans[k].components[0].speed_lo > r->fans[k].components[0].speed_lo)) continue;
      auto o = rp(m, uL, uR, ro);
      const SpeedAverage sa = speed_average_check(whole(l, k, 0), whole(r, k, 1), whole(o, k, 0));
      if (m.dimension() == 1) {
        out.scalar_worst = std::max(out.scalar_worst, sa.residual);
        ++out.scalar;
      } else {
        out.K = std::max(out.K, sa.ratio);
      }
      ++out.made;
    } catch (const std::exception&) {
      continue;
    }
  }
  return out;
}

Outcome speed_average() {
  // default curves are integral curves of r_k, which compose exactly; the projected speed does not
  const Mergers e = shock_mergers(RiemannOptions{}, 50, 50, 100, 4242);
  RiemannOptions proj;
  proj.curve.speed = SpeedApproximation::Projected;
  const Mergers p = shock_mergers(proj, 0, 0, 100, 4243);
  const double K = std::max(e.K, p.K);
  return {e.made == 200 && p.made == 100 && K <= kSpeedK && e.scalar_worst <= kScalarExact,
          fmt("%d mergers (%d scalar) + %d projected-speed p-system mergers, K = %.4g (max %.0f; eigenvalue %.3g, "
              "projected %.3g), scalar max residual %.3g",
              e.made, e.scalar, p.made, K, kSpeedK, e.K, p.K, e.scalar_worst)};
}

// ---- 8 ----
Outcome closed_forms() {
  ModelPtr b = make_burgers();
  std::string detail;

  // J for two approaching shocks against |s' s''| |sigma' - sigma''|
  auto l = rp(*b, s1(0.9), s1(0.8)), r = rp(*b, s1(0.8), s1(0.6));
  const WaveRecord wl = whole(l, 0, 0), wr = whole(r, 0, 1);
  const double J = amount_of_interaction(wl, wr);
  const double closed = std::fabs(wl.size * wr.size) *
                        std::fabs(l->fans[0].components[0].speed_lo - r->fans[0].components[0].speed_lo);
  const bool j_ok = std::fabs(J - closed) <= kClosedForm;
  detail += fmt("J shock-shock %.12g vs %.12g (ratio %.6f)%s;", J, closed, J / closed, j_ok ? "" : " MISMATCH");

  // I1 rarefaction-rarefaction and shock-shock
  auto ra = rp(*b, s1(0.2), s1(0.3)), rb = rp(*b, s1(0.3), s1(0.5)), ro = rp(*b, s1(0.2), s1(0.5));
  const WaveRecord ra_w = whole(ra, 0, 0), rb_w = whole(rb, 0, 1), ro_w = whole(ro, 0, 0);
  const double i_rr = i1_quantity(ra_w, rb_w, ro_w.s_r);
  auto so = rp(*b, s1(0.9), s1(0.6));
  const double i_ss = i1_quantity(wl, wr, whole(so, 0, 0).s_r);
  const double i_ss_want = std::fabs(wl.size * wr.size);
  const bool i_ok = i_rr == 0.0 && i_ss == i_ss_want;
  detail += fmt(" I1 rr %.3g, ss %.17g vs %.17g%s;", i_rr, i_ss, i_ss_want, i_ok ? "" : " MISMATCH");

  // self term of a single rarefaction under grid doubling
  const double s = 0.3, want = s * s * s / 3;
  bool self_ok = true;
  for (int cells : {64, 128}) {
    RiemannOptions o;
    o.curve.h_min = 1.0;
    o.curve.min_cells = cells;
    auto w = rp(*b, s1(0.2), s1(0.2 + s), o);
    const double v = cubic_self_term(whole(w, 0, 0));
    self_ok = self_ok && std::fabs(v - want) <= kSelfTermRel * want;
    detail += fmt(" self term (%d cells) %.10g vs %.10g;", cells, v, want);
  }
  return {j_ok && i_ok && self_ok, detail};
}

}  // namespace

int main() {
  struct Item {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Item> items{{1, "envelope oracle", envelope_oracle},
                                {2, "nonconvex Riemann", riemann_correctness},
                                {3, "discrepancy bound", discrepancy_bound},
                                {4, "Upsilon monotone", monotonicity},
                                {5, "convergence rate", convergence},
                                {6, "tracing bounds", tracing_bounds},
                                {7, "speed average", speed_average},
                                {8, "closed forms", closed_forms}};
  int failed = 0;
  for (const auto& it : items) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = it.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %d %s: %s (%.1f s) %s\n", it.id, o.pass ? "PASS" : "FAIL", it.name, seconds_since(t0),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
