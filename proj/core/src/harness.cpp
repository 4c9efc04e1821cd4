#include "glimm/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <ostream>
#include <random>

#include "glimm/errors.hpp"
#include "glimm/parallel.hpp"
#include "glimm/writers.hpp"

namespace glimm {

double rate_scale(double eps) { return std::sqrt(eps) * std::fabs(std::log(eps)); }

std::optional<double> fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) mx += x[i], my += y[i];
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0)) return std::nullopt;
  return sxy / sxx;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

FunctionalConstants constants_for(const EvolveOptions& o, const SystemModel& model, const GridProfile& p) {
  FunctionalConstants k = o.constants;
  const double V0 = profile_functionals(model, p, k, o.riemann, k.delta0).V;
  return resolve_constants(o, V0);
}

}  // namespace

ConvergenceResult run_convergence(const ExperimentConfig& c) {
  ModelPtr model = model_from(c);
  const InitialData u0 = initial_from(*model, c.initial, c.seed);
  const SamplingSequence seq = SamplingSequence::parse(c.sequence);
  const EvolveOptions base = evolve_options_from(c, *model);

  std::shared_ptr<const RiemannSolution> exact;
  if (c.reference == "exact") {
    if (c.initial.type != "riemann") fail(ErrorKind::ConfigError, "exact reference needs Riemann data");
    exact = std::make_shared<RiemannSolution>(solve_riemann(*model, c.initial.uL, c.initial.uR, base.riemann));
  }
  GridProfile fine;
  if (c.reference == "fine") {
    EvolveOptions o = base;
    o.functionals = false;
    o.keep_profiles = false;
    o.record_ledger = false;
    fine = evolve(*model, u0, c.eps.back() / 8, c.T, seq, o).final_profile;
  }

  ConvergenceResult r;
  r.rows.resize(c.eps.size());
  // rungs are share-nothing; the inner evolution stays sequential
  parallel_for(c.eps.size(), std::max(1, c.threads), [&](std::size_t i) {
    ConvergenceRow& row = r.rows[i];
    row.eps = c.eps[i];
    const auto t0 = std::chrono::steady_clock::now();
    try {
      EvolveOptions o = base;
      o.threads = 1;
      o.functionals = false;
      o.keep_profiles = false;
      o.record_ledger = false;
      const GridProfile p0 = init_profile(u0, row.eps, o.theta0, o.tv_budget);
      o.constants = constants_for(o, *model, p0);
      o.constants_absolute = true;
      row.upsilon0 = profile_functionals(*model, p0, o.constants, o.riemann, o.constants.delta0).Upsilon;
      Trajectory tr = evolve(*model, u0, row.eps, c.T, seq, o);
      row.steps = tr.steps;
      const double t = static_cast<double>(tr.steps) * row.eps;
      if (exact) row.error = l1_distance(tr.final_profile, ExactSolution{exact, c.initial.x0}, t);
      else row.error = l1_distance(tr.final_profile, fine);
      row.ratio = row.error / rate_scale(row.eps);
      row.upsilonT = profile_functionals(*model, tr.final_profile, o.constants, o.riemann, o.constants.delta0).Upsilon;
    } catch (const std::exception& e) {
      row.failure = e.what();
    }
    row.runtime = seconds_since(t0);
  });

  std::vector<double> x, y;
  for (const auto& row : r.rows)
    if (row.failure.empty() && row.error > 0) {
      x.push_back(std::log(rate_scale(row.eps)));
      y.push_back(std::log(row.error));
    }
  r.slope = fit_slope(x, y);
  std::vector<double> ratios;
  for (const auto& row : r.rows)
    if (row.failure.empty()) ratios.push_back(row.ratio);
  if (ratios.size() >= 3) {
    r.tail_nonincreasing = true;
    for (std::size_t i = ratios.size() - 2; i < ratios.size(); ++i)
      if (ratios[i] > 1.1 * ratios[i - 1]) r.tail_nonincreasing = false;
  }
  return r;
}

void write_convergence_csv(std::ostream& os, const ConvergenceResult& r) {
  CsvWriter w(os);
  w.header({"eps", "steps", "error", "ratio", "upsilon0", "upsilonT", "runtime_s", "failure"});
  for (const auto& row : r.rows) {
    w << row.eps << static_cast<long long>(row.steps) << row.error << row.ratio << row.upsilon0 << row.upsilonT
      << row.runtime << row.failure;
    w.end_row();
  }
}

double default_rho(double eps) { return std::sqrt(eps) * std::log(std::fabs(std::log(eps))); }

RhoReport rho_schedule(const Trajectory& tr, double rho) {
  if (!(rho > 2 * tr.eps)) fail(ErrorKind::RhoTooSmall, "rho must exceed 2 eps");
  if (tr.snapshots.size() != tr.steps + 1) fail(ErrorKind::InvalidArgument, "trajectory has no functionals");
  RhoReport rep;
  rep.rho = rho;
  const std::uint64_t mbar = tr.steps;
  auto ups = [&](std::uint64_t i) { return tr.snapshots[i].Upsilon; };
  std::uint64_t m = 0;
  while (m < mbar) {
    RhoInterval iv;
    iv.m = m;
    if (ups(m) - ups(m + 1) > rho) {
      iv.type = 2;
      iv.n = m + 1;
    } else {
      std::uint64_t n = m + 1;
      while (n + 1 <= mbar && static_cast<double>(n + 1 - m) * tr.eps <= rho * (1 + 1e-12) &&
             ups(m) - ups(n + 1) <= rho)
        ++n;
      iv.n = n;
    }
    iv.drop = ups(iv.m) - ups(iv.n);
    (iv.type == 1 ? rep.type1 : rep.type2)++;
    rep.intervals.push_back(iv);
    m = iv.n;
  }
  const double T = static_cast<double>(mbar) * tr.eps;
  rep.K = static_cast<double>(rep.intervals.size()) * rho;
  rep.K_bound = 2 * T + 3 * std::max(0.0, ups(0) - ups(mbar)) + 3 * rho;
  rep.bounded = rep.K <= rep.K_bound;
  return rep;
}

MonitorReport monitor_suite(const ExperimentConfig& c, int trials) {
  if (trials < 1) fail(ErrorKind::InvalidArgument, "trials must be >= 1");
  ModelPtr model = model_from(c);
  const SamplingSequence seq = SamplingSequence::parse(c.sequence);
  EvolveOptions base = evolve_options_from(c, *model);
  base.threads = 1;
  base.keep_profiles = false;
  base.record_ledger = true;
  base.functionals = true;

  MonitorReport rep;
  rep.constants = base.constants;
  rep.constants.C = c.C_factor;
  rep.constants.C1 = c.C_factor;
  rep.trials.resize(static_cast<std::size_t>(trials));
  std::vector<std::vector<MonitorViolation>> found(static_cast<std::size_t>(trials));
  const double eps = c.eps.front();

  parallel_for(static_cast<std::size_t>(trials), std::max(1, c.threads), [&](std::size_t t) {
    MonitorTrial& mt = rep.trials[t];
    mt.trial = static_cast<int>(t);
    try {
      InitialSpec spec = c.initial;
      spec.type = "random";
      const InitialData u0 = initial_from(*model, spec, c.seed, t);
      Trajectory tr = evolve(*model, u0, eps, c.T, seq, base);
      mt.steps = tr.steps;
      mt.interactions = tr.ledger.size();
      mt.V0 = tr.snapshots.front().V;
      mt.Upsilon0 = tr.snapshots.front().Upsilon;
      mt.UpsilonT = tr.snapshots.back().Upsilon;
      const double thr = 1e-9 * mt.V0;
      for (std::size_t i = 1; i < tr.snapshots.size(); ++i) {
        const double d = tr.snapshots[i].Upsilon - tr.snapshots[i - 1].Upsilon;
        mt.max_increase = std::max(mt.max_increase, d);
        if (d <= thr) continue;
        MonitorViolation v;
        v.trial = static_cast<int>(t);
        v.step = i - 1;
        v.dUpsilon = d;
        v.threshold = thr;
        RecordOptions ro;
        ro.decompose_above = tr.constants.delta0;
        for (const auto& e : tr.ledger)
          if (e.step == i - 1) {
            v.entries.push_back(e);
            v.deltas.push_back(interaction_deltas(e, tr.constants, ro));
          }
        found[t].push_back(std::move(v));
      }
    } catch (const std::exception& e) {
      mt.failure = e.what();
    }
  });
  for (auto& f : found)
    for (auto& v : f) rep.violations.push_back(std::move(v));
  return rep;
}

CalibrationResult calibrate(std::vector<ExperimentConfig> training, int trials, int max_rounds) {
  CalibrationResult r;
  if (!training.empty()) {
    r.c = training.front().constants.c;
    r.C_factor = training.front().C_factor;
  }
  for (int round = 0; round <= max_rounds; ++round) {
    std::size_t bad = 0;
    for (auto& cfg : training) {
      cfg.constants.c = r.c;
      cfg.C_factor = r.C_factor;
      MonitorReport m = monitor_suite(cfg, trials);
      bad += m.violations.size();
      for (const auto& t : m.trials)
        if (!t.failure.empty()) ++bad;
    }
    r.rounds = round;
    r.violations_last = bad;
    if (bad == 0) {
      r.converged = true;
      return r;
    }
    if (round % 2 == 0) r.c *= 2;
    else r.C_factor *= 2;
  }
  return r;
}

TracingSuite trace_suite(const Trajectory& tr, int max_len, int count, std::uint64_t seed) {
  TracingSuite s;
  if (tr.steps == 0 || max_len < 1) return s;
  std::mt19937_64 rng(seed);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> iv;
  const std::uint64_t L = static_cast<std::uint64_t>(max_len);
  // exhaustive when small, sampled otherwise
  std::uint64_t total = 0;
  for (std::uint64_t m = 0; m < tr.steps; ++m) total += std::min(L, tr.steps - m);
  if (total <= static_cast<std::uint64_t>(count)) {
    for (std::uint64_t m = 0; m < tr.steps; ++m)
      for (std::uint64_t n = m + 1; n <= std::min(tr.steps, m + L); ++n) iv.push_back({m, n});
  } else {
    for (int q = 0; q < count; ++q) {
      const std::uint64_t m = rng() % tr.steps;
      const std::uint64_t len = 1 + rng() % std::min(L, tr.steps - m);
      iv.push_back({m, m + len});
    }
  }
  for (const auto& [m, n] : iv) {
    TraceSample smp{m, n, trace_interval(tr, m, n)};
    const auto& r = smp.report;
    for (double v : {r.secondary_ratio, r.size_ratio, r.speed_ratio})
      if (!std::isfinite(v)) s.finite = false;
    s.secondary_max = std::max(s.secondary_max, r.secondary_ratio);
    s.size_max = std::max(s.size_max, r.size_ratio);
    s.speed_max = std::max(s.speed_max, r.speed_ratio);
    s.samples.push_back(std::move(smp));
  }
  return s;
}

}  // namespace glimm
