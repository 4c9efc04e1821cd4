// glimm command line: experiments over the random-choice scheme.
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "glimm/config.hpp"
#include "glimm/errors.hpp"
#include "glimm/harness.hpp"
#include "glimm/riemann.hpp"
#include "glimm/sampler.hpp"
#include "glimm/tracing.hpp"
#include "glimm/writers.hpp"

using namespace glimm;

namespace {

struct Globals {
  std::string config, out = "out";
  std::uint64_t seed = 1;
  int threads = 1;
  bool seed_set = false, out_set = false;
};

State parse_state(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
  if (v.empty()) fail(ErrorKind::InvalidArgument, "empty state");
  State u(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) u(static_cast<Eigen::Index>(i)) = v[i];
  return u;
}

std::string state_str(const State& u) {
  std::string s;
  for (Eigen::Index i = 0; i < u.size(); ++i) s += (i ? ";" : "") + format_double(u(i));
  return s;
}

ExperimentConfig base_config(const Globals& g) {
  ExperimentConfig c = g.config.empty() ? ExperimentConfig{} : load_config(g.config);
  if (g.out_set || g.config.empty()) c.out = g.out;
  if (g.seed_set) c.seed = g.seed;
  c.threads = g.threads;
  return c;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
  std::ofstream f(output_path(dir, name));
  if (!f) fail(ErrorKind::InvalidArgument, "cannot write " + dir + "/" + name);
  return f;
}

void write_profile(std::ostream& os, const GridProfile& p) {
  CsvWriter w(os);
  std::vector<std::string> h{"j", "x_left"};
  const Eigen::Index N = p.cells.empty() ? 0 : p.cells.front().size();
  for (Eigen::Index q = 0; q < N; ++q) h.push_back("u" + std::to_string(q));
  w.header(h);
  for (long j = p.first; j <= p.last(); ++j) {
    w << static_cast<long long>(j) << p.x_left(j);
    for (Eigen::Index q = 0; q < N; ++q) w << p.at(j)(q);
    w.end_row();
  }
}

void write_snapshots(std::ostream& os, const Trajectory& tr) {
  CsvWriter w(os);
  w.header({"step", "time", "theta", "waves", "V", "Q1", "Qq", "Qcubic", "Q", "Upsilon", "Upsilon1", "dUpsilon",
            "dUpsilon1", "cancellation"});
  for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
    const auto& s = tr.snapshots[i];
    w << static_cast<long long>(i) << static_cast<double>(i) * tr.eps << (i ? tr.thetas[i - 1] : NAN)
      << static_cast<long long>(s.waves) << s.V << s.Q1 << s.Qq << s.Qcubic << s.Q << s.Upsilon << s.Upsilon1
      << s.dUpsilon << s.dUpsilon1 << s.cancellation;
    w.end_row();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-choice scheme for nonconvex hyperbolic systems"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "JSON experiment config");
  app.add_option_function<std::string>("--out", [&](const std::string& o) { g.out = o, g.out_set = true; },
                                       "output directory (default: the config's, else ./out)");
  // global flags also work after the subcommand
  app.fallthrough();
  app.add_option_function<std::uint64_t>("--seed", [&](std::uint64_t s) { g.seed = s, g.seed_set = true; },
                                         "seed for random data and sequences");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);

  // riemann
  auto* rie = app.add_subcommand("riemann", "solve one Riemann problem, print the fan table");
  std::string model_name = "cubic", uL_s = "-1", uR_s = "1";
  int liu_samples = 200;
  rie->add_option("--model", model_name, "builtin model")->check(CLI::IsMember(builtin_model_names()));
  rie->add_option("--uL", uL_s, "left state, comma separated");
  rie->add_option("--uR", uR_s, "right state, comma separated");
  rie->add_option("--liu-samples", liu_samples);

  // evolve / functionals
  auto* evo = app.add_subcommand("evolve", "run the scheme, write the final profile and functionals");
  auto* fun = app.add_subcommand("functionals", "per-step functionals and interaction ledger");
  // trace
  auto* trc = app.add_subcommand("trace", "wave tracing over [m, n]");
  std::uint64_t tm = 0, tn = 0;
  trc->add_option("--m", tm);
  trc->add_option("--n", tn);
  // discrepancy
  auto* dis = app.add_subcommand("discrepancy", "discrepancy bound of the sampling sequence");
  std::uint64_t n_max = 4096;
  std::string seq_spec = "vdc";
  dis->add_option("--n-max", n_max);
  dis->add_option("--sequence", seq_spec);
  // converge / monitor / rho
  auto* con = app.add_subcommand("converge", "convergence ladder against a reference");
  auto* mon = app.add_subcommand("monitor", "monotonicity of the composite functional on random data");
  int trials = 0;
  mon->add_option("--trials", trials);
  auto* rho = app.add_subcommand("rho", "rho-interval schedule of one trajectory");
  double rho_v = 0;
  rho->add_option("--rho", rho_v, "default sqrt(eps) log|log eps|");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // usage errors are runtime errors here; --help stays 0
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*rie) {
      ModelPtr m = make_builtin(model_name);
      RiemannSolution s = solve_riemann(*m, parse_state(uL_s), parse_state(uR_s));
      CsvWriter w(std::cout);
      w.header({"family", "component", "kind", "size", "x0", "x1", "speed_lo", "speed_hi", "raw_lo", "raw_hi",
                "left", "right"});
      bool ok = true;
      for (const auto& f : s.fans)
        for (std::size_t c = 0; c < f.components.size(); ++c) {
          const auto& cp = f.components[c];
          w << static_cast<long long>(f.k) << static_cast<long long>(c) << std::string(to_string(cp.kind)) << cp.size
            << cp.x0 << cp.x1 << cp.speed_lo << cp.speed_hi << cp.raw_lo << cp.raw_hi << state_str(cp.left)
            << state_str(cp.right);
          w.end_row();
        }
      for (const auto& f : s.fans)
        if (!f.empty() && !liu_admissibility_check(*m, f, liu_samples).admissible()) ok = false;
      std::cerr << "residual " << format_double(s.residual) << " iterations " << s.iterations
                << (ok ? " liu ok" : " liu VIOLATED") << "\n";
      return ok ? 0 : 2;
    }

    ExperimentConfig c = base_config(g);

    if (*evo || *fun || *trc || *rho) {
      ModelPtr m = model_from(c);
      const InitialData u0 = initial_from(*m, c.initial, c.seed);
      const SamplingSequence seq = SamplingSequence::parse(c.sequence);
      EvolveOptions o = evolve_options_from(c, *m);
      o.keep_profiles = false;
      o.keep_fans = static_cast<bool>(*trc);
      Trajectory tr = evolve(*m, u0, c.eps.front(), c.T, seq, o);
      if (*evo) {
        auto f = open_out(c.out, "profile.csv");
        write_profile(f, tr.final_profile);
        auto h = open_out(c.out, "functionals.csv");
        write_snapshots(h, tr);
        std::cout << "steps " << tr.steps << " V0 " << format_double(tr.snapshots.front().V) << " VT "
                  << format_double(tr.snapshots.back().V) << "\n";
        return 0;
      }
      if (*fun) {
        {
          auto h = open_out(c.out, "functionals.csv");
          write_snapshots(h, tr);
        }
        auto f = open_out(c.out, "interactions.csv");
        CsvWriter w(f);
        w.header({"step", "interface", "theta", "dV", "dQ1", "dQq", "dQcubic", "dUpsilon", "dUpsilon1",
                  "cancellation", "I1", "I", "J", "transversal"});
        RecordOptions ro;
        ro.decompose_above = tr.constants.delta0;
        for (const auto& e : tr.ledger) {
          const InteractionDeltas d = interaction_deltas(e, tr.constants, ro);
          w << static_cast<long long>(e.step) << static_cast<long long>(e.interface) << e.theta << d.dV << d.dQ1
            << d.dQq << d.dQcubic << d.dUpsilon << d.dUpsilon1 << d.cancellation << d.I1 << d.I << d.J
            << d.transversal;
          w.end_row();
        }
        std::size_t bad = 0;
        for (const auto& s : tr.snapshots)
          if (s.dUpsilon > 1e-9 * tr.snapshots.front().V) ++bad;
        std::cerr << "steps " << tr.steps << " increases " << bad << "\n";
        return bad ? 2 : 0;
      }
      if (*trc) {
        const std::uint64_t n = tn ? tn : (c.n ? c.n : tr.steps);
        const std::uint64_t mm = tm ? tm : c.m;
        TracingReport r = trace_interval(tr, mm, n);
        CsvWriter w(std::cout);
        w.header({"time", "secondary"});
        for (std::size_t i = 0; i < r.secondary.size(); ++i) {
          w << static_cast<long long>(mm + i) << r.secondary[i];
          w.end_row();
        }
        std::cout << "# m " << r.m << " n " << r.n << " primaries " << r.primaries_start << " survivors "
                  << r.survivors << " dUpsilon " << format_double(r.dUpsilon) << " secondary/dU "
                  << format_double(r.secondary_ratio) << " size/dU " << format_double(r.size_ratio) << " speed/dU "
                  << format_double(r.speed_ratio) << (r.bijective ? " bijective" : " NOT-bijective") << "\n";
        return r.bijective ? 0 : 2;
      }
      // rho
      const double rv = rho_v > 0 ? rho_v : (c.rho ? *c.rho : default_rho(tr.eps));
      RhoReport r = rho_schedule(tr, rv);
      CsvWriter w(std::cout);
      w.header({"m", "n", "type", "drop"});
      for (const auto& iv : r.intervals) {
        w << static_cast<long long>(iv.m) << static_cast<long long>(iv.n) << static_cast<long long>(iv.type)
          << iv.drop;
        w.end_row();
      }
      std::cerr << "rho " << format_double(r.rho) << " type1 " << r.type1 << " type2 " << r.type2 << " K "
                << format_double(r.K) << " bound " << format_double(r.K_bound) << "\n";
      return r.bounded ? 0 : 2;
    }

    if (*dis) {
      BoundReport r = verify_discrepancy_bound(SamplingSequence::parse(seq_spec), n_max);
      auto f = open_out(c.out, "discrepancy.csv");
      CsvWriter w(f);
      w.header({"m", "n", "D", "ratio"});
      for (const auto& row : r.first_rows) {
        w << static_cast<long long>(row.m) << static_cast<long long>(row.n) << row.value << row.ratio;
        w.end_row();
      }
      std::cout << "sup ratio " << format_double(r.worst.ratio) << " at m " << r.worst.m << " n " << r.worst.n
                << " pairs " << r.pairs << (r.sampled ? " sampled" : " exhaustive") << "\n";
      return r.worst.ratio <= 1.0 ? 0 : 2;
    }

    if (*con) {
      ConvergenceResult r = run_convergence(c);
      write_convergence_csv(std::cout, r);
      auto f = open_out(c.out, "convergence.csv");
      write_convergence_csv(f, r);
      Series s{"e(eps)", {}, {}}, ref{"sqrt(eps)|log eps|", {}, {}};
      for (const auto& row : r.rows) {
        s.x.push_back(row.eps), s.y.push_back(row.error);
        ref.x.push_back(row.eps), ref.y.push_back(rate_scale(row.eps));
      }
      write_loglog_svg(output_path(c.out, "convergence.svg"), {s, ref}, "L1 error", "eps", "error");
      std::cerr << "slope " << (r.slope ? format_double(*r.slope) : std::string("N/A")) << " tail "
                << (r.tail_nonincreasing ? "nonincreasing" : "increasing") << "\n";
      bool fail_row = false;
      for (const auto& row : r.rows) fail_row = fail_row || !row.failure.empty();
      if (fail_row) return 1;
      return (r.slope && *r.slope >= 0.9 && r.tail_nonincreasing) ? 0 : 2;
    }

    if (*mon) {
      MonitorReport r = monitor_suite(c, trials > 0 ? trials : c.trials);
      CsvWriter w(std::cout);
      w.header({"trial", "steps", "interactions", "V0", "Upsilon0", "UpsilonT", "max_increase", "failure"});
      bool failed = false;
      for (const auto& t : r.trials) {
        w << static_cast<long long>(t.trial) << static_cast<long long>(t.steps)
          << static_cast<long long>(t.interactions) << t.V0 << t.Upsilon0 << t.UpsilonT << t.max_increase
          << t.failure;
        w.end_row();
        failed = failed || !t.failure.empty();
      }
      auto f = open_out(c.out, "violations.csv");
      CsvWriter v(f);
      v.header({"trial", "step", "dUpsilon", "threshold", "interface", "dV", "dQq", "dQcubic", "I1", "J",
                "transversal", "cancellation"});
      for (const auto& x : r.violations)
        for (std::size_t q = 0; q < x.deltas.size(); ++q) {
          const auto& d = x.deltas[q];
          v << static_cast<long long>(x.trial) << static_cast<long long>(x.step) << x.dUpsilon << x.threshold
            << static_cast<long long>(x.entries[q].interface) << d.dV << d.dQq << d.dQcubic << d.I1 << d.J
            << d.transversal << d.cancellation;
          v.end_row();
        }
      std::cerr << "violations " << r.violations.size() << "\n";
      if (failed) return 1;
      return r.ok() ? 0 : 2;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
