#include "glimm/tracing.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "glimm/errors.hpp"

namespace glimm {

namespace {

constexpr double kCutTol = 1e-12;

// Cut positions of [xa, xb]: component edges, eps speed increments, the theta split point.
std::vector<double> cut_points(const WaveFan& fan, double xa, double xb, double eps, double theta_next) {
  std::vector<double> pts{xa, xb};
  for (const auto& c : fan.components) {
    const double a = std::max(xa, c.x0), b = std::min(xb, c.x1);
    if (!(b > a)) continue;
    pts.push_back(a);
    pts.push_back(b);
    if (c.kind != ComponentKind::Rarefaction || !(eps > 0)) continue;
    const double top = c.speed_at(b);
    double cur = a;
    for (int guard = 0; guard < 100000; ++guard) {
      const double t = c.speed_at(cur) + eps;
      if (t >= top - kCutTol) break;
      const double nx = c.invert(t);
      if (!(nx > cur + kCutTol) || !(nx < b)) break;
      pts.push_back(nx);
      cur = nx;
    }
  }
  if (std::isfinite(theta_next)) {
    const double sp = fan.split_point(theta_next);
    if (sp > xa && sp < xb) pts.push_back(sp);
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double p : pts) {
    if (p < xa || p > xb) continue;
    if (!out.empty() && p - out.back() <= kCutTol * std::max(1.0, fan.length())) {
      if (p == xb) out.back() = xb;
      continue;
    }
    out.push_back(p);
  }
  if (out.size() < 2) out = {xa, xb};
  return out;
}

double snap_of(double L, const TracingOptions& o) { return o.snap_rel * L + o.snap_abs; }

struct Loc {
  const RiemannSolution* sol = nullptr;
  int k = 0;
  double x0 = 0;
};

struct Track {
  double length = 0;
  std::vector<Loc> hist;  // times m, m+1, ...
  bool alive = true;
  bool replaced = false;
};

struct Piece {
  long track = -1;  // -1 = secondary
  double x0 = 0, x1 = 0;
  double length() const { return x1 - x0; }
};

using Key = std::pair<long, int>;  // interface, family
using Layer = std::map<Key, std::vector<Piece>>;

class Tracer {
 public:
  explicit Tracer(const TracingOptions& o) : opt_(o) {}

  std::vector<Track> tracks;

  long new_track(double len, std::vector<Loc> hist) {
    tracks.push_back({len, std::move(hist), true, false});
    return static_cast<long>(tracks.size()) - 1;
  }

  // Split piece at interior cuts; tracks get children with offset histories.
  std::vector<Piece> split(const Piece& p, const std::vector<double>& cuts) {
    std::vector<double> c{p.x0};
    for (double x : cuts)
      if (x > p.x0 + kCutTol && x < p.x1 - kCutTol) c.push_back(x);
    c.push_back(p.x1);
    if (c.size() == 2) return {p};
    std::vector<Piece> out;
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
      Piece q{-1, c[i], c[i + 1]};
      if (p.track >= 0) {
        const std::size_t t = static_cast<std::size_t>(p.track);
        std::vector<Loc> h = tracks[t].hist;
        const double d = c[i] - p.x0;
        for (auto& l : h) l.x0 += d;
        q.track = new_track(c[i + 1] - c[i], std::move(h));
      }
      out.push_back(q);
    }
    if (p.track >= 0) {
      tracks[static_cast<std::size_t>(p.track)].alive = false;
      tracks[static_cast<std::size_t>(p.track)].replaced = true;
    }
    return out;
  }

  void kill(const Piece& p) {
    if (p.track >= 0) tracks[static_cast<std::size_t>(p.track)].alive = false;
  }

  // Places candidates into an outgoing fan of length L; returns the outgoing pieces (no history pushed yet).
  std::vector<Piece> fill(std::vector<Piece> left, double left_sign, std::vector<Piece> right, double right_sign,
                          double L, double out_sign) {
    std::vector<Piece> out;
    const double snap = snap_of(L, opt_);
    const bool left_ok = !left.empty() && left_sign == out_sign;
    const bool right_ok = !right.empty() && right_sign == out_sign;
    if (!left_ok) for (auto& p : left) kill(p);
    if (!right_ok) for (auto& p : right) kill(p);
    std::vector<Piece> cands;
    if (left_ok) cands.insert(cands.end(), left.begin(), left.end());
    if (right_ok) cands.insert(cands.end(), right.begin(), right.end());
    // a surviving right wave alone keeps its right end
    const bool backward = !left_ok && right_ok;
    if (backward) std::reverse(cands.begin(), cands.end());

    double alloc = 0;
    for (auto& c : cands) {
      const double room = L - alloc;
      const double len = c.length();
      if (room <= snap) {
        kill(c);
        continue;
      }
      if (len <= room + snap) {
        out.push_back({c.track, alloc, std::min(alloc + len, L)});
        alloc += len;
        continue;
      }
      // truncation: keep the part adjacent to the filled side
      const double cut = backward ? c.x1 - room : c.x0 + room;
      std::vector<Piece> parts = split(c, {cut});
      if (parts.size() == 1) {
        // overshoot below the cut tolerance: clip, do not drop
        out.push_back({c.track, alloc, L});
        alloc = L;
        continue;
      }
      Piece keep = backward ? parts.back() : parts.front();
      Piece drop = backward ? parts.front() : parts.back();
      kill(drop);
      out.push_back({keep.track, alloc, L});
      alloc = L;
    }
    if (L - alloc > snap) out.push_back({-1, alloc, L});
    if (alloc > L) alloc = L;
    if (backward) {
      for (auto& p : out) {
        const double a = L - p.x1, b = L - p.x0;
        p.x0 = std::max(0.0, a);
        p.x1 = std::min(L, b);
      }
      std::reverse(out.begin(), out.end());
    }
    return out;
  }

 private:
  TracingOptions opt_;
};

const WaveFan* fan_of(const RiemannSolution* s, int k) {
  if (!s || k >= static_cast<int>(s->fans.size())) return nullptr;
  const WaveFan& f = s->fans[static_cast<std::size_t>(k)];
  return f.empty() ? nullptr : &f;
}

}  // namespace

PartitionedWave partition_wave(const WaveFan& fan, double xa, double xb, double eps, double theta_next,
                               long first_id) {
  PartitionedWave w;
  w.k = fan.k;
  w.size = fan.sign() * (xb - xa);
  if (fan.empty() || !(xb > xa)) return w;
  w.grid = cut_points(fan, xa, xb, eps, theta_next);
  long id = first_id;
  for (std::size_t i = 0; i + 1 < w.grid.size(); ++i) {
    Subwave s;
    s.x0 = w.grid[i];
    s.x1 = w.grid[i + 1];
    s.size = fan.sign() * (s.x1 - s.x0);
    s.speed = fan.mean_speed(s.x0, s.x1);
    s.origin = id++;
    w.subwaves.push_back(s);
  }
  return w;
}

PartitionedWave partition_wave(const WaveFan& fan, double eps, double theta_next, long first_id) {
  return partition_wave(fan, 0.0, fan.length(), eps, theta_next, first_id);
}

PartitionedWave merge_partitions_at_interaction(const PartitionedWave& left, const PartitionedWave& right,
                                                const WaveRecord& outgoing) {
  PartitionedWave out;
  out.k = outgoing.k;
  out.size = outgoing.size;
  const double L = std::fabs(outgoing.size);
  if (!outgoing.fan || !(L > 0)) return out;
  const double sgn = outgoing.size < 0 ? -1.0 : 1.0;
  const TracingOptions o;
  const double snap = snap_of(L, o);

  auto sign_of = [](const PartitionedWave& w) { return w.size < 0 ? -1.0 : 1.0; };
  // other families only feed their own outgoing waves
  const bool left_ok = !left.subwaves.empty() && left.k == outgoing.k && sign_of(left) == sgn;
  const bool right_ok = !right.subwaves.empty() && right.k == outgoing.k && sign_of(right) == sgn;
  std::vector<Subwave> cands;
  if (left_ok) cands.insert(cands.end(), left.subwaves.begin(), left.subwaves.end());
  if (right_ok) cands.insert(cands.end(), right.subwaves.begin(), right.subwaves.end());
  const bool backward = !left_ok && right_ok;
  if (backward) std::reverse(cands.begin(), cands.end());

  std::vector<Subwave> placed;
  double alloc = 0;
  for (const auto& c : cands) {
    const double room = L - alloc;
    const double len = std::fabs(c.size);
    if (room <= snap) break;
    Subwave s;
    s.origin = c.origin;
    const double take = len <= room + snap ? std::min(len, room) : room;
    s.x0 = alloc;
    s.x1 = alloc + take;
    alloc += take;
    placed.push_back(s);
  }
  if (L - alloc > snap) {
    Subwave s;
    s.x0 = alloc;
    s.x1 = L;
    placed.push_back(s);
  }
  if (backward) {
    for (auto& s : placed) {
      const double a = L - s.x1, b = L - s.x0;
      s.x0 = std::max(0.0, a);
      s.x1 = std::min(L, b);
    }
    std::reverse(placed.begin(), placed.end());
  }
  const double base = outgoing.xa;
  out.grid.push_back(base);
  for (auto& s : placed) {
    s.x0 += base;
    s.x1 += base;
    s.size = sgn * (s.x1 - s.x0);
    s.speed = outgoing.fan->mean_speed(s.x0, s.x1);
    out.grid.push_back(s.x1);
    out.subwaves.push_back(s);
  }
  return out;
}

TracingReport trace_interval(const Trajectory& tr, std::uint64_t m, std::uint64_t n, const TracingOptions& opt) {
  if (!(n > m)) fail(ErrorKind::EmptyInterval, "need m < n");
  if (n >= tr.fans.size()) fail(ErrorKind::EmptyInterval, "trajectory has no fans at time n (keep_fans)");
  if (n >= tr.snapshots.size()) fail(ErrorKind::EmptyInterval, "trajectory has no functionals at time n");
  const double eps_speed = tr.eps;  // speed increments are bounded by the mesh size
  Tracer T(opt);
  TracingReport rep;
  rep.m = m;
  rep.n = n;

  auto theta_after = [&](std::uint64_t i) { return i < n ? tr.thetas[i] : NAN; };

  // time m
  Layer layer;
  {
    const InterfaceFans& F = tr.fans[m];
    for (std::size_t idx = 0; idx < F.solutions.size(); ++idx) {
      const RiemannSolution* s = F.solutions[idx].get();
      if (!s) continue;
      const long j = F.first + static_cast<long>(idx);
      for (int k = 0; k < static_cast<int>(s->fans.size()); ++k) {
        const WaveFan* f = fan_of(s, k);
        if (!f) continue;
        auto cuts = cut_points(*f, 0.0, f->length(), eps_speed, theta_after(m));
        auto& v = layer[{j, k}];
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
          const long id = T.new_track(cuts[c + 1] - cuts[c], {Loc{s, k, cuts[c]}});
          v.push_back({id, cuts[c], cuts[c + 1]});
        }
      }
    }
  }
  rep.primaries_start = T.tracks.size();
  std::vector<double> piece_totals{0.0};
  for (const auto& kv : layer)
    for (const auto& p : kv.second) piece_totals.back() += p.length();

  for (std::uint64_t i = m; i < n; ++i) {
    const double theta = tr.thetas[i];
    const InterfaceFans& Fo = tr.fans[i];
    const InterfaceFans& Fn = tr.fans[i + 1];

    // split old pieces straddling the theta split point
    for (auto& kv : layer) {
      const WaveFan* f = fan_of(Fo.at(kv.first.first), kv.first.second);
      if (!f) continue;
      const double sp = f->split_point(theta);
      std::vector<Piece> next;
      for (const auto& p : kv.second) {
        auto parts = T.split(p, {sp});
        next.insert(next.end(), parts.begin(), parts.end());
      }
      kv.second = std::move(next);
    }

    Layer fresh;
    const long j_lo = std::min(Fo.first, Fn.first);
    const long j_hi = std::max(Fo.first + static_cast<long>(Fo.solutions.size()),
                               Fn.first + static_cast<long>(Fn.solutions.size()));
    for (long j = j_lo; j <= j_hi; ++j) {
      const RiemannSolution* out = Fn.at(j);
      const RiemannSolution* oL = Fo.at(j - 1);
      const RiemannSolution* oR = Fo.at(j);
      std::size_t N = 0;
      for (const RiemannSolution* s : {out, oL, oR})
        if (s) N = std::max(N, s->fans.size());
      for (int k = 0; k < static_cast<int>(N); ++k) {
        std::vector<Piece> left, right;
        double ls = 1, rs = 1;
        if (const WaveFan* f = fan_of(oL, k)) {
          const double sp = f->split_point(theta);
          ls = f->sign();
          auto it = layer.find({j - 1, k});
          if (it != layer.end())
            for (const auto& p : it->second)
              if (p.x0 >= sp - kCutTol) left.push_back(p);
        }
        if (const WaveFan* f = fan_of(oR, k)) {
          const double sp = f->split_point(theta);
          rs = f->sign();
          auto it = layer.find({j, k});
          if (it != layer.end())
            for (const auto& p : it->second)
              if (p.x1 <= sp + kCutTol) right.push_back(p);
        }
        const WaveFan* fo = fan_of(out, k);
        if (!fo) {
          for (auto& p : left) T.kill(p);
          for (auto& p : right) T.kill(p);
          continue;
        }
        auto pieces = T.fill(left, ls, right, rs, fo->length(), fo->sign());
        for (const auto& p : pieces)
          if (p.track >= 0) T.tracks[static_cast<std::size_t>(p.track)].hist.push_back(Loc{out, k, p.x0});
        fresh[{j, k}] = std::move(pieces);
      }
    }

    // refine for the next step
    for (auto& kv : fresh) {
      const WaveFan* f = fan_of(Fn.at(kv.first.first), kv.first.second);
      std::vector<Piece> next;
      for (const auto& p : kv.second) {
        auto cuts = cut_points(*f, p.x0, p.x1, eps_speed, theta_after(i + 1));
        auto parts = T.split(p, cuts);
        next.insert(next.end(), parts.begin(), parts.end());
      }
      kv.second = std::move(next);
    }
    // tracks still alive but not placed at time i + 1 vanished
    for (auto& t : T.tracks)
      if (t.alive && !t.replaced && t.hist.size() < (i + 1 - m) + 1) t.alive = false;
    layer = std::move(fresh);
    double tot = 0;
    for (const auto& kv : layer)
      for (const auto& p : kv.second) tot += p.length();
    piece_totals.push_back(tot);
  }

  std::vector<std::size_t> surv;
  for (std::size_t t = 0; t < T.tracks.size(); ++t)
    if (T.tracks[t].alive && !T.tracks[t].replaced && T.tracks[t].hist.size() == n - m + 1) surv.push_back(t);
  rep.survivors = surv.size();
  rep.tracks = T.tracks.size();

  double S = 0;
  for (std::size_t t : surv) S += T.tracks[t].length;
  for (double P : piece_totals) rep.secondary.push_back(std::max(0.0, P - S));
  rep.secondary_total = rep.secondary.empty() ? 0 : *std::max_element(rep.secondary.begin(), rep.secondary.end());

  // speed change, size change and bijectivity
  std::vector<std::map<std::pair<const RiemannSolution*, int>, std::vector<std::pair<double, double>>>> occ(n - m + 1);
  for (std::size_t t : surv) {
    const Track& tk = T.tracks[t];
    const double s0 = tk.length;
    double lam0 = 0, dl = 0, ds = 0;
    for (std::size_t h = 0; h < tk.hist.size(); ++h) {
      const Loc& l = tk.hist[h];
      const WaveFan& f = l.sol->fans[static_cast<std::size_t>(l.k)];
      const double x1 = std::min(l.x0 + tk.length, f.length());
      const double lam = f.mean_speed(l.x0, x1);
      if (h == 0) lam0 = lam;
      dl = std::max(dl, std::fabs(lam - lam0));
      ds = std::max(ds, std::fabs(s0 - (x1 - l.x0)));
      occ[h][{l.sol, l.k}].push_back({l.x0, x1});
      if (l.x0 < -1e-12 || l.x0 + tk.length > f.length() + snap_of(f.length(), opt) + 1e-12) rep.bijective = false;
    }
    rep.speed_change_total += s0 * dl;
    rep.size_change_total += ds;
  }
  for (auto& layer_occ : occ)
    for (auto& kv : layer_occ) {
      auto& v = kv.second;
      std::sort(v.begin(), v.end());
      for (std::size_t q = 1; q < v.size(); ++q)
        if (v[q].first < v[q - 1].second - 1e-12) rep.bijective = false;
    }

  rep.dUpsilon = std::fabs(tr.snapshots[n].Upsilon - tr.snapshots[m].Upsilon);
  rep.dUpsilon1 = std::fabs(tr.snapshots[n].Upsilon1 - tr.snapshots[m].Upsilon1);
  // below the noise level of Upsilon nothing interacted: 0/0 counts as 0, anything real as unbounded
  const double noise = opt.noise_rel * std::fabs(tr.snapshots[m].Upsilon) + opt.noise_abs;
  auto ratio = [&](double total) {
    if (rep.dUpsilon > noise) return total / rep.dUpsilon;
    return total <= noise ? 0.0 : HUGE_VAL;
  };
  rep.secondary_ratio = ratio(rep.secondary_total);
  rep.size_ratio = ratio(rep.size_change_total);
  rep.speed_ratio = ratio(rep.speed_change_total);
  return rep;
}

SpeedAverage speed_average_check(const WaveRecord& left, const WaveRecord& right, const WaveRecord& outgoing) {
  SpeedAverage r;
  if (!left.fan || !right.fan || !outgoing.fan) return r;
  const double a = outgoing.owner && outgoing.owner->model ? outgoing.owner->model->speed_map().a : 1.0;
  const double L = outgoing.xb - outgoing.xa;
  const double lam = outgoing.fan->mean_speed(outgoing.xa, outgoing.xb);
  const double i1 = left.fan->speed_integral(left.xa, left.xb);
  const double i2 = right.fan->speed_integral(right.xa, right.xb);
  r.residual = std::fabs(lam * L - i1 - i2) / a;
  r.J = amount_of_interaction(left, right);
  // rounding-level residuals with no interaction count as exact
  const double round = 1e-13 * L * (1 + std::fabs(lam / a));
  // J below rounding of |s' s''| is no interaction either
  const double Jround = 1e-13 * std::fabs((left.xb - left.xa) * (right.xb - right.xa)) / a;
  if (r.residual <= round) r.ratio = 0.0;
  else r.ratio = r.J > Jround ? r.residual / r.J : HUGE_VAL;
  return r;
}

double antisymmetric_sum(const PartitionedWave& w) {
  double s = 0;
  for (const auto& a : w.subwaves)
    for (const auto& b : w.subwaves) s += a.size * b.size * (a.speed - b.speed);
  return s;
}

}  // namespace glimm
