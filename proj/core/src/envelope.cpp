#include "glimm/envelope.hpp"

#include <algorithm>
#include <cmath>

#include "glimm/errors.hpp"

namespace glimm {

namespace {

void check_grid(const SampledFunction& f) {
  if (f.grid.size() < 2 || f.values.size() != f.grid.size())
    fail(ErrorKind::DegenerateGrid, "need at least two samples with matching values");
  for (std::size_t i = 0; i + 1 < f.grid.size(); ++i)
    if (!(f.grid[i + 1] > f.grid[i])) fail(ErrorKind::DegenerateGrid, "grid not strictly increasing");
  for (double v : f.values)
    if (!std::isfinite(v)) fail(ErrorKind::DegenerateGrid, "non-finite sample");
}

}  // namespace

EnvelopeResult lower_convex_envelope(const SampledFunction& f) {
  check_grid(f);
  const std::size_t n = f.size();
  const auto& x = f.grid;
  const auto& y = f.values;

  std::vector<std::size_t> hull;
  hull.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2], b = hull.back();
      // pop b unless it lies strictly below the chord a -> i
      const double lhs = (y[b] - y[a]) * (x[i] - x[a]);
      const double rhs = (y[i] - y[a]) * (x[b] - x[a]);
      if (lhs >= rhs) hull.pop_back();
      else break;
    }
    hull.push_back(i);
  }

  EnvelopeResult r;
  r.lower = true;
  r.vertices = hull;
  r.envelope.grid = x;
  r.envelope.values.assign(n, 0.0);
  r.slope.assign(n - 1, 0.0);
  r.contact.assign(n, 0);

  double scale = 0;
  for (double v : y) scale = std::max(scale, std::abs(v));
  const double tol = 1e-12 * std::max(scale, 1e-300);

  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    const std::size_t a = hull[h], b = hull[h + 1];
    const double m = (y[b] - y[a]) / (x[b] - x[a]);
    for (std::size_t i = a; i < b; ++i) {
      r.slope[i] = m;
      r.envelope.values[i] = i == a ? y[a] : y[a] + m * (x[i] - x[a]);
    }
  }
  r.envelope.values[n - 1] = y[n - 1];
  for (std::size_t i = 0; i < n; ++i) r.contact[i] = std::abs(y[i] - r.envelope.values[i]) <= tol;
  for (std::size_t v : hull) r.contact[v] = 1;
  return r;
}

EnvelopeResult upper_concave_envelope(const SampledFunction& f) {
  SampledFunction neg = f;
  for (double& v : neg.values) v = -v;
  EnvelopeResult r = lower_convex_envelope(neg);
  for (double& v : r.envelope.values) v = -v;
  for (double& s : r.slope) s = -s;
  r.lower = false;
  return r;
}

std::vector<ContactPiece> decompose_contact(const EnvelopeResult& env, double strict_tol) {
  const std::size_t cells = env.slope.size();
  std::vector<ContactPiece> out;
  if (cells == 0) return out;
  const auto [mn, mx] = std::minmax_element(env.slope.begin(), env.slope.end());
  const double t = strict_tol * (*mx - *mn);

  // runs of cells with equal slope
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= cells; ++i) {
    if (i == cells || std::abs(env.slope[i] - env.slope[start]) > t) {
      runs.emplace_back(start, i);
      start = i;
    }
  }

  auto push = [&](PieceKind kind, std::size_t b, std::size_t e) {
    if (!out.empty() && out.back().kind == PieceKind::Rarefaction && kind == PieceKind::Rarefaction) {
      out.back().end = e;
      return;
    }
    ContactPiece p;
    p.begin = b;
    p.end = e;
    p.kind = kind;
    if (kind == PieceKind::ShockOrContact) {
      p.flat_contact = true;
      for (std::size_t i = b; i <= e; ++i) p.flat_contact = p.flat_contact && env.contact[i];
    }
    out.push_back(p);
  };
  for (const auto& [b, e] : runs) {
    if (e - b >= 2) push(PieceKind::ShockOrContact, b, e);
    else push(PieceKind::Rarefaction, b, e);
  }
  // a lone cell between flat runs of a linear envelope is still flat
  if (out.size() == 1 && out[0].kind == PieceKind::Rarefaction && cells == 1) {
    out[0].kind = PieceKind::ShockOrContact;
    out[0].flat_contact = env.contact[0] && env.contact[1];
  }
  return out;
}

}  // namespace glimm
