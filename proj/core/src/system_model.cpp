#include "glimm/system_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "glimm/errors.hpp"

namespace glimm {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotStrictlyHyperbolic: return "NotStrictlyHyperbolic";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::AmbiguousClassification: return "AmbiguousClassification";
    case ErrorKind::Delta0TooLarge: return "Delta0TooLarge";
    case ErrorKind::DegenerateGrid: return "DegenerateGrid";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DomainEscape: return "DomainEscape";
    case ErrorKind::DataTooLarge: return "DataTooLarge";
    case ErrorKind::EmptyRange: return "EmptyRange";
    case ErrorKind::TVBudgetExceeded: return "TVBudgetExceeded";
    case ErrorKind::CFLViolation: return "CFLViolation";
    case ErrorKind::WindowTooSmall: return "WindowTooSmall";
    case ErrorKind::EmptyInterval: return "EmptyInterval";
    case ErrorKind::RhoTooSmall: return "RhoTooSmall";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

const char* to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::GNL: return "GNL";
    case FieldKind::LD: return "LD";
    case FieldKind::NGNL: return "NGNL";
  }
  return "?";
}

namespace {

std::string format_state(const State& u) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < u.size(); ++i) os << (i ? ", " : "") << u[i];
  os << ")";
  return os.str();
}

constexpr double kMinGap = 1e-8;

// Visits the tensor grid with `per_axis` samples per axis.
template <class F>
void for_each_grid_point(const Box& box, int per_axis, F&& f) {
  const int n = static_cast<int>(box.lo.size());
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  State u(n);
  while (true) {
    for (int d = 0; d < n; ++d) {
      const double t = per_axis > 1 ? double(idx[static_cast<std::size_t>(d)]) / (per_axis - 1) : 0.5;
      u[d] = box.lo[d] + t * (box.hi[d] - box.lo[d]);
    }
    f(u);
    int d = 0;
    while (d < n && ++idx[static_cast<std::size_t>(d)] == per_axis) {
      idx[static_cast<std::size_t>(d)] = 0;
      ++d;
    }
    if (d == n) break;
  }
}

int axis_samples(int dimension, int one_d) {
  switch (dimension) {
    case 1: return one_d;
    case 2: return std::min(one_d, 41);
    case 3: return std::min(one_d, 15);
    default: return std::min(one_d, 9);
  }
}

}  // namespace

bool Box::contains(const State& u, double tol) const {
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double pad = tol * std::max(1.0, hi[i] - lo[i]);
    if (u[i] < lo[i] - pad || u[i] > hi[i] + pad) return false;
  }
  return true;
}

SystemModel::SystemModel(ModelDefinition def) : def_(std::move(def)) {}

std::shared_ptr<const SystemModel> SystemModel::create(ModelDefinition def) {
  if (def.dimension < 1 || def.dimension > 4)
    fail(ErrorKind::InvalidArgument, "dimension must be in 1..4");
  if (!def.flux) fail(ErrorKind::InvalidArgument, "model needs a flux");
  if (def.domain.lo.size() != def.dimension || def.domain.hi.size() != def.dimension)
    fail(ErrorKind::InvalidArgument, "domain box dimension mismatch");
  for (int d = 0; d < def.dimension; ++d)
    if (!(def.domain.hi[d] > def.domain.lo[d])) fail(ErrorKind::InvalidArgument, "empty domain box");
  if (!(def.delta0 > 0)) fail(ErrorKind::InvalidArgument, "delta0 must be positive");

  std::shared_ptr<SystemModel> m(new SystemModel(std::move(def)));
  const ModelDefinition& d = m->def_;
  const int n = d.dimension;

  m->scale_ = std::max({1.0, d.domain.lo.cwiseAbs().maxCoeff(), d.domain.hi.cwiseAbs().maxCoeff()});
  m->small_data_bound_ =
      d.small_data_bound > 0 ? d.small_data_bound : (d.domain.hi - d.domain.lo).norm();

  // Reference orientation of the eigenvectors: largest component positive at the center.
  {
    const EigenDecomposition e = m->eig_unchecked(d.domain.center());
    for (int k = 0; k < n; ++k) {
      State r = e.right.col(k);
      Eigen::Index imax = 0;
      r.cwiseAbs().maxCoeff(&imax);
      if (r[imax] < 0) r = -r;
      m->reference_vectors_.push_back(r);
    }
  }

  if (d.speed_map) {
    m->speed_map_ = *d.speed_map;
  } else {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for_each_grid_point(d.domain, axis_samples(n, d.speed_grid), [&](const State& u) {
      const EigenDecomposition e = m->eig_unchecked(u);
      lo = std::min(lo, e.raw_lambdas.minCoeff());
      hi = std::max(hi, e.raw_lambdas.maxCoeff());
    });
    double span = hi - lo;
    if (span <= 0) span = std::max(1.0, std::abs(hi));
    lo -= 0.05 * span;
    hi += 0.05 * span;
    m->speed_map_.a = 1.0 / (hi - lo);
    m->speed_map_.b = -lo * m->speed_map_.a;
  }

  for (int k = 0; k < n; ++k) {
    FieldInfo info = classify_field(*m, k, d.classification_grid);
    const bool has_analytic =
        static_cast<int>(d.manifolds.size()) > k && !d.manifolds[static_cast<std::size_t>(k)].empty();
    if (info.kind == FieldKind::NGNL && has_analytic) {
      info.manifolds = d.manifolds[static_cast<std::size_t>(k)];
      for (ManifoldDescriptor& md : info.manifolds) {
        if (md.curvature_sign == 0 && md.point.size() == n) {
          const double c = m->nonlinearity_derivative(k, md.point);
          md.curvature_sign = c > 0 ? 1 : (c < 0 ? -1 : 0);
        }
      }
    }
    m->fields_.push_back(std::move(info));
  }
  return m;
}

Matrix SystemModel::jacobian(const State& u) const {
  if (def_.jacobian) return def_.jacobian(u);
  const int n = def_.dimension;
  Matrix j(n, n);
  for (int c = 0; c < n; ++c) {
    const double h = 1e-6 * std::max(1.0, std::abs(u[c]));
    State up = u, um = u;
    up[c] += h;
    um[c] -= h;
    j.col(c) = (def_.flux(up) - def_.flux(um)) / (2 * h);
  }
  return j;
}

void SystemModel::orient(int k, State& r) const {
  if (static_cast<int>(reference_vectors_.size()) > k && r.dot(reference_vectors_[static_cast<std::size_t>(k)]) < 0)
    r = -r;
}

EigenDecomposition SystemModel::eig(const State& u) const {
  if (!def_.domain.contains(u, 1e-9)) fail(ErrorKind::OutOfDomain, "state " + format_state(u));
  return eig_unchecked(u);
}

EigenDecomposition SystemModel::eig_unchecked(const State& u) const {
  const int n = def_.dimension;
  const Matrix a = jacobian(u);
  EigenDecomposition e;
  e.raw_lambdas.resize(n);
  e.right.resize(n, n);
  if (n == 1) {
    e.raw_lambdas[0] = a(0, 0);
    e.right(0, 0) = 1.0;
  } else if (n == 2) {
    const double p = a(0, 0), q = a(0, 1), r = a(1, 0), s = a(1, 1);
    const double half_tr = 0.5 * (p + s);
    const double disc = 0.25 * (p - s) * (p - s) + q * r;
    if (!(disc > 0) || 2 * std::sqrt(disc) < kMinGap)
      fail(ErrorKind::NotStrictlyHyperbolic, "at " + format_state(u));
    const double root = std::sqrt(disc);
    const double l0 = half_tr - root, l1 = half_tr + root;
    e.raw_lambdas << l0, l1;
    const double lam[2] = {l0, l1};
    for (int k = 0; k < 2; ++k) {
      Eigen::Vector2d v1(q, lam[k] - p), v2(lam[k] - s, r);
      Eigen::Vector2d v = v1.squaredNorm() >= v2.squaredNorm() ? v1 : v2;
      e.right.col(k) = v.normalized();
    }
  } else {
    Eigen::EigenSolver<Matrix> es(a);
    if (es.info() != Eigen::Success) fail(ErrorKind::NotStrictlyHyperbolic, "eigensolver failed at " + format_state(u));
    const auto ev = es.eigenvalues();
    const auto vecs = es.eigenvectors();
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return ev[x].real() < ev[y].real(); });
    for (int k = 0; k < n; ++k) {
      const int src = order[static_cast<std::size_t>(k)];
      if (std::abs(ev[src].imag()) > 1e-12 * std::max(1.0, std::abs(ev[src].real())))
        fail(ErrorKind::NotStrictlyHyperbolic, "complex eigenvalue at " + format_state(u));
      e.raw_lambdas[k] = ev[src].real();
      e.right.col(k) = vecs.col(src).real().normalized();
    }
  }
  for (int k = 0; k + 1 < n; ++k)
    if (e.raw_lambdas[k + 1] - e.raw_lambdas[k] < kMinGap)
      fail(ErrorKind::NotStrictlyHyperbolic, "eigenvalue gap below 1e-8 at " + format_state(u));
  for (int k = 0; k < n; ++k) {
    State r = e.right.col(k);
    orient(k, r);
    e.right.col(k) = r;
  }
  e.left = n == 1 ? Matrix::Ones(1, 1) : Matrix(e.right.inverse());
  e.lambdas.resize(n);
  for (int k = 0; k < n; ++k) e.lambdas[k] = speed_map_.apply(e.raw_lambdas[k]);
  return e;
}

double SystemModel::raw_speed(int k, const State& u) const {
  if (def_.dimension == 1) return jacobian(u)(0, 0);
  return eig_unchecked(u).raw_lambdas[k];
}

State SystemModel::right_eigenvector(int k, const State& u) const {
  if (def_.dimension == 1) return State::Ones(1);
  return eig_unchecked(u).right.col(k);
}

double SystemModel::nonlinearity(int k, const State& u) const {
  const double h = 2e-5 * scale_;
  const State r = right_eigenvector(k, u);
  return (raw_speed(k, u + h * r) - raw_speed(k, u - h * r)) / (2 * h);
}

double SystemModel::nonlinearity_derivative(int k, const State& u) const {
  const double h = 1e-3 * scale_;
  const State r = right_eigenvector(k, u);
  return (nonlinearity(k, u + h * r) - nonlinearity(k, u - h * r)) / (2 * h);
}

EigenDecomposition eig(const SystemModel& model, const State& u) { return model.eig(u); }

FieldInfo classify_field(const SystemModel& model, int k, int sample_grid) {
  const int n = model.dimension();
  if (k < 0 || k >= n) fail(ErrorKind::InvalidArgument, "field index out of range");
  if (sample_grid < 3) fail(ErrorKind::InvalidArgument, "classification grid too coarse");
  const Box& box = model.domain();

  std::vector<State> pts;
  std::vector<double> vals;
  for_each_grid_point(box, axis_samples(n, sample_grid), [&](const State& u) {
    pts.push_back(u);
    vals.push_back(model.nonlinearity(k, u));
  });
  double vmax = 0;
  for (double v : vals) vmax = std::max(vmax, std::abs(v));

  FieldInfo info;
  info.k = k;
  if (vmax <= 1e-12) {
    info.kind = FieldKind::LD;
    return info;
  }
  const double band = std::max(1e-10 * vmax, 1e-12);
  std::size_t pos = 0, neg = 0, small = 0;
  for (double v : vals) {
    if (v > band) ++pos;
    else if (v < -band) ++neg;
    else ++small;
  }
  if (pos == 0 || neg == 0) {
    if (small > 0)
      fail(ErrorKind::AmbiguousClassification,
           "field " + std::to_string(k) + " touches zero without changing sign");
    info.kind = FieldKind::GNL;
    return info;
  }
  info.kind = FieldKind::NGNL;

  if (n == 1) {
    // Sign changes along the line, refined by bisection.
    int last_sign = 0;
    double last_u = 0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const int sg = vals[i] > band ? 1 : (vals[i] < -band ? -1 : 0);
      if (sg == 0) continue;
      if (last_sign != 0 && sg != last_sign) {
        double a = last_u, b = pts[i][0];
        double fa = model.nonlinearity(k, State::Constant(1, a));
        for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
          const double mid = 0.5 * (a + b);
          const double fm = model.nonlinearity(k, State::Constant(1, mid));
          if ((fm > 0) == (fa > 0)) {
            a = mid;
            fa = fm;
          } else {
            b = mid;
          }
        }
        const double z = 0.5 * (a + b);
        ManifoldDescriptor md;
        md.g = [z](const State& u) { return u[0] - z; };
        md.point = State::Constant(1, z);
        const double c = model.nonlinearity_derivative(k, md.point);
        md.curvature_sign = c > 0 ? 1 : (c < 0 ? -1 : 0);
        md.label = "u=" + std::to_string(z);
        info.manifolds.push_back(std::move(md));
      }
      last_sign = sg;
      last_u = pts[i][0];
    }
  } else {
    // Generic descriptor: the zero set of grad(lambda_k).r_k itself.
    std::size_t imin = 0;
    for (std::size_t i = 1; i < vals.size(); ++i)
      if (std::abs(vals[i]) < std::abs(vals[imin])) imin = i;
    ManifoldDescriptor md;
    const SystemModel* mp = &model;
    md.g = [mp, k](const State& u) { return mp->nonlinearity(k, u); };
    md.point = pts[imin];
    const double c = model.nonlinearity_derivative(k, md.point);
    md.curvature_sign = c > 0 ? 1 : (c < 0 ? -1 : 0);
    md.label = "zero set of the nonlinearity";
    info.manifolds.push_back(std::move(md));
  }
  return info;
}

Delta0Report validate_delta0(const SystemModel& model, int k) {
  return validate_delta0(model, k, model.delta0());
}

Delta0Report validate_delta0(const SystemModel& model, int k, double delta0) {
  const FieldInfo& info = model.field(k);
  if (info.kind != FieldKind::NGNL)
    fail(ErrorKind::InvalidArgument, "delta0 validation needs an NGNL field");
  const int n = model.dimension();
  const Box& box = model.domain();

  double scale = 0;
  for_each_grid_point(box, axis_samples(n, 101), [&](const State& u) {
    scale = std::max(scale, std::abs(model.nonlinearity_derivative(k, u)));
  });
  const double zero_tol = 1e-6 * std::max(scale, 1e-12);
  const double radius = 6 * delta0;

  Delta0Report rep;
  rep.k = k;
  rep.delta0 = delta0;
  rep.min_abs_derivative = std::numeric_limits<double>::infinity();

  auto check = [&](const State& u, const ManifoldDescriptor& md) {
    const double c = model.nonlinearity_derivative(k, u);
    ++rep.samples;
    rep.min_abs_derivative = std::min(rep.min_abs_derivative, std::abs(c));
    const int sg = c > zero_tol ? 1 : (c < -zero_tol ? -1 : 0);
    if (sg == 0 || (md.curvature_sign != 0 && sg != md.curvature_sign)) {
      std::ostringstream os;
      os << "transversality fails within 6*delta0 of manifold " << md.label << " at " << format_state(u)
         << " (value " << c << ")";
      fail(ErrorKind::Delta0TooLarge, os.str());
    }
  };

  for (const ManifoldDescriptor& md : info.manifolds) {
    if (n == 1) {
      const double z = md.point[0];
      const double a = std::max(box.lo[0], z - radius), b = std::min(box.hi[0], z + radius);
      const int samples = 601;
      for (int i = 0; i < samples; ++i) check(State::Constant(1, a + (b - a) * i / (samples - 1)), md);
    } else {
      for_each_grid_point(box, axis_samples(n, 61), [&](const State& u) {
        const double g = md.g(u);
        State grad(n);
        for (int d = 0; d < n; ++d) {
          const double h = 1e-6 * model.state_scale();
          State up = u, um = u;
          up[d] += h;
          um[d] -= h;
          grad[d] = (md.g(up) - md.g(um)) / (2 * h);
        }
        const double gn = grad.norm();
        if (gn > 0 && std::abs(g) / gn <= radius) check(u, md);
      });
    }
  }
  return rep;
}

}  // namespace glimm
