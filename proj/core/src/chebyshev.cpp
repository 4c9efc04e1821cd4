#include "glimm/chebyshev.hpp"

#include <cmath>
#include <numbers>

#include "glimm/errors.hpp"

namespace glimm {

double Chebyshev::node(double a, double b, int points, int j) {
  const double t = std::cos(std::numbers::pi * (j + 0.5) / points);
  return 0.5 * (a + b) + 0.5 * (b - a) * t;
}

Chebyshev Chebyshev::from_values(double a, double b, const std::vector<double>& vals) {
  const int n = static_cast<int>(vals.size());
  std::vector<double> c(vals.size(), 0.0);
  for (int k = 0; k < n; ++k) {
    double s = 0;
    for (int j = 0; j < n; ++j) s += vals[static_cast<std::size_t>(j)] * std::cos(std::numbers::pi * k * (j + 0.5) / n);
    c[static_cast<std::size_t>(k)] = 2.0 * s / n;
  }
  if (!c.empty()) c[0] *= 0.5;
  return Chebyshev(a, b, std::move(c));
}

double Chebyshev::operator()(double x) const {
  if (c_.empty()) return 0.0;
  const double t = b_ > a_ ? (2 * x - a_ - b_) / (b_ - a_) : 0.0;
  double b1 = 0, b2 = 0;
  for (std::size_t k = c_.size(); k-- > 1;) {
    const double tmp = 2 * t * b1 - b2 + c_[k];
    b2 = b1;
    b1 = tmp;
  }
  return t * b1 - b2 + c_[0];
}

Chebyshev Chebyshev::derivative() const {
  const std::size_t n = c_.size();
  if (n <= 1) return Chebyshev(a_, b_, {0.0});
  std::vector<double> d(n, 0.0);
  // d_{k-1} = d_{k+1} + 2k c_k
  for (std::size_t k = n - 1; k >= 1; --k) {
    d[k - 1] = (k + 1 < n ? d[k + 1] : 0.0) + 2.0 * k * c_[k];
    if (k == 1) break;
  }
  d[0] *= 0.5;
  const double scale = 2.0 / (b_ - a_);
  for (double& v : d) v *= scale;
  d.pop_back();
  return Chebyshev(a_, b_, std::move(d));
}

Chebyshev Chebyshev::integral() const {
  const std::size_t n = c_.size();
  std::vector<double> q(n + 1, 0.0);
  const double h = 0.5 * (b_ - a_);
  // representation with full c_0 for the recurrence
  auto coef = [&](std::size_t k) { return k < n ? (k == 0 ? 2.0 * c_[0] : c_[k]) : 0.0; };
  for (std::size_t k = 1; k <= n; ++k) q[k] = h * (coef(k - 1) - coef(k + 1)) / (2.0 * k);
  Chebyshev r(a_, b_, q);
  q[0] = -r(a_);
  return Chebyshev(a_, b_, std::move(q));
}

namespace {

std::vector<GaussRule> build_rules() {
  std::vector<GaussRule> rules(33);
  for (int n = 1; n <= 32; ++n) {
    GaussRule& g = rules[static_cast<std::size_t>(n)];
    g.x.resize(static_cast<std::size_t>(n));
    g.w.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 1;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        const double pn = n == 1 ? x : p1;
        const double pm = n == 1 ? 1.0 : p0;
        dp = n * (x * pn - pm) / (x * x - 1);
        const double dx = pn / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      g.x[static_cast<std::size_t>(i)] = x;
      g.w[static_cast<std::size_t>(i)] = 2.0 / ((1 - x * x) * dp * dp);
    }
  }
  return rules;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static const std::vector<GaussRule> rules = build_rules();
  if (n < 1 || n > 32) fail(ErrorKind::InvalidArgument, "gauss rule order must be in 1..32");
  return rules[static_cast<std::size_t>(n)];
}

}  // namespace glimm
