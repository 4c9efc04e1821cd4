#pragma once

#include <vector>

namespace glimm {

// Chebyshev series on [a, b].
class Chebyshev {
 public:
  Chebyshev() = default;
  Chebyshev(double a, double b, std::vector<double> coeffs) : a_(a), b_(b), c_(std::move(coeffs)) {}

  template <class F>
  static Chebyshev fit(double a, double b, int points, F&& f) {
    std::vector<double> vals(static_cast<std::size_t>(points));
    for (int j = 0; j < points; ++j) vals[static_cast<std::size_t>(j)] = f(node(a, b, points, j));
    return from_values(a, b, vals);
  }
  static double node(double a, double b, int points, int j);
  static Chebyshev from_values(double a, double b, const std::vector<double>& vals);

  double operator()(double x) const;
  Chebyshev derivative() const;
  Chebyshev integral() const;  // antiderivative vanishing at a
  double a() const { return a_; }
  double b() const { return b_; }
  bool empty() const { return c_.empty(); }
  const std::vector<double>& coefficients() const { return c_; }

 private:
  double a_ = 0, b_ = 1;
  std::vector<double> c_;
};

struct GaussRule {
  std::vector<double> x;  // on [-1, 1]
  std::vector<double> w;
};

const GaussRule& gauss_legendre(int n);  // 1 <= n <= 32

template <class F>
double integrate_gauss(F&& f, double a, double b, int n = 12) {
  const GaussRule& g = gauss_legendre(n);
  const double h = 0.5 * (b - a), m = 0.5 * (a + b);
  double s = 0;
  for (std::size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * f(m + h * g.x[i]);
  return s * h;
}

}  // namespace glimm
