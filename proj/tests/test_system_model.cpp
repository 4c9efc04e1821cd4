#include <gtest/gtest.h>

#include <random>

#include "glimm/errors.hpp"
#include "glimm/system_model.hpp"

using namespace glimm;

namespace {
State s1(double a) { return State::Constant(1, a); }
State s2(double a, double b) {
  State u(2);
  u << a, b;
  return u;
}
}  // namespace

TEST(SystemModel, EigenPairsSatisfyDefinition) {
  ModelPtr m = make_p_system();
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(-0.45, 0.45);
  for (int t = 0; t < 50; ++t) {
    const State u = s2(U(rng), U(rng));
    const EigenDecomposition e = m->eig(u);
    const Matrix A = m->jacobian(u);
    for (int k = 0; k < 2; ++k) {
      const State r = e.right.col(k);
      EXPECT_NEAR((A * r - e.raw_lambdas(k) * r).norm(), 0.0, 1e-10);
      EXPECT_NEAR(r.norm(), 1.0, 1e-12);
      for (int h = 0; h < 2; ++h) EXPECT_NEAR(e.left.row(h).dot(r), h == k ? 1.0 : 0.0, 1e-10);
    }
    EXPECT_LT(e.lambdas(0), e.lambdas(1));
    // p-system: raw speeds -+sqrt(1 + v^2)
    EXPECT_NEAR(e.raw_lambdas(1), std::sqrt(1 + u[0] * u[0]), 1e-10);
  }
}

TEST(SystemModel, Classification) {
  EXPECT_EQ(make_burgers()->field(0).kind, FieldKind::GNL);
  EXPECT_EQ(make_cubic()->field(0).kind, FieldKind::NGNL);
  EXPECT_EQ(make_quartic()->field(0).kind, FieldKind::NGNL);
  EXPECT_EQ(make_quartic()->field(0).manifolds.size(), 3u);
  EXPECT_EQ(make_linear()->field(0).kind, FieldKind::LD);
  EXPECT_EQ(make_linear()->field(1).kind, FieldKind::LD);
  ModelPtr p = make_p_system();
  EXPECT_EQ(p->field(0).kind, FieldKind::NGNL);
  EXPECT_EQ(p->field(1).kind, FieldKind::NGNL);
}

TEST(SystemModel, CubicNonlinearityVanishesOnManifold) {
  ModelPtr m = make_cubic();
  // lambda = 3u^2, grad lambda . r = 6u
  EXPECT_NEAR(m->nonlinearity(0, s1(0.0)), 0.0, 1e-8);
  EXPECT_NEAR(m->nonlinearity(0, s1(0.5)), 3.0, 1e-6);
  EXPECT_GT(m->nonlinearity_derivative(0, s1(0.0)), 0.0);
}

TEST(SystemModel, SpeedMapIncreasingIntoUnitInterval) {
  for (const auto& name : builtin_model_names()) {
    ModelPtr m = make_builtin(name);
    EXPECT_GT(m->speed_map().a, 0.0) << name;
    const Box& b = m->domain();
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(0, 1);
    for (int t = 0; t < 200; ++t) {
      State u = b.lo + (b.hi - b.lo).cwiseProduct(State::NullaryExpr(b.lo.size(), [&](Eigen::Index) { return U(rng); }));
      for (int k = 0; k < m->dimension(); ++k) {
        const double v = m->speed(k, u);
        EXPECT_GE(v, 0.0) << name;
        EXPECT_LE(v, 1.0) << name;
      }
    }
  }
}

TEST(SystemModel, DomainErrors) {
  EXPECT_THROW(make_builtin("nope"), Error);
  ModelPtr m = make_cubic();
  try {
    m->eig(s1(5.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutOfDomain);
  }
}

TEST(SystemModel, Delta0Validation) {
  ModelPtr m = make_cubic();
  const Delta0Report r = validate_delta0(*m, 0);
  EXPECT_GT(r.samples, 0u);
  EXPECT_GT(r.min_abs_derivative, 0.0);
}
