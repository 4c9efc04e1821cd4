#include <gtest/gtest.h>

#include <random>

#include "glimm/envelope.hpp"
#include "oracles.hpp"

using namespace glimm;

namespace {

SampledFunction random_function(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> U(-1, 1);
  SampledFunction f;
  double x = U(rng);
  for (std::size_t i = 0; i < n; ++i) {
    x += 0.01 + std::fabs(U(rng));
    f.grid.push_back(x);
    f.values.push_back(U(rng) + 0.3 * x * x * U(rng));
  }
  return f;
}

}  // namespace

TEST(Envelope, MatchesGiftWrappingOracle) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 2 + rng() % 150;
    const SampledFunction f = random_function(rng, n);
    const EnvelopeResult e = lower_convex_envelope(f);
    const auto ref = oracle::convex_minorant(f.grid, f.values);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(e.envelope.values[i], ref[i], 1e-12 * (1 + std::fabs(ref[i])));
      EXPECT_LE(e.envelope.values[i], f.values[i] + 1e-12);
    }
  }
}

TEST(Envelope, UpperIsMirrorOfLower) {
  std::mt19937_64 rng(5);
  const SampledFunction f = random_function(rng, 80);
  SampledFunction g = f;
  for (auto& v : g.values) v = -v;
  const auto ref = oracle::convex_minorant(g.grid, g.values);
  const EnvelopeResult e = upper_concave_envelope(f);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(e.envelope.values[i], -ref[i], 1e-12);
  EXPECT_FALSE(e.lower);
}

TEST(Envelope, SlopesNondecreasing) {
  std::mt19937_64 rng(6);
  const SampledFunction f = random_function(rng, 120);
  const EnvelopeResult e = lower_convex_envelope(f);
  for (std::size_t i = 1; i < e.slope.size(); ++i) EXPECT_GE(e.slope[i], e.slope[i - 1] - 1e-12);
}

TEST(Envelope, ConvexFunctionIsOneRarefactionPiece) {
  SampledFunction f;
  for (int i = 0; i <= 50; ++i) {
    const double x = i / 50.0;
    f.grid.push_back(x);
    f.values.push_back(x * x);
  }
  const auto pieces = decompose_contact(lower_convex_envelope(f));
  ASSERT_EQ(pieces.size(), 1u);
  EXPECT_EQ(pieces[0].kind, PieceKind::Rarefaction);
  EXPECT_EQ(pieces[0].begin, 0u);
  EXPECT_EQ(pieces[0].end, 50u);
}

TEST(Envelope, ConcaveFunctionIsOneChord) {
  SampledFunction f;
  for (int i = 0; i <= 40; ++i) {
    const double x = i / 40.0;
    f.grid.push_back(x);
    f.values.push_back(-x * x);
  }
  const EnvelopeResult e = lower_convex_envelope(f);
  EXPECT_EQ(e.vertices.size(), 2u);
  const auto pieces = decompose_contact(e);
  ASSERT_EQ(pieces.size(), 1u);
  EXPECT_EQ(pieces[0].kind, PieceKind::ShockOrContact);
  EXPECT_FALSE(pieces[0].flat_contact);
}

TEST(Envelope, LinearFunctionIsFlatContact) {
  SampledFunction f;
  for (int i = 0; i <= 10; ++i) {
    f.grid.push_back(i);
    f.values.push_back(2.0 * i + 1);
  }
  const auto pieces = decompose_contact(lower_convex_envelope(f));
  ASSERT_EQ(pieces.size(), 1u);
  EXPECT_TRUE(pieces[0].flat_contact);
}

TEST(Envelope, CubicShapeShockThenRarefaction) {
  // f = x^3 on [-1, 1]: chord from -1 tangent at 1/2, then convex part
  SampledFunction f;
  const int n = 400;
  for (int i = 0; i <= n; ++i) {
    const double x = -1 + 2.0 * i / n;
    f.grid.push_back(x);
    f.values.push_back(x * x * x);
  }
  const auto pieces = decompose_contact(lower_convex_envelope(f));
  ASSERT_GE(pieces.size(), 2u);
  EXPECT_EQ(pieces.front().kind, PieceKind::ShockOrContact);
  EXPECT_EQ(pieces.back().kind, PieceKind::Rarefaction);
  EXPECT_NEAR(f.grid[pieces.front().end], 0.5, 2.0 / n);
}
