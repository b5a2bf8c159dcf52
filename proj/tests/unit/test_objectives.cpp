#include "dcs/objectives.hpp"

#include "helpers.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace dcs;

namespace {

Matrix m11(double a) { return Matrix::Constant(1, 1, a); }
Vector v1(double a) { return Vector::Constant(1, a); }

}  // namespace

TEST(Lad, ValueAndSubgradient) {
  Matrix A(2, 2);
  A << 1, 2, -1, 1;
  Vector b(2);
  b << 1, 0;
  auto box = ConstraintSet::box(2, -3.0, 3.0);
  auto f = fixtures::lad(A, b, box);
  Vector x(2);
  x << 1, 1;
  EXPECT_DOUBLE_EQ(f->value(x), 2.0 + 0.0);
  Vector g = f->subgradient(x);
  EXPECT_DOUBLE_EQ(g(0), 1.0);
  EXPECT_DOUBLE_EQ(g(1), 2.0);
}

TEST(Lad, SandwichAndSubgradientBoundOnSamples) {
  std::mt19937_64 rng(3);
  for (double mu : {0.0, 0.5, 2.0}) {
    for (int rep = 0; rep < 20; ++rep) {
      auto a = fixtures::random_lad_agent(rng, 3, 4, -2.0, 2.0, mu);
      const auto& f = *a.objective;
      for (int s = 0; s < 200; ++s) {
        Vector x = fixtures::random_vector(rng, 3, -2.0, 2.0), y = fixtures::random_vector(rng, 3, -2.0, 2.0);
        double gap = f.value(x) - f.value(y) - f.subgradient(y).dot(x - y);
        EXPECT_GE(gap, 0.5 * mu * (x - y).squaredNorm() - 1e-10);
        EXPECT_LE(gap, f.M() * (x - y).norm() + 1e-10);
        EXPECT_LE(f.subgradient(y).norm(), f.M() + 1e-10);
      }
    }
  }
}

TEST(CompositeProx, AnchorAtKinkStays) {
  auto box = ConstraintSet::box(1, -5.0, 5.0);
  auto f = fixtures::lad(m11(1.0), v1(1.5), box);
  EXPECT_NEAR(composite_prox(*f, box, v1(0.0), v1(1.5), 0.3)(0), 1.5, 1e-12);
  EXPECT_NEAR(composite_prox(*f, box, v1(0.0), v1(4.0), 100.0)(0), 4.0 - 1.0 / 100.0, 1e-12);
}

TEST(CompositeProx, SoftThreshold) {
  auto box = ConstraintSet::box(1, -5.0, 5.0);
  auto f = fixtures::lad(m11(1.0), v1(0.0), box);
  EXPECT_NEAR(composite_prox(*f, box, v1(0.0), v1(2.0), 1.0)(0), 1.0, 1e-12);
  double best = 1e300, arg = 0.0;
  for (int i = 0; i <= 1000000; ++i) {
    double z = -5.0 + 10.0 * i / 1000000.0;
    double val = std::abs(z) + 0.5 * (z - 2.0) * (z - 2.0);
    if (val < best) best = val, arg = z;
  }
  EXPECT_NEAR(arg, 1.0, 1e-5);
}

TEST(CompositeProx, LinearTermStationarity) {
  auto box = ConstraintSet::box(1, -5.0, 5.0);
  auto f = fixtures::lad(m11(1.0), v1(0.0), box);
  double x = composite_prox(*f, box, v1(3.0), v1(0.0), 1.0)(0);
  EXPECT_NEAR(x, -2.0, 1e-12);
  EXPECT_NEAR(3.0 - 1.0 + x, 0.0, 1e-12);
}

TEST(CompositeProx, MatchesGridSearchInTwoDimensions) {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 15; ++rep) {
    double mu = rep % 3 == 0 ? 0.7 : 0.0;
    auto a = fixtures::random_lad_agent(rng, 2, 3, -1.0, 1.0, mu);
    Vector w = fixtures::random_vector(rng, 2, -2.0, 2.0), xa = fixtures::random_vector(rng, 2);
    double eta = std::uniform_real_distribution<double>(0.2, 3.0)(rng);
    Vector x = composite_prox(*a.objective, a.set, w, xa, eta);
    auto phi = [&](const Vector& z) { return w.dot(z) + a.objective->value(z) + 0.5 * eta * (z - xa).squaredNorm(); };
    double best = 1e300;
    const int n = 800;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) {
        Vector z(2);
        z << -1.0 + 2.0 * i / n, -1.0 + 2.0 * j / n;
        best = std::min(best, phi(z));
      }
    const double lip = w.norm() + a.objective->M() + eta * (2.0 * std::sqrt(2.0) + xa.norm());
    EXPECT_TRUE(a.set.contains(x));
    EXPECT_LE(phi(x), best + 1e-12);
    EXPECT_GE(phi(x), best - lip * std::sqrt(2.0) / n);
  }
}

TEST(L1Quadratic, CertifiedAgainstPerturbations) {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 50; ++rep) {
    const int d = 1 + rep % 4, R = 1 + rep % 6;
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix A(R, d);
    for (int r = 0; r < R; ++r)
      for (int j = 0; j < d; ++j) A(r, j) = n(rng);
    Vector b = fixtures::random_vector(rng, R), v = fixtures::random_vector(rng, d, -3.0, 3.0);
    Vector lo = Vector::Constant(d, -1.0), hi = Vector::Constant(d, 1.0);
    double rho = std::uniform_real_distribution<double>(0.1, 4.0)(rng);
    auto res = solve_l1_quadratic_box(A, b, rho, v, lo, hi);
    ASSERT_TRUE(res.certified);
    auto P = [&](const Vector& x) { return (A * x - b).cwiseAbs().sum() + 0.5 * rho * (x - v).squaredNorm(); };
    EXPECT_NEAR(res.value, P(res.x), 1e-12 * (1 + std::abs(res.value)));
    for (int s = 0; s < 200; ++s) {
      Vector z = (res.x + 1e-3 * fixtures::random_vector(rng, d)).cwiseMax(lo).cwiseMin(hi);
      EXPECT_LE(P(res.x), P(z) + 1e-10);
    }
  }
}

TEST(Noise, GaussianMomentsAndBound) {
  std::mt19937_64 rng(31);
  auto base = fixtures::random_lad_agent(rng, 3, 4, -2.0, 2.0);
  const LadData& data = *base.objective->lad_form();
  const double sigma = 1.7;
  LadObjective f(data, base.set, NoiseKind::bounded_gaussian, sigma);
  Vector x = fixtures::random_vector(rng, 3);
  Vector exact = f.subgradient(x);
  const int n = 200000;
  Vector mean = Vector::Zero(3);
  double second = 0.0, worst = 0.0;
  for (int s = 0; s < n; ++s) {
    RandomStream r = RandomStream::derive(5, 0, 1, s);
    Vector e = f.stochastic_subgradient(x, r) - exact;
    mean += e;
    second += e.squaredNorm();
    worst = std::max(worst, e.norm());
  }
  mean /= n;
  second /= n;
  EXPECT_LT(mean.norm(), 5.0 * sigma / std::sqrt(static_cast<double>(n)));
  EXPECT_LE(second, sigma * sigma);
  EXPECT_LE(worst, 4.0 * sigma);
}

TEST(Noise, ZeroSigmaReturnsExactSubgradient) {
  std::mt19937_64 rng(32);
  auto base = fixtures::random_lad_agent(rng, 3, 4, -2.0, 2.0);
  LadObjective f(*base.objective->lad_form(), base.set, NoiseKind::bounded_gaussian, 0.0);
  Vector x = fixtures::random_vector(rng, 3);
  RandomStream r(1);
  EXPECT_EQ(f.stochastic_subgradient(x, r), f.subgradient(x));
}

TEST(Noise, FiniteSumCycleEqualsExact) {
  std::mt19937_64 rng(33);
  for (double mu : {0.0, 0.8}) {
    auto base = fixtures::random_lad_agent(rng, 3, 5, -2.0, 2.0, mu);
    LadObjective f(*base.objective->lad_form(), base.set, NoiseKind::bernoulli_component, 0.0);
    Vector x = fixtures::random_vector(rng, 3);
    Vector avg = Vector::Zero(3);
    for (int j = 0; j < f.components(); ++j) avg += f.component_subgradient(x, j);
    avg /= f.components();
    EXPECT_LT((avg - f.subgradient(x)).norm(), 1e-12);
    for (int s = 0; s < 500; ++s) {
      RandomStream r = RandomStream::derive(2, 0, 0, s);
      EXPECT_LE((f.stochastic_subgradient(x, r) - f.subgradient(x)).norm(), f.component_sigma() + 1e-12);
    }
  }
}

TEST(EvaluateF, Examples) {
  auto box = ConstraintSet::box(1, -2.0, 2.0);
  Problem zero = {fixtures::agent(std::make_shared<fixtures::ZeroObjective>(1), box),
                  fixtures::agent(std::make_shared<fixtures::ZeroObjective>(1), box)};
  EXPECT_EQ(evaluate_F(zero, Stacked(2, 1)), 0.0);
  Problem p = {fixtures::agent(fixtures::lad(m11(1.0), v1(0.0), box), box),
               fixtures::agent(fixtures::lad(m11(1.0), v1(1.0), box), box)};
  Stacked x(2, 1);
  x.block(1)(0) = 1.0;
  EXPECT_EQ(evaluate_F(p, x), 0.0);
}

TEST(EvaluateF, MatchesLoop) {
  std::mt19937_64 rng(34);
  Problem p;
  for (int i = 0; i < 4; ++i) p.push_back(fixtures::random_lad_agent(rng, 2, 3, -1.0, 1.0, 0.3));
  Stacked x = fixtures::random_stacked(rng, 4, 2);
  double oracle = 0.0;
  for (int i = 0; i < 4; ++i) {
    const LadData& L = *p[i].objective->lad_form();
    oracle += (L.A * x.block(i) - L.b).cwiseAbs().sum() + 0.5 * L.mu * (x.block(i) - L.c).squaredNorm();
  }
  EXPECT_NEAR(evaluate_F(p, x), oracle, 1e-12);
}
