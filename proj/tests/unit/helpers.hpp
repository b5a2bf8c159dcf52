#pragma once

#include "dcs/objectives.hpp"
#include "dcs/solver.hpp"

#include <memory>
#include <random>

namespace dcs::fixtures {

inline Vector random_vector(std::mt19937_64& rng, int d, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(d);
  for (int j = 0; j < d; ++j) v(j) = u(rng);
  return v;
}

inline Stacked random_stacked(std::mt19937_64& rng, int m, int d, double lo = -1.0, double hi = 1.0) {
  Stacked x(m, d);
  for (int i = 0; i < m; ++i) x.block(i) = random_vector(rng, d, lo, hi);
  return x;
}

inline std::shared_ptr<LadObjective> lad(Matrix A, Vector b, const ConstraintSet& set, double mu = 0.0,
                                         NoiseKind noise = NoiseKind::none, double sigma = 0.0) {
  LadData data{std::move(A), std::move(b), mu, Vector::Zero(set.dim())};
  return std::make_shared<LadObjective>(std::move(data), set, noise, sigma);
}

inline AgentProblem agent(std::shared_ptr<const AgentObjective> f, const ConstraintSet& set) {
  return {std::move(f), set, BregmanGeometry::euclidean()};
}

/// f(x) = 0 with M = 1, used where the objective must vanish identically.
class ZeroObjective final : public AgentObjective {
 public:
  explicit ZeroObjective(int d) : d_(d) {}
  int dim() const override { return d_; }
  double value(const Vector&) const override { return 0.0; }
  Vector subgradient(const Vector&) const override { return Vector::Zero(d_); }
  Vector stochastic_subgradient(const Vector&, RandomStream&) const override { return Vector::Zero(d_); }
  double M() const override { return 1.0; }
  double mu() const override { return 0.0; }
  double sigma() const override { return 0.0; }
  NoiseKind noise_kind() const override { return NoiseKind::none; }

 private:
  int d_;
};

/// Random LAD agent with R rows on [lo, hi]^d.
inline AgentProblem random_lad_agent(std::mt19937_64& rng, int d, int R, double lo, double hi, double mu = 0.0) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix A(R, d);
  for (int r = 0; r < R; ++r)
    for (int j = 0; j < d; ++j) A(r, j) = n(rng);
  Vector b = random_vector(rng, R);
  auto set = ConstraintSet::box(d, lo, hi);
  LadData data{A, b, mu, random_vector(rng, d)};
  return agent(std::make_shared<LadObjective>(std::move(data), set), set);
}

}  // namespace dcs::fixtures
