#pragma once

#include "dcs/model.hpp"
#include "dcs/rng.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dcs {

enum class NoiseKind { none, bounded_gaussian, bernoulli_component };

std::string noise_kind_name(NoiseKind k);
NoiseKind parse_noise_kind(const std::string& name);

/// Data of f(x) = |A x - b|_1 + mu/2 |x - c|^2.
struct LadData {
  Matrix A;
  Vector b;
  double mu = 0.0;
  Vector c;
};

class AgentObjective {
 public:
  virtual ~AgentObjective() = default;

  virtual int dim() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual Vector subgradient(const Vector& x) const = 0;
  virtual Vector stochastic_subgradient(const Vector& x, RandomStream& rng) const = 0;

  virtual bool supports_exact_prox() const { return false; }
  /// argmin over the set of <w,x> + f(x) + eta/2 |x - x_anchor|^2.
  virtual Vector composite_prox(const ConstraintSet& set, const Vector& w, const Vector& x_anchor,
                                double eta) const;

  virtual double M() const = 0;
  virtual double mu() const = 0;
  virtual double sigma() const = 0;
  virtual NoiseKind noise_kind() const = 0;

  virtual const LadData* lad_form() const { return nullptr; }
};

/// Least absolute deviations plus an optional quadratic regularizer. M is
/// derived from the data and the set so that both the convexity sandwich and
/// the subgradient norm bound hold on the set.
class LadObjective final : public AgentObjective {
 public:
  LadObjective(LadData data, const ConstraintSet& set, NoiseKind noise = NoiseKind::none, double sigma = 0.0);

  int dim() const override { return static_cast<int>(data_.A.cols()); }
  double value(const Vector& x) const override;
  Vector subgradient(const Vector& x) const override;
  Vector stochastic_subgradient(const Vector& x, RandomStream& rng) const override;

  bool supports_exact_prox() const override { return true; }
  Vector composite_prox(const ConstraintSet& set, const Vector& w, const Vector& x_anchor,
                        double eta) const override;

  double M() const override { return M_; }
  double mu() const override { return data_.mu; }
  double sigma() const override { return sigma_; }
  NoiseKind noise_kind() const override { return noise_; }
  const LadData* lad_form() const override { return &data_; }

  int components() const { return static_cast<int>(data_.A.rows()); }
  /// l * f_j'(x) with f_j = |a_j x - b_j| + mu/(2l) |x - c|^2.
  Vector component_subgradient(const Vector& x, int j) const;
  /// Smallest sigma making the component-sampling error bounded by sigma.
  double component_sigma() const;

 private:
  LadData data_;
  double M_ = 0.0;
  NoiseKind noise_;
  double sigma_;
};

struct AgentProblem {
  std::shared_ptr<const AgentObjective> objective;
  ConstraintSet set;
  BregmanGeometry geometry;
};

using Problem = std::vector<AgentProblem>;

Vector composite_prox(const AgentObjective& obj, const ConstraintSet& set, const Vector& w, const Vector& x_anchor,
                      double eta);

double evaluate_F(const Problem& problem, const Stacked& x);
std::vector<BregmanGeometry> geometries(const Problem& problem);
int problem_dim(const Problem& problem);

struct L1QuadraticResult {
  Vector x;
  double value = 0.0;
  double gap = 0.0;
  bool certified = false;
};

/// Solves min over lo <= x <= hi of |A x - b|_1 + rho/2 |x - v|^2 through its
/// box-constrained dual, finishing with an active-set solve checked against
/// the optimality conditions. gap is a duality-gap certificate.
L1QuadraticResult solve_l1_quadratic_box(const Matrix& A, const Vector& b, double rho, const Vector& v,
                                         const Vector& lo, const Vector& hi);

}  // namespace dcs
