#pragma once

#include "dcs/objectives.hpp"
#include "dcs/schedule.hpp"
#include "dcs/topology.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dcs {

/// Consensual optimum of the centralized problem.
struct ReferenceSolution {
  Vector x_star;
  double F_star = 0.0;
  std::optional<Stacked> y_star;
  double tolerance = 0.0;  // certified: F_star - true optimum lies in [0, tolerance]
  std::string method;

  Stacked replicated(int agents) const { return Stacked::replicate(agents, x_star); }
};

/// Q((x,y); (xb,yb)) = F(x) + <Lx, yb> - F(xb) - <L xb, y>.
double gap_Q(const Stacked& x, const Stacked& y, const Stacked& x_bar, const Stacked& y_bar, const Problem& problem,
             const LaplacianOperator& L);

/// max over the probe set of Q((x,y); (x_star, yb)) - <v, yb>. A lower bound
/// on the perturbed gap, whose supremum runs over all of R^{md}.
double perturbed_gap(const Stacked& v, const Stacked& x, const Stacked& y, const Problem& problem,
                     const LaplacianOperator& L, const Stacked& x_star, const std::vector<Stacked>& probes);

double feasibility_residual(const Stacked& x, const LaplacianOperator& L);

/// Block mean of x, projected onto the common constraint set and replicated.
/// F at this point is never below the optimum, unlike F(x) for a
/// non-consensual x.
Stacked consensus_point(const Problem& problem, const Stacked& x);

/// F(x) - F_star + <y_star, Lx>: the gap Q((x, .); (x_star, y_star)), nonnegative
/// whenever (x_star, y_star) is a saddle point.
double lagrangian_residual(const Stacked& x, const Problem& problem, const LaplacianOperator& L, double F_star,
                           const Stacked& y_star);

/// Lower bound on the dual function sum_i min over X_i of f_i(x_i) + <(L y)_i, x_i>,
/// exact up to solver certificates. Never exceeds the optimum. LAD objectives on
/// boxes only.
double lagrangian_dual_value(const Problem& problem, const LaplacianOperator& L, const Stacked& y);

struct Certificate {
  bool ok = false;
  double primal_gap = 0.0;
  double feasibility = 0.0;
  double primal_margin = 0.0;  // eps - primal_gap
  double feas_margin = 0.0;    // delta - feasibility
};

Certificate certify_eps_delta(const Stacked& x, const ReferenceSolution& ref, double eps, double delta,
                              const Problem& problem, const LaplacianOperator& L);

/// sqrt(m) M / sigma_min.
double dual_norm_bound(int m, double M, double sigma_min_nonzero);

struct BoundInputs {
  double L_norm = 0.0;
  int m = 0;
  double M = 0.0;
  double mu = 0.0;
  double C = 1.0;
  double sigma = 0.0;
  int N = 0;
  double D_tilde = 0.0;
  double V0 = 0.0;          // V(x^0, x*)
  double y0_norm = 0.0;     // |y^0|
  double ystar_dist = 0.0;  // |y* - y^0|, or the conservative surrogate
  bool ystar_conservative = false;
};

struct BoundPair {
  std::string primal_id;
  std::string feas_id;
  double primal_rhs = 0.0;
  double feas_rhs = 0.0;
  bool conservative = false;
};

/// Right-hand side of one theorem bound. Ids: {dpd,dcs,sdcs}-{convex,strong}-{primal,feasibility}
/// (the primal-dual method only has the convex pair).
double theorem_bound(const std::string& id, const BoundInputs& in);
std::vector<std::string> theorem_ids();

/// Both bounds applicable to a schedule mode.
BoundPair theorem_bounds(ScheduleMode mode, const BoundInputs& in);

/// |y0| + sqrt(m) M / sigma_min, an upper bound on |y* - y0| for the
/// bounded-norm multiplier.
double conservative_ystar_dist(double y0_norm, int m, double M, double sigma_min_nonzero);

/// Extra term of the sliding gap estimate over the exact primal-dual method:
/// (sum theta_k)^{-1} sum 4 m M^2 theta_k / ((T_k + 3) eta_k).
double sliding_extra_term(const OuterSchedule& s, int m, double M);

struct ReferenceOptions {
  double accuracy = 1e-8;
  int max_iterations = 2'000'000;
};

/// Centralized solve of min over the common set of sum_i f_i.
ReferenceSolution reference_solve(const Problem& problem, const ReferenceOptions& opts = {});

}  // namespace dcs
