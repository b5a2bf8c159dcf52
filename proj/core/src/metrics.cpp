#include "dcs/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace dcs {

double gap_Q(const Stacked& x, const Stacked& y, const Stacked& x_bar, const Stacked& y_bar, const Problem& problem,
             const LaplacianOperator& L) {
  require_same_shape(x, y, "gap_Q");
  require_same_shape(x, x_bar, "gap_Q");
  require_same_shape(x, y_bar, "gap_Q");
  return evaluate_F(problem, x) + L.apply(x).flat().dot(y_bar.flat()) - evaluate_F(problem, x_bar) -
         L.apply(x_bar).flat().dot(y.flat());
}

double perturbed_gap(const Stacked& v, const Stacked& x, const Stacked& y, const Problem& problem,
                     const LaplacianOperator& L, const Stacked& x_star, const std::vector<Stacked>& probes) {
  if (probes.empty()) throw std::invalid_argument("perturbed_gap: empty probe set");
  require_same_shape(v, x, "perturbed_gap");
  const double Fx = evaluate_F(problem, x);
  const double Fs = evaluate_F(problem, x_star);
  const Vector Lx = L.apply(x).flat();
  const double cross = L.apply(x_star).flat().dot(y.flat());
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& yb : probes) {
    require_same_shape(v, yb, "perturbed_gap");
    double q = Fx + Lx.dot(yb.flat()) - Fs - cross - v.flat().dot(yb.flat());
    best = std::max(best, q);
  }
  return best;
}

double feasibility_residual(const Stacked& x, const LaplacianOperator& L) { return L.apply(x).norm(); }

Certificate certify_eps_delta(const Stacked& x, const ReferenceSolution& ref, double eps, double delta,
                              const Problem& problem, const LaplacianOperator& L) {
  if (!(eps > 0.0)) throw std::invalid_argument("certify_eps_delta: eps must be positive");
  if (!(delta > 0.0)) throw std::invalid_argument("certify_eps_delta: delta must be positive");
  if (!(ref.tolerance <= eps / 10.0)) {
    throw std::invalid_argument("certify_eps_delta: reference value certified only to " +
                                std::to_string(ref.tolerance) + ", need eps/10 = " + std::to_string(eps / 10.0));
  }
  Certificate c;
  c.primal_gap = evaluate_F(problem, x) - ref.F_star;
  c.feasibility = feasibility_residual(x, L);
  c.primal_margin = eps - c.primal_gap;
  c.feas_margin = delta - c.feasibility;
  c.ok = c.primal_margin >= 0.0 && c.feas_margin >= 0.0;
  return c;
}

double dual_norm_bound(int m, double M, double sigma_min_nonzero) {
  if (!(sigma_min_nonzero > 0.0)) throw std::invalid_argument("dual_norm_bound: sigma_min must be positive");
  if (m < 1 || !(M > 0.0)) throw std::invalid_argument("dual_norm_bound: m and M must be positive");
  return std::sqrt(static_cast<double>(m)) * M / sigma_min_nonzero;
}

double conservative_ystar_dist(double y0_norm, int m, double M, double sigma_min_nonzero) {
  return y0_norm + dual_norm_bound(m, M, sigma_min_nonzero);
}

std::vector<std::string> theorem_ids() {
  return {"dpd-convex-primal",   "dpd-convex-feasibility",  "dcs-convex-primal",  "dcs-convex-feasibility",
          "dcs-strong-primal",   "dcs-strong-feasibility",  "sdcs-convex-primal", "sdcs-convex-feasibility",
          "sdcs-strong-primal",  "sdcs-strong-feasibility"};
}

double theorem_bound(const std::string& id, const BoundInputs& in) {
  if (!(in.L_norm > 0.0)) throw std::invalid_argument("theorem_bound: L_norm must be positive");
  if (in.N < 1) throw std::invalid_argument("theorem_bound: N must be at least 1");
  if (in.V0 < 0.0 || in.y0_norm < 0.0 || in.ystar_dist < 0.0 || in.D_tilde < 0.0) {
    throw std::invalid_argument("theorem_bound: distances must be nonnegative");
  }
  const double L = in.L_norm;
  const double N = in.N;
  const double V0 = in.V0;
  const double y0 = in.y0_norm;
  const double D = in.D_tilde;
  const double ys = in.ystar_dist;

  if (id == "dpd-convex-primal") return L / N * (2.0 * V0 + 0.5 * y0 * y0);
  if (id == "dpd-convex-feasibility") return 2.0 * L / N * (3.0 * std::sqrt(V0) + 2.0 * ys);
  if (id == "dcs-convex-primal") return L / N * (3.0 * V0 + 0.5 * y0 * y0 + 2.0 * D);
  if (id == "dcs-convex-feasibility") return L / N * (3.0 * std::sqrt(6.0 * V0 + 4.0 * D) + 4.0 * ys);
  if (id == "sdcs-convex-primal") return L / N * (3.0 * V0 + 0.5 * y0 * y0 + 4.0 * D);
  if (id == "sdcs-convex-feasibility") return L / N * (3.0 * std::sqrt(6.0 * V0 + 8.0 * D) + 4.0 * ys);

  if (id == "dcs-strong-primal" || id == "sdcs-strong-primal" || id == "dcs-strong-feasibility" ||
      id == "sdcs-strong-feasibility") {
    if (!(in.mu > 0.0)) throw std::invalid_argument("theorem_bound: " + id + " needs mu > 0");
    if (!(in.C >= 1.0) || !std::isfinite(in.C)) {
      throw std::invalid_argument("theorem_bound: " + id + " needs a finite growth constant C >= 1");
    }
    if (in.N < 2) throw std::invalid_argument("theorem_bound: " + id + " holds for N >= 2 only");
    const double scale = N * (N + 3.0);
    const double mu = in.mu;
    const double C = in.C;
    if (id.find("primal") != std::string::npos) {
      return 2.0 / scale * (mu / C * V0 + 2.0 * L * L * C / mu * y0 * y0 + 2.0 * mu * D / C);
    }
    return 8.0 * L / scale * (3.0 * std::sqrt(2.0 * D + V0) + 7.0 * L * C / mu * ys);
  }
  throw std::invalid_argument("theorem_bound: unknown id '" + id + "'");
}

BoundPair theorem_bounds(ScheduleMode mode, const BoundInputs& in) {
  std::string prefix;
  switch (mode) {
    case ScheduleMode::dpd_convex: prefix = "dpd-convex"; break;
    case ScheduleMode::dcs_convex: prefix = "dcs-convex"; break;
    case ScheduleMode::dcs_strongly_convex: prefix = "dcs-strong"; break;
    case ScheduleMode::sdcs_convex: prefix = "sdcs-convex"; break;
    case ScheduleMode::sdcs_strongly_convex: prefix = "sdcs-strong"; break;
  }
  BoundPair p;
  p.primal_id = prefix + "-primal";
  p.feas_id = prefix + "-feasibility";
  p.primal_rhs = theorem_bound(p.primal_id, in);
  p.feas_rhs = theorem_bound(p.feas_id, in);
  p.conservative = in.ystar_conservative;
  return p;
}

double sliding_extra_term(const OuterSchedule& s, int m, double M) {
  double num = 0.0;
  double den = 0.0;
  for (int k = 1; k <= s.N; ++k) {
    num += 4.0 * m * M * M * s.theta_at(k) / ((static_cast<double>(s.T_at(k)) + 3.0) * s.eta_at(k));
    den += s.theta_at(k);
  }
  return num / den;
}

}  // namespace dcs
