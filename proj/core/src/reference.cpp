#include "dcs/metrics.hpp"

#include <Eigen/LU>

#include <cmath>
#include <functional>
#include <stdexcept>

namespace dcs {

namespace {

ConstraintSet common_set(const Problem& problem) {
  const ConstraintSet& first = problem.front().set;
  if (first.kind() == SetKind::box) {
    Vector lo = first.lo(), hi = first.hi();
    for (const auto& a : problem) {
      if (a.set.kind() != SetKind::box) throw std::invalid_argument("reference_solve: mixed set kinds");
      lo = lo.cwiseMax(a.set.lo());
      hi = hi.cwiseMin(a.set.hi());
    }
    if ((lo.array() > hi.array()).any()) throw std::invalid_argument("reference_solve: agent boxes do not intersect");
    return ConstraintSet::box(lo, hi);
  }
  for (const auto& a : problem) {
    if (!(a.set == first)) throw std::invalid_argument("reference_solve: non-box sets must coincide");
  }
  return first;
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Minimizes |A x - b|_1 over a box by enumerating every intersection of d
// hyperplanes among the rows and box facets.
ReferenceSolution lad_vertex_enumeration(const Matrix& A, const Vector& b, const ConstraintSet& box,
                                         const std::function<double(const Vector&)>& F) {
  const int d = box.dim();
  const int R = static_cast<int>(A.rows());
  const int H = R + 2 * d;
  if (binom(H, d) > 2e7) throw std::invalid_argument("reference_solve: too many candidate vertices to enumerate");
  Matrix P(H, d);
  Vector q(H);
  P.topRows(R) = A;
  q.head(R) = b;
  for (int j = 0; j < d; ++j) {
    P.row(R + 2 * j).setZero();
    P(R + 2 * j, j) = 1.0;
    q(R + 2 * j) = box.lo()(j);
    P.row(R + 2 * j + 1).setZero();
    P(R + 2 * j + 1, j) = 1.0;
    q(R + 2 * j + 1) = box.hi()(j);
  }
  ReferenceSolution best;
  best.F_star = std::numeric_limits<double>::infinity();
  std::vector<int> idx(d);
  for (int i = 0; i < d; ++i) idx[i] = i;
  Matrix S(d, d);
  Vector r(d);
  while (true) {
    for (int i = 0; i < d; ++i) {
      S.row(i) = P.row(idx[i]);
      r(i) = q(idx[i]);
    }
    Eigen::FullPivLU<Matrix> lu(S);
    if (lu.isInvertible()) {
      Vector x = lu.solve(r);
      if (box.contains(x, 1e-10)) {
        x = box.project(x);
        double f = F(x);
        if (f < best.F_star) {
          best.F_star = f;
          best.x_star = x;
        }
      }
    }
    int i = d - 1;
    while (i >= 0 && idx[i] == H - d + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < d; ++j) idx[j] = idx[j - 1] + 1;
  }
  if (!std::isfinite(best.F_star)) throw std::runtime_error("reference_solve: no feasible vertex found");
  best.tolerance = 1e-12 * (1.0 + std::abs(best.F_star));
  best.method = "vertex_enumeration";
  return best;
}

ReferenceSolution subgradient_reference(const Problem& problem, const ConstraintSet& set,
                                        const ReferenceOptions& opts) {
  auto F = [&](const Vector& x) {
    double v = 0.0;
    for (const auto& a : problem) v += a.objective->value(x);
    return v;
  };
  auto G = [&](const Vector& x) {
    Vector g = Vector::Zero(x.size());
    for (const auto& a : problem) g += a.objective->subgradient(x);
    return g;
  };
  double Mtot = 0.0;
  for (const auto& a : problem) Mtot += a.objective->M();
  const double diam = std::max(set.diameter(), 1e-12);
  Vector x = set.bregman_center();
  ReferenceSolution best;
  best.x_star = x;
  best.F_star = F(x);
  // Averaged linearization lower bound: sum_t w_t (F_t - <g_t, x_t>) + min_z <sum_t w_t g_t, z>.
  double wsum = 0.0, cst = 0.0;
  Vector gsum = Vector::Zero(x.size());
  double lower = -std::numeric_limits<double>::infinity();
  for (int t = 1; t <= opts.max_iterations; ++t) {
    double f = F(x);
    Vector g = G(x);
    if (f < best.F_star) {
      best.F_star = f;
      best.x_star = x;
    }
    const double w = 1.0 / std::sqrt(static_cast<double>(t));
    wsum += w;
    cst += w * (f - g.dot(x));
    gsum += w * g;
    if (t % 1000 == 0 || t == opts.max_iterations) {
      Vector z = set.linear_minimizer(gsum);
      lower = std::max(lower, (cst + gsum.dot(z)) / wsum);
      if (best.F_star - lower <= opts.accuracy) break;
    }
    double gn = g.norm();
    if (gn == 0.0) {
      lower = f;
      break;
    }
    x = set.project(x - (diam / (std::max(Mtot, gn) * std::sqrt(static_cast<double>(t)))) * g);
  }
  best.tolerance = std::max(0.0, best.F_star - lower);
  best.method = "averaged_subgradient";
  if (!(best.tolerance <= opts.accuracy)) {
    throw std::runtime_error("reference_solve: certified accuracy " + std::to_string(best.tolerance) +
                             " not reached within the iteration budget (target " + std::to_string(opts.accuracy) +
                             ")");
  }
  return best;
}

}  // namespace

Stacked consensus_point(const Problem& problem, const Stacked& x) {
  if (static_cast<int>(problem.size()) != x.agents()) throw std::invalid_argument("consensus_point: agent count mismatch");
  Vector mean = Vector::Zero(x.dim());
  for (int i = 0; i < x.agents(); ++i) mean += x.block(i);
  mean /= static_cast<double>(x.agents());
  return Stacked::replicate(x.agents(), common_set(problem).project(mean));
}

double lagrangian_residual(const Stacked& x, const Problem& problem, const LaplacianOperator& L, double F_star,
                           const Stacked& y_star) {
  require_same_shape(x, y_star, "lagrangian_residual");
  return evaluate_F(problem, x) - F_star + y_star.flat().dot(apply_laplacian(L, x).flat());
}

double lagrangian_dual_value(const Problem& problem, const LaplacianOperator& L, const Stacked& y) {
  if (static_cast<int>(problem.size()) != y.agents()) throw std::invalid_argument("lagrangian_dual_value: agent count mismatch");
  const Stacked Ly = apply_laplacian(L, y);
  double total = 0.0;
  for (int i = 0; i < y.agents(); ++i) {
    const auto& a = problem[i];
    const LadData* lad = a.objective->lad_form();
    if (lad == nullptr || a.set.kind() != SetKind::box) {
      throw std::invalid_argument("lagrangian_dual_value: needs LAD objectives on boxes");
    }
    const Vector g = Ly.block(i);
    auto f = [&](const Vector& x) { return a.objective->value(x) + g.dot(x); };
    if (lad->mu > 0.0) {
      auto res = solve_l1_quadratic_box(lad->A, lad->b, lad->mu, lad->c - g / lad->mu, a.set.lo(), a.set.hi());
      total += f(res.x) - res.gap;
    } else {
      total += lad_vertex_enumeration(lad->A, lad->b, a.set, f).F_star;
    }
  }
  return total;
}

ReferenceSolution reference_solve(const Problem& problem, const ReferenceOptions& opts) {
  if (problem.empty()) throw std::invalid_argument("reference_solve: empty problem");
  problem_dim(problem);
  const ConstraintSet set = common_set(problem);
  auto F = [&](const Vector& x) {
    double v = 0.0;
    for (const auto& a : problem) v += a.objective->value(x);
    return v;
  };

  bool all_lad = true;
  for (const auto& a : problem) all_lad = all_lad && a.objective->lad_form() != nullptr;
  if (all_lad && set.kind() == SetKind::box) {
    int rows = 0;
    double rho = 0.0;
    const int d = set.dim();
    for (const auto& a : problem) {
      rows += static_cast<int>(a.objective->lad_form()->A.rows());
      rho += a.objective->lad_form()->mu;
    }
    Matrix A(rows, d);
    Vector b(rows);
    Vector v = Vector::Zero(d);
    int at = 0;
    for (const auto& a : problem) {
      const LadData& L = *a.objective->lad_form();
      A.middleRows(at, L.A.rows()) = L.A;
      b.segment(at, L.A.rows()) = L.b;
      at += static_cast<int>(L.A.rows());
      if (L.mu > 0.0) v += L.mu * L.c;
    }
    if (rho > 0.0) {
      v /= rho;
      auto res = solve_l1_quadratic_box(A, b, rho, v, set.lo(), set.hi());
      if (!res.certified) throw std::runtime_error("reference_solve: strongly convex solve did not certify");
      ReferenceSolution ref;
      ref.x_star = res.x;
      ref.F_star = F(res.x);
      ref.tolerance = std::max(res.gap, 1e-12 * (1.0 + std::abs(ref.F_star)));
      ref.method = "l1_quadratic_dual";
      return ref;
    }
    return lad_vertex_enumeration(A, b, set, F);
  }
  return subgradient_reference(problem, set, opts);
}

}  // namespace dcs
