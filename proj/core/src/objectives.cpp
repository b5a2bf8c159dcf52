#include "dcs/objectives.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace dcs {

std::string noise_kind_name(NoiseKind k) {
  switch (k) {
    case NoiseKind::none: return "none";
    case NoiseKind::bounded_gaussian: return "bounded_gaussian";
    case NoiseKind::bernoulli_component: return "bernoulli_component";
  }
  return "?";
}

NoiseKind parse_noise_kind(const std::string& name) {
  if (name == "none") return NoiseKind::none;
  if (name == "bounded_gaussian") return NoiseKind::bounded_gaussian;
  if (name == "bernoulli_component") return NoiseKind::bernoulli_component;
  throw std::invalid_argument("unknown noise kind '" + name + "'");
}

Vector AgentObjective::composite_prox(const ConstraintSet&, const Vector&, const Vector&, double) const {
  throw std::logic_error("objective has no exact composite prox; use the communication-sliding solver instead");
}

namespace {

double sign0(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }

double sum_row_norms(const Matrix& A) {
  double s = 0.0;
  for (Eigen::Index r = 0; r < A.rows(); ++r) s += A.row(r).norm();
  return s;
}

}  // namespace

LadObjective::LadObjective(LadData data, const ConstraintSet& set, NoiseKind noise, double sigma)
    : data_(std::move(data)), noise_(noise), sigma_(sigma) {
  const Eigen::Index d = data_.A.cols();
  if (d < 1) throw std::invalid_argument("LadObjective: dimension must be positive");
  if (data_.b.size() != data_.A.rows()) throw std::invalid_argument("LadObjective: b length must match A rows");
  if (data_.mu < 0.0) throw std::invalid_argument("LadObjective: mu must be nonnegative");
  if (data_.c.size() == 0) data_.c = Vector::Zero(d);
  if (data_.c.size() != d) throw std::invalid_argument("LadObjective: c length must match A columns");
  if (set.dim() != d) throw std::invalid_argument("LadObjective: set dimension mismatch");
  if (sigma_ < 0.0) throw std::invalid_argument("LadObjective: sigma must be nonnegative");
  if (noise_ == NoiseKind::none && sigma_ != 0.0) throw std::invalid_argument("LadObjective: noise none needs sigma 0");
  if (noise_ == NoiseKind::bernoulli_component) {
    if (data_.A.rows() == 0) throw std::invalid_argument("LadObjective: component sampling needs at least one row");
    double need = component_sigma();
    if (sigma_ < need) sigma_ = need;
  }
  double rows = sum_row_norms(data_.A);
  M_ = std::max(2.0 * rows + 0.5 * data_.mu * set.diameter(), rows + data_.mu * set.max_distance_from(data_.c));
}

double LadObjective::value(const Vector& x) const {
  double v = (data_.A * x - data_.b).cwiseAbs().sum();
  if (data_.mu > 0.0) v += 0.5 * data_.mu * (x - data_.c).squaredNorm();
  return v;
}

Vector LadObjective::subgradient(const Vector& x) const {
  Vector r = data_.A * x - data_.b;
  Vector s = r.unaryExpr([](double t) { return sign0(t); });
  Vector g = data_.A.transpose() * s;
  if (data_.mu > 0.0) g += data_.mu * (x - data_.c);
  return g;
}

Vector LadObjective::component_subgradient(const Vector& x, int j) const {
  const int l = components();
  if (j < 0 || j >= l) throw std::out_of_range("component_subgradient: index out of range");
  double s = sign0(data_.A.row(j).dot(x) - data_.b(j));
  Vector g = (static_cast<double>(l) * s) * data_.A.row(j).transpose();
  if (data_.mu > 0.0) g += data_.mu * (x - data_.c);
  return g;
}

double LadObjective::component_sigma() const {
  double maxrow = 0.0;
  for (Eigen::Index r = 0; r < data_.A.rows(); ++r) maxrow = std::max(maxrow, data_.A.row(r).norm());
  return static_cast<double>(data_.A.rows()) * maxrow + sum_row_norms(data_.A);
}

Vector LadObjective::stochastic_subgradient(const Vector& x, RandomStream& rng) const {
  switch (noise_) {
    case NoiseKind::none:
      return subgradient(x);
    case NoiseKind::bounded_gaussian: {
      Vector g = subgradient(x);
      if (sigma_ == 0.0) return g;
      const double s = sigma_ / std::sqrt(2.0 * static_cast<double>(dim()));
      std::normal_distribution<double> normal(0.0, 1.0);
      for (int j = 0; j < dim(); ++j) {
        double z = normal(rng);
        while (std::abs(z) > 3.0) z = normal(rng);
        g(j) += s * z;
      }
      return g;
    }
    case NoiseKind::bernoulli_component: {
      std::uniform_int_distribution<int> pick(0, components() - 1);
      return component_subgradient(x, pick(rng));
    }
  }
  return subgradient(x);
}

Vector LadObjective::composite_prox(const ConstraintSet& set, const Vector& w, const Vector& x_anchor,
                                    double eta) const {
  if (set.kind() != SetKind::box) {
    throw std::invalid_argument("composite_prox: exact prox is only available on box sets, not on a " +
                                set.kind_name());
  }
  if (!(eta > 0.0)) throw std::invalid_argument("composite_prox: eta must be positive");
  const double rho = data_.mu + eta;
  Vector v = (data_.mu * data_.c + eta * x_anchor - w) / rho;
  auto res = solve_l1_quadratic_box(data_.A, data_.b, rho, v, set.lo(), set.hi());
  if (!res.certified) {
    throw std::runtime_error("composite_prox: subproblem not solved to certified accuracy (gap " +
                             std::to_string(res.gap) + ")");
  }
  return res.x;
}

Vector composite_prox(const AgentObjective& obj, const ConstraintSet& set, const Vector& w, const Vector& x_anchor,
                      double eta) {
  if (!obj.supports_exact_prox()) {
    throw std::logic_error("composite_prox: objective has no exact prox support");
  }
  return obj.composite_prox(set, w, x_anchor, eta);
}

double evaluate_F(const Problem& problem, const Stacked& x) {
  if (static_cast<int>(problem.size()) != x.agents()) throw std::invalid_argument("evaluate_F: agent count mismatch");
  double F = 0.0;
  for (int i = 0; i < x.agents(); ++i) F += problem[i].objective->value(x.block(i));
  return F;
}

std::vector<BregmanGeometry> geometries(const Problem& problem) {
  std::vector<BregmanGeometry> g;
  g.reserve(problem.size());
  for (const auto& a : problem) g.push_back(a.geometry);
  return g;
}

int problem_dim(const Problem& problem) {
  if (problem.empty()) throw std::invalid_argument("problem has no agents");
  int d = problem.front().set.dim();
  for (const auto& a : problem) {
    if (a.set.dim() != d || a.objective->dim() != d) throw std::invalid_argument("problem: inconsistent dimensions");
  }
  return d;
}

namespace {

struct L1Quad {
  const Matrix& A;
  const Vector& b;
  double rho;
  const Vector& v;
  const Vector& lo;
  const Vector& hi;

  double primal(const Vector& x) const { return (A * x - b).cwiseAbs().sum() + 0.5 * rho * (x - v).squaredNorm(); }
  Vector x_of(const Vector& z) const {
    return (v - A.transpose() * z / rho).cwiseMax(lo).cwiseMin(hi);
  }
  double dual(const Vector& z, const Vector& x) const {
    return z.dot(A * x - b) + 0.5 * rho * (x - v).squaredNorm();
  }
};

// Solves the optimality system on a guessed active set and checks that the
// result satisfies every sign and multiplier condition.
bool polish(const L1Quad& p, const Vector& x_guess, double tol_id, Vector& x_out, Vector& z_out) {
  const Eigen::Index R = p.A.rows();
  const Eigen::Index d = p.A.cols();
  Vector r = p.A * x_guess - p.b;
  std::vector<int> status(d);
  std::vector<int> freeidx, kink;
  Vector s = Vector::Zero(R);
  for (Eigen::Index j = 0; j < d; ++j) {
    double w = std::max(1.0, p.hi(j) - p.lo(j));
    if (x_guess(j) <= p.lo(j) + tol_id * w) {
      status[j] = -1;
    } else if (x_guess(j) >= p.hi(j) - tol_id * w) {
      status[j] = 1;
    } else {
      status[j] = 0;
      freeidx.push_back(static_cast<int>(j));
    }
  }
  for (Eigen::Index q = 0; q < R; ++q) {
    double scale = 1.0 + std::abs(p.b(q)) + p.A.row(q).cwiseAbs().sum();
    if (std::abs(r(q)) <= tol_id * scale) {
      kink.push_back(static_cast<int>(q));
    } else {
      s(q) = r(q) > 0.0 ? 1.0 : -1.0;
    }
  }
  const int nF = static_cast<int>(freeidx.size());
  const int nK = static_cast<int>(kink.size());
  Vector x(d);
  for (Eigen::Index j = 0; j < d; ++j) x(j) = status[j] < 0 ? p.lo(j) : (status[j] > 0 ? p.hi(j) : 0.0);
  Vector z = s;

  if (nF + nK > 0) {
    Matrix S = Matrix::Zero(nF + nK, nF + nK);
    Vector rhs = Vector::Zero(nF + nK);
    Vector Ats = p.A.transpose() * s;
    for (int a = 0; a < nF; ++a) {
      int j = freeidx[a];
      S(a, a) = p.rho;
      for (int q = 0; q < nK; ++q) S(a, nF + q) = p.A(kink[q], j);
      rhs(a) = p.rho * p.v(j) - Ats(j);
    }
    for (int q = 0; q < nK; ++q) {
      int row = kink[q];
      double fixed = 0.0;
      for (Eigen::Index j = 0; j < d; ++j)
        if (status[j] != 0) fixed += p.A(row, j) * x(j);
      for (int a = 0; a < nF; ++a) S(nF + q, a) = p.A(row, freeidx[a]);
      rhs(nF + q) = p.b(row) - fixed;
    }
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(S);
    Vector sol = cod.solve(rhs);
    if (!sol.allFinite()) return false;
    if ((S * sol - rhs).norm() > 1e-10 * (1.0 + rhs.norm())) return false;
    for (int a = 0; a < nF; ++a) x(freeidx[a]) = sol(a);
    for (int q = 0; q < nK; ++q) z(kink[q]) = sol(nF + q);
  }

  const double tol = 1e-10;
  for (Eigen::Index j = 0; j < d; ++j) {
    double w = std::max(1.0, p.hi(j) - p.lo(j));
    if (x(j) < p.lo(j) - tol * w || x(j) > p.hi(j) + tol * w) return false;
  }
  x = x.cwiseMax(p.lo).cwiseMin(p.hi);
  Vector rr = p.A * x - p.b;
  for (Eigen::Index q = 0; q < R; ++q) {
    double scale = 1.0 + std::abs(p.b(q)) + p.A.row(q).cwiseAbs().sum();
    if (s(q) != 0.0 && s(q) * rr(q) < -tol * scale) return false;
    if (s(q) == 0.0 && std::abs(z(q)) > 1.0 + tol) return false;
  }
  Vector g = p.A.transpose() * z + p.rho * (x - p.v);
  double gscale = 1.0 + p.rho * p.v.cwiseAbs().maxCoeff() + p.A.cwiseAbs().sum();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (status[j] == 0 && std::abs(g(j)) > tol * gscale) return false;
    if (status[j] < 0 && g(j) < -tol * gscale) return false;
    if (status[j] > 0 && g(j) > tol * gscale) return false;
  }
  x_out = x;
  z_out = z.cwiseMax(-1.0).cwiseMin(1.0);
  return true;
}

}  // namespace

L1QuadraticResult solve_l1_quadratic_box(const Matrix& A, const Vector& b, double rho, const Vector& v,
                                         const Vector& lo, const Vector& hi) {
  if (!(rho > 0.0)) throw std::invalid_argument("solve_l1_quadratic_box: rho must be positive");
  if (A.rows() != b.size() || A.cols() != v.size() || lo.size() != v.size() || hi.size() != v.size()) {
    throw std::invalid_argument("solve_l1_quadratic_box: dimension mismatch");
  }
  L1Quad p{A, b, rho, v, lo, hi};
  L1QuadraticResult res;
  const Eigen::Index R = A.rows();
  if (R == 0) {
    res.x = v.cwiseMax(lo).cwiseMin(hi);
    res.value = p.primal(res.x);
    res.certified = true;
    return res;
  }

  const double lip = std::max(A.squaredNorm() / rho, 1e-300);
  const double step = 1.0 / lip;
  auto clip = [](const Vector& z) { return Vector(z.cwiseMax(-1.0).cwiseMin(1.0)); };

  Vector x0 = v.cwiseMax(lo).cwiseMin(hi);
  Vector z = (A * x0 - b).unaryExpr([](double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); });
  Vector zprev = z;
  Vector yk = z;
  double tk = 1.0;
  double dprev = -std::numeric_limits<double>::infinity();
  static constexpr double id_tols[] = {1e-3, 1e-5, 1e-7, 1e-9, 1e-11};

  Vector best_x = x0;
  double best_gap = std::numeric_limits<double>::infinity();
  constexpr int max_iter = 200000;
  for (int it = 0; it < max_iter; ++it) {
    Vector xy = p.x_of(yk);
    Vector znew = clip(yk + step * (A * xy - b));
    Vector xz = p.x_of(znew);
    double dz = p.dual(znew, xz);
    double pz = p.primal(xz);
    double gap = pz - dz;
    if (gap < best_gap) {
      best_gap = gap;
      best_x = xz;
    }
    if (it % 10 == 0) {
      for (double t : id_tols) {
        Vector xp, zp;
        if (polish(p, xz, t, xp, zp)) {
          Vector xzp = p.x_of(zp);
          double g2 = p.primal(xp) - p.dual(zp, xzp);
          res.x = xp;
          res.value = p.primal(xp);
          res.gap = std::max(0.0, g2);
          res.certified = true;
          return res;
        }
      }
    }
    if (gap <= 1e-14 * (1.0 + std::abs(pz))) break;
    if (dz < dprev) {
      tk = 1.0;
      yk = znew;
    } else {
      double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
      yk = znew + ((tk - 1.0) / tn) * (znew - zprev);
      tk = tn;
    }
    zprev = znew;
    dprev = dz;
  }
  res.x = best_x;
  res.value = p.primal(best_x);
  res.gap = std::max(0.0, best_gap);
  res.certified = res.gap <= 1e-12 * (1.0 + std::abs(res.value));
  return res;
}

}  // namespace dcs
