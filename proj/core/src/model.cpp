#include "dcs/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dcs {

namespace {

void require_dim(const Vector& v, int d, const char* what) {
  if (v.size() != d) {
    throw std::invalid_argument(std::string(what) + ": expected length " + std::to_string(d) + ", got " +
                                std::to_string(v.size()));
  }
}

Vector project_simplex(const Vector& v) {
  const Eigen::Index n = v.size();
  std::vector<double> s(v.data(), v.data() + n);
  std::sort(s.begin(), s.end(), std::greater<>());
  double cum = 0.0;
  double theta = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cum += s[j];
    double t = (cum - 1.0) / static_cast<double>(j + 1);
    if (s[j] - t > 0.0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

}  // namespace

BregmanGeometry parse_geometry(const std::string& name) {
  if (name == "euclidean") return BregmanGeometry::euclidean();
  if (name == "entropy") return BregmanGeometry::entropy();
  throw std::invalid_argument("unknown geometry '" + name + "'");
}

ConstraintSet ConstraintSet::box(Vector lo, Vector hi) {
  if (lo.size() != hi.size() || lo.size() == 0) throw std::invalid_argument("box: bounds must be nonempty and match");
  if ((lo.array() > hi.array()).any()) throw std::invalid_argument("box: lo exceeds hi");
  ConstraintSet s;
  s.kind_ = SetKind::box;
  s.dim_ = static_cast<int>(lo.size());
  s.lo_ = std::move(lo);
  s.hi_ = std::move(hi);
  s.center_ = 0.5 * (s.lo_ + s.hi_);
  return s;
}

ConstraintSet ConstraintSet::box(int dim, double lo, double hi) {
  return box(Vector::Constant(dim, lo), Vector::Constant(dim, hi));
}

ConstraintSet ConstraintSet::ball(Vector center, double radius) {
  if (center.size() == 0) throw std::invalid_argument("ball: empty center");
  if (!(radius > 0.0)) throw std::invalid_argument("ball: radius must be positive");
  ConstraintSet s;
  s.kind_ = SetKind::ball;
  s.dim_ = static_cast<int>(center.size());
  s.center_ = std::move(center);
  s.radius_ = radius;
  return s;
}

ConstraintSet ConstraintSet::simplex(int dim) {
  if (dim < 1) throw std::invalid_argument("simplex: dimension must be positive");
  ConstraintSet s;
  s.kind_ = SetKind::simplex;
  s.dim_ = dim;
  s.center_ = Vector::Constant(dim, 1.0 / dim);
  return s;
}

std::string ConstraintSet::kind_name() const {
  switch (kind_) {
    case SetKind::box: return "box";
    case SetKind::ball: return "ball";
    case SetKind::simplex: return "simplex";
  }
  return "?";
}

bool ConstraintSet::contains(const Vector& x, double tol) const {
  if (x.size() != dim_) return false;
  if (!x.allFinite()) return false;
  switch (kind_) {
    case SetKind::box:
      return ((x - lo_).array() >= -tol).all() && ((hi_ - x).array() >= -tol).all();
    case SetKind::ball:
      return (x - center_).norm() <= radius_ + tol;
    case SetKind::simplex:
      return (x.array() >= -tol).all() && std::abs(x.sum() - 1.0) <= tol * std::max(1, dim_);
  }
  return false;
}

Vector ConstraintSet::project(const Vector& x) const {
  require_dim(x, dim_, "project");
  switch (kind_) {
    case SetKind::box:
      return x.cwiseMax(lo_).cwiseMin(hi_);
    case SetKind::ball: {
      Vector r = x - center_;
      double n = r.norm();
      if (n <= radius_) return x;
      return center_ + (radius_ / n) * r;
    }
    case SetKind::simplex:
      return project_simplex(x);
  }
  return x;
}

Vector ConstraintSet::linear_minimizer(const Vector& g) const {
  require_dim(g, dim_, "linear_minimizer");
  switch (kind_) {
    case SetKind::box: {
      Vector x(dim_);
      for (int j = 0; j < dim_; ++j) x(j) = g(j) > 0.0 ? lo_(j) : hi_(j);
      return x;
    }
    case SetKind::ball: {
      double n = g.norm();
      if (n == 0.0) return center_;
      return center_ - (radius_ / n) * g;
    }
    case SetKind::simplex: {
      Eigen::Index j = 0;
      g.minCoeff(&j);
      Vector x = Vector::Zero(dim_);
      x(j) = 1.0;
      return x;
    }
  }
  return center_;
}

double ConstraintSet::diameter() const {
  switch (kind_) {
    case SetKind::box: return (hi_ - lo_).norm();
    case SetKind::ball: return 2.0 * radius_;
    case SetKind::simplex: return dim_ > 1 ? std::sqrt(2.0) : 0.0;
  }
  return 0.0;
}

double ConstraintSet::max_distance_from(const Vector& c) const {
  require_dim(c, dim_, "max_distance_from");
  switch (kind_) {
    case SetKind::box:
      return (c - lo_).cwiseAbs().cwiseMax((hi_ - c).cwiseAbs()).norm();
    case SetKind::ball:
      return (c - center_).norm() + radius_;
    case SetKind::simplex: {
      double best = 0.0;
      for (int j = 0; j < dim_; ++j) {
        Vector e = Vector::Zero(dim_);
        e(j) = 1.0;
        best = std::max(best, (e - c).norm());
      }
      return best;
    }
  }
  return 0.0;
}

double ConstraintSet::diameter_sq_bound(const BregmanGeometry& geom) const {
  if (geom.kind == GeometryKind::entropy) {
    return dim_ == 1 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  double diam = diameter();
  return 0.5 * diam * diam;
}

Vector ConstraintSet::bregman_center() const { return center_; }

bool ConstraintSet::operator==(const ConstraintSet& o) const {
  if (kind_ != o.kind_ || dim_ != o.dim_) return false;
  switch (kind_) {
    case SetKind::box: return lo_ == o.lo_ && hi_ == o.hi_;
    case SetKind::ball: return center_ == o.center_ && radius_ == o.radius_;
    case SetKind::simplex: return true;
  }
  return false;
}

double bregman_div(const BregmanGeometry& geom, const Vector& x, const Vector& u) {
  if (x.size() != u.size()) throw std::invalid_argument("bregman_div: length mismatch");
  if (geom.kind == GeometryKind::euclidean) return 0.5 * (u - x).squaredNorm();
  double v = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (!(x(j) > 0.0)) {
      throw std::invalid_argument("bregman_div: entropy geometry needs a positive first argument (coordinate " +
                                  std::to_string(j + 1) + " is " + std::to_string(x(j)) + ")");
    }
    if (u(j) < 0.0) throw std::invalid_argument("bregman_div: entropy geometry needs a nonnegative second argument");
    if (u(j) > 0.0) v += u(j) * std::log(u(j) / x(j));
    v += x(j) - u(j);
  }
  return v;
}

Vector prox_step(const BregmanGeometry& geom, const ConstraintSet& set, const Vector& g, const Vector& x_anchor,
                 const Vector& u_anchor, double eta, double eta_beta) {
  const int d = set.dim();
  require_dim(g, d, "prox_step g");
  require_dim(x_anchor, d, "prox_step x_anchor");
  require_dim(u_anchor, d, "prox_step u_anchor");
  if (!(eta > 0.0)) throw std::invalid_argument("prox_step: eta must be positive");
  if (!(eta_beta >= 0.0)) throw std::invalid_argument("prox_step: eta_beta must be nonnegative");
  const double total = eta + eta_beta;

  if (geom.kind == GeometryKind::euclidean) {
    Vector c = (eta * x_anchor + eta_beta * u_anchor - g) / total;
    return set.project(c);
  }
  if (set.kind() != SetKind::simplex) {
    throw std::invalid_argument("prox_step: entropy geometry is only supported on the simplex, not on a " +
                                set.kind_name());
  }
  Vector s(d);
  for (int j = 0; j < d; ++j) {
    if (!(x_anchor(j) > 0.0) || (eta_beta > 0.0 && !(u_anchor(j) > 0.0))) {
      throw std::invalid_argument("prox_step: entropy anchors must lie in the simplex interior");
    }
    double lu = eta_beta > 0.0 ? eta_beta * std::log(u_anchor(j)) : 0.0;
    s(j) = (eta * std::log(x_anchor(j)) + lu - g(j)) / total;
  }
  double smax = s.maxCoeff();
  Vector e = (s.array() - smax).exp().matrix();
  e /= e.sum();
  // Keep the iterate strictly interior so later divergences stay finite.
  constexpr double floor = 1e-300;
  e = e.cwiseMax(floor);
  e /= e.sum();
  return e;
}

double stacked_V(const std::vector<BregmanGeometry>& geoms, const Stacked& x, const Stacked& u) {
  require_same_shape(x, u, "stacked_V");
  if (static_cast<int>(geoms.size()) != x.agents()) throw std::invalid_argument("stacked_V: geometry count mismatch");
  double v = 0.0;
  for (int i = 0; i < x.agents(); ++i) v += bregman_div(geoms[i], x.block(i), u.block(i));
  return v;
}

}  // namespace dcs
