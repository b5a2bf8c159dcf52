#pragma once

#include "dcs/stacked.hpp"

#include <limits>
#include <string>
#include <vector>

namespace dcs {

enum class GeometryKind { euclidean, entropy };

/// Distance-generating function of one agent. Euclidean uses w(x) = |x|^2/2,
/// entropy uses w(x) = sum x log x restricted to the simplex.
struct BregmanGeometry {
  GeometryKind kind = GeometryKind::euclidean;

  static BregmanGeometry euclidean() { return {GeometryKind::euclidean}; }
  static BregmanGeometry entropy() { return {GeometryKind::entropy}; }

  /// Quadratic growth constant: V(x,u) <= C/2 |x-u|^2. Infinite for entropy.
  double growth_C() const {
    return kind == GeometryKind::euclidean ? 1.0 : std::numeric_limits<double>::infinity();
  }
  std::string name() const { return kind == GeometryKind::euclidean ? "euclidean" : "entropy"; }
};

BregmanGeometry parse_geometry(const std::string& name);

enum class SetKind { box, ball, simplex };

class ConstraintSet {
 public:
  static ConstraintSet box(Vector lo, Vector hi);
  static ConstraintSet box(int dim, double lo, double hi);
  static ConstraintSet ball(Vector center, double radius);
  static ConstraintSet simplex(int dim);

  SetKind kind() const { return kind_; }
  std::string kind_name() const;
  int dim() const { return dim_; }
  const Vector& lo() const { return lo_; }
  const Vector& hi() const { return hi_; }
  const Vector& center() const { return center_; }
  double radius() const { return radius_; }

  bool contains(const Vector& x, double tol = 1e-12) const;
  /// Euclidean projection.
  Vector project(const Vector& x) const;
  /// Minimizer of <g, x> over the set.
  Vector linear_minimizer(const Vector& g) const;

  /// Upper bound on V(x,u) over all pairs in the set under the geometry.
  double diameter_sq_bound(const BregmanGeometry& geom) const;
  /// Euclidean diameter.
  double diameter() const;
  /// max over x in the set of |x - c|.
  double max_distance_from(const Vector& c) const;
  /// Minimizer of the distance-generating function over the set.
  Vector bregman_center() const;

  bool operator==(const ConstraintSet& o) const;

 private:
  SetKind kind_ = SetKind::box;
  int dim_ = 0;
  Vector lo_, hi_, center_;
  double radius_ = 0.0;
};

/// V(x,u) = w(u) - w(x) - <grad w(x), u - x>.
double bregman_div(const BregmanGeometry& geom, const Vector& x, const Vector& u);

/// argmin over the set of <g,u> + eta V(x_anchor,u) + eta_beta V(u_anchor,u).
Vector prox_step(const BregmanGeometry& geom, const ConstraintSet& set, const Vector& g, const Vector& x_anchor,
                 const Vector& u_anchor, double eta, double eta_beta);

double stacked_V(const std::vector<BregmanGeometry>& geoms, const Stacked& x, const Stacked& u);

}  // namespace dcs
