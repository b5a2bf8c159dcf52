#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace dcs {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A point of the product space R^{m d}: one length-d block per agent,
/// stored contiguously so that norms and inner products act on the whole
/// stacked vector.
class Stacked {
 public:
  Stacked() = default;
  Stacked(int agents, int dim) : agents_(agents), dim_(dim), data_(Vector::Zero(static_cast<Eigen::Index>(agents) * dim)) {}
  Stacked(int agents, int dim, Vector data) : agents_(agents), dim_(dim), data_(std::move(data)) {
    if (data_.size() != static_cast<Eigen::Index>(agents) * dim) {
      throw std::invalid_argument("Stacked: expected " + std::to_string(agents * dim) + " entries, got " +
                                  std::to_string(data_.size()));
    }
  }

  int agents() const { return agents_; }
  int dim() const { return dim_; }

  Eigen::VectorBlock<Vector> block(int i) { return data_.segment(static_cast<Eigen::Index>(i) * dim_, dim_); }
  Eigen::VectorBlock<const Vector> block(int i) const {
    return data_.segment(static_cast<Eigen::Index>(i) * dim_, dim_);
  }

  static Stacked replicate(int agents, const Vector& block) {
    Stacked out(agents, static_cast<int>(block.size()));
    for (int i = 0; i < agents; ++i) out.block(i) = block;
    return out;
  }

  const Vector& flat() const { return data_; }
  Vector& flat() { return data_; }

  bool same_shape(const Stacked& other) const { return agents_ == other.agents_ && dim_ == other.dim_; }

  double norm() const { return data_.norm(); }

 private:
  int agents_ = 0;
  int dim_ = 0;
  Vector data_;
};

inline void require_same_shape(const Stacked& a, const Stacked& b, const char* where) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument(std::string(where) + ": shape mismatch (" + std::to_string(a.agents()) + "x" +
                                std::to_string(a.dim()) + " vs " + std::to_string(b.agents()) + "x" +
                                std::to_string(b.dim()) + ")");
  }
}

}  // namespace dcs
