#pragma once

#include "dcs/objectives.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace dcs {

/// Generator inputs for the shipped LAD families:
///   lad_convex           |A_i x - b_i|_1
///   lad_strongly_convex  |A_i x - b_i|_1 + mu/2 |x - c_i|^2
///   lad_stochastic       either of the above with truncated Gaussian subgradient noise
///   lad_finite_sum       either of the above, one row sampled per oracle call
struct InstanceSpec {
  std::string family = "lad_convex";
  int m = 5;
  int d = 4;
  int rows = 3;
  std::uint64_t data_seed = 1;
  std::optional<double> mu;     // family default: 0.5 for lad_strongly_convex, else 0
  std::optional<double> sigma;  // lad_stochastic default: the problem's M
  double box_lo = -2.0;
  double box_hi = 2.0;
  double noise_scale = 0.5;  // std of the residual noise in b
};

std::vector<std::string> instance_families();

/// Deterministic in the spec. A_i has standard normal entries, b_i = A_i x_ref
/// + noise with a shared x_ref ~ U[-1,1]^d, and c_i ~ U[-1,1]^d.
Problem generate_instance(const InstanceSpec& spec);

}  // namespace dcs
