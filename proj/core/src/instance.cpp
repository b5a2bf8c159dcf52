#include "dcs/instance.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace dcs {

std::vector<std::string> instance_families() {
  return {"lad_convex", "lad_strongly_convex", "lad_stochastic", "lad_finite_sum"};
}

Problem generate_instance(const InstanceSpec& spec) {
  const auto fams = instance_families();
  if (std::find(fams.begin(), fams.end(), spec.family) == fams.end()) {
    throw std::invalid_argument("generate_instance: unknown family '" + spec.family + "'");
  }
  if (spec.m < 2) throw std::invalid_argument("generate_instance: need at least 2 agents");
  if (spec.d < 1 || spec.rows < 1) throw std::invalid_argument("generate_instance: d and rows must be positive");
  if (!(spec.box_lo < spec.box_hi)) throw std::invalid_argument("generate_instance: empty box");

  double mu = spec.mu.value_or(spec.family == "lad_strongly_convex" ? 0.5 : 0.0);
  if (spec.family == "lad_convex" && mu != 0.0) {
    throw std::invalid_argument("generate_instance: lad_convex has mu = 0; use lad_strongly_convex");
  }
  if (spec.family == "lad_strongly_convex" && !(mu > 0.0)) {
    throw std::invalid_argument("generate_instance: lad_strongly_convex needs mu > 0");
  }
  if (mu < 0.0) throw std::invalid_argument("generate_instance: mu must be nonnegative");

  std::mt19937_64 rng(spec.data_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Vector x_ref(spec.d);
  for (int j = 0; j < spec.d; ++j) x_ref(j) = unit(rng);

  const ConstraintSet box = ConstraintSet::box(spec.d, spec.box_lo, spec.box_hi);
  std::vector<LadData> data(spec.m);
  for (int i = 0; i < spec.m; ++i) {
    LadData& L = data[i];
    L.A.resize(spec.rows, spec.d);
    for (int r = 0; r < spec.rows; ++r)
      for (int j = 0; j < spec.d; ++j) L.A(r, j) = normal(rng);
    L.b = L.A * x_ref;
    for (int r = 0; r < spec.rows; ++r) L.b(r) += spec.noise_scale * normal(rng);
    L.c.resize(spec.d);
    for (int j = 0; j < spec.d; ++j) L.c(j) = unit(rng);
    L.mu = mu;
  }

  NoiseKind noise = NoiseKind::none;
  double sigma = 0.0;
  if (spec.family == "lad_stochastic") {
    noise = NoiseKind::bounded_gaussian;
    if (spec.sigma) {
      sigma = *spec.sigma;
    } else {
      for (const auto& L : data) sigma = std::max(sigma, LadObjective(L, box).M());
    }
    if (sigma < 0.0) throw std::invalid_argument("generate_instance: sigma must be nonnegative");
  } else if (spec.family == "lad_finite_sum") {
    noise = NoiseKind::bernoulli_component;
    for (const auto& L : data) sigma = std::max(sigma, LadObjective(L, box, noise, 0.0).sigma());
    if (spec.sigma) sigma = std::max(sigma, *spec.sigma);
  } else if (spec.sigma && *spec.sigma != 0.0) {
    throw std::invalid_argument("generate_instance: family " + spec.family + " has no noise; sigma must be 0");
  }

  Problem p;
  p.reserve(spec.m);
  for (int i = 0; i < spec.m; ++i) {
    auto obj = std::make_shared<LadObjective>(data[i], box, noise, noise == NoiseKind::none ? 0.0 : sigma);
    p.push_back({obj, box, BregmanGeometry::euclidean()});
  }
  return p;
}

}  // namespace dcs
