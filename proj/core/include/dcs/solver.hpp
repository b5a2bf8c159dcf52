#pragma once

#include "dcs/netsim.hpp"
#include "dcs/objectives.hpp"
#include "dcs/schedule.hpp"
#include "dcs/topology.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dcs {

/// Uniform constants of a problem: M and sigma are maxima over agents, mu is
/// the minimum, C the largest growth constant.
struct ProblemConstants {
  int m = 0;
  int d = 0;
  double M = 0.0;
  double mu = 0.0;
  double sigma = 0.0;
  double C = 1.0;
  double D_sum = 0.0;  // sum of per-agent diameter bounds
};

ProblemConstants problem_constants(const Problem& problem);

struct InitialPoint {
  std::optional<Stacked> x0;  // default: Bregman centers
  std::optional<Stacked> y0;  // default: zero
};

Stacked default_x0(const Problem& problem);

/// Values visible at the end of outer iteration k; used by tests and tools
/// that inspect the subproblems.
struct IterationView {
  int k = 0;
  const Stacked* x_tilde = nullptr;
  const Stacked* w = nullptr;
  const Stacked* x_prev = nullptr;  // x^{k-1}
  const Stacked* x = nullptr;       // x^k
  const Stacked* x_hat = nullptr;   // x-hat^k (equals x^k for the primal-dual method)
  const Stacked* y = nullptr;       // y^k
};

struct RunOptions {
  int snapshot_stride = 1;
  int threads = 0;  // 0: take DCS_THREADS
  std::function<void(const IterationView&)> observer;
};

struct TraceRow {
  int k = 0;
  double F_ergodic = 0.0;
  double feas_ergodic = 0.0;
  std::int64_t comm_rounds = 0;
  std::int64_t cumulative_evals = 0;
};

struct RunTrace {
  std::string algorithm;  // "dpd", "dcs", "sdcs"
  ScheduleMode mode = ScheduleMode::dpd_convex;
  std::uint64_t seed = 0;

  std::vector<int> snapshot_k;
  std::vector<Stacked> x_snapshots;
  std::vector<Stacked> x_hat_snapshots;
  std::vector<Stacked> y_snapshots;

  std::vector<double> weights;  // theta_k, k = 1..N
  Stacked x_ergodic;  // theta-weighted average of x^k (primal-dual) or x-hat^k (sliding)
  Stacked y_ergodic;
  Stacked x_last, x_hat_last, y_last;

  RoundLedger ledger;
  std::vector<TraceRow> rows;
};

RunTrace run_dpd(const Problem& problem, const Graph& graph, const OuterSchedule& schedule,
                 const InitialPoint& init = {}, const RunOptions& opts = {});

RunTrace run_dcs(const Problem& problem, const Graph& graph, const Schedules& schedules,
                 const InitialPoint& init = {}, const RunOptions& opts = {});

RunTrace run_sdcs(const Problem& problem, const Graph& graph, const Schedules& schedules, std::uint64_t seed,
                  const InitialPoint& init = {}, const RunOptions& opts = {});

enum class CsMode { exact, stochastic };

struct CsResult {
  Vector x;
  Vector x_hat;
};

/// Inner sliding loop of one agent: T linearized prox steps on the local
/// subproblem, no communication. Adds T to the matching counter of
/// `evals` when given. Stochastic draws use the stream (seed, agent, k, t).
CsResult cs_procedure(const AgentProblem& agent, std::int64_t T, double eta, const Vector& w, const Vector& x,
                      const InnerSchedule& inner, int k, CsMode mode, std::uint64_t seed = 0, int agent_index = 0,
                      std::int64_t* evals = nullptr);

/// (sum theta_k)^{-1} sum theta_k z^k.
Stacked ergodic_average(const std::vector<Stacked>& snapshots, const std::vector<double>& weights);

}  // namespace dcs
