#include "dcs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dcs {

ProblemConstants problem_constants(const Problem& problem) {
  ProblemConstants c;
  c.m = static_cast<int>(problem.size());
  c.d = problem_dim(problem);
  c.mu = std::numeric_limits<double>::infinity();
  for (const auto& a : problem) {
    c.M = std::max(c.M, a.objective->M());
    c.mu = std::min(c.mu, a.objective->mu());
    c.sigma = std::max(c.sigma, a.objective->sigma());
    c.C = std::max(c.C, a.geometry.growth_C());
    c.D_sum += a.set.diameter_sq_bound(a.geometry);
  }
  return c;
}

Stacked default_x0(const Problem& problem) {
  const int m = static_cast<int>(problem.size());
  Stacked x(m, problem_dim(problem));
  for (int i = 0; i < m; ++i) x.block(i) = problem[i].set.bregman_center();
  return x;
}

Stacked ergodic_average(const std::vector<Stacked>& snapshots, const std::vector<double>& weights) {
  if (snapshots.empty()) throw std::invalid_argument("ergodic_average: no snapshots");
  if (snapshots.size() != weights.size()) {
    throw std::invalid_argument("ergodic_average: " + std::to_string(weights.size()) + " weights for " +
                                std::to_string(snapshots.size()) + " snapshots");
  }
  Stacked acc(snapshots.front().agents(), snapshots.front().dim());
  double total = 0.0;
  for (std::size_t k = 0; k < snapshots.size(); ++k) {
    require_same_shape(acc, snapshots[k], "ergodic_average");
    acc.flat() += weights[k] * snapshots[k].flat();
    total += weights[k];
  }
  if (!(total > 0.0)) throw std::invalid_argument("ergodic_average: weights must have a positive sum");
  acc.flat() /= total;
  return acc;
}

CsResult cs_procedure(const AgentProblem& agent, std::int64_t T, double eta, const Vector& w, const Vector& x,
                      const InnerSchedule& inner, int k, CsMode mode, std::uint64_t seed, int agent_index,
                      std::int64_t* evals) {
  if (T < 1) throw std::invalid_argument("cs_procedure: T must be at least 1");
  if (!(eta > 0.0)) throw std::invalid_argument("cs_procedure: eta must be positive");
  if (!agent.set.contains(x, 1e-9)) throw std::invalid_argument("cs_procedure: anchor x is infeasible");
  const AgentObjective& f = *agent.objective;
  const bool euclidean_box = agent.geometry.kind == GeometryKind::euclidean && agent.set.kind() == SetKind::box;
  Vector u = x;
  Vector h, g(x.size());
  Vector acc = Vector::Zero(x.size());
  double lam_sum = 0.0;
  for (std::int64_t t = 1; t <= T; ++t) {
    if (mode == CsMode::exact) {
      h = f.subgradient(u);
    } else {
      auto rng = RandomStream::derive(seed, static_cast<std::uint64_t>(agent_index), static_cast<std::uint64_t>(k),
                                      static_cast<std::uint64_t>(t));
      h = f.stochastic_subgradient(u, rng);
    }
    g.noalias() = w + h;
    const double eta_beta = eta * inner.beta(k, t);
    if (euclidean_box) {
      const double total = eta + eta_beta;
      u = ((eta * x + eta_beta * u - g) / total).cwiseMax(agent.set.lo()).cwiseMin(agent.set.hi());
    } else {
      u = prox_step(agent.geometry, agent.set, g, x, u, eta, eta_beta);
    }
    const double lam = inner.lambda(t);
    acc += lam * u;
    lam_sum += lam;
  }
  if (evals) *evals += T;
  return {u, acc / lam_sum};
}

namespace {

enum class Algo { dpd, dcs, sdcs };

const char* algo_name(Algo a) {
  switch (a) {
    case Algo::dpd: return "dpd";
    case Algo::dcs: return "dcs";
    case Algo::sdcs: return "sdcs";
  }
  return "?";
}

void check_mode(Algo a, ScheduleMode mode) {
  bool ok = false;
  switch (a) {
    case Algo::dpd: ok = mode == ScheduleMode::dpd_convex; break;
    case Algo::dcs: ok = mode == ScheduleMode::dcs_convex || mode == ScheduleMode::dcs_strongly_convex; break;
    case Algo::sdcs: ok = mode == ScheduleMode::sdcs_convex || mode == ScheduleMode::sdcs_strongly_convex; break;
  }
  if (!ok) {
    throw std::invalid_argument(std::string("run_") + algo_name(a) + ": schedule mode " + mode_name(mode) +
                                " does not belong to this algorithm");
  }
}

RunTrace run_common(Algo algo, const Problem& problem, const Graph& graph, const OuterSchedule& outer,
                    const InnerSchedule* inner, std::uint64_t seed, const InitialPoint& init,
                    const RunOptions& opts) {
  const std::string who = std::string("run_") + algo_name(algo);
  const int m = static_cast<int>(problem.size());
  if (m != graph.agents()) {
    throw std::invalid_argument(who + ": problem has " + std::to_string(m) + " agents but the graph has " +
                                std::to_string(graph.agents()));
  }
  if (m < 2) throw std::invalid_argument(who + ": a single agent has a zero Laplacian; schedules are undefined");
  if (!is_connected(graph)) throw std::invalid_argument(who + ": communication graph is disconnected");
  check_mode(algo, outer.mode);
  const ProblemConstants pc = problem_constants(problem);
  const int d = pc.d;
  const LaplacianOperator L(graph, d);
  const SpectralConstants sc = spectral_constants(L);

  if (algo == Algo::dpd) {
    for (int i = 0; i < m; ++i) {
      if (!problem[i].objective->supports_exact_prox()) {
        throw std::invalid_argument(who + ": agent " + std::to_string(i + 1) +
                                    " has no exact composite prox; use the sliding solver");
      }
      if (problem[i].geometry.kind != GeometryKind::euclidean) {
        throw std::invalid_argument(who + ": exact composite prox requires the euclidean geometry");
      }
    }
  }

  double mu_v = 0.0;
  double C_v = pc.C;
  ValidationReport report;
  if (algo == Algo::dpd) {
    report = validate_outer(outer, sc.op_norm, 0.0, C_v);
  } else {
    if (!inner) throw std::invalid_argument(who + ": missing inner schedule");
    if (inner->eta.size() != static_cast<std::size_t>(outer.N)) {
      throw std::invalid_argument(who + ": inner schedule length does not match N");
    }
    if (is_strongly_convex(outer.mode)) {
      if (!std::isfinite(pc.C)) {
        throw std::invalid_argument(who + ": strongly convex schedules need a finite growth constant; "
                                          "entropy geometry is limited to convex schedules");
      }
      if (inner->mu > pc.mu * (1.0 + 1e-12)) {
        throw std::invalid_argument(who + ": schedule assumes mu=" + std::to_string(inner->mu) +
                                    " but the problem only guarantees mu=" + std::to_string(pc.mu));
      }
      if (inner->C < pc.C) throw std::invalid_argument(who + ": schedule growth constant below the geometry's");
      mu_v = inner->mu;
      C_v = inner->C;
    }
    report = validate_schedules({outer, *inner}, sc.op_norm, mu_v, C_v);
  }
  if (!report.all_passed()) {
    std::string names;
    for (const auto& n : report.failed()) names += (names.empty() ? "" : ", ") + n;
    throw std::invalid_argument(who + ": schedule fails validation (" + names + ")");
  }

  Stacked x0 = init.x0 ? *init.x0 : default_x0(problem);
  Stacked y0 = init.y0 ? *init.y0 : Stacked(m, d);
  if (x0.agents() != m || x0.dim() != d || y0.agents() != m || y0.dim() != d) {
    throw std::invalid_argument(who + ": initial point has the wrong shape");
  }
  for (int i = 0; i < m; ++i) {
    if (!problem[i].set.contains(x0.block(i), 1e-12)) {
      throw std::invalid_argument(who + ": initial x of agent " + std::to_string(i + 1) + " is infeasible");
    }
  }

  const int threads = opts.threads > 0 ? opts.threads : configured_threads();
  const int stride = std::max(1, opts.snapshot_stride);

  RunTrace tr;
  tr.algorithm = algo_name(algo);
  tr.mode = outer.mode;
  tr.seed = seed;
  tr.ledger = RoundLedger(m);

  Stacked x_prev2 = x0, x_prev = x0, x_hat_prev = x0, y = y0;
  Stacked x_cur(m, d), x_hat_cur(m, d), xt(m, d), v(m, d), w(m, d);
  Stacked sum_x(m, d), sum_y(m, d);
  double sum_theta = 0.0;

  for (int k = 1; k <= outer.N; ++k) {
    const double alpha = outer.alpha_at(k);
    for (int i = 0; i < m; ++i) {
      xt.block(i) = alpha * (x_hat_prev.block(i) - x_prev2.block(i)) + x_prev.block(i);
    }

    auto boxes = broadcast_round(tr.ledger, graph, xt);
    for_each_agent(m, threads, [&](int i) { v.block(i) = neighbor_weighted_sum(i, boxes[i], L.row(i)); });
    close_round(tr.ledger, boxes);

    const double tau = outer.tau_at(k);
    for (int i = 0; i < m; ++i) y.block(i) += v.block(i) / tau;

    boxes = broadcast_round(tr.ledger, graph, y);
    for_each_agent(m, threads, [&](int i) { w.block(i) = neighbor_weighted_sum(i, boxes[i], L.row(i)); });
    close_round(tr.ledger, boxes);

    const double eta = outer.eta_at(k);
    if (algo == Algo::dpd) {
      for_each_agent(m, threads, [&](int i) {
        x_cur.block(i) = composite_prox(*problem[i].objective, problem[i].set, w.block(i), x_prev.block(i), eta);
        ++tr.ledger.prox_solves[i];
      });
      x_hat_cur = x_cur;
    } else {
      const CsMode mode = algo == Algo::sdcs ? CsMode::stochastic : CsMode::exact;
      const std::int64_t T = outer.T_at(k);
      for_each_agent(m, threads, [&](int i) {
        std::int64_t* counter = algo == Algo::sdcs ? &tr.ledger.stoch_evals[i] : &tr.ledger.subgrad_evals[i];
        auto res = cs_procedure(problem[i], T, eta, w.block(i), x_prev.block(i), *inner, k, mode, seed, i, counter);
        x_cur.block(i) = res.x;
        x_hat_cur.block(i) = res.x_hat;
      });
    }

    const double theta = outer.theta_at(k);
    tr.weights.push_back(theta);
    const Stacked& out = algo == Algo::dpd ? x_cur : x_hat_cur;
    sum_x.flat() += theta * out.flat();
    sum_y.flat() += theta * y.flat();
    sum_theta += theta;

    Stacked erg(m, d, sum_x.flat() / sum_theta);
    TraceRow row;
    row.k = k;
    row.F_ergodic = evaluate_F(problem, erg);
    row.feas_ergodic = L.apply(erg).norm();
    row.comm_rounds = tr.ledger.comm_rounds;
    for (int i = 0; i < m; ++i) {
      row.cumulative_evals += tr.ledger.subgrad_evals[i] + tr.ledger.stoch_evals[i] + tr.ledger.prox_solves[i];
    }
    tr.rows.push_back(row);

    if (k % stride == 0 || k == outer.N) {
      tr.snapshot_k.push_back(k);
      tr.x_snapshots.push_back(x_cur);
      tr.x_hat_snapshots.push_back(x_hat_cur);
      tr.y_snapshots.push_back(y);
    }
    if (opts.observer) {
      IterationView view{k, &xt, &w, &x_prev, &x_cur, &x_hat_cur, &y};
      opts.observer(view);
    }

    x_prev2 = x_prev;
    x_prev = x_cur;
    x_hat_prev = x_hat_cur;
  }

  tr.x_ergodic = Stacked(m, d, sum_x.flat() / sum_theta);
  tr.y_ergodic = Stacked(m, d, sum_y.flat() / sum_theta);
  tr.x_last = x_prev;
  tr.x_hat_last = x_hat_prev;
  tr.y_last = y;
  return tr;
}

}  // namespace

RunTrace run_dpd(const Problem& problem, const Graph& graph, const OuterSchedule& schedule, const InitialPoint& init,
                 const RunOptions& opts) {
  return run_common(Algo::dpd, problem, graph, schedule, nullptr, 0, init, opts);
}

RunTrace run_dcs(const Problem& problem, const Graph& graph, const Schedules& schedules, const InitialPoint& init,
                 const RunOptions& opts) {
  return run_common(Algo::dcs, problem, graph, schedules.outer, &schedules.inner, 0, init, opts);
}

RunTrace run_sdcs(const Problem& problem, const Graph& graph, const Schedules& schedules, std::uint64_t seed,
                  const InitialPoint& init, const RunOptions& opts) {
  return run_common(Algo::sdcs, problem, graph, schedules.outer, &schedules.inner, seed, init, opts);
}

}  // namespace dcs
