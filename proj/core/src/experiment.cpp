#include "dcs/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace dcs {

namespace fs = std::filesystem;

ExperimentConfig config_from_json(const json& in) {
  const json& j = in.contains("config") ? in.at("config") : in;
  ExperimentConfig c;
  c.graph = j.value("graph", c.graph);
  if (j.contains("problem")) {
    const json& p = j.at("problem");
    c.problem.family = p.value("family", c.problem.family);
    c.problem.d = p.value("d", c.problem.d);
    c.problem.rows = p.value("rows", c.problem.rows);
    if (p.contains("components")) c.problem.rows = p.at("components").get<int>();
    c.problem.data_seed = p.value("data_seed", c.problem.data_seed);
    if (p.contains("mu") && !p.at("mu").is_null()) c.problem.mu = p.at("mu").get<double>();
    if (p.contains("sigma") && !p.at("sigma").is_null()) c.problem.sigma = p.at("sigma").get<double>();
    if (p.contains("box")) {
      auto box = p.at("box").get<std::vector<double>>();
      if (box.size() != 2) throw std::invalid_argument("config: problem.box must be [lo, hi]");
      c.problem.box_lo = box[0];
      c.problem.box_hi = box[1];
    }
    c.problem.noise_scale = p.value("noise_scale", c.problem.noise_scale);
  }
  c.algorithm = j.value("algorithm", c.algorithm);
  if (c.algorithm != "dpd" && c.algorithm != "dcs" && c.algorithm != "sdcs") {
    throw std::invalid_argument("config: algorithm must be dpd, dcs or sdcs, got '" + c.algorithm + "'");
  }
  if (j.contains("schedule")) {
    const json& s = j.at("schedule");
    if (s.contains("N")) {
      c.N = s.at("N").is_array() ? s.at("N").get<std::vector<int>>() : std::vector<int>{s.at("N").get<int>()};
    }
    if (s.contains("D_tilde") && !s.at("D_tilde").is_null()) c.D_tilde = s.at("D_tilde").get<double>();
    c.y0 = s.value("y0", c.y0);
    c.x0 = s.value("x0", c.x0);
    c.tau_scale = s.value("tau_scale", c.tau_scale);
    c.T_max = s.value("T_max", c.T_max);
    c.convexity = s.value("convexity", c.convexity);
  }
  if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  c.out = j.value("out", c.out);
  c.assert_bounds = j.value("assert_bounds", c.assert_bounds);
  c.snapshot_stride = j.value("snapshot_stride", c.snapshot_stride);
  c.reference_accuracy = j.value("reference_accuracy", c.reference_accuracy);
  if (c.N.empty()) throw std::invalid_argument("config: schedule.N must not be empty");
  for (int n : c.N)
    if (n < 1) throw std::invalid_argument("config: every N must be at least 1");
  if (c.seeds.empty()) throw std::invalid_argument("config: seeds must not be empty");
  if (c.convexity != "auto" && c.convexity != "convex" && c.convexity != "strongly_convex") {
    throw std::invalid_argument("config: schedule.convexity must be auto, convex or strongly_convex");
  }
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json problem = {{"family", c.problem.family},
                  {"d", c.problem.d},
                  {"rows", c.problem.rows},
                  {"data_seed", c.problem.data_seed},
                  {"mu", c.problem.mu ? json(*c.problem.mu) : json(nullptr)},
                  {"sigma", c.problem.sigma ? json(*c.problem.sigma) : json(nullptr)},
                  {"box", {c.problem.box_lo, c.problem.box_hi}},
                  {"noise_scale", c.problem.noise_scale}};
  json schedule = {{"N", c.N},
                   {"D_tilde", c.D_tilde ? json(*c.D_tilde) : json(nullptr)},
                   {"y0", c.y0},
                   {"x0", c.x0},
                   {"tau_scale", c.tau_scale},
                   {"T_max", c.T_max},
                   {"convexity", c.convexity}};
  return {{"graph", c.graph},
          {"problem", problem},
          {"algorithm", c.algorithm},
          {"schedule", schedule},
          {"seeds", c.seeds},
          {"out", c.out},
          {"assert_bounds", c.assert_bounds},
          {"snapshot_stride", c.snapshot_stride},
          {"reference_accuracy", c.reference_accuracy}};
}

ExperimentConfig load_config(const std::string& path) {
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".toml") {
    throw std::invalid_argument("config: TOML is not supported; use JSON");
  }
  return config_from_json(read_json_file(path));
}

Setup prepare(const ExperimentConfig& cfg) {
  Setup s;
  s.graph = build_graph(cfg.graph);
  if (!is_connected(s.graph)) throw std::invalid_argument("graph '" + cfg.graph + "' is disconnected");
  InstanceSpec spec = cfg.problem;
  spec.m = s.graph.agents();
  s.problem = generate_instance(spec);
  s.constants = problem_constants(s.problem);
  s.spectral = spectral_constants(laplacian(s.graph, s.constants.d));
  s.D_tilde = cfg.D_tilde.value_or(s.constants.D_sum);
  if (!(s.D_tilde > 0.0) || !std::isfinite(s.D_tilde)) {
    throw std::invalid_argument("D_tilde must be finite and positive");
  }
  bool strong = cfg.convexity == "strongly_convex" || (cfg.convexity == "auto" && s.constants.mu > 0.0);
  if (cfg.algorithm == "dpd") {
    s.mode = ScheduleMode::dpd_convex;
  } else if (cfg.algorithm == "dcs") {
    s.mode = strong ? ScheduleMode::dcs_strongly_convex : ScheduleMode::dcs_convex;
  } else {
    s.mode = strong ? ScheduleMode::sdcs_strongly_convex : ScheduleMode::sdcs_convex;
  }
  return s;
}

Schedules build_schedules(const ExperimentConfig& cfg, const Setup& setup, int N) {
  const auto& c = setup.constants;
  const double L = setup.spectral.op_norm;
  Schedules s;
  switch (setup.mode) {
    case ScheduleMode::dpd_convex:
      s.outer = dpd_schedule(L, N);
      break;
    case ScheduleMode::dcs_convex:
      s = dcs_convex_schedule(L, c.m, c.M, N, setup.D_tilde, cfg.T_max);
      break;
    case ScheduleMode::dcs_strongly_convex:
      s = dcs_strongly_convex_schedule(c.mu, c.C, L, c.m, c.M, N, setup.D_tilde, cfg.T_max);
      break;
    case ScheduleMode::sdcs_convex:
      s = sdcs_convex_schedule(L, c.m, c.M, c.sigma, N, setup.D_tilde, cfg.T_max);
      break;
    case ScheduleMode::sdcs_strongly_convex:
      s = sdcs_strongly_convex_schedule(c.mu, c.C, L, c.m, c.M, c.sigma, N, setup.D_tilde, cfg.T_max);
      break;
  }
  if (cfg.tau_scale != 1.0) {
    if (!(cfg.tau_scale > 0.0)) throw std::invalid_argument("tau_scale must be positive");
    for (auto& t : s.outer.tau) t *= cfg.tau_scale;
  }
  return s;
}

ValidationReport validate_cell(const ExperimentConfig&, const Setup& setup, const Schedules& s) {
  const double L = setup.spectral.op_norm;
  if (s.outer.mode == ScheduleMode::dpd_convex) return validate_outer(s.outer, L, 0.0, setup.constants.C);
  const bool sc = is_strongly_convex(s.outer.mode);
  return validate_schedules(s, L, sc ? s.inner.mu : 0.0, sc ? s.inner.C : setup.constants.C);
}

InitialPoint initial_point(const ExperimentConfig& cfg, const Setup& setup) {
  const int m = setup.constants.m;
  const int d = setup.constants.d;
  InitialPoint init;
  std::mt19937_64 rng(cfg.problem.data_seed ^ 0x5eedULL);
  if (cfg.x0 == "random") {
    Stacked x(m, d);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < m; ++i) {
      const auto& set = setup.problem[i].set;
      if (set.kind() != SetKind::box) throw std::invalid_argument("x0 random needs box sets");
      for (int j = 0; j < d; ++j) x.block(i)(j) = set.lo()(j) + unit(rng) * (set.hi()(j) - set.lo()(j));
    }
    init.x0 = x;
  } else if (cfg.x0 != "center") {
    throw std::invalid_argument("config: schedule.x0 must be center or random");
  }
  if (cfg.y0.rfind("random:", 0) == 0) {
    double scale = std::stod(cfg.y0.substr(7));
    Stacked y(m, d);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index r = 0; r < y.flat().size(); ++r) y.flat()(r) = scale * normal(rng);
    init.y0 = y;
  } else if (cfg.y0 != "zero") {
    throw std::invalid_argument("config: schedule.y0 must be zero or random:<scale>");
  }
  return init;
}

BoundInputs bound_inputs(const Setup& setup, const InitialPoint& init, const ReferenceSolution& ref, int N) {
  const int m = setup.constants.m;
  const Stacked x0 = init.x0 ? *init.x0 : default_x0(setup.problem);
  BoundInputs in;
  in.L_norm = setup.spectral.op_norm;
  in.m = m;
  in.M = setup.constants.M;
  in.mu = setup.constants.mu;
  in.C = setup.constants.C;
  in.sigma = setup.constants.sigma;
  in.N = N;
  in.D_tilde = setup.D_tilde;
  in.V0 = stacked_V(geometries(setup.problem), x0, ref.replicated(m));
  in.y0_norm = init.y0 ? init.y0->norm() : 0.0;
  in.ystar_dist = conservative_ystar_dist(in.y0_norm, m, in.M, setup.spectral.min_nonzero_singular);
  in.ystar_conservative = true;
  return in;
}

namespace {

std::string cell_name(int N, std::uint64_t seed) {
  return "cell_N" + std::to_string(N) + "_seed" + std::to_string(seed);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const Setup setup = prepare(cfg);
  const ReferenceSolution ref = reference_solve(setup.problem, {cfg.reference_accuracy});
  const InitialPoint init = initial_point(cfg, setup);
  const LaplacianOperator L(setup.graph, setup.constants.d);
  const int m = setup.constants.m;
  const bool stochastic = is_stochastic(setup.mode);

  fs::create_directories(cfg.out);
  ExperimentResult result;
  json per_n = json::array();

  for (int N : cfg.N) {
    Schedules sched = build_schedules(cfg, setup, N);
    ValidationReport report = validate_cell(cfg, setup, sched);

    const BoundInputs in = bound_inputs(setup, init, ref, N);
    const bool bounds_apply = !is_strongly_convex(setup.mode) || N >= 2;
    std::optional<BoundPair> bounds;
    if (bounds_apply) bounds = theorem_bounds(setup.mode, in);

    double sum_primal = 0.0, sum_feas = 0.0;
    int ran = 0;
    for (std::uint64_t seed : cfg.seeds) {
      ExperimentConfig cell = cfg;
      cell.N = {N};
      cell.seeds = {seed};
      const std::string dir = (fs::path(cfg.out) / cell_name(N, seed)).string();
      fs::create_directories(dir);

      json manifest = {{"config", config_to_json(cell)},
                       {"cell", {{"N", N}, {"seed", seed}}},
                       {"instance", problem_to_json(setup.problem)},
                       {"schedule", schedule_to_json(sched.outer)},
                       {"inner_schedule", inner_to_json(sched.inner)},
                       {"spectral", {{"op_norm", setup.spectral.op_norm},
                                     {"min_nonzero_singular", setup.spectral.min_nonzero_singular}}},
                       {"D_tilde", setup.D_tilde}};
      write_json_file(manifest, (fs::path(dir) / "manifest.json").string());

      CellResult cr;
      cr.N = N;
      cr.seed = seed;
      cr.dir = dir;
      cr.validated = report.all_passed();
      json summary = {{"algorithm", cfg.algorithm}, {"mode", mode_name(setup.mode)}, {"N", N},
                      {"seed", seed},               {"validation", report_to_json(report)}};

      if (!cr.validated) {
        summary["status"] = "validator_failed";
        std::ostringstream csv;
        write_trace_csv(RunTrace{}, csv);
        write_text((fs::path(dir) / "trace.csv").string(), csv.str());
        write_json_file(summary, (fs::path(dir) / "summary.json").string());
        result.ok = false;
        cr.bounds_ok = false;
        cr.summary = summary;
        result.cells.push_back(cr);
        continue;
      }

      RunOptions opts;
      opts.snapshot_stride = std::max(1, cfg.snapshot_stride);
      RunTrace tr;
      if (cfg.algorithm == "dpd") {
        tr = run_dpd(setup.problem, setup.graph, sched.outer, init, opts);
      } else if (cfg.algorithm == "dcs") {
        tr = run_dcs(setup.problem, setup.graph, sched, init, opts);
      } else {
        tr = run_sdcs(setup.problem, setup.graph, sched, seed, init, opts);
      }
      std::ostringstream csv;
      write_trace_csv(tr, csv);
      write_text((fs::path(dir) / "trace.csv").string(), csv.str());

      const double F_erg = evaluate_F(setup.problem, tr.x_ergodic);
      const double primal = F_erg - ref.F_star;
      const double feas = feasibility_residual(tr.x_ergodic, L);
      const double consensus_primal = evaluate_F(setup.problem, consensus_point(setup.problem, tr.x_ergodic)) - ref.F_star;
      sum_primal += primal;
      sum_feas += feas;
      ++ran;

      std::int64_t total_evals = 0;
      for (int i = 0; i < m; ++i) {
        total_evals += tr.ledger.subgrad_evals[i] + tr.ledger.stoch_evals[i] + tr.ledger.prox_solves[i];
      }
      summary["status"] = "ran";
      summary["comm_rounds"] = tr.ledger.comm_rounds;
      summary["evals"] = {{"subgrad", tr.ledger.subgrad_evals},
                          {"stoch", tr.ledger.stoch_evals},
                          {"prox", tr.ledger.prox_solves},
                          {"total", total_evals}};
      summary["ledger"] = ledger_to_json(tr.ledger);
      summary["measured"] = {{"F_ergodic", F_erg},
                             {"F_star", ref.F_star},
                             {"reference_tolerance", ref.tolerance},
                             {"reference_method", ref.method},
                             {"primal_residual", primal},
                             {"consensus_primal_residual", consensus_primal},
                             {"feasibility_residual", feas}};
      summary["inputs"] = {{"L_norm", in.L_norm}, {"sigma_min", setup.spectral.min_nonzero_singular},
                           {"m", in.m},           {"M", in.M},
                           {"mu", in.mu},         {"C", in.C},
                           {"sigma", in.sigma},   {"D_tilde", in.D_tilde},
                           {"V0", in.V0},         {"y0_norm", in.y0_norm},
                           {"ystar_dist", in.ystar_dist}};
      if (is_sliding(setup.mode)) summary["sliding_extra_term"] = sliding_extra_term(sched.outer, m, in.M);
      if (bounds) {
        summary["bounds"] = bounds_to_json(*bounds);
        const bool p_ok = primal <= bounds->primal_rhs + ref.tolerance;
        const bool f_ok = feas <= bounds->feas_rhs;
        summary["bound_check"] = {{"primal_ok", p_ok},
                                  {"feasibility_ok", f_ok},
                                  {"kind", stochastic ? "expectation" : "deterministic"},
                                  {"asserted", cfg.assert_bounds && !stochastic}};
        cr.bounds_ok = p_ok && f_ok;
        if (cfg.assert_bounds && !stochastic && !cr.bounds_ok) result.ok = false;
      } else {
        summary["bound_check"] = {{"skipped", "strongly convex bounds need N >= 2"}};
      }
      write_json_file(summary, (fs::path(dir) / "summary.json").string());
      cr.summary = summary;
      result.cells.push_back(cr);
    }

    json entry = {{"N", N}, {"runs", ran}, {"validation_passed", report.all_passed()}};
    if (ran > 0) {
      entry["mean_primal_residual"] = sum_primal / ran;
      entry["mean_feasibility_residual"] = sum_feas / ran;
      if (bounds) {
        entry["bounds"] = bounds_to_json(*bounds);
        bool mean_ok = sum_primal / ran <= bounds->primal_rhs + ref.tolerance && sum_feas / ran <= bounds->feas_rhs;
        entry["mean_within_bounds"] = mean_ok;
        if (stochastic && cfg.assert_bounds && !mean_ok) result.ok = false;
      }
    }
    per_n.push_back(entry);
  }
  result.aggregate = {{"algorithm", cfg.algorithm},
                      {"mode", mode_name(setup.mode)},
                      {"ok", result.ok},
                      {"F_star", ref.F_star},
                      {"per_N", per_n}};
  write_json_file(result.aggregate, (fs::path(cfg.out) / "experiment.json").string());
  return result;
}

json validate_experiment(const ExperimentConfig& cfg, bool& all_passed) {
  const Setup setup = prepare(cfg);
  all_passed = true;
  json out = json::array();
  for (int N : cfg.N) {
    Schedules s = build_schedules(cfg, setup, N);
    ValidationReport r = validate_cell(cfg, setup, s);
    all_passed = all_passed && r.all_passed();
    out.push_back({{"N", N}, {"mode", mode_name(s.outer.mode)}, {"T", s.outer.T.front()},
                   {"validation", report_to_json(r)}});
  }
  return out;
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw std::invalid_argument("fit_rate: need at least 3 points");
  RateFit fit;
  fit.points = points;
  const double n = static_cast<double>(points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (auto [N, r] : points) {
    if (!(N > 0.0)) throw std::invalid_argument("fit_rate: N must be positive");
    if (!(r > 0.0)) throw std::invalid_argument("fit_rate: residual must be positive, got " + format_double(r));
    double x = std::log(N), y = std::log(r);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double vx = sxx - sx * sx / n;
  if (!(vx > 0.0)) throw std::invalid_argument("fit_rate: N values must not all coincide");
  fit.slope = (sxy - sx * sy / n) / vx;
  fit.intercept = (sy - fit.slope * sx) / n;
  const double vy = syy - sy * sy / n;
  double ss_res = 0.0;
  for (auto [N, r] : points) {
    double e = std::log(r) - (fit.intercept + fit.slope * std::log(N));
    ss_res += e * e;
  }
  fit.r2 = vy > 0.0 ? 1.0 - ss_res / vy : 1.0;
  return fit;
}

json fit_rates_from_summaries(const std::vector<std::string>& paths) {
  struct Acc {
    double primal = 0.0, feas = 0.0;
    int n = 0;
  };
  std::map<std::pair<std::string, std::string>, std::map<int, Acc>> groups;
  for (const auto& p : paths) {
    json s = read_json_file(p);
    if (s.value("status", std::string()) != "ran") continue;
    auto key = std::make_pair(s.at("algorithm").get<std::string>(), s.at("mode").get<std::string>());
    auto& a = groups[key][s.at("N").get<int>()];
    a.primal += s.at("measured").at("primal_residual").get<double>();
    a.feas += s.at("measured").at("feasibility_residual").get<double>();
    ++a.n;
  }
  auto fit_json = [](const std::vector<std::pair<double, double>>& pts) -> json {
    try {
      RateFit f = fit_rate(pts);
      return {{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}, {"points", pts}};
    } catch (const std::exception& e) {
      return {{"error", e.what()}, {"points", pts}};
    }
  };
  json out = json::array();
  for (const auto& [key, byN] : groups) {
    std::vector<std::pair<double, double>> primal, feas;
    for (const auto& [N, a] : byN) {
      primal.emplace_back(N, a.primal / a.n);
      feas.emplace_back(N, a.feas / a.n);
    }
    out.push_back({{"algorithm", key.first},
                   {"mode", key.second},
                   {"primal", fit_json(primal)},
                   {"feasibility", fit_json(feas)}});
  }
  return out;
}

}  // namespace dcs
