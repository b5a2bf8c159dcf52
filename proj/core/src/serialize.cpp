#include "dcs/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace dcs {

json vector_to_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector vector_from_json(const json& j) {
  auto s = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(s.data(), static_cast<Eigen::Index>(s.size()));
}

json matrix_to_json(const Matrix& A) {
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(A.size()));
  for (Eigen::Index r = 0; r < A.rows(); ++r)
    for (Eigen::Index c = 0; c < A.cols(); ++c) data.push_back(A(r, c));
  return {{"rows", A.rows()}, {"cols", A.cols()}, {"data", data}};
}

Matrix matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  auto data = j.at("data").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw std::invalid_argument("matrix: data length does not match rows*cols");
  }
  Matrix A(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) A(r, c) = data[static_cast<std::size_t>(r * cols + c)];
  return A;
}

json stacked_to_json(const Stacked& x) {
  json blocks = json::array();
  for (int i = 0; i < x.agents(); ++i) blocks.push_back(vector_to_json(x.block(i)));
  return {{"agents", x.agents()}, {"dim", x.dim()}, {"blocks", blocks}};
}

Stacked stacked_from_json(const json& j) {
  const int m = j.at("agents").get<int>();
  const int d = j.at("dim").get<int>();
  const auto& blocks = j.at("blocks");
  if (static_cast<int>(blocks.size()) != m) throw std::invalid_argument("stacked: block count mismatch");
  Stacked x(m, d);
  for (int i = 0; i < m; ++i) {
    Vector b = vector_from_json(blocks[i]);
    if (b.size() != d) throw std::invalid_argument("stacked: block length mismatch");
    x.block(i) = b;
  }
  return x;
}

json schedule_to_json(const OuterSchedule& s) {
  return {{"mode", mode_name(s.mode)}, {"N", s.N},         {"alpha", s.alpha}, {"theta", s.theta},
          {"eta", s.eta},              {"tau", s.tau},     {"T", s.T}};
}

OuterSchedule outer_from_json(const json& j) {
  OuterSchedule s;
  s.mode = parse_mode(j.at("mode").get<std::string>());
  s.N = j.at("N").get<int>();
  s.alpha = j.at("alpha").get<std::vector<double>>();
  s.theta = j.at("theta").get<std::vector<double>>();
  s.eta = j.at("eta").get<std::vector<double>>();
  s.tau = j.at("tau").get<std::vector<double>>();
  s.T = j.at("T").get<std::vector<std::int64_t>>();
  s.check_well_formed();
  return s;
}

json inner_to_json(const InnerSchedule& s) {
  return {{"rule", s.rule == InnerRule::convex ? "convex" : "strongly_convex"},
          {"mu", s.mu},
          {"C", s.C},
          {"eta", s.eta},
          {"beta_scale", s.beta_scale}};
}

InnerSchedule inner_from_json(const json& j) {
  InnerSchedule s;
  auto rule = j.at("rule").get<std::string>();
  if (rule == "convex") {
    s.rule = InnerRule::convex;
  } else if (rule == "strongly_convex") {
    s.rule = InnerRule::strongly_convex;
  } else {
    throw std::invalid_argument("inner schedule: unknown rule '" + rule + "'");
  }
  s.mu = j.at("mu").get<double>();
  s.C = j.at("C").get<double>();
  s.eta = j.at("eta").get<std::vector<double>>();
  s.beta_scale = j.value("beta_scale", 1.0);
  return s;
}

json report_to_json(const ValidationReport& r) {
  json conds = json::array();
  for (const auto& c : r.conditions) {
    conds.push_back(
        {{"name", c.name}, {"passed", c.passed}, {"worst_k", c.worst_k}, {"worst_margin", c.worst_margin}});
  }
  return {{"all_passed", r.all_passed()}, {"conditions", conds}};
}

json ledger_to_json(const RoundLedger& l) {
  json edges = json::array();
  for (const auto& [e, n] : l.per_edge_messages) edges.push_back({{"from", e.first + 1}, {"to", e.second + 1}, {"messages", n}});
  return {{"comm_rounds", l.comm_rounds},
          {"subgrad_evals", l.subgrad_evals},
          {"stoch_evals", l.stoch_evals},
          {"prox_solves", l.prox_solves},
          {"per_edge_messages", edges}};
}

json bounds_to_json(const BoundPair& b) {
  return {{"primal_id", b.primal_id},
          {"primal_rhs", b.primal_rhs},
          {"feasibility_id", b.feas_id},
          {"feasibility_rhs", b.feas_rhs},
          {"ystar_conservative", b.conservative}};
}

json set_to_json(const ConstraintSet& s) {
  switch (s.kind()) {
    case SetKind::box: return {{"kind", "box"}, {"lo", vector_to_json(s.lo())}, {"hi", vector_to_json(s.hi())}};
    case SetKind::ball:
      return {{"kind", "ball"}, {"center", vector_to_json(s.center())}, {"radius", s.radius()}};
    case SetKind::simplex: return {{"kind", "simplex"}, {"dim", s.dim()}};
  }
  return {};
}

ConstraintSet set_from_json(const json& j) {
  auto kind = j.at("kind").get<std::string>();
  if (kind == "box") return ConstraintSet::box(vector_from_json(j.at("lo")), vector_from_json(j.at("hi")));
  if (kind == "ball") return ConstraintSet::ball(vector_from_json(j.at("center")), j.at("radius").get<double>());
  if (kind == "simplex") return ConstraintSet::simplex(j.at("dim").get<int>());
  throw std::invalid_argument("set: unknown kind '" + kind + "'");
}

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json problem_to_json(const Problem& p) {
  json agents = json::array();
  for (const auto& a : p) {
    const LadData* L = a.objective->lad_form();
    if (!L) throw std::invalid_argument("problem_to_json: only LAD objectives serialize");
    agents.push_back({{"A", matrix_to_json(L->A)},
                      {"b", vector_to_json(L->b)},
                      {"mu", L->mu},
                      {"c", vector_to_json(L->c)},
                      {"set", set_to_json(a.set)},
                      {"geometry", a.geometry.name()},
                      {"noise", noise_kind_name(a.objective->noise_kind())},
                      {"sigma", a.objective->sigma()},
                      {"M", a.objective->M()}});
  }
  ProblemConstants pc = problem_constants(p);
  return {{"agents", agents},
          {"constants",
           {{"m", pc.m},
            {"d", pc.d},
            {"M", pc.M},
            {"mu", pc.mu},
            {"sigma", pc.sigma},
            {"C", finite_or_null(pc.C)},
            {"D_sum", finite_or_null(pc.D_sum)}}}};
}

Problem problem_from_json(const json& j) {
  Problem p;
  for (const auto& a : j.at("agents")) {
    LadData L;
    L.A = matrix_from_json(a.at("A"));
    L.b = vector_from_json(a.at("b"));
    L.mu = a.value("mu", 0.0);
    if (a.contains("c")) L.c = vector_from_json(a.at("c"));
    ConstraintSet set = set_from_json(a.at("set"));
    NoiseKind noise = parse_noise_kind(a.value("noise", std::string("none")));
    double sigma = a.value("sigma", 0.0);
    auto obj = std::make_shared<LadObjective>(std::move(L), set, noise, sigma);
    p.push_back({obj, set, parse_geometry(a.value("geometry", std::string("euclidean")))});
  }
  if (p.empty()) throw std::invalid_argument("problem_from_json: no agents");
  return p;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(const RunTrace& trace, std::ostream& out) {
  out << kTraceHeader << '\n';
  out << "k,F_ergodic,feas_residual_ergodic,comm_rounds,cumulative_evals\n";
  for (const auto& r : trace.rows) {
    out << r.k << ',' << format_double(r.F_ergodic) << ',' << format_double(r.feas_ergodic) << ','
        << r.comm_rounds << ',' << r.cumulative_evals << '\n';
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("invalid JSON in " + path + ": " + e.what());
  }
}

void write_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace dcs
