#include "dcs/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dcs {

std::string mode_name(ScheduleMode m) {
  switch (m) {
    case ScheduleMode::dpd_convex: return "dpd_convex";
    case ScheduleMode::dcs_convex: return "dcs_convex";
    case ScheduleMode::dcs_strongly_convex: return "dcs_strongly_convex";
    case ScheduleMode::sdcs_convex: return "sdcs_convex";
    case ScheduleMode::sdcs_strongly_convex: return "sdcs_strongly_convex";
  }
  return "?";
}

ScheduleMode parse_mode(const std::string& name) {
  for (auto m : {ScheduleMode::dpd_convex, ScheduleMode::dcs_convex, ScheduleMode::dcs_strongly_convex,
                 ScheduleMode::sdcs_convex, ScheduleMode::sdcs_strongly_convex}) {
    if (mode_name(m) == name) return m;
  }
  throw std::invalid_argument("unknown schedule mode '" + name + "'");
}

bool is_strongly_convex(ScheduleMode m) {
  return m == ScheduleMode::dcs_strongly_convex || m == ScheduleMode::sdcs_strongly_convex;
}
bool is_sliding(ScheduleMode m) { return m != ScheduleMode::dpd_convex; }
bool is_stochastic(ScheduleMode m) {
  return m == ScheduleMode::sdcs_convex || m == ScheduleMode::sdcs_strongly_convex;
}

std::int64_t OuterSchedule::total_inner() const { return std::accumulate(T.begin(), T.end(), std::int64_t{0}); }

void OuterSchedule::check_well_formed() const {
  auto n = static_cast<std::size_t>(N);
  if (N < 1 || alpha.size() != n || theta.size() != n || eta.size() != n || tau.size() != n || T.size() != n) {
    throw std::invalid_argument("schedule: sequences must all have length N >= 1");
  }
  for (int k = 1; k <= N; ++k) {
    auto bad = [&](const char* what) {
      throw std::invalid_argument(std::string("schedule: ") + what + " at k=" + std::to_string(k));
    };
    if (!std::isfinite(alpha_at(k)) || alpha_at(k) < 0.0) bad("alpha must be finite and nonnegative");
    if (!std::isfinite(theta_at(k)) || !(theta_at(k) > 0.0)) bad("theta must be finite and positive");
    if (!std::isfinite(eta_at(k)) || !(eta_at(k) > 0.0)) bad("eta must be finite and positive");
    if (!std::isfinite(tau_at(k)) || !(tau_at(k) > 0.0)) bad("tau must be finite and positive");
    if (T_at(k) < 1) bad("T must be at least 1");
  }
}

double InnerSchedule::lambda(std::int64_t t) const {
  return rule == InnerRule::convex ? static_cast<double>(t + 1) : static_cast<double>(t);
}

double InnerSchedule::beta(int k, std::int64_t t) const {
  const double td = static_cast<double>(t);
  if (rule == InnerRule::convex) return beta_scale * td / 2.0;
  double ek = eta.at(k - 1);
  return beta_scale * ((td + 1.0) * mu / (2.0 * ek * C) + (td - 1.0) / 2.0);
}

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string("schedule: ") + name + " must be finite and positive, got " +
                                std::to_string(v));
  }
}

std::int64_t ceil_count(double value, std::int64_t T_max) {
  if (!std::isfinite(value)) throw std::invalid_argument("schedule: inner iteration count is not finite");
  double c = std::ceil(value);
  if (c > static_cast<double>(T_max)) {
    throw std::invalid_argument("schedule: inner iteration count " + std::to_string(c) + " exceeds cap " +
                                std::to_string(T_max) + "; increase D_tilde or the cap");
  }
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(c));
}

OuterSchedule constant_outer(ScheduleMode mode, double L_norm, int N, std::int64_t T) {
  OuterSchedule s;
  s.mode = mode;
  s.N = N;
  s.alpha.assign(N, 1.0);
  s.theta.assign(N, 1.0);
  s.eta.assign(N, 2.0 * L_norm);
  s.tau.assign(N, L_norm);
  s.T.assign(N, T);
  return s;
}

Schedules strongly_convex(ScheduleMode mode, double mu, double C, double L_norm, int N, double Tval,
                          std::int64_t T_max) {
  Schedules out;
  auto& s = out.outer;
  s.mode = mode;
  s.N = N;
  std::int64_t T = ceil_count(Tval, T_max);
  for (int k = 1; k <= N; ++k) {
    double kd = k;
    s.alpha.push_back(kd / (kd + 1.0));
    s.theta.push_back(kd + 1.0);
    s.eta.push_back(kd * mu / (2.0 * C));
    s.tau.push_back(4.0 * L_norm * L_norm * C / ((kd + 1.0) * mu));
    s.T.push_back(T);
  }
  out.inner.rule = InnerRule::strongly_convex;
  out.inner.mu = mu;
  out.inner.C = C;
  out.inner.eta = s.eta;
  return out;
}

void check_sc_inputs(double mu, double C) {
  require_positive(mu, "mu");
  if (!(C >= 1.0) || !std::isfinite(C)) {
    throw std::invalid_argument("schedule: growth constant C must be finite and at least 1, got " + std::to_string(C));
  }
}

}  // namespace

OuterSchedule dpd_schedule(double L_norm, int N) {
  require_positive(L_norm, "L_norm");
  if (N < 1) throw std::invalid_argument("schedule: N must be at least 1");
  return constant_outer(ScheduleMode::dpd_convex, L_norm, N, 1);
}

Schedules dcs_convex_schedule(double L_norm, int m, double M, int N, double D_tilde, std::int64_t T_max) {
  require_positive(L_norm, "L_norm");
  require_positive(M, "M");
  require_positive(D_tilde, "D_tilde");
  if (m < 1 || N < 1) throw std::invalid_argument("schedule: m and N must be at least 1");
  double Tval = static_cast<double>(m) * M * M * N / (L_norm * L_norm * D_tilde);
  Schedules out;
  out.outer = constant_outer(ScheduleMode::dcs_convex, L_norm, N, ceil_count(Tval, T_max));
  out.inner.rule = InnerRule::convex;
  out.inner.eta = out.outer.eta;
  return out;
}

Schedules sdcs_convex_schedule(double L_norm, int m, double M, double sigma, int N, double D_tilde,
                               std::int64_t T_max) {
  require_positive(L_norm, "L_norm");
  require_positive(M, "M");
  require_positive(D_tilde, "D_tilde");
  if (!(sigma >= 0.0)) throw std::invalid_argument("schedule: sigma must be nonnegative");
  if (m < 1 || N < 1) throw std::invalid_argument("schedule: m and N must be at least 1");
  double Tval = static_cast<double>(m) * (M * M + sigma * sigma) * N / (L_norm * L_norm * D_tilde);
  Schedules out;
  out.outer = constant_outer(ScheduleMode::sdcs_convex, L_norm, N, ceil_count(Tval, T_max));
  out.inner.rule = InnerRule::convex;
  out.inner.eta = out.outer.eta;
  return out;
}

Schedules dcs_strongly_convex_schedule(double mu, double C, double L_norm, int m, double M, int N, double D_tilde,
                                       std::int64_t T_max) {
  check_sc_inputs(mu, C);
  require_positive(L_norm, "L_norm");
  require_positive(M, "M");
  require_positive(D_tilde, "D_tilde");
  if (m < 1 || N < 1) throw std::invalid_argument("schedule: m and N must be at least 1");
  double r = std::sqrt(2.0 * m / D_tilde);
  double Tval = r * (C * M * N / mu) * std::max(r * 4.0 * C * M / mu, 1.0);
  return strongly_convex(ScheduleMode::dcs_strongly_convex, mu, C, L_norm, N, Tval, T_max);
}

Schedules sdcs_strongly_convex_schedule(double mu, double C, double L_norm, int m, double M, double sigma, int N,
                                        double D_tilde, std::int64_t T_max) {
  check_sc_inputs(mu, C);
  require_positive(L_norm, "L_norm");
  require_positive(M, "M");
  require_positive(D_tilde, "D_tilde");
  if (!(sigma >= 0.0)) throw std::invalid_argument("schedule: sigma must be nonnegative");
  if (m < 1 || N < 1) throw std::invalid_argument("schedule: m and N must be at least 1");
  double r = std::sqrt(m * (M * M + sigma * sigma) / D_tilde);
  double Tval = r * (2.0 * N * C / mu) * std::max(r * 8.0 * C / mu, 1.0);
  return strongly_convex(ScheduleMode::sdcs_strongly_convex, mu, C, L_norm, N, Tval, T_max);
}

bool ValidationReport::all_passed() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const ConditionResult& c) { return c.passed; });
}

const ConditionResult* ValidationReport::find(const std::string& name) const {
  for (const auto& c : conditions)
    if (c.name == name) return &c;
  return nullptr;
}

std::vector<std::string> ValidationReport::failed() const {
  std::vector<std::string> out;
  for (const auto& c : conditions)
    if (!c.passed) out.push_back(c.name);
  return out;
}

namespace {

double slack(double lhs, double rhs) {
  return kValidatorSlack * std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

// Accumulates the worst margin of lhs <= rhs (or lhs == rhs) over k.
struct Tracker {
  ConditionResult r;
  bool first = true;

  explicit Tracker(std::string name) { r.name = std::move(name); }

  void le(int k, double lhs, double rhs) { record(k, rhs - lhs, lhs <= rhs + slack(lhs, rhs)); }
  void eq(int k, double lhs, double rhs) {
    record(k, -std::abs(lhs - rhs), std::abs(lhs - rhs) <= slack(lhs, rhs));
  }
  void record(int k, double margin, bool ok) {
    if (first || margin < r.worst_margin || std::isnan(margin)) {
      r.worst_margin = margin;
      r.worst_k = k;
      first = false;
    }
    if (!ok || std::isnan(margin)) r.passed = false;
  }
};

double theta_eta_d_term(const OuterSchedule& s, int k) {
  double T = static_cast<double>(s.T_at(k));
  return s.theta_at(k) * (T + 1.0) * (T + 2.0) * s.eta_at(k) / (T * (T + 3.0));
}

}  // namespace

ValidationReport validate_outer(const OuterSchedule& s, double L_norm, double mu, double C) {
  s.check_well_formed();
  const double L2 = L_norm * L_norm;
  const int N = s.N;
  ValidationReport rep;
  const bool sliding = is_sliding(s.mode);
  const bool sc = is_strongly_convex(s.mode);

  if (!sliding) {
    Tracker t("theta_eta");
    for (int k = 2; k <= N; ++k) t.le(k, s.theta_at(k) * s.eta_at(k), s.theta_at(k - 1) * s.eta_at(k - 1));
    rep.conditions.push_back(t.r);
  }
  {
    Tracker t("alpha_theta");
    for (int k = 2; k <= N; ++k) t.eq(k, s.alpha_at(k) * s.theta_at(k), s.theta_at(k - 1));
    rep.conditions.push_back(t.r);
  }
  {
    Tracker t("theta_tau");
    for (int k = 2; k <= N; ++k) t.le(k, s.theta_at(k) * s.tau_at(k), s.theta_at(k - 1) * s.tau_at(k - 1));
    rep.conditions.push_back(t.r);
  }
  {
    Tracker t("eta_tau_L_k");
    for (int k = 2; k <= N; ++k) t.le(k, s.alpha_at(k) * L2, s.eta_at(k - 1) * s.tau_at(k));
    rep.conditions.push_back(t.r);
  }
  {
    Tracker t("eta_tau");
    t.eq(0, s.theta_at(1) * s.tau_at(1), s.theta_at(N) * s.tau_at(N));
    rep.conditions.push_back(t.r);
  }
  {
    Tracker t("eta_tau_theta");
    t.le(0, s.theta_at(N) * L2, s.theta_at(1) * s.tau_at(1) * s.eta_at(N));
    rep.conditions.push_back(t.r);
  }
  if (sliding && !sc) {
    Tracker t("theta_eta_d");
    for (int k = 2; k <= N; ++k) t.le(k, theta_eta_d_term(s, k), theta_eta_d_term(s, k - 1));
    rep.conditions.push_back(t.r);
  }
  if (sc) {
    Tracker t("theta_eta_ds");
    double muC = std::isfinite(C) ? mu / C : 0.0;
    for (int k = 2; k <= N; ++k) t.le(k, s.theta_at(k) * s.eta_at(k), s.theta_at(k - 1) * (muC + s.eta_at(k - 1)));
    rep.conditions.push_back(t.r);
  }
  return rep;
}

ConditionResult check_inner(const InnerSchedule& inner, int k, double eta_k, double mu, double C, std::int64_t T) {
  if (T < 1) throw std::invalid_argument("validate_inner: T must be at least 1");
  Tracker tr("beta_w");
  const double muC = std::isfinite(C) ? mu / C : 0.0;
  for (std::int64_t t = 1; t < T; ++t) {
    double lhs = inner.lambda(t + 1) * (eta_k * inner.beta(k, t + 1) - muC);
    double rhs = inner.lambda(t) * (1.0 + inner.beta(k, t)) * eta_k;
    tr.le(k, lhs, rhs);
  }
  return tr.r;
}

bool validate_inner(const InnerSchedule& inner, int k, double eta_k, double mu, double C, std::int64_t T) {
  return check_inner(inner, k, eta_k, mu, C, T).passed;
}

ValidationReport validate_schedules(const Schedules& s, double L_norm, double mu, double C) {
  ValidationReport rep = validate_outer(s.outer, L_norm, mu, C);
  if (is_sliding(s.outer.mode)) {
    ConditionResult worst{"beta_w", true, 0, 0.0};
    bool first = true;
    for (int k = 1; k <= s.outer.N; ++k) {
      auto c = check_inner(s.inner, k, s.outer.eta_at(k), mu, C, s.outer.T_at(k));
      if (!c.passed) worst.passed = false;
      if (s.outer.T_at(k) > 1 && (first || c.worst_margin < worst.worst_margin)) {
        worst.worst_margin = c.worst_margin;
        worst.worst_k = k;
        first = false;
      }
    }
    rep.conditions.push_back(worst);
  }
  return rep;
}

}  // namespace dcs
