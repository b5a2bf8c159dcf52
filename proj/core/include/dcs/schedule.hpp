#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dcs {

enum class ScheduleMode { dpd_convex, dcs_convex, dcs_strongly_convex, sdcs_convex, sdcs_strongly_convex };

std::string mode_name(ScheduleMode m);
ScheduleMode parse_mode(const std::string& name);
bool is_strongly_convex(ScheduleMode m);
bool is_sliding(ScheduleMode m);
bool is_stochastic(ScheduleMode m);

inline constexpr std::int64_t kDefaultTMax = 10'000'000;

/// Outer parameter sequences. Accessors take the 1-based outer index k.
struct OuterSchedule {
  ScheduleMode mode = ScheduleMode::dpd_convex;
  int N = 0;
  std::vector<double> alpha, theta, eta, tau;
  std::vector<std::int64_t> T;

  double alpha_at(int k) const { return alpha.at(k - 1); }
  double theta_at(int k) const { return theta.at(k - 1); }
  double eta_at(int k) const { return eta.at(k - 1); }
  double tau_at(int k) const { return tau.at(k - 1); }
  std::int64_t T_at(int k) const { return T.at(k - 1); }
  std::int64_t total_inner() const;

  /// Throws if any entry is non-finite or out of its admissible range.
  void check_well_formed() const;
};

enum class InnerRule { convex, strongly_convex };

/// Inner weights lambda_t and beta_t for the sliding procedure. For the
/// strongly convex rule beta depends on k through eta_k.
struct InnerSchedule {
  InnerRule rule = InnerRule::convex;
  double mu = 0.0;
  double C = 1.0;
  std::vector<double> eta;  // eta_k, k = 1..N
  double beta_scale = 1.0;

  double lambda(std::int64_t t) const;
  double beta(int k, std::int64_t t) const;
};

struct Schedules {
  OuterSchedule outer;
  InnerSchedule inner;
};

OuterSchedule dpd_schedule(double L_norm, int N);
Schedules dcs_convex_schedule(double L_norm, int m, double M, int N, double D_tilde,
                              std::int64_t T_max = kDefaultTMax);
Schedules dcs_strongly_convex_schedule(double mu, double C, double L_norm, int m, double M, int N, double D_tilde,
                                       std::int64_t T_max = kDefaultTMax);
Schedules sdcs_convex_schedule(double L_norm, int m, double M, double sigma, int N, double D_tilde,
                               std::int64_t T_max = kDefaultTMax);
Schedules sdcs_strongly_convex_schedule(double mu, double C, double L_norm, int m, double M, double sigma, int N,
                                        double D_tilde, std::int64_t T_max = kDefaultTMax);

struct ConditionResult {
  std::string name;
  bool passed = true;
  int worst_k = 0;  // 0 when the condition is global
  double worst_margin = 0.0;  // rhs - lhs at the worst index; negative means violated
};

struct ValidationReport {
  std::vector<ConditionResult> conditions;

  bool all_passed() const;
  const ConditionResult* find(const std::string& name) const;
  std::vector<std::string> failed() const;
};

/// Relative slack used by every validator comparison.
inline constexpr double kValidatorSlack = 1e-12;

/// Checks the outer conditions applicable to the schedule's mode.
ValidationReport validate_outer(const OuterSchedule& s, double L_norm, double mu, double C);

/// Inner condition for t = 1..T-1 at outer index k.
bool validate_inner(const InnerSchedule& inner, int k, double eta_k, double mu, double C, std::int64_t T);
ConditionResult check_inner(const InnerSchedule& inner, int k, double eta_k, double mu, double C, std::int64_t T);

/// Outer conditions plus the inner condition at every k for sliding modes.
ValidationReport validate_schedules(const Schedules& s, double L_norm, double mu, double C);

}  // namespace dcs
