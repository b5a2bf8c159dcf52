#include "dcs/schedule.hpp"

#include "../support/perturb.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace dcs;

TEST(DpdSchedule, ConstantValues) {
  auto s = dpd_schedule(3.0, 5);
  for (int k = 1; k <= 5; ++k) {
    EXPECT_EQ(s.eta_at(k), 6.0);
    EXPECT_EQ(s.tau_at(k), 3.0);
    EXPECT_EQ(s.theta_at(k), 1.0);
  }
  auto one = dpd_schedule(1.0, 4);
  for (int k = 1; k <= 4; ++k) EXPECT_EQ(one.alpha_at(k), 1.0);
  EXPECT_TRUE(validate_outer(s, 3.0, 0.0, 1.0).all_passed());
}

TEST(DpdSchedule, RejectsBadInputs) {
  EXPECT_THROW(dpd_schedule(0.0, 3), std::invalid_argument);
  EXPECT_THROW(dpd_schedule(1.0, 0), std::invalid_argument);
}

TEST(DcsConvexSchedule, InnerCountAndWeights) {
  auto s = dcs_convex_schedule(2.0, 2, 1.0, 8, 1.0);
  for (int k = 1; k <= 8; ++k) EXPECT_EQ(s.outer.T_at(k), 4);
  EXPECT_EQ(s.inner.beta(1, 1), 0.5);
  EXPECT_EQ(s.inner.lambda(4), 5.0);
  EXPECT_TRUE(validate_schedules(s, 2.0, 0.0, 1.0).all_passed());
}

TEST(DcsStronglyConvexSchedule, FirstIterates) {
  auto s = dcs_strongly_convex_schedule(2.0, 1.0, 1.5, 3, 1.0, 5, 1.0);
  EXPECT_EQ(s.outer.alpha_at(1), 0.5);
  EXPECT_EQ(s.outer.theta_at(1), 2.0);
  EXPECT_EQ(s.outer.eta_at(3), 3.0);
  for (int k = 1; k <= 5; ++k) {
    EXPECT_NEAR(s.inner.beta(k, 1), 2.0 / (s.outer.eta_at(k) * 1.0), 1e-15);
  }
}

TEST(DcsStronglyConvexSchedule, ThetaEtaDsHoldsWithZeroMargin) {
  for (double mu : {0.3, 1.0, 4.0}) {
    for (double C : {1.0, 2.5}) {
      auto s = dcs_strongly_convex_schedule(mu, C, 2.0, 4, 1.5, 12, 2.0);
      for (int k = 2; k <= 12; ++k) {
        double lhs = (k + 1.0) * k * mu / (2.0 * C);
        double rhs = k * (mu / C + (k - 1.0) * mu / (2.0 * C));
        EXPECT_NEAR(lhs, rhs, 1e-12 * rhs);
        EXPECT_NEAR(s.outer.theta_at(k) * s.outer.eta_at(k), lhs, 1e-12 * lhs);
      }
      auto rep = validate_schedules(s, 2.0, mu, C);
      ASSERT_NE(rep.find("theta_eta_ds"), nullptr);
      EXPECT_TRUE(rep.find("theta_eta_ds")->passed);
      EXPECT_NEAR(rep.find("theta_eta_ds")->worst_margin, 0.0, 1e-10);
      EXPECT_TRUE(rep.all_passed());
    }
  }
}

TEST(SdcsConvexSchedule, Examples) {
  auto s = sdcs_convex_schedule(2.0, 2, 1.0, 1.0, 8, 1.0);
  for (int k = 1; k <= 8; ++k) {
    EXPECT_EQ(s.outer.T_at(k), 8);
    EXPECT_EQ(s.outer.eta_at(k), 4.0);
  }
  auto zero = sdcs_convex_schedule(2.0, 2, 1.0, 0.0, 8, 1.0);
  auto det = dcs_convex_schedule(2.0, 2, 1.0, 8, 1.0);
  EXPECT_EQ(zero.outer.T, det.outer.T);
  EXPECT_EQ(zero.outer.eta, det.outer.eta);
  EXPECT_EQ(zero.outer.tau, det.outer.tau);
  EXPECT_EQ(zero.outer.alpha, det.outer.alpha);
  EXPECT_EQ(zero.outer.theta, det.outer.theta);
}

TEST(SdcsStronglyConvexSchedule, Examples) {
  const double mu = 0.5, C = 1.0, L = 3.0;
  auto s = sdcs_strongly_convex_schedule(mu, C, L, 2, 1.0, 0.0, 6, 1.0);
  EXPECT_NEAR(s.outer.tau_at(1), 2.0 * L * L * C / mu, 1e-12);
  EXPECT_TRUE(validate_schedules(s, L, mu, C).all_passed());
  // With m (M^2 + sigma^2) / D = 1, mu = 8 C, both max branches equal 1.
  auto tie = sdcs_strongly_convex_schedule(8.0, 1.0, L, 1, 1.0, 0.0, 10, 1.0);
  auto det = dcs_strongly_convex_schedule(8.0, 1.0, L, 1, 1.0, 10, 1.0);
  double ratio = static_cast<double>(tie.outer.T_at(1)) / static_cast<double>(det.outer.T_at(1));
  EXPECT_GE(ratio, 0.5);
  EXPECT_LE(ratio, 2.0);
}

TEST(Schedules, InnerCapEnforced) {
  EXPECT_THROW(dcs_convex_schedule(1.0, 100, 100.0, 1000, 1e-6, 1000), std::invalid_argument);
}

TEST(Validator, TauHalvingLandsOnEquality) {
  auto s = dpd_schedule(2.0, 6);
  for (auto& t : s.tau) t *= 0.5;
  auto rep = validate_outer(s, 2.0, 0.0, 1.0);
  EXPECT_TRUE(rep.find("eta_tau_L_k")->passed);
  EXPECT_NEAR(rep.find("eta_tau_L_k")->worst_margin, 0.0, 1e-12);
  for (auto& t : s.tau) t *= 0.5;
  rep = validate_outer(s, 2.0, 0.0, 1.0);
  EXPECT_FALSE(rep.find("eta_tau_L_k")->passed);
  EXPECT_LT(rep.find("eta_tau_L_k")->worst_margin, 0.0);
}

TEST(Validator, TargetedPerturbationsFailByName) {
  for (double L : {0.7, 2.0, 3.618}) {
    for (const auto& [name, s] : fixtures::targeted_perturbations(L, 6)) {
      auto failed = validate_outer(s, L, 0.0, 1.0).failed();
      ASSERT_EQ(failed.size(), 1u) << name;
      EXPECT_EQ(failed[0], name);
    }
  }
}

TEST(Validator, ConvexInnerIsEquality) {
  auto s = dcs_convex_schedule(1.0, 2, 3.0, 5, 1.0);
  auto c = check_inner(s.inner, 1, s.outer.eta_at(1), 0.0, 1.0, 50);
  EXPECT_TRUE(c.passed);
  EXPECT_NEAR(c.worst_margin, 0.0, 1e-9);
  for (int t = 1; t < 50; ++t) {
    double eta = s.outer.eta_at(1);
    EXPECT_NEAR((t + 2.0) * (t + 1.0) * eta / 2.0, (t + 1.0) * (1.0 + t / 2.0) * eta, 1e-9);
  }
}

TEST(Validator, StronglyConvexInnerPlugIn) {
  const double mu = 0.5, C = 1.0;
  auto s = dcs_strongly_convex_schedule(mu, C, 2.0, 3, 1.0, 6, 1.0);
  for (int k = 1; k <= 6; ++k) {
    const double eta = s.outer.eta_at(k);
    for (int t = 1; t < 40; ++t) {
      double b1 = (t + 1.0) * mu / (2.0 * eta * C) + (t - 1.0) / 2.0;
      double b2 = (t + 2.0) * mu / (2.0 * eta * C) + t / 2.0;
      EXPECT_LE((t + 1.0) * (eta * b2 - mu / C), t * (1.0 + b1) * eta + 1e-9);
    }
    EXPECT_TRUE(validate_inner(s.inner, k, eta, mu, C, 40));
  }
}

TEST(Validator, DoubledBetaFails) {
  for (bool strong : {false, true}) {
    Schedules s = strong ? dcs_strongly_convex_schedule(0.5, 1.0, 2.0, 3, 1.0, 4, 1.0)
                         : dcs_convex_schedule(2.0, 3, 1.0, 4, 1.0);
    s.inner.beta_scale = 2.0;
    const double mu = strong ? 0.5 : 0.0;
    EXPECT_FALSE(validate_inner(s.inner, 2, s.outer.eta_at(2), mu, 1.0, 20));
  }
}

TEST(Validator, RandomizedConstructorsPass) {
  std::mt19937_64 rng(77);
  auto U = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  for (int rep = 0; rep < 50; ++rep) {
    const double L = U(0.1, 10.0), M = U(0.1, 2.0), mu = U(0.5, 3.0), C = U(1.0, 3.0), sigma = U(0.0, 2.0);
    const double D = U(5.0, 50.0);
    const int m = 2 + rep % 8, N = 2 + rep % 15;
    EXPECT_TRUE(validate_outer(dpd_schedule(L, N), L, 0.0, 1.0).all_passed());
    EXPECT_TRUE(validate_schedules(dcs_convex_schedule(L, m, M, N, D), L, 0.0, 1.0).all_passed());
    EXPECT_TRUE(validate_schedules(sdcs_convex_schedule(L, m, M, sigma, N, D), L, 0.0, 1.0).all_passed());
    EXPECT_TRUE(validate_schedules(dcs_strongly_convex_schedule(mu, C, L, m, M, N, D), L, mu, C).all_passed());
    EXPECT_TRUE(
        validate_schedules(sdcs_strongly_convex_schedule(mu, C, L, m, M, sigma, N, D), L, mu, C).all_passed());
  }
}

TEST(Validator, ModeConditionSets) {
  auto names = [](const ValidationReport& r) {
    std::vector<std::string> out;
    for (const auto& c : r.conditions) out.push_back(c.name);
    return out;
  };
  auto dpd = names(validate_outer(dpd_schedule(1.0, 3), 1.0, 0.0, 1.0));
  EXPECT_EQ(dpd, (std::vector<std::string>{"theta_eta", "alpha_theta", "theta_tau", "eta_tau_L_k", "eta_tau",
                                           "eta_tau_theta"}));
  auto dcs = names(validate_schedules(dcs_convex_schedule(1.0, 2, 1.0, 3, 1.0), 1.0, 0.0, 1.0));
  EXPECT_EQ(dcs, (std::vector<std::string>{"alpha_theta", "theta_tau", "eta_tau_L_k", "eta_tau", "eta_tau_theta",
                                           "theta_eta_d", "beta_w"}));
  auto sc = names(validate_schedules(dcs_strongly_convex_schedule(1.0, 1.0, 1.0, 2, 1.0, 3, 1.0), 1.0, 1.0, 1.0));
  EXPECT_EQ(sc, (std::vector<std::string>{"alpha_theta", "theta_tau", "eta_tau_L_k", "eta_tau", "eta_tau_theta",
                                          "theta_eta_ds", "beta_w"}));
}

TEST(Modes, NameRoundTrip) {
  for (auto m : {ScheduleMode::dpd_convex, ScheduleMode::dcs_convex, ScheduleMode::dcs_strongly_convex,
                 ScheduleMode::sdcs_convex, ScheduleMode::sdcs_strongly_convex}) {
    EXPECT_EQ(parse_mode(mode_name(m)), m);
  }
  EXPECT_THROW(parse_mode("bogus"), std::invalid_argument);
}
