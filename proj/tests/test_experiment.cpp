//
// TomoLens - Copyright 2026 The TomoLens Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tomolens/serialization.hpp"

namespace tl = tomolens;

namespace {

tl::ExperimentSpec single_spec(double theta_deg, double phi_deg, tl::ShotPlan plan,
                               std::uint64_t seed) {
  tl::ExperimentSpec spec;
  spec.n_qubits = 1;
  spec.true_params = tl::PolarParams::single(tl::deg_to_rad(theta_deg), tl::deg_to_rad(phi_deg));
  spec.shot_plan = std::move(plan);
  spec.seed = seed;
  spec.optimizer.seed = seed;
  return spec;
}

tl::ShotPlan plan_of(std::initializer_list<std::pair<const char *, std::int64_t>> entries) {
  tl::ShotPlan plan;
  for (const auto &[label, n] : entries)
    plan[tl::PauliString::parse(label)] = n;
  return plan;
}

} // namespace

TEST(DefaultShotPlan, Examples) {
  const auto one = tl::default_shot_plan(1, 100);
  ASSERT_EQ(one.size(), 3u);
  for (const auto &[s, n] : one)
    EXPECT_EQ(n, 100);
  const auto zero = tl::default_shot_plan(2, 0);
  EXPECT_EQ(zero.size(), 15u);
  EXPECT_EQ(tl::total_shots(zero), 0);
  EXPECT_EQ(tl::total_shots(tl::default_shot_plan(2, 2000)), 30000);
  EXPECT_THROW(tl::default_shot_plan(1, -1), tl::InvalidArgument);
}

TEST(ExperimentSpecType, Validates) {
  auto spec = single_spec(60, 30, tl::default_shot_plan(1, 0), 1);
  try {
    spec.validate();
    FAIL();
  } catch (const tl::ComputationError &e) {
    EXPECT_EQ(e.code(), "no_shots");
  }
  spec.shot_plan = plan_of({{"X", -1}, {"Z", 10}});
  EXPECT_THROW(spec.validate(), tl::InvalidArgument);
  spec.shot_plan = plan_of({{"XZ", 10}});
  EXPECT_THROW(spec.validate(), tl::InvalidArgument);
  spec.shot_plan = {};
  EXPECT_THROW(spec.validate(), tl::InvalidArgument);
}

TEST(RunExperiment, FullBudgetSingleQubit) {
  for (std::uint64_t seed : {1u, 2u, 3u, 42u}) {
    const auto rep = tl::run_experiment(single_spec(60, 30, tl::default_shot_plan(1, 1000), seed));
    EXPECT_GE(rep.fidelity, 0.98);
    EXPECT_TRUE(rep.warnings.empty());
    ASSERT_EQ(rep.records.size(), 3u);
    EXPECT_EQ(rep.per_qubit_bloch_true.size(), 1u);
    EXPECT_EQ(rep.per_qubit_bloch_estimated.size(), 1u);
    EXPECT_EQ(rep.fidelity, tl::fidelity(rep.true_state, rep.result.estimated_state));
    ASSERT_TRUE(rep.result.fidelity_to_truth.has_value());
    EXPECT_EQ(*rep.result.fidelity_to_truth, rep.fidelity);
  }
}

TEST(RunExperiment, ZOnlyFlagsUnconstrainedPhase) {
  const auto rep = tl::run_experiment(single_spec(60, 150, plan_of({{"Z", 100000}}), 3));
  EXPECT_NEAR(tl::rad_to_deg(rep.result.estimated_params.thetas()[0]), 60.0, 2.0);
  ASSERT_EQ(rep.warnings.size(), 1u);
  EXPECT_EQ(rep.warnings[0], tl::kWarnPhiUnconstrained);

  const auto zero_xy = tl::run_experiment(
      single_spec(60, 150, plan_of({{"X", 0}, {"Y", 0}, {"Z", 1000}}), 3));
  EXPECT_EQ(zero_xy.warnings, std::vector<std::string>{tl::kWarnPhiUnconstrained});
}

TEST(RunExperiment, XZFlagsSignAmbiguity) {
  const auto rep = tl::run_experiment(single_spec(60, 330, plan_of({{"X", 5000}, {"Z", 5000}}), 4));
  EXPECT_EQ(rep.warnings, std::vector<std::string>{tl::kWarnPhiSignAmbiguous});
  EXPECT_TRUE(tl::plan_warnings(2, plan_of({{"XI", 10}})).empty());
}

TEST(RunExperiment, TwoQubitProductState) {
  const tl::PolarParams truth(2, {1.0, 0.0, 0.0}, {2.0, 0.0, 0.0}); // |psi> (x) |0>
  tl::ExperimentSpec spec;
  spec.n_qubits = 2;
  spec.true_params = truth;
  spec.shot_plan = tl::default_shot_plan(2, 2000);
  spec.seed = 11;
  spec.optimizer.seed = 11;
  const auto rep = tl::run_experiment(spec);
  EXPECT_GE(rep.fidelity, 0.99);
  ASSERT_EQ(rep.per_qubit_bloch_true.size(), 2u);
  EXPECT_NEAR(rep.per_qubit_bloch_true[0].norm(), 1.0, 1e-6);
  EXPECT_NEAR(rep.per_qubit_bloch_true[1].norm(), 1.0, 1e-6);
}

TEST(RunExperiment, ReportsAreByteIdentical) {
  auto spec = single_spec(60, 30, tl::default_shot_plan(1, 1000), 9);
  EXPECT_EQ(tl::dump_report(tl::run_experiment(spec)), tl::dump_report(tl::run_experiment(spec)));
  tl::ExperimentSpec two;
  two.n_qubits = 2;
  two.true_params = tl::PolarParams(2, {1.0, 2.0, 0.5}, {1.0, 3.0, 5.0});
  two.shot_plan = tl::default_shot_plan(2, 500);
  two.seed = 5;
  EXPECT_EQ(tl::dump_report(tl::run_experiment(two)), tl::dump_report(tl::run_experiment(two)));
}

TEST(RunExperiment, ZOnlyThetaIndependentOfTruePhase) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto a = tl::run_experiment(single_spec(60, 10, plan_of({{"Z", 5000}}), seed));
    const auto b = tl::run_experiment(single_spec(60, 250, plan_of({{"Z", 5000}}), seed));
    EXPECT_EQ(a.records[0].plus_count, b.records[0].plus_count);
    EXPECT_NEAR(a.result.estimated_params.thetas()[0], b.result.estimated_params.thetas()[0], 1e-9);
  }
}

TEST(RunExperiment, MedianFidelityImprovesWithShots) {
  std::vector<double> low, high;
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> th(0.0, 180.0), ph(0.0, 360.0);
  for (std::uint64_t t = 0; t < 20; ++t) {
    const double theta = th(rng), phi = ph(rng);
    low.push_back(tl::run_experiment(single_spec(theta, phi, tl::default_shot_plan(1, 100), t)).fidelity);
    high.push_back(
        tl::run_experiment(single_spec(theta, phi, tl::default_shot_plan(1, 10000), t)).fidelity);
  }
  EXPECT_GE(oracle::median(high), oracle::median(low));
}

TEST(Serialization, ReportShapeAndRecordRoundTrip) {
  const auto rep = tl::run_experiment(single_spec(60, 30, plan_of({{"X", 10}, {"Z", 20}}), 1));
  const auto j = tl::to_json(rep);
  std::vector<std::string> keys;
  for (const auto &[k, v] : j.items())
    keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"spec", "records", "result", "true_state",
                                            "per_qubit_bloch_true", "per_qubit_bloch_estimated",
                                            "fidelity", "warnings"}));
  EXPECT_EQ(j["spec"]["shot_plan"].dump(), R"({"X":10,"Z":20})");
  EXPECT_EQ(j["true_state"].size(), 2u);
  EXPECT_EQ(j["true_state"][0].size(), 2u);
  const auto back = tl::records_from_json(j["records"]);
  ASSERT_EQ(back.size(), rep.records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].setting, rep.records[i].setting);
    EXPECT_EQ(back[i].plus_count, rep.records[i].plus_count);
  }
}
