// Copyright 2026 The bornlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bornlab/rules.hpp"

#include <cmath>

#include "gtest/gtest.h"

#include "bornlab/errors.hpp"
#include "bornlab/rng.hpp"

using namespace bornlab;

namespace {
const double kHalf = 1.0 / std::sqrt(2.0);
}

TEST(Evaluate, boundary_values_of_born) {
    EXPECT_EQ(ProbabilityRule::born().evaluate(1.0), 1.0);
    EXPECT_EQ(ProbabilityRule::born().evaluate(0.0), 0.0);
}

TEST(Evaluate, affine_complement_form) {
    // lambda = -1, mu = 1 evaluated as lambda a^2 + mu at a = 0.6: 1 - 0.36
    EXPECT_NEAR(ProbabilityRule::affine(-1.0, 1.0).evaluate(0.6), 1.0 - 0.36, 1e-15);
    EXPECT_NEAR(ProbabilityRule::affine(-1.0, 1.0).evaluate(0.6), 0.64, 1e-15);
}

TEST(Evaluate, kinds) {
    EXPECT_EQ(ProbabilityRule::power(3.0).evaluate(0.5), 0.125);
    EXPECT_EQ(ProbabilityRule::affine(2.0, 0.25).evaluate(0.5), 0.75);
}

TEST(Evaluate, domain_errors) {
    const auto born = ProbabilityRule::born();
    EXPECT_THROW(born.evaluate(-1e-11), DomainError);
    EXPECT_THROW(born.evaluate(1.0 + 1e-11), DomainError);
    EXPECT_THROW(born.evaluate(std::nan("")), DomainError);
    EXPECT_NO_THROW(born.evaluate(-1e-13));
    EXPECT_NO_THROW(ProbabilityRule::power(0.5).evaluate(-1e-13));
    EXPECT_EQ(ProbabilityRule::power(0.5).evaluate(-1e-13), 0.0);
    EXPECT_THROW(ProbabilityRule::renormalized(born).evaluate(0.5), RuleError);
    EXPECT_THROW(ProbabilityRule::power(0.0), DomainError);
    EXPECT_THROW(ProbabilityRule::power(-2.0), DomainError);
}

TEST(Evaluate, quadratic_spellings_agree) {
    const auto born = ProbabilityRule::born();
    const auto power2 = ProbabilityRule::power(2.0);
    const auto affine = ProbabilityRule::affine(1.0, 0.0);
    for (int i = 0; i < 100; ++i) {
        const double a = i / 99.0;
        EXPECT_LE(std::abs(born.evaluate(a) - power2.evaluate(a)), 1e-15);
        EXPECT_LE(std::abs(born.evaluate(a) - affine.evaluate(a)), 1e-15);
    }
    EXPECT_TRUE(is_born_equivalent(power2));
    EXPECT_TRUE(is_born_equivalent(affine));
    EXPECT_FALSE(is_born_equivalent(ProbabilityRule::affine(1.0, 0.1)));
}

TEST(Evaluate, endpoints_finite_for_every_kind) {
    for (const char* name : {"born", "power:0.3", "power:7", "affine:-3:2", "affine:1e6:-1e6"}) {
        const auto rule = ProbabilityRule::parse(name);
        EXPECT_TRUE(std::isfinite(rule.evaluate(0.0))) << name;
        EXPECT_TRUE(std::isfinite(rule.evaluate(1.0))) << name;
    }
}

TEST(RuleNames, parse_and_print_round_trip) {
    for (const char* name : {"born", "power:1", "power:0.5", "power:2.75", "affine:1:0.1", "affine:-1:1",
                             "affine:0.30000000000000004:-2.5", "renorm:born", "renorm:power:4",
                             "renorm:renorm:affine:2:-0.5"}) {
        const ProbabilityRule rule = ProbabilityRule::parse(name);
        EXPECT_EQ(rule.name(), name);
        EXPECT_EQ(ProbabilityRule::parse(rule.name()).name(), rule.name());
    }
    EXPECT_EQ(ProbabilityRule::parse("power:1.0").name(), "power:1");
}

TEST(RuleNames, rejects_malformed) {
    for (const char* name : {"", "Born", "power", "power:", "power:x", "power:-1", "power:0", "power:1:2",
                             "affine:1", "affine:1:", "affine:a:b", "renorm:", "renorm:nope", "power:inf"}) {
        EXPECT_THROW(ProbabilityRule::parse(name), RuleError) << name;
    }
}

TEST(NormalizationSum, born_is_one_on_the_orthant) {
    Rng rng(1);
    for (std::size_t d = 2; d <= 8; ++d) {
        std::vector<double> v(d);
        for (auto& x : v) x = std::abs(rng.normal());
        EXPECT_NEAR(normalization_sum(ProbabilityRule::born(), ModulusVector::normalized(v)), 1.0, 1e-12);
    }
}

TEST(NormalizationSum, power_rules_at_symmetric_point) {
    const ModulusVector sym({kHalf, kHalf});
    EXPECT_NEAR(normalization_sum(ProbabilityRule::power(1), sym), 1.41421, 5e-6);
    EXPECT_NEAR(normalization_sum(ProbabilityRule::power(1), sym), 2.0 * kHalf, 1e-15);
    EXPECT_NEAR(normalization_sum(ProbabilityRule::power(4), sym), 2.0 * std::pow(kHalf, 4), 1e-15);
    EXPECT_NEAR(normalization_sum(ProbabilityRule::power(4), sym), 0.5, 1e-15);
}

TEST(NormalizationSum, renormalized_sums_to_one_exactly) {
    const auto rule = ProbabilityRule::renormalized(ProbabilityRule::power(1));
    EXPECT_EQ(normalization_sum(rule, ModulusVector({0.6, 0.8})), 1.0);
    const auto p = rule.probabilities(ModulusVector({0.6, 0.8}));
    EXPECT_NEAR(p[0], 0.6 / 1.4, 1e-15);
    EXPECT_NEAR(p[0] + p[1], 1.0, 1e-15);
}

TEST(DefectScan, born_defect_is_numerical_noise) {
    const auto report = defect_scan(ProbabilityRule::born(), 3, 1000, 5);
    EXPECT_LE(report.max_defect, 1e-12);
    EXPECT_EQ(report.trials, 1000u);
    EXPECT_EQ(report.rule, "born");
}

TEST(DefectScan, linear_rule_approaches_symmetric_supremum) {
    const auto report = defect_scan(ProbabilityRule::power(1), 2, 1000, 5);
    EXPECT_GE(report.max_defect, 0.41);
    EXPECT_LE(report.max_defect, std::sqrt(2.0) - 1.0 + 1e-15);
    EXPECT_NEAR(report.argmax_state[0], kHalf, 0.05);
    EXPECT_NEAR(report.argmax_state[1], kHalf, 0.05);
}

TEST(DefectScan, affine_defect_is_constant) {
    const auto report = defect_scan(ProbabilityRule::affine(1.0, 0.1), 3, 500, 9);
    for (double defect : report.defects) EXPECT_NEAR(defect, 0.3, 1e-12);
}

TEST(DefectScan, affine_defect_matches_lambda_plus_d_mu_minus_one) {
    Rng rng(31);
    for (int t = 0; t < 20; ++t) {
        const double lambda = rng.uniform(-2.0, 2.0);
        const double mu = rng.uniform(-0.5, 0.5);
        const std::size_t d = 2 + static_cast<std::size_t>(rng.uniform() * 7);
        const auto report = defect_scan(ProbabilityRule::affine(lambda, mu), d, 200, t);
        for (double defect : report.defects) EXPECT_NEAR(defect, std::abs(lambda + d * mu - 1.0), 1e-12);
    }
}

TEST(DefectScan, non_quadratic_powers_are_falsified_at_d2) {
    for (double p : {0.5, 1.0, 1.5, 3.0, 4.0, 6.0}) {
        const auto report = defect_scan(ProbabilityRule::power(p), 2, 100, 17);
        EXPECT_GE(report.max_defect, 0.05) << p;
        const double symmetric = std::abs(normalization_sum(ProbabilityRule::power(p), ModulusVector({kHalf, kHalf})) - 1.0);
        EXPECT_NEAR(symmetric, std::abs(std::pow(2.0, 1.0 - p / 2.0) - 1.0), 1e-10) << p;
    }
}

TEST(DefectScan, report_statistics_are_ordered) {
    for (const char* name : {"born", "power:1", "power:3", "affine:0.5:0.25", "renorm:power:1"}) {
        const auto report = defect_scan(ProbabilityRule::parse(name), 4, 100, 3);
        EXPECT_GE(report.max_defect, report.mean_defect);
        EXPECT_GE(report.mean_defect, 0.0);
    }
}

TEST(DefectScan, renormalized_rules_evade_the_defect_test) {
    const auto report = defect_scan(ProbabilityRule::parse("renorm:power:1"), 3, 100, 3);
    EXPECT_EQ(report.max_defect, 0.0);
}

TEST(DefectScan, deterministic_and_thread_independent) {
    const auto rule = ProbabilityRule::power(3);
    const auto a = defect_scan(rule, 5, 300, 42, 1);
    const auto b = defect_scan(rule, 5, 300, 42, 1);
    const auto c = defect_scan(rule, 5, 300, 42, 4);
    EXPECT_EQ(a.defects, b.defects);
    EXPECT_EQ(a.defects, c.defects);
    EXPECT_EQ(a.argmax_state, c.argmax_state);
    EXPECT_EQ(a.mean_defect, c.mean_defect);
    EXPECT_NE(a.defects, defect_scan(rule, 5, 300, 43, 1).defects);
}

TEST(DefectScan, requires_trials) { EXPECT_THROW(defect_scan(ProbabilityRule::born(), 2, 0, 0), DomainError); }
