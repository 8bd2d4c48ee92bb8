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

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bornlab/orthant.hpp"

namespace bornlab {

class ProbabilityRule;

namespace rule_kind {
/// f(a) = a^2
struct Born {};
/// f(a) = a^exponent, exponent > 0
struct Power {
    double exponent;
};
/// f(a) = lambda a^2 + mu
struct Affine {
    double lambda;
    double mu;
};
/// p_k = g(a_k) / sum_i g(a_i) for the base rule g.
struct Renormalized {
    std::shared_ptr<const ProbabilityRule> base;
};
}  // namespace rule_kind

/// Candidate probability rule p_k = f(a_k), optionally renormalized.
class ProbabilityRule {
   public:
    using Kind = std::variant<rule_kind::Born, rule_kind::Power, rule_kind::Affine, rule_kind::Renormalized>;

    static ProbabilityRule born();
    /// Throws DomainError unless exponent > 0 and finite.
    static ProbabilityRule power(double exponent);
    static ProbabilityRule affine(double lambda, double mu);
    static ProbabilityRule renormalized(ProbabilityRule base);

    /// Parses "born", "power:<p>", "affine:<lambda>:<mu>", "renorm:<base>".
    /// Throws RuleError on anything else.
    static ProbabilityRule parse(std::string_view name);
    /// Canonical name; parse(name()) reproduces the rule.
    std::string name() const;

    const Kind& kind() const { return kind_; }
    bool is_renormalized() const;

    /// f(a) for plain rules. Throws DomainError if a is outside
    /// [-tol::kDomainSlack, 1 + tol::kDomainSlack] and RuleError for
    /// renormalized rules, which have no single-modulus form.
    double evaluate(double a) const;

    /// Plain-function view of evaluate().
    std::function<double(double)> function() const;

    /// p_k for every k: f(a_k) entrywise, divided by the sum for renormalized rules.
    std::vector<double> probabilities(const ModulusVector& a) const;

   private:
    explicit ProbabilityRule(Kind kind) : kind_(std::move(kind)) {}
    Kind kind_;
};

/// True when the rule is the quadratic rule in any of its spellings.
bool is_born_equivalent(const ProbabilityRule& rule);

/// sum_i f(a_i); exactly 1 for renormalized rules.
double normalization_sum(const ProbabilityRule& rule, const ModulusVector& a);

struct NormalizationReport {
    std::string rule;
    std::size_t dim = 0;
    std::size_t trials = 0;
    double max_defect = 0.0;
    double mean_defect = 0.0;
    /// State attaining max_defect.
    ModulusVector argmax_state = ModulusVector::uniform(2);
    std::uint64_t seed = 0;
    /// |sum_i f(a_i) - 1| per trial, by trial index.
    std::vector<double> defects;
};

/// Draws `trials` Haar-random states of dimension `dim` (trial i uses stream
/// i of `seed`) and records |normalization_sum - 1|.
NormalizationReport defect_scan(const ProbabilityRule& rule, std::size_t dim, std::size_t trials,
                                std::uint64_t seed, unsigned threads = 1);

}  // namespace bornlab
