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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <system_error>

#include "bornlab/errors.hpp"
#include "bornlab/parallel.hpp"
#include "bornlab/quantum.hpp"
#include "bornlab/tolerances.hpp"

namespace bornlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string format_number(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

double parse_number(std::string_view text, std::string_view whole) {
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw RuleError("bad number '" + std::string(text) + "' in rule '" + std::string(whole) + "'");
    }
    return value;
}

}  // namespace

ProbabilityRule ProbabilityRule::born() { return ProbabilityRule(rule_kind::Born{}); }

ProbabilityRule ProbabilityRule::power(double exponent) {
    if (!(exponent > 0.0) || !std::isfinite(exponent)) {
        throw DomainError("power rule exponent must be positive and finite");
    }
    return ProbabilityRule(rule_kind::Power{exponent});
}

ProbabilityRule ProbabilityRule::affine(double lambda, double mu) {
    if (!std::isfinite(lambda) || !std::isfinite(mu)) throw DomainError("affine rule coefficients must be finite");
    return ProbabilityRule(rule_kind::Affine{lambda, mu});
}

ProbabilityRule ProbabilityRule::renormalized(ProbabilityRule base) {
    return ProbabilityRule(rule_kind::Renormalized{std::make_shared<const ProbabilityRule>(std::move(base))});
}

ProbabilityRule ProbabilityRule::parse(std::string_view name) {
    if (name == "born") return born();
    if (name.starts_with("power:")) {
        const double p = parse_number(name.substr(6), name);
        if (!(p > 0.0)) throw RuleError("power rule exponent must be positive in '" + std::string(name) + "'");
        return power(p);
    }
    if (name.starts_with("affine:")) {
        const std::string_view rest = name.substr(7);
        // The separator is the first ':' that is not a leading sign position.
        const auto sep = rest.find(':', 1);
        if (sep == std::string_view::npos) throw RuleError("affine rule needs 'affine:<lambda>:<mu>'");
        return affine(parse_number(rest.substr(0, sep), name), parse_number(rest.substr(sep + 1), name));
    }
    if (name.starts_with("renorm:")) return renormalized(parse(name.substr(7)));
    throw RuleError("unknown rule '" + std::string(name) + "'");
}

std::string ProbabilityRule::name() const {
    return std::visit(overloaded{
                          [](const rule_kind::Born&) -> std::string { return "born"; },
                          [](const rule_kind::Power& r) { return "power:" + format_number(r.exponent); },
                          [](const rule_kind::Affine& r) {
                              return "affine:" + format_number(r.lambda) + ":" + format_number(r.mu);
                          },
                          [](const rule_kind::Renormalized& r) { return "renorm:" + r.base->name(); },
                      },
                      kind_);
}

bool ProbabilityRule::is_renormalized() const { return std::holds_alternative<rule_kind::Renormalized>(kind_); }

double ProbabilityRule::evaluate(double a) const {
    if (!(a >= -tol::kDomainSlack && a <= 1.0 + tol::kDomainSlack)) {
        throw DomainError("rule argument " + std::to_string(a) + " outside [0, 1]");
    }
    const double x = std::clamp(a, 0.0, 1.0);
    return std::visit(overloaded{
                          [&](const rule_kind::Born&) { return x * x; },
                          [&](const rule_kind::Power& r) { return std::pow(x, r.exponent); },
                          [&](const rule_kind::Affine& r) { return r.lambda * x * x + r.mu; },
                          [&](const rule_kind::Renormalized&) -> double {
                              throw RuleError("renormalized rules depend on every modulus; use probabilities()");
                          },
                      },
                      kind_);
}

std::function<double(double)> ProbabilityRule::function() const {
    if (is_renormalized()) throw RuleError("renormalized rules have no single-modulus function");
    return [rule = *this](double a) { return rule.evaluate(a); };
}

std::vector<double> ProbabilityRule::probabilities(const ModulusVector& a) const {
    if (const auto* r = std::get_if<rule_kind::Renormalized>(&kind_)) {
        std::vector<double> p = r->base->probabilities(a);
        const double sum = std::accumulate(p.begin(), p.end(), 0.0);
        if (!(sum > 0.0)) throw DomainError("renormalized rule '" + name() + "' has a non-positive normalization");
        for (double& x : p) x /= sum;
        return p;
    }
    std::vector<double> p(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) p[i] = evaluate(a[i]);
    return p;
}

bool is_born_equivalent(const ProbabilityRule& rule) {
    return std::visit(overloaded{
                          [](const rule_kind::Born&) { return true; },
                          [](const rule_kind::Power& r) { return r.exponent == 2.0; },
                          [](const rule_kind::Affine& r) { return r.lambda == 1.0 && r.mu == 0.0; },
                          [](const rule_kind::Renormalized& r) { return is_born_equivalent(*r.base); },
                      },
                      rule.kind());
}

double normalization_sum(const ProbabilityRule& rule, const ModulusVector& a) {
    if (rule.is_renormalized()) return 1.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) sum += rule.evaluate(a[i]);
    return sum;
}

NormalizationReport defect_scan(const ProbabilityRule& rule, std::size_t dim, std::size_t trials,
                                std::uint64_t seed, unsigned threads) {
    if (trials == 0) throw DomainError("defect_scan requires at least one trial");
    std::vector<double> defects(trials);
    std::vector<std::optional<ModulusVector>> states(trials);
    parallel_for(trials, threads, [&](std::size_t i) {
        Rng rng = Rng::stream(seed, i);
        ModulusVector a = haar_moduli(dim, rng);
        defects[i] = std::abs(normalization_sum(rule, a) - 1.0);
        states[i] = std::move(a);
    });

    std::size_t argmax = 0;
    double total = 0.0;
    for (std::size_t i = 0; i < trials; ++i) {
        total += defects[i];
        if (defects[i] > defects[argmax]) argmax = i;
    }
    NormalizationReport report;
    report.rule = rule.name();
    report.dim = dim;
    report.trials = trials;
    report.max_defect = defects[argmax];
    report.mean_defect = total / static_cast<double>(trials);
    report.argmax_state = *states[argmax];
    report.seed = seed;
    report.defects = std::move(defects);
    return report;
}

}  // namespace bornlab
