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

#include "bornlab/commands.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"

#include "bornlab/invariance.hpp"
#include "bornlab/linalg.hpp"
#include "bornlab/parallel.hpp"
#include "bornlab/quantum.hpp"
#include "bornlab/rng.hpp"
#include "bornlab/rules.hpp"
#include "bornlab/variational.hpp"

namespace bornlab::cli {

namespace {

// Stream families; each command draws from derive_seed(seed, tag, d).
enum class Tag : std::uint64_t {
    kDefect = 1,
    kObservableNorm,
    kIndependencePairs,
    kIndependenceDraws,
    kUnobserved,
    kStationarity,
    kClosedForm,
    kRecover,
    kSpin1,
    kSample,
};

std::uint64_t derive_seed(std::uint64_t seed, Tag tag, std::uint64_t sub = 0) {
    return mix64(mix64(seed ^ mix64(static_cast<std::uint64_t>(tag))) + sub);
}

constexpr std::size_t kVerifyPairs = 20;
constexpr std::size_t kClosedFormSamples = 10000;
constexpr std::size_t kRepeats = 100;
constexpr double kSigmaBand = 3.0;

std::vector<std::size_t> range_dims(std::size_t lo, std::size_t hi) {
    std::vector<std::size_t> dims;
    for (std::size_t d = lo; d <= hi; ++d) dims.push_back(d);
    return dims;
}

json to_json(const ModulusVector& a) { return json(a.vector()); }

template <typename Fn>
Report timed(const RunConfig& config, Fn&& body) {
    const auto start = std::chrono::steady_clock::now();
    Report report;
    report.command = config.command;
    report.config = config.to_json();
    body(report);
    const auto stop = std::chrono::steady_clock::now();
    report.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    return report;
}

ProbabilityRule parse_rule(const std::string& name) {
    try {
        return ProbabilityRule::parse(name);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

}  // namespace

json RunConfig::to_json() const {
    json j;
    j["command"] = command;
    j["dims"] = dims;
    j["trials"] = trials;
    j["shots"] = shots;
    j["draws"] = draws;
    j["rule"] = rule;
    j["seed"] = seed;
    j["tol_defect"] = tol_defect;
    j["tol_spread"] = tol_spread;
    j["format"] = format;
    j["out"] = out ? json(*out) : json(nullptr);
    j["threads"] = threads;
    j["state"] = state ? json(*state) : json(nullptr);
    return j;
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"verify-born", "falsify",  "independence", "recover",
                                                   "stationarity", "spin1", "sample"};
    return names;
}

RunConfig default_config(std::string_view command) {
    RunConfig c;
    c.command = std::string(command);
    if (command == "verify-born") {
        c.dims = range_dims(2, 8);
        c.trials = 10000;
    } else if (command == "falsify") {
        c.dims = {2};
        c.trials = 100;
        c.rule = "power:1";
    } else if (command == "independence") {
        c.dims = range_dims(2, 6);
        c.trials = 20;
    } else if (command == "recover") {
        c.dims = {2, 3};
        c.trials = 500;
    } else if (command == "stationarity") {
        c.dims = range_dims(2, 8);
        c.trials = 1000;
    } else if (command == "spin1") {
        c.dims = {3};
        c.trials = 1000;
    } else if (command == "sample") {
        c.dims = {3};
        c.trials = 10;
    } else {
        throw UsageError("unknown command '" + std::string(command) + "'");
    }
    return c;
}

void validate(const RunConfig& c) {
    if (std::find(command_names().begin(), command_names().end(), c.command) == command_names().end()) {
        throw UsageError("unknown command '" + c.command + "'");
    }
    if (c.dims.empty()) throw UsageError("at least one dimension is required");
    for (std::size_t d : c.dims) {
        if (d < tol::kMinDim || d > tol::kMaxDim) {
            throw UsageError("dimension " + std::to_string(d) + " outside [2, 16]");
        }
    }
    if (c.command == "spin1" && (c.dims.size() != 1 || c.dims[0] != 3)) {
        throw UsageError("spin1 is defined in dimension 3 only");
    }
    if (c.trials < 1) throw UsageError("--trials must be >= 1");
    if (c.command == "recover" && c.trials < 40) throw UsageError("recover needs --trials >= 40 samples per dimension");
    if (c.shots < 1) throw UsageError("--shots must be >= 1");
    if (c.draws < 2) throw UsageError("--draws must be >= 2");
    if (c.threads < 1) throw UsageError("--threads must be >= 1");
    if (!(c.tol_defect >= 0.0) || !(c.tol_spread >= 0.0)) throw UsageError("tolerances must be non-negative");
    if (c.format != "json" && c.format != "csv") throw UsageError("--format must be json or csv");
    if (c.state) {
        if (c.command != "sample") throw UsageError("--state only applies to sample");
        if (c.state->size() < tol::kMinDim || c.state->size() > tol::kMaxDim) {
            throw UsageError("--state needs between 2 and 16 amplitudes");
        }
        double n2 = 0.0;
        for (double x : *c.state) n2 += x * x;
        if (!(n2 > 0.0) || !std::isfinite(n2)) throw UsageError("--state must be a nonzero finite vector");
    }
    parse_rule(c.rule);
}

json Report::to_json() const {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["config"] = config;
    j["results"] = results;
    j["pass"] = pass;
    j["runtime_ms"] = runtime_ms;
    return j;
}

std::string Report::to_csv() const {
    std::string out = "index,d,k,value\n";
    char buf[64];
    for (const auto& row : series) {
        std::snprintf(buf, sizeof(buf), "%.17g", row.value);
        out += std::to_string(row.index) + "," + std::to_string(row.d) + "," + std::to_string(row.k) + "," + buf +
               "\n";
    }
    return out;
}

// verify-born: Born defect scan, Born normalization over random observables,
// phase invariance and observable independence at every dimension.
Report cmd_verify_born(const RunConfig& config) {
    validate(config);
    return timed(config, [&](Report& report) {
        const ProbabilityRule born = ProbabilityRule::born();
        json per_dim = json::array();
        bool pass = true;
        for (std::size_t d : config.dims) {
            const NormalizationReport defects =
                defect_scan(born, d, config.trials, derive_seed(config.seed, Tag::kDefect, d), config.threads);

            std::vector<double> norm_dev(config.trials);
            std::vector<double> phase_dev(config.trials);
            const std::uint64_t norm_seed = derive_seed(config.seed, Tag::kObservableNorm, d);
            parallel_for(config.trials, config.threads, [&](std::size_t i) {
                Rng rng = Rng::stream(norm_seed, i);
                const StateVector psi = haar_state(d, rng);
                const Observable obs = random_observable(d, rng);
                const std::vector<double> p = born_probabilities(psi, obs);
                double sum = 0.0;
                for (double x : p) sum += x;
                norm_dev[i] = std::abs(sum - 1.0);

                // psi' = sum_i e^{i theta_i} alpha_i phi_i
                const ComplexVector alpha = expand(psi, obs);
                ComplexVector shifted(d, 0.0);
                for (std::size_t j = 0; j < d; ++j) {
                    const Complex a = alpha[j] * std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
                    for (std::size_t r = 0; r < d; ++r) shifted[r] += a * obs.eigenvector(j)[r];
                }
                const std::vector<double> q = probabilities(StateVector::normalized(shifted), obs, born);
                double dev = 0.0;
                for (std::size_t j = 0; j < d; ++j) dev = std::max(dev, std::abs(p[j] - q[j]));
                phase_dev[i] = dev;
            });

            double independence_spread = 0.0;
            const std::uint64_t pair_seed = derive_seed(config.seed, Tag::kIndependencePairs, d);
            for (std::size_t j = 0; j < kVerifyPairs; ++j) {
                Rng rng = Rng::stream(pair_seed, j);
                const StateVector psi = haar_state(d, rng);
                const StateVector phi = haar_state(d, rng);
                const InvarianceReport r = observable_independence_scan(
                    psi, phi, born, config.draws, derive_seed(pair_seed, Tag::kIndependenceDraws, j), config.threads);
                independence_spread = std::max(independence_spread, r.spread);
            }

            const double norm_max = *std::max_element(norm_dev.begin(), norm_dev.end());
            const double phase_max = *std::max_element(phase_dev.begin(), phase_dev.end());
            pass = pass && defects.max_defect <= config.tol_defect && norm_max <= config.tol_defect &&
                   phase_max <= config.tol_spread && independence_spread <= config.tol_spread;
            per_dim.push_back({{"d", d},
                               {"trials", config.trials},
                               {"max_defect", defects.max_defect},
                               {"mean_defect", defects.mean_defect},
                               {"argmax_state", to_json(defects.argmax_state)},
                               {"observable_normalization_max", norm_max},
                               {"phase_max_deviation", phase_max},
                               {"independence_pairs", kVerifyPairs},
                               {"independence_draws", config.draws},
                               {"independence_spread", independence_spread}});
            for (std::size_t i = 0; i < config.trials; ++i) report.series.push_back({i, d, 0, norm_dev[i]});
        }
        report.results = {{"thresholds", {{"defect", config.tol_defect}, {"spread", config.tol_spread}}},
                          {"per_dim", per_dim}};
        report.pass = pass;
    });
}

// falsify: normalization defect for plain rules; both independence scans for
// renormalized rules, probed at the uniform superposition with phi_k = e_0.
Report cmd_falsify(const RunConfig& config) {
    validate(config);
    const ProbabilityRule rule = parse_rule(config.rule);
    return timed(config, [&](Report& report) {
        json per_dim = json::array();
        bool falsified_any = false;
        for (std::size_t d : config.dims) {
            const NormalizationReport defects =
                defect_scan(rule, d, config.trials, derive_seed(config.seed, Tag::kDefect, d), config.threads);
            json falsified_by = json::array();
            json independence = nullptr;
            if (rule.is_renormalized()) {
                const ModulusVector probe = ModulusVector::uniform(d);
                ComplexVector probe_amps(probe.values().begin(), probe.values().end());
                const StateVector psi(probe_amps);
                const StateVector phi = StateVector::basis(d, 0);
                const InvarianceReport observed = observable_independence_scan(
                    psi, phi, rule, config.draws, derive_seed(config.seed, Tag::kIndependenceDraws, d),
                    config.threads);
                const InvarianceReport unobserved = unobserved_independence_scan(
                    probe, 0, rule, config.draws, derive_seed(config.seed, Tag::kUnobserved, d), config.threads);
                if (observed.spread > config.tol_spread) falsified_by.push_back("observable_independence");
                if (unobserved.spread > config.tol_spread) falsified_by.push_back("unobserved_independence");
                const auto witness = [](const InvarianceReport& r) {
                    const auto [lo, hi] = std::minmax_element(r.p_values.begin(), r.p_values.end());
                    return json{{"min_draw", lo - r.p_values.begin()}, {"max_draw", hi - r.p_values.begin()}};
                };
                independence = {{"probe_state", to_json(probe)},
                                {"k", 0},
                                {"draws", config.draws},
                                {"observable_spread", observed.spread},
                                {"observable_witness", witness(observed)},
                                {"unobserved_spread", unobserved.spread},
                                {"unobserved_witness", witness(unobserved)}};
                for (std::size_t i = 0; i < observed.p_values.size(); ++i)
                    report.series.push_back({i, d, observed.outcome_indices[i], observed.p_values[i]});
            } else {
                if (defects.max_defect > config.tol_defect) falsified_by.push_back("normalization");
                for (std::size_t i = 0; i < defects.defects.size(); ++i)
                    report.series.push_back({i, d, 0, defects.defects[i]});
            }
            const double symmetric = std::abs(normalization_sum(rule, ModulusVector::uniform(d)) - 1.0);
            falsified_any = falsified_any || !falsified_by.empty();
            per_dim.push_back({{"d", d},
                               {"normalization",
                                {{"trials", config.trials},
                                 {"max_defect", defects.max_defect},
                                 {"mean_defect", defects.mean_defect},
                                 {"witness", to_json(defects.argmax_state)},
                                 {"symmetric_defect", symmetric},
                                 {"applies", !rule.is_renormalized()}}},
                               {"independence", independence},
                               {"falsified_by", falsified_by}});
        }
        report.results = {{"rule", rule.name()},
                          {"thresholds", {{"defect", config.tol_defect}, {"spread", config.tol_spread}}},
                          {"per_dim", per_dim}};
        report.pass = !falsified_any;
    });
}

// independence: `trials` random (psi, phi_k) pairs per dimension, each scanned
// over `draws` observables, plus an unobserved-modulus scan per pair.
Report cmd_independence(const RunConfig& config) {
    validate(config);
    const ProbabilityRule rule = parse_rule(config.rule);
    return timed(config, [&](Report& report) {
        json per_dim = json::array();
        bool pass = true;
        std::size_t row = 0;
        for (std::size_t d : config.dims) {
            const std::uint64_t pair_seed = derive_seed(config.seed, Tag::kIndependencePairs, d);
            double observed_max = 0.0;
            double unobserved_max = 0.0;
            for (std::size_t j = 0; j < config.trials; ++j) {
                Rng rng = Rng::stream(pair_seed, j);
                const StateVector psi = haar_state(d, rng);
                const StateVector phi = haar_state(d, rng);
                const ModulusVector a = haar_moduli(d, rng);
                const std::size_t k = j % d;
                const InvarianceReport observed = observable_independence_scan(
                    psi, phi, rule, config.draws, derive_seed(pair_seed, Tag::kIndependenceDraws, j), config.threads);
                const InvarianceReport unobserved = unobserved_independence_scan(
                    a, k, rule, config.draws, derive_seed(pair_seed, Tag::kUnobserved, j), config.threads);
                observed_max = std::max(observed_max, observed.spread);
                unobserved_max = std::max(unobserved_max, unobserved.spread);
                report.series.push_back({row++, d, k, observed.spread});
            }
            pass = pass && observed_max <= config.tol_spread && unobserved_max <= config.tol_spread;
            per_dim.push_back({{"d", d},
                               {"pairs", config.trials},
                               {"draws", config.draws},
                               {"observable_spread_max", observed_max},
                               {"unobserved_spread_max", unobserved_max}});
        }
        report.results = {{"rule", rule.name()}, {"thresholds", {{"spread", config.tol_spread}}}, {"per_dim", per_dim}};
        report.pass = pass;
    });
}

Report cmd_recover(const RunConfig& config) {
    validate(config);
    return timed(config, [&](Report& report) {
        const RecoveryResult r =
            recover_rule(config.dims, config.trials, derive_seed(config.seed, Tag::kRecover), config.threads);
        const std::array<double, 4> target = {0.0, 1.0, 0.0, 0.0};
        double err = 0.0;
        for (std::size_t n = 0; n < 4; ++n) {
            err = std::max(err, std::abs(r.candidate.coefficients[n] - target[n]));
            report.series.push_back({n, 0, n + 1, r.candidate.coefficients[n]});
        }
        const std::set<std::size_t> distinct(config.dims.begin(), config.dims.end());
        const double coef_tol = distinct.size() > 1 ? tol::kRecoveryMixed : tol::kRecoverySingleDim;
        report.results = {{"dims", config.dims},
                          {"samples_per_dim", config.trials},
                          {"sample_count", r.sample_count},
                          {"coefficients", r.candidate.coefficients},
                          {"target", target},
                          {"max_coefficient_error", err},
                          {"objective", r.objective_value},
                          {"thresholds", {{"coefficient", coef_tol}, {"objective", tol::kRecoveryObjective}}}};
        report.pass = err <= coef_tol && r.objective_value <= tol::kRecoveryObjective;
    });
}

Report cmd_stationarity(const RunConfig& config) {
    validate(config);
    return timed(config, [&](Report& report) {
        const ProbabilityRule born = ProbabilityRule::born();
        json per_dim = json::array();
        bool pass = true;
        for (std::size_t d : config.dims) {
            std::vector<double> single(config.trials);
            std::vector<double> cross(config.trials);
            const std::uint64_t seed = derive_seed(config.seed, Tag::kStationarity, d);
            parallel_for(config.trials, config.threads, [&](std::size_t i) {
                Rng rng = Rng::stream(seed, i);
                const ModulusVector a = haar_moduli(d, rng);
                const std::size_t k = i % d;
                single[i] = single_modulus_residual(born, a, 1.0).max_abs;
                cross[i] = cross_residual([k](std::span<const double> x) { return x[k] * x[k]; }, a, k, 0.0).max_abs;
            });
            const double single_modulus_max = *std::max_element(single.begin(), single.end());
            const double cross_partial_max = *std::max_element(cross.begin(), cross.end());
            pass = pass && single_modulus_max <= tol::kStationarity && cross_partial_max <= tol::kStationarity;
            per_dim.push_back({{"d", d}, {"points", config.trials}, {"single_modulus_max", single_modulus_max}, {"cross_partial_max", cross_partial_max}});
            for (std::size_t i = 0; i < config.trials; ++i) report.series.push_back({i, d, i % d, single[i]});
        }
        const ClosedFormCheck cf = verify_closed_form(kClosedFormSamples, derive_seed(config.seed, Tag::kClosedForm));
        pass = pass && cf.single_modulus.lambda == 1.0 && cf.single_modulus.mu == 0.0 &&
               cf.complement.lambda == -1.0 && cf.complement.mu == 1.0 &&
               cf.single_modulus_deviation <= tol::kClosedForm && cf.complement_deviation <= tol::kClosedForm;
        report.results = {
            {"thresholds", {{"residual", tol::kStationarity}, {"closed_form", tol::kClosedForm}}},
            {"per_dim", per_dim},
            {"closed_form",
             {{"samples", cf.samples},
              {"single_modulus", {{"lambda", cf.single_modulus.lambda}, {"mu", cf.single_modulus.mu}}},
              {"complement", {{"lambda", cf.complement.lambda}, {"mu", cf.complement.mu}}},
              {"single_modulus_deviation", cf.single_modulus_deviation},
              {"complement_deviation", cf.complement_deviation}}}};
        report.pass = pass;
    });
}

Report cmd_spin1(const RunConfig& config) {
    validate(config);
    return timed(config, [&](Report& report) {
        const Observable jz = spin1_jz();
        const Observable q = spin1_jx2_minus_jy2();
        const StateVector zero = StateVector::basis(3, 1);
        const std::size_t kz = matching_outcome(jz, zero.amplitudes());
        const std::size_t kq = matching_outcome(q, zero.amplitudes());

        double residual = 0.0;
        for (const Observable* obs : {&jz, &q}) {
            const ComplexVector m0 = obs->matrix().matrix() * zero.amplitudes();
            const Complex w = inner(zero.amplitudes(), m0);
            for (std::size_t r = 0; r < 3; ++r) residual = std::max(residual, std::abs(m0[r] - w * zero[r]));
        }

        std::vector<double> diff(config.trials);
        const std::uint64_t seed = derive_seed(config.seed, Tag::kSpin1);
        parallel_for(config.trials, config.threads, [&](std::size_t i) {
            Rng rng = Rng::stream(seed, i);
            const StateVector psi = haar_state(3, rng);
            diff[i] = std::abs(born_probabilities(psi, jz)[kz] - born_probabilities(psi, q)[kq]);
        });
        const double max_diff = *std::max_element(diff.begin(), diff.end());
        for (std::size_t i = 0; i < diff.size(); ++i) report.series.push_back({i, 3, kz, diff[i]});

        json matrix = json::array();
        for (std::size_t r = 0; r < 3; ++r) {
            json row = json::array();
            for (std::size_t c = 0; c < 3; ++c) row.push_back(q.matrix().matrix()(r, c).real());
            matrix.push_back(row);
        }
        report.results = {
            {"trials", config.trials},
            {"jz_eigenvalues", std::vector<double>(jz.eigenvalues().begin(), jz.eigenvalues().end())},
            {"jx2_minus_jy2_eigenvalues", std::vector<double>(q.eigenvalues().begin(), q.eigenvalues().end())},
            {"jx2_minus_jy2", matrix},
            {"zero_state_outcome", {{"jz", kz}, {"jx2_minus_jy2", kq}}},
            {"shared_eigenvector_residual", residual},
            {"max_probability_difference", max_diff},
            {"thresholds", {{"probability", config.tol_spread}, {"eigenvector_residual", tol::kEigenResidual}}}};
        report.pass = max_diff <= config.tol_spread && residual <= tol::kEigenResidual;
    });
}

Report cmd_sample(const RunConfig& config) {
    validate(config);
    return timed(config, [&](Report& report) {
        struct Pair {
            std::size_t d;
            std::optional<StateVector> psi;
            std::optional<Observable> obs;
        };
        std::vector<Pair> pairs;
        const std::uint64_t seed = derive_seed(config.seed, Tag::kSample);
        if (config.state) {
            const std::size_t d = config.state->size();
            ComplexVector amps(config.state->begin(), config.state->end());
            std::vector<double> ladder(d);
            for (std::size_t i = 0; i < d; ++i) ladder[i] = static_cast<double>(i + 1);
            pairs.push_back({d, StateVector::normalized(amps),
                             Observable(HermitianMatrix(ComplexMatrix::diagonal(ladder)), "computational basis")});
        } else {
            std::size_t idx = 0;
            for (std::size_t d : config.dims) {
                for (std::size_t j = 0; j < config.trials; ++j, ++idx) {
                    Rng rng = Rng::stream(seed, idx);
                    pairs.push_back({d, haar_state(d, rng), random_observable(d, rng)});
                }
            }
        }

        struct Outcome {
            std::vector<double> p;
            std::vector<double> freq;
            std::vector<double> sigma;
            double max_abs_z = 0.0;
            bool within = true;
            std::size_t same = 0;
        };
        std::vector<Outcome> outcomes(pairs.size());
        const std::uint64_t shot_seed = derive_seed(seed, Tag::kSample, 1);
        parallel_for(pairs.size(), config.threads, [&](std::size_t j) {
            const Pair& pr = pairs[j];
            Rng rng = Rng::stream(shot_seed, j);
            Outcome& o = outcomes[j];
            o.p = born_probabilities(*pr.psi, *pr.obs);
            std::vector<std::size_t> counts(pr.d, 0);
            for (std::size_t s = 0; s < config.shots; ++s) ++counts[measure(*pr.psi, *pr.obs, rng).outcome_index];
            const double n = static_cast<double>(config.shots);
            for (std::size_t k = 0; k < pr.d; ++k) {
                const double f = static_cast<double>(counts[k]) / n;
                const double sigma = std::sqrt(o.p[k] * (1.0 - o.p[k]) / n);
                o.freq.push_back(f);
                o.sigma.push_back(sigma);
                const double dev = std::abs(f - o.p[k]);
                if (dev > kSigmaBand * sigma) o.within = false;
                if (sigma > 0.0) o.max_abs_z = std::max(o.max_abs_z, dev / sigma);
            }
            const MeasurementRecord first = measure(*pr.psi, *pr.obs, rng);
            for (std::size_t r = 0; r < kRepeats; ++r) {
                if (measure(first.post_state, *pr.obs, rng).outcome_index == first.outcome_index) ++o.same;
            }
        });

        json pairs_json = json::array();
        std::size_t same_total = 0;
        bool within = true;
        for (std::size_t j = 0; j < pairs.size(); ++j) {
            const Outcome& o = outcomes[j];
            pairs_json.push_back({{"d", pairs[j].d},
                                  {"probabilities", o.p},
                                  {"frequencies", o.freq},
                                  {"sigma", o.sigma},
                                  {"max_abs_z", o.max_abs_z}});
            same_total += o.same;
            within = within && o.within;
            for (std::size_t k = 0; k < o.freq.size(); ++k) report.series.push_back({j, pairs[j].d, k, o.freq[k]});
        }
        const std::size_t repeats = kRepeats * pairs.size();
        report.results = {{"shots", config.shots},
                          {"pairs", pairs_json},
                          {"repeatability", {{"repeats", repeats}, {"same_outcome", same_total}}},
                          {"thresholds", {{"sigma_band", kSigmaBand}}}};
        report.pass = within && same_total == repeats;
    });
}

Report run_command(const RunConfig& config) {
    static const std::map<std::string, Report (*)(const RunConfig&)> table = {
        {"verify-born", &cmd_verify_born}, {"falsify", &cmd_falsify},         {"independence", &cmd_independence},
        {"recover", &cmd_recover},         {"stationarity", &cmd_stationarity}, {"spin1", &cmd_spin1},
        {"sample", &cmd_sample},
    };
    const auto it = table.find(config.command);
    if (it == table.end()) throw UsageError("unknown command '" + config.command + "'");
    return it->second(config);
}

namespace {

const std::map<std::string, std::set<std::string>>& results_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"verify-born", {"thresholds", "per_dim"}},
        {"falsify", {"rule", "thresholds", "per_dim"}},
        {"independence", {"rule", "thresholds", "per_dim"}},
        {"recover",
         {"dims", "samples_per_dim", "sample_count", "coefficients", "target", "max_coefficient_error", "objective",
          "thresholds"}},
        {"stationarity", {"thresholds", "per_dim", "closed_form"}},
        {"spin1",
         {"trials", "jz_eigenvalues", "jx2_minus_jy2_eigenvalues", "jx2_minus_jy2", "zero_state_outcome",
          "shared_eigenvector_residual", "max_probability_difference", "thresholds"}},
        {"sample", {"shots", "pairs", "repeatability", "thresholds"}},
    };
    return keys;
}

std::set<std::string> keys_of(const json& j) {
    std::set<std::string> out;
    for (const auto& [k, v] : j.items()) out.insert(k);
    return out;
}

}  // namespace

void validate_report_schema(const json& report) {
    static const std::set<std::string> top = {"schema_version", "command", "config", "results", "pass", "runtime_ms"};
    if (!report.is_object() || keys_of(report) != top) throw std::runtime_error("report top-level keys do not match schema");
    if (report["schema_version"] != kSchemaVersion) throw std::runtime_error("unsupported schema_version");
    const auto it = results_keys().find(report["command"].get<std::string>());
    if (it == results_keys().end()) throw std::runtime_error("unknown command in report");
    if (!report["results"].is_object() || keys_of(report["results"]) != it->second) {
        throw std::runtime_error("results keys do not match schema for " + it->first);
    }
}

bool recheck_pass(const json& report) {
    const std::string command = report.at("command");
    const json& r = report.at("results");
    const json& t = r.at("thresholds");
    if (command == "verify-born") {
        const double defect = t.at("defect");
        const double spread = t.at("spread");
        for (const auto& e : r.at("per_dim")) {
            if (e.at("max_defect").get<double>() > defect || e.at("observable_normalization_max").get<double>() > defect ||
                e.at("phase_max_deviation").get<double>() > spread || e.at("independence_spread").get<double>() > spread)
                return false;
        }
        return true;
    }
    if (command == "falsify") {
        const double defect = t.at("defect");
        const double spread = t.at("spread");
        for (const auto& e : r.at("per_dim")) {
            const json& n = e.at("normalization");
            if (n.at("applies").get<bool>() && n.at("max_defect").get<double>() > defect) return false;
            const json& ind = e.at("independence");
            if (!ind.is_null() && (ind.at("observable_spread").get<double>() > spread ||
                                   ind.at("unobserved_spread").get<double>() > spread))
                return false;
        }
        return true;
    }
    if (command == "independence") {
        const double spread = t.at("spread");
        for (const auto& e : r.at("per_dim")) {
            if (e.at("observable_spread_max").get<double>() > spread ||
                e.at("unobserved_spread_max").get<double>() > spread)
                return false;
        }
        return true;
    }
    if (command == "recover") {
        const auto c = r.at("coefficients").get<std::vector<double>>();
        const auto target = r.at("target").get<std::vector<double>>();
        double err = 0.0;
        for (std::size_t n = 0; n < c.size(); ++n) err = std::max(err, std::abs(c[n] - target[n]));
        return err <= t.at("coefficient").get<double>() && r.at("objective").get<double>() <= t.at("objective").get<double>();
    }
    if (command == "stationarity") {
        const double residual = t.at("residual");
        for (const auto& e : r.at("per_dim")) {
            if (e.at("single_modulus_max").get<double>() > residual || e.at("cross_partial_max").get<double>() > residual) return false;
        }
        const json& cf = r.at("closed_form");
        return cf.at("single_modulus").at("lambda") == 1.0 && cf.at("single_modulus").at("mu") == 0.0 &&
               cf.at("complement").at("lambda") == -1.0 && cf.at("complement").at("mu") == 1.0 &&
               cf.at("single_modulus_deviation").get<double>() <= t.at("closed_form").get<double>() &&
               cf.at("complement_deviation").get<double>() <= t.at("closed_form").get<double>();
    }
    if (command == "spin1") {
        return r.at("max_probability_difference").get<double>() <= t.at("probability").get<double>() &&
               r.at("shared_eigenvector_residual").get<double>() <= t.at("eigenvector_residual").get<double>();
    }
    if (command == "sample") {
        const double band = t.at("sigma_band");
        for (const auto& pr : r.at("pairs")) {
            const auto p = pr.at("probabilities").get<std::vector<double>>();
            const auto f = pr.at("frequencies").get<std::vector<double>>();
            const auto s = pr.at("sigma").get<std::vector<double>>();
            for (std::size_t k = 0; k < p.size(); ++k)
                if (std::abs(f[k] - p[k]) > band * s[k]) return false;
        }
        return r.at("repeatability").at("same_outcome") == r.at("repeatability").at("repeats");
    }
    throw std::runtime_error("unknown command '" + command + "'");
}

std::vector<std::size_t> parse_dims(std::string_view text) {
    std::vector<std::size_t> dims;
    const auto parse_one = [&](std::string_view s) -> std::size_t {
        std::size_t value = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
        if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
            throw UsageError("bad dimension '" + std::string(s) + "'");
        }
        return value;
    };
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        const std::string_view item = text.substr(start, comma - start);
        const std::size_t dots = item.find("..");
        if (dots == std::string_view::npos) {
            dims.push_back(parse_one(item));
        } else {
            const std::size_t lo = parse_one(item.substr(0, dots));
            const std::size_t hi = parse_one(item.substr(dots + 2));
            if (hi < lo) throw UsageError("empty dimension range '" + std::string(item) + "'");
            for (std::size_t d = lo; d <= hi; ++d) dims.push_back(d);
        }
        start = comma + 1;
    }
    return dims;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"bornlab: numerical checks of the quadratic probability rule"};
    app.require_subcommand(1);

    struct Flags {
        std::optional<std::size_t> dim;
        std::optional<std::string> dims;
        std::optional<std::size_t> trials;
        std::optional<std::size_t> shots;
        std::optional<std::size_t> draws;
        std::optional<std::string> rule;
        std::uint64_t seed = 0;
        double tol_defect = tol::kDefect;
        double tol_spread = tol::kSpread;
        std::string format = "json";
        std::optional<std::string> out;
        unsigned threads = 1;
        std::optional<std::string> state;
    };
    std::map<std::string, Flags> flags;
    const std::map<std::string, std::string> help = {
        {"verify-born", "Born normalization, phase invariance and observable independence"},
        {"falsify", "Try to falsify a candidate probability rule"},
        {"independence", "Observable-independence scans for a rule"},
        {"recover", "Least-squares recovery of the stationary rule"},
        {"stationarity", "Lagrange stationarity residuals and closed-form fits"},
        {"spin1", "Spin-1 J_z vs J_x^2 - J_y^2 probability of |0>"},
        {"sample", "Monte-Carlo measurement frequencies and collapse repeatability"},
    };
    for (const auto& name : command_names()) {
        Flags& f = flags[name];
        CLI::App* sub = app.add_subcommand(name, help.at(name));
        sub->add_option("--dim", f.dim, "Single dimension");
        sub->add_option("--dims", f.dims, "Dimensions, e.g. 2,3 or 2..8");
        sub->add_option("--trials", f.trials, "Trials, samples or pairs (command-specific)");
        sub->add_option("--shots", f.shots, "Shots per pair (sample)");
        sub->add_option("--draws", f.draws, "Observables or rotations per scan");
        sub->add_option("--rule", f.rule, "born | power:<p> | affine:<lambda>:<mu> | renorm:<base>");
        sub->add_option("--seed", f.seed, "Master seed");
        sub->add_option("--tol-defect", f.tol_defect, "Normalization defect threshold");
        sub->add_option("--tol-spread", f.tol_spread, "Invariance spread threshold");
        sub->add_option("--format", f.format, "json or csv");
        sub->add_option("--out", f.out, "Output path (default stdout)");
        sub->add_option("--threads", f.threads, "Worker threads");
        sub->add_option("--state", f.state, "Real amplitudes for sample, e.g. 1,1");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        const std::string name = app.get_subcommands().front()->get_name();
        const Flags& f = flags.at(name);
        RunConfig config = default_config(name);
        if (f.dim && f.dims) throw UsageError("use either --dim or --dims");
        if (f.dim) config.dims = {*f.dim};
        if (f.dims) config.dims = parse_dims(*f.dims);
        if (f.trials) config.trials = *f.trials;
        if (f.shots) config.shots = *f.shots;
        if (f.draws) config.draws = *f.draws;
        if (f.rule) config.rule = *f.rule;
        config.seed = f.seed;
        config.tol_defect = f.tol_defect;
        config.tol_spread = f.tol_spread;
        config.format = f.format;
        config.out = f.out;
        config.threads = f.threads;
        if (f.state) {
            std::vector<double> amps;
            std::stringstream ss(*f.state);
            std::string item;
            while (std::getline(ss, item, ',')) {
                try {
                    std::size_t used = 0;
                    amps.push_back(std::stod(item, &used));
                    if (used != item.size()) throw std::invalid_argument(item);
                } catch (const std::exception&) {
                    throw UsageError("bad amplitude '" + item + "' in --state");
                }
            }
            config.state = amps;
            config.dims = {amps.size()};
        }

        const Report report = run_command(config);
        const std::string body = config.format == "csv" ? report.to_csv() : report.to_json().dump(2) + "\n";
        if (config.out) {
            std::ofstream file(*config.out, std::ios::binary);
            if (!file) throw UsageError("cannot open output file '" + *config.out + "'");
            file << body;
        } else {
            out << body;
        }
        return report.exit_code();
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace bornlab::cli
