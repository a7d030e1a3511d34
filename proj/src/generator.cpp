#include "capmdp/generator.hpp"

#include "capmdp/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <sstream>

namespace capmdp {

namespace {

constexpr std::size_t kN = kChronicCareStates;

// Death and reward levels share one chain shape:
//   v2 >= v5 = v1 >= v4 = v0 >= v3.
// level k of a sorted-descending 4-vector feeds these states:
constexpr std::array<int, kN> kChainLevel{2, 1, 0, 3, 2, 1};

// Worsening arcs (from, to) and self-loops of each row.
constexpr std::array<std::array<int, 2>, 4> kWorsen{{{0, 1}, {1, 2}, {3, 4}, {4, 5}}};

std::array<double, 4> sorted_desc(Rng& rng, double lo, double hi) {
    std::array<double, 4> v{};
    for (double& x : v) x = rng.uniform(lo, hi);
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

struct Checker {
    const Scenario& s;
    double tol;
    std::optional<std::string> failed;

    void ge(double a, double b, const char* rule) {
        if (!failed && a < b - tol) failed = rule;
    }
    void eq(double a, double b, const char* rule) {
        if (!failed && std::abs(a - b) > tol) failed = rule;
    }
};

} // namespace

std::vector<std::string> chronic_care_labels() {
    return {"LS", "LM", "LC", "HS", "HM", "HC"};
}

std::optional<std::string> ChronicCareRules::first_violation(const Scenario& s,
                                                             double absorbing_reward) const {
    if (s.n != kN) return "state space must have 6 states";
    for (std::size_t i = 0; i < kN; ++i) {
        for (int a = 0; a < 2; ++a) {
            double sum = s.q(i, a);
            if (s.q(i, a) < 0.0) return "non-negative probabilities";
            for (std::size_t j = 0; j < kN; ++j) {
                if (s.p(i, a, j) < 0.0) return "non-negative probabilities";
                sum += s.p(i, a, j);
            }
            if (std::abs(sum - 1.0) > kProbabilityTolerance) return "rows sum to one";
        }
    }

    Checker c{s, tolerance, std::nullopt};
    for (int a = 0; a < 2; ++a) {
        c.ge(s.p(1, a, 2), s.p(0, a, 1), "T1 worse health worsens more");
        c.ge(s.p(4, a, 5), s.p(3, a, 4), "T1 worse health worsens more");
    }
    for (int a = 0; a < 2; ++a) {
        c.ge(s.p(0, a, 1), s.p(3, a, 4), "T2 higher awareness worsens less");
        c.ge(s.p(1, a, 2), s.p(4, a, 5), "T2 higher awareness worsens less");
    }
    for (auto [i, j] : kWorsen) c.ge(s.p(i, 0, j), s.p(i, 1, j), "T3 special care worsens less");
    for (int a = 0; a < 2; ++a) {
        c.eq(s.p(0, a, 3), s.p(1, a, 4), "T4 equal awareness gain");
        c.eq(s.p(1, a, 4), s.p(2, a, 5), "T4 equal awareness gain");
    }
    for (std::size_t i = 0; i < 3; ++i)
        c.ge(s.p(i, 1, i + 3), s.p(i, 0, i + 3), "T4 special care raises awareness");
    for (int a = 0; a < 2; ++a) {
        c.eq(s.p(3, a, 0), s.p(4, a, 1), "T5 equal awareness loss");
        c.eq(s.p(4, a, 1), s.p(5, a, 2), "T5 equal awareness loss");
    }
    for (std::size_t i = 3; i < 6; ++i)
        c.ge(s.p(i, 0, i - 3), s.p(i, 1, i - 3), "T5 special care keeps awareness");
    constexpr std::array<std::array<int, 2>, 8> diagonal{
        {{0, 4}, {1, 5}, {3, 1}, {4, 2}, {4, 0}, {5, 1}, {1, 3}, {2, 4}}};
    for (int a = 0; a < 2; ++a)
        for (auto [i, j] : diagonal) c.eq(s.p(i, a, j), 0.0, "T6 no diagonal moves");
    for (int a = 0; a < 2; ++a) {
        c.eq(s.p(0, a, 2), 0.0, "T7 no simple-to-complex jump");
        c.eq(s.p(3, a, 5), 0.0, "T7 no simple-to-complex jump");
    }
    constexpr std::array<std::array<int, 2>, 4> recovery{{{1, 0}, {2, 1}, {4, 3}, {5, 4}}};
    for (int a = 0; a < 2; ++a)
        for (auto [i, j] : recovery) c.eq(s.p(i, a, j), 0.0, "T8 no recovery");
    for (int a = 0; a < 2; ++a) {
        c.ge(s.q(2, a), s.q(5, a), "T9 death probability ordering");
        c.eq(s.q(5, a), s.q(1, a), "T9 death probability ordering");
        c.ge(s.q(1, a), s.q(4, a), "T9 death probability ordering");
        c.eq(s.q(4, a), s.q(0, a), "T9 death probability ordering");
        c.ge(s.q(0, a), s.q(3, a), "T9 death probability ordering");
    }
    for (std::size_t i = 0; i < kN; ++i) c.ge(s.q(i, 0), s.q(i, 1), "T10 special care lowers death");
    for (std::size_t i = 0; i < kN; ++i)
        for (int a = 0; a < 2; ++a) c.ge(death_cap, s.q(i, a), "T11 death probability cap");

    for (int a = 0; a < 2; ++a) {
        c.ge(s.reward(2, a), s.reward(5, a), "W1 reward ordering");
        c.eq(s.reward(5, a), s.reward(1, a), "W1 reward ordering");
        c.ge(s.reward(1, a), s.reward(4, a), "W1 reward ordering");
        c.eq(s.reward(4, a), s.reward(0, a), "W1 reward ordering");
        c.ge(s.reward(0, a), s.reward(3, a), "W1 reward ordering");
    }
    for (std::size_t i = 0; i < kN; ++i)
        c.ge(s.reward(i, 1), s.reward(i, 0), "W2 special care is more rewarding");
    for (std::size_t i = 0; i < kN; ++i)
        c.eq(s.R[i], (s.reward(i, 0) + s.reward(i, 1)) / 2.0, "W3 terminal reward is the action mean");
    for (std::size_t i = 0; i < kN; ++i) {
        for (int a = 0; a < 2; ++a) {
            c.ge(s.reward(i, a), reward_min, "W4 reward domain");
            c.ge(reward_max, s.reward(i, a), "W4 reward domain");
        }
    }
    c.eq(absorbing_reward, 0.0, "W4 reward domain");
    return c.failed;
}

Scenario sample_rule_satisfying_model(const ChronicCareRules& rules, Rng& rng) {
    for (int attempt = 0; attempt <= rules.max_retries; ++attempt) {
        Scenario s = Scenario::zeros(kN);

        // death: per-action level vectors, action 1 elementwise below action 0
        const auto qa = sorted_desc(rng, 0.0, rules.death_cap);
        const auto qb = sorted_desc(rng, 0.0, rules.death_cap);
        for (std::size_t i = 0; i < kN; ++i) {
            const int k = kChainLevel[i];
            s.q(i, 0) = std::max(qa[k], qb[k]);
            s.q(i, 1) = std::min(qa[k], qb[k]);
        }

        // awareness switches, shared across health levels
        const double ua = rng.uniform(0.0, rules.awareness_cap);
        const double ub = rng.uniform(0.0, rules.awareness_cap);
        const double da = rng.uniform(0.0, rules.awareness_cap);
        const double db = rng.uniform(0.0, rules.awareness_cap);
        for (std::size_t i = 0; i < 3; ++i) {
            s.p(i, 0, i + 3) = std::min(ua, ub);
            s.p(i, 1, i + 3) = std::max(ua, ub);
            s.p(i + 3, 0, i) = std::max(da, db);
            s.p(i + 3, 1, i) = std::min(da, db);
        }

        // worsening: w3 <= {w0, w4} <= w1, the middle pair in random order
        std::array<double, 2> w0{}, w1{}, w3{}, w4{};
        for (int draw = 0; draw < 2; ++draw) {
            const auto v = sorted_desc(rng, 0.0, rules.worsening_cap);
            const bool swap = rng.uniform() < 0.5;
            w1[draw] = v[0];
            w0[draw] = swap ? v[2] : v[1];
            w4[draw] = swap ? v[1] : v[2];
            w3[draw] = v[3];
        }
        const std::array<std::array<double, 2>*, 4> levels{&w0, &w1, &w3, &w4};
        for (std::size_t k = 0; k < kWorsen.size(); ++k) {
            const auto [i, j] = kWorsen[k];
            const auto& w = *levels[k];
            s.p(i, 0, j) = std::max(w[0], w[1]);
            s.p(i, 1, j) = std::min(w[0], w[1]);
        }

        // residual mass to the self-loop
        bool ok = true;
        for (std::size_t i = 0; i < kN && ok; ++i) {
            for (int a = 0; a < 2; ++a) {
                double other = s.q(i, a);
                for (std::size_t j = 0; j < kN; ++j)
                    if (j != i) other += s.p(i, a, j);
                s.p(i, a, i) = 1.0 - other;
                if (s.p(i, a, i) < 0.0) ok = false;
            }
        }

        // rewards: action 1 elementwise above action 0
        const auto ra = sorted_desc(rng, rules.reward_min, rules.reward_max);
        const auto rb = sorted_desc(rng, rules.reward_min, rules.reward_max);
        for (std::size_t i = 0; i < kN; ++i) {
            const int k = kChainLevel[i];
            s.reward(i, 0) = std::min(ra[k], rb[k]);
            s.reward(i, 1) = std::max(ra[k], rb[k]);
            s.R[i] = (s.reward(i, 0) + s.reward(i, 1)) / 2.0;
        }
        if (ok) return s;
    }
    throw RejectionLimitExceeded("no rule-satisfying model after " +
                                 std::to_string(rules.max_retries + 1) + " attempts");
}

NominalModel estimate_nominal(const ChronicCareRules& rules, std::size_t iterations, Rng& rng) {
    if (iterations < 1) throw ParameterError("Monte Carlo iteration count must be >= 1");
    Scenario mean = Scenario::zeros(kN);
    for (std::size_t k = 0; k < iterations; ++k) {
        const Scenario s = sample_rule_satisfying_model(rules, rng);
        for (std::size_t x = 0; x < s.P.size(); ++x) mean.P[x] += s.P[x];
        for (std::size_t x = 0; x < s.Q.size(); ++x) mean.Q[x] += s.Q[x];
        for (std::size_t x = 0; x < s.r.size(); ++x) mean.r[x] += s.r[x];
    }
    const double m = static_cast<double>(iterations);
    for (double& v : mean.P) v /= m;
    for (double& v : mean.Q) v /= m;
    for (double& v : mean.r) v /= m;
    for (std::size_t i = 0; i < kN; ++i) {
        for (int a = 0; a < 2; ++a) {
            double other = mean.q(i, a);
            for (std::size_t j = 0; j < kN; ++j)
                if (j != i) other += mean.p(i, a, j);
            mean.p(i, a, i) = 1.0 - other;
        }
        mean.R[i] = (mean.reward(i, 0) + mean.reward(i, 1)) / 2.0;
    }
    return {std::move(mean), chronic_care_labels()};
}

NominalModel random_nominal(std::size_t n, Rng& rng) {
    if (n < 1) throw ParameterError("random model needs at least one state");
    Scenario s = Scenario::zeros(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (int a = 0; a < 2; ++a) {
            s.q(i, a) = rng.uniform(0.0, 0.2);
            std::vector<double> weight(n);
            double total = 0.0;
            for (double& v : weight) total += (v = rng.uniform());
            if (total <= 0.0) {
                weight.assign(n, 1.0);
                total = static_cast<double>(n);
            }
            for (std::size_t j = 0; j < n; ++j)
                s.p(i, a, j) = (1.0 - s.q(i, a)) * weight[j] / total;
        }
        const double u = rng.uniform(100.0, 1000.0);
        const double v = rng.uniform(100.0, 1000.0);
        s.reward(i, 0) = std::min(u, v);
        s.reward(i, 1) = std::max(u, v);
        s.R[i] = (s.reward(i, 0) + s.reward(i, 1)) / 2.0;
    }
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("s" + std::to_string(i));
    return {std::move(s), std::move(labels)};
}

Instance generate_instance(const InstanceParams& params, const NominalModel& nominal) {
    params.validate();
    const Scenario& base = nominal.model;
    const std::size_t n = base.n;
    if (nominal.labels.size() != n) throw DimensionError("nominal model labels do not match its states");

    Instance inst;
    inst.horizon = params.horizon;
    inst.states = nominal.labels;
    inst.population = params.population;
    inst.theta.assign(n, 1.0 / static_cast<double>(n));
    inst.capacities.assign(static_cast<std::size_t>(params.horizon - 1),
                           params.capacity_fraction * static_cast<double>(params.population));
    inst.absorbing_reward = 0.0;
    inst.lambda.assign(params.n_scenarios, 1.0 / static_cast<double>(params.n_scenarios));
    inst.scenarios.assign(params.n_scenarios, Scenario::zeros(n));

    const double eps = params.noise_radius;
    const long long nw = static_cast<long long>(params.n_scenarios);
#pragma omp parallel for schedule(static)
    for (long long sw = 0; sw < nw; ++sw) {
        const auto w = static_cast<std::size_t>(sw);
        Rng rng(params.seed, 1 + w);
        Scenario& s = inst.scenarios[w];
        auto noisy = [&](double x) { return x * (1.0 + eps * (2.0 * rng.uniform() - 1.0)); };
        for (std::size_t i = 0; i < n; ++i) {
            for (int a = 0; a < 2; ++a) {
                for (std::size_t j = 0; j < n; ++j) s.p(i, a, j) = noisy(base.p(i, a, j));
                s.q(i, a) = noisy(base.q(i, a));
                s.reward(i, a) = noisy(base.reward(i, a));
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (int a = 0; a < 2; ++a) {
                double sum = s.q(i, a);
                for (std::size_t j = 0; j < n; ++j) sum += s.p(i, a, j);
                for (std::size_t j = 0; j < n; ++j) s.p(i, a, j) /= sum;
                s.q(i, a) /= sum;
            }
            s.R[i] = (s.reward(i, 0) + s.reward(i, 1)) / 2.0;
        }
    }
    require_valid(inst);
    return inst;
}

namespace {

const std::set<std::string> kConfigFields{"n_scenarios", "T",    "c",     "epsilon", "seed",
                                          "N",           "n_mc_iterations", "model", "states"};
const std::set<std::string> kRequiredConfigFields{"n_scenarios", "T", "c", "epsilon", "seed"};

template <class T> T field(const json& j, const char* name) {
    try {
        return j.at(name).get<T>();
    } catch (const json::exception&) {
        throw SchemaError(std::string("config field \"") + name + "\" has the wrong type");
    }
}

} // namespace

GeneratorConfig generator_config_from_json(const json& j) {
    if (!j.is_object()) throw SchemaError("generator config must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (!kConfigFields.count(key)) throw SchemaError("unknown config field \"" + key + "\"");
    for (const auto& key : kRequiredConfigFields)
        if (!j.contains(key)) throw SchemaError("missing config field \"" + key + "\"");

    GeneratorConfig cfg;
    cfg.params.n_scenarios = field<std::size_t>(j, "n_scenarios");
    cfg.params.horizon = field<int>(j, "T");
    cfg.params.capacity_fraction = field<double>(j, "c");
    cfg.params.noise_radius = field<double>(j, "epsilon");
    cfg.params.seed = field<std::uint64_t>(j, "seed");
    if (j.contains("N")) cfg.params.population = field<std::int64_t>(j, "N");
    if (j.contains("n_mc_iterations")) cfg.mc_iterations = field<std::size_t>(j, "n_mc_iterations");
    if (j.contains("model")) cfg.model = field<std::string>(j, "model");
    if (j.contains("states")) cfg.states = field<std::size_t>(j, "states");
    if (cfg.model != "chronic" && cfg.model != "random")
        throw SchemaError("config field \"model\" must be \"chronic\" or \"random\"");
    cfg.params.validate();
    if (cfg.mc_iterations < 1) throw ParameterError("n_mc_iterations must be >= 1");
    return cfg;
}

json generator_config_to_json(const GeneratorConfig& cfg) {
    json j{{"n_scenarios", cfg.params.n_scenarios},
           {"T", cfg.params.horizon},
           {"c", cfg.params.capacity_fraction},
           {"epsilon", cfg.params.noise_radius},
           {"seed", cfg.params.seed},
           {"N", cfg.params.population},
           {"n_mc_iterations", cfg.mc_iterations},
           {"model", cfg.model}};
    if (cfg.model == "random") j["states"] = cfg.states;
    return j;
}

Instance generate_from_config(const GeneratorConfig& cfg) {
    cfg.params.validate();
    Rng rng(cfg.params.seed, 0);
    const NominalModel nominal = cfg.model == "random"
                                     ? random_nominal(cfg.states, rng)
                                     : estimate_nominal(ChronicCareRules{}, cfg.mc_iterations, rng);
    return generate_instance(cfg.params, nominal);
}

} // namespace capmdp
