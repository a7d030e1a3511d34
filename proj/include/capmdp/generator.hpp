#pragma once

// Instance generation for the chronic-care case study.
//
// States: Low-Simple(0), Low-Moderate(1), Low-Complex(2), High-Simple(3),
// High-Moderate(4), High-Complex(5); death is the implicit absorbing state.
// A nominal model is the mean of many random models that each satisfy the
// hierarchical expert rules; scenarios are uniform multiplicative
// perturbations of the nominal model.

#include "capmdp/io.hpp"
#include "capmdp/model.hpp"
#include "capmdp/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace capmdp {

inline constexpr std::size_t kChronicCareStates = 6;

std::vector<std::string> chronic_care_labels();

struct ChronicCareRules {
    double death_cap = 0.20;     ///< upper bound on every Q
    double reward_min = 100.0;
    double reward_max = 1000.0;
    // Proposal ranges of the constructive sampler (not rules themselves).
    double awareness_cap = 0.25; ///< awareness switches drawn on [0, cap]
    double worsening_cap = 0.40; ///< worsening probabilities drawn on [0, cap]
    int max_retries = 1000;
    double tolerance = 1e-12;    ///< slack on rule comparisons

    /// Name of the first violated rule, or nullopt when (P, Q, r, R, R_D)
    /// satisfies all of them. Row stochasticity is checked first.
    std::optional<std::string> first_violation(const Scenario& s,
                                               double absorbing_reward = 0.0) const;
};

/// One random model satisfying every rule. Throws RejectionLimitExceeded
/// when no draw succeeds within 1 + max_retries attempts.
Scenario sample_rule_satisfying_model(const ChronicCareRules& rules, Rng& rng);

struct NominalModel {
    Scenario model;
    std::vector<std::string> labels;
};

/// Entrywise mean of `iterations` rule-satisfying draws. The self-loop of
/// every row is then recomputed as the residual 1 - sum(others) - Q so rows
/// are stochastic and every equality rule still holds exactly.
NominalModel estimate_nominal(const ChronicCareRules& rules, std::size_t iterations, Rng& rng);

/// Unrestricted random model on n states for solver testing: Q ~ U[0, 0.2],
/// the remaining mass split by normalized uniform weights, rewards a sorted
/// pair on [100, 1000] with r_{i1} >= r_{i0}, R_i the mean of the pair.
NominalModel random_nominal(std::size_t n, Rng& rng);

/// Scenario w perturbs every nominal parameter x to x (1 + eps (2u - 1)) with
/// u drawn from sub-stream 1 + w of params.seed, then divides each (i, a) row
/// of (P, Q) by its sum; R is recomputed as the mean of the perturbed r.
/// lambda and theta uniform, C_t = c N, R_D = 0.
Instance generate_instance(const InstanceParams& params, const NominalModel& nominal);

struct GeneratorConfig {
    InstanceParams params;
    std::size_t mc_iterations = 10000;
    std::string model = "chronic"; ///< "chronic" or "random"
    std::size_t states = 3;        ///< state count of the random model
};

/// Strict parse of {"n_scenarios", "T", "c", "epsilon", "seed", "N",
/// "n_mc_iterations"} plus optional "model" and "states".
GeneratorConfig generator_config_from_json(const json& j);
json generator_config_to_json(const GeneratorConfig& cfg);

/// Nominal model from stream 0 of the seed, then generate_instance.
Instance generate_from_config(const GeneratorConfig& cfg);

} // namespace capmdp
