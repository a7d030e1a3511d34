#pragma once

// Forward propagation of occupancy measures, one decision epoch at a time.
//
// Every consumer (strategy evaluation, branch-and-bound, PADP) advances stages
// through these functions, so a strategy's total reward is bit-identical no
// matter which component computed it.
//
// Per scenario w a stage holds:
//   mass[w*n + i] = X^{w,t}_{i, pi_i^t}   (the other action's entry is zero)
//   absorbed[w]   = Z^{w,t}
//   reward[w]     = per-individual reward collected through epoch t, i.e.
//                   sum_{s<=t} ( dZ^{w,s} R_D + sum_i X^{w,s}_{i,pi} r^w_{i,pi} )

#include "capmdp/model.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace capmdp::forward {

using Actions = std::span<const std::uint8_t>;

struct StageOccupancy {
    std::size_t states = 0;
    std::vector<double> mass;
    std::vector<double> absorbed;
    std::vector<double> reward;

    StageOccupancy() = default;
    StageOccupancy(std::size_t scenarios, std::size_t states)
        : states(states), mass(scenarios * states, 0.0), absorbed(scenarios, 0.0),
          reward(scenarios, 0.0) {}

    std::span<const double> mass_of(std::size_t w) const {
        return {mass.data() + w * states, states};
    }

    bool operator==(const StageOccupancy&) const = default;
};

/// Epoch 1 from theta.
void start_scenario(const Instance& inst, std::size_t w, Actions actions, StageOccupancy& out);

/// Epoch t from epoch t-1.
void advance_scenario(const Instance& inst, std::size_t w, const StageOccupancy& prev,
                      Actions prev_actions, Actions actions, StageOccupancy& out);

/// Headcount above capacity at epoch index e: N * sum_i X_{i,1} - C_t.
double overflow_scenario(const Instance& inst, std::size_t w, const StageOccupancy& stage,
                         Actions actions, std::size_t e);

inline bool within_capacity(double overflow) { return overflow <= kCapacitySlack; }

/// Adds period-T contributions; returns the scenario's per-individual total.
/// Optionally writes Y (size n) and Z^T.
double finish_scenario(const Instance& inst, std::size_t w, const StageOccupancy& last,
                       Actions last_actions, std::span<double> y_out = {},
                       double* z_final = nullptr);

/// N * sum_w lambda_w * per_scenario[w], accumulated in scenario order.
double combine(const Instance& inst, std::span<const double> per_scenario);

// All-scenario helpers, scenario loop in index order.

void start(const Instance& inst, Actions actions, StageOccupancy& out);
void advance(const Instance& inst, const StageOccupancy& prev, Actions prev_actions,
             Actions actions, StageOccupancy& out);
/// Advances scenario by scenario and stops at the first capacity violation.
/// Returns false on violation (out is then partially written).
bool advance_feasible(const Instance& inst, const StageOccupancy& prev, Actions prev_actions,
                      Actions actions, std::size_t e, StageOccupancy& out);
bool stage_feasible(const Instance& inst, const StageOccupancy& stage, Actions actions,
                    std::size_t e);
/// Total reward U of a completed path whose last epoch is `last`.
double total_reward(const Instance& inst, const StageOccupancy& last, Actions last_actions);
/// N * sum_w lambda_w reward[w]: value collected through the stage.
double partial_value(const Instance& inst, const StageOccupancy& stage);

} // namespace capmdp::forward
