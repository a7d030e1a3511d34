#pragma once

#include "capmdp/io.hpp"
#include "capmdp/model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace capmdp {

/// First capacity violation in (scenario, epoch) lexicographic order.
struct CapacityViolation {
    std::size_t scenario = 0;
    std::size_t epoch = 1;  ///< decision epoch t (1-based)
    double overflow = 0.0;  ///< headcount above C_t

    bool operator==(const CapacityViolation&) const = default;
};

struct EvaluationResult {
    OccupancyTrajectory trajectory;
    double total_reward = 0.0; ///< U(pi)
    bool feasible = true;
    std::optional<CapacityViolation> first_violation;
};

/// Occupancy measures, total expected reward and capacity feasibility of a
/// fixed strategy. Throws DimensionError on shape mismatch.
EvaluationResult evaluate_strategy(const Instance& inst, const Strategy& strat);

/// Largest |lhs - 1| over the probability-conservation identities:
///   t = 1:         sum_{i,a} X^{w,1}_{ia}
///   1 < t < T:     sum_{i,a} X^{w,t}_{ia} + Z^{w,t}
///   t = T:         sum_i Y^w_i + Z^{w,T}
double check_proposition1(const Instance& inst, const OccupancyTrajectory& tr);

/// Per scenario: sum_{t<T} [sum_i X^{w,t}_{i,0} + Z^{w,t}] - (T - (sum_t C_t + N)/N).
/// Non-negative (up to rounding) whenever the trajectory is capacity-feasible.
std::vector<double> check_proposition2(const Instance& inst, const OccupancyTrajectory& tr);

/// Empirical occupancy measures from `samples` simulated individuals per
/// scenario. Scenario w draws from its own sub-stream of `seed`.
OccupancyTrajectory simulate_cohort(const Instance& inst, const Strategy& strat,
                                    std::size_t samples, std::uint64_t seed);

json evaluation_to_json(const EvaluationResult& result, bool with_trajectory);

} // namespace capmdp
