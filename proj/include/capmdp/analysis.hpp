#pragma once

// Stochastic-value experiments on a single instance: nearest feasible
// strategy repair, EVSS, EVPI, value of flexibility and capacity sweeps.

#include "capmdp/exact.hpp"
#include "capmdp/io.hpp"
#include "capmdp/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace capmdp {

enum class SolverChoice { Exact, Padp };

std::string to_string(SolverChoice s);
SolverChoice solver_from_string(const std::string& name);

struct AnalysisOptions {
    SolverChoice solver = SolverChoice::Exact;
    SolveLimits limits;           ///< for every exact solve
    std::size_t repair_max_distance = 6;
};

struct RepairResult {
    Strategy strategy;
    std::size_t distance = 0;
    double value = 0.0;    ///< U of the repaired strategy
    bool fallback = false; ///< distance cap hit; strategy is the exact optimum
};

/// Capacity-feasible strategy at minimum Hamming distance from target, found
/// by iterative deepening over the number of flipped entries. Ties go to the
/// larger U, then the lexicographically smaller strategy. Beyond max_distance
/// the exact optimum is returned with its measured distance and fallback set.
/// Throws InfeasibleError when no feasible strategy exists.
RepairResult repair_strategy(const Instance& inst, const Strategy& target,
                             std::size_t max_distance = 6, const SolveLimits& limits = {});

/// Optimal value and strategy with the chosen solver. Throws InfeasibleError
/// or LimitExceeded instead of returning a non-optimal status.
struct Solved {
    Strategy strategy;
    double value = 0.0;
};
Solved solve_with(const Instance& inst, SolverChoice solver, const SolveLimits& limits = {});

struct ScenarioStudy {
    double f_omega = 0.0;          ///< wait-and-see optimum of the scenario alone
    double f_omega_in_omega = 0.0; ///< repaired scenario strategy evaluated on all scenarios
    std::size_t repair_distance = 0;
    bool repair_fallback = false;
};

struct EvssResult {
    double f_star = 0.0;
    double evss_percent = 0.0;
    std::vector<ScenarioStudy> per_scenario;
};

struct EvpiResult {
    double f_star = 0.0;
    double mean_wait_and_see = 0.0; ///< lambda-weighted
    double evpi_absolute = 0.0;
    double evpi_percent = 0.0;
};

struct SweepRow {
    double c = 0.0;
    std::string status; ///< solver status name
    std::optional<double> f;
    std::optional<Strategy> strategy;
    bool non_monotone = false; ///< f dropped below an earlier row
};

EvssResult compute_evss(const Instance& inst, const AnalysisOptions& opt = {});
EvpiResult compute_evpi(const Instance& inst, const AnalysisOptions& opt = {});
struct FlexibilityResult {
    double f_star = 0.0;
    double f_stationary = 0.0; ///< f~, best strategy constant across epochs
    double percent = 0.0;      ///< (f* - f~) / f~ x 100
};

FlexibilityResult compute_flexibility(const Instance& inst, const AnalysisOptions& opt = {});
/// Re-solves with C_t = c N for every c of an ascending grid.
std::vector<SweepRow> capacity_sweep(const Instance& inst, const std::vector<double>& grid,
                                     const AnalysisOptions& opt = {});

struct AnalysisReport {
    SolverChoice solver = SolverChoice::Exact;
    std::optional<EvssResult> evss;
    std::optional<EvpiResult> evpi;
    std::optional<FlexibilityResult> flexibility;
    std::vector<SweepRow> sweep;
};

/// Runs the named suites: "evss", "evpi", "flexibility", "sweep" or "all".
AnalysisReport run_analysis(const Instance& inst, const std::vector<std::string>& suites,
                            const std::vector<double>& grid, const AnalysisOptions& opt = {});

json analysis_to_json(const AnalysisReport& r);
/// kind,name,scenario,c,f_omega,f_omega_in_omega,repair_distance,f,value
std::string analysis_to_csv(const AnalysisReport& r);

} // namespace capmdp
