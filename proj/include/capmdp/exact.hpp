#pragma once

// Exact optimization over deterministic strategies by depth-first branch and
// bound on the epoch tree. Each tree level fixes one epoch's policy
// combination; the stage occupancy of the current prefix is kept on a stack
// and extended one epoch per child, since occupancies up to epoch t depend on
// the strategy only through its first t rows.

#include "capmdp/io.hpp"
#include "capmdp/model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace capmdp {

struct SolveLimits {
    std::uint64_t max_nodes = 0; ///< 0 = unlimited
    double max_seconds = 0.0;    ///< 0 = unlimited
    bool use_bound = true;       ///< optimistic remaining-reward pruning
};

enum class SolveStatus { Optimal, Infeasible, LimitExceeded };

std::string to_string(SolveStatus s);

struct SolveResult {
    std::optional<Strategy> best_strategy;
    double best_value = 0.0;     ///< f*, meaningful when best_strategy is set
    std::uint64_t nodes_explored = 0;
    std::vector<std::uint64_t> nodes_per_depth; ///< index e = t-1
    SolveStatus status = SolveStatus::Infeasible;
    double seconds = 0.0;
};

/// Maximum-U capacity-feasible strategy. Among equal values the
/// lexicographically smallest strategy (row-major (t, i) bits) is returned.
/// On LimitExceeded the best incumbent found so far is returned.
SolveResult solve_exact(const Instance& inst, const SolveLimits& limits = {});

/// Best strategy that repeats one policy combination at every epoch.
SolveResult solve_exact_stationary(const Instance& inst, const SolveLimits& limits = {});

json solve_result_to_json(const SolveResult& r);
/// "depth,t,nodes" rows.
std::string search_log_csv(const SolveResult& r);

} // namespace capmdp
