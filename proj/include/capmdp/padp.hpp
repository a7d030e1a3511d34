#pragma once

// Longest feasible strategy path over the stage x policy-combination network.
//
// Column t holds one node per policy combination. A node keeps a single path
// (its best feasible predecessor chain) together with that path's stage-t
// occupancy; arcs into it are judged only against the predecessor's stored
// occupancy. Arc lengths depend on the path, so discarding the non-best
// paths makes the method approximate: the result is feasible and never
// better than the exact optimum, and exact when T = 2.

#include "capmdp/io.hpp"
#include "capmdp/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace capmdp {

enum class PadpStatus { Solved, Infeasible };

std::string to_string(PadpStatus s);

struct PadpResult {
    PadpStatus status = PadpStatus::Infeasible;
    double value = 0.0;                   ///< f^PADP when solved
    std::size_t states = 0;
    std::vector<std::uint32_t> path;      ///< combination code per epoch
    std::vector<std::size_t> alive_counts; ///< alive nodes per epoch
    std::vector<double> stage_seconds;
};

PadpResult solve_padp(const Instance& inst);

/// Strategy whose epoch-t row decodes path[t]. Throws InfeasibleError when
/// the result is not Solved.
Strategy decode_path(const PadpResult& result);

json padp_result_to_json(const PadpResult& r);
/// "t,alive,seconds" rows.
std::string padp_timing_csv(const PadpResult& r);

} // namespace capmdp
