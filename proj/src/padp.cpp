#include "capmdp/padp.hpp"

#include "capmdp/combination.hpp"
#include "capmdp/errors.hpp"
#include "capmdp/forward.hpp"

#include <chrono>
#include <sstream>

namespace capmdp {

namespace {

using Clock = std::chrono::steady_clock;

struct Column {
    std::vector<forward::StageOccupancy> occupancy; // by code
    std::vector<double> value;
    std::vector<std::uint8_t> alive;
};

constexpr std::uint32_t kNoPredecessor = 0xffffffffu;

} // namespace

std::string to_string(PadpStatus s) {
    return s == PadpStatus::Solved ? "Solved" : "Infeasible";
}

PadpResult solve_padp(const Instance& inst) {
    require_valid(inst);
    const std::size_t n = inst.n_states();
    combo::require_enumerable(n);
    const std::size_t epochs = inst.n_epochs();
    const std::size_t scenarios = inst.n_scenarios();
    const std::uint32_t width = combo::count(n);

    std::vector<std::vector<std::uint8_t>> rows(width);
    for (std::uint32_t c = 0; c < width; ++c) rows[c] = combo::decode(c, n);

    PadpResult res;
    res.states = n;
    std::vector<std::vector<std::uint32_t>> pred(epochs,
                                                 std::vector<std::uint32_t>(width, kNoPredecessor));

    // node value = reward collected along its stored path through this epoch,
    // plus the period-T terms when the epoch is the last one
    auto node_value = [&](const forward::StageOccupancy& occ, std::uint32_t c, std::size_t e) {
        return e + 1 == epochs ? forward::total_reward(inst, occ, rows[c])
                               : forward::partial_value(inst, occ);
    };

    Column prev, cur;
    auto reset = [&](Column& col) {
        col.occupancy.assign(width, forward::StageOccupancy(scenarios, n));
        col.value.assign(width, 0.0);
        col.alive.assign(width, 0);
    };

    auto t0 = Clock::now();
    reset(cur);
    const long long nw = static_cast<long long>(width);
#pragma omp parallel for schedule(static)
    for (long long sc = 0; sc < nw; ++sc) {
        const auto c = static_cast<std::uint32_t>(sc);
        forward::start(inst, rows[c], cur.occupancy[c]);
        if (forward::stage_feasible(inst, cur.occupancy[c], rows[c], 0)) {
            cur.alive[c] = 1;
            cur.value[c] = node_value(cur.occupancy[c], c, 0);
        }
    }
    auto record_stage = [&](const Column& col) {
        std::size_t alive = 0;
        for (auto a : col.alive) alive += a;
        res.alive_counts.push_back(alive);
        const auto t1 = Clock::now();
        res.stage_seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
        t0 = t1;
        return alive;
    };
    if (record_stage(cur) == 0) return res;

    for (std::size_t e = 1; e < epochs; ++e) {
        std::swap(prev, cur);
        reset(cur);
#pragma omp parallel
        {
            forward::StageOccupancy trial(scenarios, n);
#pragma omp for schedule(dynamic, 1)
            for (long long sc = 0; sc < nw; ++sc) {
                const auto c = static_cast<std::uint32_t>(sc);
                for (std::uint32_t p = 0; p < width; ++p) {
                    if (!prev.alive[p]) continue;
                    if (!forward::advance_feasible(inst, prev.occupancy[p], rows[p], rows[c], e,
                                                   trial))
                        continue;
                    const double v = node_value(trial, c, e);
                    if (!cur.alive[c] || v > cur.value[c]) {
                        cur.alive[c] = 1;
                        cur.value[c] = v;
                        pred[e][c] = p;
                        std::swap(cur.occupancy[c], trial);
                    }
                }
            }
        }
        if (record_stage(cur) == 0) return res;
    }

    std::uint32_t best = kNoPredecessor;
    for (std::uint32_t c = 0; c < width; ++c)
        if (cur.alive[c] && (best == kNoPredecessor || cur.value[c] > cur.value[best])) best = c;

    res.status = PadpStatus::Solved;
    res.value = cur.value[best];
    res.path.assign(epochs, 0);
    std::uint32_t c = best;
    for (std::size_t e = epochs; e-- > 0;) {
        res.path[e] = c;
        if (e > 0) c = pred[e][c];
    }
    return res;
}

Strategy decode_path(const PadpResult& result) {
    if (result.status != PadpStatus::Solved)
        throw InfeasibleError("PADP found no feasible strategy path");
    Strategy s(result.path.size(), result.states);
    for (std::size_t e = 0; e < result.path.size(); ++e)
        for (std::size_t i = 0; i < result.states; ++i) s.set(e, i, (result.path[e] >> i) & 1u);
    return s;
}

json padp_result_to_json(const PadpResult& r) {
    json j{{"status", to_string(r.status)}};
    if (r.status == PadpStatus::Solved) {
        j["f_padp"] = r.value;
        j["strategy"] = strategy_to_json(decode_path(r))["pi"];
    } else {
        j["f_padp"] = nullptr;
        j["strategy"] = nullptr;
    }
    j["alive_counts"] = r.alive_counts;
    return j;
}

std::string padp_timing_csv(const PadpResult& r) {
    std::ostringstream out;
    out << "t,alive,seconds\n";
    for (std::size_t e = 0; e < r.alive_counts.size(); ++e)
        out << e + 1 << ',' << r.alive_counts[e] << ',' << r.stage_seconds[e] << '\n';
    return out.str();
}

} // namespace capmdp
