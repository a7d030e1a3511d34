#include "capmdp/forward.hpp"

#include <array>

namespace capmdp::forward {

void start_scenario(const Instance& inst, std::size_t w, Actions actions, StageOccupancy& out) {
    const Scenario& s = inst.scenarios[w];
    const std::size_t n = s.n;
    double* mass = out.mass.data() + w * n;
    double reward = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mass[i] = inst.theta[i];
        reward += mass[i] * s.reward(i, actions[i]);
    }
    out.absorbed[w] = 0.0;
    out.reward[w] = reward;
}

void advance_scenario(const Instance& inst, std::size_t w, const StageOccupancy& prev,
                      Actions prev_actions, Actions actions, StageOccupancy& out) {
    const Scenario& s = inst.scenarios[w];
    const std::size_t n = s.n;
    const double* from = prev.mass.data() + w * n;
    double* to = out.mass.data() + w * n;
    for (std::size_t j = 0; j < n; ++j) to[j] = 0.0;
    double inflow = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double m = from[i];
        const int a = prev_actions[i];
        const double* row = s.P.data() + (i * 2 + a) * n;
        for (std::size_t j = 0; j < n; ++j) to[j] += m * row[j];
        inflow += m * s.q(i, a);
    }
    double stage = inflow * inst.absorbing_reward;
    for (std::size_t j = 0; j < n; ++j) stage += to[j] * s.reward(j, actions[j]);
    out.absorbed[w] = prev.absorbed[w] + inflow;
    out.reward[w] = prev.reward[w] + stage;
}

double overflow_scenario(const Instance& inst, std::size_t w, const StageOccupancy& stage,
                         Actions actions, std::size_t e) {
    const std::size_t n = stage.states;
    const double* mass = stage.mass.data() + w * n;
    double special = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (actions[i]) special += mass[i];
    return static_cast<double>(inst.population) * special - inst.capacities[e];
}

double finish_scenario(const Instance& inst, std::size_t w, const StageOccupancy& last,
                       Actions last_actions, std::span<double> y_out, double* z_final) {
    const Scenario& s = inst.scenarios[w];
    const std::size_t n = s.n;
    const double* from = last.mass.data() + w * n;
    std::array<double, 32> small{};
    std::vector<double> large;
    double* y = nullptr;
    if (y_out.size() >= n) {
        y = y_out.data();
    } else if (n <= small.size()) {
        y = small.data();
    } else {
        large.resize(n);
        y = large.data();
    }
    for (std::size_t j = 0; j < n; ++j) y[j] = 0.0;
    double inflow = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double m = from[i];
        const int a = last_actions[i];
        const double* row = s.P.data() + (i * 2 + a) * n;
        for (std::size_t j = 0; j < n; ++j) y[j] += m * row[j];
        inflow += m * s.q(i, a);
    }
    double terminal = inflow * inst.absorbing_reward;
    for (std::size_t j = 0; j < n; ++j) terminal += y[j] * s.R[j];
    if (z_final) *z_final = last.absorbed[w] + inflow;
    return last.reward[w] + terminal;
}

double combine(const Instance& inst, std::span<const double> per_scenario) {
    double acc = 0.0;
    for (std::size_t w = 0; w < per_scenario.size(); ++w) acc += inst.lambda[w] * per_scenario[w];
    return static_cast<double>(inst.population) * acc;
}

void start(const Instance& inst, Actions actions, StageOccupancy& out) {
    for (std::size_t w = 0; w < inst.n_scenarios(); ++w) start_scenario(inst, w, actions, out);
}

void advance(const Instance& inst, const StageOccupancy& prev, Actions prev_actions,
             Actions actions, StageOccupancy& out) {
    for (std::size_t w = 0; w < inst.n_scenarios(); ++w)
        advance_scenario(inst, w, prev, prev_actions, actions, out);
}

bool advance_feasible(const Instance& inst, const StageOccupancy& prev, Actions prev_actions,
                      Actions actions, std::size_t e, StageOccupancy& out) {
    for (std::size_t w = 0; w < inst.n_scenarios(); ++w) {
        advance_scenario(inst, w, prev, prev_actions, actions, out);
        if (!within_capacity(overflow_scenario(inst, w, out, actions, e))) return false;
    }
    return true;
}

bool stage_feasible(const Instance& inst, const StageOccupancy& stage, Actions actions,
                    std::size_t e) {
    for (std::size_t w = 0; w < inst.n_scenarios(); ++w)
        if (!within_capacity(overflow_scenario(inst, w, stage, actions, e))) return false;
    return true;
}

double total_reward(const Instance& inst, const StageOccupancy& last, Actions last_actions) {
    std::vector<double> totals(inst.n_scenarios());
    for (std::size_t w = 0; w < totals.size(); ++w)
        totals[w] = finish_scenario(inst, w, last, last_actions);
    return combine(inst, totals);
}

double partial_value(const Instance& inst, const StageOccupancy& stage) {
    return combine(inst, stage.reward);
}

} // namespace capmdp::forward
