#include "capmdp/evaluate.hpp"

#include "capmdp/errors.hpp"
#include "capmdp/forward.hpp"

#include <algorithm>
#include <cmath>

namespace capmdp {

namespace {

// Below this much work per call the scenario loop stays sequential.
constexpr std::size_t kParallelWork = 1u << 15;

} // namespace

EvaluationResult evaluate_strategy(const Instance& inst, const Strategy& strat) {
    check_dimensions(inst, strat);
    if (inst.n_epochs() == 0) throw DimensionError("instance has no decision epochs (T < 2)");
    const std::size_t n = inst.n_states();
    const std::size_t epochs = inst.n_epochs();
    const std::size_t scenarios = inst.n_scenarios();

    EvaluationResult result;
    result.trajectory = OccupancyTrajectory::zeros(scenarios, epochs, n);
    OccupancyTrajectory& tr = result.trajectory;

    std::vector<forward::StageOccupancy> stages(epochs, forward::StageOccupancy(scenarios, n));
    std::vector<double> totals(scenarios, 0.0);
    // first violating epoch per scenario, or epochs when none
    std::vector<std::size_t> violation_epoch(scenarios, epochs);
    std::vector<double> violation_amount(scenarios, 0.0);

    const long long nw = static_cast<long long>(scenarios);
    const std::size_t work = scenarios * epochs * n * n;
#pragma omp parallel for schedule(static) if (work > kParallelWork)
    for (long long sw = 0; sw < nw; ++sw) {
        const auto w = static_cast<std::size_t>(sw);
        for (std::size_t e = 0; e < epochs; ++e) {
            if (e == 0)
                forward::start_scenario(inst, w, strat.row(0), stages[0]);
            else
                forward::advance_scenario(inst, w, stages[e - 1], strat.row(e - 1), strat.row(e),
                                          stages[e]);
            const auto mass = stages[e].mass_of(w);
            for (std::size_t i = 0; i < n; ++i) tr.x(w, e, i, strat(e, i)) = mass[i];
            if (e > 0) tr.z_ref(w, e + 1) = stages[e].absorbed[w];
            const double over = forward::overflow_scenario(inst, w, stages[e], strat.row(e), e);
            if (!forward::within_capacity(over) && violation_epoch[w] == epochs) {
                violation_epoch[w] = e;
                violation_amount[w] = over;
            }
        }
        double z_final = 0.0;
        totals[w] = forward::finish_scenario(inst, w, stages[epochs - 1], strat.row(epochs - 1),
                                             {tr.Y.data() + w * n, n}, &z_final);
        tr.z_ref(w, epochs + 1) = z_final;
    }

    result.total_reward = forward::combine(inst, totals);
    for (std::size_t w = 0; w < scenarios; ++w) {
        if (violation_epoch[w] < epochs) {
            result.feasible = false;
            result.first_violation =
                CapacityViolation{w, violation_epoch[w] + 1, violation_amount[w]};
            break;
        }
    }
    return result;
}

double check_proposition1(const Instance& inst, const OccupancyTrajectory& tr) {
    const std::size_t T = static_cast<std::size_t>(inst.horizon);
    double worst = 0.0;
    for (std::size_t w = 0; w < tr.scenarios; ++w) {
        for (std::size_t t = 1; t <= T; ++t) {
            double lhs = 0.0;
            if (t < T) {
                for (std::size_t i = 0; i < tr.states; ++i)
                    lhs += tr.x(w, t - 1, i, 0) + tr.x(w, t - 1, i, 1);
            } else {
                for (std::size_t i = 0; i < tr.states; ++i) lhs += tr.y(w, i);
            }
            lhs += tr.z(w, t);
            worst = std::max(worst, std::abs(lhs - 1.0));
        }
    }
    return worst;
}

std::vector<double> check_proposition2(const Instance& inst, const OccupancyTrajectory& tr) {
    const double N = static_cast<double>(inst.population);
    double capacity_sum = 0.0;
    for (double c : inst.capacities) capacity_sum += c;
    const double bound = static_cast<double>(inst.horizon) - (capacity_sum + N) / N;

    std::vector<double> slack(tr.scenarios, 0.0);
    for (std::size_t w = 0; w < tr.scenarios; ++w) {
        double lhs = 0.0;
        for (std::size_t e = 0; e < tr.epochs; ++e) {
            for (std::size_t i = 0; i < tr.states; ++i) lhs += tr.x(w, e, i, 0);
            lhs += tr.z(w, e + 1);
        }
        slack[w] = lhs - bound;
    }
    return slack;
}

json evaluation_to_json(const EvaluationResult& result, bool with_trajectory) {
    json j{{"U", result.total_reward}, {"feasible", result.feasible}};
    if (result.first_violation) {
        const auto& v = *result.first_violation;
        j["first_violation"] = {{"scenario", v.scenario}, {"t", v.epoch}, {"overflow", v.overflow}};
    } else {
        j["first_violation"] = nullptr;
    }
    if (with_trajectory) j["trajectory"] = trajectory_to_json(result.trajectory);
    return j;
}

} // namespace capmdp
