#include "capmdp/analysis.hpp"

#include "capmdp/errors.hpp"
#include "capmdp/forward.hpp"
#include "capmdp/padp.hpp"

#include <exception>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

namespace capmdp {

namespace {

// U of the strategy when it is capacity-feasible, through the shared kernel.
std::optional<double> feasible_value(const Instance& inst, const Strategy& s,
                                     std::vector<forward::StageOccupancy>& buf) {
    const std::size_t epochs = inst.n_epochs();
    forward::start(inst, s.row(0), buf[0]);
    if (!forward::stage_feasible(inst, buf[0], s.row(0), 0)) return std::nullopt;
    for (std::size_t e = 1; e < epochs; ++e) {
        if (!forward::advance_feasible(inst, buf[(e - 1) & 1], s.row(e - 1), s.row(e), e,
                                       buf[e & 1]))
            return std::nullopt;
    }
    return forward::total_reward(inst, buf[(epochs - 1) & 1], s.row(epochs - 1));
}

// Runs body(w) for every scenario in parallel; the first exception in
// scenario order is rethrown.
template <class F> void for_each_scenario(std::size_t count, F&& body) {
    std::vector<std::exception_ptr> errors(count);
    const long long n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long w = 0; w < n; ++w) {
        try {
            body(static_cast<std::size_t>(w));
        } catch (...) {
            errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::string fmt(double v) {
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

} // namespace

std::string to_string(SolverChoice s) { return s == SolverChoice::Exact ? "exact" : "padp"; }

SolverChoice solver_from_string(const std::string& name) {
    if (name == "exact") return SolverChoice::Exact;
    if (name == "padp") return SolverChoice::Padp;
    throw ParameterError("unknown solver \"" + name + "\" (expected exact or padp)");
}

RepairResult repair_strategy(const Instance& inst, const Strategy& target,
                             std::size_t max_distance, const SolveLimits& limits) {
    require_valid(inst);
    check_dimensions(inst, target);
    const std::size_t n = inst.n_states();
    const std::size_t positions = target.epochs() * n;
    std::vector<forward::StageOccupancy> buf(2, forward::StageOccupancy(inst.n_scenarios(), n));

    const std::size_t deepest = std::min(max_distance, positions);
    for (std::size_t d = 0; d <= deepest; ++d) {
        std::optional<RepairResult> best;
        // d-subsets of flip positions in lexicographic order
        std::vector<std::size_t> pick(d);
        std::iota(pick.begin(), pick.end(), std::size_t{0});
        while (true) {
            Strategy cand = target;
            for (std::size_t p : pick) cand.flip(p / n, p % n);
            if (auto v = feasible_value(inst, cand, buf)) {
                if (!best || *v > best->value || (*v == best->value && cand < best->strategy))
                    best = RepairResult{cand, d, *v, false};
            }
            // next subset
            std::size_t k = d;
            while (k > 0 && pick[k - 1] == positions - d + k - 1) --k;
            if (k == 0) break;
            ++pick[k - 1];
            for (std::size_t m = k; m < d; ++m) pick[m] = pick[m - 1] + 1;
        }
        if (best) return *best;
    }

    if (deepest == positions) throw InfeasibleError("no capacity-feasible strategy exists");
    const SolveResult opt = solve_exact(inst, limits);
    if (opt.status == SolveStatus::Infeasible)
        throw InfeasibleError("no capacity-feasible strategy exists");
    if (opt.status == SolveStatus::LimitExceeded)
        throw LimitExceeded("repair fallback: exact solver hit its limit");
    return RepairResult{*opt.best_strategy, hamming_distance(*opt.best_strategy, target),
                        opt.best_value, true};
}

Solved solve_with(const Instance& inst, SolverChoice solver, const SolveLimits& limits) {
    if (solver == SolverChoice::Padp) {
        const PadpResult r = solve_padp(inst);
        if (r.status != PadpStatus::Solved) throw InfeasibleError("PADP found no feasible strategy");
        return {decode_path(r), r.value};
    }
    const SolveResult r = solve_exact(inst, limits);
    if (r.status == SolveStatus::Infeasible) throw InfeasibleError("no capacity-feasible strategy");
    if (r.status == SolveStatus::LimitExceeded)
        throw LimitExceeded("exact solver hit its node or time limit");
    return {*r.best_strategy, r.best_value};
}

EvssResult compute_evss(const Instance& inst, const AnalysisOptions& opt) {
    require_valid(inst);
    EvssResult res;
    res.f_star = solve_with(inst, opt.solver, opt.limits).value;
    res.per_scenario.resize(inst.n_scenarios());
    for_each_scenario(inst.n_scenarios(), [&](std::size_t w) {
        const Instance single = single_scenario(inst, w);
        const Solved own = solve_with(single, opt.solver, opt.limits);
        const RepairResult fixed =
            repair_strategy(inst, own.strategy, opt.repair_max_distance, opt.limits);
        res.per_scenario[w] = {own.value, fixed.value, fixed.distance, fixed.fallback};
    });
    double sum = 0.0;
    for (std::size_t w = 0; w < res.per_scenario.size(); ++w) {
        const auto& s = res.per_scenario[w];
        if (s.f_omega_in_omega == 0.0)
            throw DivisionByZero("EVSS: repaired strategy of scenario " + std::to_string(w) +
                                 " has zero value");
        sum += (res.f_star - s.f_omega_in_omega) / s.f_omega_in_omega * 100.0;
    }
    res.evss_percent = sum / static_cast<double>(res.per_scenario.size());
    return res;
}

EvpiResult compute_evpi(const Instance& inst, const AnalysisOptions& opt) {
    require_valid(inst);
    EvpiResult res;
    res.f_star = solve_with(inst, opt.solver, opt.limits).value;
    std::vector<double> own(inst.n_scenarios());
    for_each_scenario(inst.n_scenarios(), [&](std::size_t w) {
        own[w] = solve_with(single_scenario(inst, w), opt.solver, opt.limits).value;
    });
    for (std::size_t w = 0; w < own.size(); ++w) res.mean_wait_and_see += inst.lambda[w] * own[w];
    res.evpi_absolute = res.mean_wait_and_see - res.f_star;
    if (res.f_star == 0.0) throw DivisionByZero("EVPI: optimal value is zero");
    res.evpi_percent = res.evpi_absolute / res.f_star * 100.0;
    return res;
}

FlexibilityResult compute_flexibility(const Instance& inst, const AnalysisOptions& opt) {
    require_valid(inst);
    FlexibilityResult res;
    res.f_star = solve_with(inst, opt.solver, opt.limits).value;
    const SolveResult st = solve_exact_stationary(inst, opt.limits);
    if (st.status == SolveStatus::Infeasible)
        throw InfeasibleError("no feasible stationary strategy");
    if (st.status == SolveStatus::LimitExceeded)
        throw LimitExceeded("stationary search hit its limit");
    res.f_stationary = st.best_value;
    if (res.f_stationary == 0.0) throw DivisionByZero("flexibility: stationary optimum is zero");
    res.percent = (res.f_star - res.f_stationary) / res.f_stationary * 100.0;
    return res;
}

std::vector<SweepRow> capacity_sweep(const Instance& inst, const std::vector<double>& grid,
                                     const AnalysisOptions& opt) {
    require_valid(inst);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!(grid[k] >= 0.0)) throw ParameterError("capacity fractions must be >= 0");
        if (k > 0 && grid[k] < grid[k - 1])
            throw ParameterError("capacity grid must be sorted ascending");
    }
    std::vector<SweepRow> rows(grid.size());
    for_each_scenario(grid.size(), [&](std::size_t k) {
        const Instance scaled = with_capacity_fraction(inst, grid[k]);
        SweepRow& row = rows[k];
        row.c = grid[k];
        if (opt.solver == SolverChoice::Padp) {
            const PadpResult r = solve_padp(scaled);
            row.status = to_string(r.status);
            if (r.status == PadpStatus::Solved) {
                row.f = r.value;
                row.strategy = decode_path(r);
            }
        } else {
            const SolveResult r = solve_exact(scaled, opt.limits);
            row.status = to_string(r.status);
            if (r.best_strategy) {
                row.f = r.best_value;
                row.strategy = r.best_strategy;
            }
        }
    });
    std::optional<double> running;
    for (SweepRow& row : rows) {
        if (!row.f) continue;
        if (running && *row.f < *running) row.non_monotone = true;
        running = running ? std::max(*running, *row.f) : *row.f;
    }
    return rows;
}

AnalysisReport run_analysis(const Instance& inst, const std::vector<std::string>& suites,
                            const std::vector<double>& grid, const AnalysisOptions& opt) {
    auto wants = [&](const char* name) {
        for (const auto& s : suites)
            if (s == name || s == "all") return true;
        return false;
    };
    for (const auto& s : suites)
        if (s != "evss" && s != "evpi" && s != "flexibility" && s != "sweep" && s != "all")
            throw ParameterError("unknown analysis suite \"" + s + "\"");
    AnalysisReport r;
    r.solver = opt.solver;
    if (wants("evss")) r.evss = compute_evss(inst, opt);
    if (wants("evpi")) r.evpi = compute_evpi(inst, opt);
    if (wants("flexibility")) r.flexibility = compute_flexibility(inst, opt);
    if (wants("sweep")) r.sweep = capacity_sweep(inst, grid, opt);
    return r;
}

json analysis_to_json(const AnalysisReport& r) {
    json j{{"solver", to_string(r.solver)}, {"approximate", r.solver == SolverChoice::Padp}};
    if (r.evss) {
        json per = json::array();
        for (const auto& s : r.evss->per_scenario)
            per.push_back({{"f_omega", s.f_omega},
                           {"f_omega_in_Omega", s.f_omega_in_omega},
                           {"repair_distance", s.repair_distance},
                           {"repair_fallback", s.repair_fallback}});
        j["evss"] = {{"f_star", r.evss->f_star},
                     {"evss_percent", r.evss->evss_percent},
                     {"per_scenario", per}};
    }
    if (r.evpi)
        j["evpi"] = {{"f_star", r.evpi->f_star},
                     {"mean_wait_and_see", r.evpi->mean_wait_and_see},
                     {"evpi_absolute", r.evpi->evpi_absolute},
                     {"evpi_percent", r.evpi->evpi_percent}};
    if (r.flexibility)
        j["flexibility"] = {{"f_star", r.flexibility->f_star},
                            {"f_stationary", r.flexibility->f_stationary},
                            {"flexibility_percent", r.flexibility->percent}};
    if (!r.sweep.empty()) {
        json rows = json::array();
        for (const auto& row : r.sweep) {
            json x{{"c", row.c}, {"status", row.status}, {"non_monotone", row.non_monotone}};
            x["f"] = row.f ? json(*row.f) : json(nullptr);
            x["strategy"] = row.strategy ? strategy_to_json(*row.strategy)["pi"] : json(nullptr);
            rows.push_back(x);
        }
        j["sweep"] = rows;
    }
    return j;
}

std::string analysis_to_csv(const AnalysisReport& r) {
    std::ostringstream out;
    out << "kind,name,scenario,c,f_omega,f_omega_in_omega,repair_distance,f,value\n";
    if (r.evss) {
        for (std::size_t w = 0; w < r.evss->per_scenario.size(); ++w) {
            const auto& s = r.evss->per_scenario[w];
            out << "scenario,," << w << ",," << fmt(s.f_omega) << ',' << fmt(s.f_omega_in_omega)
                << ',' << s.repair_distance << ",,\n";
        }
        out << "summary,f_star,,,,,," << fmt(r.evss->f_star) << ",\n";
        out << "summary,evss_percent,,,,,,," << fmt(r.evss->evss_percent) << '\n';
    }
    if (r.evpi) {
        out << "summary,mean_wait_and_see,,,,,,," << fmt(r.evpi->mean_wait_and_see) << '\n';
        out << "summary,evpi_absolute,,,,,,," << fmt(r.evpi->evpi_absolute) << '\n';
        out << "summary,evpi_percent,,,,,,," << fmt(r.evpi->evpi_percent) << '\n';
    }
    if (r.flexibility) {
        out << "summary,f_stationary,,,,,," << fmt(r.flexibility->f_stationary) << ",\n";
        out << "summary,flexibility_percent,,,,,,," << fmt(r.flexibility->percent) << '\n';
    }
    for (const auto& row : r.sweep)
        out << "sweep," << row.status << ",," << fmt(row.c) << ",,,,"
            << (row.f ? fmt(*row.f) : std::string()) << ',' << (row.non_monotone ? 1 : 0) << '\n';
    return out.str();
}

} // namespace capmdp
