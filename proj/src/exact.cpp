#include "capmdp/exact.hpp"

#include "capmdp/combination.hpp"
#include "capmdp/errors.hpp"
#include "capmdp/forward.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

namespace capmdp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Per-individual reward still obtainable by each scenario's surviving mass:
// at most best_stage per remaining epoch plus best_terminal at period T.
struct RewardCeiling {
    std::vector<double> best_stage;
    std::vector<double> best_terminal;

    explicit RewardCeiling(const Instance& inst) {
        for (const Scenario& s : inst.scenarios) {
            double stage = std::max(0.0, inst.absorbing_reward);
            for (double v : s.r) stage = std::max(stage, v);
            double terminal = std::max(0.0, inst.absorbing_reward);
            for (double v : s.R) terminal = std::max(terminal, v);
            best_stage.push_back(stage);
            best_terminal.push_back(terminal);
        }
    }

    double bound(const Instance& inst, const forward::StageOccupancy& stage,
                 std::size_t remaining) const {
        std::vector<double> per(best_stage.size());
        for (std::size_t w = 0; w < per.size(); ++w) {
            const double alive = std::max(0.0, 1.0 - stage.absorbed[w]);
            per[w] = stage.reward[w] +
                     alive * (static_cast<double>(remaining) * best_stage[w] + best_terminal[w]);
        }
        return forward::combine(inst, per);
    }
};

// Search state shared (read-only or atomically) by all branches.
struct Shared {
    const Instance& inst;
    const SolveLimits& limits;
    RewardCeiling ceiling;
    std::vector<std::uint32_t> order;
    std::vector<std::vector<std::uint8_t>> rows; // rows[k] = decoded order[k]
    double floor_value;                          // value of a known feasible strategy
    Clock::time_point start;
    std::atomic<std::uint64_t> nodes{0};
    std::atomic<bool> stop{false};
};

struct Branch {
    bool found = false;
    double value = -std::numeric_limits<double>::infinity();
    std::vector<std::uint32_t> path; // lex-order indices per epoch
    std::vector<std::uint64_t> nodes_per_depth;
};

class Searcher {
public:
    Searcher(Shared& sh, Branch& out)
        : sh_(sh), out_(out), epochs_(sh.inst.n_epochs()),
          stack_(epochs_, forward::StageOccupancy(sh.inst.n_scenarios(), sh.inst.n_states())),
          path_(epochs_, 0) {
        out_.nodes_per_depth.assign(epochs_, 0);
    }

    void run_branch(std::uint32_t first) {
        if (!count_node(0)) return;
        path_[0] = first;
        const auto& row = sh_.rows[first];
        forward::start(sh_.inst, row, stack_[0]);
        if (!forward::stage_feasible(sh_.inst, stack_[0], row, 0)) return;
        descend(0);
    }

private:
    // false once a limit stops the search
    bool count_node(std::size_t depth) {
        ++out_.nodes_per_depth[depth];
        const std::uint64_t n = sh_.nodes.fetch_add(1, std::memory_order_relaxed) + 1;
        if (sh_.stop.load(std::memory_order_relaxed)) return false;
        if (sh_.limits.max_nodes && n > sh_.limits.max_nodes) {
            sh_.stop = true;
            return false;
        }
        if (sh_.limits.max_seconds > 0 && (n & 1023u) == 0 &&
            seconds_since(sh_.start) > sh_.limits.max_seconds) {
            sh_.stop = true;
            return false;
        }
        return true;
    }

    void consider(double value) {
        if (!out_.found || value > out_.value) {
            out_.found = true;
            out_.value = value;
            out_.path = path_;
        }
    }

    // stack_[e] holds a feasible prefix ending at epoch index e
    void descend(std::size_t e) {
        const auto& cur = sh_.rows[path_[e]];
        if (e + 1 == epochs_) {
            consider(forward::total_reward(sh_.inst, stack_[e], cur));
            return;
        }
        if (sh_.limits.use_bound) {
            const double target = out_.found ? std::max(out_.value, sh_.floor_value)
                                             : sh_.floor_value;
            const double bound = sh_.ceiling.bound(sh_.inst, stack_[e], epochs_ - 1 - e);
            if (bound + 1e-9 * (std::abs(target) + 1.0) < target) return;
        }
        for (std::uint32_t k = 0; k < sh_.order.size(); ++k) {
            if (!count_node(e + 1)) return;
            const auto& next = sh_.rows[k];
            if (!forward::advance_feasible(sh_.inst, stack_[e], cur, next, e + 1, stack_[e + 1]))
                continue;
            path_[e + 1] = k;
            descend(e + 1);
            if (sh_.stop.load(std::memory_order_relaxed)) return;
        }
    }

    Shared& sh_;
    Branch& out_;
    std::size_t epochs_;
    std::vector<forward::StageOccupancy> stack_;
    std::vector<std::uint32_t> path_;
};

double all_zero_value(const Instance& inst, bool& feasible) {
    const std::size_t n = inst.n_states();
    const std::vector<std::uint8_t> zero(n, 0);
    forward::StageOccupancy a(inst.n_scenarios(), n), b(inst.n_scenarios(), n);
    forward::start(inst, zero, a);
    feasible = forward::stage_feasible(inst, a, zero, 0);
    for (std::size_t e = 1; e < inst.n_epochs() && feasible; ++e) {
        feasible = forward::advance_feasible(inst, a, zero, zero, e, b);
        std::swap(a, b);
    }
    return feasible ? forward::total_reward(inst, a, zero) : 0.0;
}

Strategy strategy_from_path(const std::vector<std::vector<std::uint8_t>>& rows,
                            const std::vector<std::uint32_t>& path, std::size_t n) {
    Strategy s(path.size(), n);
    for (std::size_t e = 0; e < path.size(); ++e)
        for (std::size_t i = 0; i < n; ++i) s.set(e, i, rows[path[e]][i]);
    return s;
}

void require_solvable(const Instance& inst) {
    require_valid(inst);
    combo::require_enumerable(inst.n_states());
}

} // namespace

std::string to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::LimitExceeded: return "LimitExceeded";
    }
    return "Unknown";
}

SolveResult solve_exact(const Instance& inst, const SolveLimits& limits) {
    require_solvable(inst);
    const std::size_t n = inst.n_states();
    const std::size_t epochs = inst.n_epochs();

    Shared sh{inst, limits, RewardCeiling(inst), combo::lex_order(n), {}, 0.0, Clock::now()};
    for (std::uint32_t code : sh.order) sh.rows.push_back(combo::decode(code, n));
    bool zero_feasible = false;
    const double zero_value = all_zero_value(inst, zero_feasible);
    sh.floor_value = zero_feasible ? zero_value : -std::numeric_limits<double>::infinity();

    // Branches keep private incumbents so the explored tree does not depend on
    // the schedule; the shared floor is a fixed, schedule-free lower bound.
    std::vector<Branch> branches(sh.order.size());
    const long long nb = static_cast<long long>(branches.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long long b = 0; b < nb; ++b) {
        Searcher s(sh, branches[static_cast<std::size_t>(b)]);
        s.run_branch(static_cast<std::uint32_t>(b));
    }

    SolveResult res;
    res.nodes_per_depth.assign(epochs, 0);
    const Branch* best = nullptr;
    for (const Branch& br : branches) {
        for (std::size_t e = 0; e < epochs; ++e) res.nodes_per_depth[e] += br.nodes_per_depth[e];
        if (br.found && (!best || br.value > best->value)) best = &br;
    }
    for (auto c : res.nodes_per_depth) res.nodes_explored += c;
    if (best) {
        res.best_strategy = strategy_from_path(sh.rows, best->path, n);
        res.best_value = best->value;
    }
    if (sh.stop)
        res.status = SolveStatus::LimitExceeded;
    else
        res.status = best ? SolveStatus::Optimal : SolveStatus::Infeasible;
    res.seconds = seconds_since(sh.start);
    return res;
}

SolveResult solve_exact_stationary(const Instance& inst, const SolveLimits& limits) {
    require_solvable(inst);
    const std::size_t n = inst.n_states();
    const std::size_t epochs = inst.n_epochs();
    const auto start = Clock::now();
    const auto order = combo::lex_order(n);

    SolveResult res;
    res.nodes_per_depth.assign(epochs, 0);
    std::optional<std::size_t> best;
    bool stopped = false;
    forward::StageOccupancy a(inst.n_scenarios(), n), b(inst.n_scenarios(), n);
    for (std::size_t k = 0; k < order.size(); ++k) {
        if ((limits.max_nodes && res.nodes_explored >= limits.max_nodes) ||
            (limits.max_seconds > 0 && seconds_since(start) > limits.max_seconds)) {
            stopped = true;
            break;
        }
        ++res.nodes_explored;
        ++res.nodes_per_depth[0];
        const auto row = combo::decode(order[k], n);
        forward::start(inst, row, a);
        bool ok = forward::stage_feasible(inst, a, row, 0);
        for (std::size_t e = 1; e < epochs && ok; ++e) {
            ok = forward::advance_feasible(inst, a, row, row, e, b);
            std::swap(a, b);
        }
        if (!ok) continue;
        const double value = forward::total_reward(inst, a, row);
        if (!best || value > res.best_value) {
            best = k;
            res.best_value = value;
        }
    }
    if (best) res.best_strategy = Strategy::stationary(epochs, combo::decode(order[*best], n));
    if (stopped)
        res.status = SolveStatus::LimitExceeded;
    else
        res.status = best ? SolveStatus::Optimal : SolveStatus::Infeasible;
    res.seconds = seconds_since(start);
    return res;
}

json solve_result_to_json(const SolveResult& r) {
    json j{{"status", to_string(r.status)}, {"nodes_explored", r.nodes_explored}};
    if (r.best_strategy) {
        j["f"] = r.best_value;
        j["strategy"] = strategy_to_json(*r.best_strategy)["pi"];
    } else {
        j["f"] = nullptr;
        j["strategy"] = nullptr;
    }
    j["nodes_per_depth"] = r.nodes_per_depth;
    return j;
}

std::string search_log_csv(const SolveResult& r) {
    std::ostringstream out;
    out << "depth,t,nodes\n";
    for (std::size_t e = 0; e < r.nodes_per_depth.size(); ++e)
        out << e << ',' << e + 1 << ',' << r.nodes_per_depth[e] << '\n';
    return out.str();
}

} // namespace capmdp
