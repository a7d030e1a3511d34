#include "capmdp/model.hpp"

#include "capmdp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace capmdp {

Scenario Scenario::zeros(std::size_t n) {
    Scenario s;
    s.n = n;
    s.P.assign(n * 2 * n, 0.0);
    s.Q.assign(n * 2, 0.0);
    s.r.assign(n * 2, 0.0);
    s.R.assign(n, 0.0);
    return s;
}

Strategy::Strategy(std::size_t epochs, std::size_t states, std::uint8_t fill)
    : epochs_(epochs), states_(states), bits_(epochs * states, fill ? 1 : 0) {}

Strategy Strategy::from_rows(const std::vector<std::vector<int>>& rows) {
    const std::size_t states = rows.empty() ? 0 : rows.front().size();
    Strategy s(rows.size(), states);
    for (std::size_t e = 0; e < rows.size(); ++e) {
        if (rows[e].size() != states)
            throw DimensionError("strategy row " + std::to_string(e) + " has " +
                                 std::to_string(rows[e].size()) + " entries, expected " +
                                 std::to_string(states));
        for (std::size_t i = 0; i < states; ++i) {
            const int v = rows[e][i];
            if (v != 0 && v != 1)
                throw ParameterError("strategy entry [" + std::to_string(e) + "][" +
                                     std::to_string(i) + "] = " + std::to_string(v) +
                                     " is not binary");
            s.set(e, i, static_cast<std::uint8_t>(v));
        }
    }
    return s;
}

Strategy Strategy::stationary(std::size_t epochs, std::span<const std::uint8_t> row) {
    Strategy s(epochs, row.size());
    for (std::size_t e = 0; e < epochs; ++e)
        for (std::size_t i = 0; i < row.size(); ++i) s.set(e, i, row[i]);
    return s;
}

std::size_t Strategy::count_ones() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::vector<std::vector<int>> Strategy::to_rows() const {
    std::vector<std::vector<int>> rows(epochs_, std::vector<int>(states_));
    for (std::size_t e = 0; e < epochs_; ++e)
        for (std::size_t i = 0; i < states_; ++i) rows[e][i] = (*this)(e, i);
    return rows;
}

std::size_t hamming_distance(const Strategy& a, const Strategy& b) {
    if (a.epochs() != b.epochs() || a.states() != b.states())
        throw DimensionError("hamming_distance: strategies differ in shape");
    std::size_t d = 0;
    for (std::size_t k = 0; k < a.bits().size(); ++k) d += a.bits()[k] != b.bits()[k];
    return d;
}

OccupancyTrajectory OccupancyTrajectory::zeros(std::size_t scenarios, std::size_t epochs,
                                               std::size_t states) {
    OccupancyTrajectory tr;
    tr.scenarios = scenarios;
    tr.epochs = epochs;
    tr.states = states;
    tr.X.assign(scenarios * epochs * states * 2, 0.0);
    tr.Z.assign(scenarios * epochs, 0.0);
    tr.Y.assign(scenarios * states, 0.0);
    return tr;
}

void InstanceParams::validate() const {
    if (n_scenarios < 1) throw ParameterError("number of scenarios must be >= 1");
    if (horizon < 2) throw ParameterError("horizon T must be >= 2");
    if (!(capacity_fraction > 0.0 && capacity_fraction <= 1.0))
        throw ParameterError("capacity fraction c must lie in (0, 1], got " +
                             std::to_string(capacity_fraction));
    if (!(noise_radius > 0.0 && noise_radius < 1.0))
        throw ParameterError("noise radius epsilon must lie in (0, 1), got " +
                             std::to_string(noise_radius));
    if (population < 1) throw ParameterError("population N must be positive");
}

std::string Violation::message() const {
    std::ostringstream os;
    os.precision(17);
    os << location << ": " << identity << " (value " << value << ")";
    return os.str();
}

namespace {

std::string row_location(std::size_t w, std::size_t i, int a) {
    return "scenario " + std::to_string(w) + ", row (i=" + std::to_string(i) +
           ", a=" + std::to_string(a) + ")";
}

void check_scenario(const Scenario& s, std::size_t w, std::size_t n, ValidationReport& report) {
    const std::string where = "scenario " + std::to_string(w);
    if (s.n != n || s.P.size() != n * 2 * n || s.Q.size() != n * 2 || s.r.size() != n * 2 ||
        s.R.size() != n) {
        report.push_back({where, "array shapes match |S| = " + std::to_string(n),
                          static_cast<double>(s.n)});
        return;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (int a = 0; a < 2; ++a) {
            double sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double p = s.p(i, a, j);
                if (!(p >= 0.0) || !std::isfinite(p))
                    report.push_back({row_location(w, i, a) + ", j=" + std::to_string(j),
                                      "P >= 0", p});
                sum += p;
            }
            const double q = s.q(i, a);
            if (!(q >= 0.0) || !std::isfinite(q))
                report.push_back({row_location(w, i, a), "Q >= 0", q});
            sum += q;
            if (!(std::abs(sum - 1.0) <= kProbabilityTolerance))
                report.push_back({row_location(w, i, a),
                                  "sum_j P + Q = 1 (deficit " + std::to_string(1.0 - sum) + ")",
                                  sum});
            if (!std::isfinite(s.reward(i, a)))
                report.push_back({row_location(w, i, a), "r finite", s.reward(i, a)});
        }
        if (!std::isfinite(s.R[i]))
            report.push_back({where + ", state " + std::to_string(i), "R finite", s.R[i]});
    }
}

} // namespace

ValidationReport validate_instance(const Instance& inst) {
    ValidationReport report;
    const std::size_t n = inst.n_states();

    if (inst.horizon < 2)
        report.push_back({"instance", "T >= 2", static_cast<double>(inst.horizon)});
    if (n < 1) report.push_back({"states", "|S| >= 1", 0.0});
    if (inst.population < 1)
        report.push_back({"N", "N >= 1", static_cast<double>(inst.population)});
    if (!std::isfinite(inst.absorbing_reward))
        report.push_back({"absorbing_reward", "R_D finite", inst.absorbing_reward});

    if (inst.theta.size() != n) {
        report.push_back({"theta", "|theta| = |S|", static_cast<double>(inst.theta.size())});
    } else {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(inst.theta[i] >= 0.0))
                report.push_back({"theta[" + std::to_string(i) + "]", "theta_i >= 0",
                                  inst.theta[i]});
            sum += inst.theta[i];
        }
        if (!(std::abs(sum - 1.0) <= kProbabilityTolerance))
            report.push_back({"theta", "initial distribution sums " + std::to_string(sum), sum});
    }

    if (inst.horizon >= 2 && inst.capacities.size() != inst.n_epochs()) {
        report.push_back({"capacities", "|C| = T - 1",
                          static_cast<double>(inst.capacities.size())});
    }
    for (std::size_t e = 0; e < inst.capacities.size(); ++e)
        if (!(inst.capacities[e] >= 0.0) || !std::isfinite(inst.capacities[e]))
            report.push_back({"capacities[" + std::to_string(e) + "]", "C_t >= 0",
                              inst.capacities[e]});

    if (inst.scenarios.empty()) report.push_back({"scenarios", "|scenarios| >= 1", 0.0});
    if (inst.lambda.size() != inst.scenarios.size()) {
        report.push_back({"lambda", "|lambda| = |scenarios|",
                          static_cast<double>(inst.lambda.size())});
    } else if (!inst.lambda.empty()) {
        double sum = 0.0;
        for (std::size_t w = 0; w < inst.lambda.size(); ++w) {
            if (!(inst.lambda[w] > 0.0))
                report.push_back({"lambda[" + std::to_string(w) + "]", "lambda_w > 0",
                                  inst.lambda[w]});
            sum += inst.lambda[w];
        }
        if (!(std::abs(sum - 1.0) <= kProbabilityTolerance)) {
            std::ostringstream os;
            os << "scenario probabilities sum " << sum;
            report.push_back({"lambda", os.str(), sum});
        }
    }

    for (std::size_t w = 0; w < inst.scenarios.size(); ++w)
        check_scenario(inst.scenarios[w], w, n, report);
    return report;
}

void require_valid(const Instance& inst) {
    const auto report = validate_instance(inst);
    if (report.empty()) return;
    std::string msg = "invalid instance:";
    for (const auto& v : report) msg += "\n  " + v.message();
    throw ValidationError(msg);
}

void check_dimensions(const Instance& inst, const Strategy& strat) {
    if (strat.epochs() != inst.n_epochs() || strat.states() != inst.n_states())
        throw DimensionError("strategy is " + std::to_string(strat.epochs()) + "x" +
                             std::to_string(strat.states()) + ", instance expects " +
                             std::to_string(inst.n_epochs()) + "x" +
                             std::to_string(inst.n_states()));
}

Instance single_scenario(const Instance& inst, std::size_t w) {
    Instance out = inst;
    out.scenarios = {inst.scenarios.at(w)};
    out.lambda = {1.0};
    return out;
}

Instance with_capacity_fraction(const Instance& inst, double c) {
    Instance out = inst;
    const double cap = c * static_cast<double>(inst.population);
    out.capacities.assign(inst.n_epochs(), cap);
    return out;
}

} // namespace capmdp
