#pragma once

// Domain types for finite-horizon, capacity-constrained multi-model MDPs.
//
// Indexing conventions used throughout the library:
//   * non-absorbing states are 0-based and contiguous; the absorbing state has
//     no index and is only visible through Q (inflow) and Z (cumulative mass);
//   * decision epochs t = 1..T-1 are stored at the 0-based epoch index e = t-1;
//   * actions are binary: 0 = regular service, 1 = capacity-limited service.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace capmdp {

/// Absolute tolerance for every probability identity (row sums, PMFs).
inline constexpr double kProbabilityTolerance = 1e-9;
/// Absolute slack (headcount units) on the capacity constraint.
inline constexpr double kCapacitySlack = 1e-6;

/// One model of the multi-model MDP: transitions P, Q and rewards r, R.
struct Scenario {
    std::size_t n = 0;
    std::vector<double> P; ///< [(i*2 + a)*n + j], among non-absorbing states
    std::vector<double> Q; ///< [i*2 + a], into the absorbing state
    std::vector<double> r; ///< [i*2 + a], immediate reward
    std::vector<double> R; ///< [i], terminal reward at period T

    static Scenario zeros(std::size_t n);

    double& p(std::size_t i, int a, std::size_t j) { return P[(i * 2 + a) * n + j]; }
    double p(std::size_t i, int a, std::size_t j) const { return P[(i * 2 + a) * n + j]; }
    double& q(std::size_t i, int a) { return Q[i * 2 + a]; }
    double q(std::size_t i, int a) const { return Q[i * 2 + a]; }
    double& reward(std::size_t i, int a) { return r[i * 2 + a]; }
    double reward(std::size_t i, int a) const { return r[i * 2 + a]; }

    /// Transition row (i, a) over non-absorbing targets.
    std::span<const double> row(std::size_t i, int a) const {
        return {P.data() + (i * 2 + a) * n, n};
    }

    bool operator==(const Scenario&) const = default;
};

struct Instance {
    int horizon = 2;                      ///< T, number of periods
    std::vector<std::string> states;      ///< labels of the non-absorbing states
    std::int64_t population = 1;          ///< N
    std::vector<double> theta;            ///< initial distribution over states
    std::vector<double> capacities;       ///< C_t at epoch index e = t-1
    double absorbing_reward = 0.0;        ///< R_D, shared by all scenarios
    std::vector<double> lambda;           ///< scenario probabilities
    std::vector<Scenario> scenarios;

    std::size_t n_states() const { return states.size(); }
    std::size_t n_epochs() const { return horizon > 1 ? static_cast<std::size_t>(horizon - 1) : 0; }
    std::size_t n_scenarios() const { return scenarios.size(); }

    bool operator==(const Instance&) const = default;
};

/// Deterministic binary action table pi[e][i].
class Strategy {
public:
    Strategy() = default;
    Strategy(std::size_t epochs, std::size_t states, std::uint8_t fill = 0);

    /// Builds from nested rows; throws DimensionError on ragged input and
    /// ParameterError on entries outside {0, 1}.
    static Strategy from_rows(const std::vector<std::vector<int>>& rows);
    /// Same row at every epoch.
    static Strategy stationary(std::size_t epochs, std::span<const std::uint8_t> row);

    std::size_t epochs() const { return epochs_; }
    std::size_t states() const { return states_; }

    std::uint8_t operator()(std::size_t e, std::size_t i) const { return bits_[e * states_ + i]; }
    void set(std::size_t e, std::size_t i, std::uint8_t v) { bits_[e * states_ + i] = v ? 1 : 0; }
    void flip(std::size_t e, std::size_t i) { bits_[e * states_ + i] ^= 1; }

    std::span<const std::uint8_t> row(std::size_t e) const {
        return {bits_.data() + e * states_, states_};
    }
    /// Row-major (e, i) bit string; comparison of these is the library's
    /// lexicographic tie-break order.
    std::span<const std::uint8_t> bits() const { return bits_; }

    std::size_t count_ones() const;
    std::vector<std::vector<int>> to_rows() const;

    bool operator==(const Strategy&) const = default;
    auto operator<=>(const Strategy& other) const { return bits_ <=> other.bits_; }

private:
    std::size_t epochs_ = 0;
    std::size_t states_ = 0;
    std::vector<std::uint8_t> bits_;
};

/// Number of entries where the two strategies differ.
std::size_t hamming_distance(const Strategy& a, const Strategy& b);

/// Occupancy measures of a strategy, per scenario.
struct OccupancyTrajectory {
    std::size_t scenarios = 0;
    std::size_t epochs = 0; ///< T-1
    std::size_t states = 0;
    std::vector<double> X;  ///< [((w*epochs + e)*states + i)*2 + a]
    std::vector<double> Z;  ///< [w*epochs + (t-2)] for periods t = 2..T
    std::vector<double> Y;  ///< [w*states + i]

    static OccupancyTrajectory zeros(std::size_t scenarios, std::size_t epochs, std::size_t states);

    double& x(std::size_t w, std::size_t e, std::size_t i, int a) {
        return X[((w * epochs + e) * states + i) * 2 + a];
    }
    double x(std::size_t w, std::size_t e, std::size_t i, int a) const {
        return X[((w * epochs + e) * states + i) * 2 + a];
    }
    /// Cumulative absorbed mass at period t (1-based); Z at t = 1 is zero.
    double z(std::size_t w, std::size_t t) const { return t <= 1 ? 0.0 : Z[w * epochs + (t - 2)]; }
    double& z_ref(std::size_t w, std::size_t t) { return Z[w * epochs + (t - 2)]; }
    double& y(std::size_t w, std::size_t i) { return Y[w * states + i]; }
    double y(std::size_t w, std::size_t i) const { return Y[w * states + i]; }

    bool operator==(const OccupancyTrajectory&) const = default;
};

/// Parameters characterizing a generated instance I(|Omega|, T, c, eps).
struct InstanceParams {
    std::size_t n_scenarios = 5;
    int horizon = 5;
    double capacity_fraction = 0.4; ///< c, in (0, 1]
    double noise_radius = 0.25;     ///< eps, in (0, 1)
    std::uint64_t seed = 0;
    std::int64_t population = 1000;

    /// Throws ParameterError when out of domain.
    void validate() const;
};

struct Violation {
    std::string location; ///< e.g. "scenario 0, row (i=1, a=0)"
    std::string identity; ///< e.g. "sum_j P + Q = 1"
    double value = 0.0;   ///< offending quantity

    std::string message() const;
};

using ValidationReport = std::vector<Violation>;

/// Checks every invariant of Instance/Scenario; empty iff valid. Pure.
ValidationReport validate_instance(const Instance& inst);

/// Throws ValidationError carrying the full report when not empty.
void require_valid(const Instance& inst);

/// Throws DimensionError unless the strategy matches the instance shape.
void check_dimensions(const Instance& inst, const Strategy& strat);

/// Copy of the instance restricted to one scenario (lambda = {1}).
Instance single_scenario(const Instance& inst, std::size_t w);

/// Copy of the instance with every capacity set to c * N.
Instance with_capacity_fraction(const Instance& inst, double c);

} // namespace capmdp
