#include "capmdp/evaluate.hpp"
#include "capmdp/rng.hpp"

#include "capmdp/errors.hpp"

namespace capmdp {

namespace {

constexpr std::size_t kAbsorbed = static_cast<std::size_t>(-1);

// Inverse-CDF draw over a row of non-absorbing targets; anything past the
// row's cumulative mass (the Q share, plus rounding) lands in the absorbing state.
std::size_t draw_next(std::span<const double> row, double u) {
    double cum = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
        cum += row[j];
        if (u < cum) return j;
    }
    return kAbsorbed;
}

std::size_t draw_initial(std::span<const double> theta, double u) {
    double cum = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        cum += theta[i];
        if (u < cum) return i;
    }
    // rounding of theta's sum: fall back to the last state with mass
    for (std::size_t i = theta.size(); i-- > 0;)
        if (theta[i] > 0.0) return i;
    return 0;
}

} // namespace

OccupancyTrajectory simulate_cohort(const Instance& inst, const Strategy& strat,
                                    std::size_t samples, std::uint64_t seed) {
    check_dimensions(inst, strat);
    if (samples < 1) throw ParameterError("simulate_cohort: samples must be >= 1");
    const std::size_t n = inst.n_states();
    const std::size_t epochs = inst.n_epochs();
    const std::size_t scenarios = inst.n_scenarios();

    OccupancyTrajectory tr = OccupancyTrajectory::zeros(scenarios, epochs, n);
    std::vector<std::uint64_t> x_count(tr.X.size(), 0);
    std::vector<std::uint64_t> z_count(tr.Z.size(), 0);
    std::vector<std::uint64_t> y_count(tr.Y.size(), 0);

    const long long nw = static_cast<long long>(scenarios);
#pragma omp parallel for schedule(static)
    for (long long sw = 0; sw < nw; ++sw) {
        const auto w = static_cast<std::size_t>(sw);
        const Scenario& s = inst.scenarios[w];
        Rng rng(seed, w);
        for (std::size_t k = 0; k < samples; ++k) {
            std::size_t state = draw_initial(inst.theta, rng.uniform());
            for (std::size_t e = 0; e < epochs; ++e) {
                const int a = strat(e, state);
                ++x_count[((w * epochs + e) * n + state) * 2 + a];
                state = draw_next(s.row(state, a), rng.uniform());
                if (state == kAbsorbed) {
                    // absorbed during the transition into period t = e + 2
                    for (std::size_t t = e + 2; t <= epochs + 1; ++t)
                        ++z_count[w * epochs + (t - 2)];
                    break;
                }
            }
            if (state != kAbsorbed) ++y_count[w * n + state];
        }
    }

    const double m = static_cast<double>(samples);
    for (std::size_t k = 0; k < tr.X.size(); ++k) tr.X[k] = static_cast<double>(x_count[k]) / m;
    for (std::size_t k = 0; k < tr.Z.size(); ++k) tr.Z[k] = static_cast<double>(z_count[k]) / m;
    for (std::size_t k = 0; k < tr.Y.size(); ++k) tr.Y[k] = static_cast<double>(y_count[k]) / m;
    return tr;
}

} // namespace capmdp
