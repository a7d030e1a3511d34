#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace capmdp::cli {

enum ExitCode { kOk = 0, kFailure = 1, kInputError = 2, kInfeasible = 3, kLimitExceeded = 4 };

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "a:b:step" (inclusive) or "a,b,c".
std::vector<double> parse_grid(const std::string& text);

struct TableSpec {
    std::vector<int> horizons{4, 5, 6};
    std::vector<double> epsilons{0.1, 0.25, 0.5};
    std::size_t scenarios = 20;
    std::size_t states = 3;
    double c = 0.4;
    std::size_t seeds = 5;
    std::uint64_t base_seed = 0;
    std::int64_t population = 1000;
    std::string model = "random";
    std::size_t mc_iterations = 10000;
};

struct TableCell {
    double epsilon = 0.0;
    int horizon = 0;
    double evss_percent = 0.0; ///< mean over seeds
    double evpi_percent = 0.0;
    double flexibility_percent = 0.0;
    double evss_min = 0.0;     ///< smallest single-instance value
    double evpi_min = 0.0;
    double flexibility_min = 0.0;
};

/// Stochastic-value tables over epsilon x T; instance k of a cell uses seed
/// base_seed + k, so cells with the same k share their nominal model.
std::vector<TableCell> value_tables(const TableSpec& spec);
std::string tables_csv(const std::vector<TableCell>& cells);
std::string tables_ascii(const std::vector<TableCell>& cells);

} // namespace capmdp::cli
