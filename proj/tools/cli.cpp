#include "cli.hpp"

#include "capmdp/analysis.hpp"
#include "capmdp/errors.hpp"
#include "capmdp/evaluate.hpp"
#include "capmdp/exact.hpp"
#include "capmdp/generator.hpp"
#include "capmdp/io.hpp"
#include "capmdp/padp.hpp"
#include "capmdp/parallel.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <ostream>
#include <sstream>

#ifndef CAPMDP_VERSION
#define CAPMDP_VERSION "0.0.0"
#endif

namespace capmdp::cli {

namespace {

using Clock = std::chrono::steady_clock;

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Flag beats CAPMDP_SEED beats 0.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("CAPMDP_SEED")) {
        try {
            std::size_t used = 0;
            const std::string text(env);
            const auto v = std::stoull(text, &used);
            if (used != text.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw ParameterError(std::string("CAPMDP_SEED is not an unsigned integer: ") + env);
        }
    }
    return 0;
}

struct Context {
    std::ostream& out;
    std::vector<std::string> argv;
    Clock::time_point start = Clock::now();
    std::string started_at = utc_now();
};

// Output goes to the file when one is named, else to stdout.
void emit(Context& ctx, const std::string& path, const std::string& text) {
    if (path.empty())
        ctx.out << text;
    else
        write_text(path, text);
}

// The manifest sits next to the primary output so that the output itself
// stays byte-reproducible.
void write_manifest(Context& ctx, const std::string& command, const std::string& primary,
                    const json& config, std::optional<std::uint64_t> seed,
                    const std::vector<std::string>& outputs, const json& extra = json::object()) {
    if (primary.empty()) return;
    json m{{"command", command},
           {"argv", ctx.argv},
           {"config", config},
           {"version", CAPMDP_VERSION},
           {"started_at", ctx.started_at},
           {"wall_clock_seconds",
            std::chrono::duration<double>(Clock::now() - ctx.start).count()},
           {"outputs", outputs}};
    m["seed"] = seed ? json(*seed) : json(nullptr);
    for (const auto& [k, v] : extra.items()) m[k] = v;
    write_text(primary + ".manifest.json", dump(m));
}

double round12(double v) { return std::round(v * 1e12) / 1e12; }

std::string fixed(double v, int digits) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(digits) << v;
    return out.str();
}

} // namespace

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    auto number = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ParameterError("bad number \"" + s + "\" in grid \"" + text + "\"");
        }
    };
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() != 3) throw ParameterError("grid range must be start:stop:step");
        const double a = number(parts[0]), b = number(parts[1]), step = number(parts[2]);
        if (!(step > 0.0) || b < a) throw ParameterError("grid range needs step > 0 and stop >= start");
        const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
        for (std::size_t k = 0; k < count; ++k) grid.push_back(round12(a + static_cast<double>(k) * step));
    } else {
        std::stringstream ss(text);
        for (std::string p; std::getline(ss, p, ',');) grid.push_back(number(p));
    }
    if (grid.empty()) throw ParameterError("empty grid");
    return grid;
}

std::vector<TableCell> value_tables(const TableSpec& spec) {
    std::vector<TableCell> cells;
    for (double eps : spec.epsilons) {
        for (int T : spec.horizons) {
            TableCell cell;
            cell.epsilon = eps;
            cell.horizon = T;
            for (std::size_t k = 0; k < spec.seeds; ++k) {
                GeneratorConfig cfg;
                cfg.params = {spec.scenarios, T, spec.c, eps, spec.base_seed + k, spec.population};
                cfg.model = spec.model;
                cfg.states = spec.states;
                cfg.mc_iterations = spec.mc_iterations;
                const Instance inst = generate_from_config(cfg);

                const EvssResult evss = compute_evss(inst);
                double wait_and_see = 0.0;
                for (std::size_t w = 0; w < evss.per_scenario.size(); ++w)
                    wait_and_see += inst.lambda[w] * evss.per_scenario[w].f_omega;
                const double evpi = (wait_and_see - evss.f_star) / evss.f_star * 100.0;
                const double flex = compute_flexibility(inst).percent;

                cell.evss_percent += evss.evss_percent;
                cell.evpi_percent += evpi;
                cell.flexibility_percent += flex;
                cell.evss_min = k ? std::min(cell.evss_min, evss.evss_percent) : evss.evss_percent;
                cell.evpi_min = k ? std::min(cell.evpi_min, evpi) : evpi;
                cell.flexibility_min = k ? std::min(cell.flexibility_min, flex) : flex;
            }
            const double m = static_cast<double>(std::max<std::size_t>(spec.seeds, 1));
            cell.evss_percent /= m;
            cell.evpi_percent /= m;
            cell.flexibility_percent /= m;
            cells.push_back(cell);
        }
    }
    return cells;
}

std::string tables_csv(const std::vector<TableCell>& cells) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "epsilon,T,evss_percent,evpi_percent,flexibility_percent,evss_min,evpi_min,flexibility_min\n";
    for (const auto& c : cells)
        out << c.epsilon << ',' << c.horizon << ',' << c.evss_percent << ',' << c.evpi_percent << ','
            << c.flexibility_percent << ',' << c.evss_min << ',' << c.evpi_min << ','
            << c.flexibility_min << '\n';
    return out.str();
}

std::string tables_ascii(const std::vector<TableCell>& cells) {
    std::ostringstream out;
    const std::string rule = "+---------+----+----------+----------+-----------------+\n";
    out << rule << "| epsilon |  T | EVSS (%) | EVPI (%) | flexibility (%) |\n" << rule;
    double last_eps = -1.0;
    for (const auto& c : cells) {
        if (last_eps >= 0.0 && c.epsilon != last_eps) out << rule;
        const std::string eps = c.epsilon == last_eps ? "" : fixed(c.epsilon, 2);
        last_eps = c.epsilon;
        out << "| " << std::setw(7) << eps << " | " << std::setw(2) << c.horizon << " | "
            << std::setw(8) << fixed(c.evss_percent, 2) << " | " << std::setw(8)
            << fixed(c.evpi_percent, 2) << " | " << std::setw(15)
            << fixed(c.flexibility_percent, 2) << " |\n";
    }
    out << rule;
    return out.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Context ctx{out, std::vector<std::string>(argv, argv + argc)};

    CLI::App app{"Capacity-constrained multi-model MDP toolkit"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

    // generate
    auto* gen = app.add_subcommand("generate", "Generate an instance I(|Omega|, T, c, epsilon)");
    std::string gen_config, gen_out;
    std::optional<std::uint64_t> gen_seed;
    GeneratorConfig gcfg;
    gen->add_option("--config", gen_config, "Generator config JSON; replaces the other flags except --seed");
    gen->add_option("--scenarios", gcfg.params.n_scenarios, "|Omega|");
    gen->add_option("--T", gcfg.params.horizon, "Number of periods");
    gen->add_option("--c", gcfg.params.capacity_fraction, "Capacity fraction in (0, 1]");
    gen->add_option("--epsilon", gcfg.params.noise_radius, "Noise radius in (0, 1)");
    gen->add_option("--seed", gen_seed, "Seed (default: $CAPMDP_SEED, else 0)");
    gen->add_option("--N", gcfg.params.population, "Population");
    gen->add_option("--mc-iterations", gcfg.mc_iterations, "Monte Carlo draws for the nominal model");
    gen->add_option("--model", gcfg.model, "chronic (6 states) or random")
        ->check(CLI::IsMember({"chronic", "random"}));
    gen->add_option("--states", gcfg.states, "State count of the random model");
    gen->add_option("-o,--output", gen_out, "Instance file (default stdout)");

    // solve
    auto* sol = app.add_subcommand("solve", "Optimize a strategy");
    std::string sol_in, sol_out, sol_method = "exact", sol_log, sol_timing;
    SolveLimits limits;
    bool no_bound = false;
    sol->add_option("instance", sol_in, "Instance file")->required();
    sol->add_option("--method", sol_method, "exact, padp or stationary")
        ->check(CLI::IsMember({"exact", "padp", "stationary"}));
    sol->add_option("--max-nodes", limits.max_nodes, "Node limit (0 = none)");
    sol->add_option("--max-seconds", limits.max_seconds, "Time limit (0 = none)");
    sol->add_flag("--no-bound", no_bound, "Disable optimistic-bound pruning");
    sol->add_option("-o,--output", sol_out, "Result file (default stdout)");
    sol->add_option("--search-log", sol_log, "Nodes-per-depth CSV (exact methods)");
    sol->add_option("--timing", sol_timing, "Per-stage timing CSV (padp)");

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "Evaluate a fixed strategy");
    std::string ev_in, ev_strat, ev_out;
    bool ev_traj = false;
    ev->add_option("instance", ev_in, "Instance file")->required();
    ev->add_option("strategy", ev_strat, "Strategy file")->required();
    ev->add_flag("--trajectory", ev_traj, "Include occupancy measures");
    ev->add_option("-o,--output", ev_out, "Result file (default stdout)");

    // analyze
    auto* an = app.add_subcommand("analyze", "EVSS, EVPI, flexibility and capacity sweeps");
    std::string an_in, an_out, an_csv, an_grid = "0.2:0.8:0.1", an_solver = "exact";
    std::vector<std::string> suites{"all"};
    std::size_t repair_cap = 6;
    an->add_option("instance", an_in, "Instance file")->required();
    an->add_option("--suite", suites, "evss, evpi, flexibility, sweep or all")
        ->check(CLI::IsMember({"evss", "evpi", "flexibility", "sweep", "all"}));
    an->add_option("--solver", an_solver, "exact or padp")->check(CLI::IsMember({"exact", "padp"}));
    an->add_option("--grid", an_grid, "Capacity grid, start:stop:step or a,b,c");
    an->add_option("--repair-max-distance", repair_cap, "Iterative-deepening cap of the repair");
    an->add_option("-o,--output", an_out, "Report JSON (default stdout)");
    an->add_option("--csv", an_csv, "Flat CSV report");

    // experiment
    auto* ex = app.add_subcommand("experiment", "Stochastic-value tables over epsilon x T");
    TableSpec spec;
    std::string ex_T = "4,5,6", ex_eps = "0.1,0.25,0.5", ex_out, ex_ascii;
    std::optional<std::uint64_t> ex_seed;
    ex->add_option("--T", ex_T, "Horizons, comma separated");
    ex->add_option("--epsilon", ex_eps, "Noise radii, comma separated");
    ex->add_option("--scenarios", spec.scenarios, "|Omega|");
    ex->add_option("--states", spec.states, "State count of the random model");
    ex->add_option("--model", spec.model, "chronic or random")->check(CLI::IsMember({"chronic", "random"}));
    ex->add_option("--c", spec.c, "Capacity fraction");
    ex->add_option("--instances", spec.seeds, "Instances averaged per cell");
    ex->add_option("--seed", ex_seed, "First seed (default: $CAPMDP_SEED, else 0)");
    ex->add_option("-o,--output", ex_out, "Table CSV (default stdout)");
    ex->add_option("--ascii", ex_ascii, "Also write an ASCII rendering here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        set_thread_count(threads);

        if (*gen) {
            if (!gen_config.empty()) {
                gcfg = generator_config_from_json(read_json(gen_config));
                if (gen_seed) gcfg.params.seed = *gen_seed;
            } else {
                gcfg.params.seed = resolve_seed(gen_seed);
            }
            const Instance inst = generate_from_config(gcfg);
            emit(ctx, gen_out, dump(instance_to_json(inst)));
            write_manifest(ctx, "generate", gen_out, generator_config_to_json(gcfg),
                           gcfg.params.seed, {gen_out});
            return kOk;
        }

        if (*sol) {
            const Instance inst = load_instance(sol_in);
            limits.use_bound = !no_bound;
            json result;
            json extra;
            int code = kOk;
            if (sol_method == "padp") {
                const PadpResult r = solve_padp(inst);
                result = padp_result_to_json(r);
                if (!sol_timing.empty()) write_text(sol_timing, padp_timing_csv(r));
                double seconds = 0.0;
                for (double s : r.stage_seconds) seconds += s;
                extra = {{"solve_seconds", seconds}};
                if (r.status != PadpStatus::Solved) code = kInfeasible;
            } else {
                const SolveResult r = sol_method == "exact" ? solve_exact(inst, limits)
                                                            : solve_exact_stationary(inst, limits);
                result = solve_result_to_json(r);
                if (!sol_log.empty()) write_text(sol_log, search_log_csv(r));
                extra = {{"solve_seconds", r.seconds}, {"nodes_explored", r.nodes_explored}};
                if (r.status == SolveStatus::Infeasible) code = kInfeasible;
                if (r.status == SolveStatus::LimitExceeded) code = kLimitExceeded;
            }
            json head{{"method", sol_method}};
            head.update(result);
            result = head;
            emit(ctx, sol_out, dump(result));
            write_manifest(ctx, "solve", sol_out,
                           {{"instance", sol_in},
                            {"method", sol_method},
                            {"max_nodes", limits.max_nodes},
                            {"max_seconds", limits.max_seconds},
                            {"bound", limits.use_bound}},
                           std::nullopt, {sol_out}, extra);
            if (code == kInfeasible) err << "status: Infeasible\n";
            if (code == kLimitExceeded) err << "status: LimitExceeded\n";
            return code;
        }

        if (*ev) {
            const Instance inst = load_instance(ev_in);
            const Strategy strat = load_strategy(ev_strat);
            const EvaluationResult r = evaluate_strategy(inst, strat);
            json j = evaluation_to_json(r, ev_traj);
            j["conservation_deviation"] = check_proposition1(inst, r.trajectory);
            j["capacity_identity_slack"] = check_proposition2(inst, r.trajectory);
            emit(ctx, ev_out, dump(j));
            write_manifest(ctx, "evaluate", ev_out, {{"instance", ev_in}, {"strategy", ev_strat}},
                           std::nullopt, {ev_out});
            return kOk;
        }

        if (*an) {
            const Instance inst = load_instance(an_in);
            AnalysisOptions opt;
            opt.solver = solver_from_string(an_solver);
            opt.repair_max_distance = repair_cap;
            const AnalysisReport r = run_analysis(inst, suites, parse_grid(an_grid), opt);
            emit(ctx, an_out, dump(analysis_to_json(r)));
            if (!an_csv.empty()) write_text(an_csv, analysis_to_csv(r));
            std::vector<std::string> outputs{an_out};
            if (!an_csv.empty()) outputs.push_back(an_csv);
            write_manifest(ctx, "analyze", an_out,
                           {{"instance", an_in},
                            {"suites", suites},
                            {"solver", an_solver},
                            {"grid", an_grid},
                            {"repair_max_distance", repair_cap}},
                           std::nullopt, outputs);
            return kOk;
        }

        if (*ex) {
            spec.horizons.clear();
            for (double t : parse_grid(ex_T)) spec.horizons.push_back(static_cast<int>(t));
            spec.epsilons = parse_grid(ex_eps);
            spec.base_seed = resolve_seed(ex_seed);
            const auto cells = value_tables(spec);
            emit(ctx, ex_out, tables_csv(cells));
            if (!ex_ascii.empty()) write_text(ex_ascii, tables_ascii(cells));
            else if (!ex_out.empty()) out << tables_ascii(cells);
            std::vector<std::string> outputs{ex_out};
            if (!ex_ascii.empty()) outputs.push_back(ex_ascii);
            write_manifest(ctx, "experiment", ex_out,
                           {{"T", ex_T},
                            {"epsilon", ex_eps},
                            {"scenarios", spec.scenarios},
                            {"states", spec.states},
                            {"model", spec.model},
                            {"c", spec.c},
                            {"instances", spec.seeds}},
                           spec.base_seed, outputs);
            return kOk;
        }
    } catch (const InfeasibleError& e) {
        err << "infeasible: " << e.what() << '\n';
        return kInfeasible;
    } catch (const LimitExceeded& e) {
        err << "limit exceeded: " << e.what() << '\n';
        return kLimitExceeded;
    } catch (const SchemaError& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const ValidationError& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const DimensionError& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const ParameterError& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}

} // namespace capmdp::cli
