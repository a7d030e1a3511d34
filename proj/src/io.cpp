#include "capmdp/io.hpp"

#include "capmdp/errors.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace capmdp {

namespace {

void expect_fields(const json& j, const std::string& context,
                   const std::set<std::string>& fields) {
    if (!j.is_object()) throw SchemaError(context + ": expected a JSON object");
    for (const auto& name : fields)
        if (!j.contains(name)) throw SchemaError(context + ": missing field \"" + name + "\"");
    for (const auto& [key, _] : j.items())
        if (!fields.contains(key))
            throw SchemaError(context + ": unknown field \"" + key + "\"");
}

double real(const json& j, const std::string& field) {
    if (!j.is_number()) throw SchemaError("field \"" + field + "\": expected a number");
    return j.get<double>();
}

std::int64_t integer(const json& j, const std::string& field) {
    if (!j.is_number_integer())
        throw SchemaError("field \"" + field + "\": expected an integer");
    return j.get<std::int64_t>();
}

const json& array(const json& j, const std::string& field, std::size_t expected) {
    if (!j.is_array()) throw SchemaError("field \"" + field + "\": expected an array");
    if (j.size() != expected)
        throw SchemaError("field \"" + field + "\": expected " + std::to_string(expected) +
                          " entries, found " + std::to_string(j.size()));
    return j;
}

std::vector<double> reals(const json& j, const std::string& field) {
    if (!j.is_array()) throw SchemaError("field \"" + field + "\": expected an array");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t k = 0; k < j.size(); ++k)
        out.push_back(real(j[k], field + "[" + std::to_string(k) + "]"));
    return out;
}

json scenario_to_json(const Scenario& s) {
    json P = json::array(), Q = json::array(), r = json::array(), R = json::array();
    for (std::size_t i = 0; i < s.n; ++i) {
        json Pi = json::array(), Qi = json::array(), ri = json::array();
        for (int a = 0; a < 2; ++a) {
            json row = json::array();
            for (std::size_t j = 0; j < s.n; ++j) row.push_back(s.p(i, a, j));
            Pi.push_back(std::move(row));
            Qi.push_back(s.q(i, a));
            ri.push_back(s.reward(i, a));
        }
        P.push_back(std::move(Pi));
        Q.push_back(std::move(Qi));
        r.push_back(std::move(ri));
        R.push_back(s.R[i]);
    }
    return json{{"P", P}, {"Q", Q}, {"r", r}, {"R", R}};
}

Scenario scenario_from_json(const json& j, std::size_t n, std::size_t w) {
    const std::string ctx = "scenarios[" + std::to_string(w) + "]";
    expect_fields(j, ctx, {"P", "Q", "r", "R"});
    Scenario s = Scenario::zeros(n);
    const json& P = array(j["P"], ctx + ".P", n);
    const json& Q = array(j["Q"], ctx + ".Q", n);
    const json& r = array(j["r"], ctx + ".r", n);
    const json& R = array(j["R"], ctx + ".R", n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string si = "[" + std::to_string(i) + "]";
        const json& Pi = array(P[i], ctx + ".P" + si, 2);
        const json& Qi = array(Q[i], ctx + ".Q" + si, 2);
        const json& ri = array(r[i], ctx + ".r" + si, 2);
        for (int a = 0; a < 2; ++a) {
            const std::string sa = si + "[" + std::to_string(a) + "]";
            const json& row = array(Pi[a], ctx + ".P" + sa, n);
            for (std::size_t k = 0; k < n; ++k) s.p(i, a, k) = real(row[k], ctx + ".P" + sa);
            s.q(i, a) = real(Qi[a], ctx + ".Q" + sa);
            s.reward(i, a) = real(ri[a], ctx + ".r" + sa);
        }
        s.R[i] = real(R[i], ctx + ".R" + si);
    }
    return s;
}

} // namespace

json instance_to_json(const Instance& inst) {
    json scenarios = json::array();
    for (const auto& s : inst.scenarios) scenarios.push_back(scenario_to_json(s));
    return json{{"T", inst.horizon},
                {"states", inst.states},
                {"N", inst.population},
                {"theta", inst.theta},
                {"capacities", inst.capacities},
                {"absorbing_reward", inst.absorbing_reward},
                {"lambda", inst.lambda},
                {"scenarios", std::move(scenarios)}};
}

Instance instance_from_json(const json& j) {
    expect_fields(j, "instance",
                  {"T", "states", "N", "theta", "capacities", "absorbing_reward", "lambda",
                   "scenarios"});
    Instance inst;
    inst.horizon = static_cast<int>(integer(j["T"], "T"));
    if (!j["states"].is_array()) throw SchemaError("field \"states\": expected an array");
    for (const auto& label : j["states"]) {
        if (!label.is_string()) throw SchemaError("field \"states\": labels must be strings");
        inst.states.push_back(label.get<std::string>());
    }
    inst.population = integer(j["N"], "N");
    inst.theta = reals(j["theta"], "theta");
    inst.capacities = reals(j["capacities"], "capacities");
    inst.absorbing_reward = real(j["absorbing_reward"], "absorbing_reward");
    inst.lambda = reals(j["lambda"], "lambda");
    if (!j["scenarios"].is_array()) throw SchemaError("field \"scenarios\": expected an array");
    for (std::size_t w = 0; w < j["scenarios"].size(); ++w)
        inst.scenarios.push_back(scenario_from_json(j["scenarios"][w], inst.n_states(), w));
    require_valid(inst);
    return inst;
}

json strategy_to_json(const Strategy& s) { return json{{"pi", s.to_rows()}}; }

Strategy strategy_from_json(const json& j) {
    expect_fields(j, "strategy", {"pi"});
    if (!j["pi"].is_array()) throw SchemaError("field \"pi\": expected an array of rows");
    std::vector<std::vector<int>> rows;
    for (std::size_t e = 0; e < j["pi"].size(); ++e) {
        const json& row = j["pi"][e];
        if (!row.is_array()) throw SchemaError("field \"pi[" + std::to_string(e) + "]\": expected an array");
        std::vector<int> values;
        for (const auto& v : row) values.push_back(static_cast<int>(integer(v, "pi")));
        rows.push_back(std::move(values));
    }
    return Strategy::from_rows(rows);
}

json trajectory_to_json(const OccupancyTrajectory& tr) {
    json X = json::array(), Z = json::array(), Y = json::array();
    for (std::size_t w = 0; w < tr.scenarios; ++w) {
        json Xw = json::array();
        for (std::size_t e = 0; e < tr.epochs; ++e) {
            json Xe = json::array();
            for (std::size_t i = 0; i < tr.states; ++i)
                Xe.push_back(json::array({tr.x(w, e, i, 0), tr.x(w, e, i, 1)}));
            Xw.push_back(std::move(Xe));
        }
        X.push_back(std::move(Xw));
        json Zw = json::array();
        for (std::size_t t = 2; t <= tr.epochs + 1; ++t) Zw.push_back(tr.z(w, t));
        Z.push_back(std::move(Zw));
        json Yw = json::array();
        for (std::size_t i = 0; i < tr.states; ++i) Yw.push_back(tr.y(w, i));
        Y.push_back(std::move(Yw));
    }
    return json{{"X", X}, {"Z", Z}, {"Y", Y}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

Instance load_instance(const std::filesystem::path& path) {
    return instance_from_json(read_json(path));
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
    write_text(path, dump(instance_to_json(inst)));
}

Strategy load_strategy(const std::filesystem::path& path) {
    return strategy_from_json(read_json(path));
}

void save_strategy(const Strategy& s, const std::filesystem::path& path) {
    write_text(path, dump(strategy_to_json(s)));
}

} // namespace capmdp
