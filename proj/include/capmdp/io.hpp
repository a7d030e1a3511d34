#pragma once

// Canonical JSON formats.
//
// Instance:  {"T", "states", "N", "theta", "capacities", "absorbing_reward",
//             "lambda", "scenarios": [{"P", "Q", "r", "R"}]}
//            P is nested [i][a][j], Q and r are [i][a], R is [i].
// Strategy:  {"pi": [[0/1, ...], ...]} indexed [t][i].
//
// The schema is strict: missing and unknown fields are both rejected with the
// offending field named in the SchemaError message.

#include "capmdp/model.hpp"

#include <filesystem>
#include <string>

#include <json.hpp>

namespace capmdp {

using json = nlohmann::json;

json instance_to_json(const Instance& inst);
/// Parses and validates; throws SchemaError or ValidationError.
Instance instance_from_json(const json& j);

json strategy_to_json(const Strategy& s);
Strategy strategy_from_json(const json& j);

json trajectory_to_json(const OccupancyTrajectory& tr);

/// Serialized text of a JSON value as written to disk (2-space indent, trailing newline).
std::string dump(const json& j);

Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& inst, const std::filesystem::path& path);

Strategy load_strategy(const std::filesystem::path& path);
void save_strategy(const Strategy& s, const std::filesystem::path& path);

/// Reads and parses a JSON file; parse errors become SchemaError with position.
json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace capmdp
