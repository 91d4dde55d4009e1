#pragma once

#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "ss2d/world.hpp"

namespace ss2d {

nlohmann::json to_json(const WorldSnapshot& world);

/// Throws FormatError on missing or ill-typed fields.
WorldSnapshot snapshot_from_json(const nlohmann::json& j);

/// Reads a `.jsonl` scenario file; blank lines are skipped.
/// Throws FormatError naming the offending line.
std::vector<WorldSnapshot> read_scenarios(std::istream& in);

void write_scenarios(std::ostream& out, const std::vector<WorldSnapshot>& worlds);

}  // namespace ss2d
