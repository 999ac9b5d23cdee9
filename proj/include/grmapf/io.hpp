#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "grmapf/core.hpp"

namespace grmapf {

/// {"makespan": T, "agents": [{"id": i, "path": [[x, y], ...]}]}; z is written when three_d.
std::string plan_to_json(const Plan& plan, bool three_d, int indent = -1);
Plan plan_from_json(const std::string& text);

/// {"rows", "cols", "layers", "obstacles": [[x, y, z]...], "agents": [{"id", "start", "goal"}]}.
std::string instance_to_json(const Instance& instance, int indent = -1);
Instance instance_from_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// Grid benchmark map text: "type", "height H", "width W", "map", then H rows of W characters.
/// '.', 'G' and 'S' are free; every other terrain character is blocked.
GridSpec parse_map(std::istream& in);
GridSpec load_map(const std::string& path);

struct ScenarioEntry {
  int bucket = 0;
  std::string map;
  int width = 0;
  int height = 0;
  Vertex start;
  Vertex goal;
  double optimal_length = 0.0;
};

/// Version-1 scenario files; scenario columns are (x = column, y = row) and are converted to
/// this library's (row, column) vertices.
std::vector<ScenarioEntry> parse_scenario(std::istream& in);
std::vector<ScenarioEntry> load_scenario(const std::string& path);

/// Instance from the first `count` entries (all when count < 0).
Instance instance_from_scenario(const GridSpec& grid, const std::vector<ScenarioEntry>& entries, int count = -1);

}  // namespace grmapf
