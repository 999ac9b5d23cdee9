#include "grmapf/io.hpp"

#include <algorithm>
#include <fstream>
#include "json.hpp"
#include <sstream>

namespace grmapf {

namespace {

using json = nlohmann::ordered_json;

json vertex_json(const Vertex& v, bool three_d) {
  return three_d ? json::array({v.x, v.y, v.z}) : json::array({v.x, v.y});
}

Vertex vertex_from(const json& j) {
  if (!j.is_array() || j.size() < 2 || j.size() > 3) throw PreconditionError("vertex must be [x, y] or [x, y, z]");
  return Vertex{j[0].get<int>(), j[1].get<int>(), j.size() == 3 ? j[2].get<int>() : 0};
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string plan_to_json(const Plan& plan, bool three_d, int indent) {
  json j;
  j["makespan"] = plan.makespan();
  json agents = json::array();
  for (std::size_t i = 0; i < plan.paths.size(); ++i) {
    json path = json::array();
    for (const auto& v : plan.paths[i]) path.push_back(vertex_json(v, three_d));
    agents.push_back(json{{"id", i}, {"path", std::move(path)}});
  }
  j["agents"] = std::move(agents);
  return j.dump(indent);
}

Plan plan_from_json(const std::string& text) {
  const json j = parse(text);
  Plan plan;
  try {
    const auto& agents = j.at("agents");
    plan.paths.resize(agents.size());
    for (const auto& a : agents) {
      const auto id = a.at("id").get<std::size_t>();
      if (id >= plan.paths.size()) throw PreconditionError("agent id out of range");
      for (const auto& v : a.at("path")) plan.paths[id].push_back(vertex_from(v));
    }
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("bad plan JSON: ") + e.what());
  }
  return plan;
}

std::string instance_to_json(const Instance& instance, int indent) {
  const GridSpec& g = instance.grid();
  const bool d3 = g.is_3d();
  json j;
  j["rows"] = g.rows();
  j["cols"] = g.cols();
  j["layers"] = g.layers();
  json obs = json::array();
  for (const auto& v : g.obstacles()) obs.push_back(vertex_json(v, d3));
  j["obstacles"] = std::move(obs);
  json agents = json::array();
  for (int i = 0; i < instance.size(); ++i) {
    agents.push_back(json{{"id", i},
                          {"start", vertex_json(instance.starts()[static_cast<std::size_t>(i)], d3)},
                          {"goal", vertex_json(instance.goals()[static_cast<std::size_t>(i)], d3)}});
  }
  j["agents"] = std::move(agents);
  return j.dump(indent);
}

Instance instance_from_json(const std::string& text) {
  const json j = parse(text);
  try {
    std::vector<Vertex> obstacles;
    for (const auto& v : j.value("obstacles", json::array())) obstacles.push_back(vertex_from(v));
    GridSpec grid(j.at("rows").get<int>(), j.at("cols").get<int>(), j.value("layers", 1), obstacles);
    const auto& agents = j.at("agents");
    std::vector<Vertex> s(agents.size()), g(agents.size());
    std::vector<char> seen(agents.size(), 0);
    for (std::size_t k = 0; k < agents.size(); ++k) {
      const auto& a = agents[k];
      const std::size_t id = a.contains("id") ? a["id"].get<std::size_t>() : k;
      if (id >= agents.size() || seen[id]) throw PreconditionError("agent ids must be 0..n-1 without repeats");
      seen[id] = 1;
      s[id] = vertex_from(a.at("start"));
      g[id] = vertex_from(a.at("goal"));
    }
    return Instance(std::move(grid), std::move(s), std::move(g));
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("bad instance JSON: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
  if (!out) throw Error("write failed for " + path);
}

GridSpec parse_map(std::istream& in) {
  std::string key;
  int height = -1, width = -1;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    if (!(ls >> key)) continue;
    if (key == "type") continue;
    if (key == "height") ls >> height;
    else if (key == "width") ls >> width;
    else if (key == "map") break;
    else throw PreconditionError("unexpected map header line '" + line + "'");
  }
  if (height <= 0 || width <= 0) throw PreconditionError("map header lacks a positive height and width");
  std::vector<Vertex> obstacles;
  for (int x = 0; x < height; ++x) {
    if (!std::getline(in, line)) throw PreconditionError("map has fewer rows than its height");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (static_cast<int>(line.size()) < width) throw PreconditionError("map row " + std::to_string(x) + " is too short");
    for (int y = 0; y < width; ++y) {
      const char c = line[static_cast<std::size_t>(y)];
      if (c != '.' && c != 'G' && c != 'S') obstacles.push_back({x, y, 0});
    }
  }
  return GridSpec(height, width, 1, obstacles);
}

GridSpec load_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return parse_map(in);
}

std::vector<ScenarioEntry> parse_scenario(std::istream& in) {
  std::string line;
  std::vector<ScenarioEntry> out;
  bool header = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line.rfind("version", 0) != 0) throw PreconditionError("scenario must start with a version line");
      header = true;
      continue;
    }
    std::istringstream ls(line);
    ScenarioEntry e;
    int sx, sy, gx, gy;
    if (!(ls >> e.bucket >> e.map >> e.width >> e.height >> sx >> sy >> gx >> gy >> e.optimal_length)) {
      throw PreconditionError("bad scenario line " + std::to_string(lineno));
    }
    e.start = {sy, sx, 0};
    e.goal = {gy, gx, 0};
    out.push_back(e);
  }
  return out;
}

std::vector<ScenarioEntry> load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return parse_scenario(in);
}

Instance instance_from_scenario(const GridSpec& grid, const std::vector<ScenarioEntry>& entries, int count) {
  const std::size_t n = count < 0 ? entries.size() : std::min(entries.size(), static_cast<std::size_t>(count));
  std::vector<Vertex> s, g;
  for (std::size_t i = 0; i < n; ++i) {
    if (entries[i].width != grid.cols() || entries[i].height != grid.rows()) {
      throw PreconditionError("scenario entry " + std::to_string(i) + " was made for a different map size");
    }
    s.push_back(entries[i].start);
    g.push_back(entries[i].goal);
  }
  return Instance(grid, std::move(s), std::move(g));
}

}  // namespace grmapf
