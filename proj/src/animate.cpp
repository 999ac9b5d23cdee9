#include "grmapf/animate.hpp"

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "grmapf/io.hpp"

namespace grmapf {

namespace {

constexpr int kCell = 24;
constexpr int kGap = 16;  // between layers

std::string hue(std::size_t agent) { return "hsl(" + std::to_string((agent * 137) % 360) + ",65%,50%)"; }

}  // namespace

std::string render_frame(const Instance& instance, const Plan& plan, int t) {
  const GridSpec& g = instance.grid();
  const int layer_w = g.cols() * kCell;
  const int width = g.layers() * layer_w + (g.layers() - 1) * kGap;
  const int height = g.rows() * kCell + 20;
  auto ox = [&](int z) { return z * (layer_w + kGap); };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int z = 0; z < g.layers(); ++z) {
    for (int x = 0; x < g.rows(); ++x) {
      for (int y = 0; y < g.cols(); ++y) {
        os << "<rect x=\"" << ox(z) + y * kCell << "\" y=\"" << x * kCell << "\" width=\"" << kCell << "\" height=\""
           << kCell << "\" fill=\"" << (g.blocked(Vertex{x, y, z}) ? "#333" : "#fafafa")
           << "\" stroke=\"#ccc\"/>\n";
      }
    }
  }
  for (std::size_t i = 0; i < instance.goals().size(); ++i) {
    const Vertex& v = instance.goals()[i];
    os << "<rect x=\"" << ox(v.z) + v.y * kCell + 6 << "\" y=\"" << v.x * kCell + 6 << "\" width=\"" << kCell - 12
       << "\" height=\"" << kCell - 12 << "\" fill=\"none\" stroke=\"" << hue(i) << "\" stroke-width=\"2\"/>\n";
  }
  for (std::size_t i = 0; i < plan.paths.size(); ++i) {
    if (plan.paths[i].empty()) continue;
    const Vertex& v = plan.at(i, t);
    const int cx = ox(v.z) + v.y * kCell + kCell / 2;
    const int cy = v.x * kCell + kCell / 2;
    os << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << kCell / 2 - 2 << "\" fill=\"" << hue(i) << "\"/>\n";
    os << "<text x=\"" << cx << "\" y=\"" << cy + 4 << "\" font-size=\"10\" text-anchor=\"middle\" fill=\"white\">" << i
       << "</text>\n";
  }
  os << "<text x=\"4\" y=\"" << height - 5 << "\" font-size=\"12\">t = " << t << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::vector<std::string> export_animation(const Instance& instance, const Plan& plan, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  const int T = plan.makespan();
  for (int t = 0; t <= T; ++t) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%04d.svg", t);
    const std::string path = (std::filesystem::path(dir) / name).string();
    write_file(path, render_frame(instance, plan, t));
    files.push_back(path);
  }
  return files;
}

}  // namespace grmapf
