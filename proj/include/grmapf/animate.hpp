#pragma once

#include <string>
#include <vector>

#include "grmapf/core.hpp"

namespace grmapf {

/// SVG of the plan at time t: grid, obstacles, goal markers and numbered agent discs.
/// Layers of a 3D grid are drawn side by side.
std::string render_frame(const Instance& instance, const Plan& plan, int t);

/// Writes frame_0000.svg ... one per time step 0..makespan into dir; returns the file paths.
std::vector<std::string> export_animation(const Instance& instance, const Plan& plan, const std::string& dir);

}  // namespace grmapf
