#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "semnav/simworld.hpp"

namespace semnav::testing {

struct RandomGrid {
  std::vector<std::string> rows;  // '@' marks the robot
  Cell goal;                      // reachable from the robot
};

RandomGrid random_solvable_grid(std::mt19937& rng, int max_side = 14);

// Shortest 4-connected distance, or nullopt if unreachable.
std::optional<int> bfs_distance(const std::vector<std::string>& rows, Cell from, Cell to);

// Lexicographically smallest shortest move string over "UDLR", found by
// expanding layers forward from the start.
std::optional<std::string> lex_min_moves(const std::vector<std::string>& rows, Cell from, Cell to);

// Move letters of a trajectory; empty on any non-unit step.
std::string moves_of(const Trajectory& t);

}  // namespace semnav::testing
