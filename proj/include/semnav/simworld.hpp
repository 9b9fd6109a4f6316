#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "semnav/kb.hpp"

namespace semnav {

struct Cell {
  int x = 0;  // column, rightward
  int y = 0;  // row, downward

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

using Trajectory = std::vector<Cell>;

enum class WorldErrorKind {
  syntax,
  unknown_room_label,
  unreachable_anchor,
  missing_robot_start,
  no_path,
  invalid_trajectory,
};
std::string_view to_string(WorldErrorKind k);

class WorldError : public std::runtime_error {
 public:
  WorldError(WorldErrorKind kind, std::string detail);
  WorldErrorKind kind() const { return kind_; }

 private:
  WorldErrorKind kind_;
};

/// Occupancy grid with one labeled region and one anchor cell per physical
/// room. Motion is 4-connected with unit cost.
class GridWorld {
 public:
  int width() const { return width_; }
  int height() const { return height_; }
  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  bool is_free(Cell c) const { return in_bounds(c) && !wall_[index(c)]; }

  Cell robot() const { return robot_; }
  const std::map<std::string, std::vector<Cell>>& regions() const { return regions_; }
  const std::map<std::string, Cell>& anchors() const { return anchors_; }
  std::optional<Cell> anchor(std::string_view room) const;
  // Physical room id whose region holds the cell.
  std::optional<std::string> region_of(Cell c) const;

  // Grid rows as in the world file, with the robot drawn at its current cell.
  std::vector<std::string> render() const;

  // Shortest path from the robot to the room's anchor. Among shortest paths
  // the move sequence is lexicographically smallest under Up < Down < Left < Right.
  Trajectory plan_path(std::string_view room) const;
  Trajectory plan_path(Cell goal) const;

  // Moves the robot along a trajectory that starts at its current cell.
  // Returns the visited cells.
  std::vector<Cell> execute(const Trajectory& trajectory);

  // Builds a world without room labels, for planning tests.
  static GridWorld from_rows(const std::vector<std::string>& rows);

 private:
  friend GridWorld load_world(std::string_view text, const KnowledgeBase& kb);

  std::size_t index(Cell c) const { return static_cast<std::size_t>(c.y * width_ + c.x); }

  int width_ = 0;
  int height_ = 0;
  std::vector<bool> wall_;
  std::vector<char> glyph_;
  std::map<std::string, std::vector<Cell>> regions_;
  std::map<std::string, Cell> anchors_;
  Cell robot_;
};

// Format: `room <char> <physical_room_id>` and `anchor <char> <x> <y>` header
// lines, a blank line, then the grid (`#` wall, `.` free, `@` robot start,
// room label chars for room cells).
GridWorld load_world(std::string_view text, const KnowledgeBase& kb);

}  // namespace semnav
