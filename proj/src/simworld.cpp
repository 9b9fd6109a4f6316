#include "semnav/simworld.hpp"

#include <array>
#include <cstdlib>
#include <deque>
#include <sstream>

namespace semnav {

std::string_view to_string(WorldErrorKind k) {
  switch (k) {
    case WorldErrorKind::syntax: return "SyntaxError";
    case WorldErrorKind::unknown_room_label: return "UnknownRoomLabel";
    case WorldErrorKind::unreachable_anchor: return "UnreachableAnchor";
    case WorldErrorKind::missing_robot_start: return "MissingRobotStart";
    case WorldErrorKind::no_path: return "NoPath";
    case WorldErrorKind::invalid_trajectory: return "InvalidTrajectory";
  }
  return "?";
}

WorldError::WorldError(WorldErrorKind kind, std::string detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

namespace {

// Up, Down, Left, Right.
constexpr std::array<Cell, 4> kMoves = {{{0, -1}, {0, 1}, {-1, 0}, {1, 0}}};

Cell step(Cell c, Cell d) { return {c.x + d.x, c.y + d.y}; }

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

std::vector<std::string> words(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

bool parse_int(const std::string& s, int& out) {
  char* end = nullptr;
  long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0') return false;
  out = static_cast<int>(v);
  return true;
}

}  // namespace

std::optional<Cell> GridWorld::anchor(std::string_view room) const {
  auto it = anchors_.find(std::string(room));
  if (it == anchors_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> GridWorld::region_of(Cell c) const {
  for (const auto& [room, cells] : regions_)
    for (const auto& rc : cells)
      if (rc == c) return room;
  return std::nullopt;
}

std::vector<std::string> GridWorld::render() const {
  std::vector<std::string> rows(static_cast<std::size_t>(height_),
                                std::string(static_cast<std::size_t>(width_), ' '));
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x)
      rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] = glyph_[index({x, y})];
  rows[static_cast<std::size_t>(robot_.y)][static_cast<std::size_t>(robot_.x)] = '@';
  return rows;
}

Trajectory GridWorld::plan_path(std::string_view room) const {
  auto a = anchor(room);
  if (!a) throw WorldError(WorldErrorKind::no_path, "room '" + std::string(room) + "' has no anchor");
  return plan_path(*a);
}

Trajectory GridWorld::plan_path(Cell goal) const {
  if (!is_free(goal)) throw WorldError(WorldErrorKind::no_path, "goal cell is not free");

  // Distances to the goal; descending them greedily in move order yields the
  // lexicographically smallest shortest move sequence.
  std::vector<int> dist(wall_.size(), -1);
  std::deque<Cell> queue{goal};
  dist[index(goal)] = 0;
  while (!queue.empty()) {
    auto c = queue.front();
    queue.pop_front();
    for (auto d : kMoves) {
      auto n = step(c, d);
      if (is_free(n) && dist[index(n)] < 0) {
        dist[index(n)] = dist[index(c)] + 1;
        queue.push_back(n);
      }
    }
  }
  if (dist[index(robot_)] < 0)
    throw WorldError(WorldErrorKind::no_path, "goal unreachable from robot cell");

  Trajectory path{robot_};
  Cell cur = robot_;
  while (cur != goal) {
    for (auto d : kMoves) {
      auto n = step(cur, d);
      if (is_free(n) && dist[index(n)] == dist[index(cur)] - 1) {
        cur = n;
        break;
      }
    }
    path.push_back(cur);
  }
  return path;
}

std::vector<Cell> GridWorld::execute(const Trajectory& trajectory) {
  if (trajectory.empty())
    throw WorldError(WorldErrorKind::invalid_trajectory, "empty trajectory");
  if (trajectory.front() != robot_)
    throw WorldError(WorldErrorKind::invalid_trajectory, "trajectory does not start at the robot");
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    if (!is_free(trajectory[i]))
      throw WorldError(WorldErrorKind::invalid_trajectory, "trajectory crosses a blocked cell");
    if (i > 0) {
      const auto dx = std::abs(trajectory[i].x - trajectory[i - 1].x);
      const auto dy = std::abs(trajectory[i].y - trajectory[i - 1].y);
      if (dx + dy != 1)
        throw WorldError(WorldErrorKind::invalid_trajectory, "non-adjacent consecutive cells");
    }
  }
  robot_ = trajectory.back();
  return trajectory;
}

GridWorld GridWorld::from_rows(const std::vector<std::string>& rows) {
  GridWorld w;
  w.height_ = static_cast<int>(rows.size());
  w.width_ = rows.empty() ? 0 : static_cast<int>(rows.front().size());
  bool robot = false;
  for (int y = 0; y < w.height_; ++y) {
    const auto& row = rows[static_cast<std::size_t>(y)];
    if (static_cast<int>(row.size()) != w.width_)
      throw WorldError(WorldErrorKind::syntax, "ragged grid row " + std::to_string(y));
    for (int x = 0; x < w.width_; ++x) {
      char c = row[static_cast<std::size_t>(x)];
      if (c == '@') {
        if (robot) throw WorldError(WorldErrorKind::syntax, "more than one robot start");
        robot = true;
        w.robot_ = {x, y};
        c = '.';
      } else if (c != '#' && c != '.') {
        throw WorldError(WorldErrorKind::syntax, std::string("unexpected cell '") + c + "'");
      }
      w.wall_.push_back(c == '#');
      w.glyph_.push_back(c);
    }
  }
  if (!robot) throw WorldError(WorldErrorKind::missing_robot_start, "no '@' in grid");
  return w;
}

GridWorld load_world(std::string_view text, const KnowledgeBase& kb) {
  const auto lines = split_lines(text);
  std::size_t i = 0;

  std::map<char, std::string> labels;  // label char -> physical room id
  std::map<char, Cell> anchor_of;
  for (; i < lines.size() && !words(lines[i]).empty(); ++i) {
    const auto w = words(lines[i]);
    const auto where = "header line " + std::to_string(i + 1);
    if (w[0] == "room" && w.size() == 3 && w[1].size() == 1) {
      const char label = w[1][0];
      if (label == '#' || label == '.' || label == '@')
        throw WorldError(WorldErrorKind::syntax, where + ": reserved label char");
      const auto id = try_canonicalize(w[2]);
      if (!id || !kb.find_physical_room(*id))
        throw WorldError(WorldErrorKind::unknown_room_label,
                         where + ": '" + w[2] + "' is not a physical room");
      if (!labels.emplace(label, *id).second)
        throw WorldError(WorldErrorKind::syntax, where + ": label declared twice");
    } else if (w[0] == "anchor" && w.size() == 4 && w[1].size() == 1) {
      Cell c;
      if (!parse_int(w[2], c.x) || !parse_int(w[3], c.y))
        throw WorldError(WorldErrorKind::syntax, where + ": bad anchor coordinates");
      anchor_of[w[1][0]] = c;
    } else {
      throw WorldError(WorldErrorKind::syntax, where + ": expected room or anchor");
    }
  }
  while (i < lines.size() && words(lines[i]).empty()) ++i;

  std::vector<std::string> rows;
  for (; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    rows.emplace_back(lines[i]);
  }
  if (rows.empty()) throw WorldError(WorldErrorKind::syntax, "no grid");

  // Room cells become free cells of the plain grid.
  auto plain = rows;
  for (auto& row : plain)
    for (auto& c : row) {
      if (c == '#' || c == '.' || c == '@') continue;
      if (!labels.count(c))
        throw WorldError(WorldErrorKind::unknown_room_label,
                         std::string("grid label '") + c + "' is not declared");
      c = '.';
    }
  GridWorld world = GridWorld::from_rows(plain);

  for (int y = 0; y < world.height_; ++y)
    for (int x = 0; x < world.width_; ++x) {
      const char c = rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)];
      if (auto it = labels.find(c); it != labels.end()) {
        world.regions_[it->second].push_back({x, y});
        world.glyph_[world.index({x, y})] = c;
      }
    }

  for (const auto& [label, id] : labels) {
    auto a = anchor_of.find(label);
    if (a == anchor_of.end())
      throw WorldError(WorldErrorKind::syntax, "room '" + id + "' has no anchor");
    if (world.region_of(a->second) != id)
      throw WorldError(WorldErrorKind::syntax, "anchor of '" + id + "' lies outside its region");
    world.anchors_[id] = a->second;
  }
  for (const auto& [label, _] : anchor_of)
    if (!labels.count(label))
      throw WorldError(WorldErrorKind::unknown_room_label,
                       std::string("anchor for undeclared label '") + label + "'");

  if (!world.anchors_.empty()) {
    const Cell origin = world.anchors_.begin()->second;
    std::vector<bool> seen(world.wall_.size(), false);
    std::deque<Cell> queue{origin};
    seen[world.index(origin)] = true;
    while (!queue.empty()) {
      auto c = queue.front();
      queue.pop_front();
      for (auto d : kMoves) {
        auto n = step(c, d);
        if (world.is_free(n) && !seen[world.index(n)]) {
          seen[world.index(n)] = true;
          queue.push_back(n);
        }
      }
    }
    for (const auto& [id, cell] : world.anchors_)
      if (!seen[world.index(cell)])
        throw WorldError(WorldErrorKind::unreachable_anchor, "anchor of '" + id + "' is sealed off");
  }
  return world;
}

}  // namespace semnav
