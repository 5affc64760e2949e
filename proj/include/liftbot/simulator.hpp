#pragma once

// Differential-drive robot in a tiled world.
//
// Geometry: x grows rightward, y upward; grid row 0 is the top row. The
// robot is a disc of radius r. Cells outside the grid behave as walls.
//
// Sensors, relative to the heading (counter-clockwise positive):
//   bumper  contact normal angle phi: |phi| <= 30 center, (30, 90] left,
//           [-90, -30) right; contacts behind the robot are not sensed
//   cliff   points at distance 0.8 r, at +30 (left), 0 (center), -30 (right)
//   wheel   no physical model; scripted in the world file
//
// Odometry (position, orientation) is reported relative to the start pose.
// Bumper, cliff and wheel sensors report edges only. Within one step they
// are emitted in the order bumper left/center/right, cliff
// left/center/right, wheels.

#include <algorithm>
#include <any>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "liftbot/robot_api.hpp"
#include "liftbot/runtime.hpp"

namespace liftbot {

enum class Tile { Floor, Wall, Hole };

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

struct ScriptedWheel {
  double t = 0.0;
  WheelEvent event;
};

class WorldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct World {
  int width = 0;   // columns
  int height = 0;  // rows
  double tile = 0.5;
  std::vector<Tile> cells;  // row-major, row 0 at the top
  Pose start;
  std::vector<ScriptedWheel> script;

  /// Tile by grid column and row counted from the bottom; out of range is wall.
  Tile at(int col, int row_up) const {
    if (col < 0 || row_up < 0 || col >= width || row_up >= height) return Tile::Wall;
    return cells[static_cast<std::size_t>((height - 1 - row_up) * width + col)];
  }

  Tile tile_at(double x, double y) const {
    return at(static_cast<int>(std::floor(x / tile)), static_cast<int>(std::floor(y / tile)));
  }
};

namespace detail {

inline std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && ws(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && ws(static_cast<unsigned char>(s[i]))) ++i;
  return s.substr(i);
}

inline double parse_number(const std::string& s, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v))
    throw WorldError("line " + std::to_string(line) + ": malformed header: bad number '" + s + "'");
  return v;
}

}  // namespace detail

/// Parses the world text format:
///
///   tile=0.5
///   wheel_drop=3.0,Left,Air
///
///   #####
///   #.R~#
///   #####
///
/// The header (key=value lines) and the blank line after it are optional.
inline World load_world(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string l;
    while (std::getline(in, l)) {
      if (!l.empty() && l.back() == '\r') l.pop_back();
      lines.push_back(l);
    }
  }
  World w;
  std::size_t i = 0;
  bool has_header = !lines.empty() && lines[0].find('=') != std::string::npos;
  if (has_header) {
    for (; i < lines.size() && !detail::trim(lines[i]).empty(); ++i) {
      int ln = static_cast<int>(i) + 1;
      std::string l = detail::trim(lines[i]);
      auto eq = l.find('=');
      if (eq == std::string::npos) throw WorldError("line " + std::to_string(ln) + ": malformed header: " + l);
      std::string key = detail::trim(l.substr(0, eq));
      std::string val = detail::trim(l.substr(eq + 1));
      if (key == "tile") {
        w.tile = detail::parse_number(val, ln);
        if (!(w.tile > 0.0)) throw WorldError("line " + std::to_string(ln) + ": malformed header: tile must be positive");
      } else if (key == "wheel_drop") {
        std::vector<std::string> parts;
        std::stringstream ss(val);
        std::string p;
        while (std::getline(ss, p, ',')) parts.push_back(detail::trim(p));
        if (parts.size() != 3)
          throw WorldError("line " + std::to_string(ln) + ": malformed header: wheel_drop needs <t>,<side>,<state>");
        ScriptedWheel s;
        s.t = detail::parse_number(parts[0], ln);
        if (s.t < 0.0) throw WorldError("line " + std::to_string(ln) + ": malformed header: negative wheel_drop time");
        if (parts[1] == "Left") s.event.side = WheelSide::Left;
        else if (parts[1] == "Right") s.event.side = WheelSide::Right;
        else throw WorldError("line " + std::to_string(ln) + ": malformed header: wheel side must be Left or Right");
        if (parts[2] == "Air") s.event.state = WheelState::Air;
        else if (parts[2] == "Ground") s.event.state = WheelState::Ground;
        else throw WorldError("line " + std::to_string(ln) + ": malformed header: wheel state must be Air or Ground");
        w.script.push_back(s);
      } else {
        throw WorldError("line " + std::to_string(ln) + ": malformed header: unknown key '" + key + "'");
      }
    }
    while (i < lines.size() && detail::trim(lines[i]).empty()) ++i;
  }
  std::stable_sort(w.script.begin(), w.script.end(),
                   [](const ScriptedWheel& a, const ScriptedWheel& b) { return a.t < b.t; });

  std::vector<std::string> grid;
  std::size_t first_row = i;
  for (; i < lines.size(); ++i) grid.push_back(detail::trim(lines[i]));
  while (!grid.empty() && grid.back().empty()) grid.pop_back();
  if (grid.empty()) throw WorldError("empty grid");

  w.height = static_cast<int>(grid.size());
  w.width = static_cast<int>(grid[0].size());
  int starts = 0;
  for (int r = 0; r < w.height; ++r) {
    const std::string& row = grid[static_cast<std::size_t>(r)];
    int ln = static_cast<int>(first_row) + r + 1;
    if (static_cast<int>(row.size()) != w.width)
      throw WorldError("line " + std::to_string(ln) + ": ragged grid (expected " + std::to_string(w.width) +
                       " columns, got " + std::to_string(row.size()) + ")");
    for (int c = 0; c < w.width; ++c) {
      switch (row[static_cast<std::size_t>(c)]) {
        case '.': w.cells.push_back(Tile::Floor); break;
        case '#': w.cells.push_back(Tile::Wall); break;
        case '~': w.cells.push_back(Tile::Hole); break;
        case 'R':
          ++starts;
          w.cells.push_back(Tile::Floor);
          w.start = Pose{(c + 0.5) * w.tile, (w.height - 1 - r + 0.5) * w.tile, 0.0};
          break;
        default:
          throw WorldError("line " + std::to_string(ln) + ": unknown tile character '" +
                           std::string(1, row[static_cast<std::size_t>(c)]) + "'");
      }
    }
  }
  if (starts == 0) throw WorldError("missing robot start marker 'R'");
  if (starts > 1) throw WorldError("multiple robot start markers");
  return w;
}

/// A walled open room of the given interior size with the robot in the middle.
inline World open_world(int interior = 21, double tile = 0.5) {
  std::string text = "tile=" + std::to_string(tile) + "\n\n";
  std::string wall(static_cast<std::size_t>(interior + 2), '#');
  text += wall + "\n";
  for (int r = 0; r < interior; ++r) {
    std::string row(static_cast<std::size_t>(interior), '.');
    if (r == interior / 2) row[static_cast<std::size_t>(interior / 2)] = 'R';
    text += "#" + row + "#\n";
  }
  text += wall + "\n";
  return load_world(text);
}

struct SimConfig {
  double robot_radius = 0.175;  // m
  double max_linear = 1.5;      // m/s
  double max_angular = kPi;     // rad/s
};

struct RobotState {
  Pose pose;
  Velocity latch;
  LedColor led1 = LedColor::Black;
  LedColor led2 = LedColor::Black;
  std::vector<Sound> sounds;
  std::array<bool, 3> contact{};    // indexed by Side
  std::array<bool, 3> over_hole{};  // indexed by Side
  std::array<WheelState, 2> wheels{WheelState::Ground, WheelState::Ground};
};

using SimEvent = std::variant<BumperEvent, CliffEvent, WheelEvent>;

class Simulator final : public Plant {
 public:
  explicit Simulator(World world, SimConfig cfg = {}) : world_(std::move(world)), cfg_(cfg) {
    if (!(cfg_.robot_radius > 0.0) || !(cfg_.max_linear > 0.0) || !(cfg_.max_angular > 0.0))
      throw std::invalid_argument("simulator limits must be positive");
    state_.pose = world_.start;
    if (wall_clearance() < cfg_.robot_radius) throw WorldError("robot start position is blocked by a wall");
    state_.contact = sense_contacts();
    state_.over_hole = sense_holes();
  }

  const World& world() const { return world_; }
  const SimConfig& config() const { return cfg_; }
  const RobotState& state() const { return state_; }
  double time() const { return t_; }

  void apply_command(Velocity v) {
    state_.latch = Velocity{std::clamp(v.linear, -cfg_.max_linear, cfg_.max_linear),
                            std::clamp(v.angular, -cfg_.max_angular, cfg_.max_angular)};
  }
  void apply_command(Led1 l) { state_.led1 = l.color; }
  void apply_command(Led2 l) { state_.led2 = l.color; }
  void apply_command(SoundCmd s) { state_.sounds.push_back(s.sound); }

  void apply(const Event& e) override {
    const std::any& p = e.payload;
    if (auto* v = std::any_cast<Velocity>(&p)) apply_command(*v);
    else if (auto* l1 = std::any_cast<Led1>(&p)) apply_command(*l1);
    else if (auto* l2 = std::any_cast<Led2>(&p)) apply_command(*l2);
    else if (auto* s = std::any_cast<SoundCmd>(&p)) apply_command(*s);
  }

  /// One Euler step of the latched velocity followed by collision response.
  /// Returns the sensor edges it caused.
  std::vector<SimEvent> physics_step(double dt) {
    t_ += dt;
    Pose& p = state_.pose;
    const Pose before = p;
    const Velocity v = state_.latch;
    Pose next{p.x + v.linear * std::cos(p.theta) * dt, p.y + v.linear * std::sin(p.theta) * dt,
              norm_orientation(p.theta + v.angular * dt).radians};
    if (!resolve(next.x, next.y)) {
      next.x = before.x;
      next.y = before.y;
    }
    p = next;

    std::vector<SimEvent> out;
    auto contact = sense_contacts();
    for (int s = 0; s < 3; ++s) {
      if (contact[s] != state_.contact[s])
        out.push_back(BumperEvent{static_cast<Side>(s), contact[s] ? BumperState::Pressed : BumperState::Released});
    }
    auto holes = sense_holes();
    for (int s = 0; s < 3; ++s) {
      if (holes[s] != state_.over_hole[s])
        out.push_back(CliffEvent{static_cast<Side>(s), holes[s] ? CliffState::Hole : CliffState::Floor});
    }
    state_.contact = contact;
    state_.over_hole = holes;
    while (next_script_ < world_.script.size() && world_.script[next_script_].t <= t_ + 1e-9) {
      const WheelEvent& w = world_.script[next_script_++].event;
      auto& cur = state_.wheels[static_cast<std::size_t>(w.side)];
      if (cur == w.state) continue;
      cur = w.state;
      out.push_back(w);
    }
    return out;
  }

  void advance(double t, double dt, SensorSink& out) override {
    t_ = t - dt;
    for (const SimEvent& e : physics_step(dt)) std::visit([&](const auto& ev) { out.publish(t, ev); }, e);
  }

  void sample(double t, SensorSink& out) override {
    out.publish(t, state_.latch);
    Pose o = odometry();
    out.publish(t, Position{o.x, o.y});
    out.publish(t, Orientation{o.theta});
  }

  /// Pose relative to the start pose, as the robot itself reports it.
  Pose odometry() const {
    const Pose& s = world_.start;
    double dx = state_.pose.x - s.x, dy = state_.pose.y - s.y;
    double c = std::cos(s.theta), si = std::sin(s.theta);
    return Pose{c * dx + si * dy, -si * dx + c * dy, norm_orientation(state_.pose.theta - s.theta).radians};
  }

  /// Smallest distance from the robot centre to any wall tile.
  double wall_clearance() const {
    double best = std::numeric_limits<double>::infinity();
    for_walls_near(state_.pose.x, state_.pose.y, 2.0 * cfg_.robot_radius + world_.tile,
                   [&](double cx, double cy) { best = std::min(best, std::hypot(state_.pose.x - cx, state_.pose.y - cy)); });
    return best;
  }

 private:
  // Calls f(closest x, closest y) for every wall tile within `reach` cells.
  template <class F>
  void for_walls_near(double x, double y, double reach, F&& f) const {
    const double ts = world_.tile;
    int c0 = static_cast<int>(std::floor((x - reach) / ts));
    int c1 = static_cast<int>(std::floor((x + reach) / ts));
    int r0 = static_cast<int>(std::floor((y - reach) / ts));
    int r1 = static_cast<int>(std::floor((y + reach) / ts));
    for (int r = r0; r <= r1; ++r) {
      for (int c = c0; c <= c1; ++c) {
        if (world_.at(c, r) != Tile::Wall) continue;
        double cx = std::clamp(x, c * ts, (c + 1) * ts);
        double cy = std::clamp(y, r * ts, (r + 1) * ts);
        f(cx, cy);
      }
    }
  }

  // Pushes the disc out of walls along the contact normals. False if it
  // cannot be placed.
  bool resolve(double& x, double& y) const {
    const double rad = cfg_.robot_radius;
    for (int iter = 0; iter < 8; ++iter) {
      double worst = 0.0, nx = 0.0, ny = 0.0, px = 0.0, py = 0.0;
      bool inside = false;
      for_walls_near(x, y, rad, [&](double cx, double cy) {
        double d = std::hypot(x - cx, y - cy);
        if (d == 0.0) inside = true;
        if (d < rad && rad - d > worst) {
          worst = rad - d;
          nx = (x - cx) / d;
          ny = (y - cy) / d;
          px = cx;
          py = cy;
        }
      });
      if (inside) return false;
      if (worst == 0.0) return true;
      x = px + nx * rad;
      y = py + ny * rad;
    }
    bool clear = true;
    for_walls_near(x, y, rad, [&](double cx, double cy) {
      if (std::hypot(x - cx, y - cy) < rad - 1e-12) clear = false;
    });
    return clear;
  }

  std::array<bool, 3> sense_contacts() const {
    std::array<bool, 3> out{};
    const Pose& p = state_.pose;
    const double touch = cfg_.robot_radius + 1e-6;
    const double deg = kPi / 180.0;
    for_walls_near(p.x, p.y, touch, [&](double cx, double cy) {
      double d = std::hypot(cx - p.x, cy - p.y);
      if (d > touch || d == 0.0) return;
      double phi = norm_orientation(std::atan2(cy - p.y, cx - p.x) - p.theta).radians;
      if (std::abs(phi) <= 30.0 * deg) out[static_cast<int>(Side::Center)] = true;
      else if (phi > 30.0 * deg && phi <= 90.0 * deg) out[static_cast<int>(Side::Left)] = true;
      else if (phi >= -90.0 * deg && phi < -30.0 * deg) out[static_cast<int>(Side::Right)] = true;
    });
    return out;
  }

  std::array<bool, 3> sense_holes() const {
    std::array<bool, 3> out{};
    const Pose& p = state_.pose;
    const double reach = 0.8 * cfg_.robot_radius;
    const double offs[3] = {kPi / 6.0, 0.0, -kPi / 6.0};  // left, center, right
    for (int s = 0; s < 3; ++s) {
      double a = p.theta + offs[s];
      out[s] = world_.tile_at(p.x + reach * std::cos(a), p.y + reach * std::sin(a)) == Tile::Hole;
    }
    return out;
  }

  World world_;
  SimConfig cfg_;
  RobotState state_;
  double t_ = 0.0;
  std::size_t next_script_ = 0;
};

}  // namespace liftbot
