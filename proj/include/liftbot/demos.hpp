#pragma once

// Reference controllers and the demo catalog.

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "liftbot/controller.hpp"
#include "liftbot/robot_api.hpp"
#include "liftbot/task.hpp"
#include "liftbot/wrappers.hpp"

namespace liftbot {

// ---------------------------------------------------------------------------
// Demo event and memory types

struct Hit {
  bool value = false;
  friend bool operator==(const Hit&, const Hit&) = default;
};
inline Fields trace_fields(const Hit& h) { return {{"value", h.value}}; }

struct ChgDir {
  friend bool operator==(const ChgDir&, const ChgDir&) = default;
};
inline Fields trace_fields(const ChgDir&) { return {}; }

struct Mode {
  enum class Kind { Go, Stop, Turn };
  Kind kind = Kind::Go;
  double dir = 0.0;    // +1 counter-clockwise, -1 clockwise (Turn only)
  Seconds until;       // Turn only

  static Mode go() { return Mode{}; }
  static Mode stop() { return Mode{Kind::Stop, 0.0, {}}; }
  static Mode turn(double dir, Seconds until) { return Mode{Kind::Turn, dir, until}; }
  friend bool operator==(const Mode&, const Mode&) = default;
};

inline Fields trace_fields(const Mode& m) {
  switch (m.kind) {
    case Mode::Kind::Go: return {{"mode", std::string("go")}};
    case Mode::Kind::Stop: return {{"mode", std::string("stop")}};
    case Mode::Kind::Turn: return {{"mode", std::string("turn")}, {"dir", m.dir}, {"until", m.until.value}};
  }
  return {};
}

struct MuxState {
  enum class Kind { Start, Ignore };
  Kind kind = Kind::Start;
  Seconds until;  // Ignore only

  static MuxState start() { return MuxState{}; }
  static MuxState ignore(Seconds until) { return MuxState{Kind::Ignore, until}; }
  friend bool operator==(const MuxState&, const MuxState&) = default;
};

inline Fields trace_fields(const MuxState& s) {
  if (s.kind == MuxState::Kind::Start) return {{"state", std::string("start")}};
  return {{"state", std::string("ignore")}, {"until", s.until.value}};
}

/// High-priority command source.
template <class T>
struct M1 {
  T value;
  friend bool operator==(const M1&, const M1&) = default;
};

/// Low-priority command source.
template <class T>
struct M2 {
  T value;
  friend bool operator==(const M2&, const M2&) = default;
};

template <class T>
Fields trace_fields(const M1<T>& m) {
  return trace_fields(m.value);
}
template <class T>
Fields trace_fields(const M2<T>& m) {
  return trace_fields(m.value);
}

/// Registers the demo vocabulary; types already present are left alone.
inline void register_demo_types(EventRegistry& reg) {
  if (!reg.contains<Memory<Hit>>()) reg.register_event_type<Hit>("hit", EventKind::memory, Hit{false});
  if (!reg.contains<ChgDir>()) reg.register_event_type<ChgDir>("chgdir", EventKind::user_event);
  if (!reg.contains<Memory<Mode>>()) reg.register_event_type<Mode>("mode", EventKind::memory, Mode::go());
  if (!reg.contains<Memory<MuxState>>())
    reg.register_event_type<MuxState>("mux", EventKind::memory, MuxState::start());
  if (!reg.contains<M1<Velocity>>()) reg.register_event_type<M1<Velocity>>("m1_velocity", EventKind::user_event);
  if (!reg.contains<M2<Velocity>>()) reg.register_event_type<M2<Velocity>>("m2_velocity", EventKind::user_event);
  register_task_types(reg);
}

// ---------------------------------------------------------------------------
// Step functions

inline Velocity move_step() { return Velocity{kVelLin, 0.0}; }

inline Velocity accelerate_step(Velocity v) { return Velocity{v.linear + 0.5, v.angular}; }

inline std::optional<SoundCmd> play_step(BumperEvent b) {
  if (b.state == BumperState::Pressed) return SoundCmd{Sound::ErrorSound};
  return std::nullopt;
}

inline Memory<Hit> reverse_dir_step(BumperEvent) { return Memory<Hit>{Hit{true}}; }

inline Velocity accelerate_hit_step(Memory<Hit> hit, Velocity v) {
  if (hit.value.value) return Velocity{v.linear - 0.5, v.angular};
  return Velocity{v.linear + 0.5, v.angular};
}

inline std::tuple<Led1, std::optional<ChgDir>> bumper_step(BumperEvent b) {
  if (b.state == BumperState::Pressed) return {Led1{LedColor::Orange}, ChgDir{}};
  return {Led1{LedColor::Black}, std::nullopt};
}

inline std::tuple<Led2, std::optional<ChgDir>> cliff_step(CliffEvent c) {
  if (c.state == CliffState::Hole) return {Led2{LedColor::Orange}, ChgDir{}};
  return {Led2{LedColor::Black}, std::nullopt};
}

inline std::tuple<Led1, Led2, Memory<Mode>> wheel_step(WheelEvent w) {
  if (w.state == WheelState::Air) return {Led1{LedColor::Red}, Led2{LedColor::Red}, Memory<Mode>{Mode::stop()}};
  return {Led1{LedColor::Black}, Led2{LedColor::Black}, Memory<Mode>{Mode::go()}};
}

/// Random direction first, then a random angle in [0, pi].
inline Memory<Mode> chgdir_step(ChgDir, RandomSeed r, Seconds now) {
  bool b = r.gen.boolean();
  double ang = r.gen.uniform(0.0, kPi);
  double dir = b ? 1.0 : -1.0;
  return Memory<Mode>{Mode::turn(dir, Seconds{now.value + double_to_seconds(ang / kVelAng).value})};
}

inline std::tuple<Velocity, Memory<Mode>> spin_step(Memory<Mode> m, Seconds now) {
  const Mode& mode = m.value;
  if (mode.kind == Mode::Kind::Stop) return {Velocity{0.0, 0.0}, m};
  if (mode.kind == Mode::Kind::Turn && mode.until > now) return {Velocity{0.0, mode.dir * kVelAng}, m};
  return {Velocity{kVelLin, 0.0}, Memory<Mode>{Mode::go()}};
}

inline constexpr double kSafetyBackup = -0.1;  // m/s
inline constexpr double kSafetyTurn = 0.4;     // rad/s

/// Escape velocity for a dangerous edge; nothing for a harmless one.
inline std::optional<M1<Velocity>> safety_step(std::variant<std::variant<BumperEvent, CliffEvent>, WheelEvent> e) {
  auto away = [](Side s) {
    switch (s) {
      case Side::Left: return Velocity{kSafetyBackup, -kSafetyTurn};
      case Side::Right: return Velocity{kSafetyBackup, kSafetyTurn};
      case Side::Center: break;
    }
    return Velocity{kSafetyBackup, 0.0};
  };
  if (const auto* w = std::get_if<WheelEvent>(&e)) {
    if (w->state == WheelState::Air) return M1<Velocity>{Velocity{0.0, 0.0}};
    return std::nullopt;
  }
  const auto& bc = std::get<0>(e);
  if (const auto* b = std::get_if<BumperEvent>(&bc)) {
    if (b->state == BumperState::Pressed) return M1<Velocity>{away(b->side)};
    return std::nullopt;
  }
  const auto& c = std::get<CliffEvent>(bc);
  if (c.state == CliffState::Hole) return M1<Velocity>{away(c.side)};
  return std::nullopt;
}

using MuxOut = std::optional<std::tuple<Velocity, Memory<MuxState>>>;

/// Binary multiplexer: M1 always wins and opens an ignore window of `d`
/// seconds, during which M2 is dropped. The window includes its end point.
inline MuxOut mux_step(double d, Seconds now, Memory<MuxState> state, std::variant<M1<Velocity>, M2<Velocity>> in) {
  if (const auto* hi = std::get_if<M1<Velocity>>(&in))
    return std::tuple{hi->value, Memory<MuxState>{MuxState::ignore(Seconds{now.value + d})}};
  const MuxState& s = state.value;
  if (s.kind == MuxState::Kind::Ignore && now <= s.until) return std::nullopt;
  return std::tuple{std::get<M2<Velocity>>(in).value, Memory<MuxState>{MuxState::start()}};
}

// ---------------------------------------------------------------------------
// Controller programs

inline ControllerSpec demo_move() { return controller("move", &move_step); }

inline ControllerSpec demo_accelerate() { return controller("accelerate", &accelerate_step); }

/// Accelerates and beeps on every bumper press, side by side.
inline ControllerSpec demo_play() { return parallel(demo_accelerate(), controller("play", &play_step)); }

inline ControllerSpec demo_forward_backward() {
  return parallel(controller("reverseDir", &reverse_dir_step), controller("accelerate", &accelerate_hit_step));
}

inline ControllerSpec random_walk_sensors() {
  return parallel(controller("bumper", &bumper_step), controller("cliff", &cliff_step),
                  controller("wheel", &wheel_step), controller("chgdir", &chgdir_step));
}

inline ControllerSpec demo_random_walk() { return parallel(random_walk_sensors(), controller("spin", &spin_step)); }

inline ControllerSpec safety_controller() { return controller("safetyControl", &safety_step); }

inline ControllerSpec demo_safety() {
  return parallel(safety_controller(), controller("relay", [](M1<Velocity> m) { return m.value; }));
}

inline ControllerSpec mux_controller(double window) {
  return controller("muxVel", [window](Seconds now, Memory<MuxState> s, std::variant<M1<Velocity>, M2<Velocity>> in) {
    return mux_step(window, now, s, in);
  });
}

inline ControllerSpec demo_safe_random_walk(double window) {
  auto spin = controller("spin", [](Memory<Mode> m, Seconds now) {
    auto [v, next] = spin_step(m, now);
    return std::tuple{M2<Velocity>{v}, next};
  });
  return parallel(random_walk_sensors(), spin, safety_controller(), mux_controller(window));
}

// ---------------------------------------------------------------------------
// Catalog

struct DemoOptions {
  double mux_window = 1.0;    // s
  double square_side = 2.0;   // cm
  double turn_degrees = 90.0;
  double move_cm = 100.0;
};

struct Demo {
  std::string name;
  std::string summary;
  double default_duration;  // s; a time limit for task plans
  // Exactly one of these is set.
  std::function<ControllerSpec(const DemoOptions&)> program;
  std::function<TaskPlan(const DemoOptions&)> plan;
};

inline const std::vector<Demo>& demo_catalog() {
  static const std::vector<Demo> catalog = {
      {"move", "drive forward at constant speed", 10.0, [](const DemoOptions&) { return demo_move(); }, {}},
      {"accelerate", "add 0.5 m/s to every velocity reading", 10.0, [](const DemoOptions&) { return demo_accelerate(); },
       {}},
      {"play", "accelerate and sound an error beep on bumper presses", 10.0,
       [](const DemoOptions&) { return demo_play(); }, {}},
      {"forward-backward", "accelerate until a bump, then decelerate", 10.0,
       [](const DemoOptions&) { return demo_forward_backward(); }, {}},
      {"random-walk", "drive, turning by a random angle on bumps and cliffs", 30.0,
       [](const DemoOptions&) { return demo_random_walk(); }, {}},
      {"safety", "back away from bumps and cliffs, stop on wheel drops", 10.0,
       [](const DemoOptions&) { return demo_safety(); }, {}},
      {"safe-random-walk", "random walk arbitrated by the safety controller", 30.0,
       [](const DemoOptions& o) { return demo_safe_random_walk(o.mux_window); }, {}},
      {"turn", "turn left by 90 degrees", 60.0, {},
       [](const DemoOptions& o) { return TaskPlan(task_turn(Left{Degrees{o.turn_degrees}})); }},
      {"move-task", "move forward 100 cm", 60.0, {},
       [](const DemoOptions& o) { return TaskPlan(task_move(Forward{Centimeters{o.move_cm}})); }},
      {"draw-square", "trace a square: four times move forward, turn left", 120.0, {},
       [](const DemoOptions& o) { return task_draw_square(Centimeters{o.square_side}); }},
  };
  return catalog;
}

inline const Demo* find_demo(const std::string& name) {
  for (const Demo& d : demo_catalog())
    if (d.name == name) return &d;
  return nullptr;
}

}  // namespace liftbot
