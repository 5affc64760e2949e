#pragma once

// Kobuki-style event vocabulary plus the unit and angle helpers controllers
// use. Velocity is both a sensor (odometry readback) and a command.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include "liftbot/fields.hpp"
#include "liftbot/prng.hpp"
#include "liftbot/registry.hpp"

namespace liftbot {

inline constexpr double kPi = std::numbers::pi;

// Shared by the reference controllers.
inline constexpr double kVelLin = 0.5;  // m/s
inline constexpr double kVelAng = 0.1;  // rad/s

// Turning law: angular = clamp(K * d, -Omega, Omega).
inline constexpr double kTurnGain = 1.0;        // 1/s
inline constexpr double kMaxTurnRate = 0.5;     // rad/s
inline constexpr double kTurnTolerance = 0.02;  // rad

struct Velocity {
  double linear = 0.0;   // m/s
  double angular = 0.0;  // rad/s
  friend bool operator==(const Velocity&, const Velocity&) = default;
};

enum class Side { Left, Center, Right };
enum class BumperState { Pressed, Released };
enum class CliffState { Hole, Floor };
enum class WheelSide { Left, Right };
enum class WheelState { Air, Ground };
enum class LedColor { Black, Red, Orange, Green };
enum class Sound { ErrorSound, OnSound, OffSound, RechargeSound, ButtonSound, CleaningStartSound, CleaningEndSound };

struct BumperEvent {
  Side side = Side::Center;
  BumperState state = BumperState::Released;
  friend bool operator==(const BumperEvent&, const BumperEvent&) = default;
};

struct CliffEvent {
  Side side = Side::Center;
  CliffState state = CliffState::Floor;
  friend bool operator==(const CliffEvent&, const CliffEvent&) = default;
};

struct WheelEvent {
  WheelSide side = WheelSide::Left;
  WheelState state = WheelState::Ground;
  friend bool operator==(const WheelEvent&, const WheelEvent&) = default;
};

struct Led1 {
  LedColor color = LedColor::Black;
  friend bool operator==(const Led1&, const Led1&) = default;
};

struct Led2 {
  LedColor color = LedColor::Black;
  friend bool operator==(const Led2&, const Led2&) = default;
};

struct SoundCmd {
  Sound sound = Sound::ErrorSound;
  friend bool operator==(const SoundCmd&, const SoundCmd&) = default;
};

struct Orientation {
  double radians = 0.0;
  friend bool operator==(const Orientation&, const Orientation&) = default;
};

struct Position {
  double x = 0.0;  // m
  double y = 0.0;  // m
  friend bool operator==(const Position&, const Position&) = default;
};

struct Seconds {
  double value = 0.0;
  friend auto operator<=>(const Seconds&, const Seconds&) = default;
};

struct Degrees {
  double value = 0.0;
};

struct Centimeters {
  double value = 0.0;
};

/// A generator handed to a controller; each firing gets a fresh child of
/// the scheduler's root generator.
struct RandomSeed {
  SplitMix64 gen;
};

inline std::string to_string(Side s) {
  switch (s) {
    case Side::Left: return "left";
    case Side::Center: return "center";
    case Side::Right: return "right";
  }
  return "?";
}

inline std::string to_string(WheelSide s) { return s == WheelSide::Left ? "left" : "right"; }
inline std::string to_string(BumperState s) { return s == BumperState::Pressed ? "pressed" : "released"; }
inline std::string to_string(CliffState s) { return s == CliffState::Hole ? "hole" : "floor"; }
inline std::string to_string(WheelState s) { return s == WheelState::Air ? "air" : "ground"; }

inline std::string to_string(LedColor c) {
  switch (c) {
    case LedColor::Black: return "black";
    case LedColor::Red: return "red";
    case LedColor::Orange: return "orange";
    case LedColor::Green: return "green";
  }
  return "?";
}

inline std::string to_string(Sound s) {
  switch (s) {
    case Sound::ErrorSound: return "error";
    case Sound::OnSound: return "on";
    case Sound::OffSound: return "off";
    case Sound::RechargeSound: return "recharge";
    case Sound::ButtonSound: return "button";
    case Sound::CleaningStartSound: return "cleaning_start";
    case Sound::CleaningEndSound: return "cleaning_end";
  }
  return "?";
}

inline Fields trace_fields(const Velocity& v) { return {{"linear", v.linear}, {"angular", v.angular}}; }
inline Fields trace_fields(const BumperEvent& e) { return {{"side", to_string(e.side)}, {"state", to_string(e.state)}}; }
inline Fields trace_fields(const CliffEvent& e) { return {{"side", to_string(e.side)}, {"state", to_string(e.state)}}; }
inline Fields trace_fields(const WheelEvent& e) { return {{"side", to_string(e.side)}, {"state", to_string(e.state)}}; }
inline Fields trace_fields(const Led1& l) { return {{"color", to_string(l.color)}}; }
inline Fields trace_fields(const Led2& l) { return {{"color", to_string(l.color)}}; }
inline Fields trace_fields(const SoundCmd& s) { return {{"sound", to_string(s.sound)}}; }
inline Fields trace_fields(const Orientation& o) { return {{"theta", o.radians}}; }
inline Fields trace_fields(const Position& p) { return {{"x", p.x}, {"y", p.y}}; }
inline Fields trace_fields(const Seconds& s) { return {{"value", s.value}}; }
inline Fields trace_fields(const RandomSeed& r) { return {{"state", std::to_string(r.gen.state())}}; }

inline Orientation degrees_to_orientation(Degrees d) { return Orientation{d.value * kPi / 180.0}; }

/// Wraps an angle into (-pi, pi].
inline Orientation norm_orientation(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return Orientation{r};
}

inline Seconds double_to_seconds(double x) {
  if (!(x >= 0.0)) throw std::domain_error("negative duration: " + std::to_string(x));
  return Seconds{x};
}

/// Angular velocity that turns the robot through an orientation error `d`.
inline double orientation_to_angular_velocity(double d) {
  return std::clamp(d * kTurnGain, -kMaxTurnRate, kMaxTurnRate);
}

/// Registers the robot vocabulary under its trace topic names.
inline void register_robot_api(EventRegistry& reg) {
  reg.register_event_type<Velocity>("velocity", EventKind::robot_sensor, {}, Capabilities{true, true});
  reg.register_event_type<BumperEvent>("bumper", EventKind::robot_sensor);
  reg.register_event_type<CliffEvent>("cliff", EventKind::robot_sensor);
  reg.register_event_type<WheelEvent>("wheel", EventKind::robot_sensor);
  reg.register_event_type<Position>("position", EventKind::robot_sensor);
  reg.register_event_type<Orientation>("orientation", EventKind::robot_sensor);
  reg.register_event_type<Led1>("led1", EventKind::robot_command);
  reg.register_event_type<Led2>("led2", EventKind::robot_command);
  reg.register_event_type<SoundCmd>("sound", EventKind::robot_command);
  reg.register_event_type<Seconds>("seconds", EventKind::clock);
  reg.register_event_type<RandomSeed>("random_seed", EventKind::random_seed);
}

}  // namespace liftbot
