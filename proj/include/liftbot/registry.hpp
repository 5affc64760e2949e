#pragma once

#include <any>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <typeindex>
#include <vector>

#include "liftbot/fields.hpp"
#include "liftbot/wrappers.hpp"

namespace liftbot {

enum class Errc {
  duplicate_name,
  duplicate_type,
  missing_default,
  unregistered_type,
  kind_mismatch,
  bad_task,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

enum class EventKind { robot_sensor, robot_command, user_event, memory, clock, random_seed, done };

inline std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::robot_sensor: return "robot-sensor";
    case EventKind::robot_command: return "robot-command";
    case EventKind::user_event: return "user-event";
    case EventKind::memory: return "memory";
    case EventKind::clock: return "clock";
    case EventKind::random_seed: return "random-seed";
    case EventKind::done: return "done";
  }
  return "?";
}

struct EventTypeId {
  std::uint32_t value = 0;
  friend auto operator<=>(EventTypeId, EventTypeId) = default;
};

/// Which side of the bus a type may appear on. A type is a sensor when a
/// controller may take it as input and a command when a controller may
/// return it.
struct Capabilities {
  bool sensor = false;
  bool command = false;
};

inline Capabilities default_capabilities(EventKind k) {
  switch (k) {
    case EventKind::robot_sensor: return {true, false};
    case EventKind::robot_command: return {false, true};
    case EventKind::user_event: return {true, true};
    case EventKind::clock: return {true, false};
    case EventKind::done: return {false, true};
    case EventKind::memory:
    case EventKind::random_seed: return {false, false};
  }
  return {};
}

struct EventTypeInfo {
  EventTypeId id;
  std::string name;
  EventKind kind;
  Capabilities caps;
  std::type_index type;  // Memory<T> for memory cells, T otherwise
  std::any default_value;  // holds a T for memory cells
  std::function<Fields(const std::any&)> fields;
};

class EventRegistry {
 public:
  /// Registers T under `name`. For `EventKind::memory` this registers the
  /// cell Memory<T>, which requires a default.
  template <class T>
  EventTypeId register_event_type(std::string name, EventKind kind, std::optional<T> default_value = {}) {
    return register_event_type<T>(std::move(name), kind, std::move(default_value), default_capabilities(kind));
  }

  template <class T>
  EventTypeId register_event_type(std::string name, EventKind kind, std::optional<T> default_value,
                                  Capabilities caps) {
    if (by_name_.count(name)) throw Error(Errc::duplicate_name, "event type name already registered: " + name);
    if (kind == EventKind::memory && !default_value)
      throw Error(Errc::missing_default, "memory cell '" + name + "' needs a default value");
    std::type_index key = kind == EventKind::memory ? std::type_index(typeid(Memory<T>)) : std::type_index(typeid(T));
    if (by_type_.count(key)) throw Error(Errc::duplicate_type, "C++ type already registered (as '" +
                                                                   infos_[by_type_.at(key)].name + "'), not as '" +
                                                                   name + "'");
    EventTypeId id{static_cast<std::uint32_t>(infos_.size())};
    std::any def;
    if (default_value) def = std::move(*default_value);
    infos_.push_back(EventTypeInfo{id, name, kind, caps, key, std::move(def),
                                   [](const std::any& v) { return trace_fields(std::any_cast<const T&>(v)); }});
    by_name_.emplace(std::move(name), id.value);
    by_type_.emplace(key, id.value);
    return id;
  }

  const EventTypeInfo& info(EventTypeId id) const {
    if (id.value >= infos_.size()) throw Error(Errc::unregistered_type, "unknown event type id");
    return infos_[id.value];
  }

  std::optional<EventTypeId> find(std::type_index t) const {
    auto it = by_type_.find(t);
    if (it == by_type_.end()) return std::nullopt;
    return EventTypeId{it->second};
  }

  const EventTypeInfo* find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    return it == by_name_.end() ? nullptr : &infos_[it->second];
  }

  template <class T>
  bool contains() const {
    return by_type_.count(typeid(T)) != 0;
  }

  EventTypeId id_of(std::type_index t) const {
    if (auto id = find(t)) return *id;
    throw Error(Errc::unregistered_type, std::string("event type not registered: ") + t.name());
  }

  template <class T>
  EventTypeId id_of() const {
    return id_of(typeid(T));
  }

  std::size_t size() const { return infos_.size(); }

 private:
  std::vector<EventTypeInfo> infos_;
  std::map<std::string, std::uint32_t, std::less<>> by_name_;
  std::map<std::type_index, std::uint32_t> by_type_;
};

}  // namespace liftbot
