#pragma once

// Tasks: an initialisation controller that fires once, a continuous body
// controller, and a Done event that ends both. Plans sequence tasks and pass
// each result on to the continuation.

#include <any>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <typeindex>
#include <utility>
#include <variant>
#include <vector>

#include "liftbot/controller.hpp"
#include "liftbot/robot_api.hpp"
#include "liftbot/runtime.hpp"
#include "liftbot/wrappers.hpp"

namespace liftbot {

struct Task {
  std::string name;
  ControllerSpec init;
  ControllerSpec body;
  std::type_index result_type = typeid(Unit);
  std::function<std::any(const std::any&)> unwrap;  // Done<R> -> R
};

/// Builds a task whose body terminates with Done<R>. The body must contain
/// exactly one Done leaf, of that type.
template <class R>
Task make_task(std::string name, ControllerSpec init, ControllerSpec body) {
  std::size_t done_leaves = 0;
  bool wrong_type = false;
  for (const auto* leaf : body.leaves()) {
    leaf->output.for_each_leaf([&](const Shape& s) {
      if (s.kind != Shape::Kind::done) return;
      ++done_leaves;
      if (s.type != std::type_index(typeid(Done<R>))) wrong_type = true;
    });
  }
  if (done_leaves != 1 || wrong_type)
    throw Error(Errc::bad_task, "task '" + name + "' body must produce exactly one Done of its result type (found " +
                                    std::to_string(done_leaves) + ")");
  return Task{std::move(name), std::move(init), std::move(body), typeid(R),
              [](const std::any& d) { return std::any(std::any_cast<const Done<R>&>(d).result); }};
}

class TaskPlan {
 public:
  using Continuation = std::function<TaskPlan(const std::any&)>;

  struct Single {
    Task task;
  };
  struct Sequence {
    std::shared_ptr<const TaskPlan> first;
    Continuation next;
  };
  struct Repeat {
    std::size_t count;
    std::shared_ptr<const TaskPlan> body;
  };

  TaskPlan(Task t) : node_(Single{std::move(t)}) {}  // NOLINT: a task is a one-step plan

  static TaskPlan sequence(TaskPlan first, Continuation next) {
    return TaskPlan(Sequence{std::make_shared<const TaskPlan>(std::move(first)), std::move(next)});
  }

  /// Runs `first`, ignores its result, then runs `second`.
  static TaskPlan then(TaskPlan first, TaskPlan second) {
    auto keep = std::make_shared<const TaskPlan>(std::move(second));
    return sequence(std::move(first), [keep](const std::any&) { return *keep; });
  }

  static TaskPlan repeat(std::size_t n, TaskPlan body) {
    return TaskPlan(Repeat{n, std::make_shared<const TaskPlan>(std::move(body))});
  }

  const std::variant<Single, Sequence, Repeat>& node() const { return node_; }

 private:
  template <class N>
  explicit TaskPlan(N n) : node_(std::move(n)) {}

  std::variant<Single, Sequence, Repeat> node_;
};

struct PlanOutcome {
  bool completed = false;
  bool timed_out = false;
  std::any result;
};

/// Drives a plan on a runtime. Transitions happen in the runtime's post
/// hook, between instants.
class PlanRunner {
 public:
  explicit PlanRunner(Runtime& rt) : rt_(&rt) {}

  void begin(const TaskPlan& plan) {
    std::visit(
        [&](const auto& n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, TaskPlan::Single>) {
            launch(n.task);
          } else if constexpr (std::is_same_v<N, TaskPlan::Sequence>) {
            frames_.push_back(Frame{n.next, 0, nullptr});
            begin(*n.first);
          } else {
            if (n.count == 0) {
              complete(std::any(Unit{}));
            } else {
              frames_.push_back(Frame{{}, n.count, n.body});
              begin(*n.body);
            }
          }
        },
        plan.node());
  }

  /// Called between instants.
  void poll() {
    if (!active_) return;
    Active& a = *active_;
    if (!a.in_body) {
      if (!rt_->group_spent(a.group)) return;
      rt_->uninstall(a.group);
      enter_body(a);
      return;
    }
    if (!rt_->node_finished(a.node)) return;
    std::any result = a.task.unwrap(rt_->node_result(a.node));
    rt_->remove_node(a.node);
    active_.reset();
    complete(std::move(result));
  }

  bool finished() const { return finished_; }
  const std::any& result() const { return result_; }
  std::size_t tasks_started() const { return counter_; }

 private:
  struct Frame {
    TaskPlan::Continuation next;  // set for Sequence
    std::size_t remaining;        // set for Repeat
    std::shared_ptr<const TaskPlan> body;
  };

  struct Active {
    Task task;
    NodeId node;
    GroupId group;
    bool in_body;
  };

  void launch(const Task& task) {
    ++counter_;
    NodeId node = rt_->create_node("task" + std::to_string(counter_));
    active_ = Active{task, node, 0, false};
    if (task.init.leaves().empty()) {
      enter_body(*active_);
    } else {
      active_->group = rt_->install(node, task.init, "init", true);
    }
  }

  void enter_body(Active& a) {
    a.group = rt_->install(a.node, a.task.body, "body");
    a.in_body = true;
  }

  void complete(std::any r) {
    while (!frames_.empty()) {
      Frame& top = frames_.back();
      if (top.next) {
        auto next = std::move(top.next);
        frames_.pop_back();
        begin(next(r));
        return;
      }
      if (--top.remaining > 0) {
        begin(*top.body);
        return;
      }
      frames_.pop_back();
      r = Unit{};
    }
    finished_ = true;
    result_ = std::move(r);
  }

  Runtime* rt_;
  std::vector<Frame> frames_;
  std::optional<Active> active_;
  std::size_t counter_ = 0;
  bool finished_ = false;
  std::any result_;
};

/// Runs `plan` until it completes or `time_limit` simulated seconds pass.
inline PlanOutcome run_plan(Runtime& rt, const TaskPlan& plan, double time_limit) {
  auto runner = std::make_shared<PlanRunner>(rt);
  rt.add_post_hook([runner](Runtime&) { runner->poll(); });
  runner->begin(plan);
  bool done = rt.run_until([&] { return runner->finished(); }, time_limit);
  return PlanOutcome{done, !done, runner->result()};
}

// ---------------------------------------------------------------------------
// Reference tasks

struct TurnTarget {
  double radians = 0.0;
};
inline Fields trace_fields(const TurnTarget& t) { return {{"theta", t.radians}}; }

struct MoveOrigin {
  double x = 0.0;
  double y = 0.0;
};
inline Fields trace_fields(const MoveOrigin& m) { return {{"x", m.x}, {"y", m.y}}; }

struct Left {
  Degrees angle;
};
struct Right {
  Degrees angle;
};
using TurnSide = std::variant<Left, Right>;

struct Forward {
  Centimeters distance;
};
struct Backward {
  Centimeters distance;
};
using MoveDirection = std::variant<Forward, Backward>;

inline void register_task_types(EventRegistry& reg) {
  if (!reg.contains<Done<Unit>>()) reg.register_event_type<Done<Unit>>("done", EventKind::done);
  if (!reg.contains<Memory<TurnTarget>>())
    reg.register_event_type<TurnTarget>("turn_target", EventKind::memory, TurnTarget{});
  if (!reg.contains<Memory<MoveOrigin>>())
    reg.register_event_type<MoveOrigin>("move_origin", EventKind::memory, MoveOrigin{});
}

/// Turns in place by the given angle; Left is counter-clockwise.
inline Task task_turn(TurnSide side) {
  double delta = std::visit(
      [](const auto& s) {
        double a = degrees_to_orientation(s.angle).radians;
        return std::is_same_v<std::decay_t<decltype(s)>, Left> ? a : -a;
      },
      side);
  auto start_turn = controller("startTurn", [delta](Orientation o) {
    return Memory<TurnTarget>{TurnTarget{o.radians + delta}};
  });
  auto run_turn = controller(
      "runTurn", [](Memory<TurnTarget> to, Orientation from) -> std::tuple<Velocity, std::optional<Done<Unit>>> {
        double d = norm_orientation(to.value.radians - from.radians).radians;
        if (std::abs(d) <= kTurnTolerance) return {Velocity{0.0, 0.0}, Done<Unit>{}};
        return {Velocity{0.0, orientation_to_angular_velocity(d)}, std::nullopt};
      });
  return make_task<Unit>("turn", start_turn, run_turn);
}

/// Drives straight until the given distance from the starting point.
inline Task task_move(MoveDirection dir) {
  double sign = std::holds_alternative<Forward>(dir) ? 1.0 : -1.0;
  double meters = std::visit([](const auto& d) { return d.distance.value / 100.0; }, dir);
  if (!(meters >= 0.0)) throw std::invalid_argument("move distance must be non-negative");
  auto start_move = controller("startMove", [](Position p) { return Memory<MoveOrigin>{MoveOrigin{p.x, p.y}}; });
  auto run_move = controller(
      "runMove",
      [sign, meters](Memory<MoveOrigin> from, Position p) -> std::tuple<Velocity, std::optional<Done<Unit>>> {
        if (std::hypot(p.x - from.value.x, p.y - from.value.y) >= meters) return {Velocity{0.0, 0.0}, Done<Unit>{}};
        return {Velocity{sign * kVelLin, 0.0}, std::nullopt};
      });
  return make_task<Unit>("move", start_move, run_move);
}

/// Four times: move forward by the side length, then turn left 90 degrees.
inline TaskPlan task_draw_square(Centimeters side = Centimeters{2.0}) {
  TaskPlan edge = TaskPlan::then(task_move(Forward{side}), task_turn(Left{Degrees{90.0}}));
  return TaskPlan::repeat(4, edge);
}

}  // namespace liftbot
