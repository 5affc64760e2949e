#pragma once

// Deterministic cooperative scheduler. Simulated time advances in fixed
// instants of dt seconds. One instant runs:
//
//   1. plant physics (skipped for the initial instant at t = 0)
//   2. periodic sensors, if due: velocity, position, orientation, then the clock
//   3. pre hooks
//   4. every live controller, in installation order
//   5. post hooks (task transitions happen here)

#include <any>
#include <cmath>
#include <cstdint>
#include <functional>
#include <list>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "liftbot/bus.hpp"
#include "liftbot/controller.hpp"
#include "liftbot/memory.hpp"
#include "liftbot/prng.hpp"
#include "liftbot/registry.hpp"
#include "liftbot/robot_api.hpp"

namespace liftbot {

struct RuntimeConfig {
  double dt = 0.02;          // s
  double sensor_rate = 10.0; // Hz
  std::uint64_t seed = 0;
};

/// Where a plant reports sensor readings.
class SensorSink {
 public:
  virtual ~SensorSink() = default;
  virtual const EventRegistry& registry() const = 0;
  virtual void publish(Event e) = 0;

  template <class T>
  void publish(double t, T value) {
    publish(Event{registry().template id_of<T>(), t, std::any(std::move(value))});
  }
};

/// The controlled system: the simulator, or a test double.
class Plant {
 public:
  virtual ~Plant() = default;
  // Integrates one physics step ending at `t` and reports edge events.
  virtual void advance(double t, double dt, SensorSink& out) = 0;
  // Periodic odometry readings.
  virtual void sample(double t, SensorSink& out) = 0;
  virtual void apply(const Event& command) = 0;
};

enum class Direction { pub, sub };

struct Record {
  double t = 0.0;
  Direction dir = Direction::pub;
  EventTypeId type;
  std::string node;
  std::any value;
};

using NodeId = std::uint32_t;
using GroupId = std::uint32_t;

class Runtime {
 public:
  explicit Runtime(RuntimeConfig cfg = {}, Plant* plant = nullptr) : cfg_(cfg), plant_(plant), rng_(cfg.seed) {
    if (!(cfg_.dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(cfg_.sensor_rate > 0.0)) throw std::invalid_argument("sensor rate must be positive");
    register_robot_api(registry_);
    main_ = create_node("main");
  }

  Runtime(const Runtime&) = delete;
  Runtime& operator=(const Runtime&) = delete;

  EventRegistry& registry() { return registry_; }
  const EventRegistry& registry() const { return registry_; }
  const RuntimeConfig& config() const { return cfg_; }
  double now() const { return static_cast<double>(steps_) * cfg_.dt; }
  std::uint64_t steps() const { return steps_; }
  bool started() const { return started_; }
  NodeId main_node() const { return main_; }

  // -- observation -------------------------------------------------------

  void add_observer(std::function<void(const Record&)> f) { observers_.push_back(std::move(f)); }
  void add_pre_hook(std::function<void(Runtime&)> f) { pre_hooks_.push_back(std::move(f)); }
  void add_post_hook(std::function<void(Runtime&)> f) { post_hooks_.push_back(std::move(f)); }

  // -- nodes and controllers ----------------------------------------------

  NodeId create_node(std::string name) {
    NodeId id = next_node_++;
    nodes_.push_back(std::make_unique<Node>(*this, id, std::move(name)));
    return id;
  }

  /// Installs every function leaf of `spec` into `node`. Labels read
  /// "<node>/<phase>/<leaf>" (phase omitted when empty).
  GroupId install(NodeId node, const ControllerSpec& spec, const std::string& phase = "", bool one_shot = false) {
    validate(spec, registry_);
    Node& n = node_ref(node);
    GroupId g = next_group_++;
    std::string prefix = n.name + "/" + (phase.empty() ? "" : phase + "/");
    for (const auto* leaf : spec.leaves()) {
      Slot slot;
      slot.group = g;
      slot.node = &n;
      slot.prefix = prefix;
      slot.instance = leaf->make(n);
      slot.instance->set_one_shot(one_shot);
      slots_.push_back(std::move(slot));
    }
    return g;
  }

  GroupId install(const ControllerSpec& spec) { return install(main_, spec); }

  void uninstall(GroupId g) {
    slots_.remove_if([g](const Slot& s) { return s.group == g; });
  }

  /// True once every controller in the group has fired its one-shot output.
  bool group_spent(GroupId g) const {
    bool any = false;
    for (const Slot& s : slots_) {
      if (s.group != g) continue;
      any = true;
      if (!s.instance->spent()) return false;
    }
    return any;
  }

  void remove_node(NodeId id) {
    slots_.remove_if([id](const Slot& s) { return s.node->id == id; });
    std::erase_if(nodes_, [id](const std::unique_ptr<Node>& n) { return n->id == id; });
  }

  bool node_finished(NodeId id) { return node_ref(id).done; }

  /// The Done<R> value that finished the node.
  const std::any& node_result(NodeId id) { return node_ref(id).result; }

  MemoryStore& memory(NodeId id) { return node_ref(id).store; }
  MemoryStore& memory() { return memory(main_); }

  // -- injection ------------------------------------------------------------

  /// Publishes a value as if a controller of `node` had produced it, at the
  /// current time. Robot sensors go to the shared sensor bus.
  template <class T>
  void publish(T value, std::optional<NodeId> node = {}) {
    EventTypeId id = registry_.id_of<T>();
    Event e{id, now(), std::any(std::move(value))};
    record(Direction::pub, id, "inject", e.payload);
    bus_for(id, node_ref(node.value_or(main_))).publish(e);
  }

  // -- stepping -------------------------------------------------------------

  /// Runs the initial instant without advancing time.
  void start() {
    if (started_) return;
    started_ = true;
    instant(false);
  }

  /// Advances n physics steps. The first call also runs the t = 0 instant.
  void step(std::uint64_t n = 1) {
    if (n == 0) return;
    start();
    for (std::uint64_t i = 0; i < n; ++i) {
      ++steps_;
      instant(true);
    }
  }

  /// Steps until `pred()` holds or `limit` seconds of simulated time pass.
  /// Returns whether the predicate held.
  template <class Pred>
  bool run_until(Pred pred, double limit) {
    if (pred()) return true;
    start();
    while (!pred()) {
      if (now() + 1e-9 >= limit) return false;
      step(1);
    }
    return true;
  }

  void run_for(double duration) {
    start();
    auto n = static_cast<std::uint64_t>(std::llround(duration / cfg_.dt));
    for (std::uint64_t i = 0; i < n; ++i) {
      ++steps_;
      instant(true);
    }
  }

 private:
  struct Node final : NodeContext {
    Node(Runtime& rt, NodeId id, std::string name) : rt(&rt), id(id), name(std::move(name)), store(rt.registry_) {}

    const EventRegistry& registry() const override { return rt->registry_; }
    EventStream<std::any> subscribe(EventTypeId type) override { return rt->bus_for(type, *this).subscribe(type); }
    double now() const override { return rt->now(); }
    SplitMix64 split_rng() override { return rt->rng_.split(); }
    MemoryStore& memory() override { return store; }
    bool finished() const override { return done; }
    void emit(const std::string& controller, std::vector<InputRecord> inputs, std::vector<Effect> effects) override {
      rt->on_firing(*this, controller, std::move(inputs), std::move(effects));
    }

    Runtime* rt;
    NodeId id;
    std::string name;
    MemoryStore store;
    Bus user_bus;
    bool done = false;
    std::any result;
    std::string prefix;  // of the controller currently firing
  };

  struct Slot {
    GroupId group = 0;
    Node* node = nullptr;
    std::string prefix;
    std::unique_ptr<ControllerInstance> instance;
  };

  class Sink final : public SensorSink {
   public:
    Sink(Runtime& rt, std::string source) : rt_(&rt), source_(std::move(source)) {}
    using SensorSink::publish;
    const EventRegistry& registry() const override { return rt_->registry_; }
    void publish(Event e) override {
      rt_->record(Direction::pub, e.type, source_, e.payload);
      rt_->sensors_.publish(e);
    }

   private:
    Runtime* rt_;
    std::string source_;
  };

  Node& node_ref(NodeId id) {
    for (auto& n : nodes_)
      if (n->id == id) return *n;
    throw std::out_of_range("no such node: " + std::to_string(id));
  }

  // Robot sensors and the clock are shared; everything else is node-local.
  Bus& bus_for(EventTypeId type, Node& node) {
    EventKind k = registry_.info(type).kind;
    return k == EventKind::robot_sensor || k == EventKind::clock ? sensors_ : node.user_bus;
  }

  void record(Direction dir, EventTypeId type, const std::string& node, const std::any& value) {
    if (observers_.empty()) return;
    Record r{now(), dir, type, node, value};
    for (auto& f : observers_) f(r);
  }

  void on_firing(Node& node, const std::string& controller, std::vector<InputRecord> inputs,
                 std::vector<Effect> effects) {
    const std::string label = node.prefix + controller;
    for (auto& in : inputs) record(Direction::sub, in.type, label, in.value);
    for (auto& e : effects) {
      switch (e.kind) {
        case Effect::Kind::memory:
          record(Direction::pub, e.type, label, e.value);
          break;
        case Effect::Kind::done:
          if (node.done) break;  // only the first Done counts
          node.done = true;
          node.result = e.value;
          record(Direction::pub, e.type, label, e.value);
          break;
        case Effect::Kind::publish: {
          record(Direction::pub, e.type, label, e.value);
          Event ev{e.type, now(), std::move(e.value)};
          if (registry_.info(e.type).kind == EventKind::user_event) {
            node.user_bus.publish(ev);
          } else if (plant_) {
            plant_->apply(ev);
          }
          break;
        }
      }
    }
  }

  void instant(bool physics) {
    const double t = now();
    sensors_.begin_instant();
    for (auto& n : nodes_) n->user_bus.begin_instant();

    Sink sim(*this, "sim");
    if (physics && plant_) plant_->advance(t, cfg_.dt, sim);
    if (t + 1e-9 >= static_cast<double>(sensor_tick_) / cfg_.sensor_rate) {
      if (plant_) plant_->sample(t, sim);
      Sink clock(*this, "clock");
      clock.publish(t, Seconds{t});
      sensor_tick_ = static_cast<std::uint64_t>(std::floor((t + 1e-9) * cfg_.sensor_rate)) + 1;
    }

    for (auto& h : pre_hooks_) h(*this);

    for (Slot& s : slots_) {
      if (s.node->done || s.instance->spent()) continue;
      s.node->prefix = s.prefix;
      s.instance->fire(*s.node);
    }

    for (auto& h : post_hooks_) h(*this);
  }

  RuntimeConfig cfg_;
  Plant* plant_;
  EventRegistry registry_;
  SplitMix64 rng_;
  Bus sensors_;
  std::vector<std::unique_ptr<Node>> nodes_;
  std::list<Slot> slots_;
  std::vector<std::function<void(const Record&)>> observers_;
  std::vector<std::function<void(Runtime&)>> pre_hooks_;
  std::vector<std::function<void(Runtime&)>> post_hooks_;
  NodeId main_ = 0;
  NodeId next_node_ = 0;
  GroupId next_group_ = 0;
  std::uint64_t steps_ = 0;
  std::uint64_t sensor_tick_ = 0;
  bool started_ = false;
};

}  // namespace liftbot
