#pragma once

// Implicit lifting: a plain function over single event values becomes a
// reactive node. Its signature decides the stream plumbing.
//
//   argument type              meaning
//   T                          subscribe to T (blocks until a fresh value)
//   std::pair<A, B>            both_new fusion of A and B
//   std::variant<A, B, ...>    ordered merge; fires on any alternative
//   Memory<T>                  current value of the T cell (never blocks)
//   Seconds                    current simulated time (never blocks)
//   RandomSeed                 fresh child generator (never blocks)
//
// Several arguments fuse like nested pairs. A function whose arguments never
// block fires on every clock tick.
//
//   result type                meaning
//   T                          publish T
//   std::tuple / std::pair     publish each component, in order
//   std::optional<T>           publish nothing when empty
//   std::variant<...>          publish the active alternative
//   Memory<T>                  write the T cell
//   Done<R>                    terminate the enclosing task with R
//   Unit                       nothing

#include <any>
#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <typeindex>
#include <utility>
#include <variant>
#include <vector>

#include "liftbot/bus.hpp"
#include "liftbot/event_core.hpp"
#include "liftbot/memory.hpp"
#include "liftbot/registry.hpp"
#include "liftbot/robot_api.hpp"
#include "liftbot/wrappers.hpp"

namespace liftbot {

struct Shape {
  enum class Kind { unit, event, pair, variant, memory, clock, random, tuple, optional, done };

  Kind kind = Kind::unit;
  std::type_index type = typeid(void);
  std::vector<Shape> children;

  static Shape leaf(Kind k, std::type_index t) { return Shape{k, t, {}}; }
  static Shape node(Kind k, std::vector<Shape> c) { return Shape{k, typeid(void), std::move(c)}; }

  template <class F>
  void for_each_leaf(F&& f) const {
    if (children.empty()) {
      f(*this);
      return;
    }
    for (const Shape& c : children) c.for_each_leaf(f);
  }

  std::size_t count(Kind k) const {
    std::size_t n = kind == k ? 1 : 0;
    for (const Shape& c : children) n += c.count(k);
    return n;
  }
};

struct InputRecord {
  EventTypeId type;
  std::any value;
};

struct Effect {
  enum class Kind { publish, memory, done };
  Kind kind;
  EventTypeId type;
  std::any value;
};

/// What an installed controller sees of the runtime.
class NodeContext {
 public:
  virtual ~NodeContext() = default;
  virtual const EventRegistry& registry() const = 0;
  virtual EventStream<std::any> subscribe(EventTypeId id) = 0;
  virtual double now() const = 0;
  virtual SplitMix64 split_rng() = 0;
  virtual MemoryStore& memory() = 0;
  virtual bool finished() const = 0;
  // Called once per firing, after its memory transaction committed.
  virtual void emit(const std::string& controller, std::vector<InputRecord> inputs, std::vector<Effect> effects) = 0;
};

class ControllerInstance {
 public:
  virtual ~ControllerInstance() = default;

  /// Fires once for every complete fresh input available now. Returns the
  /// number of firings.
  virtual std::size_t fire(NodeContext& ctx) = 0;

  // A one-shot instance stops after its first firing that produced output.
  void set_one_shot(bool v) { one_shot_ = v; }
  bool spent() const { return spent_; }

 protected:
  bool one_shot_ = false;
  bool spent_ = false;
};

// ---------------------------------------------------------------------------
// Input shapes

template <class T>
EventStream<T> typed_stream(EventStream<std::any> s) {
  return stream_map([](std::any v) { return std::any_cast<T>(std::move(v)); }, std::move(s));
}

template <class T>
struct input_traits {
  static constexpr bool blocking = true;
  static Shape shape() { return Shape::leaf(Shape::Kind::event, typeid(T)); }
  static EventStream<T> open(NodeContext& ctx) { return typed_stream<T>(ctx.subscribe(ctx.registry().id_of<T>())); }
  static void record(const T& v, NodeContext& ctx, std::vector<InputRecord>& out) {
    out.push_back({ctx.registry().id_of<T>(), std::any(v)});
  }
};

template <class T>
struct input_traits<Memory<T>> {
  static constexpr bool blocking = false;
  static Shape shape() { return Shape::leaf(Shape::Kind::memory, typeid(Memory<T>)); }
  static Memory<T> sample(NodeContext&, Transaction& txn) { return Memory<T>{txn.read<T>()}; }
};

template <>
struct input_traits<Seconds> {
  static constexpr bool blocking = false;
  static Shape shape() { return Shape::leaf(Shape::Kind::clock, typeid(Seconds)); }
  static Seconds sample(NodeContext& ctx, Transaction&) { return Seconds{ctx.now()}; }
};

template <>
struct input_traits<RandomSeed> {
  static constexpr bool blocking = false;
  static Shape shape() { return Shape::leaf(Shape::Kind::random, typeid(RandomSeed)); }
  static RandomSeed sample(NodeContext& ctx, Transaction&) { return RandomSeed{ctx.split_rng()}; }
};

template <class A, class B>
struct input_traits<std::pair<A, B>> {
  static_assert(input_traits<A>::blocking && input_traits<B>::blocking,
                "fused pair components must be subscribed events");
  static constexpr bool blocking = true;
  static Shape shape() { return Shape::node(Shape::Kind::pair, {input_traits<A>::shape(), input_traits<B>::shape()}); }
  static EventStream<std::pair<A, B>> open(NodeContext& ctx) {
    return both_new(input_traits<A>::open(ctx), input_traits<B>::open(ctx));
  }
  static void record(const std::pair<A, B>& v, NodeContext& ctx, std::vector<InputRecord>& out) {
    input_traits<A>::record(v.first, ctx, out);
    input_traits<B>::record(v.second, ctx, out);
  }
};

template <class... Ts>
struct input_traits<std::variant<Ts...>> {
  static_assert((input_traits<Ts>::blocking && ...), "merged alternatives must be subscribed events");
  using V = std::variant<Ts...>;
  static constexpr bool blocking = true;
  static Shape shape() { return Shape::node(Shape::Kind::variant, {input_traits<Ts>::shape()...}); }

  static EventStream<V> open(NodeContext& ctx) { return open_from<0>(ctx); }

  static void record(const V& v, NodeContext& ctx, std::vector<InputRecord>& out) {
    std::visit([&](const auto& x) { input_traits<std::decay_t<decltype(x)>>::record(x, ctx, out); }, v);
  }

 private:
  template <std::size_t I>
  static EventStream<V> open_from(NodeContext& ctx) {
    using Alt = std::variant_alternative_t<I, V>;
    auto mine = stream_map([](Alt a) { return V(std::in_place_index<I>, std::move(a)); },
                           input_traits<Alt>::open(ctx));
    if constexpr (I + 1 == sizeof...(Ts)) {
      return mine;
    } else {
      return merge(std::move(mine), open_from<I + 1>(ctx));
    }
  }
};

// ---------------------------------------------------------------------------
// Output shapes

template <class T>
struct output_traits {
  static Shape shape() { return Shape::leaf(Shape::Kind::event, typeid(T)); }
  static void emit(const T& v, const EventRegistry& reg, Transaction&, std::vector<Effect>& out) {
    out.push_back({Effect::Kind::publish, reg.id_of<T>(), std::any(v)});
  }
};

template <>
struct output_traits<Unit> {
  static Shape shape() { return Shape{}; }
  static void emit(const Unit&, const EventRegistry&, Transaction&, std::vector<Effect>&) {}
};

template <class T>
struct output_traits<Memory<T>> {
  static Shape shape() { return Shape::leaf(Shape::Kind::memory, typeid(Memory<T>)); }
  static void emit(const Memory<T>& m, const EventRegistry& reg, Transaction& txn, std::vector<Effect>& out) {
    EventTypeId id = reg.id_of<Memory<T>>();
    txn.write(id, std::any(m.value));
    out.push_back({Effect::Kind::memory, id, std::any(m.value)});
  }
};

template <class R>
struct output_traits<Done<R>> {
  static Shape shape() { return Shape::leaf(Shape::Kind::done, typeid(Done<R>)); }
  static void emit(const Done<R>& d, const EventRegistry& reg, Transaction&, std::vector<Effect>& out) {
    out.push_back({Effect::Kind::done, reg.id_of<Done<R>>(), std::any(d)});
  }
};

template <class T>
struct output_traits<std::optional<T>> {
  static Shape shape() { return Shape::node(Shape::Kind::optional, {output_traits<T>::shape()}); }
  static void emit(const std::optional<T>& v, const EventRegistry& reg, Transaction& txn, std::vector<Effect>& out) {
    if (v) output_traits<T>::emit(*v, reg, txn, out);
  }
};

template <class... Ts>
struct output_traits<std::tuple<Ts...>> {
  static Shape shape() { return Shape::node(Shape::Kind::tuple, {output_traits<Ts>::shape()...}); }
  static void emit(const std::tuple<Ts...>& v, const EventRegistry& reg, Transaction& txn, std::vector<Effect>& out) {
    std::apply([&](const auto&... xs) { (output_traits<std::decay_t<decltype(xs)>>::emit(xs, reg, txn, out), ...); },
               v);
  }
};

template <class A, class B>
struct output_traits<std::pair<A, B>> {
  static Shape shape() {
    return Shape::node(Shape::Kind::tuple, {output_traits<A>::shape(), output_traits<B>::shape()});
  }
  static void emit(const std::pair<A, B>& v, const EventRegistry& reg, Transaction& txn, std::vector<Effect>& out) {
    output_traits<A>::emit(v.first, reg, txn, out);
    output_traits<B>::emit(v.second, reg, txn, out);
  }
};

template <class... Ts>
struct output_traits<std::variant<Ts...>> {
  static Shape shape() { return Shape::node(Shape::Kind::variant, {output_traits<Ts>::shape()...}); }
  static void emit(const std::variant<Ts...>& v, const EventRegistry& reg, Transaction& txn,
                   std::vector<Effect>& out) {
    std::visit([&](const auto& x) { output_traits<std::decay_t<decltype(x)>>::emit(x, reg, txn, out); }, v);
  }
};

// ---------------------------------------------------------------------------
// Function controllers

namespace detail {

inline EventStream<std::vector<std::any>> fuse_all(std::vector<EventStream<std::any>> streams) {
  auto acc = stream_map([](std::any v) { return std::vector<std::any>{std::move(v)}; }, std::move(streams.front()));
  for (std::size_t i = 1; i < streams.size(); ++i) {
    acc = stream_map(
        [](std::pair<std::vector<std::any>, std::any> p) {
          p.first.push_back(std::move(p.second));
          return std::move(p.first);
        },
        both_new(std::move(acc), std::move(streams[i])));
  }
  return acc;
}

template <class R, class... Args>
class FunctionInstance final : public ControllerInstance {
  static constexpr std::size_t N = sizeof...(Args);
  static constexpr std::array<bool, N> kBlocking{input_traits<Args>::blocking...};
  static constexpr std::array<int, N> kSlot = [] {
    std::array<int, N> s{};
    int next = 0;
    for (std::size_t i = 0; i < N; ++i) s[i] = kBlocking[i] ? next++ : -1;
    return s;
  }();
  static constexpr std::size_t kBlockingCount = (std::size_t{0} + ... + (input_traits<Args>::blocking ? 1u : 0u));

 public:
  FunctionInstance(std::string label, std::function<R(Args...)> f, NodeContext& ctx)
      : label_(std::move(label)), f_(std::move(f)), trigger_(open_trigger(ctx)) {}

  std::size_t fire(NodeContext& ctx) override {
    std::size_t n = 0;
    while (!spent_ && !ctx.finished()) {
      auto in = trigger_.next();
      if (!in) break;
      fire_impl(std::move(in->value), ctx, std::index_sequence_for<Args...>{});
      ++n;
    }
    return n;
  }

 private:
  static EventStream<std::vector<std::any>> open_trigger(NodeContext& ctx) {
    if constexpr (kBlockingCount == 0) {
      return stream_map([](std::any) { return std::vector<std::any>{}; },
                        ctx.subscribe(ctx.registry().id_of<Seconds>()));
    } else {
      std::vector<EventStream<std::any>> streams;
      (open_one<Args>(ctx, streams), ...);
      return fuse_all(std::move(streams));
    }
  }

  template <class A>
  static void open_one(NodeContext& ctx, std::vector<EventStream<std::any>>& out) {
    if constexpr (input_traits<A>::blocking) {
      out.push_back(stream_map([](A v) { return std::any(std::move(v)); }, input_traits<A>::open(ctx)));
    }
  }

  template <std::size_t I>
  static auto make_arg(std::vector<std::any>& fused, NodeContext& ctx, Transaction& txn) {
    using A = std::tuple_element_t<I, std::tuple<Args...>>;
    if constexpr (input_traits<A>::blocking) {
      return std::any_cast<A>(std::move(fused[static_cast<std::size_t>(kSlot[I])]));
    } else {
      return input_traits<A>::sample(ctx, txn);
    }
  }

  template <class A>
  static void record_arg(const A& a, NodeContext& ctx, std::vector<InputRecord>& out) {
    if constexpr (input_traits<A>::blocking) input_traits<A>::record(a, ctx, out);
  }

  template <std::size_t... Is>
  void fire_impl(std::vector<std::any> fused, NodeContext& ctx, std::index_sequence<Is...>) {
    Transaction txn = ctx.memory().begin();
    // Braced initialisation evaluates left to right, so random draws happen
    // in argument order.
    std::tuple<Args...> args{make_arg<Is>(fused, ctx, txn)...};
    std::vector<InputRecord> inputs;
    (record_arg<Args>(std::get<Is>(args), ctx, inputs), ...);
    std::vector<Effect> effects;
    if constexpr (std::is_void_v<R>) {
      std::apply(f_, std::move(args));
    } else {
      R out = std::apply(f_, std::move(args));
      output_traits<R>::emit(out, ctx.registry(), txn, effects);
    }
    txn.commit();
    if (one_shot_ && !effects.empty()) spent_ = true;
    ctx.emit(label_, std::move(inputs), std::move(effects));
  }

  std::string label_;
  std::function<R(Args...)> f_;
  EventStream<std::vector<std::any>> trigger_;
};

}  // namespace detail

/// A composable description of a reactive node: either one lifted function
/// or a parallel group.
class ControllerSpec {
 public:
  struct Function {
    std::string label;
    Shape input;
    Shape output;
    std::function<std::unique_ptr<ControllerInstance>(NodeContext&)> make;
  };

  ControllerSpec() = default;  // empty parallel group
  explicit ControllerSpec(Function f) : node_(std::move(f)) {}
  explicit ControllerSpec(std::vector<ControllerSpec> children) : node_(std::move(children)) {}

  bool is_function() const { return std::holds_alternative<Function>(node_); }
  const Function& function() const { return std::get<Function>(node_); }
  const std::vector<ControllerSpec>& children() const { return std::get<std::vector<ControllerSpec>>(node_); }

  // Function leaves, depth first.
  std::vector<const Function*> leaves() const {
    std::vector<const Function*> out;
    collect(out);
    return out;
  }

 private:
  void collect(std::vector<const Function*>& out) const {
    if (is_function()) {
      out.push_back(&function());
      return;
    }
    for (const auto& c : children()) c.collect(out);
  }

  std::variant<std::vector<ControllerSpec>, Function> node_;
};

template <class R, class... Args>
ControllerSpec make_controller(std::string label, std::function<R(Args...)> fn) {
  if constexpr (!(std::is_same_v<Args, std::decay_t<Args>> && ...)) {
    // Parameters taken by reference still mean "one value of this type".
    return make_controller(std::move(label), std::function<R(std::decay_t<Args>...)>(std::move(fn)));
  } else {
    Shape input;
    if constexpr (sizeof...(Args) == 1) {
      input = input_traits<Args...>::shape();
    } else if constexpr (sizeof...(Args) > 1) {
      std::vector<Shape> shapes{input_traits<Args>::shape()...};
      input = shapes.front();
      for (std::size_t i = 1; i < shapes.size(); ++i) input = Shape::node(Shape::Kind::pair, {input, shapes[i]});
    }
    Shape output;
    if constexpr (!std::is_void_v<R>) output = output_traits<R>::shape();
    auto make = [label, f = std::move(fn)](NodeContext& ctx) -> std::unique_ptr<ControllerInstance> {
      return std::make_unique<detail::FunctionInstance<R, Args...>>(label, f, ctx);
    };
    return ControllerSpec(
        ControllerSpec::Function{std::move(label), std::move(input), std::move(output), std::move(make)});
  }
}

/// Lifts a function (pointer, lambda, or functor with one call signature).
template <class F>
ControllerSpec controller(std::string label, F f) {
  return make_controller(std::move(label), std::function{std::move(f)});
}

template <class... Specs>
ControllerSpec parallel(Specs... specs) {
  return ControllerSpec(std::vector<ControllerSpec>{std::move(specs)...});
}

inline ControllerSpec parallel(std::vector<ControllerSpec> specs) { return ControllerSpec(std::move(specs)); }

/// Checks every leaf of the spec against the registry: inputs must be
/// registered sensors or memory cells, outputs registered commands, memory
/// cells, or done types.
inline void validate(const ControllerSpec& spec, const EventRegistry& reg) {
  auto need = [&](const Shape& leaf, bool input) {
    switch (leaf.kind) {
      case Shape::Kind::unit:
        return;
      case Shape::Kind::clock:
      case Shape::Kind::random:
        reg.id_of(leaf.type);
        return;
      default:
        break;
    }
    const EventTypeInfo& info = reg.info(reg.id_of(leaf.type));
    bool ok = false;
    switch (leaf.kind) {
      case Shape::Kind::memory: ok = info.kind == EventKind::memory; break;
      case Shape::Kind::done: ok = !input && info.kind == EventKind::done; break;
      case Shape::Kind::event: ok = input ? info.caps.sensor : info.caps.command; break;
      default: break;
    }
    if (!ok)
      throw Error(Errc::kind_mismatch, "'" + info.name + "' (" + std::string(to_string(info.kind)) +
                                           ") cannot be used as a controller " + (input ? "input" : "output"));
  };
  for (const auto* leaf : spec.leaves()) {
    leaf->input.for_each_leaf([&](const Shape& s) { need(s, true); });
    leaf->output.for_each_leaf([&](const Shape& s) { need(s, false); });
    if (leaf->input.kind == Shape::Kind::unit) reg.id_of(typeid(Seconds));  // clock-triggered
  }
}

}  // namespace liftbot
