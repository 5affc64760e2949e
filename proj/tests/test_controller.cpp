#include <gtest/gtest.h>

#include <map>

#include "helpers.hpp"
#include "liftbot/controller.hpp"
#include "liftbot/runtime.hpp"
#include "oracles.hpp"

using namespace liftbot;
using testing_helpers::Recorder;

namespace {

struct Hit {
  bool on = false;
};
Fields trace_fields(const Hit& h) { return {{"on", h.on}}; }

struct Tick {
  int n = 0;
};
Fields trace_fields(const Tick& t) { return {{"n", static_cast<double>(t.n)}}; }

struct Counter {
  int n = 0;
};
Fields trace_fields(const Counter& c) { return {{"n", static_cast<double>(c.n)}}; }

struct Draws {
  double a = 0, b = 0;
};
Fields trace_fields(const Draws& d) { return {{"a", d.a}, {"b", d.b}}; }

// Runs `inject(step)` before the controllers of every instant.
struct Harness {
  explicit Harness(double rate = 10.0) : rt(RuntimeConfig{0.02, rate, 77}) {
    rt.registry().register_event_type<Hit>("hit", EventKind::memory, Hit{});
    rt.registry().register_event_type<Tick>("tick", EventKind::user_event);
    rt.registry().register_event_type<Counter>("counter", EventKind::memory, Counter{});
    rt.registry().register_event_type<Draws>("draws", EventKind::user_event);
    rec = Recorder::attach(rt);
    rt.add_pre_hook([this](Runtime& r) {
      auto it = script.find(r.steps());
      if (it != script.end()) it->second(r);
    });
  }

  Runtime rt;
  std::shared_ptr<Recorder> rec;
  std::map<std::uint64_t, std::function<void(Runtime&)>> script;
};

}  // namespace

TEST(Lifting, SingleInputEqualsStreamMap) {
  Harness h;
  std::vector<Velocity> inputs;
  for (int i = 0; i < 20; ++i) inputs.push_back(Velocity{0.1 * i, -0.05 * i});
  for (std::size_t i = 0; i < inputs.size(); ++i)
    h.script[i * 3] = [v = inputs[i]](Runtime& r) { r.publish(v); };
  auto f = [](Velocity v) { return Velocity{v.linear + 0.5, v.angular}; };
  h.rt.install(controller("accelerate", f));
  h.rt.step(70);

  std::vector<Timed<Velocity>> recorded;
  for (auto& [t, v] : h.rec->pubs<Velocity>("velocity", "inject")) recorded.push_back({t, v});
  auto s = stream_map(f, from_list(recorded));
  auto want = drain(s);
  auto got = h.rec->pubs<Velocity>("velocity", "main/accelerate");
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_EQ(got[i].first, want[i].t);
    EXPECT_EQ(got[i].second, want[i].value);
  }
}

TEST(Lifting, MemoryInputDoesNotBlock) {
  Harness h;
  h.script[2] = [](Runtime& r) { r.memory().write(Hit{true}); };
  h.script[1] = [](Runtime& r) { r.publish(Velocity{1.0, 0.0}); };
  h.script[3] = [](Runtime& r) { r.publish(Velocity{2.0, 0.0}); };
  h.rt.install(controller("accelerate", [](Memory<Hit> hit, Velocity v) {
    return Velocity{hit.value.on ? v.linear - 0.5 : v.linear + 0.5, 0.0};
  }));
  h.rt.step(5);
  auto got = h.rec->pubs<Velocity>("velocity", "main/accelerate");
  ASSERT_EQ(got.size(), 2u);  // only fresh Velocity samples trigger
  EXPECT_EQ(got[0].second.linear, 1.5);
  EXPECT_EQ(got[1].second.linear, 1.5);
}

TEST(Lifting, PairInputFusesWithBothNew) {
  Harness h;
  h.script[1] = [](Runtime& r) {
    r.publish(Position{1, 0});
    r.publish(Position{2, 0});
  };
  h.script[2] = [](Runtime& r) { r.publish(Orientation{0.5}); };
  h.script[3] = [](Runtime& r) { r.publish(Orientation{0.7}); };
  std::vector<std::pair<double, double>> seen;
  h.rt.install(controller("fuse", [&](std::pair<Position, Orientation> p) {
    seen.emplace_back(p.first.x, p.second.radians);
    return Unit{};
  }));
  h.rt.step(5);
  ASSERT_EQ(seen.size(), 1u);
  EXPECT_EQ(seen[0], std::make_pair(2.0, 0.5));
}

TEST(Lifting, MultipleBlockingArgumentsFuseLikePairs) {
  Harness h;
  h.script[1] = [](Runtime& r) {
    r.publish(Position{1, 0});
    r.publish(Orientation{0.1});
  };
  h.script[2] = [](Runtime& r) { r.publish(Position{3, 0}); };
  h.script[3] = [](Runtime& r) { r.publish(Orientation{0.3}); };
  std::vector<std::pair<double, double>> seen;
  h.rt.install(controller("two", [&](const Position& p, const Orientation& o) {
    seen.emplace_back(p.x, o.radians);
    return Unit{};
  }));
  h.rt.step(5);
  ASSERT_EQ(seen.size(), 2u);
  EXPECT_EQ(seen[0], std::make_pair(1.0, 0.1));
  EXPECT_EQ(seen[1], std::make_pair(3.0, 0.3));
}

TEST(Lifting, VariantInputFiresOnEitherSide) {
  Harness h;
  h.script[1] = [](Runtime& r) { r.publish(BumperEvent{Side::Left, BumperState::Pressed}); };
  h.script[2] = [](Runtime& r) { r.publish(CliffEvent{Side::Right, CliffState::Hole}); };
  h.script[3] = [](Runtime& r) {
    r.publish(CliffEvent{Side::Right, CliffState::Floor});
    r.publish(BumperEvent{Side::Left, BumperState::Released});
  };
  std::vector<int> order;
  h.rt.install(controller("either", [&](std::variant<BumperEvent, CliffEvent> e) {
    order.push_back(static_cast<int>(e.index()));
    return Unit{};
  }));
  h.rt.step(5);
  EXPECT_EQ(order, (std::vector<int>{0, 1, 0, 1}));  // ties go to the left alternative
}

TEST(Lifting, OptionalOutputPublishesNothingOnNone) {
  Harness h;
  for (int i = 1; i <= 6; ++i)
    h.script[i] = [i](Runtime& r) {
      r.publish(BumperEvent{Side::Center, i % 2 ? BumperState::Pressed : BumperState::Released});
    };
  h.rt.install(controller("play", [](BumperEvent b) -> std::optional<SoundCmd> {
    if (b.state == BumperState::Pressed) return SoundCmd{Sound::ErrorSound};
    return std::nullopt;
  }));
  h.rt.step(8);
  EXPECT_EQ(h.rec->count("bumper", Direction::sub, "main/play"), 6u);
  EXPECT_EQ(h.rec->count("sound", Direction::pub, "main/play"), 3u);
}

TEST(Lifting, TupleOutputPublishesEachInOrder) {
  Harness h;
  h.script[1] = [](Runtime& r) { r.publish(BumperEvent{Side::Center, BumperState::Pressed}); };
  h.rt.install(controller("multi", [](BumperEvent) { return std::tuple{Led1{LedColor::Orange}, Led2{}, Velocity{}}; }));
  h.rt.step(2);
  std::vector<std::string> topics;
  for (auto& tr : h.rec->trace)
    if (tr.node == "main/multi" && tr.dir == Direction::pub) topics.push_back(tr.topic);
  EXPECT_EQ(topics, (std::vector<std::string>{"led1", "led2", "velocity"}));
}

TEST(Lifting, VariantOutputRoutesByTag) {
  Harness h;
  h.script[1] = [](Runtime& r) { r.publish(Position{1, 0}); };
  h.script[2] = [](Runtime& r) { r.publish(Position{-1, 0}); };
  h.rt.install(controller("route", [](Position p) -> std::variant<Led1, Led2> {
    if (p.x > 0) return Led1{LedColor::Green};
    return Led2{LedColor::Red};
  }));
  h.rt.step(3);
  EXPECT_EQ(h.rec->count("led1", Direction::pub), 1u);
  EXPECT_EQ(h.rec->count("led2", Direction::pub), 1u);
}

TEST(Lifting, UnitInputFiresOnClockTicks) {
  Harness h;
  h.rt.install(controller("move", [] { return Velocity{0.5, 0.0}; }));
  h.rt.step(50);  // 1 s at 10 Hz: ticks at 0, 0.1, ..., 1.0
  auto got = h.rec->pubs<Velocity>("velocity", "main/move");
  ASSERT_EQ(got.size(), 11u);
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i].first, 0.1 * static_cast<double>(i), 1e-12);
}

TEST(Lifting, ClockSecondsFollowSensorRate) {
  Harness h;
  h.rt.step(25);
  auto secs = h.rec->pubs<Seconds>("seconds", "clock");
  ASSERT_EQ(secs.size(), 6u);
  for (std::size_t i = 0; i < secs.size(); ++i) EXPECT_NEAR(secs[i].second.value, 0.1 * static_cast<double>(i), 1e-12);
}

TEST(Lifting, RandomSeedIsAChildOfTheRootGenerator) {
  Harness h;
  h.script[1] = [](Runtime& r) { r.publish(Tick{1}); };
  h.script[2] = [](Runtime& r) { r.publish(Tick{2}); };
  h.rt.install(controller("rand", [](Tick, RandomSeed s) {
    double a = s.gen.uniform01();
    double b = s.gen.uniform01();
    return Draws{a, b};
  }));
  h.rt.step(3);
  auto got = h.rec->pubs<Draws>("draws", "main/rand");
  ASSERT_EQ(got.size(), 2u);
  std::uint64_t root = 77;
  for (auto& [t, d] : got) {
    std::uint64_t child = oracle::splitmix_next(root);
    double a = static_cast<double>(oracle::splitmix_next(child) >> 11) / 9007199254740992.0;
    double b = static_cast<double>(oracle::splitmix_next(child) >> 11) / 9007199254740992.0;
    EXPECT_EQ(d.a, a);
    EXPECT_EQ(d.b, b);
  }
}

TEST(Lifting, MemoryWriteCommitsAfterTheStep) {
  Harness h;
  for (int i = 1; i <= 3; ++i) h.script[i] = [i](Runtime& r) { r.publish(Tick{i}); };
  std::vector<int> seen;
  h.rt.install(controller("count", [&](Memory<Counter> c, Tick) {
    seen.push_back(c.value.n);
    return Memory<Counter>{Counter{c.value.n + 1}};
  }));
  h.rt.step(4);
  EXPECT_EQ(seen, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(h.rt.memory().read<Counter>().n, 3);
}

TEST(Lifting, ParallelCountersNeverLoseUpdates) {
  for (int n = 1; n <= 4; ++n) {
    Harness h(50.0);  // clock every step
    std::vector<ControllerSpec> specs;
    for (int i = 0; i < n; ++i)
      specs.push_back(controller("inc" + std::to_string(i), [](Memory<Counter> c, Seconds) {
        return Memory<Counter>{Counter{c.value.n + 1}};
      }));
    h.rt.install(parallel(specs));
    h.rt.step(99);  // 100 instants including t = 0
    EXPECT_EQ(h.rt.memory().read<Counter>().n, n * 100);
  }
}

TEST(Lifting, OneShotStopsAfterFirstOutput) {
  Harness h;
  for (int i = 1; i <= 3; ++i) h.script[i] = [i](Runtime& r) { r.publish(Tick{i}); };
  GroupId g = h.rt.install(h.rt.main_node(),
                           controller("once", [](Tick t) { return Memory<Counter>{Counter{t.n}}; }), "init", true);
  EXPECT_FALSE(h.rt.group_spent(g));
  h.rt.step(4);
  EXPECT_TRUE(h.rt.group_spent(g));
  EXPECT_EQ(h.rt.memory().read<Counter>().n, 1);
}

TEST(Lifting, ValidationRejectsBadShapes) {
  Harness h;
  struct Unknown {};
  EXPECT_THROW(h.rt.install(controller("x", [](Unknown) { return Unit{}; })), Error);
  try {
    h.rt.install(controller("x", [](Led1) { return Unit{}; }));
    FAIL() << "command type accepted as input";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kind_mismatch);
  }
  try {
    h.rt.install(controller("x", [](Tick) { return BumperEvent{}; }));
    FAIL() << "sensor type accepted as output";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kind_mismatch);
  }
}

TEST(Lifting, ShapesDescribeSignatures) {
  auto spec = controller("s", [](Memory<Hit>, std::variant<BumperEvent, CliffEvent>, Seconds)
                                  -> std::tuple<Velocity, std::optional<Memory<Hit>>> { return {}; });
  const auto& f = spec.function();
  EXPECT_EQ(f.input.count(Shape::Kind::memory), 1u);
  EXPECT_EQ(f.input.count(Shape::Kind::variant), 1u);
  EXPECT_EQ(f.input.count(Shape::Kind::clock), 1u);
  EXPECT_EQ(f.output.count(Shape::Kind::tuple), 1u);
  EXPECT_EQ(f.output.count(Shape::Kind::optional), 1u);
  EXPECT_EQ(f.output.count(Shape::Kind::memory), 1u);
}
