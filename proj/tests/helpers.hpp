#pragma once

#include <any>
#include <memory>
#include <string>
#include <vector>

#include "liftbot/runtime.hpp"
#include "liftbot/trace.hpp"

namespace testing_helpers {

/// Collects every runtime record, typed and as a trace record.
struct Recorder {
  std::vector<liftbot::Record> raw;
  std::vector<liftbot::TraceRecord> trace;

  static std::shared_ptr<Recorder> attach(liftbot::Runtime& rt) {
    auto r = std::make_shared<Recorder>();
    const liftbot::EventRegistry* reg = &rt.registry();
    rt.add_observer([r, reg](const liftbot::Record& rec) {
      r->raw.push_back(rec);
      r->trace.push_back(liftbot::to_trace_record(rec, *reg));
    });
    return r;
  }

  /// Typed values published under a topic, optionally from one node only.
  template <class T>
  std::vector<std::pair<double, T>> pubs(const std::string& topic, const std::string& node = "") const {
    std::vector<std::pair<double, T>> out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const auto& tr = trace[i];
      if (tr.dir != liftbot::Direction::pub || tr.topic != topic) continue;
      if (!node.empty() && tr.node != node) continue;
      out.emplace_back(tr.t, std::any_cast<T>(raw[i].value));
    }
    return out;
  }

  std::size_t count(const std::string& topic, liftbot::Direction dir, const std::string& node = "") const {
    std::size_t n = 0;
    for (const auto& tr : trace)
      if (tr.topic == topic && tr.dir == dir && (node.empty() || tr.node == node)) ++n;
    return n;
  }

  std::string text() const {
    std::string s;
    for (const auto& tr : trace) s += liftbot::format_record(tr) + "\n";
    return s;
  }
};

/// Plant double: records applied commands, emits nothing unless told to.
struct FakePlant : liftbot::Plant {
  std::vector<liftbot::Event> applied;
  std::vector<std::pair<double, liftbot::BumperEvent>> bumps;  // emitted when t reaches the time
  liftbot::Velocity latch;

  void advance(double t, double, liftbot::SensorSink& out) override {
    for (auto& [bt, b] : bumps)
      if (std::abs(bt - t) < 1e-9) out.publish(t, b);
  }
  void sample(double t, liftbot::SensorSink& out) override {
    out.publish(t, latch);
    out.publish(t, liftbot::Position{});
    out.publish(t, liftbot::Orientation{});
  }
  void apply(const liftbot::Event& e) override {
    applied.push_back(e);
    if (auto* v = std::any_cast<liftbot::Velocity>(&e.payload)) latch = *v;
  }
};

}  // namespace testing_helpers
