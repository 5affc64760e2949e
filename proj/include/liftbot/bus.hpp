#pragma once

#include <any>
#include <deque>
#include <map>
#include <memory>
#include <vector>

#include "liftbot/event_core.hpp"
#include "liftbot/registry.hpp"

namespace liftbot {

struct Event {
  EventTypeId type;
  double t = 0.0;
  std::any payload;
};

/// Type-indexed topic router. Every published value is pushed to every
/// live subscriber queue of its type, in publication order.
///
/// The bus also retains what was published during the current instant; a
/// subscription opened between instants starts with those values, so events
/// raised while controllers are being swapped are not lost.
class Bus {
 public:
  EventStream<std::any> subscribe(EventTypeId id) {
    auto ch = std::make_shared<Channel<std::any>>();
    for (const Event& e : retained_)
      if (e.type == id) ch->push(e.t, e.payload);
    subs_[id].push_back(ch);
    // The stream co-owns the queue; once it is dropped the bus holds the only
    // reference and stops delivering to it.
    return make_stream<std::any>([ch, r = ch->reader()]() mutable { return r.next(); });
  }

  void publish(const Event& e) {
    retained_.push_back(e);
    auto it = subs_.find(e.type);
    if (it == subs_.end()) return;
    auto& list = it->second;
    for (auto& sub : list)
      if (sub.use_count() > 1) sub->push(e.t, e.payload);
  }

  void begin_instant() {
    retained_.clear();
    for (auto& [id, list] : subs_)
      std::erase_if(list, [](const std::shared_ptr<Channel<std::any>>& c) { return c.use_count() == 1; });
  }

  std::size_t subscriber_count(EventTypeId id) const {
    auto it = subs_.find(id);
    if (it == subs_.end()) return 0;
    std::size_t n = 0;
    for (auto& c : it->second)
      if (c.use_count() > 1) ++n;
    return n;
  }

 private:
  std::map<EventTypeId, std::vector<std::shared_ptr<Channel<std::any>>>> subs_;
  std::vector<Event> retained_;
};

}  // namespace liftbot
