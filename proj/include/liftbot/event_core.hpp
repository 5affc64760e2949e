#pragma once

// Pull-based timestamped event streams and the combinators the lifting
// rules are built from.
//
// A stream is conceptually infinite. `next()` returning std::nullopt means
// "nothing available yet", never "exhausted": a later pull may succeed once
// an upstream channel has been fed.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace liftbot {

template <class T>
struct Timed {
  double t = 0.0;
  T value;

  friend bool operator==(const Timed&, const Timed&) = default;
};

template <class T>
class EventStream {
 public:
  using value_type = T;

  class Source {
   public:
    virtual ~Source() = default;
    virtual std::optional<Timed<T>> pull() = 0;
  };

  explicit EventStream(std::unique_ptr<Source> source) : source_(std::move(source)) {}

  EventStream(EventStream&&) noexcept = default;
  EventStream& operator=(EventStream&&) noexcept = default;
  EventStream(const EventStream&) = delete;
  EventStream& operator=(const EventStream&) = delete;

  std::optional<Timed<T>> next() {
    if (ahead_) {
      std::optional<Timed<T>> out = std::move(ahead_);
      ahead_.reset();
      return out;
    }
    return checked_pull();
  }

  // Head of the stream without consuming it; nullptr when nothing is available.
  const Timed<T>* peek() {
    if (!ahead_) ahead_ = checked_pull();
    return ahead_ ? &*ahead_ : nullptr;
  }

 private:
  std::optional<Timed<T>> checked_pull() {
    auto v = source_->pull();
    if (v) {
      if (v->t < last_t_) throw std::logic_error("event stream pulled out of timestamp order");
      last_t_ = v->t;
    }
    return v;
  }

  std::unique_ptr<Source> source_;
  std::optional<Timed<T>> ahead_;
  double last_t_ = -std::numeric_limits<double>::infinity();
};

namespace detail {

template <class T, class F>
class FnSource final : public EventStream<T>::Source {
 public:
  explicit FnSource(F f) : f_(std::move(f)) {}
  std::optional<Timed<T>> pull() override { return f_(); }

 private:
  F f_;
};

}  // namespace detail

// Wraps a (possibly move-only, stateful) puller into a stream.
template <class T, class F>
EventStream<T> make_stream(F f) {
  return EventStream<T>(std::make_unique<detail::FnSource<T, F>>(std::move(f)));
}

/// A single-reader FIFO that producers push into; the reader side is a
/// stream. Pushes must be in non-decreasing time.
template <class T>
class Channel {
 public:
  Channel() : q_(std::make_shared<State>()) {}

  void push(double t, T value) {
    if (t < q_->last_t) throw std::logic_error("channel push out of timestamp order");
    q_->last_t = t;
    q_->items.push_back(Timed<T>{t, std::move(value)});
  }

  std::size_t pending() const { return q_->items.size(); }

  EventStream<T> reader() const {
    return make_stream<T>([q = q_]() -> std::optional<Timed<T>> {
      if (q->items.empty()) return std::nullopt;
      Timed<T> v = std::move(q->items.front());
      q->items.pop_front();
      return v;
    });
  }

 private:
  struct State {
    std::deque<Timed<T>> items;
    double last_t = -std::numeric_limits<double>::infinity();
  };
  std::shared_ptr<State> q_;
};

template <class T>
EventStream<T> from_list(std::vector<Timed<T>> items) {
  return make_stream<T>([items = std::deque<Timed<T>>(items.begin(), items.end())]() mutable
                        -> std::optional<Timed<T>> {
    if (items.empty()) return std::nullopt;
    Timed<T> v = std::move(items.front());
    items.pop_front();
    return v;
  });
}

// Pulls everything currently available.
template <class T>
std::vector<Timed<T>> drain(EventStream<T>& s) {
  std::vector<Timed<T>> out;
  while (auto v = s.next()) out.push_back(std::move(*v));
  return out;
}

template <class F, class T>
auto stream_map(F f, EventStream<T> s) {
  using U = std::decay_t<std::invoke_result_t<F&, T>>;
  return make_stream<U>([f = std::move(f), s = std::move(s)]() mutable -> std::optional<Timed<U>> {
    auto v = s.next();
    if (!v) return std::nullopt;
    return Timed<U>{v->t, f(std::move(v->value))};
  });
}

/// Fuses two streams, subsampling the faster one.
///
/// Inputs are consumed in timestamp order (left first on ties). Each side
/// keeps only its latest unconsumed value; a pair is emitted as soon as both
/// sides hold one, stamped with the later source time, and both slots are
/// cleared so no value is ever paired twice.
template <class A, class B>
EventStream<std::pair<A, B>> both_new(EventStream<A> a, EventStream<B> b) {
  using P = std::pair<A, B>;
  struct State {
    EventStream<A> a;
    EventStream<B> b;
    std::optional<Timed<A>> fresh_a;
    std::optional<Timed<B>> fresh_b;
  };
  return make_stream<P>([st = std::make_unique<State>(State{std::move(a), std::move(b), {}, {}})]() mutable
                        -> std::optional<Timed<P>> {
    for (;;) {
      const Timed<A>* ha = st->a.peek();
      const Timed<B>* hb = st->b.peek();
      if (!ha && !hb) return std::nullopt;
      if (ha && (!hb || ha->t <= hb->t)) {
        st->fresh_a = st->a.next();
      } else {
        st->fresh_b = st->b.next();
      }
      if (st->fresh_a && st->fresh_b) {
        Timed<P> out{std::max(st->fresh_a->t, st->fresh_b->t),
                     P{std::move(st->fresh_a->value), std::move(st->fresh_b->value)}};
        st->fresh_a.reset();
        st->fresh_b.reset();
        return out;
      }
    }
  });
}

struct TeeOptions {
  // Queue length on one side that triggers the imbalance warning.
  std::size_t high_water = 100000;
  std::function<void(std::size_t)> on_high_water = [](std::size_t n) {
    std::cerr << "liftbot: tee buffer holds " << n << " unconsumed values\n";
  };
};

/// Duplicates a stream. Each side buffers what the other side has pulled
/// but it has not; buffering is unbounded.
template <class T>
std::pair<EventStream<T>, EventStream<T>> tee(EventStream<T> s, TeeOptions opts = {}) {
  struct Shared {
    EventStream<T> source;
    std::deque<Timed<T>> pending[2];
    TeeOptions opts;
    bool warned[2] = {false, false};
  };
  auto sh = std::make_shared<Shared>(Shared{std::move(s), {}, std::move(opts)});
  auto side = [sh](int me) {
    return make_stream<T>([sh, me]() -> std::optional<Timed<T>> {
      auto& mine = sh->pending[me];
      if (!mine.empty()) {
        Timed<T> v = std::move(mine.front());
        mine.pop_front();
        return v;
      }
      auto v = sh->source.next();
      if (!v) return std::nullopt;
      int other = 1 - me;
      sh->pending[other].push_back(*v);
      std::size_t n = sh->pending[other].size();
      if (n >= sh->opts.high_water) {
        if (!sh->warned[other] && sh->opts.on_high_water) sh->opts.on_high_water(n);
        sh->warned[other] = true;
      } else {
        sh->warned[other] = false;
      }
      return v;
    });
  };
  return {side(0), side(1)};
}

/// Keeps the present values of a stream of optionals.
template <class A>
EventStream<A> filter_optional(EventStream<std::optional<A>> s) {
  return make_stream<A>([s = std::move(s)]() mutable -> std::optional<Timed<A>> {
    while (auto v = s.next()) {
      if (v->value) return Timed<A>{v->t, std::move(*v->value)};
    }
    return std::nullopt;
  });
}

/// Ordered merge of two same-typed streams; ties go to the left input.
template <class T>
EventStream<T> merge(EventStream<T> a, EventStream<T> b) {
  struct State {
    EventStream<T> a;
    EventStream<T> b;
  };
  return make_stream<T>([st = std::make_unique<State>(State{std::move(a), std::move(b)})]() mutable
                        -> std::optional<Timed<T>> {
    const Timed<T>* ha = st->a.peek();
    const Timed<T>* hb = st->b.peek();
    if (ha && (!hb || ha->t <= hb->t)) return st->a.next();
    if (hb) return st->b.next();
    return std::nullopt;
  });
}

template <class A, class B>
EventStream<std::variant<A, B>> merge_variant(EventStream<A> a, EventStream<B> b) {
  using V = std::variant<A, B>;
  return merge(stream_map([](A v) { return V(std::in_place_index<0>, std::move(v)); }, std::move(a)),
               stream_map([](B v) { return V(std::in_place_index<1>, std::move(v)); }, std::move(b)));
}

template <class A, class B>
std::pair<EventStream<A>, EventStream<B>> split_variant(EventStream<std::variant<A, B>> s) {
  using V = std::variant<A, B>;
  auto [l, r] = tee(std::move(s));
  auto lefts = stream_map(
      [](V v) -> std::optional<A> {
        if (v.index() == 0) return std::get<0>(std::move(v));
        return std::nullopt;
      },
      std::move(l));
  auto rights = stream_map(
      [](V v) -> std::optional<B> {
        if (v.index() == 1) return std::get<1>(std::move(v));
        return std::nullopt;
      },
      std::move(r));
  return {filter_optional(std::move(lefts)), filter_optional(std::move(rights))};
}

}  // namespace liftbot
