#pragma once

// Type-level tags the lifting rules recognise in controller signatures.

#include <utility>

#include "liftbot/fields.hpp"

namespace liftbot {

struct Unit {
  friend bool operator==(Unit, Unit) = default;
};

inline Fields trace_fields(Unit) { return {}; }

/// A read (as input) or write (as output) of the global cell holding a T.
template <class T>
struct Memory {
  T value;
  friend bool operator==(const Memory&, const Memory&) = default;
};

/// Terminates the enclosing task with a result.
template <class T = Unit>
struct Done {
  T result{};
  friend bool operator==(const Done&, const Done&) = default;
};

template <class T>
Fields trace_fields(const Done<T>& d) {
  return trace_fields(d.result);
}

}  // namespace liftbot
