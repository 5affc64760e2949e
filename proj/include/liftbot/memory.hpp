#pragma once

#include <any>
#include <map>
#include <typeindex>
#include <utility>
#include <vector>

#include "liftbot/registry.hpp"

namespace liftbot {

class Transaction;

/// Type-keyed global cells. A cell that was never written reads as the
/// default it was registered with.
class MemoryStore {
 public:
  explicit MemoryStore(const EventRegistry& registry) : registry_(&registry) {}

  std::any read(EventTypeId id) const {
    const EventTypeInfo& info = checked(id);
    auto it = cells_.find(id);
    return it == cells_.end() ? info.default_value : it->second;
  }

  template <class T>
  T read() const {
    return std::any_cast<T>(read(registry_->id_of<Memory<T>>()));
  }

  void write(EventTypeId id, std::any value) {
    checked(id);
    cells_[id] = std::move(value);
  }

  template <class T>
  void write(T value) {
    write(registry_->id_of<Memory<T>>(), std::any(std::move(value)));
  }

  Transaction begin();

  /// Runs `f(Transaction&)` and commits its writes only if it returns
  /// normally.
  template <class F>
  decltype(auto) transact(F&& f);

  const EventRegistry& registry() const { return *registry_; }

 private:
  const EventTypeInfo& checked(EventTypeId id) const {
    const EventTypeInfo& info = registry_->info(id);
    if (info.kind != EventKind::memory)
      throw Error(Errc::kind_mismatch, "'" + info.name + "' is not a memory cell (kind " +
                                           std::string(to_string(info.kind)) + ")");
    return info;
  }

  const EventRegistry* registry_;
  std::map<EventTypeId, std::any> cells_;
};

/// Buffered reads/writes against a MemoryStore. Writes become visible on
/// commit(); a transaction destroyed without commit leaves no trace.
class Transaction {
 public:
  explicit Transaction(MemoryStore& store) : store_(&store) {}
  Transaction(Transaction&&) noexcept = default;
  Transaction& operator=(Transaction&&) noexcept = default;

  std::any read(EventTypeId id) const {
    auto it = staged_.find(id);
    return it != staged_.end() ? it->second : store_->read(id);
  }

  template <class T>
  T read() const {
    return std::any_cast<T>(read(store_->registry().id_of<Memory<T>>()));
  }

  void write(EventTypeId id, std::any value) {
    if (store_->registry().info(id).kind != EventKind::memory)
      throw Error(Errc::kind_mismatch, "'" + store_->registry().info(id).name + "' is not a memory cell");
    staged_[id] = std::move(value);
  }

  template <class T>
  void write(T value) {
    write(store_->registry().id_of<Memory<T>>(), std::any(std::move(value)));
  }

  void commit() {
    for (auto& [id, v] : staged_) store_->write(id, std::move(v));
    staged_.clear();
  }

  bool empty() const { return staged_.empty(); }

 private:
  MemoryStore* store_;
  std::map<EventTypeId, std::any> staged_;
};

inline Transaction MemoryStore::begin() { return Transaction(*this); }

template <class F>
decltype(auto) MemoryStore::transact(F&& f) {
  Transaction txn(*this);
  if constexpr (std::is_void_v<std::invoke_result_t<F&, Transaction&>>) {
    f(txn);
    txn.commit();
  } else {
    auto result = f(txn);
    txn.commit();
    return result;
  }
}

}  // namespace liftbot
