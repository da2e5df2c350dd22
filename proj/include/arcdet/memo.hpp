#pragma once

#include <map>
#include <mutex>
#include <utility>

namespace arcdet::detail {

// Thread-safe memo table. Values are computed outside the lock; a racing
// duplicate computation is harmless because results are deterministic.
template <class Key, class Value>
class MemoTable {
 public:
  template <class F>
  Value get(const Key& key, F&& compute) {
    {
      std::lock_guard lock(mu_);
      if (auto it = map_.find(key); it != map_.end()) return it->second;
    }
    Value v = compute();
    std::lock_guard lock(mu_);
    return map_.emplace(key, std::move(v)).first->second;
  }

 private:
  std::mutex mu_;
  std::map<Key, Value> map_;
};

}  // namespace arcdet::detail
