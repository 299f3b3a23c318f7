#ifndef TRAILERNET_FORWARDER_CONTENT_STORE_HPP
#define TRAILERNET_FORWARDER_CONTENT_STORE_HPP

#include "../clock.hpp"
#include "../codec/data.hpp"

#include <list>
#include <map>

namespace tnet::fwd {

/** LRU cache of Data by exact name. Capacity 0 disables it. An entry counts
 *  as fresh for `freshness` after insertion. */
class ContentStore
{
public:
  explicit ContentStore(std::size_t capacity = 0,
                        std::chrono::milliseconds freshness = std::chrono::milliseconds(1000))
    : capacity_(capacity)
    , freshness_(freshness)
  {}

  bool enabled() const { return capacity_ > 0; }
  std::size_t size() const { return index_.size(); }

  void insert(const Data& d, TimePoint now)
  {
    if (capacity_ == 0) {
      return;
    }
    if (auto it = index_.find(d.name); it != index_.end()) {
      lru_.erase(it->second);
      index_.erase(it);
    }
    lru_.push_front(Entry{d, now});
    index_.emplace(d.name, lru_.begin());
    while (index_.size() > capacity_) {
      index_.erase(lru_.back().data.name);
      lru_.pop_back();
    }
  }

  const Data* find(const Name& name, bool must_be_fresh, TimePoint now)
  {
    auto it = index_.find(name);
    if (it == index_.end()) {
      return nullptr;
    }
    if (must_be_fresh && now >= it->second->inserted + freshness_) {
      return nullptr;
    }
    lru_.splice(lru_.begin(), lru_, it->second);
    return &it->second->data;
  }

private:
  struct Entry
  {
    Data data;
    TimePoint inserted;
  };

  std::size_t capacity_;
  std::chrono::milliseconds freshness_;
  std::list<Entry> lru_;
  std::map<Name, std::list<Entry>::iterator> index_;
};

} // namespace tnet::fwd

#endif // TRAILERNET_FORWARDER_CONTENT_STORE_HPP
