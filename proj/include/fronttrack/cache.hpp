#ifndef FRONTTRACK_CACHE_HPP
#define FRONTTRACK_CACHE_HPP

#include <cstdint>
#include <cstring>
#include <string>
#include <unordered_map>

#include "fronttrack/types.hpp"

namespace fronttrack {

// Exact-key memoization for pure curve/eigen evaluations.  Keys are the raw
// bytes of the inputs, so cached results are bit-identical to recomputation.
template <typename V>
class ByteCache {
 public:
  explicit ByteCache(std::size_t cap = 60000) : cap_(cap) {}

  const V* find(const std::string& key) const {
    auto it = map_.find(key);
    return it == map_.end() ? nullptr : &it->second;
  }
  void put(std::string key, V value) {
    if (map_.size() >= cap_) map_.clear();
    map_.emplace(std::move(key), std::move(value));
  }

 private:
  std::size_t cap_;
  std::unordered_map<std::string, V> map_;
};

inline void key_append(std::string& k, double x) {
  char buf[sizeof(double)];
  std::memcpy(buf, &x, sizeof(double));
  k.append(buf, sizeof(double));
}

inline void key_append(std::string& k, const Vec& v) {
  for (int i = 0; i < v.size(); ++i) key_append(k, v[i]);
}

inline std::string cache_key(std::uint64_t instance, int tag, const Vec& u, double s = 0.0) {
  std::string k;
  k.reserve(17 + 8 * (u.size() + 1));
  char buf[sizeof(std::uint64_t)];
  std::memcpy(buf, &instance, sizeof(buf));
  k.append(buf, sizeof(buf));
  k.push_back(static_cast<char>(tag));
  key_append(k, u);
  key_append(k, s);
  return k;
}

}  // namespace fronttrack

#endif
