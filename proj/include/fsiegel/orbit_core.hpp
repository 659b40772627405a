#pragma once

// Generic breadth-first orbit computation for a finite list of generators acting on points
// that carry an exact hash key. Records a BFS tree so every point has a transporter word.

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fsiegel/errors.hpp"

namespace fsiegel {

template <typename Point>
struct OrbitRecord {
  std::vector<Point> points;  // points[0] is the representative
  std::vector<std::int32_t> parent;
  std::vector<std::int32_t> via;  // generator index taking parent to this point
  std::unordered_map<std::string, std::size_t> index;

  const Point& representative() const { return points.front(); }
  std::size_t size() const { return points.size(); }
  bool contains(const std::string& k) const { return index.count(k) != 0; }

  /// Generator indices w_1..w_m with point = g_{w_m} ... g_{w_1} representative.
  std::vector<int> word(std::size_t i) const {
    std::vector<int> w;
    while (parent[i] >= 0) {
      w.push_back(via[i]);
      i = static_cast<std::size_t>(parent[i]);
    }
    return {w.rbegin(), w.rend()};
  }
};

/// act(generator_index, point) -> point; key_of(point) -> std::string.
template <typename Point, typename Act, typename KeyOf>
OrbitRecord<Point> orbit_bfs(Point seed, std::size_t generator_count, Act&& act, KeyOf&& key_of,
                             std::size_t cap) {
  if (cap == 0) throw ParameterError("orbit: cap must be positive");
  OrbitRecord<Point> rec;
  rec.index.emplace(key_of(seed), 0);
  rec.points.push_back(std::move(seed));
  rec.parent.push_back(-1);
  rec.via.push_back(-1);
  for (std::size_t head = 0; head < rec.points.size(); ++head) {
    for (std::size_t g = 0; g < generator_count; ++g) {
      Point next = act(g, rec.points[head]);
      auto k = key_of(next);
      if (rec.index.count(k)) continue;
      if (rec.points.size() >= cap) {
        throw ResourceError("orbit exceeded cap of " + std::to_string(cap));
      }
      rec.index.emplace(std::move(k), rec.points.size());
      rec.points.push_back(std::move(next));
      rec.parent.push_back(static_cast<std::int32_t>(head));
      rec.via.push_back(static_cast<std::int32_t>(g));
    }
  }
  // Replay transporter words on a sample of points.
  for (std::size_t i = 0; i < rec.points.size(); i += 100) {
    Point p = rec.representative();
    for (int g : rec.word(i)) p = act(static_cast<std::size_t>(g), p);
    if (key_of(p) != key_of(rec.points[i])) {
      throw InternalError("transporter word does not reproduce its orbit point");
    }
  }
  return rec;
}

}  // namespace fsiegel
