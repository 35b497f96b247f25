#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hon/labels.hpp"

namespace hon {

using NodeTuple = std::vector<NodeId>;

struct TupleHash {
  std::size_t operator()(const NodeTuple& t) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ t.size();
    for (NodeId v : t) {
      h ^= v;
      h *= 0x100000001b3ULL;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }
};

} // namespace hon
