#pragma once

#include <memory>
#include <optional>
#include <unordered_map>

#include "convex/kg_store.hpp"

namespace convex {

inline constexpr unsigned kDefaultDistanceCutoff = 6;

// 1/max(d,1); zero when unreachable within the cutoff.
inline double reciprocal(std::optional<unsigned> d) {
  if (!d) return 0.0;
  return 1.0 / static_cast<double>(*d == 0 ? 1u : *d);
}

// Memoized single-source bounded BFS over an immutable graph. Not thread-safe;
// keep one per session.
class DistanceCache {
 public:
  DistanceCache(const KnowledgeGraph& g, unsigned cutoff) : g_(&g), cutoff_(cutoff) {}

  unsigned cutoff() const { return cutoff_; }
  const KnowledgeGraph& graph() const { return *g_; }

  const DistanceMap& from(NodeId source) {
    auto it = maps_.find(source);
    if (it == maps_.end()) {
      it = maps_.emplace(source, std::make_shared<const DistanceMap>(g_->bfs(source, cutoff_))).first;
    }
    return *it->second;
  }

  std::optional<unsigned> operator()(NodeId a, NodeId b) { return from(a).get(b); }

  std::size_t cached_sources() const { return maps_.size(); }

 private:
  const KnowledgeGraph* g_;
  unsigned cutoff_;
  std::unordered_map<NodeId, std::shared_ptr<const DistanceMap>> maps_;
};

}  // namespace convex
