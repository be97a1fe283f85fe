#pragma once

// Answer ranking over the expanded context: weighted proximity to the turn's
// frontiers plus turn-weighted proximity to earlier question/answer nodes.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "convex/context.hpp"
#include "convex/distance_cache.hpp"
#include "convex/frontier.hpp"
#include "convex/kg_store.hpp"

namespace convex {

struct AnswerHyperparams {
  double h1a = 0.8;  // frontier proximity
  double h2a = 0.2;  // context proximity
  // Nodes already registered as question entities or answers are not
  // offered again as answers.
  bool exclude_qa_nodes = true;

  void validate() const {
    if (h1a < 0 || h2a < 0) throw Error("answer weights must be non-negative");
    if (std::abs(h1a + h2a - 1.0) > 1e-9) throw Error("answer weights must sum to 1");
  }
};

struct RankedAnswer {
  NodeId node = 0;
  double score = 0;
  std::size_t rank = 0;  // 1-based position in the total order
  double frontier_term = 0;
  double context_term = 0;
};

struct RankedAnswers {
  std::vector<RankedAnswer> entries;
  std::vector<NodeId> top_group;
  std::vector<std::string> notes;

  bool empty() const { return entries.empty(); }
  std::vector<NodeId> ids() const {
    std::vector<NodeId> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.node);
    return out;
  }
};

// Scores within this relative distance of the maximum share rank 1.
inline constexpr double kTieTolerance = 1e-12;

inline bool ties_with(double score, double best) {
  return std::abs(score - best) <= kTieTolerance * std::max(1.0, std::abs(best));
}

// Sorts by score (ties: node id), assigns ranks and the rank-1 tie group.
inline void finalize_ranking(RankedAnswers& out) {
  std::sort(out.entries.begin(), out.entries.end(), [](const RankedAnswer& a, const RankedAnswer& b) {
    return ranks_before(a.score, a.node, b.score, b.node);
  });
  out.top_group.clear();
  for (std::size_t i = 0; i < out.entries.size(); ++i) {
    out.entries[i].rank = i + 1;
    if (ties_with(out.entries[i].score, out.entries.front().score)) {
      out.top_group.push_back(out.entries[i].node);
    }
  }
}

inline bool is_answer_kind(NodeKind kind) {
  return kind == NodeKind::Entity || kind == NodeKind::Literal;
}

inline RankedAnswers rank_answers(const KnowledgeGraph& g, const ContextGraph& expanded,
                                  std::span<const FrontierScore> frontiers,
                                  const AnswerHyperparams& hp, DistanceCache& dist,
                                  TurnWeightMode mode = TurnWeightMode::Normalized) {
  if (frontiers.empty()) throw Error("rank_answers: no frontiers");
  RankedAnswers out;
  const double r = static_cast<double>(frontiers.size());
  for (NodeId a : expanded.node_set()) {
    if (!is_answer_kind(g.node(a).kind)) continue;
    if (std::any_of(frontiers.begin(), frontiers.end(),
                    [a](const FrontierScore& f) { return f.node == a; })) {
      continue;
    }
    if (hp.exclude_qa_nodes && expanded.is_qa_node(a)) continue;
    double near_frontiers = 0.0;
    for (const FrontierScore& f : frontiers) {
      near_frontiers += f.combined * reciprocal(dist(f.node, a));
    }
    RankedAnswer e;
    e.node = a;
    e.frontier_term = near_frontiers / r;
    e.context_term = context_proximity(expanded, dist, a, mode);
    e.score = hp.h1a * e.frontier_term + hp.h2a * e.context_term;
    out.entries.push_back(e);
  }
  if (out.entries.empty()) out.notes.push_back("no entity or literal candidates in the expanded context");
  finalize_ranking(out);
  return out;
}

}  // namespace convex
