#pragma once

// Conversation context: the growing subgraph of facts plus the registry of
// question/answer nodes and the turns at which they were seen.

#include <algorithm>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "convex/distance_cache.hpp"
#include "convex/kg_store.hpp"

namespace convex {

enum class QaRole : std::uint8_t { Question, Answer };

inline std::string_view to_string(QaRole role) {
  return role == QaRole::Question ? "question" : "answer";
}

struct QaNode {
  NodeId node = 0;
  QaRole role = QaRole::Question;
  unsigned turn_seen = 0;

  friend bool operator==(const QaNode&, const QaNode&) = default;
};

enum class TurnWeightMode : std::uint8_t { Normalized, Literal };

class ContextGraph {
 public:
  ContextGraph() = default;

  const std::set<NodeId>& node_set() const { return nodes_; }
  const std::set<FactId>& fact_set() const { return facts_; }
  const std::vector<QaNode>& qa_registry() const { return registry_; }
  unsigned turn() const { return turn_; }

  bool contains(NodeId n) const { return nodes_.count(n) != 0; }
  bool contains_fact(FactId f) const { return facts_.count(f) != 0; }

  // Registry entries that may be scored at the current turn.
  std::vector<QaNode> visible_registry() const {
    std::vector<QaNode> out;
    for (const QaNode& x : registry_) {
      if (x.turn_seen < turn_) out.push_back(x);
    }
    return out;
  }

  bool is_qa_node(NodeId n) const {
    return std::any_of(registry_.begin(), registry_.end(),
                       [n](const QaNode& x) { return x.node == n; });
  }

  void add_node(NodeId n) { nodes_.insert(n); }

  void add_fact(const KnowledgeGraph& g, FactId id) {
    if (!facts_.insert(id).second) return;
    const Fact& f = g.fact(id);
    nodes_.insert({f.subject, f.predicate, f.object});
    for (const Qualifier& q : f.qualifiers) nodes_.insert({q.predicate, q.value});
  }

  // One entry per (node, role, turn); the node joins node_set.
  void register_qa(QaNode x) {
    nodes_.insert(x.node);
    if (std::find(registry_.begin(), registry_.end(), x) == registry_.end()) {
      registry_.push_back(x);
    }
  }

  void set_turn(unsigned t) { turn_ = t; }

 private:
  std::set<NodeId> nodes_;
  std::set<FactId> facts_;
  std::vector<QaNode> registry_;
  unsigned turn_ = 1;
};

// First-turn context: question entities, answers, and the facts joining each
// (entity, answer) pair. A pair with no shared fact is joined by one shortest
// path of at most two facts; failures are reported via `notes`.
inline ContextGraph initialize_context(const KnowledgeGraph& g,
                                       std::span<const NodeId> q0_entities,
                                       std::span<const NodeId> a0,
                                       unsigned cutoff = kDefaultDistanceCutoff,
                                       std::vector<std::string>* notes = nullptr) {
  if (q0_entities.empty()) throw Error("initialize_context: no question entities");
  for (NodeId n : q0_entities) g.require(n);
  for (NodeId n : a0) g.require(n);

  ContextGraph ctx;
  for (NodeId q : q0_entities) ctx.register_qa({q, QaRole::Question, 0});
  for (NodeId a : a0) ctx.register_qa({a, QaRole::Answer, 0});

  for (NodeId q : q0_entities) {
    for (NodeId a : a0) {
      if (q == a) continue;
      auto fq = g.facts_of(q);
      auto fa = g.facts_of(a);
      std::vector<FactId> shared;
      std::set_intersection(fq.begin(), fq.end(), fa.begin(), fa.end(),
                            std::back_inserter(shared));
      if (!shared.empty()) {
        for (FactId f : shared) ctx.add_fact(g, f);
        continue;
      }
      auto path = shortest_path(g, q, a, cutoff);
      std::set<FactId> path_facts;
      if (path) {
        for (NodeId n : *path) {
          if (g.node(n).kind == NodeKind::PredicateInstance) {
            path_facts.insert(g.fact_of_predicate(n));
          }
        }
      }
      if (!path || path_facts.size() > 2) {
        if (notes) {
          notes->push_back("no connection of at most two facts between nodes " +
                           std::to_string(q) + " and " + std::to_string(a));
        }
        continue;
      }
      for (FactId f : path_facts) ctx.add_fact(g, f);
    }
  }
  ctx.set_turn(1);
  return ctx;
}

// Recency weight of a registry entry at the context's current turn. The
// turn-0 question entities are promoted to the latest completed turn.
inline double turn_weight(const ContextGraph& ctx, const QaNode& x,
                          TurnWeightMode mode = TurnWeightMode::Normalized) {
  const unsigned t = ctx.turn();
  const unsigned last = t == 0 ? 0 : t - 1;
  const double raw = (x.role == QaRole::Question && x.turn_seen == 0) ? last : x.turn_seen;
  if (mode == TurnWeightMode::Literal) return raw;
  if (t <= 1) return 1.0;
  return raw / static_cast<double>(last);
}

// Turn-weighted mean reciprocal distance from `n` to the visible QA nodes.
inline double context_proximity(const ContextGraph& ctx, DistanceCache& dist, NodeId n,
                                TurnWeightMode mode = TurnWeightMode::Normalized) {
  std::size_t count = 0;
  double sum = 0.0;
  for (const QaNode& x : ctx.qa_registry()) {
    if (x.turn_seen >= ctx.turn()) continue;
    ++count;
    const double w = turn_weight(ctx, x, mode);
    if (w != 0.0) sum += w * reciprocal(dist(x.node, n));
  }
  if (count == 0) throw Error("context proximity needs at least one QA node");
  return sum / static_cast<double>(count);
}

// X+ = X plus every fact of every frontier. Entity frontiers become question
// entities of the current turn.
inline ContextGraph expand(const ContextGraph& ctx, const KnowledgeGraph& g,
                           std::span<const NodeId> frontiers) {
  ContextGraph out = ctx;
  for (NodeId f : frontiers) {
    for (FactId fact : g.facts_of(f)) out.add_fact(g, fact);
    out.add_node(f);
    if (g.node(f).kind == NodeKind::Entity) {
      out.register_qa({f, QaRole::Question, ctx.turn()});
    }
  }
  return out;
}

}  // namespace convex
