#pragma once

// Reference strategies: star (always the first-turn entities), chain (always
// the previous answer) and a frontier-less branch-and-bound answerer.

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "convex/answer.hpp"
#include "convex/context.hpp"
#include "convex/distance_cache.hpp"
#include "convex/embeddings.hpp"
#include "convex/frontier.hpp"
#include "convex/kg_store.hpp"
#include "convex/qa0.hpp"

namespace convex {

// Predicate disambiguation around `refs` using every non-stopword word.
inline std::vector<NodeId> reference_answer(const KnowledgeGraph& g, const WordVectorTable& emb,
                                            std::span<const NodeId> refs,
                                            std::string_view question) {
  auto tokens = tokenize(question);
  auto qvec = phrase_vector(emb, tokens, /*drop_stopwords=*/true);
  auto ranked = answers_for_choice(g, choose_predicate(g, emb, refs, qvec, tokens));
  ranked.resize(1);
  return ranked;
}

inline std::vector<NodeId> star_answer(const KnowledgeGraph& g, const WordVectorTable& emb,
                                       std::span<const NodeId> q0_entities,
                                       std::string_view question) {
  if (q0_entities.empty()) throw Error("star_answer: no first-turn entities");
  return reference_answer(g, emb, q0_entities, question);
}

inline std::vector<NodeId> chain_answer(const KnowledgeGraph& g, const WordVectorTable& emb,
                                        std::span<const NodeId> previous_answer,
                                        std::string_view question) {
  if (previous_answer.empty()) throw Error("chain_answer: empty previous answer");
  return reference_answer(g, emb, previous_answer.first(1), question);
}

struct NoFrontierStats {
  std::size_t scored = 0;
  std::size_t expanded = 0;
  std::size_t pruned = 0;
  unsigned depth_reached = 0;
};

inline constexpr unsigned kNoFrontierRadius = 4;

struct NoFrontierScorer {
  const KnowledgeGraph& g;
  const ContextGraph& ctx;
  DistanceCache& dist;
  QuestionMatcher matcher;
  ScoreWeights h;
  TurnWeightMode mode;

  double operator()(NodeId n) const {
    const ScoreTriple s{matcher.match_label(g.node(n).label),
                        context_proximity(ctx, dist, n, mode), g.prior(n)};
    return aggregate(h, s);
  }
};

inline bool no_frontier_eligible(const KnowledgeGraph& g, const ContextGraph& ctx, NodeId n,
                                 bool exclude_qa_nodes) {
  return is_answer_kind(g.node(n).kind) && !(exclude_qa_nodes && ctx.is_qa_node(n));
}

// Scores nodes within `radius` edges of the context level by level. A node
// scoring below the current r-th best is not expanded once no node one level
// deeper could beat that bound, and a level is skipped entirely when nothing
// at that depth can. Match and prior are bounded by 1; proximity at depth d
// by the total visible turn weight over d.
inline RankedAnswers no_frontier_answer(const KnowledgeGraph& g, const WordVectorTable& emb,
                                        const ContextGraph& ctx, std::string_view question,
                                        const FrontierHyperparams& hp, DistanceCache& dist,
                                        TurnWeightMode mode = TurnWeightMode::Normalized,
                                        bool exclude_qa_nodes = true,
                                        NoFrontierStats* stats = nullptr,
                                        unsigned radius = kNoFrontierRadius) {
  if (ctx.node_set().empty()) throw Error("no_frontier_answer: empty context");
  NoFrontierStats local;
  NoFrontierStats& st = stats ? *stats : local;
  st = {};

  const NoFrontierScorer score{g, ctx, dist, QuestionMatcher(emb, tokenize(question)),
                               ScoreWeights{hp.h1, hp.h2, hp.h3}, mode};
  double weight_sum = 0.0;
  const auto visible = ctx.visible_registry();
  for (const QaNode& x : visible) weight_sum += turn_weight(ctx, x, mode);
  const double mean_weight = visible.empty() ? 0.0 : weight_sum / static_cast<double>(visible.size());
  auto upper_bound = [&](unsigned depth) {
    const double ub = hp.h1 + hp.h3 + hp.h2 * mean_weight / static_cast<double>(std::max(depth, 1u));
    return ub + 1e-12;  // rounding slack
  };

  RankedAnswers best;  // kept sorted, at most r entries
  auto bound = [&]() -> std::optional<double> {
    if (best.entries.size() < hp.r) return std::nullopt;
    return best.entries.back().score;
  };
  auto offer = [&](NodeId n, double s) {
    auto pos = std::find_if(best.entries.begin(), best.entries.end(), [&](const RankedAnswer& e) {
      return ranks_before(s, n, e.score, e.node);
    });
    if (best.entries.size() < hp.r || pos != best.entries.end()) {
      RankedAnswer e;
      e.node = n;
      e.score = s;
      best.entries.insert(pos, e);
      if (best.entries.size() > hp.r) best.entries.pop_back();
    }
  };

  std::vector<NodeId> level(ctx.node_set().begin(), ctx.node_set().end());
  std::unordered_set<NodeId> visited(level.begin(), level.end());

  for (unsigned depth = 0; !level.empty(); ++depth) {
    if (auto b = bound(); b && upper_bound(depth) < *b) break;
    st.depth_reached = depth;
    std::vector<NodeId> next;
    for (NodeId u : level) {
      const double s = score(u);
      ++st.scored;
      if (no_frontier_eligible(g, ctx, u, exclude_qa_nodes)) offer(u, s);
      if (depth == radius) continue;
      if (auto b = bound(); b && s < *b && upper_bound(depth + 1) < *b) {
        ++st.pruned;
        continue;
      }
      ++st.expanded;
      for (NodeId v : g.neighbors(u)) {
        if (visited.insert(v).second) next.push_back(v);
      }
    }
    std::sort(next.begin(), next.end());
    level = std::move(next);
  }
  finalize_ranking(best);
  return best;
}

// Exhaustive reference: every eligible node within `radius` edges, top-r.
inline RankedAnswers no_frontier_exhaustive(const KnowledgeGraph& g, const WordVectorTable& emb,
                                            const ContextGraph& ctx, std::string_view question,
                                            const FrontierHyperparams& hp, DistanceCache& dist,
                                            TurnWeightMode mode = TurnWeightMode::Normalized,
                                            bool exclude_qa_nodes = true,
                                            unsigned radius = kNoFrontierRadius) {
  const NoFrontierScorer score{g, ctx, dist, QuestionMatcher(emb, tokenize(question)),
                               ScoreWeights{hp.h1, hp.h2, hp.h3}, mode};
  std::vector<NodeId> seeds(ctx.node_set().begin(), ctx.node_set().end());
  RankedAnswers all;
  for (NodeId n : neighborhood(g, seeds, radius)) {
    if (!no_frontier_eligible(g, ctx, n, exclude_qa_nodes)) continue;
    RankedAnswer e;
    e.node = n;
    e.score = score(n);
    all.entries.push_back(e);
  }
  finalize_ranking(all);
  if (all.entries.size() > hp.r) all.entries.resize(hp.r);
  finalize_ranking(all);
  return all;
}

}  // namespace convex
