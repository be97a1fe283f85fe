#pragma once

// Frontier selection: every node near the context is scored by question
// match, context proximity and KG prior; the three sorted score lists are
// merged with Fagin's threshold algorithm to pick the top-r expansion points.

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "convex/context.hpp"
#include "convex/distance_cache.hpp"
#include "convex/embeddings.hpp"
#include "convex/kg_store.hpp"

namespace convex {

struct FrontierHyperparams {
  double h1 = 0.55;  // question match
  double h2 = 0.35;  // context proximity
  double h3 = 0.10;  // KG prior
  unsigned r = 3;
  unsigned k = 4;  // candidate radius in edges

  void validate() const {
    if (h1 < 0 || h2 < 0 || h3 < 0) throw Error("frontier weights must be non-negative");
    if (std::abs(h1 + h2 + h3 - 1.0) > 1e-9) throw Error("frontier weights must sum to 1");
    if (r < 1) throw Error("r must be >= 1");
    if (k < 1) throw Error("k must be >= 1");
  }
};

using ScoreWeights = std::array<double, 3>;
using ScoreTriple = std::array<double, 3>;

// Monotone linear aggregation shared by frontier scoring and its oracle.
inline double aggregate(const ScoreWeights& h, const ScoreTriple& s) {
  return h[0] * s[0] + h[1] * s[1] + h[2] * s[2];
}

struct FrontierScore {
  NodeId node = 0;
  double match = 0;
  double prox = 0;
  double prior = 0;
  double combined = 0;
};

// Higher score first, lower node id on ties.
inline bool ranks_before(double score_a, NodeId a, double score_b, NodeId b) {
  return score_a != score_b ? score_a > score_b : a < b;
}

struct ThresholdStats {
  std::size_t sorted_accesses = 0;
  std::size_t random_accesses = 0;
  std::size_t rounds = 0;
};

// Fagin's threshold algorithm over three score lists. Returns indices into
// `scores` of the top min(r, n) items by aggregate score (ties: lower id).
// The stop test is strict so an unseen item tying the buffer minimum but with
// a lower id cannot be skipped.
inline std::vector<std::size_t> threshold_top_r(std::span<const ScoreTriple> scores,
                                                std::span<const NodeId> ids,
                                                const ScoreWeights& h, std::size_t r,
                                                ThresholdStats* stats = nullptr) {
  const std::size_t n = scores.size();
  if (ids.size() != n) throw Error("threshold_top_r: ids/scores size mismatch");
  ThresholdStats local;
  ThresholdStats& st = stats ? *stats : local;
  st = {};
  const std::size_t want = std::min(r, n);
  if (want == 0) return {};

  std::array<std::vector<std::size_t>, 3> lists;
  for (std::size_t i = 0; i < 3; ++i) {
    auto& list = lists[i];
    list.resize(n);
    std::iota(list.begin(), list.end(), std::size_t{0});
    std::sort(list.begin(), list.end(), [&](std::size_t a, std::size_t b) {
      return ranks_before(scores[a][i], ids[a], scores[b][i], ids[b]);
    });
  }

  std::vector<bool> seen(n, false);
  // Buffer sorted best-first, holding at most `want` entries.
  std::vector<std::pair<double, std::size_t>> buffer;
  buffer.reserve(want + 1);
  auto offer = [&](std::size_t idx) {
    const double total = aggregate(h, scores[idx]);
    auto pos = std::find_if(buffer.begin(), buffer.end(), [&](const auto& e) {
      return ranks_before(total, ids[idx], e.first, ids[e.second]);
    });
    if (buffer.size() < want || pos != buffer.end()) {
      buffer.insert(pos, {total, idx});
      if (buffer.size() > want) buffer.pop_back();
    }
  };

  for (std::size_t depth = 0; depth < n; ++depth) {
    ScoreTriple last{};
    for (std::size_t i = 0; i < 3; ++i) {
      const std::size_t idx = lists[i][depth];
      ++st.sorted_accesses;
      last[i] = scores[idx][i];
      if (!seen[idx]) {
        seen[idx] = true;
        st.random_accesses += 2;  // the two components not on list i
        offer(idx);
      }
    }
    ++st.rounds;
    if (buffer.size() == want && buffer.back().first > aggregate(h, last)) break;
  }

  std::vector<std::size_t> out;
  out.reserve(buffer.size());
  for (const auto& e : buffer) out.push_back(e.second);
  return out;
}

// Precomputed in-vocabulary, non-stopword question word vectors.
class QuestionMatcher {
 public:
  QuestionMatcher(const WordVectorTable& emb, const std::vector<std::string>& tokens)
      : emb_(&emb) {
    for (const auto& tok : tokens) {
      if (emb.is_stopword(tok)) continue;
      if (const Vector* v = emb.find(tok)) words_.push_back(v);
    }
  }

  bool empty() const { return words_.empty(); }

  // Max over question words of similarity to the label's phrase vector.
  double match_label(std::string_view label) const {
    if (words_.empty()) return 0.0;
    auto pv = phrase_vector(*emb_, label, /*drop_stopwords=*/true);
    if (!pv) return 0.0;
    double best = 0.0;
    for (const Vector* w : words_) best = std::max(best, similarity(*pv, *w));
    return best;
  }

 private:
  const WordVectorTable* emb_;
  std::vector<const Vector*> words_;
};

inline double match_score(const KnowledgeGraph& g, const WordVectorTable& emb, NodeId n,
                          const std::vector<std::string>& question) {
  return QuestionMatcher(emb, question).match_label(g.node(n).label);
}

inline double proximity_score(const ContextGraph& ctx, DistanceCache& dist, NodeId n,
                              TurnWeightMode mode = TurnWeightMode::Normalized) {
  return context_proximity(ctx, dist, n, mode);
}

inline std::vector<NodeId> candidate_set(const KnowledgeGraph& g, const ContextGraph& ctx,
                                         unsigned k) {
  std::vector<NodeId> seeds(ctx.node_set().begin(), ctx.node_set().end());
  if (seeds.empty()) return {};
  return neighborhood(g, seeds, k);
}

struct FrontierSelection {
  std::vector<FrontierScore> frontiers;  // ranked, size min(r, |candidates|)
  std::vector<FrontierScore> candidates;  // every scored candidate, ascending node id
  ThresholdStats stats;
};

inline FrontierSelection select_frontiers(const KnowledgeGraph& g, const WordVectorTable& emb,
                                          const ContextGraph& ctx, DistanceCache& dist,
                                          const std::vector<std::string>& question,
                                          const FrontierHyperparams& hp,
                                          TurnWeightMode mode = TurnWeightMode::Normalized) {
  std::vector<NodeId> cands = candidate_set(g, ctx, hp.k);
  if (cands.empty()) throw UnexpandableContext("no candidate nodes around the context");

  const QuestionMatcher matcher(emb, question);
  FrontierSelection sel;
  std::vector<ScoreTriple> triples;
  triples.reserve(cands.size());
  sel.candidates.reserve(cands.size());
  const ScoreWeights h{hp.h1, hp.h2, hp.h3};
  std::unordered_map<std::string_view, double> match_by_label;
  for (NodeId n : cands) {
    FrontierScore s;
    s.node = n;
    const std::string& label = g.node(n).label;
    auto cached = match_by_label.find(label);
    if (cached == match_by_label.end()) {
      cached = match_by_label.emplace(label, matcher.match_label(label)).first;
    }
    s.match = cached->second;
    s.prox = proximity_score(ctx, dist, n, mode);
    s.prior = g.prior(n);
    const ScoreTriple t{s.match, s.prox, s.prior};
    s.combined = aggregate(h, t);
    triples.push_back(t);
    sel.candidates.push_back(s);
  }
  for (std::size_t idx : threshold_top_r(triples, cands, h, hp.r, &sel.stats)) {
    sel.frontiers.push_back(sel.candidates[idx]);
  }
  return sel;
}

}  // namespace convex
