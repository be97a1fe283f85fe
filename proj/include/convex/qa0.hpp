#pragma once

// First-turn helpers: greedy label-based entity linking and a naive
// stand-alone answerer that picks the best (entity, predicate) pair.

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "convex/embeddings.hpp"
#include "convex/frontier.hpp"
#include "convex/kg_store.hpp"

namespace convex {

inline std::string join_tokens(std::span<const std::string> tokens) {
  std::string key;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) key.push_back(' ');
    key += tokens[i];
  }
  return key;
}

struct LinkedSpan {
  std::size_t begin = 0;  // token index
  std::size_t length = 0;
  std::vector<NodeId> entities;
};

// Greedy longest-match linker over tokenized entity labels.
class EntityLinker {
 public:
  explicit EntityLinker(const KnowledgeGraph& g, std::size_t max_ngram = 5)
      : max_ngram_(max_ngram) {
    for (const KgNode& nd : g.nodes()) {
      if (nd.kind != NodeKind::Entity) continue;
      auto tokens = tokenize(nd.label);
      if (tokens.empty()) continue;
      index_[join_tokens(tokens)].push_back(nd.id);
    }
  }

  // Left to right; at each position the longest n-gram (max_ngram..1) naming
  // an entity wins and its tokens are consumed. All-stopword n-grams never link.
  std::vector<LinkedSpan> link_spans(const std::vector<std::string>& tokens,
                                     const WordVectorTable* stop = nullptr) const {
    std::vector<LinkedSpan> spans;
    std::size_t i = 0;
    while (i < tokens.size()) {
      bool matched = false;
      for (std::size_t len = std::min(max_ngram_, tokens.size() - i); len >= 1; --len) {
        std::span<const std::string> gram(tokens.data() + i, len);
        const bool all_stop = std::all_of(gram.begin(), gram.end(), [&](const std::string& t) {
          return stop ? stop->is_stopword(t) : default_stopwords().count(t) != 0;
        });
        if (all_stop) continue;
        auto it = index_.find(join_tokens(gram));
        if (it == index_.end()) continue;
        spans.push_back({i, len, it->second});
        i += len;
        matched = true;
        break;
      }
      if (!matched) ++i;
    }
    return spans;
  }

  std::vector<NodeId> link(std::string_view question, const WordVectorTable* stop = nullptr) const {
    std::vector<NodeId> out;
    for (const LinkedSpan& s : link_spans(tokenize(question), stop)) {
      for (NodeId n : s.entities) {
        if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
      }
    }
    return out;
  }

 private:
  std::size_t max_ngram_;
  std::unordered_map<std::string, std::vector<NodeId>> index_;
};

inline std::vector<NodeId> link_entities(const KnowledgeGraph& g, std::string_view question) {
  return EntityLinker(g).link(question);
}

struct PredicateChoice {
  NodeId entity = 0;
  NodeId predicate = 0;
  FactId fact = 0;
  double score = 0;
  double tie_score = 0;
};

// Best (entity, predicate) pair around `refs` by similarity of the predicate
// label to `question_vec`. Exact ties are broken by how well the fact's
// qualifier values match `tie_words`, then by lower predicate node id.
inline PredicateChoice choose_predicate(const KnowledgeGraph& g, const WordVectorTable& emb,
                                        std::span<const NodeId> refs,
                                        const std::optional<Vector>& question_vec,
                                        const std::vector<std::string>& tie_words) {
  std::vector<PredicateChoice> options;
  for (NodeId e : refs) {
    for (NodeId p : g.neighbors(e)) {
      if (g.node(p).kind != NodeKind::PredicateInstance) continue;
      PredicateChoice c{e, p, g.fact_of_predicate(p), 0.0, 0.0};
      if (std::any_of(options.begin(), options.end(), [&](const PredicateChoice& o) {
            return o.entity == e && o.predicate == p;
          })) {
        continue;
      }
      options.push_back(c);
    }
  }
  if (options.empty()) throw Error("no facts adjacent to the reference entities");
  if (options.size() == 1) return options.front();
  if (!question_vec) throw Error("question has no in-vocabulary content words");

  for (PredicateChoice& c : options) {
    auto pv = phrase_vector(emb, g.node(c.predicate).label, true);
    c.score = pv ? similarity(*pv, *question_vec) : 0.0;
  }
  double best = 0.0;
  for (const auto& c : options) best = std::max(best, c.score);

  const QuestionMatcher tie_matcher(emb, tie_words);
  std::optional<PredicateChoice> winner;
  for (PredicateChoice& c : options) {
    if (c.score != best) continue;
    for (const Qualifier& q : g.fact(c.fact).qualifiers) {
      if (std::find(refs.begin(), refs.end(), q.value) != refs.end() && q.value != c.entity) {
        c.tie_score = std::max(c.tie_score, 1.0);
      } else {
        c.tie_score = std::max(c.tie_score, tie_matcher.match_label(g.node(q.value).label));
      }
    }
    if (!winner || c.tie_score > winner->tie_score ||
        (c.tie_score == winner->tie_score && c.predicate < winner->predicate)) {
      winner = c;
    }
  }
  return *winner;
}

// [answer, qualifier values of the winning fact...]
inline std::vector<NodeId> answers_for_choice(const KnowledgeGraph& g, const PredicateChoice& c) {
  const Fact& f = g.fact(c.fact);
  std::vector<NodeId> out{g.other_argument(f, c.entity)};
  for (const Qualifier& q : f.qualifiers) {
    if (q.value != c.entity && std::find(out.begin(), out.end(), q.value) == out.end()) {
      out.push_back(q.value);
    }
  }
  return out;
}

// Token positions covered by any occurrence of an entity's label.
inline std::vector<bool> entity_token_mask(const KnowledgeGraph& g,
                                           const std::vector<std::string>& tokens,
                                           std::span<const NodeId> entities) {
  std::vector<bool> mask(tokens.size(), false);
  for (NodeId e : entities) {
    auto label = tokenize(g.node(e).label);
    if (label.empty() || label.size() > tokens.size()) continue;
    for (std::size_t i = 0; i + label.size() <= tokens.size(); ++i) {
      if (std::equal(label.begin(), label.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
        std::fill(mask.begin() + static_cast<std::ptrdiff_t>(i),
                  mask.begin() + static_cast<std::ptrdiff_t>(i + label.size()), true);
      }
    }
  }
  return mask;
}

// Stand-alone answer for a well-formed question whose entities are known.
inline std::vector<NodeId> naive_answer(const KnowledgeGraph& g, const WordVectorTable& emb,
                                        std::string_view question,
                                        std::span<const NodeId> entities) {
  if (entities.empty()) throw Error("naive_answer: no entities");
  auto tokens = tokenize(question);
  auto mask = entity_token_mask(g, tokens, entities);
  std::vector<std::string> content;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!mask[i]) content.push_back(tokens[i]);
  }
  auto qvec = phrase_vector(emb, content, /*drop_stopwords=*/true);
  return answers_for_choice(g, choose_predicate(g, emb, entities, qvec, tokens));
}

}  // namespace convex
