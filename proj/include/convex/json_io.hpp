#pragma once

// JSON documents for turn records and context snapshots.

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "convex/engine.hpp"

namespace convex {

using json = nlohmann::json;

inline json node_json(const KnowledgeGraph& g, NodeId n) {
  const KgNode& nd = g.node(n);
  json j{{"id", n}, {"kind", to_string(nd.kind)}, {"label", nd.label}};
  if (nd.external_id) j["external_id"] = *nd.external_id;
  if (nd.predicate_name) j["predicate"] = *nd.predicate_name;
  return j;
}

inline json frontier_json(const KnowledgeGraph& g, const FrontierScore& f) {
  json j = node_json(g, f.node);
  j["match"] = f.match;
  j["prox"] = f.prox;
  j["prior"] = f.prior;
  j["combined"] = f.combined;
  return j;
}

inline json answers_json(const KnowledgeGraph& g, const RankedAnswers& a,
                         std::size_t limit = static_cast<std::size_t>(-1)) {
  json entries = json::array();
  for (std::size_t i = 0; i < a.entries.size() && i < limit; ++i) {
    const RankedAnswer& e = a.entries[i];
    json j = node_json(g, e.node);
    j["rank"] = e.rank;
    j["score"] = e.score;
    j["frontier_term"] = e.frontier_term;
    j["context_term"] = e.context_term;
    entries.push_back(std::move(j));
  }
  json top = json::array();
  for (NodeId n : a.top_group) top.push_back(node_json(g, n));
  return {{"ranked", entries}, {"top_group", top}, {"total", a.entries.size()}, {"notes", a.notes}};
}

inline json turn_record_json(const KnowledgeGraph& g, const TurnRecord& r,
                             std::size_t answer_limit = 50) {
  json fr = json::array();
  for (const FrontierScore& f : r.frontiers) fr.push_back(frontier_json(g, f));
  return {{"turn", r.turn},
          {"question", r.question},
          {"frontiers", fr},
          {"answers", answers_json(g, r.answers, answer_limit)},
          {"elapsed_ms", r.elapsed_ms},
          {"candidates", r.candidates},
          {"random_accesses", r.random_accesses},
          {"context_nodes", r.context_nodes},
          {"context_facts", r.context_facts}};
}

inline constexpr std::size_t kDefaultSnapshotCap = 500;

// Context nodes with QA roles, the latest frontiers and score breakdowns.
// Over `cap`, QA nodes, frontiers and answers are kept first, then the
// highest-scoring candidates.
inline json context_snapshot_json(const Session& s, std::size_t cap = kDefaultSnapshotCap) {
  const KnowledgeGraph& g = s.graph();
  const ContextGraph& ctx = s.context();
  std::map<NodeId, const FrontierScore*> scores;
  std::vector<NodeId> frontier_ids;
  if (const auto& sel = s.last_selection()) {
    for (const FrontierScore& c : sel->candidates) scores[c.node] = &c;
    for (const FrontierScore& f : sel->frontiers) frontier_ids.push_back(f.node);
  }
  std::vector<NodeId> latest_answers;
  if (!s.history().empty()) latest_answers = s.history().back().answers.top_group;
  auto contains = [](const std::vector<NodeId>& v, NodeId n) {
    return std::find(v.begin(), v.end(), n) != v.end();
  };

  std::vector<std::pair<std::pair<int, double>, NodeId>> order;
  for (NodeId n : ctx.node_set()) {
    int tier = 2;
    if (ctx.is_qa_node(n) || contains(frontier_ids, n)) tier = 0;
    else if (scores.count(n)) tier = 1;
    const double sc = scores.count(n) ? scores[n]->combined : 0.0;
    order.push_back({{tier, -sc}, n});
  }
  std::sort(order.begin(), order.end());
  const std::size_t kept = std::min(cap, order.size());
  std::vector<NodeId> exported;
  for (std::size_t i = 0; i < kept; ++i) exported.push_back(order[i].second);
  std::sort(exported.begin(), exported.end());
  auto in_export = [&](NodeId n) { return std::binary_search(exported.begin(), exported.end(), n); };

  json nodes = json::array();
  for (NodeId n : exported) {
    json j = node_json(g, n);
    json qa = json::array();
    for (const QaNode& x : ctx.qa_registry()) {
      if (x.node == n) qa.push_back({{"role", to_string(x.role)}, {"turn", x.turn_seen}});
    }
    j["qa"] = qa;
    j["frontier"] = contains(frontier_ids, n);
    j["answer"] = contains(latest_answers, n);
    if (auto it = scores.find(n); it != scores.end()) {
      j["score"] = {{"match", it->second->match},
                    {"prox", it->second->prox},
                    {"prior", it->second->prior},
                    {"combined", it->second->combined}};
    }
    nodes.push_back(std::move(j));
  }

  json edges = json::array();
  json facts = json::array();
  auto edge = [&](NodeId a, NodeId b) {
    if (in_export(a) && in_export(b)) edges.push_back({a, b});
  };
  for (FactId fid : ctx.fact_set()) {
    const Fact& f = g.fact(fid);
    edge(f.subject, f.predicate);
    edge(f.predicate, f.object);
    json quals = json::array();
    for (const Qualifier& q : f.qualifiers) {
      edge(f.predicate, q.predicate);
      edge(q.predicate, q.value);
      quals.push_back({{"predicate", q.predicate}, {"value", q.value}});
    }
    facts.push_back({{"id", fid},
                     {"subject", f.subject},
                     {"predicate", f.predicate},
                     {"object", f.object},
                     {"qualifiers", quals}});
  }

  return {{"turn", ctx.turn()},
          {"nodes", nodes},
          {"edges", edges},
          {"facts", facts},
          {"frontiers", frontier_ids},
          {"total_nodes", ctx.node_set().size()},
          {"node_cap", cap},
          {"truncated", order.size() > kept}};
}

inline json history_json(const Session& s) {
  json out = json::array();
  for (const TurnRecord& r : s.history()) out.push_back(turn_record_json(s.graph(), r));
  return out;
}

}  // namespace convex
