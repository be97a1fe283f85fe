#pragma once

// In-memory knowledge graph with one node per entity, class and literal, and
// one fresh node per predicate occurrence. Qualifier predicates hang off the
// predicate node of the fact they qualify.
//
// Triples file (UTF-8, tab separated, one fact per line):
//
//   [F<key>\t]subject\tpredicate\tobject[\tqualifier=value]...
//   +\tF<key>\tqualifier=value[\tqualifier=value]...
//
// `Q<digits>` is an entity, `C<digits>` a KG class, anything else (or any
// double-quoted token) a literal. The predicate column holds a predicate name
// (typically `P<digits>`). The optional `F<key>` column names a fact so that
// later `+` lines can attach more qualifiers to it. `#` starts a comment line.
//
// Labels file: `id\tlabel`, for entity/class ids and predicate names.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <deque>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "convex/error.hpp"

namespace convex {

using NodeId = std::uint32_t;
using FactId = std::uint32_t;

enum class NodeKind : std::uint8_t { Entity, PredicateInstance, KgClass, Literal };

inline constexpr std::size_t kNumNodeKinds = 4;

inline std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Entity: return "entity";
    case NodeKind::PredicateInstance: return "predicate";
    case NodeKind::KgClass: return "class";
    case NodeKind::Literal: return "literal";
  }
  return "?";
}

struct KgNode {
  NodeId id = 0;
  NodeKind kind = NodeKind::Entity;
  std::string label;
  std::optional<std::string> external_id;
  // Present iff kind == PredicateInstance.
  std::optional<std::string> predicate_name;
};

struct Qualifier {
  NodeId predicate = 0;
  NodeId value = 0;
};

struct Fact {
  FactId id = 0;
  NodeId subject = 0;
  NodeId predicate = 0;
  NodeId object = 0;
  std::vector<Qualifier> qualifiers;
};

// Lowercase, collapse internal whitespace, strip surrounding punctuation.
inline std::string normalize_label(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char raw : text) {
    auto c = static_cast<unsigned char>(raw);
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  auto is_punct = [](char c) {
    return std::ispunct(static_cast<unsigned char>(c)) != 0;
  };
  std::size_t begin = 0;
  std::size_t end = out.size();
  while (begin < end && (is_punct(out[begin]) || out[begin] == ' ')) ++begin;
  while (end > begin && (is_punct(out[end - 1]) || out[end - 1] == ' ')) --end;
  return out.substr(begin, end - begin);
}

// Sparse result of a bounded breadth-first search.
class DistanceMap {
 public:
  std::optional<unsigned> get(NodeId n) const {
    auto it = dist_.find(n);
    if (it == dist_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t size() const { return dist_.size(); }
  const std::unordered_map<NodeId, std::uint8_t>& raw() const { return dist_; }

 private:
  friend class KnowledgeGraph;
  std::unordered_map<NodeId, std::uint8_t> dist_;
};

class KnowledgeGraph {
 public:
  KnowledgeGraph() = default;

  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_facts() const { return facts_.size(); }
  std::size_t num_edges() const { return adj_targets_.size() / 2; }
  bool empty() const { return nodes_.empty(); }

  const std::vector<KgNode>& nodes() const { return nodes_; }
  const std::vector<Fact>& facts() const { return facts_; }

  bool contains(NodeId n) const { return n < nodes_.size(); }
  void require(NodeId n) const {
    if (!contains(n)) throw UnknownNode(n);
  }

  const KgNode& node(NodeId n) const {
    require(n);
    return nodes_[n];
  }
  const Fact& fact(FactId f) const {
    if (f >= facts_.size()) throw Error("unknown fact id " + std::to_string(f));
    return facts_[f];
  }

  std::span<const NodeId> neighbors(NodeId n) const {
    require(n);
    return {adj_targets_.data() + adj_offsets_[n],
            adj_targets_.data() + adj_offsets_[n + 1]};
  }

  // Every fact mentioning `n` in any position, ascending fact id.
  std::span<const FactId> facts_of(NodeId n) const {
    require(n);
    return {node_facts_.data() + node_fact_offsets_[n],
            node_facts_.data() + node_fact_offsets_[n + 1]};
  }

  // Raw frequency: number of facts for entities/classes/literals, number of
  // facts using the same predicate name for predicate instances.
  std::size_t raw_frequency(NodeId n) const {
    const KgNode& nd = node(n);
    if (nd.kind == NodeKind::PredicateInstance) {
      return predicate_frequency_.at(*nd.predicate_name);
    }
    return facts_of(n).size();
  }

  std::size_t kind_frequency_max(NodeKind kind) const {
    return kind_frequency_max_[static_cast<std::size_t>(kind)];
  }

  // KG prior normalized by the maximum raw frequency within the node's kind.
  double prior(NodeId n) const {
    const std::size_t max = kind_frequency_max(node(n).kind);
    return max == 0 ? 0.0
                    : static_cast<double>(raw_frequency(n)) /
                          static_cast<double>(max);
  }

  std::vector<NodeId> lookup_label(std::string_view text) const {
    auto it = label_index_.find(normalize_label(text));
    if (it == label_index_.end()) return {};
    return it->second;
  }

  // Entity or class by canonical id; literal lookup goes through labels.
  std::optional<NodeId> find_external(std::string_view external_id) const {
    auto it = external_index_.find(std::string(external_id));
    if (it == external_index_.end()) return std::nullopt;
    return it->second;
  }

  // The main argument of `f` that is not `n`: object for the subject, subject
  // for the object or any qualifier position.
  NodeId other_argument(const Fact& f, NodeId n) const {
    if (f.subject == n) return f.object;
    if (f.object == n && f.subject != n) return f.subject;
    for (const Qualifier& q : f.qualifiers) {
      if (q.value == n || q.predicate == n) return f.object;
    }
    return f.object;
  }

  // Fact that owns predicate-instance node `p`.
  FactId fact_of_predicate(NodeId p) const {
    auto facts = facts_of(p);
    if (node(p).kind != NodeKind::PredicateInstance || facts.size() != 1) {
      throw Error("node " + std::to_string(p) + " is not a predicate instance");
    }
    return facts.front();
  }

  // Bounded multi-source BFS; sources get distance 0.
  DistanceMap bfs(std::span<const NodeId> sources, unsigned cutoff) const {
    DistanceMap result;
    std::vector<NodeId> frontier;
    for (NodeId s : sources) {
      require(s);
      if (result.dist_.emplace(s, 0).second) frontier.push_back(s);
    }
    cutoff = std::min(cutoff, 255u);
    std::vector<NodeId> next;
    for (unsigned depth = 1; depth <= cutoff && !frontier.empty(); ++depth) {
      next.clear();
      for (NodeId u : frontier) {
        for (NodeId v : neighbors_unchecked(u)) {
          if (result.dist_.emplace(v, static_cast<std::uint8_t>(depth)).second) {
            next.push_back(v);
          }
        }
      }
      frontier.swap(next);
    }
    return result;
  }

  DistanceMap bfs(NodeId source, unsigned cutoff) const {
    return bfs(std::span<const NodeId>(&source, 1), cutoff);
  }

 private:
  friend class GraphBuilder;

  std::span<const NodeId> neighbors_unchecked(NodeId n) const {
    return {adj_targets_.data() + adj_offsets_[n],
            adj_targets_.data() + adj_offsets_[n + 1]};
  }

  std::vector<KgNode> nodes_;
  std::vector<Fact> facts_;
  std::vector<std::uint32_t> adj_offsets_{0};
  std::vector<NodeId> adj_targets_;
  std::vector<std::uint32_t> node_fact_offsets_{0};
  std::vector<FactId> node_facts_;
  std::unordered_map<std::string, std::vector<NodeId>> label_index_;
  std::unordered_map<std::string, NodeId> external_index_;
  std::unordered_map<std::string, std::size_t> predicate_frequency_;
  std::size_t kind_frequency_max_[kNumNodeKinds] = {0, 0, 0, 0};
};

// Nodes within `k` undirected edges of any seed, seeds included, ascending.
inline std::vector<NodeId> neighborhood(const KnowledgeGraph& g,
                                        std::span<const NodeId> seeds,
                                        unsigned k) {
  DistanceMap d = g.bfs(seeds, k);
  std::vector<NodeId> out;
  out.reserve(d.size());
  for (const auto& [n, _] : d.raw()) out.push_back(n);
  std::sort(out.begin(), out.end());
  return out;
}

// Shortest path length in edges, or nullopt when farther than `cutoff`.
inline std::optional<unsigned> distance(const KnowledgeGraph& g, NodeId a,
                                        NodeId b, unsigned cutoff) {
  g.require(a);
  g.require(b);
  if (a == b) return 0u;
  // Bidirectional search keeps hub expansions small.
  std::unordered_map<NodeId, unsigned> from_a{{a, 0}}, from_b{{b, 0}};
  std::vector<NodeId> fa{a}, fb{b}, next;
  unsigned da = 0, db = 0;
  while (!fa.empty() && !fb.empty() && da + db < cutoff) {
    const bool expand_a = fa.size() <= fb.size();
    auto& frontier = expand_a ? fa : fb;
    auto& mine = expand_a ? from_a : from_b;
    auto& theirs = expand_a ? from_b : from_a;
    unsigned& depth = expand_a ? da : db;
    ++depth;
    next.clear();
    std::optional<unsigned> best;
    for (NodeId u : frontier) {
      for (NodeId v : g.neighbors(u)) {
        if (auto it = theirs.find(v); it != theirs.end()) {
          unsigned total = depth + it->second;
          if (!best || total < *best) best = total;
        }
        if (mine.emplace(v, depth).second) next.push_back(v);
      }
    }
    if (best) return *best <= cutoff ? best : std::nullopt;
    frontier.swap(next);
  }
  return std::nullopt;
}

// One shortest path a..b (inclusive) of at most `cutoff` edges.
inline std::optional<std::vector<NodeId>> shortest_path(const KnowledgeGraph& g, NodeId a,
                                                        NodeId b, unsigned cutoff) {
  g.require(a);
  g.require(b);
  std::unordered_map<NodeId, NodeId> parent{{a, a}};
  std::vector<NodeId> frontier{a}, next;
  for (unsigned depth = 0; depth < cutoff && !frontier.empty() && !parent.count(b); ++depth) {
    next.clear();
    for (NodeId u : frontier) {
      for (NodeId v : g.neighbors(u)) {
        if (parent.emplace(v, u).second) next.push_back(v);
      }
    }
    frontier.swap(next);
  }
  if (!parent.count(b)) return std::nullopt;
  std::vector<NodeId> path{b};
  while (path.back() != a) path.push_back(parent.at(path.back()));
  std::reverse(path.begin(), path.end());
  return path;
}

// Accumulates facts, then freezes them into an immutable KnowledgeGraph.
class GraphBuilder {
 public:
  enum class TermKind { Entity, KgClass, Literal };

  // Classifies a raw object/qualifier-value token and strips literal quotes.
  static std::pair<TermKind, std::string> classify(std::string_view token) {
    std::string t = trim(token);
    if (t.size() >= 2 && t.front() == '"' && t.back() == '"') {
      return {TermKind::Literal, trim(std::string_view(t).substr(1, t.size() - 2))};
    }
    if (is_id(t, 'Q')) return {TermKind::Entity, t};
    if (is_id(t, 'C')) return {TermKind::KgClass, t};
    return {TermKind::Literal, t};
  }

  void set_labels(std::unordered_map<std::string, std::string> labels) {
    labels_ = std::move(labels);
  }

  FactId add_fact(std::string_view subject, std::string_view predicate,
                  std::string_view object) {
    auto [skind, sid] = classify(subject);
    if (skind != TermKind::Entity) {
      throw Error("subject must be an entity id, got '" + std::string(subject) + "'");
    }
    std::string pname = trim(predicate);
    if (pname.empty()) throw Error("empty predicate name");
    const NodeId s = term_node(skind, sid);
    const FactId f = static_cast<FactId>(facts_.size());
    const NodeId p = mint_predicate(pname);
    auto [okind, oid] = classify(object);
    if (oid.empty()) throw Error("empty object");
    const NodeId o = term_node(okind, oid);
    facts_.push_back(Fact{f, s, p, o, {}});
    return f;
  }

  void add_qualifier(FactId f, std::string_view name, std::string_view value) {
    if (f >= facts_.size()) {
      throw Error("qualifier on nonexistent fact " + std::to_string(f));
    }
    std::string qname = trim(name);
    if (qname.empty()) throw Error("empty qualifier name");
    auto [vkind, vid] = classify(value);
    if (vid.empty()) throw Error("empty qualifier value");
    const NodeId qp = mint_predicate(qname);
    const NodeId qv = term_node(vkind, vid);
    facts_[f].qualifiers.push_back(Qualifier{qp, qv});
  }

  KnowledgeGraph build() && {
    KnowledgeGraph g;
    g.nodes_ = std::move(nodes_);
    g.facts_ = std::move(facts_);
    const std::size_t n = g.nodes_.size();

    for (const KgNode& nd : g.nodes_) {
      g.label_index_[normalize_label(nd.label)].push_back(nd.id);
      if (nd.external_id) g.external_index_.emplace(*nd.external_id, nd.id);
    }

    std::vector<std::pair<NodeId, NodeId>> edges;
    std::vector<std::pair<NodeId, FactId>> memberships;
    for (const Fact& f : g.facts_) {
      edges.emplace_back(f.subject, f.predicate);
      edges.emplace_back(f.predicate, f.object);
      memberships.emplace_back(f.subject, f.id);
      memberships.emplace_back(f.predicate, f.id);
      memberships.emplace_back(f.object, f.id);
      std::vector<std::string_view> names{*g.nodes_[f.predicate].predicate_name};
      for (const Qualifier& q : f.qualifiers) {
        edges.emplace_back(f.predicate, q.predicate);
        edges.emplace_back(q.predicate, q.value);
        memberships.emplace_back(q.predicate, f.id);
        memberships.emplace_back(q.value, f.id);
        names.push_back(*g.nodes_[q.predicate].predicate_name);
      }
      std::sort(names.begin(), names.end());
      names.erase(std::unique(names.begin(), names.end()), names.end());
      for (auto name : names) ++g.predicate_frequency_[std::string(name)];
    }

    std::vector<std::uint32_t> degree(n, 0);
    for (auto [a, b] : edges) {
      ++degree[a];
      ++degree[b];
    }
    g.adj_offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) g.adj_offsets_[i + 1] = g.adj_offsets_[i] + degree[i];
    g.adj_targets_.assign(g.adj_offsets_[n], 0);
    std::vector<std::uint32_t> cursor(g.adj_offsets_.begin(), g.adj_offsets_.end() - 1);
    for (auto [a, b] : edges) {
      g.adj_targets_[cursor[a]++] = b;
      g.adj_targets_[cursor[b]++] = a;
    }

    std::sort(memberships.begin(), memberships.end());
    memberships.erase(std::unique(memberships.begin(), memberships.end()),
                      memberships.end());
    g.node_fact_offsets_.assign(n + 1, 0);
    g.node_facts_.reserve(memberships.size());
    for (auto [node, fact] : memberships) {
      ++g.node_fact_offsets_[node + 1];
      g.node_facts_.push_back(fact);
    }
    for (std::size_t i = 0; i < n; ++i) g.node_fact_offsets_[i + 1] += g.node_fact_offsets_[i];

    for (const KgNode& nd : g.nodes_) {
      auto& slot = g.kind_frequency_max_[static_cast<std::size_t>(nd.kind)];
      slot = std::max(slot, g.raw_frequency(nd.id));
    }
    return g;
  }

  static std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
  }

  static bool is_id(std::string_view t, char prefix) {
    return t.size() >= 2 && t[0] == prefix &&
           std::all_of(t.begin() + 1, t.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  }

 private:
  std::string label_for(const std::string& id) const {
    auto it = labels_.find(id);
    return it == labels_.end() || it->second.empty() ? id : it->second;
  }

  NodeId term_node(TermKind kind, const std::string& id) {
    const char tag = kind == TermKind::Entity ? 'E' : kind == TermKind::KgClass ? 'C' : 'L';
    std::string key = std::string(1, tag) + '\0' + id;
    if (auto it = term_index_.find(key); it != term_index_.end()) return it->second;
    const NodeId n = static_cast<NodeId>(nodes_.size());
    KgNode nd;
    nd.id = n;
    if (kind == TermKind::Literal) {
      nd.kind = NodeKind::Literal;
      nd.label = id;
    } else {
      nd.kind = kind == TermKind::Entity ? NodeKind::Entity : NodeKind::KgClass;
      nd.label = label_for(id);
      nd.external_id = id;
    }
    nodes_.push_back(std::move(nd));
    term_index_.emplace(std::move(key), n);
    return n;
  }

  NodeId mint_predicate(const std::string& name) {
    const NodeId n = static_cast<NodeId>(nodes_.size());
    KgNode nd;
    nd.id = n;
    nd.kind = NodeKind::PredicateInstance;
    nd.label = label_for(name);
    nd.predicate_name = name;
    nodes_.push_back(std::move(nd));
    return n;
  }

  std::vector<KgNode> nodes_;
  std::vector<Fact> facts_;
  std::unordered_map<std::string, NodeId> term_index_;
  std::unordered_map<std::string, std::string> labels_;
};

namespace detail {

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

inline bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

inline void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace detail

inline std::unordered_map<std::string, std::string> load_labels(std::istream& in) {
  std::unordered_map<std::string, std::string> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    detail::strip_cr(line);
    if (detail::is_blank(line) || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(lineno, "expected id<TAB>label");
    std::string id = GraphBuilder::trim(std::string_view(line).substr(0, tab));
    std::string label = GraphBuilder::trim(std::string_view(line).substr(tab + 1));
    if (id.empty() || label.empty()) throw ParseError(lineno, "empty id or label");
    labels[id] = label;
  }
  return labels;
}

inline KnowledgeGraph load_graph(std::istream& triples,
                                 std::unordered_map<std::string, std::string> labels = {}) {
  GraphBuilder builder;
  builder.set_labels(std::move(labels));
  std::unordered_map<std::string, FactId> keys;
  std::string line;
  std::size_t lineno = 0;

  auto add_qualifiers = [&](FactId f, std::span<const std::string_view> fields) {
    for (std::string_view field : fields) {
      auto eq = field.find('=');
      if (eq == std::string_view::npos || eq == 0) {
        throw ParseError(lineno, "qualifier must be name=value, got '" + std::string(field) + "'");
      }
      builder.add_qualifier(f, field.substr(0, eq), field.substr(eq + 1));
    }
  };

  while (std::getline(triples, line)) {
    ++lineno;
    detail::strip_cr(line);
    if (detail::is_blank(line) || line.front() == '#') continue;
    auto fields = detail::split_tabs(line);
    try {
      if (fields[0] == "+") {
        if (fields.size() < 3) throw ParseError(lineno, "qualifier line needs a fact key and qualifiers");
        auto it = keys.find(GraphBuilder::trim(fields[1]));
        if (it == keys.end()) {
          throw ParseError(lineno, "qualifier on nonexistent fact '" + std::string(fields[1]) + "'");
        }
        add_qualifiers(it->second, std::span(fields).subspan(2));
        continue;
      }
      std::optional<std::string> key;
      std::span<const std::string_view> rest(fields);
      if (GraphBuilder::is_id(GraphBuilder::trim(fields[0]), 'F')) {
        key = GraphBuilder::trim(fields[0]);
        rest = rest.subspan(1);
      }
      if (rest.size() < 3) throw ParseError(lineno, "expected subject<TAB>predicate<TAB>object");
      const FactId f = builder.add_fact(rest[0], rest[1], rest[2]);
      if (key && !keys.emplace(*key, f).second) {
        throw ParseError(lineno, "duplicate fact id '" + *key + "'");
      }
      add_qualifiers(f, rest.subspan(3));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(lineno, e.what());
    }
  }
  return std::move(builder).build();
}

inline KnowledgeGraph load_graph(std::istream& triples, std::istream& labels) {
  return load_graph(triples, load_labels(labels));
}

// Writes `g` back in the triples format; literals are always quoted.
inline void serialize_graph(const KnowledgeGraph& g, std::ostream& out) {
  auto term = [&](NodeId n) -> std::string {
    const KgNode& nd = g.node(n);
    if (nd.kind == NodeKind::Literal) return '"' + nd.label + '"';
    return *nd.external_id;
  };
  for (const Fact& f : g.facts()) {
    out << term(f.subject) << '\t' << *g.node(f.predicate).predicate_name << '\t'
        << term(f.object);
    for (const Qualifier& q : f.qualifiers) {
      out << '\t' << *g.node(q.predicate).predicate_name << '=' << term(q.value);
    }
    out << '\n';
  }
}

// Labels for every entity/class id and predicate name, sorted by id.
inline void serialize_labels(const KnowledgeGraph& g, std::ostream& out) {
  std::map<std::string, std::string> labels;
  for (const KgNode& nd : g.nodes()) {
    if (nd.external_id) labels.emplace(*nd.external_id, nd.label);
    if (nd.predicate_name) labels.emplace(*nd.predicate_name, nd.label);
  }
  for (const auto& [id, label] : labels) out << id << '\t' << label << '\n';
}

// Structural checks; returns human-readable violations (empty when OK).
inline std::vector<std::string> check_invariants(const KnowledgeGraph& g) {
  std::vector<std::string> issues;
  std::vector<int> predicate_owner(g.num_nodes(), -1);
  for (const Fact& f : g.facts()) {
    auto claim = [&](NodeId p) {
      if (g.node(p).kind != NodeKind::PredicateInstance) {
        issues.push_back("fact " + std::to_string(f.id) + ": predicate slot is not a predicate instance");
      } else if (predicate_owner[p] != -1) {
        issues.push_back("predicate node " + std::to_string(p) + " shared by several facts");
      }
      predicate_owner[p] = static_cast<int>(f.id);
    };
    claim(f.predicate);
    for (const Qualifier& q : f.qualifiers) claim(q.predicate);
    if (g.node(f.subject).kind != NodeKind::Entity) {
      issues.push_back("fact " + std::to_string(f.id) + ": subject is not an entity");
    }
  }
  for (const KgNode& nd : g.nodes()) {
    if (nd.label.empty()) issues.push_back("node " + std::to_string(nd.id) + " has an empty label");
    if (g.facts_of(nd.id).empty()) issues.push_back("node " + std::to_string(nd.id) + " is an orphan");
    if ((nd.kind == NodeKind::PredicateInstance) != nd.predicate_name.has_value()) {
      issues.push_back("node " + std::to_string(nd.id) + ": predicate_name/kind mismatch");
    }
    for (NodeId v : g.neighbors(nd.id)) {
      auto back = g.neighbors(v);
      if (std::find(back.begin(), back.end(), nd.id) == back.end()) {
        issues.push_back("asymmetric edge " + std::to_string(nd.id) + "-" + std::to_string(v));
      }
    }
  }
  return issues;
}

}  // namespace convex
