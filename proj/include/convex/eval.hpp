#pragma once

// Benchmark loading, the strategy interface shared by CONVEX and the
// baselines, ranking metrics and report assembly.

#include <algorithm>
#include <cstdio>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "convex/baselines.hpp"
#include "convex/engine.hpp"

namespace convex {

// ---- metrics ---------------------------------------------------------------

using GoldNodes = std::set<NodeId>;

// 1-based rank of the first gold item, if any.
inline std::optional<std::size_t> first_gold_rank(std::span<const NodeId> ranking,
                                                  const GoldNodes& gold) {
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    if (gold.count(ranking[i])) return i + 1;
  }
  return std::nullopt;
}

inline double p_at_1(std::span<const NodeId> ranking, const GoldNodes& gold) {
  auto r = first_gold_rank(ranking, gold);
  return r && *r == 1 ? 1.0 : 0.0;
}

inline double mrr(std::span<const NodeId> ranking, const GoldNodes& gold) {
  auto r = first_gold_rank(ranking, gold);
  return r ? 1.0 / static_cast<double>(*r) : 0.0;
}

inline double hit_at_5(std::span<const NodeId> ranking, const GoldNodes& gold) {
  auto r = first_gold_rank(ranking, gold);
  return r && *r <= 5 ? 1.0 : 0.0;
}

struct MetricTotals {
  double p1 = 0, mrr = 0, hit5 = 0;
  std::size_t count = 0;

  void add(double p, double m, double h) {
    p1 += p;
    mrr += m;
    hit5 += h;
    ++count;
  }
  void add(const MetricTotals& mean_of_group) {
    add(mean_of_group.mean_p1(), mean_of_group.mean_mrr(), mean_of_group.mean_hit5());
  }
  double mean_p1() const { return count ? p1 / static_cast<double>(count) : 0.0; }
  double mean_mrr() const { return count ? mrr / static_cast<double>(count) : 0.0; }
  double mean_hit5() const { return count ? hit5 / static_cast<double>(count) : 0.0; }
};

// ---- benchmark -------------------------------------------------------------

struct BenchmarkTurn {
  std::string question;
  std::optional<std::string> paraphrase;
  std::vector<std::string> gold;
};

struct BenchmarkConversation {
  std::string conversation_id;
  std::string domain;
  std::string seed_id;
  std::string seed_label;
  std::vector<std::string> q0_entities;  // oracle E(q0); the seed when empty
  std::vector<BenchmarkTurn> turns;      // turns[0] is the first question
};

inline std::vector<BenchmarkConversation> parse_benchmark(const nlohmann::json& doc) {
  const nlohmann::json& list = doc.is_object() ? doc.at("conversations") : doc;
  if (!list.is_array()) throw Error("benchmark: expected a list of conversations");
  std::vector<BenchmarkConversation> out;
  for (const auto& c : list) {
    BenchmarkConversation bc;
    bc.conversation_id = c.at("conversation_id").get<std::string>();
    bc.domain = c.value("domain", std::string("unknown"));
    if (c.contains("seed_entity")) {
      const auto& seed = c.at("seed_entity");
      bc.seed_id = seed.value("id", std::string());
      bc.seed_label = seed.value("label", std::string());
    }
    if (c.contains("q0_entities")) bc.q0_entities = c.at("q0_entities").get<std::vector<std::string>>();
    for (const auto& t : c.at("turns")) {
      BenchmarkTurn bt;
      bt.question = t.at("question").get<std::string>();
      if (t.contains("paraphrase") && !t.at("paraphrase").is_null()) {
        bt.paraphrase = t.at("paraphrase").get<std::string>();
      }
      bt.gold = t.at("gold").get<std::vector<std::string>>();
      if (bt.gold.empty() || bt.gold.size() > 3) {
        throw Error("benchmark: conversation " + bc.conversation_id + " has a turn with " +
                    std::to_string(bt.gold.size()) + " gold answers (expected 1-3)");
      }
      bc.turns.push_back(std::move(bt));
    }
    if (bc.turns.empty()) throw Error("benchmark: conversation " + bc.conversation_id + " has no turns");
    out.push_back(std::move(bc));
  }
  return out;
}

inline std::vector<BenchmarkConversation> load_benchmark(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("benchmark: ") + e.what());
  }
  return parse_benchmark(doc);
}

// External id first, then normalized label (entities, classes, literals).
inline std::vector<NodeId> resolve_term(const KnowledgeGraph& g, std::string_view term) {
  if (auto id = g.find_external(term)) return {*id};
  std::vector<NodeId> out;
  for (NodeId n : g.lookup_label(term)) {
    if (g.node(n).kind != NodeKind::PredicateInstance) out.push_back(n);
  }
  return out;
}

// 2^p variants, p = number of turns carrying a paraphrase.
inline std::vector<BenchmarkConversation> expand_paraphrases(const BenchmarkConversation& c) {
  std::vector<std::size_t> slots;
  for (std::size_t i = 0; i < c.turns.size(); ++i) {
    if (c.turns[i].paraphrase) slots.push_back(i);
  }
  std::vector<BenchmarkConversation> out;
  const std::size_t variants = std::size_t{1} << slots.size();
  for (std::size_t mask = 0; mask < variants; ++mask) {
    BenchmarkConversation v = c;
    for (std::size_t b = 0; b < slots.size(); ++b) {
      if (mask >> b & 1u) v.turns[slots[b]].question = *c.turns[slots[b]].paraphrase;
    }
    if (mask) v.conversation_id += "#" + std::to_string(mask);
    out.push_back(std::move(v));
  }
  return out;
}

// ---- strategies -------------------------------------------------------------

struct StrategyTurn {
  std::vector<NodeId> ranking;
  std::vector<NodeId> reachable;  // nodes the strategy could have answered with, sorted
  std::optional<std::string> failure;
};

class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual std::string name() const = 0;
  // Returns the first-turn answer ranking.
  virtual std::vector<NodeId> start(const std::string& q0, const std::optional<OracleInputs>& oracle) = 0;
  virtual StrategyTurn ask(const std::string& question) = 0;
};

struct FirstTurn {
  std::vector<NodeId> entities;
  std::vector<NodeId> answers;
};

inline FirstTurn first_turn(const KnowledgeGraph& g, const WordVectorTable& emb, FirstTurnMode mode,
                            const EntityLinker& linker, const std::string& q0,
                            const std::optional<OracleInputs>& oracle) {
  FirstTurn ft;
  if (mode == FirstTurnMode::Oracle) {
    if (!oracle || oracle->entities.empty() || oracle->answers.empty()) {
      throw Error("oracle mode requires question entities and answers");
    }
    ft.entities = oracle->entities;
    ft.answers = oracle->answers;
  } else {
    ft.entities = linker.link(q0, &emb);
    if (ft.entities.empty()) throw Error("no knowledge-graph entity found in the first question");
    ft.answers = naive_answer(g, emb, q0, ft.entities);
    ft.answers.resize(1);
  }
  return ft;
}

class ConvexStrategy : public Strategy {
 public:
  ConvexStrategy(const KnowledgeGraph& g, const WordVectorTable& emb, SessionConfig cfg,
                 std::shared_ptr<const EntityLinker> linker)
      : g_(g), emb_(emb), cfg_(cfg), linker_(std::move(linker)) {}

  std::string name() const override { return "convex"; }

  std::vector<NodeId> start(const std::string& q0, const std::optional<OracleInputs>& oracle) override {
    session_.emplace(g_, emb_, cfg_, linker_);
    return session_->start(q0, oracle).answers.top_group;
  }

  StrategyTurn ask(const std::string& question) override {
    StrategyTurn out;
    try {
      out.ranking = session_->ask(question).answers.ids();
    } catch (const Error& e) {
      out.failure = e.what();
    }
    const auto& nodes = session_->context().node_set();
    out.reachable.assign(nodes.begin(), nodes.end());
    return out;
  }

 private:
  const KnowledgeGraph& g_;
  const WordVectorTable& emb_;
  SessionConfig cfg_;
  std::shared_ptr<const EntityLinker> linker_;
  std::optional<Session> session_;
};

// Star and chain: one fixed reference node set per turn.
class ReferenceStrategy : public Strategy {
 public:
  enum class Kind { Star, Chain };

  ReferenceStrategy(Kind kind, const KnowledgeGraph& g, const WordVectorTable& emb,
                    SessionConfig cfg, std::shared_ptr<const EntityLinker> linker)
      : kind_(kind), g_(g), emb_(emb), cfg_(cfg), linker_(std::move(linker)) {}

  std::string name() const override { return kind_ == Kind::Star ? "star" : "chain"; }

  std::vector<NodeId> start(const std::string& q0, const std::optional<OracleInputs>& oracle) override {
    FirstTurn ft = first_turn(g_, emb_, cfg_.first_turn_mode, *linker_, q0, oracle);
    q0_entities_ = ft.entities;
    previous_ = ft.answers;
    return ft.answers;
  }

  StrategyTurn ask(const std::string& question) override {
    StrategyTurn out;
    std::vector<NodeId> refs = kind_ == Kind::Star ? q0_entities_ : previous_;
    if (kind_ == Kind::Chain && refs.size() > 1) refs.resize(1);
    try {
      out.ranking = kind_ == Kind::Star ? star_answer(g_, emb_, refs, question)
                                        : chain_answer(g_, emb_, refs, question);
    } catch (const Error& e) {
      out.failure = e.what();
    }
    if (!refs.empty()) out.reachable = neighborhood(g_, refs, 2);
    if (!out.ranking.empty()) previous_ = out.ranking;
    return out;
  }

 private:
  Kind kind_;
  const KnowledgeGraph& g_;
  const WordVectorTable& emb_;
  SessionConfig cfg_;
  std::shared_ptr<const EntityLinker> linker_;
  std::vector<NodeId> q0_entities_;
  std::vector<NodeId> previous_;
};

// Answers directly from the first-turn context; its own answers join the
// registry so later turns see them through proximity.
class NoFrontierStrategy : public Strategy {
 public:
  NoFrontierStrategy(const KnowledgeGraph& g, const WordVectorTable& emb, SessionConfig cfg,
                     std::shared_ptr<const EntityLinker> linker)
      : g_(g), emb_(emb), cfg_(cfg), linker_(std::move(linker)) {}

  std::string name() const override { return "no_frontier"; }

  std::vector<NodeId> start(const std::string& q0, const std::optional<OracleInputs>& oracle) override {
    FirstTurn ft = first_turn(g_, emb_, cfg_.first_turn_mode, *linker_, q0, oracle);
    ctx_ = initialize_context(g_, ft.entities, ft.answers, cfg_.distance_cutoff);
    dist_ = std::make_unique<DistanceCache>(g_, cfg_.distance_cutoff);
    return ft.answers;
  }

  StrategyTurn ask(const std::string& question) override {
    StrategyTurn out;
    std::vector<NodeId> seeds(ctx_.node_set().begin(), ctx_.node_set().end());
    out.reachable = neighborhood(g_, seeds, kNoFrontierRadius);
    const unsigned t = ctx_.turn();
    try {
      RankedAnswers ranked = no_frontier_answer(g_, emb_, ctx_, question, cfg_.frontier_hp, *dist_,
                                                cfg_.turn_weight_mode,
                                                cfg_.answer_hp.exclude_qa_nodes);
      out.ranking = ranked.ids();
      for (NodeId a : ranked.top_group) ctx_.register_qa({a, QaRole::Answer, t});
    } catch (const Error& e) {
      out.failure = e.what();
    }
    ctx_.set_turn(t + 1);
    return out;
  }

 private:
  const KnowledgeGraph& g_;
  const WordVectorTable& emb_;
  SessionConfig cfg_;
  std::shared_ptr<const EntityLinker> linker_;
  ContextGraph ctx_;
  std::unique_ptr<DistanceCache> dist_;
};

inline const std::vector<std::string>& strategy_names() {
  static const std::vector<std::string> names{"convex", "star", "chain", "no_frontier"};
  return names;
}

inline std::unique_ptr<Strategy> make_strategy(const std::string& name, const KnowledgeGraph& g,
                                               const WordVectorTable& emb, const SessionConfig& cfg,
                                               std::shared_ptr<const EntityLinker> linker = nullptr) {
  if (!linker) linker = std::make_shared<const EntityLinker>(g);
  if (name == "convex") return std::make_unique<ConvexStrategy>(g, emb, cfg, linker);
  if (name == "star") {
    return std::make_unique<ReferenceStrategy>(ReferenceStrategy::Kind::Star, g, emb, cfg, linker);
  }
  if (name == "chain") {
    return std::make_unique<ReferenceStrategy>(ReferenceStrategy::Kind::Chain, g, emb, cfg, linker);
  }
  if (name == "no_frontier") return std::make_unique<NoFrontierStrategy>(g, emb, cfg, linker);
  throw Error("unknown strategy '" + name + "'");
}

// ---- evaluation -------------------------------------------------------------

struct EvalConfig {
  SessionConfig session;
  bool expand_paraphrases = false;
};

struct TurnOutcome {
  std::string conversation_id;
  std::string domain;
  std::size_t turn = 0;
  std::string question;
  std::vector<NodeId> ranking;  // top 5
  double p1 = 0, mrr = 0, hit5 = 0;
  std::optional<std::string> error_category;
  std::optional<std::string> failure;
};

struct EvalReport {
  std::string strategy;
  FirstTurnMode first_turn_mode = FirstTurnMode::Oracle;
  std::size_t conversations = 0;
  MetricTotals overall;
  MetricTotals per_conversation;  // mean of per-conversation means
  std::map<std::string, MetricTotals> per_domain;
  std::map<std::size_t, MetricTotals> per_turn;
  std::size_t answer_not_in_expanded_graph = 0;
  std::size_t answer_in_graph_not_top1 = 0;
  std::size_t first_turn_failure = 0;
  std::size_t unresolved_golds = 0;
  std::vector<TurnOutcome> turns;
};

inline GoldNodes resolve_gold(const KnowledgeGraph& g, const std::vector<std::string>& gold,
                              std::size_t* unresolved) {
  GoldNodes out;
  for (const std::string& term : gold) {
    auto nodes = resolve_term(g, term);
    if (nodes.empty() && unresolved) ++*unresolved;
    out.insert(nodes.begin(), nodes.end());
  }
  return out;
}

inline std::optional<OracleInputs> oracle_inputs_for(const KnowledgeGraph& g,
                                                     const BenchmarkConversation& c) {
  OracleInputs oi;
  std::vector<std::string> names = c.q0_entities;
  if (names.empty()) names.push_back(c.seed_id.empty() ? c.seed_label : c.seed_id);
  for (const std::string& n : names) {
    auto ids = resolve_term(g, n);
    oi.entities.insert(oi.entities.end(), ids.begin(), ids.end());
  }
  for (const std::string& a : c.turns.front().gold) {
    auto ids = resolve_term(g, a);
    oi.answers.insert(oi.answers.end(), ids.begin(), ids.end());
  }
  if (oi.entities.empty() || oi.answers.empty()) return std::nullopt;
  return oi;
}

inline EvalReport evaluate(const KnowledgeGraph& g, const WordVectorTable& emb,
                           const std::string& strategy,
                           const std::vector<BenchmarkConversation>& benchmark,
                           const EvalConfig& cfg,
                           std::shared_ptr<const EntityLinker> linker = nullptr) {
  if (benchmark.empty()) throw Error("evaluate: empty benchmark");
  if (!linker) linker = std::make_shared<const EntityLinker>(g);
  EvalReport rep;
  rep.strategy = strategy;
  rep.first_turn_mode = cfg.session.first_turn_mode;

  std::vector<BenchmarkConversation> runs;
  for (const auto& c : benchmark) {
    if (cfg.expand_paraphrases) {
      for (auto& v : expand_paraphrases(c)) runs.push_back(std::move(v));
    } else {
      runs.push_back(c);
    }
  }
  // Metrics must not depend on file order.
  std::sort(runs.begin(), runs.end(), [](const auto& a, const auto& b) {
    return a.conversation_id < b.conversation_id;
  });

  for (const BenchmarkConversation& c : runs) {
    ++rep.conversations;
    auto strat = make_strategy(strategy, g, emb, cfg.session, linker);
    MetricTotals conv;
    std::optional<std::string> start_failure;
    std::vector<NodeId> a0;
    try {
      a0 = strat->start(c.turns.front().question, oracle_inputs_for(g, c));
    } catch (const Error& e) {
      start_failure = e.what();
    }
    const GoldNodes gold0 = resolve_gold(g, c.turns.front().gold, nullptr);
    if (cfg.session.first_turn_mode == FirstTurnMode::Naive &&
        (start_failure || a0.empty() || !gold0.count(a0.front()))) {
      ++rep.first_turn_failure;
    }

    for (std::size_t t = 1; t < c.turns.size(); ++t) {
      const BenchmarkTurn& bt = c.turns[t];
      const GoldNodes gold = resolve_gold(g, bt.gold, &rep.unresolved_golds);
      TurnOutcome out;
      out.conversation_id = c.conversation_id;
      out.domain = c.domain;
      out.turn = t;
      out.question = bt.question;
      StrategyTurn st;
      if (start_failure) {
        st.failure = *start_failure;
      } else {
        st = strat->ask(bt.question);
      }
      out.failure = st.failure;
      out.p1 = p_at_1(st.ranking, gold);
      out.mrr = mrr(st.ranking, gold);
      out.hit5 = hit_at_5(st.ranking, gold);
      out.ranking.assign(st.ranking.begin(),
                         st.ranking.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(5, st.ranking.size())));
      if (out.p1 == 0.0) {
        const bool reachable = std::any_of(gold.begin(), gold.end(), [&](NodeId n) {
          return std::binary_search(st.reachable.begin(), st.reachable.end(), n);
        });
        if (reachable) {
          out.error_category = "answer_in_graph_not_top1";
          ++rep.answer_in_graph_not_top1;
        } else {
          out.error_category = "answer_not_in_expanded_graph";
          ++rep.answer_not_in_expanded_graph;
        }
      }
      rep.overall.add(out.p1, out.mrr, out.hit5);
      rep.per_domain[c.domain].add(out.p1, out.mrr, out.hit5);
      rep.per_turn[t].add(out.p1, out.mrr, out.hit5);
      conv.add(out.p1, out.mrr, out.hit5);
      rep.turns.push_back(std::move(out));
    }
    if (conv.count) rep.per_conversation.add(conv);
  }
  return rep;
}

// ---- reporting --------------------------------------------------------------

inline nlohmann::json metrics_json(const MetricTotals& m) {
  return {{"p_at_1", m.mean_p1()}, {"mrr", m.mean_mrr()}, {"hit_at_5", m.mean_hit5()}, {"turns", m.count}};
}

inline nlohmann::json report_json(const EvalReport& r) {
  nlohmann::json domains = nlohmann::json::object();
  for (const auto& [d, m] : r.per_domain) domains[d] = metrics_json(m);
  nlohmann::json turns = nlohmann::json::object();
  for (const auto& [t, m] : r.per_turn) turns[std::to_string(t)] = metrics_json(m);
  const std::size_t errors = r.answer_not_in_expanded_graph + r.answer_in_graph_not_top1 + r.first_turn_failure;
  auto pct = [&](std::size_t n) { return errors ? 100.0 * static_cast<double>(n) / static_cast<double>(errors) : 0.0; };
  nlohmann::json detail = nlohmann::json::array();
  for (const TurnOutcome& t : r.turns) {
    nlohmann::json j{{"conversation_id", t.conversation_id}, {"turn", t.turn}, {"question", t.question},
                     {"ranking", t.ranking}, {"p_at_1", t.p1}, {"mrr", t.mrr}, {"hit_at_5", t.hit5}};
    if (t.error_category) j["error"] = *t.error_category;
    if (t.failure) j["failure"] = *t.failure;
    detail.push_back(std::move(j));
  }
  return {{"strategy", r.strategy},
          {"first_turn_mode", to_string(r.first_turn_mode)},
          {"conversations", r.conversations},
          {"overall", metrics_json(r.overall)},
          {"per_conversation", metrics_json(r.per_conversation)},
          {"per_domain", domains},
          {"per_turn", turns},
          {"errors",
           {{"answer_not_in_expanded_graph", {{"count", r.answer_not_in_expanded_graph}, {"percent", pct(r.answer_not_in_expanded_graph)}}},
            {"answer_in_graph_not_top1", {{"count", r.answer_in_graph_not_top1}, {"percent", pct(r.answer_in_graph_not_top1)}}},
            {"first_turn_failure", {{"count", r.first_turn_failure}, {"percent", pct(r.first_turn_failure)}}}}},
          {"unresolved_golds", r.unresolved_golds},
          {"turn_details", detail}};
}

inline std::string report_text(const EvalReport& r) {
  std::ostringstream os;
  char buf[160];
  os << "strategy: " << r.strategy << "  first turn: " << to_string(r.first_turn_mode)
     << "  conversations: " << r.conversations << "\n\n";
  auto row = [&](const std::string& name, const MetricTotals& m) {
    std::snprintf(buf, sizeof buf, "%-22s %6.3f %6.3f %6.3f %6zu\n", name.c_str(), m.mean_p1(),
                  m.mean_mrr(), m.mean_hit5(), m.count);
    os << buf;
  };
  std::snprintf(buf, sizeof buf, "%-22s %6s %6s %6s %6s\n", "", "P@1", "MRR", "Hit@5", "turns");
  os << buf;
  row("overall", r.overall);
  row("per-conversation mean", r.per_conversation);
  for (const auto& [d, m] : r.per_domain) row("domain " + d, m);
  for (const auto& [t, m] : r.per_turn) row("turn " + std::to_string(t), m);
  const std::size_t errors = r.answer_not_in_expanded_graph + r.answer_in_graph_not_top1 + r.first_turn_failure;
  auto err = [&](const char* name, std::size_t n) {
    std::snprintf(buf, sizeof buf, "%-30s %5zu %6.1f%%\n", name, n,
                  errors ? 100.0 * static_cast<double>(n) / static_cast<double>(errors) : 0.0);
    os << buf;
  };
  os << "\nerrors\n";
  err("answer_not_in_expanded_graph", r.answer_not_in_expanded_graph);
  err("answer_in_graph_not_top1", r.answer_in_graph_not_top1);
  err("first_turn_failure", r.first_turn_failure);
  if (r.unresolved_golds) os << "unresolved gold answers: " << r.unresolved_golds << "\n";
  return os.str();
}

}  // namespace convex
