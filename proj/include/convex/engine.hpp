#pragma once

// Conversation sessions: first-turn setup (oracle or naive), then per turn
// frontier selection, context expansion and answer ranking.

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "convex/answer.hpp"
#include "convex/context.hpp"
#include "convex/distance_cache.hpp"
#include "convex/embeddings.hpp"
#include "convex/frontier.hpp"
#include "convex/kg_store.hpp"
#include "convex/qa0.hpp"

namespace convex {

enum class FirstTurnMode : std::uint8_t { Oracle, Naive };

inline std::string_view to_string(FirstTurnMode m) {
  return m == FirstTurnMode::Oracle ? "oracle" : "naive";
}

inline std::string_view to_string(TurnWeightMode m) {
  return m == TurnWeightMode::Normalized ? "normalized" : "literal";
}

struct SessionConfig {
  FrontierHyperparams frontier_hp;
  AnswerHyperparams answer_hp;
  FirstTurnMode first_turn_mode = FirstTurnMode::Oracle;
  TurnWeightMode turn_weight_mode = TurnWeightMode::Normalized;
  unsigned distance_cutoff = kDefaultDistanceCutoff;

  void validate() const {
    frontier_hp.validate();
    answer_hp.validate();
    if (distance_cutoff < 2) throw Error("distance cutoff must be >= 2");
  }
};

struct OracleInputs {
  std::vector<NodeId> entities;  // E(q0)
  std::vector<NodeId> answers;   // a0
};

struct TurnRecord {
  unsigned turn = 0;
  std::string question;
  std::vector<FrontierScore> frontiers;
  RankedAnswers answers;
  double elapsed_ms = 0;
  std::size_t candidates = 0;
  std::size_t random_accesses = 0;
  std::size_t context_nodes = 0;
  std::size_t context_facts = 0;
};

// Raised when a turn cannot proceed; the session is left as it was.
class TurnFailure : public Error {
 public:
  TurnFailure(std::string code, const std::string& what) : Error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

class Session {
 public:
  Session(const KnowledgeGraph& g, const WordVectorTable& emb, SessionConfig cfg,
          std::shared_ptr<const EntityLinker> linker = nullptr)
      : g_(&g), emb_(&emb), cfg_(cfg), linker_(std::move(linker)),
        dist_(std::make_unique<DistanceCache>(g, cfg.distance_cutoff)) {
    cfg_.validate();
  }

  // Builds X^1 and records turn 0.
  const TurnRecord& start(const std::string& q0, const std::optional<OracleInputs>& oracle) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<NodeId> entities;
    std::vector<NodeId> answers;
    if (cfg_.first_turn_mode == FirstTurnMode::Oracle) {
      if (!oracle) throw Error("oracle mode requires oracle inputs");
      entities = oracle->entities;
      answers = oracle->answers;
      if (entities.empty()) throw Error("oracle inputs need at least one question entity");
      if (answers.empty()) throw Error("oracle inputs need at least one answer");
    } else {
      if (!linker_) linker_ = std::make_shared<const EntityLinker>(*g_);
      entities = linker_->link(q0, emb_);
      if (entities.empty()) throw Error("no knowledge-graph entity found in the first question");
      answers = naive_ranking_ = naive_answer(*g_, *emb_, q0, entities);
      answers.resize(1);
    }
    for (NodeId n : entities) g_->require(n);
    for (NodeId n : answers) g_->require(n);

    q0_entities_ = entities;
    ctx_ = initialize_context(*g_, entities, answers, cfg_.distance_cutoff, &notes_);
    history_.clear();

    TurnRecord rec;
    rec.turn = 0;
    rec.question = q0;
    const std::vector<NodeId>& shown = naive_ranking_.empty() ? answers : naive_ranking_;
    for (std::size_t i = 0; i < shown.size(); ++i) {
      RankedAnswer e;
      e.node = shown[i];
      e.rank = i + 1;
      e.score = std::find(answers.begin(), answers.end(), shown[i]) != answers.end() ? 1.0 : 0.0;
      rec.answers.entries.push_back(e);
      if (e.score == 1.0) rec.answers.top_group.push_back(e.node);
    }
    rec.answers.notes = notes_;
    rec.context_nodes = ctx_.node_set().size();
    rec.context_facts = ctx_.fact_set().size();
    rec.elapsed_ms = elapsed_since(t0);
    history_.push_back(std::move(rec));
    started_ = true;
    return history_.back();
  }

  const TurnRecord& ask(const std::string& question) {
    if (!started_) throw Error("session not started");
    const auto t0 = std::chrono::steady_clock::now();
    const unsigned t = ctx_.turn();
    FrontierSelection sel;
    try {
      sel = select_frontiers(*g_, *emb_, ctx_, *dist_, tokenize(question), cfg_.frontier_hp,
                             cfg_.turn_weight_mode);
    } catch (const UnexpandableContext& e) {
      throw TurnFailure("unexpandable_context", e.what());
    }
    std::vector<NodeId> ids;
    for (const FrontierScore& f : sel.frontiers) ids.push_back(f.node);
    ContextGraph plus = expand(ctx_, *g_, ids);
    RankedAnswers ranked = rank_answers(*g_, plus, sel.frontiers, cfg_.answer_hp, *dist_,
                                        cfg_.turn_weight_mode);
    if (ranked.empty()) {
      throw TurnFailure("no_answer_candidates",
                        "the expanded context holds no entity or literal that could answer");
    }
    for (NodeId a : ranked.top_group) plus.register_qa({a, QaRole::Answer, t});
    plus.set_turn(t + 1);

    TurnRecord rec;
    rec.turn = t;
    rec.question = question;
    rec.frontiers = sel.frontiers;
    rec.answers = std::move(ranked);
    rec.candidates = sel.candidates.size();
    rec.random_accesses = sel.stats.random_accesses;
    rec.context_nodes = plus.node_set().size();
    rec.context_facts = plus.fact_set().size();

    ctx_ = std::move(plus);
    last_selection_ = std::move(sel);
    rec.elapsed_ms = elapsed_since(t0);
    history_.push_back(std::move(rec));
    return history_.back();
  }

  const KnowledgeGraph& graph() const { return *g_; }
  const SessionConfig& config() const { return cfg_; }
  // Applies to the next ask; the distance cutoff is fixed per session.
  void set_config(SessionConfig cfg) {
    cfg.validate();
    cfg.distance_cutoff = cfg_.distance_cutoff;
    cfg_ = cfg;
  }
  const ContextGraph& context() const { return ctx_; }
  const std::vector<TurnRecord>& history() const { return history_; }
  const std::vector<NodeId>& q0_entities() const { return q0_entities_; }
  const std::optional<FrontierSelection>& last_selection() const { return last_selection_; }
  bool started() const { return started_; }

 private:
  static double elapsed_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }

  const KnowledgeGraph* g_;
  const WordVectorTable* emb_;
  SessionConfig cfg_;
  std::shared_ptr<const EntityLinker> linker_;
  std::unique_ptr<DistanceCache> dist_;
  ContextGraph ctx_;
  std::vector<TurnRecord> history_;
  std::vector<NodeId> q0_entities_;
  std::vector<NodeId> naive_ranking_;
  std::vector<std::string> notes_;
  std::optional<FrontierSelection> last_selection_;
  bool started_ = false;
};

inline Session start_session(const KnowledgeGraph& g, const WordVectorTable& emb,
                             const SessionConfig& cfg, const std::string& q0,
                             const std::optional<OracleInputs>& oracle,
                             std::shared_ptr<const EntityLinker> linker = nullptr) {
  Session s(g, emb, cfg, std::move(linker));
  s.start(q0, oracle);
  return s;
}

inline std::vector<TurnRecord> run_conversation(const KnowledgeGraph& g, const WordVectorTable& emb,
                                                const SessionConfig& cfg, const std::string& q0,
                                                const std::optional<OracleInputs>& oracle,
                                                const std::vector<std::string>& follow_ups) {
  Session s = start_session(g, emb, cfg, q0, oracle);
  for (const std::string& q : follow_ups) s.ask(q);
  return s.history();
}

}  // namespace convex
