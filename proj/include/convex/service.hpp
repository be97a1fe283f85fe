#pragma once

// In-memory session store behind a small JSON request router. Transport is
// bound separately (see service_http.hpp) so the router can be driven
// directly.

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "convex/engine.hpp"
#include "convex/eval.hpp"
#include "convex/json_io.hpp"

namespace convex {

struct ServiceResponse {
  int status = 200;
  json body;
};

inline ServiceResponse error_response(int status, std::string code, const std::string& message) {
  return {status, json{{"code", std::move(code)}, {"message", message}}};
}

// Applies the optional overrides {r, k, hf1, hf2, hf3, ha1, turn_weights}.
inline SessionConfig apply_overrides(SessionConfig cfg, const json& j) {
  if (!j.is_object()) throw Error("config must be an object");
  if (j.contains("r")) cfg.frontier_hp.r = j.at("r").get<unsigned>();
  if (j.contains("k")) cfg.frontier_hp.k = j.at("k").get<unsigned>();
  if (j.contains("hf1")) cfg.frontier_hp.h1 = j.at("hf1").get<double>();
  if (j.contains("hf2")) cfg.frontier_hp.h2 = j.at("hf2").get<double>();
  if (j.contains("hf3")) cfg.frontier_hp.h3 = j.at("hf3").get<double>();
  if (j.contains("ha1")) {
    cfg.answer_hp.h1a = j.at("ha1").get<double>();
    cfg.answer_hp.h2a = 1.0 - cfg.answer_hp.h1a;
  }
  if (j.contains("turn_weights")) {
    const auto tw = j.at("turn_weights").get<std::string>();
    if (tw == "normalized") cfg.turn_weight_mode = TurnWeightMode::Normalized;
    else if (tw == "literal") cfg.turn_weight_mode = TurnWeightMode::Literal;
    else throw Error("turn_weights must be 'normalized' or 'literal'");
  }
  cfg.validate();
  return cfg;
}

class SessionService {
 public:
  using Clock = std::chrono::steady_clock;

  SessionService(const KnowledgeGraph& g, const WordVectorTable& emb, SessionConfig defaults,
                 std::chrono::seconds idle_ttl = std::chrono::minutes(30),
                 std::size_t snapshot_cap = kDefaultSnapshotCap)
      : g_(g), emb_(emb), defaults_(defaults), ttl_(idle_ttl), cap_(snapshot_cap),
        linker_(std::make_shared<const EntityLinker>(g)), rng_(std::random_device{}()) {
    defaults_.validate();
  }

  ServiceResponse handle(const std::string& method, const std::string& target, const std::string& body) {
    evict_idle(Clock::now());
    const std::string path = target.substr(0, target.find('?'));
    std::vector<std::string> parts;
    for (std::size_t pos = 1; pos <= path.size();) {
      const std::size_t next = path.find('/', pos);
      const std::string seg = path.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
      if (!seg.empty()) parts.push_back(seg);
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    try {
      if (parts.size() == 1 && parts[0] == "healthz") {
        if (method != "GET") return not_allowed();
        return {200, json{{"status", "ok"},
                          {"nodes", g_.num_nodes()},
                          {"facts", g_.num_facts()},
                          {"vocabulary", emb_.size()},
                          {"sessions", session_count()}}};
      }
      if (parts.empty() || parts[0] != "sessions") return error_response(404, "not_found", "no route for " + path);
      if (parts.size() == 1) {
        if (method != "POST") return not_allowed();
        return create(parse_body(body));
      }
      auto entry = find(parts[1]);
      if (!entry) return error_response(404, "unknown_session", "no session '" + parts[1] + "'");
      if (parts.size() == 2) {
        if (method != "DELETE") return not_allowed();
        std::lock_guard lock(mu_);
        sessions_.erase(parts[1]);
        return {200, json{{"deleted", parts[1]}}};
      }
      if (parts.size() != 3) return error_response(404, "not_found", "no route for " + path);
      std::lock_guard session_lock(entry->mu);
      entry->last_used = Clock::now();
      if (parts[2] == "ask") {
        if (method != "POST") return not_allowed();
        return ask(parts[1], *entry, parse_body(body));
      }
      if (parts[2] == "context") {
        if (method != "GET") return not_allowed();
        return {200, context_snapshot_json(entry->session, cap_)};
      }
      if (parts[2] == "history") {
        if (method != "GET") return not_allowed();
        return {200, json{{"session_id", parts[1]}, {"turns", history_json(entry->session)}}};
      }
      return error_response(404, "not_found", "no route for " + path);
    } catch (const BadRequest& e) {
      return error_response(400, "invalid_body", e.what());
    } catch (const json::exception& e) {
      return error_response(400, "invalid_body", e.what());
    } catch (const UnknownNode& e) {
      return error_response(400, "unknown_node", e.what());
    } catch (const Error& e) {
      return error_response(400, "invalid_request", e.what());
    }
  }

  std::size_t session_count() const {
    std::lock_guard lock(mu_);
    return sessions_.size();
  }

  void evict_idle(Clock::time_point now) {
    std::lock_guard lock(mu_);
    for (auto it = sessions_.begin(); it != sessions_.end();) {
      std::unique_lock entry_lock(it->second->mu, std::try_to_lock);
      if (entry_lock.owns_lock() && now - it->second->last_used > ttl_) {
        entry_lock.unlock();
        it = sessions_.erase(it);
      } else {
        ++it;
      }
    }
  }

 private:
  struct BadRequest : Error {
    using Error::Error;
  };

  struct Entry {
    explicit Entry(Session s) : session(std::move(s)) {}
    std::mutex mu;
    Session session;
    Clock::time_point last_used = Clock::now();
  };

  static ServiceResponse not_allowed() {
    return error_response(405, "method_not_allowed", "method not allowed for this route");
  }

  static json parse_body(const std::string& body) {
    if (body.empty()) return json::object();
    json j = json::parse(body, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) throw BadRequest("body must be a JSON object");
    return j;
  }

  // Node references: numeric node ids, external ids or labels.
  std::vector<NodeId> resolve_refs(const json& list, const char* field) const {
    if (!list.is_array()) throw BadRequest(std::string(field) + " must be a list");
    std::vector<NodeId> out;
    for (const json& item : list) {
      if (item.is_number_unsigned()) {
        g_.require(item.get<NodeId>());
        out.push_back(item.get<NodeId>());
      } else if (item.is_string()) {
        auto ids = resolve_term(g_, item.get<std::string>());
        if (ids.empty()) throw BadRequest(std::string(field) + ": unknown node '" + item.get<std::string>() + "'");
        out.insert(out.end(), ids.begin(), ids.end());
      } else {
        throw BadRequest(std::string(field) + " entries must be ids or strings");
      }
    }
    return out;
  }

  std::string new_id() {
    static const char* hex = "0123456789abcdef";
    std::string id(16, '0');
    std::lock_guard lock(mu_);
    for (char& c : id) c = hex[rng_() & 15u];
    return id;
  }

  ServiceResponse create(const json& req) {
    SessionConfig cfg = defaults_;
    const std::string mode = req.value("mode", std::string("oracle"));
    if (mode == "oracle") cfg.first_turn_mode = FirstTurnMode::Oracle;
    else if (mode == "naive") cfg.first_turn_mode = FirstTurnMode::Naive;
    else throw BadRequest("mode must be 'oracle' or 'naive'");
    if (req.contains("config")) cfg = apply_overrides(cfg, req.at("config"));
    if (!req.contains("q0") || !req.at("q0").is_string()) throw BadRequest("q0 (string) is required");
    const std::string q0 = req.at("q0").get<std::string>();
    std::optional<OracleInputs> oracle;
    if (req.contains("oracle_inputs")) {
      const json& oi = req.at("oracle_inputs");
      if (!oi.is_object()) throw BadRequest("oracle_inputs must be an object");
      oracle = OracleInputs{resolve_refs(oi.value("entities", json::array()), "entities"),
                            resolve_refs(oi.value("answers", json::array()), "answers")};
    }
    if (cfg.first_turn_mode == FirstTurnMode::Oracle && !oracle) {
      throw BadRequest("oracle mode requires oracle_inputs");
    }
    Session s(g_, emb_, cfg, linker_);
    s.start(q0, oracle);
    const std::string id = new_id();
    auto entry = std::make_shared<Entry>(std::move(s));
    json turn0 = turn_record_json(g_, entry->session.history().front());
    {
      std::lock_guard lock(mu_);
      sessions_[id] = std::move(entry);
    }
    return {201, json{{"session_id", id}, {"turn0", turn0}}};
  }

  ServiceResponse ask(const std::string& id, Entry& entry, const json& req) {
    if (!req.contains("question") || !req.at("question").is_string()) {
      throw BadRequest("question (string) is required");
    }
    if (req.contains("config")) entry.session.set_config(apply_overrides(entry.session.config(), req.at("config")));
    try {
      const TurnRecord& rec = entry.session.ask(req.at("question").get<std::string>());
      json doc = turn_record_json(g_, rec);
      doc["session_id"] = id;
      return {200, doc};
    } catch (const TurnFailure& e) {
      return {422, json{{"code", e.code()},
                        {"message", e.what()},
                        {"session_id", id},
                        {"turn", entry.session.context().turn()},
                        {"session_preserved", true}}};
    }
  }

  std::shared_ptr<Entry> find(const std::string& id) const {
    std::lock_guard lock(mu_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
  }

  const KnowledgeGraph& g_;
  const WordVectorTable& emb_;
  SessionConfig defaults_;
  std::chrono::seconds ttl_;
  std::size_t cap_;
  std::shared_ptr<const EntityLinker> linker_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::mt19937_64 rng_;
};

}  // namespace convex
